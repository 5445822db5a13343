//! The characters `ζ_⧢` (S side, words over `X`) and `ζ_⋆` (Σ side, words
//! over `Y`) expressed in local coordinates.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bases::{self, BasisId};
use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::rational::{self, Rational};
use crate::words::{self, Alphabet, Word};

use super::poly::{Monomial, Side, ZetaPoly, ZetaVar};

/// `ζ(B_v)` for the dual basis element `B_v` (`S_v` or `Σ_v`): the product
/// of `ζ(B_l)^i / i!` over the Lyndon factorization, zero when a divergent
/// generator occurs.
pub fn basis_monomial(side: Side, v: &Word) -> Result<ZetaPoly> {
    if v.alphabet() != side.alphabet() {
        return Err(Error::WrongAlphabet { expected: side.alphabet(), found: v.alphabet() });
    }
    let mut powers = Vec::new();
    let mut c = Rational::one();
    for (l, k) in words::lyndon_factorization(v) {
        let var = ZetaVar::new(side, l)?;
        if var.is_divergent() {
            return Ok(ZetaPoly::zero());
        }
        powers.push((var, k as u32));
        c *= rational::inv_factorial(k);
    }
    Ok(ZetaPoly::monomial(Monomial::from_powers(powers), c))
}

/// Words `v` of weight `n` whose basis monomial is nonzero.
pub fn convergent_words(side: Side, n: usize) -> Vec<Word> {
    words::words_of_weight(side.alphabet(), n).into_iter().filter(|v| is_convergent(side, v)).collect()
}

/// Convergent words: `x0 X* x1` over `X`, words not starting with `y1`
/// over `Y`; the empty word counts as convergent.
pub fn is_convergent(side: Side, v: &Word) -> bool {
    if v.is_empty() {
        return true;
    }
    match side {
        Side::S => v.letter(0).index() == 0 && v.letter(v.len() - 1).index() == 1,
        Side::Sigma => v.letter(0).index() != 1,
    }
}

/// `ζ` on one weight, as a sparse matrix: word `w` maps to the pairs
/// `(i, <B'_{v_i} | w> · denom)`, and
/// `ζ(w) = Σ_i <B'_{v_i} | w> · monomials[i]`.
#[derive(Debug)]
struct Coefficients {
    monomials: Vec<ZetaPoly>,
    of_word: HashMap<Word, Vec<(usize, BigInt)>>,
    denom: BigInt,
}

type TableCache = RwLock<HashMap<(Side, usize), Arc<Coefficients>>>;

fn coefficient_tables() -> &'static TableCache {
    static T: OnceLock<TableCache> = OnceLock::new();
    T.get_or_init(Default::default)
}

fn coefficients(side: Side, n: usize) -> Result<Arc<Coefficients>> {
    if let Some(t) = coefficient_tables().read().unwrap().get(&(side, n)) {
        return Ok(t.clone());
    }
    let primal = match side {
        Side::S => BasisId::p(Alphabet::X),
        Side::Sigma => BasisId::pi(),
    };
    // w = Σ_v <B'_v | w> B_v, with (B', B) = (P, S) or (Π, Σ).
    let mut monomials = Vec::new();
    let mut entries: HashMap<Word, Vec<(usize, Rational)>> = HashMap::new();
    for v in convergent_words(side, n) {
        let m = basis_monomial(side, &v)?;
        if m.is_zero() {
            continue;
        }
        let i = monomials.len();
        monomials.push(m);
        for (w, c) in bases::basis(primal, &v)?.terms() {
            entries.entry(w.clone()).or_default().push((i, c.clone()));
        }
    }
    let denom = rational::denominator_lcm(entries.values().flatten().map(|(_, c)| c));
    let of_word = entries
        .into_iter()
        .map(|(w, row)| {
            let row = row.into_iter().map(|(i, c)| (i, (c * &denom).to_integer())).collect();
            (w, row)
        })
        .collect();
    let t = Arc::new(Coefficients { monomials, of_word, denom });
    coefficient_tables().write().unwrap().insert((side, n), t.clone());
    Ok(t)
}

impl Coefficients {
    fn apply<'a>(&self, terms: impl Iterator<Item = (&'a Word, &'a Rational)> + Clone) -> ZetaPoly {
        let scale = rational::denominator_lcm(terms.clone().map(|(_, c)| c));
        let mut acc = vec![BigInt::zero(); self.monomials.len()];
        for (w, c) in terms {
            let Some(row) = self.of_word.get(w) else { continue };
            let c = (c * &scale).to_integer();
            for (i, k) in row {
                acc[*i] += &c * k;
            }
        }
        let d = &scale * &self.denom;
        let mut out = ZetaPoly::zero();
        for (m, c) in self.monomials.iter().zip(acc) {
            if !c.is_zero() {
                out.add_scaled(m, &Rational::new(c, d.clone()));
            }
        }
        out
    }
}

/// `word -> ζ(word)` for every word of weight `n` with a nonzero value.
pub fn character_table(side: Side, n: usize) -> Result<HashMap<Word, ZetaPoly>> {
    let t = coefficients(side, n)?;
    let mut table = HashMap::new();
    for w in t.of_word.keys() {
        let z = t.apply(std::iter::once((w, &Rational::one())));
        if !z.is_zero() {
            table.insert(w.clone(), z);
        }
    }
    Ok(table)
}

/// `ζ(w)` for a single word.
pub fn zeta_word(side: Side, w: &Word) -> Result<ZetaPoly> {
    if w.alphabet() != side.alphabet() {
        return Err(Error::WrongAlphabet { expected: side.alphabet(), found: w.alphabet() });
    }
    if w.is_empty() {
        return Ok(ZetaPoly::one());
    }
    Ok(coefficients(side, w.weight())?.apply(std::iter::once((w, &Rational::one()))))
}

/// The character of the given side applied to a homogeneous polynomial.
pub fn zeta_character(p: &NcPoly, side: Side) -> Result<ZetaPoly> {
    if p.alphabet() != side.alphabet() {
        return Err(Error::WrongAlphabet { expected: side.alphabet(), found: p.alphabet() });
    }
    let n = match p.homogeneous_weight()? {
        None => return Ok(ZetaPoly::zero()),
        Some(n) => n,
    };
    if n == 0 {
        return Ok(ZetaPoly::constant(p.counit()));
    }
    Ok(coefficients(side, n)?.apply(p.terms()))
}

/// The variable standing for `ζ(k)` on a side: `ζ(S_{x0^{k-1}x1})` or `ζ(Σ_{y_k})`.
pub fn single_zeta(side: Side, k: usize) -> Result<ZetaVar> {
    if k == 0 {
        return Err(Error::InvalidArgument("ζ(0) has no variable".into()));
    }
    let w = match side {
        Side::S => {
            let mut idx = vec![0u32; k - 1];
            idx.push(1);
            Word::x(&idx)?
        }
        Side::Sigma => Word::y(&[k as u32])?,
    };
    ZetaVar::new(side, w)
}

/// `B^{(m)}`, the coefficient of `y1^m` in
/// `exp(-Σ_{k≥2} ζ(k) (-y1)^k / k)`:
/// `Σ_i (-1)^{m-i} / i! Σ_{k1+…+ki=m, kj≥2} ζ(k1)…ζ(ki) / (k1…ki)`.
pub fn bprime_coeff(m: i64, side: Side) -> Result<ZetaPoly> {
    if m < 0 {
        return Err(Error::InvalidArgument(format!("B^(m) needs m >= 0, got {m}")));
    }
    let m = m as usize;
    if m == 0 {
        return Ok(ZetaPoly::one());
    }
    let mut out = ZetaPoly::zero();
    let mut parts = Vec::new();
    compositions_min2(m, &mut parts, &mut |ks: &[usize]| -> Result<()> {
        let i = ks.len();
        let sign: i64 = if (m - i).is_multiple_of(2) { 1 } else { -1 };
        let mut c = rational::int(sign) * rational::inv_factorial(i);
        let mut powers = Vec::new();
        for &k in ks {
            c /= rational::int(k as i64);
            powers.push((single_zeta(side, k)?, 1));
        }
        out.add_term(Monomial::from_powers(powers), c);
        Ok(())
    })?;
    Ok(out)
}

fn compositions_min2(rest: usize, parts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if rest == 0 {
        return f(parts);
    }
    for k in 2..=rest {
        parts.push(k);
        compositions_min2(rest - k, parts, f)?;
        parts.pop();
    }
    Ok(())
}

/// Expand `ζ(B_l)` into a combination of words over the side's alphabet.
pub fn var_expansion(v: &ZetaVar) -> Result<NcPoly> {
    match v.side() {
        Side::S => bases::basis_s(v.word()),
        Side::Sigma => bases::basis_sigma(v.word()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn sv(t: &str) -> ZetaVar {
        ZetaVar::parse(Side::Sigma, t).unwrap()
    }
    fn xv(t: &str) -> ZetaVar {
        ZetaVar::parse(Side::S, t).unwrap()
    }
    fn y(t: &str) -> Word {
        Word::parse(Alphabet::Y, t).unwrap()
    }

    #[test]
    fn character_examples() {
        assert_eq!(zeta_character(&NcPoly::word(&y("2")), Side::Sigma).unwrap(), ZetaPoly::var(sv("2")));
        assert!(zeta_character(&NcPoly::word(&y("1")), Side::Sigma).unwrap().is_zero());
        let expected = &ZetaPoly::var(sv("2,1")) - &ZetaPoly::var(sv("3")).scale(&frac(1, 2));
        assert_eq!(zeta_character(&NcPoly::word(&y("2,1")), Side::Sigma).unwrap(), expected);
    }

    #[test]
    fn basis_elements_map_to_monomials() {
        for n in 2..=5 {
            for side in [Side::S, Side::Sigma] {
                for v in words::words_of_weight(side.alphabet(), n) {
                    let dual = match side {
                        Side::S => bases::basis_s(&v).unwrap(),
                        Side::Sigma => bases::basis_sigma(&v).unwrap(),
                    };
                    assert_eq!(zeta_character(&dual, side).unwrap(), basis_monomial(side, &v).unwrap(), "{side} {v}");
                }
            }
        }
    }

    #[test]
    fn bprime_values() {
        let z = |k: usize| ZetaPoly::var(single_zeta(Side::Sigma, k).unwrap());
        assert_eq!(bprime_coeff(0, Side::Sigma).unwrap(), ZetaPoly::one());
        assert!(bprime_coeff(1, Side::Sigma).unwrap().is_zero());
        assert_eq!(bprime_coeff(2, Side::Sigma).unwrap(), z(2).scale(&frac(-1, 2)));
        assert_eq!(bprime_coeff(3, Side::Sigma).unwrap(), z(3).scale(&frac(1, 3)));
        let b4 = &z(4).scale(&frac(-1, 4)) + &z(2).pow(2).scale(&frac(1, 8));
        assert_eq!(bprime_coeff(4, Side::Sigma).unwrap(), b4);
        let b5 = &z(5).scale(&frac(1, 5)) - &z(2).mul(&z(3)).scale(&frac(1, 6));
        assert_eq!(bprime_coeff(5, Side::Sigma).unwrap(), b5);
        assert!(bprime_coeff(-1, Side::S).is_err());
        assert_eq!(bprime_coeff(2, Side::S).unwrap(), ZetaPoly::var(xv("01")).scale(&frac(-1, 2)));
    }
}
