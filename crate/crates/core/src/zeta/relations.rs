//! Homogeneous polynomial relations among local coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bases;
use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::rational::{self, Rational};
use crate::words::{self, Alphabet, Word};

use super::character::{basis_monomial, bprime_coeff, zeta_character};
use super::poly::{Side, TermJson, ZetaPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    BridgePi,
    BridgeP,
    DoubleExpression,
    LemmaProduct,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::BridgePi => "bridge_Pi",
            Generator::BridgeP => "bridge_P",
            Generator::DoubleExpression => "double_expression",
            Generator::LemmaProduct => "lemma_product",
        }
    }
}

/// `poly = 0`, with the word and case that produced it.
#[derive(Clone, PartialEq, Eq)]
pub struct Relation {
    pub poly: ZetaPoly,
    pub weight: usize,
    pub generator: Generator,
    pub word: Word,
    pub case: &'static str,
}

impl Relation {
    pub fn provenance(&self) -> String {
        format!("{}:{}", self.generator.name(), self.word.pretty())
    }

    pub fn to_json(&self) -> RelationJson {
        RelationJson {
            weight: self.weight,
            provenance: self.provenance(),
            case: self.case.to_string(),
            poly: self.poly.to_json(),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ({})] {} = 0", self.provenance(), self.case, self.poly.pretty())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub weight: usize,
    pub provenance: String,
    pub case: String,
    pub poly: Vec<TermJson>,
}

fn emit(out: &mut Vec<Relation>, poly: ZetaPoly, n: usize, generator: Generator, word: &Word, case: &'static str) {
    if poly.is_zero() {
        return;
    }
    out.push(Relation { poly, weight: n, generator, word: word.clone(), case });
}

fn check_weight(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("relations need weight >= 2, got {n}")));
    }
    Ok(())
}

fn leading_count(w: &Word, index: u32) -> usize {
    w.letters().take_while(|l| l.index() == index).count()
}

fn sigma_x(v: &Word) -> Result<NcPoly> {
    bases::basis_sigma(v)?.to_x()
}

fn s_y(u: &Word) -> Result<NcPoly> {
    bases::basis_s(u)?.to_y()
}

/// Identification of coefficients in the `Π` coordinates, one relation per
/// `Y`-word `v` of weight `n`:
/// `ζ(Σ_v) = ζ_⧢(π_X Σ_v)` when `v` does not start with `y1`, and
/// `ζ_⧢(π_X Σ_v) + Σ_{m=2}^{k} B^{(m)} ζ_⧢(π_X Σ_{y1^{k-m} w}) = 0` for `v = y1^k w`.
pub fn relations_bridge_pi(n: usize) -> Result<Vec<Relation>> {
    check_weight(n)?;
    let mut out = Vec::new();
    for v in words::words_of_weight(Alphabet::Y, n) {
        let k = leading_count(&v, 1);
        if k == 0 {
            let lhs = basis_monomial(Side::Sigma, &v)?;
            let rhs = zeta_character(&sigma_x(&v)?, Side::S)?;
            emit(&mut out, &lhs - &rhs, n, Generator::BridgePi, &v, "i");
            continue;
        }
        let mut rel = zeta_character(&sigma_x(&v)?, Side::S)?;
        for m in 2..=k {
            let tail = v.suffix(m);
            let z = zeta_character(&sigma_x(&tail)?, Side::S)?;
            rel.add_scaled(&bprime_coeff(m as i64, Side::S)?.mul(&z), &rational::one());
        }
        emit(&mut out, rel, n, Generator::BridgePi, &v, "ii");
    }
    Ok(out)
}

/// Identification of coefficients in the `P` coordinates, one relation per
/// `X`-word `u` of length `n` ending in `x1`:
/// `ζ(S_u) = ζ_⋆(π_Y S_u)` for `u` starting with `x0`,
/// `ζ_⋆(π_Y S_u) = 0` for `u ∈ x1 x0 X*`, and
/// `B^{(k)} ζ(S_w) = ζ_⋆(π_Y S_u)` for `u = x1^k w`, `k ≥ 2`.
pub fn relations_bridge_p(n: usize) -> Result<Vec<Relation>> {
    check_weight(n)?;
    let mut out = Vec::new();
    for u in words::words_of_weight(Alphabet::X, n) {
        if u.letter(n - 1).index() != 1 {
            continue;
        }
        let rhs = zeta_character(&s_y(&u)?, Side::Sigma)?;
        match leading_count(&u, 1) {
            0 => {
                let lhs = basis_monomial(Side::S, &u)?;
                emit(&mut out, &lhs - &rhs, n, Generator::BridgeP, &u, "i");
            }
            1 => emit(&mut out, rhs, n, Generator::BridgeP, &u, "ii"),
            k => {
                let lhs = bprime_coeff(k as i64, Side::S)?.mul(&basis_monomial(Side::S, &u.suffix(k))?);
                emit(&mut out, &lhs - &rhs, n, Generator::BridgeP, &u, "iii");
            }
        }
    }
    Ok(out)
}

/// Stuffle-side and shuffle-side double expressions of weight `n`.
pub fn relations_double_expression(n: usize) -> Result<Vec<Relation>> {
    let mut out = relations_double_expression_side(n, Side::Sigma)?;
    out.extend(relations_double_expression_side(n, Side::S)?);
    Ok(out)
}

/// Double expressions whose relation lives on one side.
///
/// For the Σ side the generating words are `X`-words in `x0X*x1 ∪ x1x0X*x1`
/// and each relation is `ζ_⋆(𝒫) = 0` with `𝒫` a stuffle product of `π_Y S`
/// images minus the `π_Y` image of the matching shuffle product. The S side
/// mirrors this with `Y`-words outside `y1²Y*`, `π_X Σ` images and
/// `ζ_⧢`.
pub fn relations_double_expression_side(n: usize, side: Side) -> Result<Vec<Relation>> {
    check_weight(n)?;
    match side {
        Side::Sigma => double_expression_sigma(n),
        Side::S => double_expression_s(n),
    }
}

fn double_expression_sigma(n: usize) -> Result<Vec<Relation>> {
    let x1 = NcPoly::word(&Word::x(&[1])?);
    let y1 = NcPoly::word(&Word::y(&[1])?);
    let mut out = Vec::new();
    for w in words::words_of_weight(Alphabet::X, n) {
        if w.letter(n - 1).index() != 1 {
            continue;
        }
        let (p, case) = match leading_count(&w, 1) {
            0 if words::is_lyndon(&w)? => {
                let (l1, l2) = words::standard_factorization(&w)?;
                if l1.len() == 1 {
                    // S_{x0} is annihilated by π_Y while ζ(x0 ⧢ S_{l2}) is not
                    // captured by its image, so no identity is available.
                    continue;
                }
                let stuffle = s_y(&l1)?.stuffle(&s_y(&l2)?)?;
                let shuffle = bases::basis_s(&l1)?.shuffle(&bases::basis_s(&l2)?)?.to_y()?;
                (&stuffle - &shuffle, "lyndon")
            }
            0 => {
                let mut stuffle = NcPoly::one(Alphabet::Y);
                for (l, k) in words::lyndon_factorization(&w) {
                    let f = s_y(&l)?.power(k, crate::ncpoly::Product::Stuffle)?;
                    stuffle = stuffle.stuffle(&f.scale(&rational::inv_factorial(k)))?;
                }
                (&stuffle - &s_y(&w)?, "product")
            }
            1 => {
                let w1 = w.suffix(1);
                let stuffle = y1.stuffle(&s_y(&w1)?)?;
                let shuffle = x1.shuffle(&bases::basis_s(&w1)?)?.to_y()?;
                (&stuffle - &shuffle, "x1-prefix")
            }
            _ => continue,
        };
        let rel = zeta_character(&p, Side::Sigma)?;
        emit(&mut out, rel, n, Generator::DoubleExpression, &w, case);
    }
    Ok(out)
}

fn double_expression_s(n: usize) -> Result<Vec<Relation>> {
    let x1 = NcPoly::word(&Word::x(&[1])?);
    let y1 = NcPoly::word(&Word::y(&[1])?);
    let mut out = Vec::new();
    for w in words::words_of_weight(Alphabet::Y, n) {
        let (p, case) = match leading_count(&w, 1) {
            0 if words::is_lyndon(&w)? => {
                if w.len() == 1 {
                    continue;
                }
                let (l1, l2) = words::standard_factorization(&w)?;
                let shuffle = sigma_x(&l1)?.shuffle(&sigma_x(&l2)?)?;
                let stuffle = bases::basis_sigma(&l1)?.stuffle(&bases::basis_sigma(&l2)?)?.to_x()?;
                (&shuffle - &stuffle, "lyndon")
            }
            0 => {
                let mut shuffle = NcPoly::one(Alphabet::X);
                for (l, k) in words::lyndon_factorization(&w) {
                    let f = sigma_x(&l)?.power(k, crate::ncpoly::Product::Shuffle)?;
                    shuffle = shuffle.shuffle(&f.scale(&rational::inv_factorial(k)))?;
                }
                (&shuffle - &sigma_x(&w)?, "product")
            }
            1 => {
                let w1 = w.suffix(1);
                let shuffle = x1.shuffle(&sigma_x(&w1)?)?;
                let stuffle = y1.stuffle(&bases::basis_sigma(&w1)?)?.to_x()?;
                (&shuffle - &stuffle, "y1-prefix")
            }
            _ => continue,
        };
        let rel = zeta_character(&p, Side::S)?;
        emit(&mut out, rel, n, Generator::DoubleExpression, &w, case);
    }
    Ok(out)
}

/// `ζ(S_{l1}) ζ(S_{l2}) = ζ_⋆(π_Y S_{l1} ⋆ π_Y S_{l2})` for convergent Lyndon
/// `X`-words, written as a relation mixing both coordinate systems.
pub fn lemma_product(l1: &Word, l2: &Word) -> Result<Relation> {
    for l in [l1, l2] {
        if l.alphabet() != Alphabet::X || !words::is_lyndon(l)? || l.len() < 2 {
            return Err(Error::InvalidArgument(format!("`{l}` is not a convergent Lyndon X-word")));
        }
    }
    let lhs = basis_monomial(Side::S, l1)?.mul(&basis_monomial(Side::S, l2)?);
    let rhs = zeta_character(&s_y(l1)?.stuffle(&s_y(l2)?)?, Side::Sigma)?;
    Ok(Relation {
        poly: &lhs - &rhs,
        weight: l1.weight() + l2.weight(),
        generator: Generator::LemmaProduct,
        word: l1.concat(l2),
        case: "product",
    })
}

/// Every cross-coordinate product relation of weight `n`.
pub fn relations_lemma_product(n: usize) -> Result<Vec<Relation>> {
    check_weight(n)?;
    let mut out = Vec::new();
    for a in 2..=n / 2 {
        let left = words::lyndon_words_of_weight(Alphabet::X, a);
        let right = words::lyndon_words_of_weight(Alphabet::X, n - a);
        for l1 in left.iter().filter(|l| l.len() > 1) {
            for l2 in right.iter().filter(|l| l.len() > 1 && (a < n - a || *l >= l1)) {
                let rel = lemma_product(l1, l2)?;
                if !rel.poly.is_zero() {
                    out.push(rel);
                }
            }
        }
    }
    Ok(out)
}

/// Which generators feed the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationSet {
    /// The bridge identifications on the Π and P sides.
    Bridge,
    /// Double expressions only.
    DoubleExpression,
    /// Both of the above plus the cross-coordinate product relations.
    All,
}

impl RelationSet {
    pub fn name(self) -> &'static str {
        match self {
            RelationSet::Bridge => "bridge",
            RelationSet::DoubleExpression => "double-expression",
            RelationSet::All => "all",
        }
    }
}

impl std::str::FromStr for RelationSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [RelationSet::Bridge, RelationSet::DoubleExpression, RelationSet::All]
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation set `{s}`")))
    }
}

/// All relations of weight `n` from the chosen generators.
pub fn relations_of_weight(n: usize, set: RelationSet) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    if matches!(set, RelationSet::Bridge | RelationSet::All) {
        out.extend(relations_bridge_pi(n)?);
        out.extend(relations_bridge_p(n)?);
    }
    if matches!(set, RelationSet::DoubleExpression | RelationSet::All) {
        out.extend(relations_double_expression(n)?);
    }
    if set == RelationSet::All {
        out.extend(relations_lemma_product(n)?);
    }
    Ok(out)
}

/// Relations of every weight in `2..=max_weight`.
pub fn relations_up_to(max_weight: usize, set: RelationSet) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for n in 2..=max_weight {
        out.extend(relations_of_weight(n, set)?);
    }
    Ok(out)
}

/// Scale so that the first coefficient is one, for comparisons up to a factor.
pub fn normalized(p: &ZetaPoly) -> ZetaPoly {
    match p.terms().next() {
        None => ZetaPoly::zero(),
        Some((_, c)) => {
            let inv: Rational = rational::one() / c;
            p.scale(&inv)
        }
    }
}
