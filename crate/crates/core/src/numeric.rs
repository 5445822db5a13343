//! Floating-point evaluation of convergent polyzetas by truncated nested
//! summation, used to sanity-check exact relations.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncpoly::NcPoly;
use crate::rational::{self, Rational};
use crate::words::{Alphabet, Word};
use crate::zeta::character::var_expansion;
use crate::zeta::poly::{ZetaPoly, ZetaVar};
use crate::zeta::relations::Relation;

/// `(s1, …, sr)` with `s1 >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: &[u32]) -> Result<Self> {
        match parts.first() {
            None => Err(Error::Numeric("empty composition".into())),
            Some(&s) if s < 2 => {
                Err(Error::Numeric(format!("ζ{} diverges: first part must be >= 2", fmt_parts(parts))))
            }
            _ if parts.contains(&0) => Err(Error::Numeric("composition parts must be positive".into())),
            _ => Ok(Composition(parts.to_vec())),
        }
    }

    /// From a convergent word: `y_{s1}…y_{sr}` or `x0^{s1-1}x1…x0^{sr-1}x1`.
    pub fn from_word(w: &Word) -> Result<Self> {
        let parts = match w.alphabet() {
            Alphabet::Y => w.indices(),
            Alphabet::X => {
                if w.is_empty() || w.letter(w.len() - 1).index() != 1 {
                    return Err(Error::Numeric(format!("{} does not end in x1", w.pretty())));
                }
                let mut parts = Vec::new();
                let mut run = 1;
                for l in w.letters() {
                    if l.index() == 0 {
                        run += 1;
                    } else {
                        parts.push(run);
                        run = 1;
                    }
                }
                parts
            }
        };
        Composition::new(&parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&s| s as usize).sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn to_x_word(&self) -> Word {
        let mut idx = Vec::with_capacity(self.weight());
        for &s in &self.0 {
            idx.extend(std::iter::repeat_n(0, s as usize - 1));
            idx.push(1);
        }
        Word::x(&idx).expect("valid letters")
    }

    /// The dual composition: reverse the `X` word and swap `x0`, `x1`.
    pub fn dual(&self) -> Composition {
        let idx: Vec<u32> = self.to_x_word().indices().into_iter().rev().map(|i| 1 - i).collect();
        Composition::from_word(&Word::x(&idx).expect("valid letters")).expect("dual is convergent")
    }
}

fn fmt_parts(parts: &[u32]) -> String {
    let inner: Vec<String> = parts.iter().map(u32::to_string).collect();
    format!("({})", inner.join(","))
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ{}", fmt_parts(&self.0))
    }
}

/// A truncated value with a rigorous bound on the omitted part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Approx {
    pub value: f64,
    pub error: f64,
}

/// Bound on `Σ_{n > N} n^{-s} (1 + ln n)^a / a!`, valid when the summand
/// decreases past `N`.
fn log_tail(s1: u32, a: usize, cutoff: u64) -> Result<f64> {
    let t = (cutoff as f64).ln();
    if 1.0 + t <= a as f64 / s1 as f64 {
        return Err(Error::Numeric(format!("cutoff {cutoff} too small for {a} trailing ones")));
    }
    // ∫_T^∞ e^{-ct}(1+t)^a dt = e^{-cT} Σ_j a!/(a-j)! (1+T)^{a-j} / c^{j+1}
    let c = (s1 - 1) as f64;
    let mut sum = 0.0;
    let mut falling = 1.0;
    for j in 0..=a {
        sum += falling * (1.0 + t).powi((a - j) as i32) / c.powi(j as i32 + 1);
        falling *= (a - j) as f64;
    }
    let fact: f64 = (2..=a).map(|j| j as f64).product();
    Ok((-c * t).exp() * sum / fact)
}

/// Bound on the terms with `n1 > cutoff`. For fixed `n1 = n` the inner sum
/// over `n > n2 > … > nr` is at most `H_{n-1}^a / a! · ∏ ζ(s_i)`, with `a`
/// the number of inner parts equal to one and the product over the others;
/// `H_{n-1} <= 1 + ln n` and `ζ(s) <= 1 + 1/(s-1)`.
fn tail_bound(parts: &[u32], cutoff: u64) -> Result<f64> {
    let inner = &parts[1..];
    let ones = inner.iter().filter(|&&s| s == 1).count();
    let rest: f64 = inner.iter().filter(|&&s| s > 1).map(|&s| 1.0 + 1.0 / (s - 1) as f64).product();
    Ok(log_tail(parts[0], ones, cutoff)? * rest)
}

/// `Σ_{cutoff >= n1 > … > nr >= 1} ∏ n_i^{-s_i}` and a bound on the tail.
pub fn zeta_numeric(c: &Composition, cutoff: u64) -> Result<(f64, f64)> {
    let k = c.depth();
    if cutoff < k as u64 {
        return Err(Error::Numeric(format!("cutoff {cutoff} below depth {k}")));
    }
    let tail = tail_bound(&c.0, cutoff)?;
    // acc[j] holds the sum over m >= n_j > … > n_r >= 1.
    let mut acc = vec![0.0f64; k + 1];
    acc[k] = 1.0;
    for m in 1..=cutoff {
        let x = m as f64;
        for j in 0..k {
            acc[j] += acc[j + 1] / x.powi(c.0[j] as i32);
        }
    }
    Ok((acc[0], tail))
}

/// Evaluate through whichever of `c` and its dual has the smaller tail.
pub fn zeta_numeric_best(c: &Composition, cutoff: u64) -> Result<Approx> {
    let d = c.dual();
    let tc = tail_bound(&c.0, cutoff).unwrap_or(f64::INFINITY);
    let td = tail_bound(&d.0, cutoff).unwrap_or(f64::INFINITY);
    let pick = if td < tc { &d } else { c };
    let (value, error) = zeta_numeric(pick, cutoff)?;
    Ok(Approx { value, error })
}

fn x_word(idx: &[u32]) -> Word {
    Word::x(idx).expect("valid letters")
}

/// Rewrite an `X` word as a combination of convergent words with the same
/// value under the shuffle character sending `x0`, `x1` to 0.
pub fn regularize_shuffle(w: &Word) -> Result<NcPoly> {
    if w.alphabet() != Alphabet::X {
        return Err(Error::WrongAlphabet { expected: Alphabet::X, found: w.alphabet() });
    }
    let idx = w.indices();
    if idx.is_empty() {
        return Ok(NcPoly::one(Alphabet::X));
    }
    let lead = idx.iter().take_while(|&&i| i == 1).count();
    if lead == idx.len() {
        return Ok(NcPoly::zero(Alphabet::X));
    }
    if lead > 0 {
        // x1^k x0 v -> (-1)^k x0 (x1^k ⧢ v)
        let ones = NcPoly::word(&x_word(&idx[..lead]));
        let rest = NcPoly::word(&x_word(&idx[lead + 1..]));
        let body = NcPoly::word(&x_word(&[0])).concat(&ones.shuffle(&rest)?)?;
        let sign = if lead % 2 == 0 { rational::one() } else { -rational::one() };
        let mut out = NcPoly::zero(Alphabet::X);
        for (u, c) in body.terms() {
            out.add_scaled(&regularize_shuffle(u)?, &(c * &sign));
        }
        return Ok(out);
    }
    let trail = idx.iter().rev().take_while(|&&i| i == 0).count();
    if trail == idx.len() {
        return Ok(NcPoly::zero(Alphabet::X));
    }
    if trail == 0 {
        return Ok(NcPoly::word(w));
    }
    // u x1 x0^k -> (-1)^k (u ⧢ x0^k) x1
    let cut = idx.len() - trail;
    let zeros = NcPoly::word(&x_word(&idx[cut..]));
    let head = NcPoly::word(&x_word(&idx[..cut - 1]));
    let body = head.shuffle(&zeros)?.concat(&NcPoly::word(&x_word(&[1])))?;
    let sign = if trail % 2 == 0 { rational::one() } else { -rational::one() };
    Ok(body.scale(&sign))
}

/// Rewrite a `Y` word as a combination of convergent words with the same
/// value under the stuffle character sending `y1` to 0.
pub fn regularize_stuffle(w: &Word) -> Result<NcPoly> {
    if w.alphabet() != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: w.alphabet() });
    }
    let mut memo = HashMap::new();
    reg_stuffle(&w.indices(), &mut memo)
}

fn reg_stuffle(idx: &[u32], memo: &mut HashMap<Vec<u32>, NcPoly>) -> Result<NcPoly> {
    if let Some(p) = memo.get(idx) {
        return Ok(p.clone());
    }
    let k = idx.iter().take_while(|&&i| i == 1).count();
    if k == 0 {
        return Ok(NcPoly::word(&Word::y(idx)?));
    }
    // 0 = ζ(y1 ⋆ y1^{k-1} v); the k insertions of y1 into the leading
    // block give y1^k v, every other term has a shorter leading block.
    let u = &idx[1..];
    let mut others: Vec<Vec<u32>> = Vec::new();
    for i in k..=u.len() {
        let mut t = u[..i].to_vec();
        t.push(1);
        t.extend_from_slice(&u[i..]);
        others.push(t);
    }
    for i in 0..u.len() {
        let mut t = u.to_vec();
        t[i] += 1;
        others.push(t);
    }
    let mut out = NcPoly::zero(Alphabet::Y);
    let c = -Rational::one() / rational::int(k as i64);
    for t in others {
        out.add_scaled(&reg_stuffle(&t, memo)?, &c);
    }
    memo.insert(idx.to_vec(), out.clone());
    Ok(out)
}

/// Numeric value of a polynomial over convergent words after regularization.
pub fn poly_numeric(p: &NcPoly, cutoff: u64, cache: &mut HashMap<Composition, Approx>) -> Result<Approx> {
    let mut value = 0.0;
    let mut error = 0.0;
    for (w, c) in p.terms() {
        let reg = match w.alphabet() {
            Alphabet::X => regularize_shuffle(w)?,
            Alphabet::Y => regularize_stuffle(w)?,
        };
        let c = rational::to_f64(c);
        for (u, d) in reg.terms() {
            let coeff = c * rational::to_f64(d);
            if u.is_empty() {
                value += coeff;
                continue;
            }
            let comp = Composition::from_word(u)?;
            let a = match cache.get(&comp) {
                Some(a) => *a,
                None => {
                    let a = zeta_numeric_best(&comp, cutoff)?;
                    cache.insert(comp, a);
                    a
                }
            };
            value += coeff * a.value;
            error += coeff.abs() * a.error;
        }
    }
    Ok(Approx { value, error })
}

/// Numeric value of `ζ(S_l)` or `ζ(Σ_l)`.
pub fn var_numeric(v: &ZetaVar, cutoff: u64, cache: &mut HashMap<Composition, Approx>) -> Result<Approx> {
    if v.is_divergent() {
        return Ok(Approx { value: 0.0, error: 0.0 });
    }
    poly_numeric(&var_expansion(v)?, cutoff, cache)
}

/// Outcome of evaluating a relation numerically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericCheck {
    pub value: f64,
    pub error_bound: f64,
    /// Largest magnitude of a single term.
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Evaluate `p` and compare `|p|` with `tol` times its largest term.
pub fn check_poly_numeric(p: &ZetaPoly, cutoff: u64, tol: f64) -> Result<NumericCheck> {
    let mut cache = HashMap::new();
    let mut values: HashMap<ZetaVar, Approx> = HashMap::new();
    for v in p.vars() {
        let a = var_numeric(&v, cutoff, &mut cache)?;
        values.insert(v, a);
    }
    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut scale: f64 = 0.0;
    for (m, c) in p.terms() {
        let c = rational::to_f64(c);
        let mut prod = 1.0;
        let mut upper = 1.0;
        for (v, e) in m.powers() {
            let a = values[v];
            prod *= a.value.powi(*e as i32);
            upper *= (a.value.abs() + a.error).powi(*e as i32);
        }
        value += c * prod;
        error_bound += c.abs() * (upper - prod.abs());
        scale = scale.max((c * prod).abs());
    }
    if error_bound > tol * scale {
        return Err(Error::Numeric(format!(
            "cutoff {cutoff} too small: truncation error {error_bound:.3e} exceeds tolerance {:.3e}; increase the cutoff",
            tol * scale
        )));
    }
    Ok(NumericCheck { value, error_bound, scale, tol, pass: value.abs() <= tol * scale })
}

/// Does the relation vanish numerically to relative tolerance `tol`?
pub fn check_relation_numeric(rel: &Relation, cutoff: u64, tol: f64) -> Result<bool> {
    Ok(check_poly_numeric(&rel.poly, cutoff, tol)?.pass)
}
