//! Commutative polynomials in the local coordinates `ζ(S_l)` and `ζ(Σ_l)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::words::{self, Alphabet, Word};

/// Which coordinate system a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Sigma,
    S,
}

impl Side {
    pub fn alphabet(self) -> Alphabet {
        match self {
            Side::Sigma => Alphabet::Y,
            Side::S => Alphabet::X,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Sigma => Side::S,
            Side::S => Side::Sigma,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Sigma => "Sigma",
            Side::S => "S",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Sigma => "Σ",
            Side::S => "S",
        }
    }

    pub fn of_alphabet(a: Alphabet) -> Side {
        match a {
            Alphabet::Y => Side::Sigma,
            Alphabet::X => Side::S,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Sigma" | "sigma" | "SIGMA" | "Σ" => Ok(Side::Sigma),
            "S" | "s" => Ok(Side::S),
            other => Err(Error::Parse(format!("unknown side `{other}`"))),
        }
    }
}

/// `ζ(S_l)` or `ζ(Σ_l)` for a Lyndon word `l`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZetaVar {
    side: Side,
    weight: usize,
    word: Word,
}

impl ZetaVar {
    pub fn new(side: Side, word: Word) -> Result<Self> {
        if word.alphabet() != side.alphabet() {
            return Err(Error::WrongAlphabet { expected: side.alphabet(), found: word.alphabet() });
        }
        if !words::is_lyndon(&word)? {
            return Err(Error::NotLyndon(word.to_string()));
        }
        Ok(ZetaVar { side, weight: word.weight(), word })
    }

    pub fn parse(side: Side, text: &str) -> Result<Self> {
        ZetaVar::new(side, Word::parse(side.alphabet(), text)?)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Generators of weight (or length) one evaluate to zero.
    pub fn is_divergent(&self) -> bool {
        match self.side {
            Side::S => self.word.len() == 1,
            Side::Sigma => self.word.indices() == [1],
        }
    }

    pub fn pretty(&self) -> String {
        format!("ζ({}_{{{}}})", self.side.symbol(), self.word.pretty())
    }
}

impl fmt::Debug for ZetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for ZetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(ZetaVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: ZetaVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(ZetaVar, u32)>) -> Self {
        powers.retain(|(_, k)| *k > 0);
        powers.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(ZetaVar, u32)> = Vec::with_capacity(powers.len());
        for (v, k) in powers {
            match out.last_mut() {
                Some((last, e)) if *last == v => *e += k,
                _ => out.push((v, k)),
            }
        }
        Monomial(out)
    }

    pub fn powers(&self) -> &[(ZetaVar, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|(v, k)| v.weight() * *k as usize).sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| *k).sum()
    }

    /// The single variable when this monomial is one variable to the first power.
    pub fn as_var(&self) -> Option<&ZetaVar> {
        match self.0.as_slice() {
            [(v, 1)] => Some(v),
            _ => None,
        }
    }

    pub fn sides(&self) -> Vec<Side> {
        let mut s: Vec<Side> = self.0.iter().map(|(v, _)| v.side()).collect();
        s.dedup();
        s
    }

    pub fn has_divergent(&self) -> bool {
        self.0.iter().any(|(v, _)| v.is_divergent())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Monomial::from_powers(v)
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (v, k) in &self.0 {
            out.push_str(&v.pretty());
            if *k > 1 {
                out.push_str(&words::superscript(*k));
            }
        }
        out
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            f.write_str("1")
        } else {
            f.write_str(&self.pretty())
        }
    }
}

/// Polynomial over monomials in local coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZetaPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ZetaPoly {
    pub fn zero() -> Self {
        ZetaPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ZetaPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        ZetaPoly::monomial(Monomial::one(), c)
    }

    pub fn var(v: ZetaVar) -> Self {
        ZetaPoly::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = ZetaPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ZetaPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> ZetaPoly {
        let mut out = ZetaPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &ZetaPoly) -> ZetaPoly {
        let mut out = ZetaPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a.mul(b), c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ZetaPoly {
        let mut out = ZetaPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn weights(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.terms.keys().map(Monomial::weight).collect();
        w.sort();
        w.dedup();
        w
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weights().len() <= 1
    }

    /// All variables occurring in the polynomial.
    pub fn vars(&self) -> Vec<ZetaVar> {
        let mut out: Vec<ZetaVar> = self.terms.keys().flat_map(|m| m.powers().iter().map(|(v, _)| v.clone())).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Replace each variable for which `f` returns `Some` by that polynomial.
    pub fn substitute<F>(&self, mut f: F) -> ZetaPoly
    where
        F: FnMut(&ZetaVar) -> Option<ZetaPoly>,
    {
        let mut out = ZetaPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = ZetaPoly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, k) in m.powers() {
                match f(v) {
                    Some(p) => acc = acc.mul(&p.pow(*k)),
                    None => kept.push((v.clone(), *k)),
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial::from_powers(kept);
            for (a, d) in acc.terms {
                out.add_term(a.mul(&rest), d);
            }
        }
        out
    }

    /// Set divergent generators to zero.
    pub fn drop_divergent(&self) -> ZetaPoly {
        ZetaPoly {
            terms: self.terms.iter().filter(|(m, _)| !m.has_divergent()).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Evaluate with floating-point values for each variable.
    pub fn evaluate<F>(&self, mut value: F) -> Result<f64>
    where
        F: FnMut(&ZetaVar) -> Result<f64>,
    {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = rational::to_f64(c);
            for (v, k) in m.powers() {
                t *= value(v)?.powi(*k as i32);
            }
            total += t;
        }
        Ok(total)
    }

    /// Human-readable form, e.g. `(2/7)ζ(Σ_{y₂})³ − ½ζ(Σ_{y₃})²`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('−');
                }
            } else {
                out.push_str(if neg { " − " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&rational::format(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&pretty_coeff(&mag));
            }
            out.push_str(&m.pretty());
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                monomial: m
                    .powers()
                    .iter()
                    .map(|(v, k)| FactorJson {
                        side: v.side().name().to_string(),
                        word: v.word().to_string(),
                        power: *k,
                    })
                    .collect(),
                coeff: rational::format(c),
            })
            .collect()
    }

    pub fn from_json(terms: &[TermJson]) -> Result<ZetaPoly> {
        let mut out = ZetaPoly::zero();
        for t in terms {
            let mut powers = Vec::new();
            for f in &t.monomial {
                let side: Side = f.side.parse()?;
                powers.push((ZetaVar::parse(side, &f.word)?, f.power));
            }
            out.add_term(Monomial::from_powers(powers), rational::parse(&t.coeff)?);
        }
        Ok(out)
    }
}

fn pretty_coeff(c: &Rational) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    let vulgar = match (c.numer().to_string().as_str(), c.denom().to_string().as_str()) {
        ("1", "2") => Some("½"),
        ("1", "3") => Some("⅓"),
        ("2", "3") => Some("⅔"),
        ("1", "4") => Some("¼"),
        ("3", "4") => Some("¾"),
        ("1", "6") => Some("⅙"),
        ("1", "8") => Some("⅛"),
        _ => None,
    };
    match vulgar {
        Some(s) => s.to_string(),
        None => format!("({}/{})", c.numer(), c.denom()),
    }
}

impl fmt::Debug for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for ZetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl std::ops::Add for &ZetaPoly {
    type Output = ZetaPoly;
    fn add(self, rhs: &ZetaPoly) -> ZetaPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl std::ops::Sub for &ZetaPoly {
    type Output = ZetaPoly;
    fn sub(self, rhs: &ZetaPoly) -> ZetaPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub side: String,
    pub word: String,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<FactorJson>,
    pub coeff: String,
}
