//! Sparse noncommutative polynomials with exact rational coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::words::{self, encode, Alphabet, Word};

/// Finite linear combination of words over one alphabet. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Word, Rational>,
}

impl NcPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        NcPoly { alphabet, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: Alphabet) -> Self {
        NcPoly::word(&Word::empty(alphabet))
    }

    pub fn word(w: &Word) -> Self {
        NcPoly::term(w.clone(), rational::one())
    }

    pub fn term(w: Word, c: Rational) -> Self {
        let mut p = NcPoly::zero(w.alphabet());
        p.add_term(w, c);
        p
    }

    /// Build from `(word, coeff)` pairs; all words must share `alphabet`.
    pub fn from_terms<I>(alphabet: Alphabet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut p = NcPoly::zero(alphabet);
        for (w, c) in terms {
            if w.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch { left: alphabet, right: w.alphabet() });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rational)> + Clone {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Rational> {
        self.terms
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Counit: coefficient of the empty word.
    pub fn counit(&self) -> Rational {
        self.coeff(&Word::empty(self.alphabet))
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        debug_assert_eq!(w.alphabet(), self.alphabet);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add_scaled(&mut self, other: &NcPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.alphabet);
        }
        NcPoly { alphabet: self.alphabet, terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect() }
    }

    /// Least word of the support.
    pub fn min_word(&self) -> Option<&Word> {
        self.terms.keys().next()
    }

    /// Greatest word of the support.
    pub fn max_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    /// Distinct weights present in the support.
    pub fn weights(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Word::weight).collect()
    }

    /// The common weight of all terms; `None` for the zero polynomial.
    pub fn homogeneous_weight(&self) -> Result<Option<usize>> {
        let ws = self.weights();
        match ws.len() {
            0 => Ok(None),
            1 => Ok(ws.into_iter().next()),
            _ => Err(Error::InvalidArgument(format!(
                "polynomial is not homogeneous (weights {:?})",
                ws.into_iter().collect::<Vec<_>>()
            ))),
        }
    }

    pub fn homogeneous_part(&self, weight: usize) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Truncate to weight `<= max_weight`.
    pub fn truncate(&self, max_weight: usize) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() <= max_weight)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &NcPoly) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { left: self.alphabet, right: other.alphabet });
        }
        Ok(())
    }

    /// Concatenation product.
    pub fn concat(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_same(other)?;
        let mut acc: HashMap<Word, Rational> = HashMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                *acc.entry(u.concat(v)).or_insert_with(Rational::zero) += a * b;
            }
        }
        Ok(NcPoly::from_map(self.alphabet, acc))
    }

    fn from_map(alphabet: Alphabet, acc: HashMap<Word, Rational>) -> NcPoly {
        NcPoly { alphabet, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    fn from_counts(alphabet: Alphabet, acc: HashMap<Vec<u8>, Rational>) -> NcPoly {
        NcPoly {
            alphabet,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Word::from_codes(alphabet, k), c))
                .collect(),
        }
    }

    /// `[p, q] = pq - qp`.
    pub fn bracket(&self, other: &NcPoly) -> Result<NcPoly> {
        Ok(&self.concat(other)? - &other.concat(self)?)
    }

    pub fn pow_concat(&self, k: usize) -> NcPoly {
        let mut out = NcPoly::one(self.alphabet);
        for _ in 0..k {
            out = out.concat(self).expect("same alphabet");
        }
        out
    }

    pub fn shuffle(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_same(other)?;
        Ok(self.bilinear(other, shuffle_codes))
    }

    pub fn stuffle(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_same(other)?;
        if self.alphabet != Alphabet::Y {
            return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: self.alphabet });
        }
        Ok(self.bilinear(other, stuffle_codes))
    }

    pub fn product(&self, other: &NcPoly, kind: Product) -> Result<NcPoly> {
        match kind {
            Product::Concat => self.concat(other),
            Product::Shuffle => self.shuffle(other),
            Product::Stuffle => self.stuffle(other),
        }
    }

    /// `p^{k}` under the given product (the unit for `k = 0`).
    pub fn power(&self, k: usize, kind: Product) -> Result<NcPoly> {
        let mut out = NcPoly::one(self.alphabet);
        for _ in 0..k {
            out = out.product(self, kind)?;
        }
        Ok(out)
    }

    fn bilinear(&self, other: &NcPoly, f: WordProduct) -> NcPoly {
        let mut acc: HashMap<Vec<u8>, Rational> = HashMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for (w, n) in f(u.codes(), v.codes()) {
                    let c = &ab * Rational::from_integer(BigInt::from(n));
                    *acc.entry(w).or_insert_with(Rational::zero) += c;
                }
            }
        }
        NcPoly::from_counts(self.alphabet, acc)
    }

    /// Project onto the other alphabet word by word (`pi_Y` or `pi_X`).
    pub fn project(&self, direction: Direction) -> Result<NcPoly> {
        let (from, to) = match direction {
            Direction::ToY => (Alphabet::X, Alphabet::Y),
            Direction::ToX => (Alphabet::Y, Alphabet::X),
        };
        if self.alphabet != from {
            return Err(Error::WrongAlphabet { expected: from, found: self.alphabet });
        }
        let mut out = NcPoly::zero(to);
        for (w, c) in &self.terms {
            if let Some(img) = words::project_word(w)? {
                out.add_term(img, c.clone());
            }
        }
        Ok(out)
    }

    pub fn to_y(&self) -> Result<NcPoly> {
        self.project(Direction::ToY)
    }

    pub fn to_x(&self) -> Result<NcPoly> {
        self.project(Direction::ToX)
    }

    /// Apply a word-indexed linear map.
    pub fn map_linear<F>(&self, target: Alphabet, mut f: F) -> Result<NcPoly>
    where
        F: FnMut(&Word) -> Result<NcPoly>,
    {
        let mut out = NcPoly::zero(target);
        for (w, c) in &self.terms {
            out.add_scaled(&f(w)?, c);
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            alphabet: self.alphabet.name().to_string(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson { word: w.to_string(), coeff: rational::format(c) })
                .collect(),
        }
    }

    pub fn from_json_value(j: &PolyJson) -> Result<NcPoly> {
        let alphabet: Alphabet = j.alphabet.parse()?;
        let mut p = NcPoly::zero(alphabet);
        for t in &j.terms {
            p.add_term(Word::parse(alphabet, &t.word)?, rational::parse(&t.coeff)?);
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<NcPoly> {
        NcPoly::from_json_value(&serde_json::from_str(text)?)
    }

    /// Human-readable sum, terms in decreasing word order.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if w.is_empty() {
                out.push_str(&rational::format(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&rational::format(&mag));
                out.push('·');
            }
            out.push_str(&w.pretty());
        }
        out
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        assert_eq!(self.alphabet, rhs.alphabet, "adding polynomials over different alphabets");
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        assert_eq!(self.alphabet, rhs.alphabet, "subtracting polynomials over different alphabets");
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&NcPoly> for NcPoly {
    fn sub_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-rational::one())
    }
}

impl Mul<&Rational> for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &Rational) -> NcPoly {
        self.scale(rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub alphabet: String,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Product {
    Concat,
    Shuffle,
    Stuffle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    ToY,
    ToX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coproduct {
    Mu,
    Shuffle,
    Stuffle,
    Deconcat,
}

/// Product of two code strings as words with multiplicities.
type WordProduct = fn(&[u8], &[u8]) -> Vec<(Vec<u8>, u64)>;

/// All interleavings of `u` and `v` with multiplicities.
pub(crate) fn shuffle_codes(u: &[u8], v: &[u8]) -> Vec<(Vec<u8>, u64)> {
    if u.is_empty() {
        return vec![(v.to_vec(), 1)];
    }
    if v.is_empty() {
        return vec![(u.to_vec(), 1)];
    }
    let (a, b) = (u.len(), v.len());
    let n = a + b;
    assert!(n < 64, "shuffle of words too long");
    let mut acc: HashMap<Vec<u8>, u64> = HashMap::new();
    // Gosper's hack over n-bit masks with exactly `a` bits set; set bits
    // mark the positions taken by `u`.
    let mut mask: u64 = (1u64 << a) - 1;
    let limit: u64 = 1u64 << n;
    while mask < limit {
        let mut w = Vec::with_capacity(n);
        let (mut i, mut j) = (0, 0);
        for pos in 0..n {
            if mask >> pos & 1 == 1 {
                w.push(u[i]);
                i += 1;
            } else {
                w.push(v[j]);
                j += 1;
            }
        }
        *acc.entry(w).or_insert(0) += 1;
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    acc.into_iter().collect()
}

/// Quasi-shuffle of two `Y`-words, codes as in [`Word`].
pub(crate) fn stuffle_codes(u: &[u8], v: &[u8]) -> Vec<(Vec<u8>, u64)> {
    let (a, b) = (u.len(), v.len());
    // table[i][j] = u[i..] * v[j..]
    let mut table: Vec<Vec<HashMap<Vec<u8>, u64>>> = vec![vec![HashMap::new(); b + 1]; a + 1];
    for i in (0..=a).rev() {
        for j in (0..=b).rev() {
            let mut cell: HashMap<Vec<u8>, u64> = HashMap::new();
            if i == a {
                cell.insert(v[j..].to_vec(), 1);
            } else if j == b {
                cell.insert(u[i..].to_vec(), 1);
            } else {
                let merged = encode(Alphabet::Y, words::decode(Alphabet::Y, u[i]) + words::decode(Alphabet::Y, v[j]));
                for (first, src) in [(u[i], &table[i + 1][j]), (v[j], &table[i][j + 1]), (merged, &table[i + 1][j + 1])]
                {
                    for (w, n) in src {
                        let mut k = Vec::with_capacity(w.len() + 1);
                        k.push(first);
                        k.extend_from_slice(w);
                        *cell.entry(k).or_insert(0) += n;
                    }
                }
            }
            table[i][j] = cell;
        }
    }
    std::mem::take(&mut table[0][0]).into_iter().collect()
}

/// Word-level shuffle as a polynomial.
pub fn shuffle_words(u: &Word, v: &Word) -> Result<NcPoly> {
    NcPoly::word(u).shuffle(&NcPoly::word(v))
}

/// Word-level stuffle as a polynomial.
pub fn stuffle_words(u: &Word, v: &Word) -> Result<NcPoly> {
    NcPoly::word(u).stuffle(&NcPoly::word(v))
}

/// Pairing `<p | q>`: words form an orthonormal family.
pub fn pairing(p: &NcPoly, q: &NcPoly) -> Result<Rational> {
    p.check_same(q)?;
    let (small, large) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    let mut acc = Rational::zero();
    for (w, c) in &small.terms {
        if let Some(d) = large.terms.get(w) {
            acc += c * d;
        }
    }
    Ok(acc)
}

/// Finite linear combination of pairs of words.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPoly {
    alphabet: Alphabet,
    terms: BTreeMap<(Word, Word), Rational>,
}

impl TensorPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        TensorPoly { alphabet, terms: BTreeMap::new() }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
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

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, u: &Word, v: &Word) -> Rational {
        self.terms.get(&(u.clone(), v.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (u, v);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `p ⊗ q`.
    pub fn tensor(p: &NcPoly, q: &NcPoly) -> Result<TensorPoly> {
        p.check_same(q)?;
        let mut out = TensorPoly::zero(p.alphabet);
        for (u, a) in &p.terms {
            for (v, b) in &q.terms {
                out.add_term(u.clone(), v.clone(), a * b);
            }
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Rational) {
        for ((u, v), d) in &other.terms {
            self.add_term(u.clone(), v.clone(), d * c);
        }
    }

    /// Componentwise concatenation `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn concat(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(self.alphabet);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                out.add_term(a.concat(c), b.concat(d), c1 * c2);
            }
        }
        out
    }

    /// `(a⊗b)(c⊗d) = (a·c)⊗(b·d)` with the given products on each side.
    pub fn mul_with(&self, other: &TensorPoly, left: Product, right: Product) -> Result<TensorPoly> {
        let mut out = TensorPoly::zero(self.alphabet);
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                let l = NcPoly::word(a).product(&NcPoly::word(c), left)?;
                let r = NcPoly::word(b).product(&NcPoly::word(d), right)?;
                let k = c1 * c2;
                for (u, cu) in l.terms() {
                    for (v, cv) in r.terms() {
                        out.add_term(u.clone(), v.clone(), &k * cu * cv);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Drop terms whose total weight exceeds `max_weight`.
    pub fn truncate(&self, max_weight: usize) -> TensorPoly {
        TensorPoly {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|((u, v), _)| u.weight() + v.weight() <= max_weight)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply linear maps on each tensor factor.
    pub fn map<F, G>(&self, mut f: F, mut g: G) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Result<NcPoly>,
        G: FnMut(&Word) -> Result<NcPoly>,
    {
        let mut out = TensorPoly::zero(self.alphabet);
        for ((u, v), c) in &self.terms {
            let t = TensorPoly::tensor(&f(u)?, &g(v)?)?;
            out.add_scaled(&t, c);
        }
        Ok(out)
    }

    /// `<self | p ⊗ q>`.
    pub fn pair_with(&self, p: &NcPoly, q: &NcPoly) -> Rational {
        let mut acc = Rational::zero();
        for ((u, v), c) in &self.terms {
            let a = p.coeff(u);
            if a.is_zero() {
                continue;
            }
            acc += c * a * q.coeff(v);
        }
        acc
    }
}

impl Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, rhs: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-rational::one());
        out
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((u, v), c)| format!("{}·{}⊗{}", rational::format(c), u.pretty(), v.pretty()))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn letter_coproduct(alphabet: Alphabet, code: u8, kind: Coproduct) -> TensorPoly {
    let e = Word::empty(alphabet);
    let l = Word::from_codes(alphabet, vec![code]);
    let mut out = TensorPoly::zero(alphabet);
    if matches!(kind, Coproduct::Shuffle | Coproduct::Stuffle) {
        out.add_term(l.clone(), e.clone(), rational::one());
        out.add_term(e, l, rational::one());
    }
    if matches!(kind, Coproduct::Mu | Coproduct::Stuffle) {
        let s = words::decode(alphabet, code);
        for i in 1..s {
            out.add_term(
                Word::from_codes(alphabet, vec![encode(alphabet, i)]),
                Word::from_codes(alphabet, vec![encode(alphabet, s - i)]),
                rational::one(),
            );
        }
    }
    out
}

/// `Δ(w)` for the requested coproduct.
pub fn coproduct(w: &Word, kind: Coproduct) -> Result<TensorPoly> {
    let alphabet = w.alphabet();
    if matches!(kind, Coproduct::Mu | Coproduct::Stuffle) && alphabet != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: alphabet });
    }
    match kind {
        Coproduct::Mu => {
            if w.len() != 1 {
                return Err(Error::InvalidArgument(format!("Δ_μ is defined on letters only, got `{w}`")));
            }
            Ok(letter_coproduct(alphabet, w.codes()[0], kind))
        }
        Coproduct::Deconcat => {
            let mut out = TensorPoly::zero(alphabet);
            for i in 0..=w.len() {
                out.add_term(w.prefix(i), w.suffix(i), rational::one());
            }
            Ok(out)
        }
        Coproduct::Shuffle | Coproduct::Stuffle => {
            let mut out = TensorPoly::zero(alphabet);
            out.add_term(Word::empty(alphabet), Word::empty(alphabet), rational::one());
            for &c in w.codes() {
                out = out.concat(&letter_coproduct(alphabet, c, kind));
            }
            Ok(out)
        }
    }
}

/// Linear extension of [`coproduct`].
pub fn coproduct_poly(p: &NcPoly, kind: Coproduct) -> Result<TensorPoly> {
    let mut out = TensorPoly::zero(p.alphabet());
    for (w, c) in p.terms() {
        out.add_scaled(&coproduct(w, kind)?, c);
    }
    Ok(out)
}

/// `Δ(p) - p⊗1 - 1⊗p`; zero exactly when `p` is primitive.
pub fn primitivity_defect(p: &NcPoly, kind: Coproduct) -> Result<TensorPoly> {
    let one = NcPoly::one(p.alphabet());
    let mut d = coproduct_poly(p, kind)?;
    d.add_scaled(&TensorPoly::tensor(p, &one)?, &-rational::one());
    d.add_scaled(&TensorPoly::tensor(&one, p)?, &-rational::one());
    Ok(d)
}

type PolyCache = RwLock<HashMap<Word, NcPoly>>;

fn pi1_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn fk_cache() -> &'static RwLock<HashMap<(usize, Word), NcPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, Word), NcPoly>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Nonempty-nonempty part of `Δ_⋆ w`.
fn reduced_stuffle_coproduct(w: &Word) -> Vec<(Word, Word, Rational)> {
    let d = coproduct(w, Coproduct::Stuffle).expect("Y-word");
    d.terms.into_iter().filter(|((a, b), _)| !a.is_empty() && !b.is_empty()).map(|((a, b), c)| (a, b, c)).collect()
}

/// `F_k(w) = Σ <w | u1⋆…⋆uk> π1(u1)…π1(uk)` over nonempty `u_i`.
fn f_k(k: usize, w: &Word) -> NcPoly {
    if k == 1 {
        return pi1_word(w);
    }
    if w.len() < k && w.weight() < k {
        return NcPoly::zero(Alphabet::Y);
    }
    let key = (k, w.clone());
    if let Some(p) = fk_cache().read().unwrap().get(&key) {
        return p.clone();
    }
    let mut out = NcPoly::zero(Alphabet::Y);
    for (a, b, c) in reduced_stuffle_coproduct(w) {
        let left = f_k(k - 1, &a);
        if left.is_zero() {
            continue;
        }
        let prod = left.concat(&pi1_word(&b)).expect("Y");
        out.add_scaled(&prod, &c);
    }
    fk_cache().write().unwrap().insert(key, out.clone());
    out
}

fn pi1_word(w: &Word) -> NcPoly {
    if w.is_empty() {
        return NcPoly::zero(Alphabet::Y);
    }
    if let Some(p) = pi1_cache().read().unwrap().get(w) {
        return p.clone();
    }
    let mut out = NcPoly::word(w);
    for k in 2..=w.weight() {
        let fk = f_k(k, w);
        out.add_scaled(&fk, &-rational::inv_factorial(k));
    }
    pi1_cache().write().unwrap().insert(w.clone(), out.clone());
    out
}

/// `π1(w)`, the Δ_⋆-primitive projection (zero on the empty word).
pub fn pi1(w: &Word) -> Result<NcPoly> {
    if w.alphabet() != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: w.alphabet() });
    }
    Ok(pi1_word(w))
}

/// Linear extension of [`pi1`].
pub fn pi1_poly(p: &NcPoly) -> Result<NcPoly> {
    p.map_linear(Alphabet::Y, pi1)
}

fn check_y(p: &NcPoly) -> Result<()> {
    if p.alphabet() != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: p.alphabet() });
    }
    Ok(())
}

/// Image of a word under the concatenation morphism `y_k -> letter_image(k)`.
fn morphism_word(w: &Word, letter_image: impl Fn(u32) -> NcPoly) -> NcPoly {
    let mut out = NcPoly::one(Alphabet::Y);
    for s in w.indices() {
        out = out.concat(&letter_image(s)).expect("Y");
    }
    out
}

/// `φ`: concatenation morphism with `φ(y_k) = π1(y_k)`.
pub fn phi(p: &NcPoly) -> Result<NcPoly> {
    check_y(p)?;
    p.map_linear(Alphabet::Y, |w| {
        Ok(morphism_word(w, |s| pi1_word(&Word::from_codes(Alphabet::Y, vec![encode(Alphabet::Y, s)]))))
    })
}

/// `φ⁻¹(y_s) = Σ_i 1/i! Σ_{s1+…+si=s} y_{s1}…y_{si}`.
pub fn phi_inv_letter(s: u32) -> NcPoly {
    let mut out = NcPoly::zero(Alphabet::Y);
    for w in words::words_of_weight(Alphabet::Y, s as usize) {
        let c = rational::inv_factorial(w.len());
        out.add_term(w, c);
    }
    out
}

/// Inverse of [`phi`].
pub fn phi_inv(p: &NcPoly) -> Result<NcPoly> {
    check_y(p)?;
    p.map_linear(Alphabet::Y, |w| Ok(morphism_word(w, phi_inv_letter)))
}

/// Adjoint of [`phi_inv`] for the pairing: splits a word into consecutive
/// nonempty blocks, merges each block of `b` letters into a single letter
/// carrying the block's weight, with coefficient `1/b!` per block.
pub fn phi_inv_adjoint(p: &NcPoly) -> Result<NcPoly> {
    check_y(p)?;
    p.map_linear(Alphabet::Y, |w| Ok(phi_inv_adjoint_word(w)))
}

fn phi_inv_adjoint_word(w: &Word) -> NcPoly {
    let idx = w.indices();
    let n = idx.len();
    let mut out = NcPoly::zero(Alphabet::Y);
    if n == 0 {
        return NcPoly::one(Alphabet::Y);
    }
    // Each of the n-1 gaps is either a cut or not.
    for cuts in 0u64..(1u64 << (n - 1)) {
        let mut codes = Vec::new();
        let mut denom = BigInt::one();
        let (mut start, mut sum) = (0usize, 0u32);
        for (i, &s) in idx.iter().enumerate() {
            sum += s;
            if i == n - 1 || cuts >> i & 1 == 1 {
                codes.push(encode(Alphabet::Y, sum));
                for f in 2..=(i + 1 - start) {
                    denom *= f;
                }
                start = i + 1;
                sum = 0;
            }
        }
        out.add_term(Word::from_codes(Alphabet::Y, codes), Rational::new(BigInt::one(), denom));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn x(s: &str) -> Word {
        Word::parse(Alphabet::X, s).unwrap()
    }
    fn y(s: &str) -> Word {
        Word::parse(Alphabet::Y, s).unwrap()
    }
    fn poly(alphabet: Alphabet, terms: &[(&str, Rational)]) -> NcPoly {
        NcPoly::from_terms(alphabet, terms.iter().map(|(w, c)| (Word::parse(alphabet, w).unwrap(), c.clone()))).unwrap()
    }
    fn one() -> Rational {
        rational::one()
    }

    #[test]
    fn shuffle_examples() {
        let p = shuffle_words(&x("1"), &x("01")).unwrap();
        assert_eq!(p, poly(Alphabet::X, &[("101", one()), ("011", frac(2, 1))]));
        let q = shuffle_words(&x("0"), &x("1")).unwrap();
        assert_eq!(q, poly(Alphabet::X, &[("01", one()), ("10", one())]));
        let w = NcPoly::word(&x("0110"));
        assert_eq!(w.shuffle(&NcPoly::one(Alphabet::X)).unwrap(), w);
    }

    #[test]
    fn stuffle_examples() {
        let p = stuffle_words(&y("1"), &y("2")).unwrap();
        assert_eq!(p, poly(Alphabet::Y, &[("1,2", one()), ("2,1", one()), ("3", one())]));
        let q = stuffle_words(&y("2"), &y("2")).unwrap();
        assert_eq!(q, poly(Alphabet::Y, &[("2,2", frac(2, 1)), ("4", one())]));
        assert!(stuffle_words(&x("0"), &x("1")).is_err());
        let w = NcPoly::word(&y("3,1"));
        assert_eq!(w.stuffle(&NcPoly::one(Alphabet::Y)).unwrap(), w);
    }

    #[test]
    fn pairing_examples() {
        let p = poly(Alphabet::X, &[("01", one()), ("10", -one())]);
        assert_eq!(pairing(&p, &NcPoly::word(&x("01"))).unwrap(), one());
        assert!(pairing(&NcPoly::word(&x("01")), &NcPoly::word(&x("10"))).unwrap().is_zero());
        assert!(pairing(&p, &NcPoly::zero(Alphabet::X)).unwrap().is_zero());
        assert!(pairing(&p, &NcPoly::zero(Alphabet::Y)).is_err());
    }

    #[test]
    fn coproduct_examples() {
        let d = coproduct(&y("2"), Coproduct::Stuffle).unwrap();
        let e = Word::empty(Alphabet::Y);
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff(&y("2"), &e), one());
        assert_eq!(d.coeff(&e, &y("2")), one());
        assert_eq!(d.coeff(&y("1"), &y("1")), one());
        assert!(coproduct(&y("1"), Coproduct::Mu).unwrap().is_zero());
        assert!(coproduct(&y("1,1"), Coproduct::Mu).is_err());
        let s = coproduct(&x("01"), Coproduct::Shuffle).unwrap();
        let ex = Word::empty(Alphabet::X);
        assert_eq!(s.len(), 4);
        for (a, b) in [(x("01"), ex.clone()), (x("0"), x("1")), (x("1"), x("0")), (ex, x("01"))] {
            assert_eq!(s.coeff(&a, &b), one());
        }
        assert_eq!(coproduct(&x("011"), Coproduct::Deconcat).unwrap().len(), 4);
    }

    #[test]
    fn pi1_examples() {
        assert_eq!(pi1(&y("1")).unwrap(), NcPoly::word(&y("1")));
        assert_eq!(pi1(&y("2")).unwrap(), poly(Alphabet::Y, &[("2", one()), ("1,1", frac(-1, 2))]));
        assert_eq!(
            pi1(&y("3")).unwrap(),
            poly(Alphabet::Y, &[("3", one()), ("1,2", frac(-1, 2)), ("2,1", frac(-1, 2)), ("1,1,1", frac(1, 3))])
        );
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&NcPoly::word(&y("2"))).unwrap(), poly(Alphabet::Y, &[("2", one()), ("1,1", frac(-1, 2))]));
        assert_eq!(phi(&NcPoly::word(&y("1,1"))).unwrap(), NcPoly::word(&y("1,1")));
        assert_eq!(
            phi(&NcPoly::word(&y("1,2"))).unwrap(),
            poly(Alphabet::Y, &[("1,2", one()), ("1,1,1", frac(-1, 2))])
        );
    }

    #[test]
    fn phi_inverse_round_trip() {
        for n in 1..=5 {
            for w in words::words_of_weight(Alphabet::Y, n) {
                let p = NcPoly::word(&w);
                assert_eq!(phi_inv(&phi(&p).unwrap()).unwrap(), p);
                assert_eq!(phi(&phi_inv(&p).unwrap()).unwrap(), p);
            }
        }
    }

    #[test]
    fn phi_inv_adjoint_is_adjoint() {
        for n in 1..=5 {
            let ws = words::words_of_weight(Alphabet::Y, n);
            for u in &ws {
                let pu = phi_inv(&NcPoly::word(u)).unwrap();
                for v in &ws {
                    let av = phi_inv_adjoint(&NcPoly::word(v)).unwrap();
                    assert_eq!(pu.coeff(v), av.coeff(u));
                }
            }
        }
    }

    #[test]
    fn projections() {
        let p = poly(Alphabet::X, &[("01", one()), ("10", -one())]);
        assert_eq!(p.to_y().unwrap(), NcPoly::word(&y("2")));
        assert_eq!(NcPoly::word(&y("2,1")).to_x().unwrap(), NcPoly::word(&x("011")));
        assert!(NcPoly::word(&x("0")).to_y().unwrap().is_zero());
        assert!(NcPoly::word(&x("0")).to_x().is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = poly(Alphabet::Y, &[("2,1", one()), ("3", frac(1, 2))]);
        let text = p.to_json();
        assert_eq!(text, r#"{"alphabet":"Y","terms":[{"word":"3","coeff":"1/2"},{"word":"2,1","coeff":"1"}]}"#);
        assert_eq!(NcPoly::from_json(&text).unwrap(), p);
    }

    #[test]
    fn homogeneity() {
        let p = poly(Alphabet::Y, &[("2,1", one()), ("2", one())]);
        assert!(p.homogeneous_weight().is_err());
        assert_eq!(p.homogeneous_part(2), NcPoly::word(&y("2")));
        assert_eq!(NcPoly::zero(Alphabet::Y).homogeneous_weight().unwrap(), None);
    }
}
