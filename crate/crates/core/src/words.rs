//! Words over the two alphabets `X = {x0, x1}` and `Y = {y1, y2, ...}`.
//!
//! Letters are stored as order codes so that the derived `Ord` on the code
//! vector is exactly the lexicographic order induced by the letter order:
//! on `X` the code of `x_i` is `i` (so `x0 < x1`), on `Y` the code of `y_s` is
//! `255 - s` (so `y1 > y2 > y3 > ...`). A proper prefix compares less than
//! any of its extensions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `y` index representable in a word.
pub const MAX_Y_INDEX: u32 = 254;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    X,
    Y,
}

impl Alphabet {
    pub fn name(self) -> &'static str {
        match self {
            Alphabet::X => "X",
            Alphabet::Y => "Y",
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Alphabet::X),
            "Y" | "y" => Ok(Alphabet::Y),
            other => Err(Error::Parse(format!("unknown alphabet `{other}`"))),
        }
    }
}

/// A single letter `x_i` (i in {0, 1}) or `y_s` (s >= 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    alphabet: Alphabet,
    index: u32,
}

impl Letter {
    pub fn x(index: u32) -> Result<Self> {
        if index > 1 {
            return Err(Error::InvalidLetter(format!("x{index}")));
        }
        Ok(Letter { alphabet: Alphabet::X, index })
    }

    pub fn y(index: u32) -> Result<Self> {
        if index == 0 || index > MAX_Y_INDEX {
            return Err(Error::InvalidLetter(format!("y{index}")));
        }
        Ok(Letter { alphabet: Alphabet::Y, index })
    }

    pub fn alphabet(self) -> Alphabet {
        self.alphabet
    }

    pub fn index(self) -> u32 {
        self.index
    }

    /// Weight of the letter: 1 for `x_i`, `s` for `y_s`.
    pub fn weight(self) -> usize {
        match self.alphabet {
            Alphabet::X => 1,
            Alphabet::Y => self.index as usize,
        }
    }

    pub(crate) fn code(self) -> u8 {
        encode(self.alphabet, self.index)
    }
}

#[inline]
pub(crate) fn encode(alphabet: Alphabet, index: u32) -> u8 {
    match alphabet {
        Alphabet::X => index as u8,
        Alphabet::Y => (255 - index) as u8,
    }
}

#[inline]
pub(crate) fn decode(alphabet: Alphabet, code: u8) -> u32 {
    match alphabet {
        Alphabet::X => code as u32,
        Alphabet::Y => 255 - code as u32,
    }
}

#[inline]
pub(crate) fn code_weight(alphabet: Alphabet, code: u8) -> usize {
    match alphabet {
        Alphabet::X => 1,
        Alphabet::Y => 255 - code as usize,
    }
}

/// A finite word over `X` or `Y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    alphabet: Alphabet,
    codes: Vec<u8>,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Self {
        Word { alphabet, codes: Vec::new() }
    }

    pub fn from_letters(alphabet: Alphabet, letters: &[Letter]) -> Result<Self> {
        let mut codes = Vec::with_capacity(letters.len());
        for l in letters {
            if l.alphabet != alphabet {
                return Err(Error::AlphabetMismatch { left: alphabet, right: l.alphabet });
            }
            codes.push(l.code());
        }
        Ok(Word { alphabet, codes })
    }

    /// Word over `X` from letter indices, e.g. `[0, 1, 1]` for `x0 x1 x1`.
    pub fn x(indices: &[u32]) -> Result<Self> {
        let letters = indices.iter().map(|&i| Letter::x(i)).collect::<Result<Vec<_>>>()?;
        Word::from_letters(Alphabet::X, &letters)
    }

    /// Word over `Y` from letter indices, e.g. `[2, 1]` for `y2 y1`.
    pub fn y(indices: &[u32]) -> Result<Self> {
        let letters = indices.iter().map(|&i| Letter::y(i)).collect::<Result<Vec<_>>>()?;
        Word::from_letters(Alphabet::Y, &letters)
    }

    pub(crate) fn from_codes(alphabet: Alphabet, codes: Vec<u8>) -> Self {
        Word { alphabet, codes }
    }

    pub(crate) fn codes(&self) -> &[u8] {
        &self.codes
    }

    /// Parse the canonical text form: `[01]*` over `X`, comma-separated
    /// positive integers over `Y` (the empty string is the unit).
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        match alphabet {
            Alphabet::X => {
                let mut codes = Vec::with_capacity(text.len());
                for ch in text.chars() {
                    match ch {
                        '0' => codes.push(0),
                        '1' => codes.push(1),
                        _ => return Err(Error::Parse(format!("invalid X-word `{text}`"))),
                    }
                }
                Ok(Word { alphabet, codes })
            }
            Alphabet::Y => {
                if text.is_empty() {
                    return Ok(Word::empty(Alphabet::Y));
                }
                let mut codes = Vec::new();
                for part in text.split(',') {
                    let valid = !part.is_empty() && part.bytes().all(|b| b.is_ascii_digit()) && !part.starts_with('0');
                    if !valid {
                        return Err(Error::Parse(format!("invalid Y-word `{text}`")));
                    }
                    let s: u32 = part.parse().map_err(|_| Error::Parse(format!("invalid Y-word `{text}`")))?;
                    codes.push(Letter::y(s)?.code());
                }
                Ok(Word { alphabet, codes })
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn letter(&self, i: usize) -> Letter {
        Letter { alphabet: self.alphabet, index: decode(self.alphabet, self.codes[i]) }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// Letter indices (`i` for `x_i`, `s` for `y_s`).
    pub fn indices(&self) -> Vec<u32> {
        self.codes.iter().map(|&c| decode(self.alphabet, c)).collect()
    }

    /// Length on `X`, sum of letter indices on `Y`.
    pub fn weight(&self) -> usize {
        self.codes.iter().map(|&c| code_weight(self.alphabet, c)).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.alphabet, other.alphabet, "concatenating words over different alphabets");
        let mut codes = Vec::with_capacity(self.len() + other.len());
        codes.extend_from_slice(&self.codes);
        codes.extend_from_slice(&other.codes);
        Word { alphabet: self.alphabet, codes }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word { alphabet: self.alphabet, codes: self.codes[..n].to_vec() }
    }

    pub fn suffix(&self, start: usize) -> Word {
        Word { alphabet: self.alphabet, codes: self.codes[start..].to_vec() }
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.alphabet == other.alphabet && self.codes.starts_with(&other.codes)
    }

    /// `w^k` by concatenation.
    pub fn pow(&self, k: usize) -> Word {
        Word { alphabet: self.alphabet, codes: self.codes.repeat(k) }
    }

    /// Human-readable form with subscripts and run-length exponents,
    /// e.g. `y₃y₁²` or `x₀²x₁`.
    pub fn pretty(&self) -> String {
        if self.is_empty() {
            return match self.alphabet {
                Alphabet::X => "1_X*".to_string(),
                Alphabet::Y => "1_Y*".to_string(),
            };
        }
        let prefix = match self.alphabet {
            Alphabet::X => 'x',
            Alphabet::Y => 'y',
        };
        let mut out = String::new();
        let mut i = 0;
        while i < self.codes.len() {
            let mut j = i;
            while j < self.codes.len() && self.codes[j] == self.codes[i] {
                j += 1;
            }
            out.push(prefix);
            out.push_str(&subscript(decode(self.alphabet, self.codes[i])));
            if j - i > 1 {
                out.push_str(&superscript((j - i) as u32));
            }
            i = j;
        }
        out
    }
}

pub(crate) fn subscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| DIGITS[c as usize - '0' as usize]).collect()
}

pub(crate) fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c as usize - '0' as usize]).collect()
}

impl fmt::Display for Word {
    /// Canonical text form (`0110`, `2,1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet {
            Alphabet::X => {
                for &c in &self.codes {
                    write!(f, "{}", c)?;
                }
                Ok(())
            }
            Alphabet::Y => {
                for (i, &c) in self.codes.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", decode(Alphabet::Y, c))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

/// Lexicographic comparison; fails when the alphabets differ.
pub fn compare(u: &Word, v: &Word) -> Result<Ordering> {
    if u.alphabet != v.alphabet {
        return Err(Error::AlphabetMismatch { left: u.alphabet, right: v.alphabet });
    }
    Ok(u.codes.cmp(&v.codes))
}

fn is_lyndon_codes(codes: &[u8]) -> bool {
    // Duval: a word is Lyndon iff its factorization is a single factor.
    let n = codes.len();
    let (mut i, mut j) = (0usize, 1usize);
    while j < n {
        match codes[i].cmp(&codes[j]) {
            Ordering::Less => {
                i = 0;
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
            Ordering::Greater => return false,
        }
    }
    i == 0
}

/// `w` is Lyndon iff it is nonempty and strictly smaller than each of its
/// proper suffixes.
pub fn is_lyndon(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(is_lyndon_codes(&w.codes))
}

/// All words of a given weight, in increasing word order.
pub fn words_of_weight(alphabet: Alphabet, weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    match alphabet {
        Alphabet::X => {
            let n = weight;
            assert!(n < 64, "X-word length too large to enumerate");
            for bits in 0u64..(1u64 << n) {
                let codes = (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
                out.push(Word::from_codes(Alphabet::X, codes));
            }
        }
        Alphabet::Y => {
            let mut current = Vec::new();
            compositions(weight, &mut current, &mut out);
            out.sort();
        }
    }
    out
}

fn compositions(remaining: usize, current: &mut Vec<u8>, out: &mut Vec<Word>) {
    if remaining == 0 {
        out.push(Word::from_codes(Alphabet::Y, current.clone()));
        return;
    }
    for s in 1..=remaining {
        current.push(encode(Alphabet::Y, s as u32));
        compositions(remaining - s, current, out);
        current.pop();
    }
}

/// All Lyndon words of weight `1..=max_weight`, sorted by weight and then by
/// the word order.
pub fn lyndon_words(alphabet: Alphabet, max_weight: usize) -> Result<Vec<Word>> {
    if max_weight == 0 {
        return Err(Error::InvalidArgument("max_weight must be at least 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=max_weight {
        out.extend(lyndon_words_of_weight(alphabet, n));
    }
    Ok(out)
}

/// Lyndon words of exactly one weight, in increasing word order.
pub fn lyndon_words_of_weight(alphabet: Alphabet, weight: usize) -> Vec<Word> {
    match alphabet {
        Alphabet::X => duval_generate(2, weight)
            .into_iter()
            .filter(|c| c.len() == weight)
            .map(|c| Word::from_codes(Alphabet::X, c))
            .collect(),
        Alphabet::Y => words_of_weight(Alphabet::Y, weight).into_iter().filter(|w| is_lyndon_codes(&w.codes)).collect(),
    }
}

/// Duval's successor procedure: all Lyndon words of length `<= n` over the
/// codes `0..k`, in increasing order.
fn duval_generate(k: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Standard factorization `l = l1 l2` of a Lyndon word of length at least
/// two: `l2` is the smallest proper suffix.
pub fn standard_factorization(l: &Word) -> Result<(Word, Word)> {
    if l.len() < 2 {
        return Err(Error::NotFactorizable(l.to_string()));
    }
    if !is_lyndon_codes(&l.codes) {
        return Err(Error::NotLyndon(l.to_string()));
    }
    let split =
        (1..l.len()).min_by(|&a, &b| l.codes[a..].cmp(&l.codes[b..])).expect("word has at least one proper suffix");
    Ok((l.prefix(split), l.suffix(split)))
}

/// Chen-Fox-Lyndon factorization `w = l1^i1 ... lk^ik` with
/// `l1 > ... > lk`, returned as `(lj, ij)` pairs.
pub fn lyndon_factorization(w: &Word) -> Vec<(Word, usize)> {
    let mut grouped: Vec<(Word, usize)> = Vec::new();
    for factor in lyndon_factors(w) {
        match grouped.last_mut() {
            Some((last, count)) if *last == factor => *count += 1,
            _ => grouped.push((factor, 1)),
        }
    }
    grouped
}

/// Ungrouped non-increasing Lyndon factors of `w`.
pub fn lyndon_factors(w: &Word) -> Vec<Word> {
    let s = &w.codes;
    let n = s.len();
    let mut factors = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            factors.push(Word::from_codes(w.alphabet, s[i..i + j - k].to_vec()));
            i += j - k;
        }
    }
    factors
}

/// `pi_Y` on a single `X`-word: `x0^{s1-1} x1 ... x0^{sr-1} x1 -> y_{s1} ... y_{sr}`.
/// Words ending in `x0` are annihilated (`None`).
pub fn to_y(w: &Word) -> Result<Option<Word>> {
    if w.alphabet != Alphabet::X {
        return Err(Error::WrongAlphabet { expected: Alphabet::X, found: w.alphabet });
    }
    if w.codes.last() == Some(&0) {
        return Ok(None);
    }
    let mut codes = Vec::new();
    let mut run = 1u32;
    for &c in &w.codes {
        if c == 0 {
            run += 1;
        } else {
            if run > MAX_Y_INDEX {
                return Err(Error::InvalidLetter(format!("y{run}")));
            }
            codes.push(encode(Alphabet::Y, run));
            run = 1;
        }
    }
    Ok(Some(Word::from_codes(Alphabet::Y, codes)))
}

/// `pi_X` on a single `Y`-word; total and injective.
pub fn to_x(w: &Word) -> Result<Word> {
    if w.alphabet != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: w.alphabet });
    }
    let mut codes = Vec::with_capacity(w.weight());
    for &c in &w.codes {
        let s = decode(Alphabet::Y, c);
        codes.extend(std::iter::repeat_n(0u8, s as usize - 1));
        codes.push(1);
    }
    Ok(Word::from_codes(Alphabet::X, codes))
}

/// Direction-aware wrapper over [`to_y`] and [`to_x`]: maps a word to the
/// other alphabet, `None` when annihilated.
pub fn project_word(w: &Word) -> Result<Option<Word>> {
    match w.alphabet {
        Alphabet::X => to_y(w),
        Alphabet::Y => to_x(w).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> Word {
        Word::parse(Alphabet::X, s).unwrap()
    }
    fn y(s: &str) -> Word {
        Word::parse(Alphabet::Y, s).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(compare(&x("01"), &x("1")).unwrap(), Ordering::Less);
        assert_eq!(compare(&y("2,1"), &y("3")).unwrap(), Ordering::Greater);
        assert_eq!(compare(&y("2,1"), &y("2,1")).unwrap(), Ordering::Equal);
        assert_eq!(compare(&x("0"), &x("01")).unwrap(), Ordering::Less);
        assert!(compare(&x("0"), &y("1")).is_err());
    }

    #[test]
    fn empty_word_is_least() {
        assert!(Word::empty(Alphabet::Y) < y("5"));
        assert_eq!(Word::empty(Alphabet::X).weight(), 0);
        assert!(is_lyndon(&Word::empty(Alphabet::X)).is_err());
    }

    #[test]
    fn lyndon_examples() {
        assert!(is_lyndon(&x("01")).unwrap());
        assert!(is_lyndon(&y("2,1")).unwrap());
        assert!(!is_lyndon(&y("1,2")).unwrap());
        assert!(!is_lyndon(&x("0101")).unwrap());
    }

    #[test]
    fn lyndon_generation_examples() {
        assert_eq!(lyndon_words(Alphabet::Y, 3).unwrap(), vec![y("1"), y("2"), y("3"), y("2,1")]);
        assert_eq!(lyndon_words(Alphabet::X, 2).unwrap(), vec![x("0"), x("1"), x("01")]);
        let four = lyndon_words(Alphabet::X, 4).unwrap();
        assert_eq!(four.len(), 8);
        assert!(lyndon_words(Alphabet::X, 0).is_err());
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&x("011")).unwrap(), (x("01"), x("1")));
        assert_eq!(standard_factorization(&y("2,1")).unwrap(), (y("2"), y("1")));
        assert_eq!(standard_factorization(&x("001")).unwrap(), (x("0"), x("01")));
        assert!(standard_factorization(&x("1")).is_err());
        assert!(standard_factorization(&x("10")).is_err());
    }

    #[test]
    fn lyndon_factorization_examples() {
        assert_eq!(lyndon_factorization(&x("101")), vec![(x("1"), 1), (x("01"), 1)]);
        assert_eq!(lyndon_factorization(&y("1,2")), vec![(y("1"), 1), (y("2"), 1)]);
        assert_eq!(lyndon_factorization(&x("110")), vec![(x("1"), 2), (x("0"), 1)]);
        assert!(lyndon_factorization(&Word::empty(Alphabet::Y)).is_empty());
    }

    #[test]
    fn projection_examples() {
        assert_eq!(to_y(&x("01001")).unwrap(), Some(y("2,3")));
        assert_eq!(to_y(&x("10")).unwrap(), None);
        assert_eq!(to_x(&y("2,1")).unwrap(), x("011"));
        assert_eq!(to_y(&Word::empty(Alphabet::X)).unwrap(), Some(Word::empty(Alphabet::Y)));
    }

    #[test]
    fn parse_rejects_bad_text() {
        assert!(Word::parse(Alphabet::X, "012").is_err());
        assert!(Word::parse(Alphabet::Y, "0").is_err());
        assert!(Word::parse(Alphabet::Y, "2,,1").is_err());
        assert!(Word::parse(Alphabet::Y, "02").is_err());
        assert_eq!(y("12,3").indices(), vec![12, 3]);
    }

    #[test]
    fn pretty_forms() {
        assert_eq!(y("3,1,1").pretty(), "y₃y₁²");
        assert_eq!(x("0011").pretty(), "x₀²x₁²");
    }
}
