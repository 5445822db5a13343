#![allow(dead_code)]

use mzv_core::rational;
use mzv_core::zeta::{Monomial, Side, ZetaPoly, ZetaVar};

/// `coef:word^pow*word;coef:…`, words in the side's text form.
pub fn parse_terms(side: Side, text: &str) -> ZetaPoly {
    let mut p = ZetaPoly::zero();
    for term in text.split(';') {
        let (coef, mono) = term.split_once(':').expect("coef:monomial");
        let mut powers = Vec::new();
        for factor in mono.split('*') {
            let (w, e) = match factor.split_once('^') {
                Some((w, e)) => (w, e.parse().unwrap()),
                None => (factor, 1),
            };
            powers.push((ZetaVar::parse(side, w).unwrap(), e));
        }
        p.add_term(Monomial::from_powers(powers), rational::parse(coef).unwrap());
    }
    p
}

pub struct ReferenceRow {
    pub weight: usize,
    pub y: ZetaVar,
    pub sigma: ZetaPoly,
    pub x: ZetaVar,
    pub s: ZetaPoly,
}

pub fn reference_rows() -> Vec<ReferenceRow> {
    include_str!("../golden/paired_rows.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('|').collect();
            ReferenceRow {
                weight: f[0].parse().unwrap(),
                y: ZetaVar::parse(Side::Sigma, f[1]).unwrap(),
                sigma: parse_terms(Side::Sigma, f[2]),
                x: ZetaVar::parse(Side::S, f[3]).unwrap(),
                s: parse_terms(Side::S, f[4]),
            }
        })
        .collect()
}

/// Irreducibles per weight in the reference tables, `(weight, Σ words, S words)`.
pub const REFERENCE_IRREDUCIBLES: &[(usize, &[&str], &[&str])] = &[
    (2, &["2"], &["01"]),
    (3, &["3"], &["001"]),
    (4, &[], &[]),
    (5, &["5"], &["00001"]),
    (6, &[], &[]),
    (7, &["7"], &["0000001"]),
    (8, &["3,1,1,1,1,1"], &["01101111"]),
    (9, &["9"], &["000000001"]),
    (10, &["3,1,1,1,1,1,1,1"], &["0110111111"]),
    (11, &["11", "2,1,1,1,1,1,1,1,1,1"], &["00000000001", "01101101111"]),
    (12, &["2,2,1,1,1,1,1,1,1,1", "3,1,1,1,1,1,1,1,1,1"], &["010111111111", "000101111111"]),
];

/// Dimensions `d_2 … d_12` in the reference tables.
pub const REFERENCE_DIMENSIONS: &[usize] = &[1, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12];
