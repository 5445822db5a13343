//! Tabular views of a rewrite system: reducible coordinates paired across
//! the two alphabets, and the irreducibles per weight.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{self, Alphabet, Word};

use super::poly::{Side, TermJson, ZetaPoly, ZetaVar};
use super::reduce::RewriteSystem;

/// One row: a Lyndon `Y`-word, its `X` image, and both normal forms.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedRow {
    pub weight: usize,
    pub lyndon_y: Word,
    pub sigma: ZetaPoly,
    pub lyndon_x: Word,
    pub s: ZetaPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairedRowJson {
    pub weight: usize,
    pub lyndon_word_y: String,
    pub sigma: Vec<TermJson>,
    pub lyndon_word_x: String,
    pub s: Vec<TermJson>,
}

impl PairedRow {
    pub fn to_json(&self) -> PairedRowJson {
        PairedRowJson {
            weight: self.weight,
            lyndon_word_y: self.lyndon_y.to_string(),
            sigma: self.sigma.to_json(),
            lyndon_word_x: self.lyndon_x.to_string(),
            s: self.s.to_json(),
        }
    }
}

/// Rows for every Lyndon `l ∈ Y \ {y1}` of weight `3..=max_weight` such that
/// `ζ(Σ_l)` or `ζ(S_{π_X l})` is reducible.
pub fn paired_rows(sys: &RewriteSystem, max_weight: usize) -> Result<Vec<PairedRow>> {
    let mut rows = Vec::new();
    for n in 2..=max_weight.min(sys.up_to) {
        for l in words::lyndon_words_of_weight(Alphabet::Y, n) {
            if l.len() == 1 && l.letter(0).index() == 1 {
                continue;
            }
            let lx = words::to_x(&l)?;
            let vy = ZetaVar::new(Side::Sigma, l.clone())?;
            let vx = ZetaVar::new(Side::S, lx.clone())?;
            if sys.sigma.is_irreducible(&vy) && sys.s.is_irreducible(&vx) {
                continue;
            }
            rows.push(PairedRow {
                weight: n,
                sigma: sys.sigma.normal_form(&ZetaPoly::var(vy)),
                s: sys.s.normal_form(&ZetaPoly::var(vx)),
                lyndon_y: l,
                lyndon_x: lx,
            });
        }
    }
    Ok(rows)
}

fn write_csv<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

pub fn paired_rows_csv(rows: &[PairedRow]) -> Result<String> {
    write_csv(
        ["weight", "lyndon_word_Y", "sigma_expression", "lyndon_word_X", "s_expression"],
        rows.iter()
            .map(|r| [r.weight.to_string(), r.lyndon_y.pretty(), r.sigma.pretty(), r.lyndon_x.pretty(), r.s.pretty()]),
    )
}

pub fn paired_rows_json(rows: &[PairedRow]) -> Result<String> {
    let js: Vec<PairedRowJson> = rows.iter().map(PairedRow::to_json).collect();
    Ok(serde_json::to_string_pretty(&js)?)
}

pub fn paired_rows_text(rows: &[PairedRow]) -> String {
    let cols = |f: &dyn Fn(&PairedRow) -> String| rows.iter().map(|r| f(r).chars().count()).max().unwrap_or(0);
    let wy = cols(&|r| r.lyndon_y.pretty()).max(1);
    let ws = cols(&|r| r.sigma.pretty()).max(1);
    let wx = cols(&|r| r.lyndon_x.pretty()).max(1);
    let mut out = String::new();
    let mut last = 0;
    for r in rows {
        let n = if r.weight == last { String::new() } else { r.weight.to_string() };
        last = r.weight;
        let _ = writeln!(
            out,
            "{n:>3}  {}  {}  {}  {}",
            pad(&r.lyndon_y.pretty(), wy),
            pad(&r.sigma.pretty(), ws),
            pad(&r.lyndon_x.pretty(), wx),
            r.s.pretty()
        );
    }
    out
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(n)))
}

/// Irreducibles introduced at one weight, on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleRow {
    pub weight: usize,
    pub dimension: usize,
    pub sigma: Vec<ZetaVar>,
    pub s: Vec<ZetaVar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibleRowJson {
    pub weight: usize,
    pub dimension: usize,
    pub sigma: Vec<String>,
    pub s: Vec<String>,
}

impl IrreducibleRow {
    pub fn to_json(&self) -> IrreducibleRowJson {
        IrreducibleRowJson {
            weight: self.weight,
            dimension: self.dimension,
            sigma: self.sigma.iter().map(|v| v.word().to_string()).collect(),
            s: self.s.iter().map(|v| v.word().to_string()).collect(),
        }
    }
}

pub fn irreducible_rows(sys: &RewriteSystem) -> Vec<IrreducibleRow> {
    (2..=sys.up_to)
        .map(|n| IrreducibleRow {
            weight: n,
            dimension: sys.sigma.dimensions.get(&n).copied().unwrap_or(0),
            sigma: sys.sigma.irreducibles.get(&n).cloned().unwrap_or_default(),
            s: sys.s.irreducibles.get(&n).cloned().unwrap_or_default(),
        })
        .collect()
}

fn join_pretty(vs: &[ZetaVar]) -> String {
    vs.iter().map(ZetaVar::pretty).collect::<Vec<_>>().join(", ")
}

pub fn irreducible_rows_csv(rows: &[IrreducibleRow]) -> Result<String> {
    write_csv(
        ["weight", "dimension", "sigma_irreducibles", "s_irreducibles"],
        rows.iter().map(|r| [r.weight.to_string(), r.dimension.to_string(), join_pretty(&r.sigma), join_pretty(&r.s)]),
    )
}

pub fn irreducible_rows_json(rows: &[IrreducibleRow]) -> Result<String> {
    let js: Vec<IrreducibleRowJson> = rows.iter().map(IrreducibleRow::to_json).collect();
    Ok(serde_json::to_string_pretty(&js)?)
}

pub fn irreducible_rows_text(rows: &[IrreducibleRow]) -> String {
    let mut out = String::new();
    for r in rows {
        if r.sigma.is_empty() && r.s.is_empty() {
            let _ = writeln!(out, "{:>3}  d={:<3} none", r.weight, r.dimension);
        } else {
            let _ = writeln!(
                out,
                "{:>3}  d={:<3} {}  |  {}",
                r.weight,
                r.dimension,
                join_pretty(&r.sigma),
                join_pretty(&r.s)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::reduce::reduce;
    use crate::zeta::relations::{relations_up_to, RelationSet};

    #[test]
    fn weight_four_rows() {
        let sys = reduce(&relations_up_to(4, RelationSet::Bridge).unwrap(), 4).unwrap();
        let rows = paired_rows(&sys, 4).unwrap();
        let ys: Vec<String> = rows.iter().map(|r| r.lyndon_y.pretty()).collect();
        assert_eq!(ys, ["y₂y₁", "y₄", "y₃y₁", "y₂y₁²"]);
        let csv = paired_rows_csv(&rows).unwrap();
        assert!(csv.lines().nth(2).unwrap().starts_with("4,y₄,(2/5)ζ(Σ_{y₂})²,x₀³x₁,"));
    }

    #[test]
    fn weight_two_has_no_rows() {
        let sys = reduce(&[], 2).unwrap();
        assert!(paired_rows(&sys, 2).unwrap().is_empty());
        let irr = irreducible_rows(&sys);
        assert_eq!(irr.len(), 1);
        assert_eq!(join_pretty(&irr[0].sigma), "ζ(Σ_{y₂})");
    }
}
