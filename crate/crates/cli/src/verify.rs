//! Invariant suites behind `mzv verify`.

use std::fmt::Write as _;

use mzv_core::bases::{self, BasisId};
use mzv_core::ncpoly::{self, Coproduct};
use mzv_core::words::{self, Alphabet};
use mzv_core::zeta::{OrderPolicy, RelationSet, Side};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::commands::{build_system, generate, numeric_rows, Progress};
use crate::config::{Format, Numeric, RunConfig};
use crate::{output, CliError, Status};

/// Pairing matrices grow as `4^n`; larger weights are skipped.
const DUALITY_CAP: usize = 8;
/// Coproducts of every Lyndon element.
const PRIMITIVITY_CAP: usize = 8;
/// The ordered exponential product is expanded in full.
const SCHUTZENBERGER_CAP: usize = 4;
/// Reported failures per suite.
const MAX_LISTED: usize = 20;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str, detail: String, failures: Vec<String>) -> Self {
        Check { name, pass: failures.is_empty(), detail, failures }
    }
}

fn note(failures: &mut Vec<String>, f: impl FnOnce() -> String) {
    if failures.len() < MAX_LISTED {
        failures.push(f());
    } else if failures.len() == MAX_LISTED {
        failures.push("…".into());
    }
}

fn scope(max: usize, cap: usize) -> String {
    if max > cap {
        format!("weights 1-{cap} (capped from {max})")
    } else {
        format!("weights 1-{max}")
    }
}

fn duality(max: usize) -> Result<Check, CliError> {
    let top = max.min(DUALITY_CAP);
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    for primal in [BasisId::p(Alphabet::X), BasisId::p(Alphabet::Y), BasisId::pi()] {
        for n in 1..=top {
            let block = bases::block(primal.alphabet(), n);
            let ps = block.iter().map(|u| bases::basis(primal, u)).collect::<Result<Vec<_>, _>>()?;
            let ds = block.iter().map(|v| bases::basis(primal.dual(), v)).collect::<Result<Vec<_>, _>>()?;
            for (i, p) in ps.iter().enumerate() {
                for (j, d) in ds.iter().enumerate() {
                    pairs += 1;
                    let c = ncpoly::pairing(p, d)?;
                    let ok = if i == j { c.is_one() } else { c.is_zero() };
                    if !ok {
                        note(&mut failures, || {
                            format!("<{}_{}|{}_{}> = {c}", primal.kind(), block[i], primal.dual().kind(), block[j])
                        });
                    }
                }
            }
        }
    }
    Ok(Check::new(
        "duality",
        format!("{}: {pairs} pairings (P/S over X and Y, Pi/Sigma)", scope(max, DUALITY_CAP)),
        failures,
    ))
}

fn triangularity(max: usize) -> Result<Check, CliError> {
    let ids = [
        BasisId::p(Alphabet::X),
        BasisId::s(Alphabet::X),
        BasisId::p(Alphabet::Y),
        BasisId::s(Alphabet::Y),
        BasisId::pi(),
        BasisId::sigma(),
    ];
    let mut failures = Vec::new();
    let mut count = 0usize;
    for id in ids {
        for n in 1..=max {
            for w in bases::block(id.alphabet(), n) {
                count += 1;
                let b = bases::basis(id, &w)?;
                let lead = if id.kind().leads_with_min() { b.min_word() } else { b.max_word() };
                if lead != Some(&w) || !b.coeff(&w).is_one() {
                    note(&mut failures, || {
                        format!("{}_{w}: leading word {lead:?}, coefficient {}", id.kind(), b.coeff(&w))
                    });
                }
            }
        }
    }
    Ok(Check::new("triangularity", format!("weights 1-{max}: {count} elements of six families"), failures))
}

fn primitivity(max: usize) -> Result<Check, CliError> {
    let top = max.min(PRIMITIVITY_CAP);
    let mut failures = Vec::new();
    let mut count = 0usize;
    for (id, coproduct) in [(BasisId::p(Alphabet::X), Coproduct::Shuffle), (BasisId::pi(), Coproduct::Stuffle)] {
        for l in words::lyndon_words(id.alphabet(), top)? {
            count += 1;
            let defect = ncpoly::primitivity_defect(&bases::basis(id, &l)?, coproduct)?;
            if !defect.is_zero() {
                note(&mut failures, || format!("{}_{l}: {} defect terms", id.kind(), defect.len()));
            }
        }
    }
    Ok(Check::new(
        "primitivity",
        format!("{}: {count} Lyndon elements P over X, Pi over Y", scope(max, PRIMITIVITY_CAP)),
        failures,
    ))
}

fn schutzenberger(max: usize) -> Result<Check, CliError> {
    let top = max.min(SCHUTZENBERGER_CAP);
    let mut failures = Vec::new();
    for alphabet in [Alphabet::X, Alphabet::Y] {
        let r = bases::schutzenberger_truncation(alphabet, top)?;
        if !r.is_zero() {
            note(&mut failures, || format!("{alphabet}: {} residual terms", r.len()));
        }
    }
    Ok(Check::new("schutzenberger", format!("{}: residual over X and Y", scope(max, SCHUTZENBERGER_CAP)), failures))
}

fn agreement(cfg: &RunConfig) -> Result<Check, CliError> {
    let mut pa = Progress::new();
    let a = build_system(cfg, RelationSet::Bridge, OrderPolicy::Tabulated, &mut pa)?;
    let mut pb = Progress::new();
    let b = build_system(cfg, RelationSet::DoubleExpression, OrderPolicy::Tabulated, &mut pb)?;
    let mut failures = Vec::new();
    if !(pa.complete && pb.complete) {
        failures.push(format!("time limit reached at weights {} and {}", pa.reached, pb.reached));
    }
    let mut compared = 0usize;
    for side in [Side::Sigma, Side::S] {
        let (ra, rb) = (&a.side(side).rules, &b.side(side).rules);
        for (lead, rule) in ra {
            compared += 1;
            match rb.get(lead) {
                Some(r) if r.rhs == rule.rhs => {}
                Some(r) => {
                    note(&mut failures, || format!("{}: {} vs {}", lead.pretty(), rule.rhs.pretty(), r.rhs.pretty()))
                }
                None => note(&mut failures, || format!("{}: missing from double expressions", lead.pretty())),
            }
        }
        for lead in rb.keys().filter(|k| !ra.contains_key(*k)) {
            note(&mut failures, || format!("{}: missing from bridge relations", lead.pretty()));
        }
        if a.side(side).irreducibles != b.side(side).irreducibles {
            note(&mut failures, || format!("{side}: irreducible sets differ"));
        }
    }
    Ok(Check::new(
        "agreement",
        format!("weights 2-{}: {compared} rules, bridge vs double expression", a.up_to.min(b.up_to)),
        failures,
    ))
}

fn numeric(cfg: &RunConfig, n: Numeric) -> Result<Check, CliError> {
    let mut progress = Progress::new();
    let rels = generate(cfg, RelationSet::All, &mut progress)?;
    let rows = numeric_rows(&rels, n);
    let mut failures = Vec::new();
    if !progress.complete {
        failures.push(format!("time limit reached at weight {}", progress.reached));
    }
    let mut worst: f64 = 0.0;
    for r in &rows {
        match (&r.error, r.value) {
            (Some(e), _) => note(&mut failures, || format!("{}: {e}", r.relation_id)),
            (None, Some(v)) if !r.pass => note(&mut failures, || format!("{}: value {v:e}", r.relation_id)),
            (None, Some(v)) => worst = worst.max(v.abs()),
            _ => {}
        }
    }
    Ok(Check::new(
        "numeric",
        format!(
            "weights 2-{}: {} relations, cutoff {}, rel. tol {:e}, largest residual {worst:.2e}",
            progress.reached,
            rows.len(),
            n.cutoff,
            n.tol
        ),
        failures,
    ))
}

#[derive(Serialize)]
struct Report<'a> {
    max_weight: usize,
    pass: bool,
    checks: &'a [Check],
}

pub fn run(cfg: &RunConfig, numeric_args: Option<Numeric>) -> Result<(String, Status), CliError> {
    let max = cfg.max_weight;
    let mut checks = vec![duality(max)?, triangularity(max)?, primitivity(max)?, schutzenberger(max)?, agreement(cfg)?];
    if let Some(n) = numeric_args {
        checks.push(numeric(cfg, n)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    let body = match cfg.format {
        Format::Json => output::json(&Report { max_weight: max, pass, checks: &checks })?,
        Format::Csv => output::csv(
            &["check", "pass", "detail", "failures"],
            checks.iter().map(|c| [c.name.to_string(), c.pass.to_string(), c.detail.clone(), c.failures.join("; ")]),
        )?,
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = writeln!(s, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                for f in &c.failures {
                    let _ = writeln!(s, "    {f}");
                }
            }
            s
        }
    };
    Ok((body, if pass { Status::Ok } else { Status::Failed }))
}
