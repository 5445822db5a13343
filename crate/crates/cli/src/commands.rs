//! One function per subcommand; each returns the rendered output and a status.

use std::fmt::Write as _;
use std::time::Instant;

use mzv_core::bases::{self, BasisEntryJson};
use mzv_core::ncpoly::PolyJson;
use mzv_core::numeric::check_poly_numeric;
use mzv_core::rational;
use mzv_core::words::{self, Alphabet, Word};
use mzv_core::zeta::relations::{relations_of_weight, Relation, RelationJson};
use mzv_core::zeta::tables::{self, IrreducibleRowJson, PairedRowJson};
use mzv_core::zeta::{OrderPolicy, RelationSet, RewriteSystem, Side, ZetaVar};
use mzv_core::{BasisId, NcPoly};
use serde::Serialize;

use crate::config::{Format, Numeric, RunConfig, Task};
use crate::{cache, output, verify, CliError, Status};

pub fn execute(cfg: &RunConfig) -> Result<(String, Status), CliError> {
    match &cfg.task {
        Task::Lyndon { alphabet } => lyndon(cfg, *alphabet),
        Task::Basis { id, word, lyndon_only } => basis(cfg, *id, word.as_deref(), *lyndon_only),
        Task::Decompose { id, poly } => decompose(cfg, *id, poly),
        Task::Relations { set, numeric } => relations(cfg, *set, *numeric),
        Task::Tables { set, order } => tables(cfg, *set, *order),
        Task::Irreducibles { set, order, side } => irreducibles(cfg, *set, *order, *side),
        Task::Verify { numeric } => verify::run(cfg, *numeric),
    }
}

fn config_err(e: mzv_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Serialize)]
struct LyndonJson {
    weight: usize,
    word: String,
    pretty: String,
    /// Standard factorization, absent for letters.
    factorization: Option<[String; 2]>,
}

fn lyndon(cfg: &RunConfig, alphabet: Alphabet) -> Result<(String, Status), CliError> {
    let mut rows = Vec::new();
    for n in 1..=cfg.max_weight {
        for l in words::lyndon_words_of_weight(alphabet, n) {
            let factorization = if l.len() > 1 {
                let (a, b) = words::standard_factorization(&l)?;
                Some([a.to_string(), b.to_string()])
            } else {
                None
            };
            rows.push(LyndonJson { weight: n, word: l.to_string(), pretty: l.pretty(), factorization });
        }
    }
    let body = match cfg.format {
        Format::Json => output::json(&rows)?,
        Format::Csv => output::csv(
            &["weight", "word", "pretty", "left", "right"],
            rows.iter().map(|r| {
                let [a, b] = r.factorization.clone().unwrap_or_default();
                [r.weight.to_string(), r.word.clone(), r.pretty.clone(), a, b]
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = match &r.factorization {
                    Some([a, b]) => writeln!(s, "{:>3}  {}  = ({a})({b})", r.weight, r.pretty),
                    None => writeln!(s, "{:>3}  {}", r.weight, r.pretty),
                };
            }
            s
        }
    };
    Ok((body, Status::Ok))
}

fn symbol(id: BasisId) -> &'static str {
    match id.kind() {
        mzv_core::BasisKind::P => "P",
        mzv_core::BasisKind::S => "S",
        mzv_core::BasisKind::Pi => "Π",
        mzv_core::BasisKind::Sigma => "Σ",
    }
}

fn basis(cfg: &RunConfig, id: BasisId, word: Option<&str>, lyndon_only: bool) -> Result<(String, Status), CliError> {
    let mut entries: Vec<(Word, NcPoly)> = Vec::new();
    match word {
        Some(text) => {
            let w = Word::parse(id.alphabet(), text).map_err(config_err)?;
            if w.is_empty() {
                return Err(CliError::Config("--word must be nonempty".into()));
            }
            entries.push((w.clone(), bases::basis(id, &w)?));
        }
        None => {
            for n in 1..=cfg.max_weight {
                let t = cache::table(id, n)?;
                entries.extend(
                    t.entries.into_iter().filter(|(w, _)| !lyndon_only || words::is_lyndon(w).unwrap_or(false)),
                );
            }
        }
    }
    let body = match cfg.format {
        Format::Json => {
            let rows: Vec<BasisEntryJson> = entries
                .iter()
                .map(|(w, p)| BasisEntryJson {
                    basis: id.kind().name().into(),
                    word: w.to_string(),
                    poly: p.to_json_value(),
                })
                .collect();
            output::json(&rows)?
        }
        Format::Csv => output::csv(
            &["basis", "alphabet", "word", "poly"],
            entries
                .iter()
                .map(|(w, p)| [id.kind().name().to_string(), id.alphabet().to_string(), w.to_string(), p.pretty()]),
        )?,
        Format::Text => {
            let mut s = String::new();
            for (w, p) in &entries {
                let _ = writeln!(s, "{}_{{{}}} = {}", symbol(id), w.pretty(), p.pretty());
            }
            s
        }
    };
    Ok((body, Status::Ok))
}

/// `coeff:word;coeff:word;…`
fn parse_poly(alphabet: Alphabet, text: &str) -> Result<NcPoly, CliError> {
    let mut p = NcPoly::zero(alphabet);
    for term in text.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (c, w) = term
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("term `{term}` is not of the form coeff:word")))?;
        let c = rational::parse(c).map_err(config_err)?;
        let w = Word::parse(alphabet, w.trim()).map_err(config_err)?;
        p.add_term(w, c);
    }
    Ok(p)
}

#[derive(Serialize)]
struct CoordJson {
    word: String,
    coeff: String,
}

#[derive(Serialize)]
struct DecompositionJson {
    basis: String,
    alphabet: String,
    input: PolyJson,
    coordinates: Vec<CoordJson>,
}

fn decompose(cfg: &RunConfig, id: BasisId, text: &str) -> Result<(String, Status), CliError> {
    let p = parse_poly(id.alphabet(), text)?;
    p.homogeneous_weight().map_err(config_err)?;
    let coords = bases::decompose(&p, id)?;
    let body = match cfg.format {
        Format::Json => output::json(&DecompositionJson {
            basis: id.kind().name().into(),
            alphabet: id.alphabet().to_string(),
            input: p.to_json_value(),
            coordinates: coords
                .iter()
                .map(|(w, c)| CoordJson { word: w.to_string(), coeff: rational::format(c) })
                .collect(),
        })?,
        Format::Csv => {
            output::csv(&["word", "coeff"], coords.iter().map(|(w, c)| [w.to_string(), rational::format(c)]))?
        }
        Format::Text => {
            let terms: Vec<String> = coords
                .iter()
                .map(|(w, c)| format!("({})·{}_{{{}}}", rational::format(c), symbol(id), w.pretty()))
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            format!("{} = {rhs}\n", p.pretty())
        }
    };
    Ok((body, Status::Ok))
}

/// Per-weight progress under the time limit.
pub struct Progress {
    start: Instant,
    pub reached: usize,
    pub complete: bool,
}

impl Progress {
    pub fn new() -> Self {
        Progress { start: Instant::now(), reached: 1, complete: true }
    }

    /// May weight `n` be started?
    fn admit(&mut self, cfg: &RunConfig, n: usize) -> bool {
        if let Some(limit) = cfg.time_limit {
            if self.start.elapsed() >= limit {
                eprintln!(
                    "warning: time limit of {}s reached before weight {n}; results stop at weight {}",
                    limit.as_secs(),
                    self.reached
                );
                self.complete = false;
                return false;
            }
        }
        true
    }

    pub fn status(&self) -> Status {
        if self.complete {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

pub fn generate(cfg: &RunConfig, set: RelationSet, progress: &mut Progress) -> Result<Vec<Relation>, CliError> {
    let mut out = Vec::new();
    for n in 2..=cfg.max_weight {
        if !progress.admit(cfg, n) {
            break;
        }
        cache::warm(n)?;
        out.extend(relations_of_weight(n, set)?);
        progress.reached = n;
    }
    Ok(out)
}

pub fn build_system(
    cfg: &RunConfig,
    set: RelationSet,
    order: OrderPolicy,
    progress: &mut Progress,
) -> Result<RewriteSystem, CliError> {
    let mut sys = RewriteSystem::new(order);
    for n in 2..=cfg.max_weight {
        if !progress.admit(cfg, n) {
            break;
        }
        cache::warm(n)?;
        sys.extend(&relations_of_weight(n, set)?)?;
        progress.reached = n;
    }
    Ok(sys)
}

#[derive(Serialize)]
pub struct NumericJson {
    pub relation_id: String,
    pub value: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn relation_id(r: &Relation) -> String {
    format!("{}:{}", r.provenance(), r.case)
}

pub fn numeric_rows(rels: &[Relation], n: Numeric) -> Vec<NumericJson> {
    rels.iter()
        .map(|r| match check_poly_numeric(&r.poly, n.cutoff, n.tol) {
            Ok(c) => {
                NumericJson { relation_id: relation_id(r), value: Some(c.value), tol: n.tol, pass: c.pass, error: None }
            }
            Err(e) => NumericJson {
                relation_id: relation_id(r),
                value: None,
                tol: n.tol,
                pass: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

fn relations(cfg: &RunConfig, set: RelationSet, numeric: Option<Numeric>) -> Result<(String, Status), CliError> {
    let mut progress = Progress::new();
    let rels = generate(cfg, set, &mut progress)?;
    let mut status = progress.status();
    let body = match numeric {
        Some(n) => {
            let rows = numeric_rows(&rels, n);
            if rows.iter().any(|r| !r.pass) {
                status = Status::Failed;
            }
            match cfg.format {
                Format::Json => output::json(&rows)?,
                Format::Csv => output::csv(
                    &["relation_id", "value", "tol", "pass"],
                    rows.iter().map(|r| {
                        [
                            r.relation_id.clone(),
                            r.value.map_or_else(|| "".into(), |v| format!("{v:e}")),
                            format!("{:e}", r.tol),
                            r.pass.to_string(),
                        ]
                    }),
                )?,
                Format::Text => {
                    let mut s = String::new();
                    for r in &rows {
                        let v = r.value.map_or_else(|| r.error.clone().unwrap_or_default(), |v| format!("{v:+.3e}"));
                        let _ = writeln!(s, "{} {}  {v}", if r.pass { "PASS" } else { "FAIL" }, r.relation_id);
                    }
                    s
                }
            }
        }
        None => match cfg.format {
            Format::Json => {
                let rows: Vec<RelationJson> = rels.iter().map(Relation::to_json).collect();
                output::json(&rows)?
            }
            Format::Csv => output::csv(
                &["weight", "relation_id", "poly"],
                rels.iter().map(|r| [r.weight.to_string(), relation_id(r), r.poly.pretty()]),
            )?,
            Format::Text => {
                let mut s = String::new();
                for r in &rels {
                    let _ = writeln!(s, "{:>3}  [{}]  {} = 0", r.weight, relation_id(r), r.poly.pretty());
                }
                s
            }
        },
    };
    Ok((body, status))
}

#[derive(Serialize)]
struct TablesJson {
    max_weight: usize,
    reached_weight: usize,
    complete: bool,
    relations: &'static str,
    order: &'static str,
    rules: Vec<PairedRowJson>,
    irreducibles: Vec<IrreducibleRowJson>,
}

fn tables(cfg: &RunConfig, set: RelationSet, order: OrderPolicy) -> Result<(String, Status), CliError> {
    let mut progress = Progress::new();
    let sys = build_system(cfg, set, order, &mut progress)?;
    let paired = tables::paired_rows(&sys, sys.up_to)?;
    let irr = tables::irreducible_rows(&sys);
    let body = match cfg.format {
        Format::Json => output::json(&TablesJson {
            max_weight: cfg.max_weight,
            reached_weight: progress.reached,
            complete: progress.complete,
            relations: set.name(),
            order: order.name(),
            rules: paired.iter().map(|r| r.to_json()).collect(),
            irreducibles: irr.iter().map(|r| r.to_json()).collect(),
        })?,
        Format::Csv => format!("{}\n{}", tables::paired_rows_csv(&paired)?, tables::irreducible_rows_csv(&irr)?),
        Format::Text => {
            let mut s = String::new();
            if !progress.complete {
                let _ = writeln!(s, "PARTIAL: reached weight {} of {}\n", progress.reached, cfg.max_weight);
            }
            let _ = writeln!(s, "Rewrite rules through weight {} ({} order)\n", sys.up_to, order.name());
            s.push_str(&tables::paired_rows_text(&paired));
            let _ = writeln!(s, "\nIrreducibles per weight (Σ side | S side)\n");
            s.push_str(&tables::irreducible_rows_text(&irr));
            s
        }
    };
    Ok((body, progress.status()))
}

#[derive(Serialize)]
struct IrreducibleJson {
    weight: usize,
    dimension: usize,
    side: &'static str,
    irreducibles: Vec<String>,
}

fn irreducibles(
    cfg: &RunConfig,
    set: RelationSet,
    order: OrderPolicy,
    side: Option<Side>,
) -> Result<(String, Status), CliError> {
    let mut progress = Progress::new();
    let sys = build_system(cfg, set, order, &mut progress)?;
    let sides: Vec<Side> = side.map_or_else(|| vec![Side::Sigma, Side::S], |s| vec![s]);
    let mut rows = Vec::new();
    for n in 2..=sys.up_to {
        for &side in &sides {
            let s = sys.side(side);
            rows.push((
                n,
                s.dimensions.get(&n).copied().unwrap_or(0),
                side,
                s.irreducibles.get(&n).cloned().unwrap_or_default(),
            ));
        }
    }
    let body = match cfg.format {
        Format::Json => {
            let rows: Vec<IrreducibleJson> = rows
                .iter()
                .map(|(n, d, side, vs)| IrreducibleJson {
                    weight: *n,
                    dimension: *d,
                    side: side.name(),
                    irreducibles: vs.iter().map(|v| v.word().to_string()).collect(),
                })
                .collect();
            output::json(&rows)?
        }
        Format::Csv => output::csv(
            &["weight", "dimension", "side", "irreducibles"],
            rows.iter().map(|(n, d, side, vs)| {
                [
                    n.to_string(),
                    d.to_string(),
                    side.name().to_string(),
                    vs.iter().map(ZetaVar::pretty).collect::<Vec<_>>().join(" "),
                ]
            }),
        )?,
        Format::Text => {
            let mut s = String::new();
            for (n, d, side, vs) in &rows {
                let list = vs.iter().map(ZetaVar::pretty).collect::<Vec<_>>().join(", ");
                let _ = writeln!(s, "{n:>3}  d={d:<3} {:<5} {list}", side.name());
            }
            s
        }
    };
    Ok((body, progress.status()))
}
