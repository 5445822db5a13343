//! Graded reduction of relations to rewrite rules over irreducibles.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::words::{self, Word};

use super::linalg::{self, Row};
use super::poly::{Monomial, Side, TermJson, ZetaPoly, ZetaVar};
use super::relations::Relation;

/// Order in which the weight-`n` variables of a side are eliminated. The
/// variables eliminated last are the ones that survive as irreducibles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum OrderPolicy {
    /// Greater Lyndon words first; the least independent word survives.
    GreaterFirst,
    /// Smaller Lyndon words first; the greatest independent word survives.
    SmallerFirst,
    /// Like `SmallerFirst`, except that the least Lyndon word of the weight
    /// (`y_n` or `x0^{n-1}x1`) is kept whenever it is independent.
    SingleThenGreatest,
    /// Shorter words first, ties broken greater-first: long words survive.
    LongestThenLeast,
    /// Keeps `y_n` (or `x0^{n-1}x1`) whenever it is independent. Among the
    /// remaining Σ words the longest survive, ties going to the least word;
    /// among the remaining S words the greatest survive.
    #[default]
    Tabulated,
}

impl OrderPolicy {
    pub const ALL: [OrderPolicy; 5] = [
        OrderPolicy::Tabulated,
        OrderPolicy::GreaterFirst,
        OrderPolicy::SmallerFirst,
        OrderPolicy::SingleThenGreatest,
        OrderPolicy::LongestThenLeast,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderPolicy::GreaterFirst => "greater-first",
            OrderPolicy::SmallerFirst => "smaller-first",
            OrderPolicy::SingleThenGreatest => "single-then-greatest",
            OrderPolicy::LongestThenLeast => "longest-then-least",
            OrderPolicy::Tabulated => "tabulated",
        }
    }

    /// Weight-`n` Lyndon words of a side in elimination order.
    pub fn elimination_order(self, side: Side, mut ws: Vec<Word>) -> Vec<Word> {
        ws.sort();
        match self {
            OrderPolicy::GreaterFirst => {
                ws.reverse();
            }
            OrderPolicy::SmallerFirst => {}
            OrderPolicy::SingleThenGreatest => {
                if !ws.is_empty() {
                    let least = ws.remove(0);
                    ws.push(least);
                }
            }
            OrderPolicy::LongestThenLeast => {
                ws.sort_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)));
            }
            OrderPolicy::Tabulated => {
                if ws.is_empty() {
                    return ws;
                }
                let least = ws.remove(0);
                if side == Side::Sigma {
                    ws.sort_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)));
                }
                ws.push(least);
            }
        }
        ws
    }
}

impl fmt::Display for OrderPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrderPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OrderPolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown order policy `{s}`")))
    }
}

/// `lead -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: ZetaVar,
    pub rhs: ZetaPoly,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LeadJson {
    pub side: String,
    pub word: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleJson {
    pub weight: usize,
    pub lead: LeadJson,
    pub rhs: Vec<TermJson>,
    pub provenance: String,
}

impl Rule {
    pub fn to_json(&self) -> RuleJson {
        RuleJson {
            weight: self.lead.weight(),
            lead: LeadJson { side: self.lead.side().name().to_string(), word: self.lead.word().to_string() },
            rhs: self.rhs.to_json(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Rules, irreducibles and dimensions in one coordinate system.
#[derive(Clone, Debug)]
pub struct SideSystem {
    pub side: Side,
    pub rules: BTreeMap<ZetaVar, Rule>,
    pub irreducibles: BTreeMap<usize, Vec<ZetaVar>>,
    pub dimensions: BTreeMap<usize, usize>,
    /// Other-side variables expressed in this side's normal forms.
    pub transports: BTreeMap<ZetaVar, ZetaPoly>,
}

impl SideSystem {
    fn new(side: Side) -> Self {
        SideSystem {
            side,
            rules: BTreeMap::new(),
            irreducibles: BTreeMap::new(),
            dimensions: BTreeMap::new(),
            transports: BTreeMap::new(),
        }
    }

    fn lookup(&self, v: &ZetaVar) -> Option<ZetaPoly> {
        if v.is_divergent() {
            return Some(ZetaPoly::zero());
        }
        if v.side() == self.side {
            self.rules.get(v).map(|r| r.rhs.clone())
        } else {
            self.transports.get(v).cloned()
        }
    }

    /// Rewrite every reducible variable (and transported other-side
    /// variable) to its normal form.
    pub fn normal_form(&self, p: &ZetaPoly) -> ZetaPoly {
        p.substitute(|v| self.lookup(v))
    }

    /// Apply the rule (or transport) for a single variable once.
    pub fn rewrite_var(&self, p: &ZetaPoly, var: &ZetaVar) -> ZetaPoly {
        p.substitute(|v| if v == var { self.lookup(v) } else { None })
    }

    /// Irreducible variables of weight `<= n`, ordered by weight.
    pub fn irreducibles_up_to(&self, n: usize) -> Vec<ZetaVar> {
        self.irreducibles.range(..=n).flat_map(|(_, v)| v.iter().cloned()).collect()
    }

    pub fn is_irreducible(&self, v: &ZetaVar) -> bool {
        self.irreducibles.get(&v.weight()).is_some_and(|vs| vs.contains(v))
    }
}

/// Both coordinate systems reduced to a common weight.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub up_to: usize,
    pub policy: OrderPolicy,
    pub sigma: SideSystem,
    pub s: SideSystem,
}

impl RewriteSystem {
    /// A system with no rules (`up_to` = 1).
    pub fn new(policy: OrderPolicy) -> Self {
        RewriteSystem { up_to: 1, policy, sigma: SideSystem::new(Side::Sigma), s: SideSystem::new(Side::S) }
    }

    /// Reduce the relations of weight `up_to + 1` and advance `up_to`.
    pub fn extend(&mut self, relations: &[Relation]) -> Result<()> {
        let n = self.up_to + 1;
        if let Some(r) = relations.iter().find(|r| r.weight != n) {
            return Err(Error::InvalidArgument(format!(
                "relation {} has weight {}, expected {n}",
                r.provenance(),
                r.weight
            )));
        }
        self.sigma.extend(n, relations, self.policy)?;
        self.s.extend(n, relations, self.policy)?;
        self.up_to = n;
        Ok(())
    }

    pub fn side(&self, side: Side) -> &SideSystem {
        match side {
            Side::Sigma => &self.sigma,
            Side::S => &self.s,
        }
    }

    /// `(n, d_n, irreducible count)` for the Σ side, weights `2..=up_to`.
    pub fn dimensions(&self) -> Vec<(usize, usize, usize)> {
        self.dimensions_of(Side::Sigma)
    }

    pub fn dimensions_of(&self, side: Side) -> Vec<(usize, usize, usize)> {
        let sys = self.side(side);
        sys.dimensions.iter().map(|(&n, &d)| (n, d, sys.irreducibles.get(&n).map_or(0, Vec::len))).collect()
    }

    /// Normal form of a polynomial, in the coordinates of `target`.
    pub fn normal_form(&self, p: &ZetaPoly, target: Side) -> ZetaPoly {
        self.side(target).normal_form(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Col {
    Other(Monomial),
    TargetVar(usize, ZetaVar),
    TargetProduct(Monomial),
}

fn rest_poly(row: &Row, cols: &[Col]) -> ZetaPoly {
    let mut out = ZetaPoly::zero();
    for (c, v) in row.iter().skip(1) {
        let m = match &cols[*c] {
            Col::Other(m) | Col::TargetProduct(m) => m.clone(),
            Col::TargetVar(_, v) => Monomial::var(v.clone()),
        };
        out.add_term(m, -v.clone());
    }
    out
}

/// Weight-`n` convergent Lyndon variables of a side.
pub fn weight_vars(side: Side, n: usize) -> Vec<ZetaVar> {
    words::lyndon_words_of_weight(side.alphabet(), n)
        .into_iter()
        .map(|w| ZetaVar::new(side, w).expect("Lyndon"))
        .filter(|v| !v.is_divergent())
        .collect()
}

/// Number of monomials of weight `n` in variables of the given weights.
pub fn monomial_count(weights: &[usize], n: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for &w in weights {
        if w == 0 || w > n {
            continue;
        }
        for t in w..=n {
            ways[t] += ways[t - w];
        }
    }
    ways[n]
}

impl SideSystem {
    /// Add the rules of weight `n` from relations of that weight; lower
    /// weights must already be present.
    fn extend(&mut self, n: usize, relations: &[Relation], policy: OrderPolicy) -> Result<()> {
        let side = self.side;
        let vars = weight_vars(side, n);
        let order = policy.elimination_order(side, vars.iter().map(|v| v.word().clone()).collect());
        let rank: HashMap<Word, usize> = order.into_iter().enumerate().map(|(i, w)| (w, i)).collect();
        let col_of = |m: &Monomial| -> Col {
            if m.powers().iter().any(|(v, _)| v.side() != side) {
                return Col::Other(m.clone());
            }
            match m.as_var() {
                Some(v) if v.weight() == n => Col::TargetVar(rank[v.word()], v.clone()),
                _ => Col::TargetProduct(m.clone()),
            }
        };

        let mut rows: Vec<(Vec<(Col, Rational)>, String)> = Vec::new();
        for rel in relations {
            let p = self.normal_form(&rel.poly);
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() || p.weights() != vec![n] {
                return Err(Error::InvalidArgument(format!(
                    "relation {} is not homogeneous of weight {n}",
                    rel.provenance()
                )));
            }
            rows.push((p.terms().map(|(m, c)| (col_of(m), c.clone())).collect(), rel.provenance()));
        }
        let cols: Vec<Col> = rows
            .iter()
            .flat_map(|(r, _)| r.iter().map(|(c, _)| c.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<&Col, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let sparse: Vec<Row> = rows
            .iter()
            .map(|(r, _)| {
                let mut row: Row = r.iter().map(|(c, v)| (index[c], v.clone())).collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        let pivots = linalg::rref(&sparse, cols.len());

        let mut irreducible: Vec<ZetaVar> = Vec::new();
        for (lead, pivot) in &pivots {
            let (row, prov) = (&pivot.row, &rows[pivot.source].1);
            match &cols[*lead] {
                Col::TargetVar(_, v) => {
                    self.rules.insert(
                        v.clone(),
                        Rule { lead: v.clone(), rhs: rest_poly(row, &cols), provenance: prov.clone() },
                    );
                }
                Col::Other(m) => {
                    let clean = row.iter().skip(1).all(|(c, _)| !matches!(cols[*c], Col::Other(_)));
                    if let (Some(v), true) = (m.as_var(), clean) {
                        self.transports.insert(v.clone(), rest_poly(row, &cols));
                    }
                }
                Col::TargetProduct(m) => {
                    return Err(Error::Inconsistent {
                        weight: n,
                        detail: format!(
                            "{} side: relation led by the product {} (from {prov})",
                            side.name(),
                            m.pretty()
                        ),
                    });
                }
            }
        }
        for v in vars {
            if !self.rules.contains_key(&v) {
                irreducible.push(v);
            }
        }
        irreducible.sort();
        self.irreducibles.insert(n, irreducible);
        let weights: Vec<usize> = self.irreducibles_up_to(n).iter().map(ZetaVar::weight).collect();
        self.dimensions.insert(n, monomial_count(&weights, n));
        Ok(())
    }
}

/// Reduce relations of weight `2..=up_to` with the default order policy.
pub fn reduce(relations: &[Relation], up_to: usize) -> Result<RewriteSystem> {
    reduce_with(relations, up_to, OrderPolicy::default())
}

pub fn reduce_with(relations: &[Relation], up_to: usize, policy: OrderPolicy) -> Result<RewriteSystem> {
    let mut by_weight: BTreeMap<usize, Vec<Relation>> = BTreeMap::new();
    for r in relations {
        if r.weight <= up_to {
            by_weight.entry(r.weight).or_default().push(r.clone());
        }
    }
    let mut sys = RewriteSystem::new(policy);
    for n in 2..=up_to {
        sys.extend(by_weight.get(&n).map_or(&[][..], Vec::as_slice))?;
    }
    Ok(sys)
}
