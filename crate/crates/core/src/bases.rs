//! The four basis families `P`, `S` (either alphabet), `Π`, `Σ` (alphabet
//! `Y`), leading-term decomposition and the truncated diagonal-series
//! factorizations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{self, NcPoly, PolyJson, Product, TensorPoly};
use crate::rational::{self, Rational};
use crate::words::{self, Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    P,
    S,
    Pi,
    Sigma,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::P => "P",
            BasisKind::S => "S",
            BasisKind::Pi => "Pi",
            BasisKind::Sigma => "Sigma",
        }
    }

    /// Whether the leading term is the least word of the support (`P`, `Π`)
    /// rather than the greatest (`S`, `Σ`).
    pub fn leads_with_min(self) -> bool {
        matches!(self, BasisKind::P | BasisKind::Pi)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(BasisKind::P),
            "S" => Ok(BasisKind::S),
            "Pi" | "PI" | "pi" => Ok(BasisKind::Pi),
            "Sigma" | "SIGMA" | "sigma" => Ok(BasisKind::Sigma),
            other => Err(Error::Parse(format!("unknown basis `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisId {
    kind: BasisKind,
    alphabet: Alphabet,
}

impl BasisId {
    pub fn new(kind: BasisKind, alphabet: Alphabet) -> Result<Self> {
        if matches!(kind, BasisKind::Pi | BasisKind::Sigma) && alphabet != Alphabet::Y {
            return Err(Error::InvalidArgument(format!("basis {kind} requires alphabet Y")));
        }
        Ok(BasisId { kind, alphabet })
    }

    pub fn kind(self) -> BasisKind {
        self.kind
    }

    pub fn alphabet(self) -> Alphabet {
        self.alphabet
    }

    pub fn p(alphabet: Alphabet) -> Self {
        BasisId { kind: BasisKind::P, alphabet }
    }

    pub fn s(alphabet: Alphabet) -> Self {
        BasisId { kind: BasisKind::S, alphabet }
    }

    pub fn pi() -> Self {
        BasisId { kind: BasisKind::Pi, alphabet: Alphabet::Y }
    }

    pub fn sigma() -> Self {
        BasisId { kind: BasisKind::Sigma, alphabet: Alphabet::Y }
    }

    /// The family paired with this one by duality.
    pub fn dual(self) -> Self {
        let kind = match self.kind {
            BasisKind::P => BasisKind::S,
            BasisKind::S => BasisKind::P,
            BasisKind::Pi => BasisKind::Sigma,
            BasisKind::Sigma => BasisKind::Pi,
        };
        BasisId { kind, alphabet: self.alphabet }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.alphabet)
    }
}

type Cache = RwLock<HashMap<(BasisId, Word), NcPoly>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(id: BasisId, w: &Word, build: impl FnOnce() -> Result<NcPoly>) -> Result<NcPoly> {
    let key = (id, w.clone());
    if let Some(p) = cache().read().unwrap().get(&key) {
        return Ok(p.clone());
    }
    let p = build()?;
    cache().write().unwrap().insert(key, p.clone());
    Ok(p)
}

/// Basis element `B_w` of the given family.
pub fn basis(id: BasisId, w: &Word) -> Result<NcPoly> {
    if w.alphabet() != id.alphabet {
        return Err(Error::AlphabetMismatch { left: id.alphabet, right: w.alphabet() });
    }
    match id.kind {
        BasisKind::P => basis_p(w),
        BasisKind::S => basis_s(w),
        BasisKind::Pi => basis_pi(w),
        BasisKind::Sigma => basis_sigma(w),
    }
}

/// Bracket at the standard factorization for Lyndon words, concatenation
/// along the Lyndon factorization otherwise.
fn lie_type(id: BasisId, w: &Word, letter: impl Fn(&Word) -> Result<NcPoly>) -> Result<NcPoly> {
    if w.is_empty() {
        return Ok(NcPoly::one(w.alphabet()));
    }
    if w.len() == 1 {
        return letter(w);
    }
    if words::is_lyndon(w)? {
        let (l1, l2) = words::standard_factorization(w)?;
        return basis(id, &l1)?.bracket(&basis(id, &l2)?);
    }
    let mut out = NcPoly::one(w.alphabet());
    for l in words::lyndon_factors(w) {
        out = out.concat(&basis(id, &l)?)?;
    }
    Ok(out)
}

/// Divided-power product of the Lyndon factors' basis elements.
fn divided_powers(id: BasisId, w: &Word, product: Product) -> Result<NcPoly> {
    let mut out = NcPoly::one(w.alphabet());
    for (l, k) in words::lyndon_factorization(w) {
        let b = basis(id, &l)?.power(k, product)?;
        out = out.product(&b.scale(&rational::inv_factorial(k)), product)?;
    }
    Ok(out)
}

pub fn basis_p(w: &Word) -> Result<NcPoly> {
    let id = BasisId::p(w.alphabet());
    cached(id, w, || lie_type(id, w, |l| Ok(NcPoly::word(l))))
}

pub fn basis_s(w: &Word) -> Result<NcPoly> {
    let id = BasisId::s(w.alphabet());
    cached(id, w, || {
        if w.len() <= 1 {
            return Ok(NcPoly::word(w));
        }
        if words::is_lyndon(w)? {
            let first = NcPoly::word(&w.prefix(1));
            return first.concat(&basis_s(&w.suffix(1))?);
        }
        divided_powers(id, w, Product::Shuffle)
    })
}

fn require_y(w: &Word) -> Result<()> {
    if w.alphabet() != Alphabet::Y {
        return Err(Error::WrongAlphabet { expected: Alphabet::Y, found: w.alphabet() });
    }
    Ok(())
}

pub fn basis_pi(w: &Word) -> Result<NcPoly> {
    require_y(w)?;
    let id = BasisId::pi();
    cached(id, w, || lie_type(id, w, ncpoly::pi1))
}

/// `Σ_w`, obtained as the image of `S_w` under the adjoint of `φ⁻¹`, which
/// carries the `(P, S)` duality to the `(Π, Σ)` duality.
pub fn basis_sigma(w: &Word) -> Result<NcPoly> {
    require_y(w)?;
    cached(BasisId::sigma(), w, || ncpoly::phi_inv_adjoint(&basis_s(w)?))
}

/// All words of weight `n` over the basis alphabet.
pub fn block(alphabet: Alphabet, n: usize) -> Vec<Word> {
    words::words_of_weight(alphabet, n)
}

/// `Σ_v` for every `v` of weight `n`, computed independently by solving
/// `<Π_u | Σ_v> = δ_{u,v}` on the weight block.
pub fn sigma_by_dual_solve(n: usize) -> Result<BTreeMap<Word, NcPoly>> {
    let ws = block(Alphabet::Y, n);
    let index: HashMap<&Word, usize> = ws.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let size = ws.len();
    // m[u][w] = <Π_u | w>
    let mut m = vec![vec![Rational::zero(); size]; size];
    for (i, u) in ws.iter().enumerate() {
        for (w, c) in basis_pi(u)?.terms() {
            m[i][index[w]] = c.clone();
        }
    }
    let inv = invert(m)?;
    // Σ_v = Σ_w inv[w][v] · w
    let mut out = BTreeMap::new();
    for (j, v) in ws.iter().enumerate() {
        let mut p = NcPoly::zero(Alphabet::Y);
        for (i, w) in ws.iter().enumerate() {
            p.add_term(w.clone(), inv[i][j].clone());
        }
        out.insert(v.clone(), p);
    }
    Ok(out)
}

/// Gauss-Jordan inverse of a square rational matrix.
fn invert(mut m: Vec<Vec<Rational>>) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot =
            (col..n).find(|&r| !m[r][col].is_zero()).ok_or_else(|| Error::InvalidArgument("singular matrix".into()))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let a = &m[col][j] * &f;
                m[r][j] -= a;
                let b = &inv[col][j] * &f;
                inv[r][j] -= b;
            }
        }
    }
    Ok(inv)
}

/// Coordinates of a homogeneous `p` in the basis `id`, by repeatedly
/// removing the leading term.
pub fn decompose(p: &NcPoly, id: BasisId) -> Result<BTreeMap<Word, Rational>> {
    if p.alphabet() != id.alphabet {
        return Err(Error::AlphabetMismatch { left: id.alphabet, right: p.alphabet() });
    }
    let ws = p.weights();
    if ws.len() > 1 {
        return Err(Error::InvalidArgument(format!(
            "decompose needs a homogeneous polynomial, found weights {:?}",
            ws.into_iter().collect::<Vec<_>>()
        )));
    }
    let mut rest = p.clone();
    let mut coords = BTreeMap::new();
    let budget = 1usize << 20;
    for _ in 0..budget {
        let lead = if id.kind.leads_with_min() { rest.min_word() } else { rest.max_word() };
        let Some(w) = lead.cloned() else {
            return Ok(coords);
        };
        let c = rest.coeff(&w);
        let b = basis(id, &w)?;
        let lc = b.coeff(&w);
        if !lc.is_one() {
            return Err(Error::Decomposition(format!("{id} element for `{w}` is not unitriangular")));
        }
        rest.add_scaled(&b, &-c.clone());
        if rest.coeff(&w).is_zero() {
            coords.insert(w, c);
        } else {
            return Err(Error::Decomposition(format!("leading term `{w}` did not cancel")));
        }
    }
    Err(Error::Decomposition("step budget exhausted".into()))
}

/// `Σ_w c_w B_w`.
pub fn expand(coords: &BTreeMap<Word, Rational>, id: BasisId) -> Result<NcPoly> {
    let mut out = NcPoly::zero(id.alphabet);
    for (w, c) in coords {
        out.add_scaled(&basis(id, w)?, c);
    }
    Ok(out)
}

/// Basis elements of one family at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTable {
    pub id: BasisId,
    pub weight: usize,
    pub lyndon_only: bool,
    pub entries: BTreeMap<Word, NcPoly>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisEntryJson {
    pub basis: String,
    pub word: String,
    pub poly: PolyJson,
}

impl BasisTable {
    pub fn build(id: BasisId, weight: usize, lyndon_only: bool) -> Result<Self> {
        let ws =
            if lyndon_only { words::lyndon_words_of_weight(id.alphabet, weight) } else { block(id.alphabet, weight) };
        let mut entries = BTreeMap::new();
        for w in ws {
            let p = basis(id, &w)?;
            entries.insert(w, p);
        }
        Ok(BasisTable { id, weight, lyndon_only, entries })
    }

    pub fn to_json(&self) -> Vec<BasisEntryJson> {
        self.entries
            .iter()
            .map(|(w, p)| BasisEntryJson {
                basis: self.id.kind.name().to_string(),
                word: w.to_string(),
                poly: p.to_json_value(),
            })
            .collect()
    }

    pub fn from_json(id: BasisId, weight: usize, lyndon_only: bool, rows: &[BasisEntryJson]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for r in rows {
            if r.basis != id.kind.name() {
                return Err(Error::Parse(format!("basis `{}` in a {} table", r.basis, id.kind)));
            }
            let w = Word::parse(id.alphabet, &r.word)?;
            entries.insert(w, NcPoly::from_json_value(&r.poly)?);
        }
        Ok(BasisTable { id, weight, lyndon_only, entries })
    }

    /// Load previously computed entries into the shared cache.
    pub fn install(&self) {
        let mut c = cache().write().unwrap();
        for (w, p) in &self.entries {
            c.entry((self.id, w.clone())).or_insert_with(|| p.clone());
        }
    }
}

/// `∏_{l decreasing} exp(dual_l ⊗ primal_l) - Σ_w w⊗w`, truncated at
/// weight `max_weight`. Uses `(S, P)` with shuffle on the left factor over
/// `X`, and `(Σ, Π)` with stuffle on the left factor over `Y`.
pub fn schutzenberger_truncation(alphabet: Alphabet, max_weight: usize) -> Result<TensorPoly> {
    let (dual, primal, left) = match alphabet {
        Alphabet::X => (BasisId::s(Alphabet::X), BasisId::p(Alphabet::X), Product::Shuffle),
        Alphabet::Y => (BasisId::sigma(), BasisId::pi(), Product::Stuffle),
    };
    let cap = 2 * max_weight;
    let empty = Word::empty(alphabet);
    let mut unit = TensorPoly::zero(alphabet);
    unit.add_term(empty.clone(), empty.clone(), Rational::one());

    let mut lyndon = if max_weight == 0 { Vec::new() } else { words::lyndon_words(alphabet, max_weight)? };
    lyndon.sort();
    lyndon.reverse();

    let mut product = unit.clone();
    for l in &lyndon {
        let t = TensorPoly::tensor(&basis(dual, l)?, &basis(primal, l)?)?;
        let mut exp = unit.clone();
        let mut power = unit.clone();
        let mut k = 1;
        loop {
            power = power.mul_with(&t, left, Product::Concat)?.truncate(cap);
            if power.is_zero() {
                break;
            }
            exp.add_scaled(&power, &rational::inv_factorial(k));
            k += 1;
        }
        product = product.mul_with(&exp, left, Product::Concat)?.truncate(cap);
    }

    let mut residual = product;
    for n in 0..=max_weight {
        for w in block(alphabet, n) {
            residual.add_term(w.clone(), w, -Rational::one());
        }
    }
    Ok(residual)
}
