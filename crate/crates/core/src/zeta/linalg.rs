//! Sparse row reduction over Q.
//!
//! Rows are reduced modulo a few 62-bit primes; the reduced echelon form is
//! lifted back to Q by Chinese remaindering and rational reconstruction and
//! then checked exactly against every input row. Exact rational elimination
//! is the fallback when the lift does not verify.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Sparse row over column indices, sorted by index.
pub(crate) type Row = Vec<(usize, Rational)>;

/// A pivot of the reduced echelon form: the fully reduced row (leading
/// coefficient 1) and the index of the input row that introduced it.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Pivot {
    pub row: Row,
    pub source: usize,
}

/// `a - f * b`, both sorted.
fn sub_scaled(a: &[(usize, Rational)], f: &Rational, b: &[(usize, Rational)]) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let c = &a[i].1 - f * &b[j].1;
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact incremental reduction over Q.
pub(crate) fn rref_exact(rows: &[Row]) -> BTreeMap<usize, Pivot> {
    let mut pivots: BTreeMap<usize, Pivot> = BTreeMap::new();
    for (source, row) in rows.iter().enumerate() {
        let mut acc = row.clone();
        for (col, c) in row {
            if let Some(p) = pivots.get(col) {
                // pivot rows are fully reduced, so `col` still carries `c`
                acc = sub_scaled(&acc, c, &p.row);
            }
        }
        let Some((lead, c)) = acc.first().cloned() else { continue };
        let inv = Rational::one() / c;
        for (_, v) in acc.iter_mut() {
            *v *= &inv;
        }
        for p in pivots.values_mut() {
            if let Ok(k) = p.row.binary_search_by_key(&lead, |e| e.0) {
                let f = p.row[k].1.clone();
                p.row = sub_scaled(&p.row, &f, &acc);
            }
        }
        pivots.insert(lead, Pivot { row: acc, source });
    }
    pivots
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (0..(1u64 << 62)).rev().filter(|&n| n % 2 == 1 && is_prime(n))
}

fn to_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = q.numer().mod_floor(&pb);
    let d = q.denom().mod_floor(&pb);
    let d = u64::try_from(&d).ok()?;
    if d == 0 {
        return None;
    }
    let n = u64::try_from(&n).ok()?;
    Some(mul_mod(n, pow_mod(d, p - 2, p), p))
}

/// Reduced echelon form mod `p` as `(lead, dense row, source)`.
fn rref_mod(rows: &[Row], ncols: usize, p: u64) -> Option<Vec<(usize, Vec<u64>, usize)>> {
    let mut pivots: Vec<(usize, Vec<u64>, usize)> = Vec::new();
    let mut pivot_of = vec![usize::MAX; ncols];
    for (source, row) in rows.iter().enumerate() {
        let mut dense = vec![0u64; ncols];
        for (c, v) in row {
            dense[*c] = to_mod(v, p)?;
        }
        for col in 0..ncols {
            let f = dense[col];
            if f == 0 || pivot_of[col] == usize::MAX {
                continue;
            }
            let prow = &pivots[pivot_of[col]].1;
            for k in col..ncols {
                if prow[k] != 0 {
                    dense[k] = (dense[k] + p - mul_mod(f, prow[k], p)) % p;
                }
            }
        }
        let Some(lead) = dense.iter().position(|&x| x != 0) else { continue };
        let inv = pow_mod(dense[lead], p - 2, p);
        for x in dense.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for (_, prow, _) in pivots.iter_mut() {
            let f = prow[lead];
            if f == 0 {
                continue;
            }
            for k in lead..ncols {
                if dense[k] != 0 {
                    prow[k] = (prow[k] + p - mul_mod(f, dense[k], p)) % p;
                }
            }
        }
        pivot_of[lead] = pivots.len();
        pivots.push((lead, dense, source));
    }
    pivots.sort_by_key(|e| e.0);
    Some(pivots)
}

/// The rational `a/b` with `a ≡ r·b (mod m)` and `|a|, b < sqrt(m/2)`.
fn reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (a, b) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if !a.gcd(&b).is_one() {
        return None;
    }
    Some(Rational::new(a, b))
}

/// Lift residues of one entry, given per-prime values, by CRT.
fn crt(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(r, p) in residues {
        let pb = BigInt::from(p);
        // x + m·k ≡ r (mod p)
        let xm = u64::try_from(&x.mod_floor(&pb)).expect("reduced");
        let mm = u64::try_from(&m.mod_floor(&pb)).expect("reduced");
        let k = mul_mod((r + p - xm) % p, pow_mod(mm, p - 2, p), p);
        x += &m * BigInt::from(k);
        m *= pb;
    }
    (x, m)
}

fn denominator_lcm(row: &[(usize, Rational)]) -> BigInt {
    rational::denominator_lcm(row.iter().map(|(_, v)| v))
}

/// Does every input row lie in the span of the pivots? Checked over the
/// integers: with `L` a common denominator of the pivot rows and `d` one of
/// the input row `r`, `L·d·r` must equal `Σ d·r[c]·(L·R_c)`.
fn verify(rows: &[Row], pivots: &BTreeMap<usize, Pivot>, ncols: usize) -> bool {
    let l = pivots.values().fold(BigInt::one(), |l, p| l.lcm(&denominator_lcm(&p.row)));
    let scaled: BTreeMap<usize, Vec<(usize, BigInt)>> = pivots
        .iter()
        .map(|(c, p)| {
            let row = p.row.iter().map(|(k, v)| (*k, (&l / v.denom()) * v.numer())).collect();
            (*c, row)
        })
        .collect();
    let mut acc = vec![BigInt::zero(); ncols];
    let mut touched: Vec<usize> = Vec::new();
    rows.iter().all(|row| {
        let d = denominator_lcm(row);
        let ints: Vec<(usize, BigInt)> = row.iter().map(|(k, v)| (*k, (&d / v.denom()) * v.numer())).collect();
        for (k, v) in &ints {
            acc[*k] += &l * v;
            touched.push(*k);
        }
        for (c, v) in &ints {
            if let Some(t) = scaled.get(c) {
                for (k, w) in t {
                    acc[*k] -= v * w;
                    touched.push(*k);
                }
            }
        }
        let ok = touched.iter().all(|&k| acc[k].is_zero());
        for k in touched.drain(..) {
            acc[k] = BigInt::zero();
        }
        ok
    })
}

const MAX_PRIMES: usize = 12;

/// A prime with the reduced rows modulo it.
type Image = (u64, Vec<(usize, Vec<u64>, usize)>);

/// Reduced row echelon form over Q, keyed by leading column.
pub(crate) fn rref(rows: &[Row], ncols: usize) -> BTreeMap<usize, Pivot> {
    let mut images: Vec<Image> = Vec::new();
    for p in primes() {
        if images.len() == MAX_PRIMES {
            break;
        }
        let Some(img) = rref_mod(rows, ncols, p) else { continue };
        // keep only primes agreeing with the largest pivot set seen so far
        let shape = |img: &[(usize, Vec<u64>, usize)]| img.iter().map(|e| e.0).collect::<Vec<_>>();
        if let Some((_, first)) = images.first() {
            let (a, b) = (shape(first), shape(&img));
            if a != b {
                if b.len() > a.len() || (b.len() == a.len() && b < a) {
                    images.clear();
                } else {
                    continue;
                }
            }
        }
        images.push((p, img));
        if images.len() < 2 {
            continue;
        }
        if let Some(lifted) = lift(&images) {
            if verify(rows, &lifted, ncols) {
                return lifted;
            }
        }
    }
    rref_exact(rows)
}

fn lift(images: &[Image]) -> Option<BTreeMap<usize, Pivot>> {
    let (_, first) = &images[0];
    let mut out = BTreeMap::new();
    for (i, (lead, dense, source)) in first.iter().enumerate() {
        let mut row = Vec::new();
        for k in 0..dense.len() {
            let residues: Vec<(u64, u64)> = images.iter().map(|(p, img)| (img[i].1[k], *p)).collect();
            if residues.iter().all(|r| r.0 == 0) {
                continue;
            }
            let (x, m) = crt(&residues);
            row.push((k, reconstruct(&x, &m)?));
        }
        out.insert(*lead, Pivot { row, source: *source });
    }
    Some(out)
}
