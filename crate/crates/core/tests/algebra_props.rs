use std::collections::BTreeMap;

use mzv_core::ncpoly::{self, Coproduct, NcPoly, Product, TensorPoly};
use mzv_core::rational::{self, Rational};
use mzv_core::words::{self, Alphabet, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

type Lin = BTreeMap<Vec<u32>, Rational>;

fn add(m: &mut Lin, k: Vec<u32>, c: Rational) {
    let e = m.entry(k).or_insert_with(Rational::zero);
    *e += c;
}

fn prepend(a: u32, m: Lin, out: &mut Lin) {
    for (k, c) in m {
        let mut w = vec![a];
        w.extend(k);
        add(out, w, c);
    }
}

/// `(au) ⧢ (bv) = a(u ⧢ bv) + b(au ⧢ v)`.
fn brute_shuffle(u: &[u32], v: &[u32]) -> Lin {
    let mut out = Lin::new();
    if u.is_empty() || v.is_empty() {
        out.insert([u, v].concat(), Rational::one());
        return out;
    }
    prepend(u[0], brute_shuffle(&u[1..], v), &mut out);
    prepend(v[0], brute_shuffle(u, &v[1..]), &mut out);
    out
}

/// `(au) ⋆ (bv) = a(u ⋆ bv) + b(au ⋆ v) + (a+b)(u ⋆ v)` on letter indices.
fn brute_stuffle(u: &[u32], v: &[u32]) -> Lin {
    let mut out = Lin::new();
    if u.is_empty() || v.is_empty() {
        out.insert([u, v].concat(), Rational::one());
        return out;
    }
    prepend(u[0], brute_stuffle(&u[1..], v), &mut out);
    prepend(v[0], brute_stuffle(u, &v[1..]), &mut out);
    prepend(u[0] + v[0], brute_stuffle(&u[1..], &v[1..]), &mut out);
    out
}

fn to_poly(alphabet: Alphabet, m: Lin) -> NcPoly {
    let mut p = NcPoly::zero(alphabet);
    for (k, c) in m {
        let w = match alphabet {
            Alphabet::X => Word::x(&k).unwrap(),
            Alphabet::Y => Word::y(&k).unwrap(),
        };
        p.add_term(w, c);
    }
    p
}

fn words_upto(alphabet: Alphabet, max: usize) -> Vec<Word> {
    (0..=max).flat_map(|n| words::words_of_weight(alphabet, n)).collect()
}

#[test]
fn products_match_recursive_definitions() {
    for u in words_upto(Alphabet::X, 4) {
        for v in words_upto(Alphabet::X, 4 - u.weight()) {
            let fast = ncpoly::shuffle_words(&u, &v).unwrap();
            assert_eq!(fast, to_poly(Alphabet::X, brute_shuffle(&u.indices(), &v.indices())), "{u} ⧢ {v}");
        }
    }
    for u in words_upto(Alphabet::Y, 5) {
        for v in words_upto(Alphabet::Y, 5 - u.weight()) {
            let fast = ncpoly::stuffle_words(&u, &v).unwrap();
            assert_eq!(fast, to_poly(Alphabet::Y, brute_stuffle(&u.indices(), &v.indices())), "{u} ⋆ {v}");
        }
    }
}

fn comm_assoc(a: &NcPoly, b: &NcPoly, c: &NcPoly, kind: Product) {
    let ab = a.product(b, kind).unwrap();
    assert_eq!(ab, b.product(a, kind).unwrap());
    let left = ab.product(c, kind).unwrap();
    let right = a.product(&b.product(c, kind).unwrap(), kind).unwrap();
    assert_eq!(left, right);
}

#[test]
fn commutative_and_associative_exhaustive() {
    for (alphabet, kind) in
        [(Alphabet::X, Product::Shuffle), (Alphabet::Y, Product::Stuffle), (Alphabet::Y, Product::Shuffle)]
    {
        let ws = words_upto(alphabet, 4);
        for u in &ws {
            for v in ws.iter().filter(|v| u.weight() + v.weight() <= 4) {
                for w in ws.iter().filter(|w| u.weight() + v.weight() + w.weight() <= 4) {
                    comm_assoc(&NcPoly::word(u), &NcPoly::word(v), &NcPoly::word(w), kind);
                }
            }
        }
    }
}

fn arb_y_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(1u32..4, 0..=max_len).prop_map(|v| Word::y(&v).unwrap())
}

fn arb_x_word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u32..2, 0..=max_len).prop_map(|v| Word::x(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_triples_commute_and_associate(u in arb_x_word(2), v in arb_x_word(2), w in arb_x_word(2),
                                            a in arb_y_word(2), b in arb_y_word(2), c in arb_y_word(2)) {
        comm_assoc(&NcPoly::word(&u), &NcPoly::word(&v), &NcPoly::word(&w), Product::Shuffle);
        if a.weight() + b.weight() + c.weight() <= 6 {
            comm_assoc(&NcPoly::word(&a), &NcPoly::word(&b), &NcPoly::word(&c), Product::Stuffle);
        }
    }

    #[test]
    fn concat_distributes_over_sums(u in arb_x_word(3), v in arb_x_word(3), w in arb_x_word(3)) {
        let (pu, pv, pw) = (NcPoly::word(&u), NcPoly::word(&v), NcPoly::word(&w));
        let lhs = pu.concat(&(&pv + &pw)).unwrap();
        let rhs = &pu.concat(&pv).unwrap() + &pu.concat(&pw).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn coproducts_are_dual_to_products() {
    for (alphabet, kind, prod) in
        [(Alphabet::X, Coproduct::Shuffle, Product::Shuffle), (Alphabet::Y, Coproduct::Stuffle, Product::Stuffle)]
    {
        for n in 0..=5 {
            let block = words::words_of_weight(alphabet, n);
            let mut from_products: BTreeMap<(Word, Word, Word), Rational> = BTreeMap::new();
            for a in 0..=n {
                for u in words::words_of_weight(alphabet, a) {
                    for v in words::words_of_weight(alphabet, n - a) {
                        let p = NcPoly::word(&u).product(&NcPoly::word(&v), prod).unwrap();
                        for (w, c) in p.terms() {
                            from_products.insert((w.clone(), u.clone(), v.clone()), c.clone());
                        }
                    }
                }
            }
            let mut from_coproducts = BTreeMap::new();
            for w in &block {
                for ((u, v), c) in ncpoly::coproduct(w, kind).unwrap().terms() {
                    from_coproducts.insert((w.clone(), u.clone(), v.clone()), c.clone());
                }
            }
            assert_eq!(from_products, from_coproducts, "{alphabet} weight {n}");
        }
    }
}

#[test]
fn deconcatenation_is_dual_to_concatenation() {
    for w in words_upto(Alphabet::Y, 5) {
        let d = ncpoly::coproduct(&w, Coproduct::Deconcat).unwrap();
        assert_eq!(d.len(), w.len() + 1);
        for ((u, v), c) in d.terms() {
            assert!(c.is_one());
            assert_eq!(u.concat(v), w);
        }
    }
}

#[test]
fn pi1_is_primitive() {
    for w in words_upto(Alphabet::Y, 5).into_iter().skip(1) {
        let p = ncpoly::pi1(&w).unwrap();
        assert!(ncpoly::primitivity_defect(&p, Coproduct::Stuffle).unwrap().is_zero(), "{w}");
    }
}

/// Ordered tuples of nonempty words with total weight `n`.
fn tuples(n: usize) -> Vec<Vec<Word>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for u in words::words_of_weight(Alphabet::Y, first) {
            for mut rest in tuples(n - first) {
                rest.insert(0, u.clone());
                out.push(rest);
            }
        }
    }
    out
}

fn stuffle_all(ws: &[Word]) -> NcPoly {
    let mut p = NcPoly::one(Alphabet::Y);
    for w in ws {
        p = p.stuffle(&NcPoly::word(w)).unwrap();
    }
    p
}

#[test]
fn pi1_matches_logarithm_series() {
    // π1(w) = Σ_k (-1)^{k-1}/k Σ <w | u1 ⋆ … ⋆ uk> u1…uk
    for n in 1..=5 {
        let mut expected: BTreeMap<Word, NcPoly> = BTreeMap::new();
        for t in tuples(n) {
            let k = t.len() as i64;
            let c = rational::frac(if k % 2 == 1 { 1 } else { -1 }, k);
            let cat = t.iter().fold(Word::empty(Alphabet::Y), |acc, u| acc.concat(u));
            for (w, d) in stuffle_all(&t).terms() {
                expected.entry(w.clone()).or_insert_with(|| NcPoly::zero(Alphabet::Y)).add_term(cat.clone(), &c * d);
            }
        }
        for w in words::words_of_weight(Alphabet::Y, n) {
            let e = expected.remove(&w).unwrap_or_else(|| NcPoly::zero(Alphabet::Y));
            assert_eq!(ncpoly::pi1(&w).unwrap(), e, "{w}");
        }
    }
}

#[test]
fn words_are_reconstructed_from_pi1() {
    // w = Σ_k 1/k! Σ <w | u1 ⋆ … ⋆ uk> π1(u1)…π1(uk)
    for n in 1..=4 {
        let mut rebuilt: BTreeMap<Word, NcPoly> = BTreeMap::new();
        for t in tuples(n) {
            let c = rational::inv_factorial(t.len());
            let mut image = NcPoly::one(Alphabet::Y);
            for u in &t {
                image = image.concat(&ncpoly::pi1(u).unwrap()).unwrap();
            }
            for (w, d) in stuffle_all(&t).terms() {
                rebuilt.entry(w.clone()).or_insert_with(|| NcPoly::zero(Alphabet::Y)).add_scaled(&image, &(&c * d));
            }
        }
        for w in words::words_of_weight(Alphabet::Y, n) {
            assert_eq!(rebuilt[&w], NcPoly::word(&w), "{w}");
        }
    }
}

#[test]
fn letters_from_pi1_of_letters() {
    // y_s = Σ_i 1/i! Σ_{s1+…+si=s} π1(y_{s1})…π1(y_{si})
    for s in 1..=6u32 {
        let mut sum = NcPoly::zero(Alphabet::Y);
        for comp in words::words_of_weight(Alphabet::Y, s as usize) {
            let mut term = NcPoly::one(Alphabet::Y);
            for i in comp.indices() {
                term = term.concat(&ncpoly::pi1(&Word::y(&[i]).unwrap()).unwrap()).unwrap();
            }
            sum.add_scaled(&term, &rational::inv_factorial(comp.len()));
        }
        assert_eq!(sum, NcPoly::word(&Word::y(&[s]).unwrap()), "y{s}");
    }
    let y = |t: &str| Word::parse(Alphabet::Y, t).unwrap();
    assert_eq!(ncpoly::pi1(&y("1")).unwrap(), NcPoly::word(&y("1")));
    let p2 = &NcPoly::word(&y("2")) - &NcPoly::word(&y("1,1")).scale(&rational::frac(1, 2));
    assert_eq!(ncpoly::pi1(&y("2")).unwrap(), p2);
}

#[test]
fn phi_intertwines_coproducts() {
    for w in words_upto(Alphabet::Y, 4) {
        let phi = |u: &Word| ncpoly::phi(&NcPoly::word(u));
        let left = ncpoly::coproduct(&w, Coproduct::Shuffle).unwrap().map(phi, phi).unwrap();
        let right = ncpoly::coproduct_poly(&ncpoly::phi(&NcPoly::word(&w)).unwrap(), Coproduct::Stuffle).unwrap();
        assert_eq!(left, right, "{w}");
    }
}

#[test]
fn phi_inverse_round_trip_and_adjoint_morphism() {
    let adj = |p: &NcPoly| ncpoly::phi_inv_adjoint(p).unwrap();
    for u in words_upto(Alphabet::Y, 4) {
        let pu = NcPoly::word(&u);
        assert_eq!(ncpoly::phi_inv(&ncpoly::phi(&pu).unwrap()).unwrap(), pu);
        for v in words_upto(Alphabet::Y, 4 - u.weight()) {
            let pv = NcPoly::word(&v);
            // the adjoint of φ⁻¹ carries shuffle to stuffle
            let lhs = adj(&pu.shuffle(&pv).unwrap());
            let rhs = adj(&pu).stuffle(&adj(&pv)).unwrap();
            assert_eq!(lhs, rhs, "φ({u} ⧢ {v})");
        }
    }
}

#[test]
fn tensor_pairing_is_bilinear() {
    let y = |t: &str| NcPoly::word(&Word::parse(Alphabet::Y, t).unwrap());
    let t = TensorPoly::tensor(&(&y("2") + &y("1,1")), &y("3")).unwrap();
    assert_eq!(t.pair_with(&y("2"), &y("3")), Rational::one());
    assert!(t.pair_with(&y("3"), &y("3")).is_zero());
}
