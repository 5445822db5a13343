use mzv_core::bases::{self, BasisId, BasisKind};
use mzv_core::ncpoly::{self, Coproduct, NcPoly};
use mzv_core::rational::{self, Rational};
use mzv_core::words::{self, Alphabet, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn pairing_is_identity(primal: BasisId, n: usize) {
    let block = bases::block(primal.alphabet(), n);
    let dual = primal.dual();
    let ps: Vec<NcPoly> = block.iter().map(|u| bases::basis(primal, u).unwrap()).collect();
    let ds: Vec<NcPoly> = block.iter().map(|v| bases::basis(dual, v).unwrap()).collect();
    for (i, p) in ps.iter().enumerate() {
        for (j, d) in ds.iter().enumerate() {
            let c = ncpoly::pairing(p, d).unwrap();
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            assert_eq!(c, expected, "<{}_{} | {}_{}>", primal.kind().name(), block[i], dual.kind().name(), block[j]);
        }
    }
}

#[test]
fn duality_p_s_over_x() {
    for n in 1..=7 {
        pairing_is_identity(BasisId::p(Alphabet::X), n);
    }
}

#[test]
fn duality_pi_sigma_over_y() {
    for n in 1..=6 {
        pairing_is_identity(BasisId::pi(), n);
    }
}

#[test]
fn duality_p_s_over_y() {
    for n in 1..=5 {
        pairing_is_identity(BasisId::p(Alphabet::Y), n);
    }
}

#[test]
fn triangular_with_unit_leading_coefficient() {
    let ids = [
        BasisId::p(Alphabet::X),
        BasisId::s(Alphabet::X),
        BasisId::p(Alphabet::Y),
        BasisId::s(Alphabet::Y),
        BasisId::pi(),
        BasisId::sigma(),
    ];
    for id in ids {
        for n in 1..=6 {
            for w in bases::block(id.alphabet(), n) {
                let b = bases::basis(id, &w).unwrap();
                let lead = if id.kind().leads_with_min() { b.min_word() } else { b.max_word() };
                assert_eq!(lead, Some(&w), "{} {w}", id.kind().name());
                assert!(b.coeff(&w).is_one());
            }
        }
    }
}

#[test]
fn lyndon_elements_are_primitive() {
    for l in words::lyndon_words(Alphabet::X, 5).unwrap() {
        let p = bases::basis_p(&l).unwrap();
        assert!(ncpoly::primitivity_defect(&p, Coproduct::Shuffle).unwrap().is_zero(), "P_{l}");
    }
    for l in words::lyndon_words(Alphabet::Y, 5).unwrap() {
        let p = bases::basis_pi(&l).unwrap();
        assert!(ncpoly::primitivity_defect(&p, Coproduct::Stuffle).unwrap().is_zero(), "Π_{l}");
    }
}

#[test]
fn phi_sends_p_to_pi() {
    for n in 1..=5 {
        for w in words::words_of_weight(Alphabet::Y, n) {
            let p = bases::basis(BasisId::p(Alphabet::Y), &w).unwrap();
            assert_eq!(ncpoly::phi(&p).unwrap(), bases::basis_pi(&w).unwrap(), "{w}");
        }
    }
}

#[test]
fn sigma_agrees_with_dual_solve() {
    for n in 1..=6 {
        for (v, s) in bases::sigma_by_dual_solve(n).unwrap() {
            assert_eq!(bases::basis_sigma(&v).unwrap(), s, "Σ_{v}");
        }
    }
}

#[test]
fn projected_sigma_differs_from_s() {
    let l = Word::parse(Alphabet::Y, "3,1,2").unwrap();
    let lx = words::to_x(&l).unwrap();
    let left = bases::basis_sigma(&l).unwrap().to_x().unwrap();
    let right = bases::basis_s(&lx).unwrap();
    assert_ne!(left, right);
}

#[test]
fn schutzenberger_residual_vanishes() {
    for alphabet in [Alphabet::X, Alphabet::Y] {
        for n in 0..=4 {
            let r = bases::schutzenberger_truncation(alphabet, n).unwrap();
            assert!(r.is_zero(), "{alphabet} weight {n}: {r:?}");
        }
    }
}

#[test]
fn basis_ids_validate() {
    assert!(BasisId::new(BasisKind::Pi, Alphabet::X).is_err());
    assert!(BasisId::new(BasisKind::Sigma, Alphabet::Y).is_ok());
    assert_eq!("Sigma".parse::<BasisKind>().unwrap(), BasisKind::Sigma);
}

fn arb_homogeneous(alphabet: Alphabet) -> impl Strategy<Value = NcPoly> {
    (1usize..=6).prop_flat_map(move |n| {
        let block = words::words_of_weight(alphabet, n);
        let len = block.len();
        proptest::collection::vec((0..len, -5i64..=5, 1i64..=4), 1..6).prop_map(move |terms| {
            let mut p = NcPoly::zero(alphabet);
            for (i, a, b) in terms {
                p.add_term(block[i].clone(), rational::frac(a, b));
            }
            p
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decompose_round_trip_x(p in arb_homogeneous(Alphabet::X)) {
        for id in [BasisId::p(Alphabet::X), BasisId::s(Alphabet::X)] {
            let c = bases::decompose(&p, id).unwrap();
            prop_assert_eq!(bases::expand(&c, id).unwrap(), p.clone());
        }
    }

    #[test]
    fn decompose_round_trip_y(p in arb_homogeneous(Alphabet::Y)) {
        for id in [BasisId::pi(), BasisId::sigma(), BasisId::p(Alphabet::Y), BasisId::s(Alphabet::Y)] {
            let c = bases::decompose(&p, id).unwrap();
            prop_assert_eq!(bases::expand(&c, id).unwrap(), p.clone());
        }
    }

    #[test]
    fn decomposition_coefficients_are_pairings(p in arb_homogeneous(Alphabet::Y)) {
        let c = bases::decompose(&p, BasisId::sigma()).unwrap();
        for (w, coeff) in c {
            let pi = bases::basis_pi(&w).unwrap();
            prop_assert_eq!(ncpoly::pairing(&pi, &p).unwrap(), coeff);
        }
    }
}
