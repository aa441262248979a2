//! Algebraic invariants over random inputs. Each case draws a seed and
//! builds its inputs with the shared samplers, so failures shrink to a seed.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pdo_core::cmtools::{ord_along, CurveLocalization};
use pdo_core::diffop::{poisson_bracket, principal_symbol};
use pdo_core::schur::{psi1_map, psi_map};
use pdo_core::selftest::sample;
use pdo_core::spectral::{l_act, l_project};
use pdo_core::{DiffOp, OrderKind, Poly, Precision, Window};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn exact_op(r: &mut ChaCha8Rng, order: u32, deg: u32) -> DiffOp {
    sample::operator(r, 2, order, deg, Precision::Exact)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = sample::poly(&mut r, 2, 4);
        let q = sample::poly(&mut r, 2, 4);
        let s = sample::poly(&mut r, 2, 4);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn operator_product_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = exact_op(&mut r, 2, 3);
        let b = exact_op(&mut r, 2, 3);
        let c = exact_op(&mut r, 1, 3);
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(left.sub(&right).unwrap().is_zero());
    }

    #[test]
    fn commutator_is_a_lie_bracket(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = exact_op(&mut r, 2, 2);
        let b = exact_op(&mut r, 1, 2);
        let c = exact_op(&mut r, 1, 2);
        let ab = a.commutator(&b).unwrap();
        prop_assert!(ab.add(&b.commutator(&a).unwrap()).unwrap().is_zero());
        let jacobi = a.commutator(&b.commutator(&c).unwrap()).unwrap()
            .add(&b.commutator(&c.commutator(&a).unwrap()).unwrap()).unwrap()
            .add(&c.commutator(&a.commutator(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn bracket_symbol_is_poisson_bracket(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = exact_op(&mut r, 2, 3);
        let b = exact_op(&mut r, 1, 3);
        let (i, j) = (
            a.order(OrderKind::Raw).unwrap(),
            b.order(OrderKind::Raw).unwrap(),
        );
        let c = a.commutator(&b).unwrap();
        let sa = principal_symbol(&a).unwrap();
        let sb = principal_symbol(&b).unwrap();
        let want = poisson_bracket(&sa, &sb);
        // the order i+j-1 part of [A,B] has symbol {sigma(A), sigma(B)}
        let got = principal_symbol(&c.homogeneous_part(i + j - 1));
        match got {
            Ok(s) => prop_assert!(s.agrees_with(&want), "{} vs {}", s, want),
            Err(_) => prop_assert!(want.is_zero()),
        }
    }

    #[test]
    fn l_is_a_right_module(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = exact_op(&mut r, 2, 3);
        let q = exact_op(&mut r, 2, 3);
        let lhs = l_project(&p.mul(&q).unwrap());
        let rhs = l_act(&l_project(&p), &q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = sample::laurent(&mut r, Window::default(), 20, -30, 0).unwrap();
        let back = psi1_map(&psi_map(&f).unwrap()).unwrap();
        prop_assert!(back.terms().eq(f.terms()));
        let again = psi_map(&psi1_map(&f).unwrap()).unwrap();
        prop_assert!(again.terms().eq(f.terms()));
    }

    #[test]
    fn valuation_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = Window::default();
        let f = sample::laurent(&mut r, w, 10, -10, 10).unwrap();
        let g = sample::laurent(&mut r, w, 10, -10, 10).unwrap();
        let (vf, vg) = (f.valuation().unwrap(), g.valuation().unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().valuation().unwrap(), (vf.0 + vg.0, vf.1 + vg.1));
    }

    #[test]
    fn order_along_a_line_is_additive(seed in any::<u64>(), which in 0usize..4) {
        let mut r = rng(seed);
        let x = Poly::var(2, 0);
        let h = Poly::var(2, 1);
        let primes = [x.clone(), h.clone(), &x - &h, &x + &Poly::one(2)];
        let loc = CurveLocalization::new(primes[which].clone()).unwrap();
        let f = sample::rational(&mut r);
        let g = sample::rational(&mut r);
        let sum = ord_along(&f, &loc).unwrap() + ord_along(&g, &loc).unwrap();
        prop_assert_eq!(ord_along(&f.mul(&g), &loc).unwrap(), sum);
    }
}

#[test]
fn noncommuting_pair_is_detected() {
    let d1 = DiffOp::d(2, 0);
    let x1d1 = DiffOp::x(2, 0).mul(&d1).unwrap();
    let c = d1.commutator(&x1d1).unwrap();
    assert!(!c.is_zero());
    assert!(c.sub(&d1).unwrap().is_zero());
}
