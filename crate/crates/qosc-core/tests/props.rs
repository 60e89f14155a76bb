use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use qosc_core::fock::{FockVector, Gen, Label, ModuleSpec, Rep, Tensor, WRep};
use qosc_core::scalar::{qbinom, qfact, qint};
use qosc_core::{Epsilon, LaurentPoly, Param, RatFn, Scalar, Weight, ZPoly};

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i32..=4, -3i64..=3), 0..4)
        .prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly()).prop_map(|(a, b)| if b.is_zero() { Scalar::from_poly(a) } else { Scalar::new(a, b).unwrap() })
}

fn weight(n: usize) -> impl Strategy<Value = Weight> {
    (-2i32..=2, prop::collection::vec(-3i32..=3, n)).prop_map(|(l, d)| Weight::new(l, d))
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (prop::collection::vec(scalar(), 1..3), prop::collection::vec(scalar(), 1..3)).prop_filter_map("nonzero denominator", |(a, b)| {
        let d = ZPoly::from_coeffs(b);
        if d.is_zero() {
            return None;
        }
        RatFn::new(ZPoly::from_coeffs(a), d).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if let Some(i) = a.inv() {
            prop_assert!(a.mul(&i).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn bar_is_involutive_homomorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.add(&b).bar(), a.bar().add(&b.bar()));
        prop_assert_eq!(a.mul(&b).bar(), a.bar().mul(&b.bar()));
        prop_assert_eq!(Scalar::q().bar(), Scalar::q_pow(-1));
    }

    #[test]
    fn qint_recurrence(m in -8i64..8) {
        let two = Scalar::qint(2);
        let lhs = Scalar::qint(m + 1).add(&Scalar::qint(m - 1));
        prop_assert_eq!(lhs, two.mul(&Scalar::qint(m)));
        prop_assert_eq!(Scalar::from_poly(qint(-m)), Scalar::qint(m).neg());
        // [m](q - q^{-1}) = q^m - q^{-m}
        let d = Scalar::q().sub(&Scalar::q_pow(-1));
        prop_assert_eq!(Scalar::qint(m).mul(&d), Scalar::q_pow(m as i32).sub(&Scalar::q_pow(-(m as i32))));
    }

    #[test]
    fn qbinom_matches_factorials(m in 0i64..9, k in 0i64..9) {
        prop_assume!(k <= m);
        let b = Scalar::from_poly(qbinom(m, k).unwrap());
        let f = |x: i64| Scalar::from_poly(qfact(x as u32));
        prop_assert_eq!(b.clone(), f(m).div(&f(k).mul(&f(m - k))).unwrap());
        if 0 < k && k < m {
            // the mirrored Pascal rule
            let a = Scalar::from_poly(qbinom(m - 1, k - 1).unwrap()).mul(&Scalar::q_pow((m - k) as i32));
            let c = Scalar::from_poly(qbinom(m - 1, k).unwrap()).mul(&Scalar::q_pow(-(k as i32)));
            prop_assert_eq!(b, a.add(&c));
        }
    }

    #[test]
    fn qpair_symmetric_and_bimultiplicative(mu in weight(5), nu in weight(5), la in weight(5)) {
        for eps in [Epsilon::alternating(2), Epsilon::alternating_prime(2)] {
            prop_assert_eq!(eps.qpair(&mu, &nu), eps.qpair(&nu, &mu));
            prop_assert_eq!(eps.qpair(&(&mu + &la), &nu), eps.qpair(&mu, &nu).mul(&eps.qpair(&la, &nu)));
        }
    }

    #[test]
    fn specialize_is_homomorphism(a in ratfn(), b in ratfn(), k in -3i32..=3) {
        let c = Scalar::w_pow(2 * k + 1).add(&Scalar::from_i64(2));
        let (sa, sb) = (a.specialize(&c), b.specialize(&c));
        if let (Ok(sa), Ok(sb)) = (sa, sb) {
            prop_assert_eq!(a.add(&b).specialize(&c).unwrap(), sa.add(&sb));
            prop_assert_eq!(a.mul(&b).specialize(&c).unwrap(), sa.mul(&sb));
        }
    }
}

fn w_module(eps: &Epsilon, cutoff: u32) -> (Arc<dyn Rep<Scalar>>, Vec<Label>) {
    let spec = ModuleSpec::w(eps.clone(), Param::one(), cutoff).unwrap();
    (spec.rep::<Scalar>().unwrap(), spec.basis(None))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_shift_weight_uniformly(pick in 0usize..10_000, i in 0usize..3) {
        let eps = Epsilon::alternating(2);
        let (rep, basis) = w_module(&eps, 4);
        let i = i.min(rep.rank());
        let b = &basis[pick % basis.len()];
        let v = FockVector::<Scalar>::basis(b.clone());
        let wb = rep.weight(b);
        for (g, back) in [(Gen::E(i), Gen::F(i)), (Gen::F(i), Gen::E(i))] {
            let x = rep.apply(&g, &v);
            let ws: Vec<Weight> = x.labels().map(|l| rep.weight(l)).collect();
            prop_assert!(ws.windows(2).all(|p| p[0] == p[1]));
            if let Some(w) = ws.first() {
                // the Cartan part sees the same shift on every label
                let kv = rep.apply(&Gen::K(rep.k_weight(i)), &x);
                prop_assert_eq!(kv, x.scaled_scalar(&eps.qpair(w, &rep.k_weight(i))));
                for l in x.labels() {
                    let y = rep.apply(&back, &FockVector::<Scalar>::basis(l.clone()));
                    prop_assert!(y.labels().all(|l2| rep.weight(l2) == wb));
                }
            }
        }
    }

    #[test]
    fn coproduct_is_coassociative(pick in 0usize..10_000, i in 0usize..3, raise in any::<bool>()) {
        let eps = Epsilon::alternating(2);
        let x = Param::one();
        let a: Arc<dyn Rep<Scalar>> = Arc::new(WRep::new(eps.clone(), &x).unwrap());
        let b: Arc<dyn Rep<Scalar>> = Arc::new(WRep::new(eps.clone(), &Param::Value(Scalar::q_pow(2))).unwrap());
        let c: Arc<dyn Rep<Scalar>> = Arc::new(WRep::new(eps.clone(), &Param::Value(Scalar::w_pow(3))).unwrap());
        let left = Tensor::new(vec![Arc::new(Tensor::new(vec![a.clone(), b.clone()]).unwrap()) as Arc<dyn Rep<Scalar>>, c.clone()]).unwrap();
        let right = Tensor::new(vec![a, Arc::new(Tensor::new(vec![b, c]).unwrap()) as Arc<dyn Rep<Scalar>>]).unwrap();
        let spec = ModuleSpec::new(
            eps.clone(),
            (0..3).map(|_| qosc_core::fock::FactorSpec { kind: qosc_core::fock::FactorKind::W, param: Param::one(), parity: None }).collect(),
            2,
        ).unwrap();
        let basis = spec.basis(None);
        let l = &basis[pick % basis.len()];
        let i = i.min(left.rank());
        let g = if raise { Gen::E(i) } else { Gen::F(i) };
        let v = FockVector::<Scalar>::basis(l.clone());
        prop_assert_eq!(left.apply(&g, &v), right.apply(&g, &v));
    }
}
