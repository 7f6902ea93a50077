use std::cmp::Ordering;

use proptest::prelude::*;

use gorecone_core::caselaw::expr::Atom;
use gorecone_core::morasb::{normal_form_traced, replay};
use gorecone_core::poly::{coeff, spoly, ExponentVector, MonomialOrder, OrderKind, Polynomial};
use gorecone_core::semigroup::CurveSpec;
use gorecone_core::toricgen::{detect_structure, instantiate_case1a, Case1aParams, Structure};
use gorecone_core::Error;

fn monomial() -> impl Strategy<Value = ExponentVector> {
    prop::array::uniform4(0u32..6).prop_map(ExponentVector::new)
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(), -4i64..=4), 0..6)
        .prop_map(|ts| Polynomial::from_terms(ts.into_iter().map(|(m, c)| (m, coeff(c)))))
}

fn small_polynomial() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::array::uniform4(0u32..4).prop_map(ExponentVector::new), -3i64..=3), 0..4)
        .prop_map(|ts| Polynomial::from_terms(ts.into_iter().map(|(m, c)| (m, coeff(c)))))
}

fn order() -> impl Strategy<Value = MonomialOrder> {
    (Just([0usize, 1, 2, 3]).prop_shuffle(), any::<bool>()).prop_map(|(r, local)| {
        let kind = if local { OrderKind::NegativeDegrevlex } else { OrderKind::GlobalDegrevlex };
        MonomialOrder::new(kind, r).unwrap()
    })
}

fn local_order() -> impl Strategy<Value = MonomialOrder> {
    Just([0usize, 1, 2, 3]).prop_shuffle().prop_map(|r| MonomialOrder::local(r).unwrap())
}

fn params() -> impl Strategy<Value = Case1aParams> {
    prop::array::uniform8(1u32..5).prop_map(|v| Case1aParams {
        a13: v[0],
        a14: v[1],
        a21: v[2],
        a24: v[3],
        a31: v[4],
        a32: v[5],
        a42: v[6],
        a43: v[7],
    })
}

proptest! {
    #[test]
    fn order_is_total_and_antisymmetric(o in order(), a in monomial(), b in monomial()) {
        let ab = o.compare(&a, &b);
        prop_assert_eq!(ab, o.compare(&b, &a).reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
    }

    #[test]
    fn order_is_transitive(o in order(), a in monomial(), b in monomial(), c in monomial()) {
        if o.compare(&a, &b) != Ordering::Greater && o.compare(&b, &c) != Ordering::Greater {
            prop_assert_ne!(o.compare(&a, &c), Ordering::Greater);
        }
    }

    #[test]
    fn order_is_multiplicative(o in order(), a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!(o.compare(&a, &b), o.compare(&a.mul(&c), &b.mul(&c)));
    }

    #[test]
    fn local_orders_put_one_on_top(o in local_order(), a in monomial()) {
        prop_assume!(!a.is_one());
        prop_assert_eq!(o.compare(&ExponentVector::ONE, &a), Ordering::Greater);
    }

    #[test]
    fn ring_axioms(f in polynomial(), g in polynomial(), h in polynomial()) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in polynomial(), g in polynomial()) {
        let w = [3, 5, 7, 11];
        let mut prod = std::collections::BTreeMap::new();
        for (d1, c1) in f.evaluate_weighted(&w) {
            for (d2, c2) in g.evaluate_weighted(&w) {
                *prod.entry(d1 + d2).or_insert_with(|| coeff(0)) += &c1 * &c2;
            }
        }
        prod.retain(|_, c| *c != coeff(0));
        prop_assert_eq!((&f * &g).evaluate_weighted(&w), prod);
    }

    #[test]
    fn spoly_cancels_leading_terms(o in local_order(), f in polynomial(), g in polynomial()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let s = spoly(&o, &f, &g).unwrap();
        let lcm = f.leading_monomial(&o).unwrap().lcm(&g.leading_monomial(&o).unwrap());
        if let Ok(lm) = s.leading_monomial(&o) {
            prop_assert_eq!(o.compare(&lm, &lcm), Ordering::Less);
        }
    }

    #[test]
    fn weak_normal_forms_replay(
        o in local_order(),
        f in small_polynomial(),
        g in prop::collection::vec(small_polynomial(), 1..4),
    ) {
        prop_assume!(!f.is_zero() && g.iter().all(|p| !p.is_zero()));
        let trace = match normal_form_traced(&o, &f, &g) {
            Ok(t) => t,
            Err(Error::ReductionBudgetExceeded(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let r = replay(&o, &trace, &g).map_err(TestCaseError::fail)?;
        prop_assert!(r.unit && r.descent);
        if let Ok(lm) = trace.result().leading_monomial(&o) {
            for gi in &g {
                prop_assert!(!gi.leading_monomial(&o).unwrap().divides(&lm));
            }
        }
    }

    #[test]
    fn atoms_evaluate_as_written(x in 0u32..20, y in 0u32..20, z in 0u32..20) {
        let look = |s: &str| match s { "a1" => Some(x), "a12" => Some(y), "a34" => Some(z), _ => None };
        let (x, y, z) = (x as i64, y as i64, z as i64);
        let a = Atom::parse("a1+2a12 <= a34-1").unwrap().eval(&look).unwrap();
        prop_assert_eq!((a.lhs, a.rhs, a.truth), (x + 2 * y, z - 1, x + 2 * y < z));
        let b = Atom::parse("a34 > a1").unwrap().eval(&look).unwrap();
        prop_assert_eq!(b.truth, z > x);
        let c = Atom::parse("a12=a1").unwrap().eval(&look).unwrap();
        prop_assert_eq!(c.truth, y == x);
    }

    #[test]
    fn semigroup_is_closed(n in prop::array::uniform4(3u64..30)) {
        let mut n = n;
        n.sort_unstable();
        if let Ok(spec) = CurveSpec::new(n) {
            let t = spec.membership(200);
            for a in (0..=100).filter(|&a| t[a]) {
                for b in (0..=100).filter(|&b| t[b]) {
                    prop_assert!(t[a + b]);
                }
            }
        }
    }

    #[test]
    fn symmetric_semigroups_have_half_as_many_gaps(p in params()) {
        if let Ok(inst) = instantiate_case1a(&p) {
            let r = inst.spec.symmetry_report().unwrap();
            prop_assert!(r.is_symmetric);
            prop_assert_eq!(r.gaps.len() as u64, r.frobenius.div_ceil(2));
            for g in &r.gaps {
                prop_assert!(inst.spec.contains(r.frobenius - g));
            }
        }
    }

    #[test]
    fn relabelled_data_matches_detection(p in params()) {
        if let Ok(inst) = instantiate_case1a(&p) {
            let Structure::Gorenstein(d) = detect_structure(&inst.spec).unwrap() else {
                return Err(TestCaseError::fail("not Gorenstein"));
            };
            prop_assert_eq!(inst.relabeled(&p), Some(d.clone()));
            prop_assert!(d.vanishes_on(&inst.spec));
        }
    }
}
