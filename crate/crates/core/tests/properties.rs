use proptest::prelude::*;
use smallvec::smallvec;

use vsc_core::algebra::*;
use vsc_core::closed::{closed_integrand, closed_target, profiles_with_weight, selection_closed};
use vsc_core::open::open_target;
use vsc_core::residue::*;
use vsc_core::verify::raw_value;
use vsc_core::model::SectorSpec;
use vsc_core::{CorrelatorSpec, Model};

fn poly2() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0u16..4, 0u16..4, -5i64..=5), 0..6).prop_map(|terms| {
        let s = VarSpace::new(["z0", "z1"]).unwrap();
        MultiPoly::from_terms(&s, terms.into_iter().map(|(a, b, c)| (smallvec![a, b], int(c))))
    })
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 2).prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

/// x ↦ x + Σ c q^n x^k with n ≥ 1, over one variable.
fn near_identity(dmax: i64) -> impl Strategy<Value = FormalMap> {
    prop::collection::vec((1i64..=dmax, 0u16..5, -4i64..=4, 1i64..=3), 1..4).prop_map(move |terms| {
        let x = VarSpace::new(["x"]).unwrap();
        let mut img = GradedSeries::var(&x, "q", HalfInt::from_int(dmax), 0);
        for (n, k, c, den) in terms {
            img.add_term(HalfInt::from_int(n), smallvec![k], rat(c, den));
        }
        let shift = GradedSeries::zero(&x, "q", HalfInt::from_int(dmax));
        FormalMap::new(vec![img], shift, VarSpace::new(["t"]).unwrap(), "Q").unwrap()
    })
}

/// A closed CP² spec on the selection locus, chosen by indices.
fn closed_cp2() -> impl Strategy<Value = CorrelatorSpec> {
    (1u32..=3, 0i64..=2, 0i64..=2, any::<prop::sample::Index>()).prop_filter_map("empty", |(d, a, b, pick)| {
        let m = Model::cp2();
        let all = profiles_with_weight(closed_target(&m, d) - a - b, 2);
        (!all.is_empty()).then(|| CorrelatorSpec::closed(m, d, a, b, pick.get(&all).clone()))
    })
}

fn open_cp2() -> impl Strategy<Value = CorrelatorSpec> {
    (1u32..=3, 0i64..=2, any::<prop::sample::Index>()).prop_filter_map("empty", |(d, a, pick)| {
        let m = Model::cp2();
        let all = profiles_with_weight(open_target(&m, d) - a, 3);
        (!all.is_empty()).then(|| CorrelatorSpec::open(m, d, a, pick.get(&all).clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_distributes(a in poly2(), b in poly2(), c in poly2()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn factored_add_agrees_pointwise(
        p in poly2(),
        u in (-3i64..=3, -3i64..=3, 1u32..3),
        v in (-3i64..=3, -3i64..=3, 1u32..3),
        x in point(),
    ) {
        prop_assume!((u.0, u.1) != (0, 0) && (v.0, v.1) != (0, 0));
        let s = p.space().clone();
        let f = FactoredRational::inverse_linear(&s, vec![int(u.0), int(u.1)], u.2).mul_poly(&p);
        let g = FactoredRational::inverse_linear(&s, vec![int(v.0), int(v.1)], v.2);
        let sum = f.add(&g);
        prop_assert!(sum.same_function(&g.add(&f)));
        if let (Some(fx), Some(gx)) = (f.eval(&x), g.eval(&x)) {
            prop_assert_eq!(sum.eval(&x), Some(fx + gx));
        }
    }

    #[test]
    fn linear_forms_normalize(c0 in -4i64..=4, c1 in 1i64..=4, k in -3i64..=3, e in 1u32..4) {
        prop_assume!(k != 0);
        let s = VarSpace::new(["z0", "z1"]).unwrap();
        let a = FactoredRational::inverse_linear(&s, vec![int(c0), int(c1)], e);
        let b = FactoredRational::inverse_linear(&s, vec![int(k * c0), int(k * c1)], e);
        prop_assert_eq!(a.denominator(), b.denominator());
        prop_assert!(b.same_function(&a.scale(&rat_pow(&int(k), -(e as i32)))));
    }

    #[test]
    fn compose_with_identity_is_noop(p in poly2(), n in 0i64..3) {
        let s = p.space().clone();
        let mut series = GradedSeries::zero(&s, "q", HalfInt::from_int(3));
        for (e, c) in p.terms() {
            series.add_term(HalfInt::from_int(n), e.clone(), c.clone());
        }
        let id = FormalMap::identity(&s, "q", HalfInt::from_int(3));
        prop_assert_eq!(series_compose(&series, &id).unwrap(), series);
    }

    #[test]
    fn inversion_round_trips(m in near_identity(3)) {
        let inv = invert_formal_map(&m).unwrap();
        prop_assert!(m.then_from(&inv).unwrap().is_identity());
        prop_assert!(inv.then_from(&m).unwrap().is_identity());
        let back = invert_formal_map(&inv).unwrap();
        prop_assert_eq!(back.components(), m.components());
    }

    #[test]
    fn residue_stage_raises_degree(spec in closed_cp2()) {
        let f = closed_integrand(&spec).unwrap();
        let d = spec.degree();
        let profile = default_radii(d, Sector::Closed);
        let mut g = f.clone();
        let mut deg = homogeneity_degree(&f).unwrap();
        for v in 0..=d as usize {
            g = residue_stage(&g, v, &profile).unwrap();
            if g.is_zero() {
                break;
            }
            deg += 1;
            prop_assert_eq!(homogeneity_degree(&g), Some(deg));
        }
    }

    #[test]
    fn residue_order_independent(spec in closed_cp2()) {
        let f = closed_integrand(&spec).unwrap();
        let n = spec.degree() as usize + 1;
        let profile = default_radii(spec.degree(), Sector::Closed);
        let up = iterated_residue(&f, &profile, &ascending(n)).unwrap();
        let down = iterated_residue(&f, &profile, &descending(n)).unwrap();
        prop_assert_eq!(up, down);
    }

    #[test]
    fn closed_divisor_and_puncture(spec in closed_cp2()) {
        let d = spec.degree() as i64;
        let base = raw_value(&spec, 8).unwrap();
        let with_h = CorrelatorSpec { insertions: spec.insertions.with(1, 1), ..spec.clone() };
        prop_assert_eq!(raw_value(&with_h, 8).unwrap(), base * int(d));
        if let SectorSpec::Closed { d, a, b } = spec.sector {
            if a < 2 {
                let with_one = CorrelatorSpec::closed(spec.model, d, a + 1, b, spec.insertions.with(0, 1));
                prop_assert!(selection_closed(&with_one));
                prop_assert_eq!(raw_value(&with_one, 8).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn open_divisor(spec in open_cp2()) {
        let d = spec.degree() as i64;
        let base = raw_value(&spec, 8).unwrap();
        let with_h = CorrelatorSpec { insertions: spec.insertions.with(1, 1), ..spec };
        prop_assert_eq!(raw_value(&with_h, 8).unwrap(), base * rat(2 * d - 1, 2));
    }
}
