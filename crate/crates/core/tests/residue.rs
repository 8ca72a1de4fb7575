use std::sync::Arc;

use vsc_core::algebra::{int, rat, FactoredRational, MultiPoly, VarSpace};
use vsc_core::closed::closed_integrand;
use vsc_core::oracle::{contour_quadrature, QuadratureSpec};
use vsc_core::residue::*;
use vsc_core::{CorrelatorSpec, Error, InsertionProfile, Model};

fn space(n: usize) -> Arc<VarSpace> {
    VarSpace::indexed("z", n)
}

fn lin(s: &Arc<VarSpace>, c: &[i64], e: u32) -> FactoredRational {
    FactoredRational::inverse_linear(s, c.iter().map(|&x| int(x)).collect(), e)
}

fn mono(s: &Arc<VarSpace>, e: &[i32]) -> FactoredRational {
    FactoredRational::laurent_monomial(s, int(1), e)
}

#[test]
fn kernel_w_examples() {
    let s = space(2);
    assert!(kernel_w(0, 1, &s, 0, 1).is_zero());
    assert!(kernel_w(1, 1, &s, 0, 1).same_function(&FactoredRational::constant(&s, int(1))));
    let (z, w) = (MultiPoly::var(&s, 0), MultiPoly::var(&s, 1));
    let want = z.pow(2).add(&z.mul(&w)).add(&w.pow(2));
    assert_eq!(kernel_w_poly(3, 1, &s, 0, 1), want);
    assert_eq!(kernel_w_poly(3, 2, &s, 0, 1), want.scale(&int(2)));
}

#[test]
fn kernel_e_examples() {
    let s = space(2);
    let (z, w) = (MultiPoly::var(&s, 0), MultiPoly::var(&s, 1));
    assert_eq!(kernel_e(1, &s, 0, 1), z.mul(&w));
    let want = z
        .mul(&w)
        .mul(&z.add(&w.scale(&int(2))))
        .mul(&z.scale(&int(2)).add(&w))
        .scale(&int(9));
    assert_eq!(kernel_e(3, &s, 0, 1), want);
    let one = space(1);
    for k in 1..=5u32 {
        let e = kernel_e(k, &one, 0, 0);
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&[(k + 1) as u16]), int((k as i64).pow(k + 1)));
    }
}

#[test]
fn kernel_f_examples() {
    let s = space(1);
    let f = kernel_f(4, 1, 1, &s, 0).unwrap();
    assert!(f.same_function(&FactoredRational::laurent_monomial(&s, int(2), &[1])));
    let f = kernel_f(8, 9, 1, &s, 0).unwrap();
    assert!(f.same_function(&FactoredRational::laurent_monomial(&s, int(1890), &[5])));
    for (n, k, d) in [(8u32, 9u32, 2u32), (8, 9, 3), (4, 1, 3), (5, 3, 2)] {
        let f = kernel_f(n, k, d, &s, 0).unwrap();
        let want = (k * d) as i64 - (k as i64 + 1) / 2 + 1 - n as i64 * (d as i64 - 1);
        assert_eq!(homogeneity_degree(&f), Some(want), "N={n} k={k} d={d}");
    }
    assert!(matches!(kernel_f(8, 2, 1, &s, 0), Err(Error::Invalid(_))));
}

#[test]
fn default_radii_examples() {
    assert_eq!(default_radii(1, Sector::Closed).radii, vec![int(7), int(7)]);
    let p = default_radii(2, Sector::Closed);
    assert_eq!(p.radii, vec![int(14), int(18), int(14)]);
    assert!(p.is_valid());
    for d in 1..=7 {
        assert!(default_radii(d, Sector::Closed).is_valid());
        assert!(default_radii(d, Sector::Open).is_valid());
    }
    let open2 = RadiusProfile::new(vec![int(3), int(2)], ProfileShape::OpenChain);
    assert!(open2.is_valid());
    assert!(!RadiusProfile::new(vec![int(7), int(2)], ProfileShape::OpenChain).is_valid());
}

#[test]
fn residue_stage_origin_only() {
    let s = space(2);
    let out = residue_stage(&mono(&s, &[-1, -1]), 0, &RadiusProfile::from_ints(&[1, 1])).unwrap();
    assert!(out.same_function(&mono(&s, &[0, -1])));
}

#[test]
fn residue_stage_excludes_far_root() {
    // 1/(z0³ (2z1 − z0 − z2)) in z0 on (14, 18, 14): the root sits at |2z1 − z2| ≥ 22.
    let s = space(3);
    let f = mono(&s, &[-3, 0, 0]).mul(&lin(&s, &[-1, 2, -1], 1));
    let out = residue_stage(&f, 0, &default_radii(2, Sector::Closed)).unwrap();
    assert!(out.same_function(&lin(&s, &[0, 2, -1], 3)));
}

#[test]
fn residue_stage_both_poles_cancel() {
    // 1/(z1³ (2z1 − z0 − z2)) decays like z1⁻⁴, so the enclosed residues sum to zero.
    let s = space(3);
    let f = mono(&s, &[0, -3, 0]).mul(&lin(&s, &[-1, 2, -1], 1));
    let out = residue_stage(&f, 1, &default_radii(2, Sector::Closed)).unwrap();
    assert!(out.is_zero());

    // Three-variable integrand against numerical quadrature.
    let g = mono(&s, &[-1, -1, -1]).mul(&lin(&s, &[-1, 2, -1], 1));
    let exact = iterated_residue(&g, &RadiusProfile::from_ints(&[1, 16, 1]), &ascending(3)).unwrap();
    let q = contour_quadrature(&QuadratureSpec::new(g, RadiusProfile::from_ints(&[1, 16, 1]), 16, 40)).unwrap();
    assert!(q.distance_to(&exact) < 1e-15, "{} vs {exact}", q.re);
}

#[test]
fn residue_stage_reports_indecisive_pole() {
    let s = space(2);
    let f = mono(&s, &[-1, -1]).mul(&lin(&s, &[1, -1], 1));
    let err = residue_stage(&f, 0, &RadiusProfile::from_ints(&[2, 2])).unwrap_err();
    assert!(matches!(err, Error::IndecisivePole { .. }), "{err}");
}

#[test]
fn iterated_residue_examples() {
    let s = space(2);
    let f = mono(&s, &[-1, -1]);
    assert_eq!(iterated_residue(&f, &RadiusProfile::from_ints(&[1, 1]), &ascending(2)).unwrap(), int(1));

    let spec = CorrelatorSpec::closed(Model::cp2(), 1, 2, 2, InsertionProfile::new());
    let f = closed_integrand(&spec).unwrap();
    let p = default_radii(1, Sector::Closed);
    assert_eq!(iterated_residue(&f, &p, &ascending(2)).unwrap(), int(1));
    assert_eq!(iterated_residue(&f, &p, &descending(2)).unwrap(), int(1));
}

#[test]
fn iterated_residue_rejects_bad_order() {
    let s = space(2);
    let f = mono(&s, &[-1, -1]);
    let p = RadiusProfile::from_ints(&[1, 1]);
    assert!(matches!(iterated_residue(&f, &p, &[0, 0]), Err(Error::Invalid(_))));
    assert!(matches!(iterated_residue(&f, &p, &[0]), Err(Error::Invalid(_))));
}

#[test]
fn homogeneity_examples() {
    let s = space(2);
    assert_eq!(homogeneity_degree(&mono(&s, &[-1, -1])), Some(-2));
    let e = FactoredRational::from_poly(kernel_e(3, &s, 0, 1));
    assert_eq!(homogeneity_degree(&e), Some(4));
    let mixed = FactoredRational::from_poly(MultiPoly::var(&s, 0).add(&MultiPoly::var(&s, 1).pow(2)));
    assert_eq!(homogeneity_degree(&mixed), None);
}

#[test]
fn stage_raises_degree_by_one() {
    let spec = CorrelatorSpec::closed(Model::cp2(), 2, 2, 2, InsertionProfile::from_pairs(&[(2, 3)]));
    let f = closed_integrand(&spec).unwrap();
    let deg = homogeneity_degree(&f).unwrap();
    assert_eq!(deg, -3);
    let g = residue_stage(&f, 0, &default_radii(2, Sector::Closed)).unwrap();
    assert_eq!(homogeneity_degree(&g), Some(deg + 1));
}

#[test]
fn dump_lists_factors() {
    let s = space(2);
    let f = mono(&s, &[-2, 0]).mul(&lin(&s, &[1, -3], 1)).scale(&rat(1, 2));
    let d = f.dump();
    assert!(d.contains("factors:"));
    assert!(d.lines().filter(|l| l.contains(")^")).count() == 2, "{d}");
}
