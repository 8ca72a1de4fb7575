use vsc_core::algebra::*;
use vsc_core::Error;

fn zw() -> std::sync::Arc<VarSpace> {
    VarSpace::new(["z0", "z1"]).unwrap()
}

#[test]
fn poly_mul_examples() {
    let s = zw();
    let (z0, z1) = (MultiPoly::var(&s, 0), MultiPoly::var(&s, 1));
    assert_eq!(z0.add(&z1).mul(&z0.sub(&z1)), z0.pow(2).sub(&z1.pow(2)));
    assert!(z0.add(&z1).mul(&MultiPoly::zero(&s)).is_zero());
    let sq = z0.add(&z1).pow(2);
    assert_eq!(sq.coeff(&[1, 1]), int(2));
    assert_eq!(sq.len(), 3);
}

#[test]
fn poly_mul_rejects_foreign_space() {
    let a = MultiPoly::var(&zw(), 0);
    let b = MultiPoly::var(&VarSpace::new(["w"]).unwrap(), 0);
    assert!(matches!(a.checked_mul(&b), Err(Error::VarSpaceMismatch(_))));
}

#[test]
fn fr_add_examples() {
    let s = zw();
    let inv0 = FactoredRational::laurent_monomial(&s, int(1), &[-1, 0]);
    let inv1 = FactoredRational::laurent_monomial(&s, int(1), &[0, -1]);
    let sum = inv0.add(&inv1);
    let want = FactoredRational::laurent_monomial(&s, int(1), &[-1, -1])
        .mul_poly(&MultiPoly::var(&s, 0).add(&MultiPoly::var(&s, 1)));
    assert!(sum.same_function(&want));
    assert_eq!(sum.denominator().len(), 2);

    assert!(inv0.add(&FactoredRational::zero(&s)).same_function(&inv0));

    let gone = inv0.add(&inv0.scale(&int(-1)));
    assert!(gone.is_zero());
    assert!(gone.denominator().is_empty());
}

#[test]
fn proportional_forms_merge() {
    let s = zw();
    let a = FactoredRational::inverse_linear(&s, vec![int(1), int(2)], 1);
    let b = FactoredRational::inverse_linear(&s, vec![int(-2), int(-4)], 1);
    let p = a.mul(&b);
    assert_eq!(p.denominator().len(), 1);
    assert_eq!(*p.denominator().values().next().unwrap(), 2);
    let at = [int(1), int(1)];
    assert_eq!(p.eval(&at), Some(rat(-1, 18)));
}

#[test]
fn series_mul_examples() {
    let s = VarSpace::new(["x2"]).unwrap();
    let two = HalfInt::from_int(2);
    let one = GradedSeries::one(&s, "q", two);
    let mut qx = GradedSeries::zero(&s, "q", two);
    qx.add_term(HalfInt::from_int(1), smallvec::smallvec![2], int(1));
    let prod = one.add(&qx).mul(&one.sub(&qx));
    let mut want = one.clone();
    want.add_term(two, smallvec::smallvec![4], int(-1));
    assert_eq!(prod, want);

    assert_eq!(qx.mul(&one), qx);

    let mut half = GradedSeries::zero(&s, "q", two);
    half.add_term(HalfInt(1), smallvec::smallvec![0], int(1));
    let sq = half.mul(&half);
    assert_eq!(sq.coeff(HalfInt::from_int(1), &[0]), int(1));
    assert_eq!(sq.len(), 1);
}

#[test]
fn series_mul_truncates_to_smaller_bound() {
    let s = VarSpace::new(["x"]).unwrap();
    let mut a = GradedSeries::zero(&s, "q", HalfInt::from_int(3));
    a.add_term(HalfInt::from_int(2), smallvec::smallvec![0], int(1));
    let b = GradedSeries::one(&s, "q", HalfInt::from_int(1));
    let p = a.mul(&b);
    assert_eq!(p.dmax(), HalfInt::from_int(1));
    assert!(p.is_zero());
}

fn single(name: &str) -> std::sync::Arc<VarSpace> {
    VarSpace::new([name]).unwrap()
}

/// x ↦ x + c·q·x^k over one variable.
fn one_var_map(dom: &str, cod: &str, c: BigRational, k: u16, dmax: i64) -> FormalMap {
    let d = single(dom);
    let mut img = GradedSeries::var(&d, "q", HalfInt::from_int(dmax), 0);
    img.add_term(HalfInt::from_int(1), smallvec::smallvec![k], c);
    FormalMap::new(vec![img], GradedSeries::zero(&d, "q", HalfInt::from_int(dmax)), single(cod), "Q").unwrap()
}

#[test]
fn compose_with_identity_map() {
    let t = single("t2");
    let x = single("x2");
    let s = GradedSeries::var(&x, "q", HalfInt::from_int(3), 0);
    let id = FormalMap::new(
        vec![GradedSeries::var(&t, "Q", HalfInt::from_int(3), 0)],
        GradedSeries::zero(&t, "Q", HalfInt::from_int(3)),
        x.clone(),
        "q",
    )
    .unwrap();
    let out = series_compose(&s, &id).unwrap();
    assert_eq!(out, GradedSeries::var(&t, "Q", HalfInt::from_int(3), 0));
}

#[test]
fn compose_matches_hand_expansion() {
    // s = q (x2)^2 with x2 ↦ t2 − q (t2)^4, truncated at q^2.
    let x = single("x2");
    let mut s = GradedSeries::zero(&x, "q", HalfInt::from_int(2));
    s.add_term(HalfInt::from_int(1), smallvec::smallvec![2], int(1));
    let m = one_var_map("t2", "x2", int(-1), 4, 2);
    let out = series_compose(&s, &m).unwrap();

    // Independent route: expand q·(t − q t⁴)² as a polynomial in (t, q) and drop q³.
    let tq = VarSpace::new(["t", "q"]).unwrap();
    let (tp, qp) = (MultiPoly::var(&tq, 0), MultiPoly::var(&tq, 1));
    let inner = tp.sub(&qp.mul(&tp.pow(4)));
    let full = qp.mul(&inner.pow(2));
    let mut want = GradedSeries::zero(out.space(), "q", HalfInt::from_int(2));
    for (e, c) in full.terms() {
        if e[1] <= 2 {
            want.add_term(HalfInt::from_int(e[1] as i64), smallvec::smallvec![e[0]], c.clone());
        }
    }
    assert_eq!(out, want);
    assert_eq!(out.coeff(HalfInt::from_int(2), &[5]), int(-2));
}

#[test]
fn compose_rejects_wrong_arity() {
    let x = VarSpace::new(["x0", "x2"]).unwrap();
    let s = GradedSeries::var(&x, "q", HalfInt::from_int(1), 0);
    let sub = Substitution::identity(&single("t"), "Q", HalfInt::from_int(1), &[]);
    assert!(matches!(series_compose_sub(&s, &sub), Err(Error::Contract(_))));
}

#[test]
fn invert_examples() {
    let id = FormalMap::identity(&single("x"), "q", HalfInt::from_int(3));
    assert!(invert_formal_map(&id).unwrap().is_identity());

    // t = x + q x^4/4 at q^1 inverts to x = t − q t^4/4.
    let m = one_var_map("x", "t", rat(1, 4), 4, 1);
    let inv = invert_formal_map(&m).unwrap();
    assert_eq!(inv.component(0).coeff(HalfInt::from_int(1), &[4]), rat(-1, 4));
    assert_eq!(inv.component(0).len(), 2);
    let round = m.then_from(&inv).unwrap();
    assert!(round.is_identity());
}

#[test]
fn formal_map_rejects_missing_identity_term() {
    let d = single("x");
    let mut img = GradedSeries::zero(&d, "q", HalfInt::from_int(1));
    img.add_term(HalfInt::from_int(0), smallvec::smallvec![1], int(2));
    let err = FormalMap::new(vec![img], GradedSeries::zero(&d, "q", HalfInt::from_int(1)), single("t"), "Q");
    assert!(matches!(err, Err(Error::Contract(_))));
}

#[test]
fn rational_text_round_trip() {
    for r in [rat(3, 4), int(-7), rat(-291021328876469, 16384), int(0)] {
        assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }
    assert_eq!(format_rational(&rat(6, 3)), "2");
}

#[test]
fn series_text_round_trip() {
    let s = VarSpace::new(["t0", "t2"]).unwrap();
    let mut g = GradedSeries::zero(&s, "Q", HalfInt(5));
    g.add_term(HalfInt(3), smallvec::smallvec![0, 3], rat(-3, 8));
    g.add_term(HalfInt(1), smallvec::smallvec![1, 0], int(2));
    g.add_term(HalfInt::ZERO, smallvec::smallvec![0, 1], int(1));
    let text = g.to_text();
    assert!(text.contains("-3/8 * Q^{3/2} * t2^3"));
    assert_eq!(GradedSeries::from_text(&s, "Q", HalfInt(5), &text).unwrap(), g);
}
