//! Generating functions of virtual structure constants. The class h¹ is
//! never a variable: its insertions are folded into the q-grading.

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{factorial, int, Exps, GradedSeries, HalfInt};
use crate::closed::{closed_target, profiles_with_weight};
use crate::error::Result;
use crate::evaluate::Evaluator;
use crate::model::{ClassSpace, CorrelatorSpec, InsertionProfile, Model};
use crate::open::{open_target, OpenTruncationPolicy};

fn exponents(classes: &ClassSpace, p: &InsertionProfile) -> (Exps, BigRational) {
    let mut e: Exps = smallvec::smallvec![0; classes.len()];
    let mut denom = num_bigint::BigInt::from(1);
    for (j, m) in p.iter() {
        e[classes.pos(j).expect("class in range")] = m as u16;
        denom *= factorial(m);
    }
    (e, BigRational::new(1.into(), denom))
}

fn fill(
    ev: &Evaluator,
    out: &mut GradedSeries,
    classes: &ClassSpace,
    entries: Vec<(HalfInt, CorrelatorSpec)>,
) -> Result<()> {
    let specs: Vec<CorrelatorSpec> = entries.iter().map(|(_, s)| s.clone()).collect();
    let values = ev.vsc_many(&specs)?;
    for ((q, spec), v) in entries.into_iter().zip(values) {
        if v.is_zero() {
            continue;
        }
        let (e, w) = exponents(classes, &spec.insertions);
        out.add_term(q, e, v * w);
    }
    Ok(())
}

/// w(O_{h^a} O_{h^b} | x) over the classes 0, 2, ..., j_max, through q^dmax.
pub fn gf_closed(ev: &Evaluator, model: &Model, a: i64, b: i64, dmax: u32, j_max: u32) -> Result<GradedSeries> {
    model.validate()?;
    let classes = ClassSpace::upto(j_max);
    let mut out = GradedSeries::zero(&classes.vars("x"), "q", HalfInt::from_int(dmax as i64));
    let c = model.dim() - a - b;
    if c >= 0 && c != 1 && c <= j_max as i64 {
        let mut e: Exps = smallvec::smallvec![0; classes.len()];
        e[classes.pos(c as u32).expect("class in range")] = 1;
        out.add_term(HalfInt::ZERO, e, int(model.classical()));
    }
    let mut entries = Vec::new();
    for d in 1..=dmax {
        for p in profiles_with_weight(closed_target(model, d) - a - b, j_max) {
            entries.push((HalfInt::from_int(d as i64), CorrelatorSpec::closed(model.clone(), d, a, b, p)));
        }
    }
    fill(ev, &mut out, &classes, entries)?;
    Ok(out)
}

/// w(O_{h^a} | x)_disk through q^dmax, with formal classes and O_1
/// insertions limited by `policy`.
pub fn gf_open(
    ev: &Evaluator,
    model: &Model,
    a: i64,
    dmax: HalfInt,
    policy: &OpenTruncationPolicy,
) -> Result<GradedSeries> {
    model.validate()?;
    let classes = ClassSpace::upto(policy.j_max);
    let mut out = GradedSeries::zero(&classes.vars("x"), "q", dmax);
    let mut entries = Vec::new();
    let mut d = 1u32;
    while HalfInt(2 * d as i64 - 1) <= dmax {
        let q = HalfInt(2 * d as i64 - 1);
        for units in 0..=policy.unit_cap(d) {
            let target = open_target(model, d) - a + units as i64;
            for p in profiles_with_weight(target, policy.j_max) {
                let p = if units > 0 { p.with(0, units) } else { p };
                entries.push((q, CorrelatorSpec::open(model.clone(), d, a, p)));
            }
        }
        d += 1;
    }
    fill(ev, &mut out, &classes, entries)?;
    Ok(out)
}
