//! Mirror maps, their inverses, and Gromov–Witten generating functions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{
    factorial, invert_formal_map, series_compose_sub, FormalMap, GradedSeries, HalfInt, Substitution, VarSpace,
};
use crate::error::{Error, Result};
use crate::evaluate::Evaluator;
use crate::gf::{gf_closed, gf_open};
use crate::model::{ClassSpace, Model};
use crate::open::OpenTruncationPolicy;
use crate::residue::Sector;

/// A generating function of Gromov–Witten invariants in flat coordinates
/// t^j with Q = e^{t¹}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwSeries {
    pub series: GradedSeries,
    pub sector: Sector,
}

fn norm(model: &Model) -> BigRational {
    BigRational::new(1.into(), model.classical().into())
}

/// The map x ↦ t from unit-insertion correlators, components t^j for the
/// classes 0, 2, ..., j_max, with the t¹ shift carried separately.
fn mirror_map(ev: &Evaluator, model: &Model, dmax: u32, j_max: u32) -> Result<FormalMap> {
    let classes = ClassSpace::upto(j_max);
    let dim = model.dim();
    let nrm = norm(model);
    let mut wanted: Vec<i64> = classes.classes().iter().map(|&j| dim - j as i64).collect();
    wanted.push(dim - 1);
    let series = wanted
        .par_iter()
        .map(|&a| gf_closed(ev, model, a, 0, dmax, j_max).map(|s| s.scale(&nrm)))
        .collect::<Result<Vec<_>>>()?;
    let mut images = series;
    let shift = images.pop().expect("shift component");
    FormalMap::new(images, shift, classes.vars("t"), "Q")
}

/// t^j = (1/k)·w(O_{h^{dim−j}} O_1 | x) for j = 0, 2, ..., j_max ≤ dim.
pub fn mirror_map_closed(ev: &Evaluator, model: &Model, dmax: u32, j_max: u32) -> Result<FormalMap> {
    if j_max as i64 > model.dim() {
        return Err(Error::Invalid(format!(
            "classes above h^{} vanish on {model}; use the open CP² map for formal classes",
            model.dim()
        )));
    }
    mirror_map(ev, model, dmax, j_max)
}

/// CP² map extended to the formal classes 3..=j_max, built from closed
/// correlators with a = 2 − j ≤ −1.
pub fn mirror_map_open_cp2(ev: &Evaluator, dmax: u32, j_max: u32) -> Result<FormalMap> {
    if j_max < 3 {
        return Err(Error::Invalid("the extended map needs j_max >= 3".into()));
    }
    mirror_map(ev, &Model::cp2(), dmax, j_max)
}

/// Position of class j in a series over `classes`, or a bound error.
fn class_pos(space: &Arc<VarSpace>, prefix: &str, j: u32) -> Result<usize> {
    space
        .index_of(&format!("{prefix}{j}"))
        .ok_or_else(|| Error::Bound(format!("class h^{j} is outside the truncation")))
}

/// Inverse substitution x(t), restricted to t^j = 0 for the listed classes.
pub fn inverse_on_slice(map: &FormalMap, zero_classes: &[u32]) -> Result<Substitution> {
    let zero = zero_classes
        .iter()
        .map(|&j| class_pos(map.codomain(), "t", j))
        .collect::<Result<Vec<_>>>()?;
    if zero.is_empty() {
        let inv = invert_formal_map(map)?;
        return Ok(inv.substitution().clone());
    }
    map.invert_on_slice(&zero)
}

/// ⟨O_{h^a} O_{h^b}(t)⟩₀ through Q^dmax.
pub fn gw_closed_gf(ev: &Evaluator, model: &Model, a: i64, b: i64, dmax: u32, j_max: u32) -> Result<GwSeries> {
    let map = mirror_map_closed(ev, model, dmax, j_max)?;
    let inv = inverse_on_slice(&map, &[])?;
    gw_closed_with(ev, model, a, b, dmax, j_max, &inv)
}

/// Same as [`gw_closed_gf`] with a precomputed inverse.
pub fn gw_closed_with(
    ev: &Evaluator,
    model: &Model,
    a: i64,
    b: i64,
    dmax: u32,
    j_max: u32,
    inverse: &Substitution,
) -> Result<GwSeries> {
    let gf = gf_closed(ev, model, a, b, dmax, j_max)?;
    Ok(GwSeries {
        series: series_compose_sub(&gf, inverse)?,
        sector: Sector::Closed,
    })
}

/// Mirror map used for disk invariants: the extended map for CP², the
/// closed map on all classes for a hypersurface.
pub fn open_mirror_map(ev: &Evaluator, model: &Model, dmax: HalfInt, policy: &OpenTruncationPolicy) -> Result<FormalMap> {
    let map_dmax = (dmax - HalfInt::HALF).floor().max(0) as u32;
    match model {
        Model::ProjectiveSpace { n: 3 } => mirror_map_open_cp2(ev, map_dmax, policy.j_max.max(3)),
        Model::Hypersurface { n, .. } => {
            if policy.j_max != n - 2 {
                return Err(Error::Invalid(format!(
                    "hypersurface disk series use exactly the classes up to h^{}",
                    n - 2
                )));
            }
            mirror_map_closed(ev, model, map_dmax, policy.j_max)
        }
        _ => Err(Error::Unsupported(format!("disk invariants are not defined for {model}"))),
    }
}

/// ⟨O_{h^a}(t)⟩_disk through Q^dmax, with t^j = 0 for the classes in
/// `zero_classes`.
pub fn gw_open_gf(
    ev: &Evaluator,
    model: &Model,
    a: i64,
    dmax: HalfInt,
    policy: &OpenTruncationPolicy,
    zero_classes: &[u32],
) -> Result<GwSeries> {
    let policy = match model {
        Model::ProjectiveSpace { .. } => OpenTruncationPolicy {
            j_max: policy.j_max.max(3),
            ..*policy
        },
        _ => *policy,
    };
    let map = open_mirror_map(ev, model, dmax, &policy)?;
    let inv = inverse_on_slice(&map, zero_classes)?;
    gw_open_with(ev, model, a, dmax, &policy, &inv)
}

pub fn gw_open_with(
    ev: &Evaluator,
    model: &Model,
    a: i64,
    dmax: HalfInt,
    policy: &OpenTruncationPolicy,
    inverse: &Substitution,
) -> Result<GwSeries> {
    let gf = gf_open(ev, model, a, dmax, policy)?;
    Ok(GwSeries {
        series: series_compose_sub(&gf, inverse)?,
        sector: Sector::Open,
    })
}

/// q-degree of a degree-d term: d for spheres, d − ½ for disks of degree
/// 2d − 1.
pub fn grade(sector: Sector, d: u32) -> HalfInt {
    match sector {
        Sector::Closed => HalfInt::from_int(d as i64),
        Sector::Open => HalfInt(2 * d as i64 - 1),
    }
}

/// The invariant with the series' front operators and the given extra
/// insertions, ⟨… ∏ O_{h^j}^{m_j}⟩ at degree d. O_h insertions enter through
/// the divisor factor.
pub fn extract_gw(s: &GwSeries, d: u32, insertions: &crate::model::InsertionProfile) -> Result<BigRational> {
    let q = grade(s.sector, d);
    if q > s.series.dmax() {
        return Err(Error::Bound(format!(
            "degree {q} lies beyond the truncation {}",
            s.series.dmax()
        )));
    }
    let space = s.series.space();
    let mut e: crate::algebra::Exps = smallvec::smallvec![0; space.len()];
    let mut weight = BigRational::one();
    for (j, m) in insertions.iter() {
        if j == 1 {
            weight *= crate::algebra::rat_pow(&q.to_rational(), m as i32);
            continue;
        }
        e[class_pos(space, "t", j)?] = m as u16;
        weight *= BigRational::from_integer(factorial(m));
    }
    Ok(s.series.coeff(q, &e) * weight)
}

/// Partial derivative in t^j, with ∂/∂t¹ acting as Q·d/dQ.
pub fn partial(s: &GradedSeries, j: u32) -> Result<GradedSeries> {
    if j == 1 {
        return Ok(s.q_derivative());
    }
    Ok(s.derivative(class_pos(s.space(), "t", j)?))
}

/// Partitions of f in nondecreasing order with S(σ) = ∏ 1/mul(i, σ)!.
pub fn partitions_with_symmetry(f: u32) -> Vec<(Vec<u32>, BigRational)> {
    fn rec(rest: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=rest {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    if f >= 1 {
        rec(f, 1, &mut Vec::new(), &mut parts);
    }
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    parts
        .into_iter()
        .map(|p| {
            let mut s = BigInt::one();
            let mut i = 0;
            while i < p.len() {
                let run = p[i..].iter().take_while(|&&x| x == p[i]).count();
                s *= factorial(run as u32);
                i += run;
            }
            (p, BigRational::new(1.into(), s))
        })
        .collect()
}

/// Closed degree-d invariants N_d of CP² from the associativity recursion.
pub fn kontsevich_numbers(dmax: u32) -> Vec<BigInt> {
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for d in 2..=dmax as i64 {
        let mut acc = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let c1 = crate::algebra::binomial(3 * d - 4, (3 * d1 - 2) as u32);
            let c2 = crate::algebra::binomial(3 * d - 4, (3 * d1 - 1) as u32);
            let w = BigInt::from(d1 * d1 * d2) * (BigInt::from(d2) * c1 - BigInt::from(d1) * c2);
            acc += &n[d1 as usize] * &n[d2 as usize] * w;
        }
        n.push(acc);
    }
    n.into_iter().skip(1).take(dmax as usize).collect()
}

/// Kontsevich's N_d read off ⟨O_{h²} O_{h²}(t)⟩₀ of CP².
pub fn cp2_closed_numbers(s: &GwSeries, dmax: u32) -> Result<Vec<BigRational>> {
    (1..=dmax)
        .map(|d| extract_gw(s, d, &crate::model::InsertionProfile::from_pairs(&[(2, 3 * d - 3)])))
        .collect()
}

/// ⟨(O_{h²})^{3d−2}⟩_{disk,2d−1} of CP² under the given truncation policy,
/// read off ⟨O_{h²}(t)⟩_disk on the t²-only slice.
pub fn disk_h2_invariant(ev: &Evaluator, d: u32, policy: &OpenTruncationPolicy) -> Result<BigRational> {
    let j_max = policy.j_max.max(3);
    let zero: Vec<u32> = std::iter::once(0).chain(3..=j_max).collect();
    let s = gw_open_gf(ev, &Model::cp2(), 2, grade(Sector::Open, d), policy, &zero)?;
    extract_gw(&s, d, &crate::model::InsertionProfile::from_pairs(&[(2, 3 * d - 3)]))
}
