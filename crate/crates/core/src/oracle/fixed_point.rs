//! Disk invariants ⟨∏ O_{h^{m_i}}⟩_{disk,2d−1} of a degree-k hypersurface in
//! CP^{N−1} (k odd) from localization residues, for d ≤ 3.
//!
//! Residues are taken in ascending order of the variable index; each
//! variable picks up the origin and, where the integrand carries
//! 1/(2z_i − z_{i−1} − z_{i+1}), the moving pole. The radii below realize
//! exactly that selection for the factors that occur.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{int, rat, FactoredRational, MultiPoly, VarSpace};
use crate::error::{Error, Result};
use crate::model::InsertionProfile;
use crate::residue::{ascending, iterated_residue, kernel_e, kernel_f, kernel_w, RadiusProfile};

fn monomial(space: &Arc<VarSpace>, c: BigRational, exps: &[i32]) -> FactoredRational {
    FactoredRational::laurent_monomial(space, c, exps)
}

/// 1/(Σ c_i z_i)
fn inv_linear(space: &Arc<VarSpace>, c: &[BigRational]) -> FactoredRational {
    FactoredRational::inverse_linear(space, c.to_vec(), 1)
}

/// ∏_i (s·z_0^{m_i−1} + Σ_{(u,v)} w_{m_i}(z_u, z_v)).
fn insertions(
    space: &Arc<VarSpace>,
    ins: &InsertionProfile,
    s: &BigRational,
    chain: &[(usize, usize)],
) -> FactoredRational {
    let mut acc = FactoredRational::constant(space, int(1));
    for (j, m) in ins.iter() {
        let mut exps = vec![0; space.len()];
        exps[0] = j as i32 - 1;
        let mut fac = monomial(space, s.clone(), &exps);
        for &(u, v) in chain {
            fac = fac.add(&kernel_w(j, 1, space, u, v));
        }
        for _ in 0..m {
            acc = acc.mul(&fac);
        }
    }
    acc
}

fn measure(space: &Arc<VarSpace>, n: u32) -> FactoredRational {
    monomial(space, int(1), &vec![-(n as i32); space.len()])
}

fn eval(f: &FactoredRational, radii: &[i64]) -> Result<BigRational> {
    iterated_residue(f, &RadiusProfile::from_ints(radii), &ascending(f.space().len()))
}

/// Single-vertex term: ∮ dz/z^N f_{2d−1}(z)·(2z/(2d−1))·∏ ((2d−1)/2·z^{m_i−1}).
fn vertex_term(n: u32, k: u32, d: u32, ins: &InsertionProfile) -> Result<BigRational> {
    let sp = VarSpace::indexed("z", 1);
    let m = (2 * d - 1) as i64;
    let f = measure(&sp, n)
        .mul(&kernel_f(n, k, d, &sp, 0)?)
        .mul(&monomial(&sp, rat(2, m), &[1]))
        .mul(&insertions(&sp, ins, &rat(m, 2), &[]));
    eval(&f, &[1])
}

/// Two-vertex term with f_{2d'−1} at z_0 and the factor
/// (z_1 − z_0)/(k z_0 (c z_0 − z_1)), c = (2d'+1)/(2d'−1).
fn edge_term(n: u32, k: u32, inner: u32, ins: &InsertionProfile) -> Result<BigRational> {
    let sp = VarSpace::indexed("z", 2);
    let m = (2 * inner - 1) as i64;
    let c = rat(2 * inner as i64 + 1, m);
    let diff = FactoredRational::from_poly(MultiPoly::linear(&sp, &[int(-1), int(1)]));
    let f = measure(&sp, n)
        .mul(&kernel_f(n, k, inner, &sp, 0)?)
        .mul_poly(&kernel_e(k, &sp, 0, 1))
        .mul(&diff)
        .mul(&monomial(&sp, rat(1, k as i64), &[-1, 0]))
        .mul(&inv_linear(&sp, &[c, int(-1)]))
        .mul(&insertions(&sp, ins, &rat(m, 2), &[(0, 1)]));
    eval(&f, &[1, 4])
}

/// Three-vertex chain term at disk degree 5.
fn chain_term(n: u32, k: u32, ins: &InsertionProfile) -> Result<BigRational> {
    let sp = VarSpace::indexed("z", 3);
    let kr = rat(1, k as i64);
    let diff = FactoredRational::from_poly(MultiPoly::linear(&sp, &[int(0), int(-1), int(1)]));
    let f = measure(&sp, n)
        .mul(&kernel_f(n, k, 1, &sp, 0)?)
        .mul_poly(&kernel_e(k, &sp, 0, 1).mul(&kernel_e(k, &sp, 1, 2)))
        .mul(&diff)
        .mul(&monomial(&sp, kr.clone() * kr, &[-1, -1, 0]))
        .mul(&inv_linear(&sp, &[int(3), int(-1), int(0)]))
        .mul(&inv_linear(&sp, &[int(-1), int(2), int(-1)]))
        .mul(&insertions(&sp, ins, &rat(1, 2), &[(0, 1), (1, 2)]));
    eval(&f, &[1, 4, 6])
}

/// Three-vertex star term at disk degree 5, with its symmetry factor ½.
fn star_term(n: u32, k: u32, ins: &InsertionProfile) -> Result<BigRational> {
    let sp = VarSpace::indexed("z", 3);
    let kr = rat(1, k as i64);
    let f = measure(&sp, n)
        .mul(&kernel_f(n, k, 1, &sp, 0)?)
        .mul_poly(&kernel_e(k, &sp, 0, 1).mul(&kernel_e(k, &sp, 0, 2)))
        .mul(&monomial(&sp, kr.clone() * kr * rat(1, 2) * rat(1, 2), &[-3, 0, 0]))
        .mul(&insertions(&sp, ins, &rat(1, 2), &[(0, 1), (0, 2)]));
    eval(&f, &[1, 4, 6])
}

/// ⟨∏ O_{h^{m_i}}⟩_{disk,2d−1} for d ∈ {1, 2, 3}. CP² is the case
/// N = 4, k = 1.
pub fn open_gw_fixed_point(n: u32, k: u32, d: u32, ins: &InsertionProfile) -> Result<BigRational> {
    if k % 2 == 0 {
        return Err(Error::Invalid(format!("disk invariants need odd k, got {k}")));
    }
    let mut total = BigRational::zero();
    match d {
        1 => total += vertex_term(n, k, 1, ins)?,
        2 => {
            total += vertex_term(n, k, 2, ins)?;
            total += edge_term(n, k, 1, ins)?;
        }
        3 => {
            total += vertex_term(n, k, 3, ins)?;
            total += edge_term(n, k, 2, ins)?;
            total += chain_term(n, k, ins)?;
            total += star_term(n, k, ins)?;
        }
        _ => return Err(Error::Unsupported(format!("localization formulas stop at d = 3, got {d}"))),
    }
    Ok(total)
}
