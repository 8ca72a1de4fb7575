//! Closed-string virtual structure constants w(O_{h^a} O_{h^b} | ∏ O_{h^{m_i}})_{0,d}.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{int, rat, FactoredRational, MultiPoly, VarSpace};
use crate::error::{Error, Result};
use crate::model::{CorrelatorSpec, InsertionProfile, Model, SectorSpec};
use crate::residue::{default_radii, kernel_e, kernel_w_poly, Sector};

fn closed_parts(spec: &CorrelatorSpec) -> Result<(u32, i64, i64)> {
    match spec.sector {
        SectorSpec::Closed { d, a, b } if d >= 1 => Ok((d, a, b)),
        SectorSpec::Closed { .. } => Err(Error::Invalid("closed correlators need d >= 1".into())),
        SectorSpec::Open { .. } => Err(Error::Invalid("expected a closed-sector spec".into())),
    }
}

/// The integer a + b + Σ(m_i − 1) must equal for a nonzero value.
pub fn closed_target(model: &Model, d: u32) -> i64 {
    let d = d as i64;
    match *model {
        Model::ProjectiveSpace { n } => n as i64 * (d + 1) - 2,
        Model::Hypersurface { n, k } => d * (n as i64 - k as i64) + n as i64 - 3,
    }
}

pub fn selection_closed(spec: &CorrelatorSpec) -> bool {
    let Ok((d, a, b)) = closed_parts(spec) else {
        return false;
    };
    a + b + spec.insertions.weight() == closed_target(&spec.model, d)
}

/// The residue integrand over z_0..z_d.
pub fn closed_integrand(spec: &CorrelatorSpec) -> Result<FactoredRational> {
    let (d, a, b) = closed_parts(spec)?;
    if b < 0 {
        return Err(Error::Invalid("negative b is not supported".into()));
    }
    let d = d as usize;
    let n = spec.model.n() as i32;
    let space = VarSpace::indexed("z", d + 1);
    let mut exps = vec![-n; d + 1];
    exps[0] += a as i32;
    exps[d] += b as i32;
    let mut scalar = BigRational::one();
    if let Model::Hypersurface { k, .. } = spec.model {
        for e in exps.iter_mut().take(d).skip(1) {
            *e -= 1;
        }
        scalar = num_traits::pow(rat(1, k as i64), d - 1);
    }
    let mut f = FactoredRational::laurent_monomial(&space, scalar, &exps);
    for j in 1..d {
        let mut c = vec![BigRational::zero(); d + 1];
        c[j - 1] = int(-1);
        c[j] = int(2);
        c[j + 1] = int(-1);
        f = f.mul(&FactoredRational::inverse_linear(&space, c, 1));
    }
    let mut numer = MultiPoly::one(&space);
    if let Model::Hypersurface { k, .. } = spec.model {
        for j in 1..=d {
            numer = numer.mul(&kernel_e(k, &space, j - 1, j));
        }
    }
    for (cls, m) in spec.insertions.iter() {
        let mut s = MultiPoly::zero(&space);
        for j in 1..=d {
            s.add_assign(&kernel_w_poly(cls, 1, &space, j - 1, j));
        }
        numer = numer.mul(&s.pow(m));
    }
    Ok(f.mul_poly(&numer))
}

/// w(O_{h^a} O_{h^b} | insertions)_{0,d} with the default radii.
pub fn vsc_closed(spec: &CorrelatorSpec) -> Result<BigRational> {
    vsc_closed_with(spec, crate::evaluate::DEFAULT_RETRIES)
}

pub fn vsc_closed_with(spec: &CorrelatorSpec, retries: u32) -> Result<BigRational> {
    let (d, _, _) = closed_parts(spec)?;
    if spec.insertions.get(0) > 0 || !selection_closed(spec) {
        return Ok(BigRational::zero());
    }
    let f = closed_integrand(spec)?;
    crate::evaluate::residue_with_retry(&f, &default_radii(d, Sector::Closed), retries)
}

/// Every insertion profile over classes 2..=j_max with Σ m_j (j−1) = target.
pub fn profiles_with_weight(target: i64, j_max: u32) -> Vec<InsertionProfile> {
    fn rec(target: i64, j: u32, j_max: u32, cur: &mut InsertionProfile, out: &mut Vec<InsertionProfile>) {
        if target == 0 {
            out.push(cur.clone());
            return;
        }
        if j > j_max {
            return;
        }
        let w = (j - 1) as i64;
        let mut m = 0;
        while m as i64 * w <= target {
            let mut next = cur.clone();
            next.add(j, m);
            rec(target - m as i64 * w, j + 1, j_max, &mut next, out);
            m += 1;
        }
    }
    let mut out = Vec::new();
    if target >= 0 {
        rec(target, 2, j_max, &mut InsertionProfile::new(), &mut out);
    }
    out
}
