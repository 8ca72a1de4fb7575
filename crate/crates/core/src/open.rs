//! Open-string (disk) virtual structure constants w(O_{h^a} | ∏ O_{h^{m_i}})_{disk,2d−1}.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{int, rat, FactoredRational, MultiPoly, VarSpace};
use crate::error::{Error, Result};
use crate::model::{CorrelatorSpec, Model, SectorSpec};
use crate::residue::{default_radii, kernel_e, kernel_w_poly, Sector};

/// Which formal insertions and how many O_1 insertions enter a disk
/// generating function aimed at top disk degree 2·top_degree − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpenTruncationPolicy {
    pub j_max: u32,
    pub top_degree: u32,
    /// Extra O_1 insertions allowed on top of top_degree − f at disk degree 2f − 1.
    pub extra_units: u32,
}

impl OpenTruncationPolicy {
    /// x^0..x^d and at most d − f units, the cut that leaves
    /// ⟨(O_{h²})^{3d−2}⟩_{disk,2d−1} untouched.
    pub fn for_degree(d: u32) -> Self {
        OpenTruncationPolicy {
            j_max: d.max(2),
            top_degree: d,
            extra_units: 0,
        }
    }

    /// Hypersurfaces use only their own classes; one extra unit keeps the
    /// leading t⁰ term at every degree.
    pub fn for_hypersurface(model: &Model, d: u32) -> Self {
        OpenTruncationPolicy {
            j_max: model.n() - 2,
            top_degree: d,
            extra_units: 1,
        }
    }

    pub fn unit_cap(&self, f: u32) -> u32 {
        (self.top_degree + self.extra_units).saturating_sub(f)
    }
}

fn open_parts(spec: &CorrelatorSpec) -> Result<(u32, i64)> {
    match spec.sector {
        SectorSpec::Open { d, a } if d >= 1 => Ok((d, a)),
        SectorSpec::Open { .. } => Err(Error::Invalid("disk correlators need d >= 1".into())),
        SectorSpec::Closed { .. } => Err(Error::Invalid("expected an open-sector spec".into())),
    }
}

fn check_model(model: &Model) -> Result<()> {
    match *model {
        Model::ProjectiveSpace { n: 3 } => Ok(()),
        Model::ProjectiveSpace { n } => Err(Error::Unsupported(format!(
            "disk invariants are defined for CP² only, not CP^{}",
            n - 1
        ))),
        Model::Hypersurface { k, .. } if k % 2 == 1 => Ok(()),
        Model::Hypersurface { k, .. } => Err(Error::Unsupported(format!("disk invariants need odd k, got {k}"))),
    }
}

/// The integer a + Σ(m_i − 1) must equal for a nonzero disk value.
pub fn open_target(model: &Model, d: u32) -> i64 {
    let d = d as i64;
    match *model {
        Model::ProjectiveSpace { n } => n as i64 * d - 1,
        Model::Hypersurface { n, k } => {
            let (n, k) = (n as i64, k as i64);
            n * d - d - (d - 1) * (k - 1) - (k + 1) / 2
        }
    }
}

pub fn selection_open(spec: &CorrelatorSpec) -> bool {
    let Ok((d, a)) = open_parts(spec) else {
        return false;
    };
    check_model(&spec.model).is_ok() && a + spec.insertions.weight() == open_target(&spec.model, d)
}

fn double_factorial(k: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut j = k as i64;
    while j > 1 {
        acc *= int(j);
        j -= 2;
    }
    acc
}

/// The residue integrand over z_0..z_{d−1}, with z_d = −z_{d−1} already
/// substituted.
pub fn open_integrand(spec: &CorrelatorSpec) -> Result<FactoredRational> {
    let (d, a) = open_parts(spec)?;
    check_model(&spec.model)?;
    let d = d as usize;
    let last = d - 1;
    let n = spec.model.n() as i32;
    let space = VarSpace::indexed("z", d);
    let mut exps = vec![-n; d];
    exps[0] += a as i32;
    let mut scalar = int(2);
    let units = spec.insertions.get(0);
    exps[last] -= units as i32;
    scalar *= num_traits::pow(rat(1, 2), units as usize);
    if let Model::Hypersurface { k, .. } = spec.model {
        exps[last] += (k as i32 + 1) / 2;
        scalar *= double_factorial(k);
        for e in exps.iter_mut().take(last + 1).skip(1) {
            *e -= 1;
        }
        scalar *= num_traits::pow(rat(1, k as i64), last);
    }
    let mut f = FactoredRational::laurent_monomial(&space, scalar, &exps);
    for j in 1..d {
        let mut c = vec![BigRational::zero(); d];
        c[j - 1] = int(-1);
        if j + 1 < d {
            c[j] = int(2);
            c[j + 1] = int(-1);
        } else {
            c[j] = int(3);
        }
        f = f.mul(&FactoredRational::inverse_linear(&space, c, 1));
    }
    let mut numer = MultiPoly::one(&space);
    if let Model::Hypersurface { k, .. } = spec.model {
        for j in 1..d {
            numer = numer.mul(&kernel_e(k, &space, j - 1, j));
        }
    }
    for (cls, m) in spec.insertions.iter() {
        if cls == 0 {
            continue;
        }
        let mut s = MultiPoly::zero(&space);
        for j in 1..d {
            s.add_assign(&kernel_w_poly(cls, 1, &space, j - 1, j));
        }
        let mut e = smallvec::SmallVec::from_elem(0u16, d);
        e[last] = (cls - 1) as u16;
        s.add_term(e, rat(1, 2));
        numer = numer.mul(&s.pow(m));
    }
    Ok(f.mul_poly(&numer))
}

/// w(O_{h^a} | insertions)_{disk,2d−1} with the default radii.
pub fn vsc_open(spec: &CorrelatorSpec) -> Result<BigRational> {
    vsc_open_with(spec, crate::evaluate::DEFAULT_RETRIES)
}

pub fn vsc_open_with(spec: &CorrelatorSpec, retries: u32) -> Result<BigRational> {
    let (d, _) = open_parts(spec)?;
    check_model(&spec.model)?;
    if !selection_open(spec) {
        return Ok(BigRational::zero());
    }
    let f = open_integrand(spec)?;
    crate::evaluate::residue_with_retry(&f, &default_radii(d, Sector::Open), retries)
}
