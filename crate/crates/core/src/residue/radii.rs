use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::{int, rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Closed,
    Open,
}

/// Which inequalities a profile must keep when it is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileShape {
    /// r_j > (r_{j−1} + r_{j+1})/2 for every interior j.
    Concave,
    /// Concave on 1..=n−2 and 3·r_{n−1} > r_{n−2}.
    OpenChain,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiusProfile {
    pub radii: Vec<BigRational>,
    pub shape: ProfileShape,
}

impl RadiusProfile {
    pub fn new(radii: Vec<BigRational>, shape: ProfileShape) -> Self {
        RadiusProfile { radii, shape }
    }

    pub fn from_ints(radii: &[i64]) -> Self {
        RadiusProfile::new(radii.iter().map(|&r| int(r)).collect(), ProfileShape::Free)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        let r = &self.radii;
        if r.iter().any(|x| *x <= BigRational::zero()) {
            return false;
        }
        let two = int(2);
        let concave_upto = |end: usize| (1..end).all(|j| &r[j] * &two > &r[j - 1] + &r[j + 1]);
        match self.shape {
            ProfileShape::Free => true,
            ProfileShape::Concave => r.len() < 3 || concave_upto(r.len() - 1),
            ProfileShape::OpenChain => {
                let n = r.len();
                n < 2 || (concave_upto(n - 1) && &r[n - 1] * int(3) > r[n - 2])
            }
        }
    }

    /// Multiplies each radius by an independent factor in [0.97, 1.03],
    /// retrying until the shape inequalities hold.
    pub fn perturbed<R: Rng>(&self, rng: &mut R) -> RadiusProfile {
        loop {
            let radii = self
                .radii
                .iter()
                .map(|r| r * (BigRational::one() + rat(rng.gen_range(-30..=30), 1000)))
                .collect();
            let p = RadiusProfile::new(radii, self.shape);
            if p.is_valid() {
                return p;
            }
        }
    }
}

/// Default polycircle radii for a correlator of degree d.
///
/// Closed: r_j = 2(d+1)² − (2j−d)² over z_0..z_d. Open: the closed formula
/// for d−1 over z_0..z_{d−1}, which also satisfies 3r_{d−1} > r_{d−2}.
pub fn default_radii(d: u32, sector: Sector) -> RadiusProfile {
    let (top, shape) = match sector {
        Sector::Closed => (d as i64, ProfileShape::Concave),
        Sector::Open => (d as i64 - 1, ProfileShape::OpenChain),
    };
    let radii = (0..=top)
        .map(|j| int(2 * (top + 1) * (top + 1) - (2 * j - top) * (2 * j - top)))
        .collect();
    RadiusProfile::new(radii, shape)
}
