use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, MultiPoly, VarSpace};

/// A nonzero linear form Σ c_i z_i whose first nonzero coefficient is 1.
/// The scalar removed by normalization is handed back to the caller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<BigRational>,
}

impl LinearForm {
    /// Normalizes `coeffs`, returning (scalar, form) with
    /// Σ coeffs_i z_i = scalar · form. `None` for the zero form.
    pub fn normalize(mut coeffs: Vec<BigRational>) -> Option<(BigRational, LinearForm)> {
        let lead = coeffs.iter().find(|c| !c.is_zero())?.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for c in coeffs.iter_mut() {
                *c *= &inv;
            }
        }
        Some((lead, LinearForm { coeffs }))
    }

    pub fn from_ints(coeffs: &[i64]) -> (BigRational, LinearForm) {
        Self::normalize(coeffs.iter().map(|&c| super::int(c)).collect()).expect("nonzero form")
    }

    /// The coordinate form z_i over `n` variables.
    pub fn coordinate(n: usize, i: usize) -> LinearForm {
        let mut coeffs = vec![BigRational::zero(); n];
        coeffs[i] = BigRational::one();
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn involves(&self, i: usize) -> bool {
        !self.coeffs[i].is_zero()
    }

    /// Index of the variable when the form is a single coordinate.
    pub fn as_coordinate(&self) -> Option<usize> {
        let mut nz = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (i, _) = nz.next()?;
        nz.next().is_none().then_some(i)
    }

    pub fn to_poly(&self, space: &Arc<VarSpace>) -> MultiPoly {
        MultiPoly::linear(space, &self.coeffs)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| c * x)
            .sum()
    }

    pub fn fmt_with(&self, space: &VarSpace) -> String {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            if !c.is_one() {
                s.push_str(&format_rational(c));
                s.push('*');
            }
            s.push_str(space.name(i));
        }
        s
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
