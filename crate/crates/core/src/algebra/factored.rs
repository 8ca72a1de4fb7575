use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{format_rational, rat_pow, LinearForm, MultiPoly, VarSpace};
use crate::error::Result;

/// Multiset of normalized linear forms with positive exponents.
pub type Denominator = BTreeMap<LinearForm, u32>;

/// scalar · numerator / ∏ L^e with every L normalized.
#[derive(Clone, Debug)]
pub struct FactoredRational {
    pub(crate) space: Arc<VarSpace>,
    pub(crate) scalar: BigRational,
    pub(crate) numer: MultiPoly,
    pub(crate) denom: Denominator,
}

impl FactoredRational {
    pub fn new(scalar: BigRational, numer: MultiPoly, denom: Denominator) -> Self {
        let space = numer.space().clone();
        let mut f = FactoredRational {
            space,
            scalar,
            numer,
            denom,
        };
        f.denom.retain(|_, e| *e > 0);
        if f.scalar.is_zero() || f.numer.is_zero() {
            return Self::zero(&f.space);
        }
        f
    }

    pub fn zero(space: &Arc<VarSpace>) -> Self {
        FactoredRational {
            space: space.clone(),
            scalar: BigRational::zero(),
            numer: MultiPoly::zero(space),
            denom: Denominator::new(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::new(BigRational::one(), p, Denominator::new())
    }

    pub fn constant(space: &Arc<VarSpace>, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(space, c))
    }

    /// 1 / (Σ c_i z_i)^e.
    pub fn inverse_linear(space: &Arc<VarSpace>, coeffs: Vec<BigRational>, e: u32) -> Self {
        let (s, form) = LinearForm::normalize(coeffs).expect("zero linear form in a denominator");
        let mut denom = Denominator::new();
        denom.insert(form, e);
        Self::new(rat_pow(&s, -(e as i32)), MultiPoly::one(space), denom)
    }

    /// scalar / ∏ z_i^{e_i} for a monomial with possibly negative exponents.
    pub fn laurent_monomial(space: &Arc<VarSpace>, scalar: BigRational, exps: &[i32]) -> Self {
        let n = space.len();
        let mut num = smallvec::SmallVec::from_elem(0u16, n);
        let mut denom = Denominator::new();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                num[i] = e as u16;
            } else if e < 0 {
                denom.insert(LinearForm::coordinate(n, i), (-e) as u32);
            }
        }
        Self::new(scalar, MultiPoly::monomial(space, num, BigRational::one()), denom)
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numer
    }

    pub fn denominator(&self) -> &Denominator {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn mul(&self, other: &FactoredRational) -> FactoredRational {
        self.checked_mul(other).expect("factored mul")
    }

    pub fn checked_mul(&self, other: &FactoredRational) -> Result<FactoredRational> {
        VarSpace::check(&self.space, &other.space)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.space));
        }
        let mut denom = self.denom.clone();
        for (f, e) in &other.denom {
            *denom.entry(f.clone()).or_insert(0) += e;
        }
        let mut r = Self::new(&self.scalar * &other.scalar, self.numer.mul(&other.numer), denom);
        r.cancel_monomial();
        Ok(r)
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> FactoredRational {
        let mut r = Self::new(self.scalar.clone(), self.numer.mul(p), self.denom.clone());
        r.cancel_monomial();
        r
    }

    pub fn scale(&self, s: &BigRational) -> FactoredRational {
        Self::new(&self.scalar * s, self.numer.clone(), self.denom.clone())
    }

    pub fn add(&self, other: &FactoredRational) -> FactoredRational {
        self.checked_add(other).expect("factored add")
    }

    /// Sum over the least common multiset of denominator factors.
    pub fn checked_add(&self, other: &FactoredRational) -> Result<FactoredRational> {
        VarSpace::check(&self.space, &other.space)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let mut lcm = self.denom.clone();
        for (f, &e) in &other.denom {
            let slot = lcm.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |x: &FactoredRational| {
            let mut p = x.numer.scale(&x.scalar);
            for (f, &e) in &lcm {
                let have = x.denom.get(f).copied().unwrap_or(0);
                if e > have {
                    p = p.mul(&f.to_poly(&x.space).pow(e - have));
                }
            }
            p
        };
        let mut numer = lift(self);
        numer.add_assign(&lift(other));
        let mut r = Self::new(BigRational::one(), numer, lcm);
        r.cancel_linear();
        Ok(r)
    }

    /// Cancels coordinate factors z_i that divide the numerator.
    pub fn cancel_monomial(&mut self) {
        if self.is_zero() {
            return;
        }
        let mins = self.numer.min_exponents();
        if mins.iter().all(|&m| m == 0) {
            return;
        }
        let mut take = smallvec::SmallVec::<[u16; 8]>::from_elem(0, mins.len());
        let mut changed = false;
        for (i, &m) in mins.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let f = LinearForm::coordinate(mins.len(), i);
            if let Some(e) = self.denom.get_mut(&f) {
                let k = (*e).min(m as u32);
                *e -= k;
                take[i] = k as u16;
                changed = true;
            }
        }
        if changed {
            self.numer = self.numer.unshift(&take);
            self.denom.retain(|_, e| *e > 0);
        }
    }

    /// Divides out every denominator form that divides the numerator exactly.
    pub fn cancel_linear(&mut self) {
        if self.is_zero() {
            self.denom.clear();
            return;
        }
        let forms: Vec<LinearForm> = self.denom.keys().cloned().collect();
        for f in forms {
            loop {
                let e = self.denom.get(&f).copied().unwrap_or(0);
                if e == 0 {
                    break;
                }
                match div_linear(&self.numer, &f) {
                    Some(q) => {
                        self.numer = q;
                        if e == 1 {
                            self.denom.remove(&f);
                        } else {
                            self.denom.insert(f.clone(), e - 1);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// Total degree, or `None` when the numerator is not homogeneous.
    /// The zero function has degree 0 by convention.
    pub fn homogeneity_degree(&self) -> Option<i64> {
        let d = self.numer.homogeneous_degree()?;
        let den: i64 = self.denom.values().map(|&e| e as i64).sum();
        Some(d.map(|d| d as i64).unwrap_or(0) - den)
    }

    /// Value at a rational point away from the poles.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let mut den = BigRational::one();
        for (f, &e) in &self.denom {
            let v = f.eval(point);
            if v.is_zero() {
                return None;
            }
            den *= num_traits::pow(v, e as usize);
        }
        Some(&self.scalar * self.numer.eval(point) / den)
    }

    /// Decides equality of the represented functions by cross-multiplication.
    pub fn same_function(&self, other: &FactoredRational) -> bool {
        if *self.space != *other.space {
            return false;
        }
        let cross = |a: &FactoredRational, b: &FactoredRational| {
            let mut p = a.numer.scale(&a.scalar);
            for (f, &e) in &b.denom {
                p = p.mul(&f.to_poly(&a.space).pow(e));
            }
            p
        };
        cross(self, other) == cross(other, self)
    }

    /// Multi-line dump listing numerator terms and denominator factors.
    pub fn dump(&self) -> String {
        let mut s = format!("scalar: {}\nnumerator:\n", format_rational(&self.scalar));
        for (e, c) in self.numer.sorted_terms() {
            let ex: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            s.push_str(&format!("  {} [{}]\n", format_rational(c), ex.join(",")));
        }
        s.push_str("factors:\n");
        for (f, e) in &self.denom {
            s.push_str(&format!("  ({})^{}\n", f.fmt_with(&self.space), e));
        }
        s
    }
}

/// Exact quotient p / f, or `None` when f does not divide p.
pub(crate) fn div_linear(p: &MultiPoly, f: &LinearForm) -> Option<MultiPoly> {
    let space = p.space();
    let lead = f.coeffs().iter().position(|c| !c.is_zero())?;
    let mut rest = f.coeffs().to_vec();
    rest[lead] = BigRational::zero();
    let r = MultiPoly::linear(space, &rest);
    let parts = p.collect_in(lead);
    let n = parts.len() - 1;
    if n == 0 {
        return None;
    }
    let mut q = vec![MultiPoly::zero(space); n];
    q[n - 1] = parts[n].clone();
    for k in (1..n).rev() {
        q[k - 1] = parts[k].sub(&r.mul(&q[k]));
    }
    if !parts[0].sub(&r.mul(&q[0])).is_zero() {
        return None;
    }
    let mut out = MultiPoly::zero(space);
    for (k, qk) in q.into_iter().enumerate() {
        let mut sh = smallvec::SmallVec::<[u16; 8]>::from_elem(0, space.len());
        sh[lead] = k as u16;
        out.add_assign(&qk.shift(&sh));
    }
    Some(out)
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{} * ({})", format_rational(&self.scalar), self.numer)?;
        for (form, e) in &self.denom {
            write!(f, " / ({})^{}", form.fmt_with(&self.space), e)?;
        }
        Ok(())
    }
}
