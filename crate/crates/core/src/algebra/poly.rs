use std::collections::hash_map::Entry;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{format_rational, VarSpace};
use crate::error::Result;

pub type Exps = SmallVec<[u16; 8]>;

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    space: Arc<VarSpace>,
    terms: FxHashMap<Exps, BigRational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        MultiPoly {
            space: space.clone(),
            terms: FxHashMap::default(),
        }
    }

    pub fn constant(space: &Arc<VarSpace>, c: BigRational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(smallvec::smallvec![0; space.len()], c);
        }
        p
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        Self::constant(space, BigRational::one())
    }

    pub fn var(space: &Arc<VarSpace>, i: usize) -> Self {
        let mut e: Exps = smallvec::smallvec![0; space.len()];
        e[i] = 1;
        Self::monomial(space, e, BigRational::one())
    }

    pub fn monomial(space: &Arc<VarSpace>, exps: Exps, c: BigRational) -> Self {
        assert_eq!(exps.len(), space.len(), "exponent vector length");
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Linear polynomial Σ c_i z_i.
    pub fn linear(space: &Arc<VarSpace>, coeffs: &[BigRational]) -> Self {
        let mut p = Self::zero(space);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e: Exps = smallvec::smallvec![0; space.len()];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms(space: &Arc<VarSpace>, terms: impl IntoIterator<Item = (Exps, BigRational)>) -> Self {
        let mut p = Self::zero(space);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exps, BigRational)> {
        self.terms.into_iter()
    }

    /// Terms in descending lexicographic order of exponents.
    pub fn sorted_terms(&self) -> Vec<(&Exps, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp(a.0));
        v
    }

    pub fn coeff(&self, exps: &[u16]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The constant term, for polynomials known to be constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, exps: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &MultiPoly) {
        debug_assert_eq!(*self.space, *other.space);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, s: &BigRational) {
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * s);
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        VarSpace::check(&self.space, &other.space)?;
        let mut r = self.clone();
        r.add_assign(other);
        Ok(r)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_add(other).expect("poly add")
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        r.add_scaled(other, &-BigRational::one());
        r
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> MultiPoly {
        if s.is_zero() {
            return Self::zero(&self.space);
        }
        MultiPoly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        VarSpace::check(&self.space, &other.space)?;
        let mut r = Self::zero(&self.space);
        r.terms.reserve(self.len() * other.len() / 2);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca * cb);
            }
        }
        Ok(r)
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.checked_mul(other).expect("poly mul")
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = Self::one(&self.space);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shift(&self, shift: &[u16]) -> MultiPoly {
        MultiPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max()
    }

    /// Total degree if all monomials share it.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut it = self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        let Some(first) = it.next() else {
            return Some(None);
        };
        it.all(|d| d == first).then_some(Some(first))
    }

    /// Componentwise minimum exponent over all monomials.
    pub fn min_exponents(&self) -> Exps {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return smallvec::smallvec![0; self.space.len()];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Divides by the monomial `exps`; every term must be divisible.
    pub fn unshift(&self, exps: &[u16]) -> MultiPoly {
        MultiPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(x, y)| x - y).collect(), c.clone()))
                .collect(),
        }
    }

    /// Splits as Σ_e var^e · Q_e, returning Q_e with var's exponent cleared.
    pub fn collect_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Self::zero(&self.space); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Substitutes var ↦ value (a polynomial not involving var).
    pub fn substitute(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        let parts = self.collect_in(var);
        let mut acc = Self::zero(&self.space);
        let mut pw = Self::one(&self.space);
        for (k, q) in parts.iter().enumerate() {
            if k > 0 {
                pw = pw.mul(value);
            }
            if !q.is_zero() {
                acc.add_assign(&q.mul(&pw));
            }
        }
        acc
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> MultiPoly {
        let mut r = Self::zero(&self.space);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

pub(crate) fn fmt_monomial(space: &VarSpace, e: &[u16], out: &mut String, sep: &str) {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            out.push_str(sep);
        }
        first = false;
        out.push_str(space.name(i));
        if k > 1 {
            out.push('^');
            out.push_str(&k.to_string());
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            s.push_str(&format_rational(c));
            if e.iter().any(|&k| k > 0) {
                s.push('*');
                fmt_monomial(&self.space, e, &mut s, "*");
            }
        }
        f.write_str(&s)
    }
}
