use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::fmt_monomial;
use super::{format_rational, parse_rational, Exps, HalfInt, VarSpace};
use crate::error::{Error, Result};

/// Truncated power series in x-variables and a half-integer graded q.
/// Terms are keyed by (q-degree, exponent vector), which is also the
/// canonical display order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    space: Arc<VarSpace>,
    qname: String,
    dmax: HalfInt,
    terms: BTreeMap<(HalfInt, Exps), BigRational>,
}

impl GradedSeries {
    pub fn zero(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt) -> Self {
        GradedSeries {
            space: space.clone(),
            qname: qname.to_string(),
            dmax,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt, c: BigRational) -> Self {
        let mut s = Self::zero(space, qname, dmax);
        s.add_term(HalfInt::ZERO, smallvec::smallvec![0; space.len()], c);
        s
    }

    pub fn one(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt) -> Self {
        Self::constant(space, qname, dmax, BigRational::one())
    }

    pub fn var(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt, i: usize) -> Self {
        let mut e: Exps = smallvec::smallvec![0; space.len()];
        e[i] = 1;
        let mut s = Self::zero(space, qname, dmax);
        s.add_term(HalfInt::ZERO, e, BigRational::one());
        s
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn qname(&self) -> &str {
        &self.qname
    }

    pub fn dmax(&self) -> HalfInt {
        self.dmax
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

    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &Exps, &BigRational)> {
        self.terms.iter().map(|((q, e), c)| (*q, e, c))
    }

    pub fn coeff(&self, q: HalfInt, exps: &[u16]) -> BigRational {
        self.terms
            .get(&(q, Exps::from_slice(exps)))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds c·q^q·x^exps; terms above the bound or with negative q are dropped.
    pub fn add_term(&mut self, q: HalfInt, exps: Exps, c: BigRational) {
        assert!(q >= HalfInt::ZERO, "negative q-degree");
        if q > self.dmax || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((q, exps)) {
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

    fn check(&self, other: &GradedSeries) -> Result<()> {
        VarSpace::check(&self.space, &other.space)
    }

    /// Same series over a renamed variable space of equal length.
    pub fn with_names(&self, space: &Arc<VarSpace>, qname: &str) -> Self {
        assert_eq!(space.len(), self.space.len());
        GradedSeries {
            space: space.clone(),
            qname: qname.to_string(),
            dmax: self.dmax,
            terms: self.terms.clone(),
        }
    }

    pub fn truncate(&self, dmax: HalfInt) -> Self {
        let dmax = dmax.min(self.dmax);
        GradedSeries {
            space: self.space.clone(),
            qname: self.qname.clone(),
            dmax,
            terms: self
                .terms
                .iter()
                .filter(|((q, _), _)| *q <= dmax)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_assign(&mut self, other: &GradedSeries) {
        self.check(other).expect("series add");
        self.dmax = self.dmax.min(other.dmax);
        let dmax = self.dmax;
        self.terms.retain(|(q, _), _| *q <= dmax);
        for ((q, e), c) in &other.terms {
            self.add_term(*q, e.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &GradedSeries) -> Self {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &GradedSeries) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut r = Self::zero(&self.space, &self.qname, self.dmax);
        if !s.is_zero() {
            r.terms = self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect();
        }
        r
    }

    /// Multiplies by q^δ, dropping what leaves the bound.
    pub fn shift_q(&self, delta: HalfInt) -> Self {
        let mut r = Self::zero(&self.space, &self.qname, self.dmax);
        for ((q, e), c) in &self.terms {
            r.add_term(*q + delta, e.clone(), c.clone());
        }
        r
    }

    pub fn checked_mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check(other)?;
        let dmax = self.dmax.min(other.dmax);
        let mut r = Self::zero(&self.space, &self.qname, dmax);
        for ((qa, ea), ca) in &self.terms {
            if *qa > dmax {
                break;
            }
            for ((qb, eb), cb) in &other.terms {
                let q = *qa + *qb;
                if q > dmax {
                    break;
                }
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(q, e, ca * cb);
            }
        }
        Ok(r)
    }

    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        self.checked_mul(other).expect("series mul")
    }

    pub fn pow(&self, n: u32) -> GradedSeries {
        let mut acc = Self::one(&self.space, &self.qname, self.dmax);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sets the listed variables to zero.
    pub fn restrict_zero(&self, vars: &[usize]) -> Self {
        let mut r = Self::zero(&self.space, &self.qname, self.dmax);
        for ((q, e), c) in &self.terms {
            if vars.iter().all(|&v| e[v] == 0) {
                r.terms.insert((*q, e.clone()), c.clone());
            }
        }
        r
    }

    /// Partial derivative in the variable with index `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(&self.space, &self.qname, self.dmax);
        for ((q, e), c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                r.add_term(*q, e2, c * BigRational::from_integer(e[var].into()));
            }
        }
        r
    }

    /// Derivative in log q: multiplies each term by its q-degree.
    pub fn q_derivative(&self) -> Self {
        let mut r = Self::zero(&self.space, &self.qname, self.dmax);
        for ((q, e), c) in &self.terms {
            r.add_term(*q, e.clone(), c * q.to_rational());
        }
        r
    }

    /// Lowest q-degree among terms other than the given exponent at q⁰.
    pub fn min_q_excluding(&self, exclude: Option<&[u16]>) -> Option<HalfInt> {
        self.terms
            .keys()
            .find(|(q, e)| !(*q == HalfInt::ZERO && Some(e.as_slice()) == exclude))
            .map(|(q, _)| *q)
    }

    pub fn q_part(&self, q: HalfInt) -> Vec<(&Exps, &BigRational)> {
        self.terms
            .range((q, Exps::new())..)
            .take_while(|((qq, _), _)| *qq == q)
            .map(|((_, e), c)| (e, c))
            .collect()
    }

    fn fmt_q(&self, q: HalfInt, out: &mut String, braces: bool) {
        out.push_str(&self.qname);
        if q == HalfInt::from_int(1) {
            return;
        }
        out.push('^');
        if q.is_integer() {
            out.push_str(&q.floor().to_string());
        } else if braces {
            out.push_str(&format!("{{{}/2}}", q.twice()));
        } else {
            out.push_str(&format!("({}/2)", q.twice()));
        }
    }

    /// Canonical form of one term: `coeff * q^{a/2} * x0^e0 * ...`.
    pub fn term_text(&self, q: HalfInt, e: &[u16], c: &BigRational) -> String {
        let mut s = format_rational(c);
        if q != HalfInt::ZERO {
            s.push_str(" * ");
            self.fmt_q(q, &mut s, true);
        }
        if e.iter().any(|&k| k > 0) {
            s.push_str(" * ");
            fmt_monomial(&self.space, e, &mut s, " * ");
        }
        s
    }

    /// One canonical term per line, in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((q, e), c) in &self.terms {
            out.push_str(&self.term_text(*q, e, c));
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`GradedSeries::to_text`].
    pub fn from_text(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt, text: &str) -> Result<Self> {
        let mut s = Self::zero(space, qname, dmax);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.split(" * ");
            let c = parts
                .next()
                .and_then(parse_rational)
                .ok_or_else(|| Error::Invalid(format!("bad coefficient in `{line}`")))?;
            let mut q = HalfInt::ZERO;
            let mut e: Exps = smallvec::smallvec![0; space.len()];
            for f in parts {
                let (name, pw) = match f.split_once('^') {
                    Some((n, p)) => (n, p.trim_matches(|ch| ch == '{' || ch == '}')),
                    None => (f, "1"),
                };
                if name == qname {
                    q = q + pw
                        .parse::<HalfInt>()
                        .map_err(Error::Invalid)?;
                } else {
                    let i = space
                        .index_of(name)
                        .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
                    let k: u16 = pw
                        .parse()
                        .map_err(|_| Error::Invalid(format!("bad exponent in `{f}`")))?;
                    e[i] += k;
                }
            }
            s.add_term(q, e, c);
        }
        Ok(s)
    }

    /// Human-oriented sum such as `x2 + 34138908 q`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, ((q, e), c)) in self.terms.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            let has_mono = *q != HalfInt::ZERO || e.iter().any(|&k| k > 0);
            if !mag.is_one() || !has_mono {
                factors.push(format_rational(&mag));
            }
            if e.iter().any(|&k| k > 0) {
                let mut m = String::new();
                fmt_monomial(&self.space, e, &mut m, " ");
                factors.push(m);
            }
            if *q != HalfInt::ZERO {
                let mut m = String::new();
                self.fmt_q(*q, &mut m, false);
                factors.push(m);
            }
            out.push_str(&factors.join(" "));
        }
        out
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}
