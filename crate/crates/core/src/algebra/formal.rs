use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use rustc_hash::FxHashMap;

use super::{Exps, GradedSeries, HalfInt, VarSpace};
use crate::error::{Error, Result};

/// Substitution x^i ↦ images[i] and q ↦ q'·exp(shift), all series over a
/// common domain space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub images: Vec<GradedSeries>,
    pub shift: GradedSeries,
}

impl Substitution {
    pub fn domain(&self) -> &Arc<VarSpace> {
        self.shift.space()
    }

    pub fn dmax(&self) -> HalfInt {
        self.images
            .iter()
            .map(GradedSeries::dmax)
            .fold(self.shift.dmax(), HalfInt::min)
    }

    /// The identity over `space`, optionally with some variables sent to 0.
    pub fn identity(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt, zero: &[usize]) -> Self {
        let images = (0..space.len())
            .map(|i| {
                if zero.contains(&i) {
                    GradedSeries::zero(space, qname, dmax)
                } else {
                    GradedSeries::var(space, qname, dmax, i)
                }
            })
            .collect();
        Substitution {
            images,
            shift: GradedSeries::zero(space, qname, dmax),
        }
    }
}

/// A mirror-type coordinate change: codomain variable j equals
/// `images[j]`, a series in the domain variables whose linear part is the
/// domain variable j, and the codomain log-q equals the domain log-q plus
/// `shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalMap {
    sub: Substitution,
    codomain: Arc<VarSpace>,
    codomain_q: String,
}

impl FormalMap {
    pub fn new(
        images: Vec<GradedSeries>,
        shift: GradedSeries,
        codomain: Arc<VarSpace>,
        codomain_q: &str,
    ) -> Result<Self> {
        let m = FormalMap {
            sub: Substitution { images, shift },
            codomain,
            codomain_q: codomain_q.to_string(),
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let space = self.sub.domain();
        if self.sub.images.len() != space.len() || self.codomain.len() != space.len() {
            return Err(Error::Contract("map arity differs from its domain".into()));
        }
        for (j, img) in self.sub.images.iter().enumerate() {
            VarSpace::check(img.space(), space)?;
            let mut unit: Exps = smallvec::smallvec![0; space.len()];
            unit[j] = 1;
            if !img.coeff(HalfInt::ZERO, &unit).is_one() {
                return Err(Error::Contract(format!("component {j} lacks its identity term")));
            }
            if img.min_q_excluding(Some(&unit)) == Some(HalfInt::ZERO) {
                return Err(Error::Contract(format!(
                    "component {j} has nonlinear terms at q-degree 0"
                )));
            }
        }
        if self.sub.shift.min_q_excluding(None) == Some(HalfInt::ZERO) {
            return Err(Error::Contract("shift has a q-degree 0 term".into()));
        }
        Ok(())
    }

    pub fn identity(space: &Arc<VarSpace>, qname: &str, dmax: HalfInt) -> Self {
        FormalMap {
            sub: Substitution::identity(space, qname, dmax, &[]),
            codomain: space.clone(),
            codomain_q: qname.to_string(),
        }
    }

    pub fn domain(&self) -> &Arc<VarSpace> {
        self.sub.domain()
    }

    pub fn codomain(&self) -> &Arc<VarSpace> {
        &self.codomain
    }

    pub fn codomain_q(&self) -> &str {
        &self.codomain_q
    }

    pub fn component(&self, j: usize) -> &GradedSeries {
        &self.sub.images[j]
    }

    pub fn components(&self) -> &[GradedSeries] {
        &self.sub.images
    }

    pub fn shift(&self) -> &GradedSeries {
        &self.sub.shift
    }

    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    pub fn dmax(&self) -> HalfInt {
        self.sub.dmax()
    }

    /// Composition self ∘ inner, where inner's codomain is self's domain.
    pub fn then_from(&self, inner: &FormalMap) -> Result<FormalMap> {
        VarSpace::check(inner.codomain(), self.domain())?;
        let images = self
            .sub
            .images
            .iter()
            .map(|s| series_compose_sub(s, &inner.sub))
            .collect::<Result<Vec<_>>>()?;
        let shift = series_compose_sub(&self.sub.shift, &inner.sub)?.add(&inner.sub.shift.truncate(self.dmax()));
        FormalMap::new(images, shift, self.codomain.clone(), &self.codomain_q)
    }

    /// Inverse restricted to the slice where the listed codomain variables
    /// vanish. With an empty list this is the full inverse.
    pub fn invert_on_slice(&self, zero: &[usize]) -> Result<Substitution> {
        let dom = self.domain().clone();
        let tspace = self.codomain.clone();
        let dmax = self.dmax();
        let n = dom.len();
        let corrections: Vec<GradedSeries> = (0..n)
            .map(|j| {
                let x = GradedSeries::var(&dom, dom_q(self), dmax, j);
                self.sub.images[j].truncate(dmax).sub(&x)
            })
            .collect();
        let base = Substitution::identity(&tspace, &self.codomain_q, dmax, zero);
        let mut cur = base.clone();
        let max_iter = 2 * dmax.twice().max(0) as usize + 3;
        for _ in 0..max_iter {
            let mut next = base.clone();
            for j in 0..n {
                let c = series_compose_sub(&corrections[j], &cur)?;
                next.images[j] = next.images[j].sub(&c);
            }
            next.shift = series_compose_sub(&self.sub.shift, &cur)?.scale(&-BigRational::one());
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::Internal("inversion did not stabilize".into()))
    }
}

fn dom_q(m: &FormalMap) -> &str {
    m.sub.shift.qname()
}

/// Inverts a formal map by fixed-point iteration.
pub fn invert_formal_map(m: &FormalMap) -> Result<FormalMap> {
    let sub = m.invert_on_slice(&[])?;
    FormalMap::new(sub.images, sub.shift, m.domain().clone(), dom_q(m))
}

/// Substitutes the map into `s`: s's variable j becomes m's component j.
/// `s` must live over m's codomain.
pub fn series_compose(s: &GradedSeries, m: &FormalMap) -> Result<GradedSeries> {
    VarSpace::check(s.space(), m.codomain())?;
    series_compose_sub(s, &m.sub)
}

/// exp(δ·shift), truncated.
fn exp_shift(shift: &GradedSeries, delta: HalfInt) -> GradedSeries {
    let one = GradedSeries::one(shift.space(), shift.qname(), shift.dmax());
    if shift.is_zero() || delta == HalfInt::ZERO {
        return one;
    }
    let x = shift.scale(&delta.to_rational());
    let mut acc = one.clone();
    let mut term = one;
    let mut n = 1i64;
    loop {
        term = term.mul(&x).scale(&BigRational::new(1.into(), n.into()));
        if term.is_zero() {
            break;
        }
        acc.add_assign(&term);
        n += 1;
    }
    acc
}

/// Composition with an arbitrary substitution (no invariant required).
pub fn series_compose_sub(s: &GradedSeries, sub: &Substitution) -> Result<GradedSeries> {
    if sub.images.len() != s.space().len() {
        return Err(Error::Contract(format!(
            "substitution has {} images for {} variables",
            sub.images.len(),
            s.space().len()
        )));
    }
    let dom = sub.domain().clone();
    let qn = sub.shift.qname().to_string();
    // A term at q-degree q only needs the images to order dmax − q.
    let qmin = s.min_q_excluding(None).unwrap_or(s.dmax());
    let dmax = s.dmax().min(sub.dmax() + qmin);
    let n = s.space().len();
    let need = dmax - qmin;
    let one = GradedSeries::one(&dom, &qn, need);
    let images: Vec<GradedSeries> = sub.images.iter().map(|g| g.truncate(need)).collect();
    let shift = sub.shift.truncate(need);

    let mut by_q: Vec<(HalfInt, Vec<(&Exps, &BigRational)>)> = Vec::new();
    for (q, e, c) in s.terms() {
        if q > dmax {
            break;
        }
        match by_q.last_mut() {
            Some((qq, v)) if *qq == q => v.push((e, c)),
            _ => by_q.push((q, vec![(e, c)])),
        }
    }

    let mut memo: FxHashMap<Exps, GradedSeries> = FxHashMap::default();
    memo.insert(smallvec::smallvec![0; n], one.clone());
    let mut out = GradedSeries::zero(&dom, &qn, dmax);
    for (q, terms) in by_q {
        let room = dmax - q;
        let mut inner = GradedSeries::zero(&dom, &qn, room);
        for (e, c) in terms {
            let p = monomial_image(e, &images, &mut memo);
            inner.add_assign(&p.truncate(room).scale(c));
        }
        if inner.is_zero() {
            continue;
        }
        let factor = exp_shift(&shift.truncate(room), q);
        let full = inner.mul(&factor);
        for (qq, e, c) in full.terms() {
            out.add_term(qq + q, e.clone(), c.clone());
        }
    }
    Ok(out)
}

fn monomial_image(
    e: &Exps,
    images: &[GradedSeries],
    memo: &mut FxHashMap<Exps, GradedSeries>,
) -> GradedSeries {
    if let Some(p) = memo.get(e) {
        return p.clone();
    }
    let j = e.iter().rposition(|&k| k > 0).expect("nonzero monomial");
    let mut prev = e.clone();
    prev[j] -= 1;
    let p = monomial_image(&prev, images, memo).mul(&images[j]);
    memo.insert(e.clone(), p.clone());
    p
}

fn unit(n: usize, j: usize) -> Exps {
    let mut e: Exps = smallvec::smallvec![0; n];
    e[j] = 1;
    e
}

impl FormalMap {
    /// True when every component is exactly its domain variable.
    pub fn is_identity(&self) -> bool {
        self.sub.images.iter().enumerate().all(|(j, g)| {
            g.len() == 1 && g.coeff(HalfInt::ZERO, &unit(g.space().len(), j)).is_one()
        }) && self.sub.shift.is_zero()
    }
}
