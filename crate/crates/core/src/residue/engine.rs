use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::RadiusProfile;
use crate::algebra::{
    format_rational, rat_pow, Denominator, Exps, FactoredRational, LinearForm, MultiPoly, VarSpace,
};
use crate::error::{Error, Result};

type Key = Vec<(LinearForm, u32)>;

/// A sum of factored terms keyed by denominator. This is the working
/// representation between residue stages.
#[derive(Clone, Debug)]
pub struct RationalSum {
    space: Arc<VarSpace>,
    terms: FxHashMap<Key, MultiPoly>,
}

impl RationalSum {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        RationalSum {
            space: space.clone(),
            terms: FxHashMap::default(),
        }
    }

    pub fn from_factored(f: &FactoredRational) -> Self {
        let mut s = Self::zero(f.space());
        if !f.is_zero() {
            let key: Key = f.denominator().iter().map(|(l, e)| (l.clone(), *e)).collect();
            s.add(key, f.numerator().scale(f.scalar()));
        }
        s
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&mut self, key: Key, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(q) => {
                q.add_assign(&p);
                if q.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, p);
            }
        }
    }

    fn merge(&mut self, other: RationalSum) {
        for (k, p) in other.terms {
            self.add(k, p);
        }
    }

    pub fn to_factored(&self) -> FactoredRational {
        let mut keys: Vec<&Key> = self.terms.keys().collect();
        keys.sort();
        let mut acc = FactoredRational::zero(&self.space);
        for k in keys {
            let den: Denominator = k.iter().cloned().collect();
            let t = FactoredRational::new(BigRational::one(), self.terms[k].clone(), den);
            acc = acc.add(&t);
        }
        acc
    }

    /// The scalar value once every variable has been integrated out.
    pub fn constant(&self) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (k, p) in &self.terms {
            if !k.is_empty() {
                return Err(Error::Internal("denominator left after final stage".into()));
            }
            acc += p
                .constant_value()
                .ok_or_else(|| Error::Internal("numerator not constant after final stage".into()))?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PoleClass {
    Enclosed,
    Excluded,
}

/// Interval test for the root of `form` in `var` against the circle |var| = r_var.
fn classify(form: &LinearForm, var: usize, profile: &RadiusProfile, space: &VarSpace) -> Result<PoleClass> {
    let cv = form.coeff(var).abs();
    let mut sum = BigRational::zero();
    let mut biggest = BigRational::zero();
    for (i, c) in form.coeffs().iter().enumerate() {
        if i == var || c.is_zero() {
            continue;
        }
        let t = c.abs() * &profile.radii[i] / &cv;
        if t > biggest {
            biggest = t.clone();
        }
        sum += t;
    }
    let r = &profile.radii[var];
    if &sum < r {
        return Ok(PoleClass::Enclosed);
    }
    let min = &biggest - (&sum - &biggest);
    if &min > r {
        return Ok(PoleClass::Excluded);
    }
    Err(Error::IndecisivePole {
        var: space.name(var).to_string(),
        form: form.fmt_with(space),
        min: format_rational(&min.max(BigRational::zero())),
        max: format_rational(&sum),
        radius: format_rational(r),
    })
}

/// Data for re-expanding another v-dependent factor around a pole.
struct Shifted {
    exp: u32,
    /// coefficient of ε
    c: BigRational,
    /// L(ρ) = s · n
    s: BigRational,
    n: LinearForm,
}

fn binom_neg(e: u32, n: u32) -> BigRational {
    // binom(−e, n) = (−1)^n binom(e+n−1, n)
    let b = crate::algebra::binomial((e + n) as i64 - 1, n);
    let b = BigRational::from_integer(b);
    if n % 2 == 1 {
        -b
    } else {
        b
    }
}

fn compositions(total: u32, parts: usize, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if parts == 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for first in 0..=total {
        cur.push(first);
        compositions(total - first, parts - 1, out, cur);
        cur.pop();
    }
}

/// Taylor coefficients P_0..P_{k−1} of P(ρ + ε) in ε, with var ↦ ρ + ε.
fn taylor_at(p: &MultiPoly, var: usize, rho: &MultiPoly, k: usize) -> Vec<MultiPoly> {
    let space = p.space();
    let parts = p.collect_in(var);
    if rho.is_zero() {
        return (0..k)
            .map(|n| parts.get(n).cloned().unwrap_or_else(|| MultiPoly::zero(space)))
            .collect();
    }
    let mut r = vec![MultiPoly::zero(space); k];
    for q in parts.iter().rev() {
        let mut next = Vec::with_capacity(k);
        for n in 0..k {
            let mut t = if r[n].is_zero() { MultiPoly::zero(space) } else { r[n].mul(rho) };
            if n > 0 {
                t.add_assign(&r[n - 1]);
            }
            next.push(t);
        }
        next[0].add_assign(q);
        r = next;
    }
    r
}

fn cancel_coordinates(key: &mut Key, p: &mut MultiPoly) {
    let mins = p.min_exponents();
    if mins.iter().all(|&m| m == 0) {
        return;
    }
    let mut take: Exps = smallvec::smallvec![0; mins.len()];
    let mut changed = false;
    for (form, e) in key.iter_mut() {
        if let Some(i) = form.as_coordinate() {
            let k = (*e).min((mins[i] - take[i]) as u32);
            if k > 0 {
                *e -= k;
                take[i] += k as u16;
                changed = true;
            }
        }
    }
    if changed {
        *p = p.unshift(&take);
        key.retain(|(_, e)| *e > 0);
    }
}

fn insert_form(key: &mut Key, form: LinearForm, e: u32) {
    match key.binary_search_by(|(f, _)| f.cmp(&form)) {
        Ok(i) => key[i].1 += e,
        Err(i) => key.insert(i, (form, e)),
    }
}

/// Residues of one term at every enclosed pole in `var`.
fn stage_term(
    key: &Key,
    p: &MultiPoly,
    var: usize,
    classes: &FxHashMap<LinearForm, PoleClass>,
) -> RationalSum {
    let space = p.space();
    let mut out = RationalSum::zero(space);
    let (vforms, rest): (Vec<_>, Vec<_>) = key.iter().cloned().partition(|(f, _)| f.involves(var));
    for (pi, (pole, order)) in vforms.iter().enumerate() {
        if classes[pole] != PoleClass::Enclosed {
            continue;
        }
        let cv = pole.coeff(var).clone();
        let mut rho_c: Vec<BigRational> = pole.coeffs().iter().map(|c| -c / &cv).collect();
        rho_c[var] = BigRational::zero();
        let rho = MultiPoly::linear(space, &rho_c);
        let others: Vec<Shifted> = vforms
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != pi)
            .map(|(_, (f, e))| {
                let c = f.coeff(var).clone();
                let mut m: Vec<BigRational> = f.coeffs().to_vec();
                m[var] = BigRational::zero();
                for (i, r) in rho_c.iter().enumerate() {
                    if !r.is_zero() {
                        m[i] += &c * r;
                    }
                }
                let (s, n) = LinearForm::normalize(m).expect("distinct forms share a root");
                Shifted { exp: *e, c, s, n }
            })
            .collect();
        let k = *order as usize;
        let taylor = taylor_at(p, var, &rho, k);
        let mut combos = Vec::new();
        compositions(k as u32 - 1, others.len() + 1, &mut combos, &mut Vec::new());
        let pre = rat_pow(&cv, -(k as i32));
        for combo in combos {
            let pn = &taylor[combo[0] as usize];
            if pn.is_zero() {
                continue;
            }
            let mut coef = pre.clone();
            let mut newkey: Key = rest.clone();
            for (sh, &n) in others.iter().zip(&combo[1..]) {
                coef *= binom_neg(sh.exp, n);
                if n > 0 {
                    coef *= rat_pow(&sh.c, n as i32);
                }
                coef *= rat_pow(&sh.s, -((sh.exp + n) as i32));
                insert_form(&mut newkey, sh.n.clone(), sh.exp + n);
            }
            let mut poly = pn.scale(&coef);
            cancel_coordinates(&mut newkey, &mut poly);
            out.add(newkey, poly);
        }
    }
    out
}

fn classify_all(
    sum: &RationalSum,
    var: usize,
    profile: &RadiusProfile,
) -> Result<FxHashMap<LinearForm, PoleClass>> {
    let mut classes = FxHashMap::default();
    for key in sum.terms.keys() {
        for (f, _) in key {
            if f.involves(var) && !classes.contains_key(f) {
                classes.insert(f.clone(), classify(f, var, profile, &sum.space)?);
            }
        }
    }
    Ok(classes)
}

/// One residue stage on the working sum.
pub fn stage_sum(sum: &RationalSum, var: usize, profile: &RadiusProfile) -> Result<RationalSum> {
    if profile.len() != sum.space.len() {
        return Err(Error::Invalid("radius profile does not match the variables".into()));
    }
    let classes = classify_all(sum, var, profile)?;
    let terms: Vec<(&Key, &MultiPoly)> = sum.terms.iter().collect();
    let space = sum.space.clone();
    let out = terms
        .par_iter()
        .fold(
            || RationalSum::zero(&space),
            |mut acc, (k, p)| {
                acc.merge(stage_term(k, p, var, &classes));
                acc
            },
        )
        .reduce(
            || RationalSum::zero(&space),
            |mut a, b| {
                if a.len() < b.len() {
                    let mut b = b;
                    b.merge(a);
                    return b;
                }
                a.merge(b);
                a
            },
        );
    Ok(out)
}

/// Sum of the residues of f·d(var) over the poles enclosed by |var| = r_var.
pub fn residue_stage(f: &FactoredRational, var: usize, profile: &RadiusProfile) -> Result<FactoredRational> {
    Ok(stage_sum(&RationalSum::from_factored(f), var, profile)?.to_factored())
}

/// Iterated residue over all variables in the given order.
pub fn iterated_residue(f: &FactoredRational, profile: &RadiusProfile, order: &[usize]) -> Result<BigRational> {
    let n = f.space().len();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::Invalid("order must be a permutation of the variables".into()));
    }
    let mut sum = RationalSum::from_factored(f);
    for &v in order {
        sum = stage_sum(&sum, v, profile)?;
        if sum.is_empty() {
            return Ok(BigRational::zero());
        }
    }
    sum.constant()
}

pub fn ascending(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn descending(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

/// Homogeneity degree of f, or `None` for a non-homogeneous numerator.
pub fn homogeneity_degree(f: &FactoredRational) -> Option<i64> {
    f.homogeneity_degree()
}
