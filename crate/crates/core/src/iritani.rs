//! The comparison pipeline built on the extended I-function of CP²:
//! S-matrix, Birkhoff factorization, connection matrix, and the resulting
//! mirror map and observables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{
    factorial, format_rational, int, invert_formal_map, series_compose, FormalMap, GradedSeries, HalfInt, VarSpace,
};
use crate::error::{Error, Result};
use crate::evaluate::Evaluator;
use crate::mirror::{gw_closed_with, inverse_on_slice, mirror_map_closed};
use crate::model::Model;

/// Finite Laurent polynomial in the loop parameter z.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ZLaurent(pub BTreeMap<i32, BigRational>);

impl ZLaurent {
    pub fn monomial(c: BigRational, e: i32) -> Self {
        let mut z = ZLaurent::default();
        z.add_term(e, c);
        z
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, e: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &ZLaurent) -> ZLaurent {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &ZLaurent) -> ZLaurent {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> ZLaurent {
        if s.is_zero() {
            return ZLaurent::default();
        }
        ZLaurent(self.0.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    pub fn shift(&self, by: i32) -> ZLaurent {
        ZLaurent(self.0.iter().map(|(e, c)| (e + by, c.clone())).collect())
    }

    pub fn mul(&self, o: &ZLaurent) -> ZLaurent {
        let mut r = ZLaurent::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &o.0 {
                r.add_term(ea + eb, ca * cb);
            }
        }
        r
    }

    /// Terms with exponent below zero and the rest.
    pub fn split(&self) -> (ZLaurent, ZLaurent) {
        let neg = self.0.range(..0).map(|(e, c)| (*e, c.clone())).collect();
        let pos = self.0.range(0..).map(|(e, c)| (*e, c.clone())).collect();
        (ZLaurent(neg), ZLaurent(pos))
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        self.0.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// a₀ + a₁h + a₂h² with h³ = 0 and z-Laurent coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NilpotentLaurent(pub [ZLaurent; 3]);

impl NilpotentLaurent {
    pub fn one() -> Self {
        NilpotentLaurent([ZLaurent::one(), ZLaurent::default(), ZLaurent::default()])
    }

    /// c·h + j·z·c for a scalar c, i.e. (h + jz).
    fn h_plus(j: i64) -> Self {
        NilpotentLaurent([ZLaurent::monomial(int(j), 1), ZLaurent::one(), ZLaurent::default()])
    }

    /// 1/(h + jz) = (1/(jz))(1 − h/(jz) + h²/(jz)²), j ≠ 0.
    fn h_plus_inv(j: i64) -> Self {
        let inv = BigRational::new(1.into(), j.into());
        NilpotentLaurent([
            ZLaurent::monomial(inv.clone(), -1),
            ZLaurent::monomial(-(&inv * &inv), -2),
            ZLaurent::monomial(&inv * &inv * &inv, -3),
        ])
    }

    pub fn mul(&self, o: &NilpotentLaurent) -> NilpotentLaurent {
        let mut r = NilpotentLaurent::default();
        for i in 0..3 {
            for j in 0..3 - i {
                r.0[i + j] = r.0[i + j].add(&self.0[i].mul(&o.0[j]));
            }
        }
        r
    }

    pub fn scale_z(&self, c: &BigRational, e: i32) -> NilpotentLaurent {
        NilpotentLaurent(self.0.clone().map(|p| p.scale(c).shift(e)))
    }
}

/// Coefficient of e^{ny¹}(y²)^m in the extended I-function, without the
/// exp(y¹h/z) prefactor.
pub fn i_coeff(n: u32, m: u32) -> NilpotentLaurent {
    let mut acc = NilpotentLaurent::one();
    let k = n as i64 - m as i64;
    if k >= 0 {
        for j in 1..=k {
            let inv = NilpotentLaurent::h_plus_inv(j);
            acc = acc.mul(&inv).mul(&inv);
        }
    } else {
        for j in k + 1..=0 {
            let f = NilpotentLaurent::h_plus(j);
            acc = acc.mul(&f).mul(&f);
        }
    }
    for j in 1..=n as i64 {
        acc = acc.mul(&NilpotentLaurent::h_plus_inv(j));
    }
    acc.scale_z(&BigRational::new(1.into(), factorial(m)), -(m as i32))
}

pub type Mat3 = [[ZLaurent; 3]; 3];

fn mat_zero() -> Mat3 {
    Default::default()
}

fn mat_identity() -> Mat3 {
    let mut m = mat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ZLaurent::one();
    }
    m
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r = mat_zero();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    r[i][j] = r[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    r
}

fn mat_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r = a.clone();
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = r[i][j].add(&b[i][j]);
        }
    }
    r
}

fn mat_is_zero(a: &Mat3) -> bool {
    a.iter().flatten().all(ZLaurent::is_zero)
}

/// Series Σ M_{nm}(z) e^{ny¹}(y²)^m truncated to n ≤ n_max, m ≤ m_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopMatrix {
    pub n_max: u32,
    pub m_max: u32,
    pub terms: BTreeMap<(u32, u32), Mat3>,
}

impl LoopMatrix {
    pub fn identity(n_max: u32, m_max: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), mat_identity());
        LoopMatrix { n_max, m_max, terms }
    }

    pub fn get(&self, k: (u32, u32)) -> Mat3 {
        self.terms.get(&k).cloned().unwrap_or_else(mat_zero)
    }

    fn insert(&mut self, k: (u32, u32), m: Mat3) {
        if mat_is_zero(&m) {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, m);
        }
    }

    fn bidegrees(&self) -> impl Iterator<Item = (u32, u32)> {
        let (nm, mm) = (self.n_max, self.m_max);
        (0..=nm).flat_map(move |n| (0..=mm).map(move |m| (n, m)))
    }

    pub fn mul(&self, o: &LoopMatrix) -> LoopMatrix {
        let mut r = LoopMatrix {
            n_max: self.n_max.min(o.n_max),
            m_max: self.m_max.min(o.m_max),
            terms: BTreeMap::new(),
        };
        for (&(n1, m1), a) in &self.terms {
            for (&(n2, m2), b) in &o.terms {
                let k = (n1 + n2, m1 + m2);
                if k.0 > r.n_max || k.1 > r.m_max {
                    continue;
                }
                let sum = mat_add(&r.get(k), &mat_mul(a, b));
                r.insert(k, sum);
            }
        }
        r
    }

    /// Inverse of a series whose (0,0) term is the identity.
    pub fn inverse(&self) -> LoopMatrix {
        let mut r = LoopMatrix::identity(self.n_max, self.m_max);
        for k in self.bidegrees().skip(1) {
            let mut acc = mat_zero();
            for (&(n1, m1), a) in self.terms.iter().filter(|(k, _)| **k != (0, 0)) {
                if n1 > k.0 || m1 > k.1 {
                    continue;
                }
                let rest = r.get((k.0 - n1, k.1 - m1));
                acc = mat_add(&acc, &mat_mul(a, &rest));
            }
            let neg = acc.map(|row| row.map(|p| p.scale(&-BigRational::one())));
            r.insert(k, neg);
        }
        r
    }

    /// Applies f to every entry.
    fn map(&self, f: impl Fn((u32, u32), &ZLaurent) -> ZLaurent) -> LoopMatrix {
        let mut r = LoopMatrix {
            n_max: self.n_max,
            m_max: self.m_max,
            terms: BTreeMap::new(),
        };
        for (&k, a) in &self.terms {
            r.insert(k, a.clone().map(|row| row.map(|p| f(k, &p))));
        }
        r
    }
}

/// The loop part M of the S-matrix: column k at bidegree (n, m) holds the
/// h-coefficients of (h + nz)^k · i_coeff(n, m).
pub fn build_s(n_max: u32, m_max: u32) -> Result<LoopMatrix> {
    let mut out = LoopMatrix {
        n_max,
        m_max,
        terms: BTreeMap::new(),
    };
    for n in 0..=n_max {
        for m in 0..=m_max {
            let base = i_coeff(n, m);
            let step = NilpotentLaurent::h_plus(n as i64);
            let mut col = base;
            let mut mat = mat_zero();
            for k in 0..3 {
                for i in 0..3 {
                    mat[i][k] = col.0[i].clone();
                }
                col = step.mul(&col);
            }
            out.insert((n, m), mat);
        }
    }
    if out.get((0, 0)) != mat_identity() {
        return Err(Error::Internal("M_00 is not the identity".into()));
    }
    Ok(out)
}

/// M = M_− · M_+ with M_− = 1 + O(z⁻¹) and M_+ = 1 + O(z⁰).
pub fn birkhoff(m: &LoopMatrix) -> Result<(LoopMatrix, LoopMatrix)> {
    if m.get((0, 0)) != mat_identity() {
        return Err(Error::Contract("Birkhoff factorization needs M_00 = 1".into()));
    }
    let mut minus = LoopMatrix::identity(m.n_max, m.m_max);
    let mut plus = LoopMatrix::identity(m.n_max, m.m_max);
    for k in m.bidegrees().skip(1) {
        let mut rhs = m.get(k);
        for (&(n1, m1), b) in minus.terms.iter().filter(|(kk, _)| **kk != (0, 0)) {
            if n1 > k.0 || m1 > k.1 || (n1, m1) == k {
                continue;
            }
            let c = plus.get((k.0 - n1, k.1 - m1));
            let prod = mat_mul(b, &c);
            for i in 0..3 {
                for j in 0..3 {
                    rhs[i][j] = rhs[i][j].sub(&prod[i][j]);
                }
            }
        }
        let mut bk = mat_zero();
        let mut ck = mat_zero();
        for i in 0..3 {
            for j in 0..3 {
                let (neg, pos) = rhs[i][j].split();
                bk[i][j] = neg;
                ck[i][j] = pos;
            }
        }
        minus.insert(k, bk);
        plus.insert(k, ck);
    }
    Ok((minus, plus))
}

/// Series space (y⁰, y²) with q̃ = e^{y¹}.
pub fn y_space() -> Arc<VarSpace> {
    VarSpace::new(["y0".to_string(), "y2".to_string()]).expect("distinct names")
}

pub const QTILDE: &str = "qt";

/// C₁ = M_−⁻¹ (H M_− + z D M_−) with H the h-multiplication matrix and D
/// the y¹-degree; entries as series in q̃ and y².
pub fn connection_matrix(minus: &LoopMatrix) -> Result<[[GradedSeries; 3]; 3]> {
    let mut h = mat_zero();
    h[1][0] = ZLaurent::one();
    h[2][1] = ZLaurent::one();
    let mut hm = LoopMatrix {
        n_max: minus.n_max,
        m_max: minus.m_max,
        terms: BTreeMap::new(),
    };
    for (&k, a) in &minus.terms {
        hm.insert(k, mat_mul(&h, a));
    }
    let dm = minus.map(|(n, _), p| p.scale(&int(n as i64)).shift(1));
    let mut sum = hm.clone();
    for (&k, a) in &dm.terms {
        let s = mat_add(&sum.get(k), a);
        sum.insert(k, s);
    }
    let c1 = minus.inverse().mul(&sum);

    let space = y_space();
    let dmax = HalfInt::from_int(minus.n_max as i64);
    let mut out: [[GradedSeries; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| GradedSeries::zero(&space, QTILDE, dmax)));
    for (&(n, m), a) in &c1.terms {
        for i in 0..3 {
            for j in 0..3 {
                let p = &a[i][j];
                if p.0.keys().any(|&e| e != 0) {
                    return Err(Error::Internal(format!(
                        "C1 entry ({}, {}) depends on z at bidegree ({n}, {m})",
                        i + 1,
                        j + 1
                    )));
                }
                out[i][j].add_term(HalfInt::from_int(n as i64), smallvec::smallvec![0, m as u16], p.coeff(0));
            }
        }
    }
    Ok(out)
}

/// ∫ dy¹: q̃ⁿ ↦ q̃ⁿ/n, plus the given integration constant. A q̃-free
/// term other than the one absorbed by the constant is an error.
fn integrate(s: &GradedSeries, constant: Option<usize>, allowed_unit: bool) -> Result<GradedSeries> {
    let mut out = GradedSeries::zero(s.space(), s.qname(), s.dmax());
    for (q, e, c) in s.terms() {
        if q == HalfInt::ZERO {
            let unit = e.iter().all(|&x| x == 0);
            if unit && allowed_unit {
                continue;
            }
            return Err(Error::Internal(format!("q̃-free term {c} blocks integration")));
        }
        out.add_term(q, e.clone(), c / q.to_rational());
    }
    if let Some(var) = constant {
        out.add_assign(&GradedSeries::var(s.space(), s.qname(), s.dmax(), var));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub series: String,
    pub term: String,
    pub quasimap: String,
    pub iritani: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IritaniReport {
    pub n_max: u32,
    pub m_max: u32,
    pub mirror_map: Vec<ComparisonRow>,
    pub observables: Vec<ComparisonRow>,
    pub maps_differ: bool,
    pub observables_equal: bool,
    pub c12_equals_c23: bool,
    /// (quasimap, iritani) coefficients of q(x²)⁴ in t².
    pub leading_t2: (String, String),
}

#[derive(Debug, Clone)]
pub struct IritaniResult {
    pub c1: [[GradedSeries; 3]; 3],
    /// Components t⁰, t² over (y⁰, y²), shift t¹ − y¹.
    pub map: FormalMap,
    pub f: [GradedSeries; 3],
    /// f1, f2, f3 in flat coordinates (t⁰, t²) and Q.
    pub f_flat: [GradedSeries; 3],
    pub report: IritaniReport,
}

fn rows(name: &str, a: &GradedSeries, b: &GradedSeries) -> Vec<ComparisonRow> {
    let mut keys: Vec<(HalfInt, crate::algebra::Exps)> = a.terms().map(|(q, e, _)| (q, e.clone())).collect();
    keys.extend(b.terms().map(|(q, e, _)| (q, e.clone())));
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(q, e)| {
            let (x, y) = (a.coeff(q, &e), b.coeff(q, &e));
            ComparisonRow {
                series: name.to_string(),
                term: a.term_text(q, &e, &BigRational::one()),
                quasimap: format_rational(&x),
                iritani: format_rational(&y),
                equal: x == y,
            }
        })
        .collect()
}

/// Runs the whole comparison through q̃^{n_max} with y² up to m_max.
pub fn iritani_pipeline(ev: &Evaluator, n_max: u32, m_max: u32) -> Result<IritaniResult> {
    let m = build_s(n_max, m_max)?;
    let (minus, _) = birkhoff(&m)?;
    let c1 = connection_matrix(&minus)?;

    let t0 = integrate(&c1[0][0], Some(0), false)?;
    let t1 = integrate(&c1[1][0], None, true)?;
    let t2 = integrate(&c1[2][0], Some(1), false)?;
    let map = FormalMap::new(vec![t0, t2], t1, crate::model::ClassSpace::upto(2).vars("t"), "Q")?;
    let f = [
        integrate(&c1[0][1], None, false)?,
        integrate(&c1[0][2], None, false)?,
        integrate(&c1[1][1], Some(0), false)?,
    ];
    let inv = invert_formal_map(&map)?;
    let f_flat = [
        series_compose(&f[0], &inv)?,
        series_compose(&f[1], &inv)?,
        series_compose(&f[2], &inv)?,
    ];

    let cp2 = Model::cp2();
    let quasi = mirror_map_closed(ev, &cp2, n_max, 2)?;
    let quasi_inv = inverse_on_slice(&quasi, &[])?;
    let xspace = quasi.domain().clone();
    let mut mirror_rows = Vec::new();
    for (idx, name) in [(0usize, "t0"), (1, "t2")] {
        let ours = quasi.component(idx);
        let theirs = map.component(idx).with_names(&xspace, "q");
        mirror_rows.extend(rows(name, ours, &theirs));
    }
    mirror_rows.extend(rows("t1 - x1", quasi.shift(), &map.shift().with_names(&xspace, "q")));

    let mut obs_rows = Vec::new();
    for (i, (name, a, b)) in [("f1", 1, 2), ("f2", 2, 2), ("f3", 1, 1)].into_iter().enumerate() {
        let gw = gw_closed_with(ev, &cp2, a, b, n_max, 2, &quasi_inv)?.series;
        let dmax = gw.dmax().min(f_flat[i].dmax());
        obs_rows.extend(rows(name, &gw.truncate(dmax), &f_flat[i].truncate(dmax)));
    }

    let unit4: crate::algebra::Exps = smallvec::smallvec![0, 4];
    let one = HalfInt::from_int(1);
    let report = IritaniReport {
        n_max,
        m_max,
        maps_differ: mirror_rows.iter().any(|r| !r.equal),
        observables_equal: obs_rows.iter().all(|r| r.equal),
        c12_equals_c23: c1[0][1] == c1[1][2],
        leading_t2: (
            format_rational(&quasi.component(1).coeff(one, &unit4)),
            format_rational(&map.component(1).coeff(one, &unit4)),
        ),
        mirror_map: mirror_rows,
        observables: obs_rows,
    };
    Ok(IritaniResult {
        c1,
        map,
        f,
        f_flat,
        report,
    })
}
