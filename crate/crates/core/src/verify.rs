//! Invariant suites shared by the CLI and the acceptance tests. Each suite
//! returns one [`Check`] per assertion; nothing here panics on a failed check.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::{format_rational, int, parse_rational, rat, FactoredRational, GradedSeries, HalfInt};
use crate::closed::{closed_integrand, closed_target, profiles_with_weight};
use crate::error::{Error, Result};
use crate::evaluate::{residue_with_retry, Evaluator};
use crate::gmt::{gmt_check_closed, gmt_check_open};
use crate::iritani::iritani_pipeline;
use crate::mirror::{disk_h2_invariant, extract_gw, grade, gw_closed_gf, gw_open_gf, partial};
use crate::model::{CorrelatorSpec, InsertionProfile, Model, SectorSpec};
use crate::open::{open_integrand, open_target, OpenTruncationPolicy};
use crate::oracle::{contour_quadrature, open_gw_fixed_point, QuadratureSpec};
use crate::residue::{ascending, default_radii, descending, iterated_residue, RadiusProfile, Sector};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Axioms,
    OrderIndependence,
    Selection,
    Integrability,
    Oracle,
    Quadrature,
    Gmt,
    Iritani,
    Truncation,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Axioms,
        Suite::OrderIndependence,
        Suite::Selection,
        Suite::Integrability,
        Suite::Oracle,
        Suite::Quadrature,
        Suite::Gmt,
        Suite::Iritani,
        Suite::Truncation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::OrderIndependence => "order",
            Suite::Selection => "selection",
            Suite::Integrability => "integrability",
            Suite::Oracle => "oracle",
            Suite::Quadrature => "quadrature",
            Suite::Gmt => "gmt",
            Suite::Iritani => "iritani",
            Suite::Truncation => "truncation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s || (s == "order-independence" && *x == Suite::OrderIndependence))
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub model: Model,
    pub samples: usize,
    pub seed: u64,
    /// Restricts sector-aware suites; `None` runs both.
    pub sector: Option<Sector>,
    pub max_degree: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            model: Model::cp2(),
            samples: 50,
            seed: 7,
            sector: None,
            max_degree: 3,
        }
    }
}

impl VerifyOptions {
    fn wants(&self, s: Sector) -> bool {
        self.sector.map_or(true, |x| x == s)
    }
}

pub fn run_suite(ev: &Evaluator, suite: Suite, opts: &VerifyOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::Axioms => axioms(opts),
        Suite::OrderIndependence => order_independence(opts),
        Suite::Selection => selection(opts),
        Suite::Integrability => integrability(ev, opts),
        Suite::Oracle => oracle(ev),
        Suite::Quadrature => quadrature(opts),
        Suite::Gmt => gmt(ev),
        Suite::Iritani => iritani(ev),
        Suite::Truncation => truncation(ev),
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Recorder { suite, checks: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            suite: self.suite.name().to_string(),
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn eq(&mut self, name: impl Into<String>, got: &BigRational, want: &BigRational) {
        let detail = format!("got {} want {}", format_rational(got), format_rational(want));
        self.push(name, got == want, detail);
    }
}

/// The integrand's residue with no selection-rule or puncture shortcut.
pub fn raw_value(spec: &CorrelatorSpec, retries: u32) -> Result<BigRational> {
    let (f, profile) = integrand_and_radii(spec)?;
    residue_with_retry(&f, &profile, retries)
}

fn integrand_and_radii(spec: &CorrelatorSpec) -> Result<(FactoredRational, RadiusProfile)> {
    Ok(match spec.sector {
        SectorSpec::Closed { d, .. } => (closed_integrand(spec)?, default_radii(d, Sector::Closed)),
        SectorSpec::Open { d, .. } => (open_integrand(spec)?, default_radii(d, Sector::Open)),
    })
}

fn supports_open(model: &Model) -> bool {
    match *model {
        Model::ProjectiveSpace { n } => n == 3,
        Model::Hypersurface { k, .. } => k % 2 == 1,
    }
}

fn random_profile(rng: &mut StdRng, weight: i64, j_max: u32) -> Option<InsertionProfile> {
    profiles_with_weight(weight, j_max).choose(rng).cloned()
}

/// A closed spec on the selection locus with `extra` added to the insertion weight.
fn random_closed(rng: &mut StdRng, model: &Model, max_degree: u32, extra: i64) -> CorrelatorSpec {
    let dim = model.dim();
    loop {
        let d = rng.gen_range(1..=max_degree);
        let (a, b) = (rng.gen_range(0..=dim), rng.gen_range(0..=dim));
        let w = closed_target(model, d) - a - b + extra;
        if let Some(p) = random_profile(rng, w, dim.max(2) as u32) {
            return CorrelatorSpec::closed(*model, d, a, b, p);
        }
    }
}

/// An open spec on the selection locus, with up to two O_1 insertions.
fn random_open(rng: &mut StdRng, model: &Model, max_degree: u32) -> CorrelatorSpec {
    let j_max = model.dim().max(3) as u32;
    loop {
        let d = rng.gen_range(1..=max_degree);
        let a = rng.gen_range(0..=model.dim());
        let units = rng.gen_range(0..=2u32);
        let w = open_target(model, d) - a + units as i64;
        if let Some(p) = random_profile(rng, w, j_max) {
            let p = if units > 0 { p.with(0, units) } else { p };
            return CorrelatorSpec::open(*model, d, a, p);
        }
    }
}

fn axioms(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Axioms);
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let model = opts.model;
    let dmax = opts.max_degree.min(if model.k().is_some() { 2 } else { 3 });
    if opts.wants(Sector::Closed) {
        for i in 0..opts.samples {
            let spec = random_closed(&mut rng, &model, dmax, 1);
            let spec = CorrelatorSpec { insertions: spec.insertions.with(0, 1), ..spec };
            let v = raw_value(&spec, 8)?;
            r.push(format!("puncture #{i} {}", spec.canonical()), v.is_zero(), format_rational(&v));
        }
        for i in 0..opts.samples {
            let spec = random_closed(&mut rng, &model, dmax, 0);
            let d = spec.degree();
            let base = raw_value(&spec, 8)?;
            let with = raw_value(&CorrelatorSpec { insertions: spec.insertions.with(1, 1), ..spec.clone() }, 8)?;
            r.eq(format!("divisor #{i} {}", spec.canonical()), &with, &(base.clone() * int(d as i64)));
            if let SectorSpec::Closed { d, a, b } = spec.sector {
                let swapped = raw_value(&CorrelatorSpec::closed(model, d, b, a, spec.insertions.clone()), 8)?;
                r.eq(format!("symmetry #{i} {}", spec.canonical()), &swapped, &base);
            }
        }
    }
    if opts.wants(Sector::Open) && supports_open(&model) {
        let dmax = opts.max_degree.min(if model.k().is_some() { 2 } else { 3 });
        for i in 0..opts.samples {
            let spec = random_open(&mut rng, &model, dmax);
            let d = spec.degree() as i64;
            let base = raw_value(&spec, 8)?;
            let with = raw_value(&CorrelatorSpec { insertions: spec.insertions.with(1, 1), ..spec.clone() }, 8)?;
            r.eq(format!("open divisor #{i} {}", spec.canonical()), &with, &(base * rat(2 * d - 1, 2)));
        }
    }
    Ok(r.checks)
}

/// Integrands whose values are pinned elsewhere, used for order checks.
pub fn golden_specs() -> Vec<CorrelatorSpec> {
    let p = InsertionProfile::from_pairs;
    let cp2 = Model::cp2();
    let m89 = Model::m89();
    vec![
        CorrelatorSpec::closed(cp2, 1, 2, 2, p(&[])),
        CorrelatorSpec::closed(cp2, 1, 2, 0, p(&[(2, 2)])),
        CorrelatorSpec::closed(cp2, 2, 2, 2, p(&[(2, 3)])),
        CorrelatorSpec::closed(cp2, 1, 0, 0, p(&[(2, 4)])),
        CorrelatorSpec::closed(cp2, 2, 1, 1, p(&[(2, 5)])),
        CorrelatorSpec::closed(cp2, 3, 1, 1, p(&[(2, 8)])),
        CorrelatorSpec::closed(m89, 1, 1, 1, p(&[(3, 1)])),
        CorrelatorSpec::closed(m89, 1, 1, 1, p(&[(2, 2)])),
        CorrelatorSpec::closed(m89, 2, 1, 1, p(&[(2, 1)])),
        CorrelatorSpec::open(cp2, 1, 2, p(&[])),
        CorrelatorSpec::open(cp2, 2, 2, p(&[(2, 3)])),
        CorrelatorSpec::open(cp2, 1, 1, p(&[(0, 1), (3, 1)])),
        CorrelatorSpec::open(cp2, 3, 2, p(&[(2, 6)])),
        CorrelatorSpec::open(m89, 1, 0, p(&[(3, 1)])),
        CorrelatorSpec::open(m89, 2, 1, p(&[])),
    ]
}

fn residue_in_order(f: &FactoredRational, profile: &RadiusProfile, order: &[usize]) -> Result<BigRational> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut current = profile.clone();
    for _ in 0..8 {
        match iterated_residue(f, &current, order) {
            Err(Error::IndecisivePole { .. }) => current = profile.perturbed(&mut rng),
            other => return other,
        }
    }
    iterated_residue(f, &current, order)
}

fn order_independence(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::OrderIndependence);
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for spec in golden_specs() {
        let (f, profile) = integrand_and_radii(&spec)?;
        let n = f.space().len();
        let mut shuffled = ascending(n);
        shuffled.shuffle(&mut rng);
        let asc = residue_in_order(&f, &profile, &ascending(n))?;
        for (label, order) in [("descending", descending(n)), ("shuffled", shuffled)] {
            let v = residue_in_order(&f, &profile, &order)?;
            r.eq(format!("{} {label} {order:?}", spec.canonical()), &v, &asc);
        }
    }
    Ok(r.checks)
}

fn selection(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Selection);
    let model = opts.model;
    let dim = model.dim();
    if opts.wants(Sector::Closed) {
        let mut nonzero = 0;
        let mut off = 0;
        let mut bad = Vec::new();
        for d in 1..=2u32 {
            for a in 0..=dim {
                for b in 0..=dim {
                    for m in 0..=(closed_target(&model, d) - a - b + 2).max(0) as u32 {
                        let spec = CorrelatorSpec::closed(model, d, a, b, InsertionProfile::from_pairs(&[(2, m)]));
                        let on = a + b + m as i64 == closed_target(&model, d);
                        let v = raw_value(&spec, 8)?;
                        if on && !v.is_zero() {
                            nonzero += 1;
                        }
                        if !on {
                            off += 1;
                            if !v.is_zero() {
                                bad.push(spec.canonical());
                            }
                        }
                    }
                }
            }
        }
        r.push("closed off-locus values vanish", bad.is_empty(), format!("{off} off-locus specs, failures {bad:?}"));
        r.push("closed locus is populated", nonzero > 0, format!("{nonzero} nonzero on-locus values"));
    }
    if opts.wants(Sector::Open) && supports_open(&model) {
        let mut off = 0;
        let mut bad = Vec::new();
        for d in 1..=2u32 {
            for a in 0..=dim {
                for m in 0..=(open_target(&model, d) - a + 2).max(0) as u32 {
                    let spec = CorrelatorSpec::open(model, d, a, InsertionProfile::from_pairs(&[(2, m)]));
                    if a + m as i64 == open_target(&model, d) {
                        continue;
                    }
                    off += 1;
                    if !raw_value(&spec, 8)?.is_zero() {
                        bad.push(spec.canonical());
                    }
                }
            }
        }
        r.push("open off-locus values vanish", bad.is_empty(), format!("{off} off-locus specs, failures {bad:?}"));
    }
    Ok(r.checks)
}

fn series_eq(r: &mut Recorder, name: String, a: &GradedSeries, b: &GradedSeries) {
    let dmax = a.dmax().min(b.dmax());
    let diff = a.truncate(dmax).sub(&b.truncate(dmax));
    let detail = if diff.is_zero() {
        format!("{} terms agree through q^{dmax}", a.truncate(dmax).len())
    } else {
        format!("difference {}", diff.to_text())
    };
    r.push(name, diff.is_zero(), detail);
}

fn drop_q0(s: &GradedSeries) -> GradedSeries {
    s.sub(&s.truncate(HalfInt::ZERO))
}

/// Terms whose t⁰ degree stays below the O_1 cap at their disk degree,
/// the part a ∂/∂t⁰ comparison can see without truncation effects.
fn below_unit_cap(s: &GradedSeries, policy: &OpenTruncationPolicy) -> GradedSeries {
    let t0 = s.space().index_of("t0").expect("t0 is a class");
    let mut out = GradedSeries::zero(s.space(), s.qname(), s.dmax());
    for (q, e, c) in s.terms() {
        let f = ((q.twice() + 1) / 2) as u32;
        if u32::from(e[t0]) < policy.unit_cap(f) {
            out.add_term(q, e.clone(), c.clone());
        }
    }
    out
}

fn integrability(ev: &Evaluator, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Integrability);
    if opts.wants(Sector::Closed) {
        let cp2 = Model::cp2();
        let dmax = 3;
        let gw = |a: i64, b: i64| gw_closed_gf(ev, &cp2, a, b, dmax, 2).map(|s| s.series);
        let g: Vec<Vec<_>> = (0..=2)
            .map(|a| (0..=2).map(|b| gw(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for a in 0..=2u32 {
            for b in (a + 1)..=2u32 {
                for c in 0..=2usize {
                    // Q = e^{t¹} drops the classical t¹ term, so q⁰ is left out.
                    let lhs = drop_q0(&partial(&g[b as usize][c], a)?);
                    let rhs = drop_q0(&partial(&g[a as usize][c], b)?);
                    series_eq(&mut r, format!("closed cp:3 d_t{a}<h^{b} h^{c}> = d_t{b}<h^{a} h^{c}>"), &lhs, &rhs);
                }
            }
        }
    }
    if opts.wants(Sector::Open) {
        let cp2 = Model::cp2();
        let dmax = grade(Sector::Open, 3);
        let policy = OpenTruncationPolicy::for_degree(3);
        let zero = [0, 3];
        let h = gw_open_gf(ev, &cp2, 1, dmax, &policy, &zero)?.series;
        let h2 = gw_open_gf(ev, &cp2, 2, dmax, &policy, &zero)?.series;
        series_eq(&mut r, "open cp:3 d_t2<h> = d_t1<h^2>".into(), &partial(&h, 2)?, &partial(&h2, 1)?);

        let m89 = Model::m89();
        let dmax = grade(Sector::Open, 3);
        let policy = OpenTruncationPolicy::for_hypersurface(&m89, 3);
        let h = gw_open_gf(ev, &m89, 1, dmax, &policy, &[])?.series;
        let one = gw_open_gf(ev, &m89, 0, dmax, &policy, &[])?.series;
        let lhs = below_unit_cap(&partial(&h, 0)?, &policy);
        let rhs = below_unit_cap(&partial(&one, 1)?, &policy);
        series_eq(&mut r, "open hyp:8:9 d_t0<h> = d_t1<1>".into(), &lhs, &rhs);
    }
    Ok(r.checks)
}

/// The six disk invariants of the degree-9 hypersurface in CP⁷ used as
/// oracle data: (front class, degree, extra insertions, value).
pub fn m89_disk_data() -> Vec<(i64, u32, InsertionProfile, BigRational)> {
    let p = InsertionProfile::from_pairs;
    let v = |s: &str| parse_rational(s).expect("literal");
    vec![
        (1, 1, p(&[(2, 1)]), v("945")),
        (0, 1, p(&[(3, 1)]), v("945")),
        (0, 1, p(&[(2, 2)]), v("945/2")),
        (0, 2, p(&[(2, 1)]), v("33973546005")),
        (1, 2, p(&[]), v("58381461390")),
        (0, 3, p(&[]), v("41731576876146796884/25")),
    ]
}

fn oracle(ev: &Evaluator) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Oracle);
    for d in 1..=3u32 {
        let pipeline = disk_h2_invariant(ev, d, &OpenTruncationPolicy::for_degree(d))?;
        let local = open_gw_fixed_point(4, 1, d, &InsertionProfile::from_pairs(&[(2, 3 * d - 2)]))?;
        r.eq(format!("cp:3 <(h^2)^{}>_disk,{}", 3 * d - 2, 2 * d - 1), &pipeline, &local);
    }
    let m89 = Model::m89();
    let dmax = grade(Sector::Open, 3);
    let policy = OpenTruncationPolicy::for_hypersurface(&m89, 3);
    let series = [
        gw_open_gf(ev, &m89, 0, dmax, &policy, &[])?,
        gw_open_gf(ev, &m89, 1, dmax, &policy, &[])?,
    ];
    for (a, d, ins, expected) in m89_disk_data() {
        let pipeline = extract_gw(&series[a as usize], d, &ins)?;
        let local = open_gw_fixed_point(8, 9, d, &ins.with(a as u32, 1))?;
        let name = format!("hyp:8:9 <h^{a} | {ins}>_disk,{}", 2 * d - 1);
        r.push(
            name,
            pipeline == local && local == expected,
            format!(
                "pipeline {} localization {} expected {}",
                format_rational(&pipeline),
                format_rational(&local),
                format_rational(&expected)
            ),
        );
    }
    Ok(r.checks)
}

/// Quadrature cases: spec, radii chosen deep inside the default chamber.
pub fn quadrature_cases() -> Vec<(CorrelatorSpec, RadiusProfile)> {
    let p = InsertionProfile::from_pairs;
    let cp2 = Model::cp2();
    vec![
        (CorrelatorSpec::closed(cp2, 1, 2, 2, p(&[])), RadiusProfile::from_ints(&[1, 2])),
        (CorrelatorSpec::closed(cp2, 1, 2, 0, p(&[(2, 2)])), RadiusProfile::from_ints(&[1, 2])),
        (CorrelatorSpec::closed(cp2, 2, 2, 2, p(&[(2, 3)])), RadiusProfile::from_ints(&[1, 16, 1])),
        (CorrelatorSpec::open(cp2, 1, 2, p(&[])), RadiusProfile::from_ints(&[1])),
        (CorrelatorSpec::open(cp2, 2, 2, p(&[(2, 3)])), RadiusProfile::from_ints(&[1, 8])),
    ]
}

fn quadrature(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Quadrature);
    for (spec, profile) in quadrature_cases() {
        let is_open = matches!(spec.sector, SectorSpec::Open { .. });
        if !opts.wants(if is_open { Sector::Open } else { Sector::Closed }) {
            continue;
        }
        let (f, _) = integrand_and_radii(&spec)?;
        let exact = raw_value(&spec, 8)?;
        let same_chamber = residue_in_order(&f, &profile, &ascending(f.space().len()))?;
        r.eq(format!("{} exact value is radius-stable", spec.canonical()), &same_chamber, &exact);
        let n = f.space().len();
        let mut reports = Vec::new();
        for order in [ascending(n), descending(n)] {
            let mut q = QuadratureSpec::new(f.clone(), profile.clone(), 16, 40);
            q.order = Some(order);
            reports.push(contour_quadrature(&q)?);
        }
        let fwd = &reports[0];
        let dist = fwd.distance_to(&exact);
        r.push(
            format!("{} quadrature", spec.canonical()),
            fwd.error < 1e-15 && dist < 1e-15,
            format!("value {} error {:e} distance {:e}", fwd.re, fwd.error, dist),
        );
        let rev = &reports[1];
        let (a, b) = (fwd.value_f64(), rev.value_f64());
        let gap = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        r.push(
            format!("{} nesting order", spec.canonical()),
            gap <= fwd.error + rev.error + 1e-15,
            format!("gap {gap:e}"),
        );
    }
    Ok(r.checks)
}

fn gmt(ev: &Evaluator) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Gmt);
    for d in 2..=3u32 {
        let dim = closed_target(&Model::m89(), d);
        for a in 0..=dim {
            let rep = gmt_check_closed(ev, 8, 9, d, a, dim - a)?;
            r.push(
                format!("closed hyp:8:9 d={d} a={a} b={}", dim - a),
                rep.equal,
                format!("lhs {} rhs {}", rep.lhs, rep.rhs),
            );
        }
        let rep = gmt_check_open(ev, 8, 9, d, 3 - d as i64)?;
        r.push(format!("open hyp:8:9 d={d} a={}", 3 - d as i64), rep.equal, format!("lhs {} rhs {}", rep.lhs, rep.rhs));
    }
    Ok(r.checks)
}

fn iritani(ev: &Evaluator) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Iritani);
    let res = iritani_pipeline(ev, 5, 16)?;
    let rep = &res.report;
    r.push("mirror maps differ", rep.maps_differ, format!("{} rows", rep.mirror_map.len()));
    r.push(
        "observables equal",
        rep.observables_equal,
        format!("{} rows", rep.observables.len()),
    );
    r.push("(C1)12 = (C1)23", rep.c12_equals_c23, "");
    r.push(
        "leading t2 correction",
        rep.leading_t2 == ("1/4".to_string(), "-5/12".to_string()),
        format!("quasimap {} vs extended {}", rep.leading_t2.0, rep.leading_t2.1),
    );
    Ok(r.checks)
}

fn truncation(ev: &Evaluator) -> Result<Vec<Check>> {
    let mut r = Recorder::new(Suite::Truncation);
    for d in 1..=3u32 {
        let base = OpenTruncationPolicy::for_degree(d);
        let v = disk_h2_invariant(ev, d, &base)?;
        for (label, policy) in [
            ("j_max+1", OpenTruncationPolicy { j_max: base.j_max.max(3) + 1, ..base }),
            ("units+1", OpenTruncationPolicy { extra_units: base.extra_units + 1, ..base }),
        ] {
            let w = disk_h2_invariant(ev, d, &policy)?;
            r.eq(format!("cp:3 d={d} {label}"), &w, &v);
        }
    }
    Ok(r.checks)
}
