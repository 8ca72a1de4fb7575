//! Nested trapezoidal quadrature over a polycircle |z_j| = r_j in
//! fixed-point complex arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{int, FactoredRational};
use crate::error::{Error, Result};
use crate::residue::RadiusProfile;

const GUARD_BITS: u64 = 64;

#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub integrand: FactoredRational,
    pub profile: RadiusProfile,
    /// Points per circle for the coarse grid; the fine grid doubles it.
    pub points: usize,
    pub digits: u32,
    /// Nesting order of the circles, outermost first. Defaults to 0..n.
    pub order: Option<Vec<usize>>,
}

impl QuadratureSpec {
    pub fn new(integrand: FactoredRational, profile: RadiusProfile, points: usize, digits: u32) -> Self {
        QuadratureSpec {
            integrand,
            profile,
            points,
            digits,
            order: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureReport {
    pub re: String,
    pub im: String,
    /// |V_2n − V_n| plus the rounding allowance.
    pub error: f64,
    pub points: usize,
    pub digits: u32,
    pub radii: Vec<String>,
    #[serde(skip)]
    value: Cx,
    #[serde(skip)]
    bits: u64,
}

impl QuadratureReport {
    /// |value − exact| as a float.
    pub fn distance_to(&self, exact: &BigRational) -> f64 {
        let e = Cx::from_rational(exact, self.bits);
        self.value.sub(&e).abs_f64(self.bits)
    }

    pub fn value_f64(&self) -> (f64, f64) {
        (to_f64(&self.value.re, self.bits), to_f64(&self.value.im, self.bits))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

fn to_f64(x: &BigInt, bits: u64) -> f64 {
    let shift = x.bits().saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    let v = top * 2f64.powi(shift as i32 - bits as i32);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

impl Cx {
    fn real(re: BigInt) -> Self {
        Cx { re, im: BigInt::zero() }
    }

    fn from_rational(r: &BigRational, bits: u64) -> Self {
        Cx::real((r.numer() << bits) / r.denom())
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Cx, bits: u64) -> Cx {
        Cx {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    fn div(&self, o: &Cx, bits: u64) -> Option<Cx> {
        let n2 = &o.re * &o.re + &o.im * &o.im;
        if n2.is_zero() {
            return None;
        }
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        Some(Cx {
            re: (re << bits) / &n2,
            im: (im << bits) / &n2,
        })
    }

    fn abs_f64(&self, bits: u64) -> f64 {
        to_f64(&self.re, bits).hypot(to_f64(&self.im, bits))
    }

    fn to_decimal(x: &BigInt, bits: u64, digits: u32) -> String {
        let scaled = (x * BigInt::from(10).pow(digits)) >> bits;
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (i, f) = s.split_at(s.len() - digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, i, f)
    }
}

/// e^{2πi j/m} for j = 0..m, m a power of two ≥ 4, by half-angle steps from i.
fn roots_of_unity(m: usize, bits: u64) -> Vec<Cx> {
    let one = BigInt::one() << bits;
    let (mut c, mut s) = (BigInt::zero(), one.clone());
    let mut k = 4;
    while k < m {
        let c2 = (((&one + &c) << bits) / 2u32).sqrt();
        s = (s << bits) / (&c2 * 2u32);
        c = c2;
        k *= 2;
    }
    let w = Cx { re: c, im: s };
    let mut out = Vec::with_capacity(m);
    let mut cur = Cx::real(one);
    for _ in 0..m {
        out.push(cur.clone());
        cur = cur.mul(&w, bits);
    }
    out
}

struct Prepared {
    bits: u64,
    scalar: Cx,
    numer: Vec<(Vec<u16>, Cx)>,
    denom: Vec<(Vec<Cx>, u32)>,
}

impl Prepared {
    fn new(f: &FactoredRational, bits: u64) -> Self {
        Prepared {
            bits,
            scalar: Cx::from_rational(&f.scalar, bits),
            numer: f
                .numer
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| (e.to_vec(), Cx::from_rational(c, bits)))
                .collect(),
            denom: f
                .denom
                .iter()
                .map(|(l, e)| (l.coeffs().iter().map(|c| Cx::from_rational(c, bits)).collect(), *e))
                .collect(),
        }
    }

    fn eval(&self, z: &[Cx], pows: &[Vec<Cx>]) -> Option<Cx> {
        let b = self.bits;
        let mut num = Cx::default();
        for (e, c) in &self.numer {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&pows[i][k as usize], b);
                }
            }
            num = num.add(&t);
        }
        let mut den = Cx::real(BigInt::one() << b);
        for (coeffs, e) in &self.denom {
            let mut l = Cx::default();
            for (c, zi) in coeffs.iter().zip(z) {
                if !c.re.is_zero() {
                    l = l.add(&c.mul(zi, b));
                }
            }
            for _ in 0..*e {
                den = den.mul(&l, b);
            }
        }
        num.mul(&self.scalar, b).div(&den, b)
    }
}

fn min_modulus(coeffs: &[BigRational], radii: &[BigRational]) -> BigRational {
    let terms: Vec<BigRational> = coeffs.iter().zip(radii).map(|(c, r)| c.abs() * r).collect();
    let total: BigRational = terms.iter().cloned().sum();
    terms
        .iter()
        .map(|t| t.clone() * int(2) - &total)
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Approximates (2πi)^{−n} ∮…∮ f dz over the polycircle, returning the
/// fine-grid value and the doubling error estimate.
pub fn contour_quadrature(spec: &QuadratureSpec) -> Result<QuadratureReport> {
    let f = &spec.integrand;
    let nv = f.space.len();
    if spec.profile.len() != nv {
        return Err(Error::Invalid(format!("{} radii for {nv} variables", spec.profile.len())));
    }
    if spec.points < 8 || !spec.points.is_power_of_two() {
        return Err(Error::Invalid("points per circle must be a power of two >= 8".into()));
    }
    if spec.digits < 30 {
        return Err(Error::Invalid("quadrature needs at least 30 digits".into()));
    }
    let radii = &spec.profile.radii;
    for form in f.denom.keys() {
        if min_modulus(form.coeffs(), radii) <= BigRational::zero() {
            return Err(Error::PoleOnContour(form.fmt_with(&f.space)));
        }
    }
    let order = spec.order.clone().unwrap_or_else(|| (0..nv).collect());
    let mut seen = order.clone();
    seen.sort_unstable();
    if seen != (0..nv).collect::<Vec<_>>() {
        return Err(Error::Invalid("nesting order must be a permutation".into()));
    }

    let user_bits = (spec.digits as f64 * std::f64::consts::LOG2_10).ceil() as u64;
    let bits = user_bits + GUARD_BITS;
    let fine = 2 * spec.points;
    let roots = roots_of_unity(fine, bits);
    let circles: Vec<Vec<Cx>> = radii
        .iter()
        .map(|r| {
            let rr = Cx::from_rational(r, bits);
            roots.iter().map(|w| w.mul(&rr, bits)).collect()
        })
        .collect();
    let max_pow = f.numer.terms().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
    let prepared = Prepared::new(f, bits);

    // sums[s] collects grid points whose indices are all multiples of 2^s.
    let total = fine.pow(nv as u32);
    let partial: Vec<[Cx; 3]> = (0..fine)
        .into_par_iter()
        .map(|outer| {
            let mut acc: [Cx; 3] = Default::default();
            let mut idx = vec![0usize; nv];
            idx[order[0]] = outer;
            let inner_total = total / fine;
            for flat in 0..inner_total {
                let mut rest = flat;
                for &v in order.iter().skip(1).rev() {
                    idx[v] = rest % fine;
                    rest /= fine;
                }
                let z: Vec<Cx> = (0..nv).map(|v| circles[v][idx[v]].clone()).collect();
                let pows: Vec<Vec<Cx>> = z
                    .iter()
                    .map(|zi| {
                        let mut p = vec![Cx::real(BigInt::one() << bits)];
                        for k in 0..max_pow {
                            p.push(p[k].mul(zi, bits));
                        }
                        p
                    })
                    .collect();
                let Some(mut val) = prepared.eval(&z, &pows) else {
                    continue;
                };
                for zi in &z {
                    val = val.mul(zi, bits);
                }
                let level = idx.iter().map(|&i| if i == 0 { 2 } else { i.trailing_zeros().min(2) }).min().unwrap();
                for s in 0..=level as usize {
                    acc[s] = acc[s].add(&val);
                }
            }
            acc
        })
        .collect();
    let mut sums: [Cx; 3] = Default::default();
    for p in &partial {
        for s in 0..3 {
            sums[s] = sums[s].add(&p[s]);
        }
    }
    let averages: Vec<Cx> = (0..3)
        .map(|s| {
            let n = (fine >> s).pow(nv as u32);
            let shift = n.trailing_zeros() as u64;
            Cx {
                re: &sums[s].re >> shift,
                im: &sums[s].im >> shift,
            }
        })
        .collect();
    let allowance = 2f64.powi(-(user_bits as i32));
    let d_fine = averages[0].sub(&averages[1]).abs_f64(bits);
    let d_coarse = averages[1].sub(&averages[2]).abs_f64(bits);
    if d_fine > allowance && d_fine >= d_coarse {
        return Err(Error::NonConvergence(format!(
            "doubling difference {d_fine:e} did not shrink from {d_coarse:e}"
        )));
    }
    let value = averages[0].clone();
    Ok(QuadratureReport {
        re: Cx::to_decimal(&value.re, bits, spec.digits),
        im: Cx::to_decimal(&value.im, bits, spec.digits),
        error: d_fine + allowance,
        points: spec.points,
        digits: spec.digits,
        radii: radii.iter().map(crate::algebra::format_rational).collect(),
        value,
        bits,
    })
}
