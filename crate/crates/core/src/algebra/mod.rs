//! Exact scalars, sparse polynomials, factored rational functions and
//! half-integer graded series.

mod factored;
mod formal;
mod halfint;
mod linear;
mod poly;
mod series;
mod var;

pub use factored::{Denominator, FactoredRational};
pub use formal::{invert_formal_map, series_compose, series_compose_sub, FormalMap, Substitution};
pub use halfint::HalfInt;
pub use linear::LinearForm;
pub use poly::{Exps, MultiPoly};
pub use series::GradedSeries;
pub use var::VarSpace;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use num_traits::{One, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalized binomial coefficient binom(top, k) for any integer `top`.
pub fn binomial(top: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(top - i);
    }
    num / factorial(k)
}

pub fn rat_pow(r: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}
