use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{int, rat_pow, FactoredRational, MultiPoly, VarSpace};
use crate::error::{Error, Result};

/// d·(z^a − w^a)/(z − w) as a polynomial; zero for a = 0.
pub fn kernel_w_poly(a: u32, d: i64, space: &Arc<VarSpace>, z: usize, w: usize) -> MultiPoly {
    let mut p = MultiPoly::zero(space);
    for i in 0..a {
        let mut e = smallvec::SmallVec::from_elem(0u16, space.len());
        e[z] += i as u16;
        e[w] += (a - 1 - i) as u16;
        p.add_term(e, int(d));
    }
    p
}

pub fn kernel_w(a: u32, d: i64, space: &Arc<VarSpace>, z: usize, w: usize) -> FactoredRational {
    FactoredRational::from_poly(kernel_w_poly(a, d, space, z, w))
}

/// e^k(z, w) = ∏_{j=0}^{k} (j z + (k − j) w).
pub fn kernel_e(k: u32, space: &Arc<VarSpace>, z: usize, w: usize) -> MultiPoly {
    let mut acc = MultiPoly::one(space);
    for j in 0..=k {
        let mut c = vec![BigRational::zero(); space.len()];
        c[z] += int(j as i64);
        c[w] += int((k - j) as i64);
        acc = acc.mul(&MultiPoly::linear(space, &c));
    }
    acc
}

/// Scalar and z-degree of f^{N,k}_{2d−1}(z).
pub fn kernel_f_parts(n: u32, k: u32, d: u32) -> Result<(BigRational, i64)> {
    if k % 2 == 0 {
        return Err(Error::Invalid(format!("kernel_f needs odd k, got {k}")));
    }
    if d == 0 {
        return Err(Error::Invalid("kernel_f needs d >= 1".into()));
    }
    let (k, d, n) = (k as i64, d as i64, n as i64);
    let m = 2 * d - 1;
    let mut c = BigRational::new(BigInt::from(2), BigInt::from(m));
    let top = k * d - (k + 1) / 2;
    for j in 0..=top {
        c *= BigRational::new(BigInt::from(k * m - 2 * j), BigInt::from(m));
    }
    for j in 1..d {
        let f = BigRational::new(BigInt::from(m - 2 * j), BigInt::from(m));
        c *= rat_pow(&f, -(n as i32));
    }
    Ok((c, top + 1 - n * (d - 1)))
}

/// f^{N,k}_{2d−1}(z): a scalar multiple of a power of z.
pub fn kernel_f(n: u32, k: u32, d: u32, space: &Arc<VarSpace>, z: usize) -> Result<FactoredRational> {
    let (c, deg) = kernel_f_parts(n, k, d)?;
    let mut exps = vec![0i32; space.len()];
    exps[z] = deg as i32;
    Ok(FactoredRational::laurent_monomial(space, c, &exps))
}

