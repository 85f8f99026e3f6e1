//! Real spherical harmonics on S² through degree 4, normalized to unit
//! L² norm against the uniform probability measure σ.
//!
//! `Y_{l,m}(x) ∝ P_l^{(|m|)}(z) · Re/Im (x + i y)^{|m|}`; cosine type for
//! m ≥ 0, sine type for m < 0.

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

pub const MAX_DEGREE: usize = 4;

/// Legendre polynomial coefficients, lowest power first.
const LEGENDRE: [&[f64]; 5] = [
    &[1.0],
    &[0.0, 1.0],
    &[-0.5, 0.0, 1.5],
    &[0.0, -1.5, 0.0, 2.5],
    &[0.375, 0.0, -3.75, 0.0, 4.375],
];

fn derivative_value(l: usize, m: usize, z: f64) -> f64 {
    let coeffs = LEGENDRE[l];
    let mut acc = 0.0;
    for (k, &a) in coeffs.iter().enumerate().skip(m) {
        let falling: f64 = ((k - m + 1)..=k).map(|j| j as f64).product();
        acc += a * falling * z.powi((k - m) as i32);
    }
    acc
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

fn check_degree(l: usize) -> Result<()> {
    if l > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "spherical harmonics are tabulated through degree {MAX_DEGREE}, not {l}"
        )));
    }
    Ok(())
}

/// `Y_{l,m}(x)` for `|m| ≤ l ≤ 4` and a unit vector `x ∈ R³`.
pub fn real_harmonic<T: Scalar>(l: usize, m: i32, x: &[T]) -> Result<T> {
    check_degree(l)?;
    if x.len() != 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            got: x.len(),
        });
    }
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(Error::InvalidArgument(format!("order {m} exceeds degree {l}")));
    }
    let (px, py, pz) = (x[0].as_f64(), x[1].as_f64(), x[2].as_f64());
    // (x + i y)^|m|
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..am {
        let r = re * px - im * py;
        im = re * py + im * px;
        re = r;
    }
    let mut norm = ((2 * l + 1) as f64 * factorial(l - am) / factorial(l + am)).sqrt();
    if am > 0 {
        norm *= std::f64::consts::SQRT_2;
    }
    let angular = if m >= 0 { re } else { im };
    Ok(c(norm * derivative_value(l, am, pz) * angular))
}

/// All `2l + 1` harmonics of degree `l` at `x`, ordered m = −l..=l.
pub fn harmonic_basis<T: Scalar>(l: usize, x: &[T]) -> Result<Vec<T>> {
    check_degree(l)?;
    (-(l as i32)..=(l as i32))
        .map(|m| real_harmonic(l, m, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_scaled_coordinates() {
        let x = [0.48, 0.6, 0.64];
        let s3 = 3f64.sqrt();
        assert!((real_harmonic(1, 0, &x).unwrap() - s3 * 0.64).abs() < 1e-14);
        assert!((real_harmonic(1, 1, &x).unwrap() - s3 * 0.48).abs() < 1e-14);
        assert!((real_harmonic(1, -1, &x).unwrap() - s3 * 0.6).abs() < 1e-14);
    }

    #[test]
    fn diagonal_sum_is_dimension() {
        let x = [0.0, 0.6, 0.8];
        for l in 0..=4 {
            let s: f64 = harmonic_basis(l, &x).unwrap().iter().map(|y| y * y).sum();
            assert!((s - (2 * l + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_five_unsupported() {
        assert!(matches!(
            real_harmonic(5, 0, &[0.0, 0.0, 1.0]),
            Err(Error::Unsupported(_))
        ));
    }
}
