use serde::{Deserialize, Serialize};

use crate::domains::{gauss_gegenbauer, gauss_legendre};
use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

/// Slack allowed on `|t| ≤ 1` before an argument counts as outside [-1, 1].
const EDGE: f64 = 1e-12;

/// `C_n^λ(t)` without the range check.
///
/// At λ = 0 this is the Chebyshev limit `C_0 = 1`, `C_n = (2/n) T_n`.
pub fn gegenbauer_raw<T: Scalar>(n: usize, lambda: T, t: T) -> T {
    if lambda == T::zero() {
        if n == 0 {
            return T::one();
        }
        return c::<T>(2.0) / T::from_usize_lossy(n) * chebyshev_t(n, t);
    }
    let two = c::<T>(2.0);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * lambda * t;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let next = (two * (kf + lambda - T::one()) * t * cur - (kf + two * lambda - two) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn chebyshev_t<T: Scalar>(n: usize, t: T) -> T {
    let two = c::<T>(2.0);
    let (mut a, mut b) = (T::one(), t);
    if n == 0 {
        return a;
    }
    for _ in 1..n {
        let next = two * t * b - a;
        a = b;
        b = next;
    }
    b
}

fn check_range<T: Scalar>(t: T) -> Result<T> {
    if !t.is_finite() || t.abs() > T::one() + c(EDGE) {
        return Err(Error::InvalidArgument(format!("argument {t} outside [-1, 1]")));
    }
    Ok(t.max(-T::one()).min(T::one()))
}

/// `C_n^λ(t)` for `t ∈ [-1, 1]`, λ ≥ 0.
pub fn gegenbauer_eval<T: Scalar>(n: usize, lambda: T, t: T) -> Result<T> {
    if lambda < T::zero() {
        return Err(Error::InvalidArgument("Gegenbauer parameter must be nonnegative".into()));
    }
    Ok(gegenbauer_raw(n, lambda, check_range(t)?))
}

/// `C_n^λ(1) = binom(n + 2λ − 1, n)`.
pub fn gegenbauer_at_one<T: Scalar>(n: usize, lambda: T) -> T {
    gegenbauer_raw(n, lambda, T::one())
}

/// Zonal function `Z_n = ((n + λ)/λ) C_n^λ`, with `Z_0 = 1`, `Z_n = 2 T_n` at λ = 0.
pub fn zonal_raw<T: Scalar>(n: usize, lambda: T, t: T) -> T {
    if n == 0 {
        return T::one();
    }
    if lambda == T::zero() {
        return c::<T>(2.0) * chebyshev_t(n, t);
    }
    (T::from_usize_lossy(n) + lambda) / lambda * gegenbauer_raw(n, lambda, t)
}

/// `Z_n'(t) = 2 (n + λ) C_{n−1}^{λ+1}(t)`.
pub fn zonal_derivative_raw<T: Scalar>(n: usize, lambda: T, t: T) -> T {
    if n == 0 {
        return T::zero();
    }
    c::<T>(2.0) * (T::from_usize_lossy(n) + lambda) * gegenbauer_raw(n - 1, lambda + T::one(), t)
}

/// `F(t) = Σ coeffs[n] Z_n(t)` with `λ = (d − 2)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GegenbauerSeries<T> {
    pub lambda: T,
    pub coeffs: Vec<T>,
    pub truncation_error: T,
}

impl<T: Scalar> GegenbauerSeries<T> {
    pub fn new(lambda: T, coeffs: Vec<T>) -> Self {
        Self {
            lambda,
            coeffs,
            truncation_error: T::zero(),
        }
    }

    /// λ for the sphere in `R^d`.
    pub fn lambda_for_dim(d: usize) -> T {
        T::from_usize_lossy(d.saturating_sub(2)) * c(0.5)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_raw(&self, t: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| if a == T::zero() { T::zero() } else { a * zonal_raw(n, self.lambda, t) })
            .sum()
    }

    pub fn eval(&self, t: T) -> Result<T> {
        Ok(self.eval_raw(check_range(t)?))
    }

    pub fn derivative_raw(&self, t: T) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| {
                if a == T::zero() {
                    T::zero()
                } else {
                    a * zonal_derivative_raw(n, self.lambda, t)
                }
            })
            .sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub const DEFAULT_N_MAX: usize = 64;
const TAIL: usize = 8;

/// Projects `f` onto `Z_0, …, Z_{n_max}` with an `m_quad`-node Gauss–Gegenbauer rule.
///
/// `coeffs[0]` is the normalized mean `∫ F w / ∫ w`, which on the sphere is
/// the double integral of `F(⟨x, y⟩)` against the uniform measure.
pub fn gegenbauer_coeffs<T: Scalar>(
    f: impl Fn(T) -> T,
    lambda: T,
    n_max: usize,
    m_quad: usize,
) -> Result<GegenbauerSeries<T>> {
    if m_quad < n_max + 1 {
        return Err(Error::InvalidArgument(format!(
            "{m_quad} quadrature nodes cannot resolve degree {n_max}"
        )));
    }
    let q = gauss_gegenbauer(m_quad, lambda)?;
    let samples: Vec<T> = q.nodes.iter().map(|&t| f(t)).collect();
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut num = T::zero();
        let mut den = T::zero();
        for ((&t, &w), &fv) in q.nodes.iter().zip(&q.weights).zip(&samples) {
            let z = zonal_raw(n, lambda, t);
            num += w * fv * z;
            den += w * z * z;
        }
        coeffs.push(num / den);
    }
    let tail_start = coeffs.len().saturating_sub(TAIL).max(1);
    let truncation_error = (tail_start..coeffs.len())
        .map(|n| coeffs[n].abs() * gegenbauer_at_one(n, lambda).abs())
        .fold(T::zero(), T::max);
    Ok(GegenbauerSeries {
        lambda,
        coeffs,
        truncation_error,
    })
}

/// Default resolution: 64 coefficients from 128 nodes.
pub fn gegenbauer_coeffs_default<T: Scalar>(
    f: impl Fn(T) -> T,
    lambda: T,
) -> Result<GegenbauerSeries<T>> {
    gegenbauer_coeffs(f, lambda, DEFAULT_N_MAX, 2 * DEFAULT_N_MAX)
}

/// `∫∫ F(⟨x, y⟩) dσ(x) dσ(y)` on the sphere in `R^d`, integrated in the angle
/// so that kinks at t = ±1 do not spoil convergence.
pub fn zonal_mean<T: Scalar>(f: impl Fn(T) -> T, d: usize, m: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
    }
    let q = gauss_legendre::<T>(m)?;
    let pi = c::<T>(std::f64::consts::PI);
    let p = d as i32 - 2;
    let mut num = T::zero();
    let mut den = T::zero();
    for (theta, w) in q.mapped(T::zero(), pi) {
        let s = theta.sin().powi(p);
        num += w * s * f(theta.cos());
        den += w * s;
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        assert_eq!(gegenbauer_eval(0, 0.7, 0.3).unwrap(), 1.0);
        assert!((gegenbauer_eval(1, 0.5f64, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((gegenbauer_eval(2, 0.5f64, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(gegenbauer_eval(2, 0.5, 1.5).is_err());
    }

    #[test]
    fn value_at_one_is_binomial() {
        // binom(n + 2λ − 1, n) at λ = 1 is n + 1; at λ = 3/2 it is (n+1)(n+2)/2
        for n in 0..10 {
            assert!((gegenbauer_at_one(n, 1.0) - (n + 1) as f64).abs() < 1e-12);
            let e = ((n + 1) * (n + 2)) as f64 / 2.0;
            assert!((gegenbauer_at_one(n, 1.5) - e).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_function_coefficients() {
        let s = gegenbauer_coeffs(|t: f64| t, 0.5, 10, 20).unwrap();
        assert!((s.coeffs[1] - 1.0 / 3.0).abs() < 1e-14);
        for (n, a) in s.coeffs.iter().enumerate() {
            if n != 1 {
                assert!(a.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn distance_profile_on_two_sphere() {
        let s = gegenbauer_coeffs(|t: f64| (2.0 - 2.0 * t).max(0.0).sqrt(), 0.5, 12, 128).unwrap();
        assert!((s.coeffs[0] - 4.0 / 3.0).abs() < 1e-6);
        for n in 1..=12 {
            let nf = n as f64;
            let e = -4.0 / ((2.0 * nf - 1.0) * (2.0 * nf + 1.0) * (2.0 * nf + 3.0));
            assert!((s.coeffs[n] - e).abs() < 1e-6, "n = {n}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let s = GegenbauerSeries::new(0.5f64, vec![0.3, -0.2, 0.7, 0.1, -0.05]);
        let h = 1e-6;
        for &t in &[-0.9, -0.2, 0.4, 0.8] {
            let fd = (s.eval_raw(t + h) - s.eval_raw(t - h)) / (2.0 * h);
            assert!((s.derivative_raw(t) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn chebyshev_limit() {
        let s = gegenbauer_coeffs(|t: f64| t * t, 0.0, 6, 8).unwrap();
        // t² = (1 + T_2)/2 = 1/2 Z_0 + 1/4 Z_2
        assert!((s.coeffs[0] - 0.5).abs() < 1e-14);
        assert!((s.coeffs[2] - 0.25).abs() < 1e-14);
    }

    #[test]
    fn mean_distance_on_two_sphere() {
        let m = zonal_mean(|t: f64| (2.0 - 2.0 * t).max(0.0).sqrt(), 3, 32).unwrap();
        assert!((m - 4.0 / 3.0).abs() < 1e-14);
    }
}
