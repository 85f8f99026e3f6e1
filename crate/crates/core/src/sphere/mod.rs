//! Zonal kernels `F(⟨x, y⟩)` on spheres: Gegenbauer expansions, the
//! Schoenberg sign test, Funk–Hecke and addition-formula checks, and the
//! spherical convolution square root.

mod gegenbauer;
mod harmonics;

pub use gegenbauer::{
    chebyshev_t, gegenbauer_at_one, gegenbauer_coeffs, gegenbauer_coeffs_default, gegenbauer_eval,
    gegenbauer_raw, zonal_derivative_raw, zonal_mean, zonal_raw, GegenbauerSeries, DEFAULT_N_MAX,
};
pub use harmonics::{harmonic_basis, real_harmonic, MAX_DEGREE};

use serde::{Deserialize, Serialize};

use crate::domains::{DiscreteSpace, DomainTag};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::scalar::{c, Scalar};

/// Outcome of the coefficient sign test. `None` means the truncation error
/// is too large to confirm a nonnegative verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchoenbergVerdict {
    pub pd: Option<bool>,
    pub cpd: Option<bool>,
}

/// pd iff every coefficient is ≥ −tol; cpd iff every coefficient with n ≥ 1 is.
///
/// A clearly negative coefficient decides `false` regardless of truncation.
pub fn schoenberg_classify<T: Scalar>(series: &GegenbauerSeries<T>, tol: T) -> SchoenbergVerdict {
    let verdict = |from: usize| {
        if series.coeffs.iter().skip(from).any(|&a| a < -tol) {
            Some(false)
        } else if series.truncation_error > tol {
            None
        } else {
            Some(true)
        }
    };
    SchoenbergVerdict {
        pd: verdict(0),
        cpd: verdict(1),
    }
}

fn require_two_sphere<T: Scalar>(space: &DiscreteSpace<T>) -> Result<()> {
    match space.tag() {
        DomainTag::Sphere { dim: 3 } => Ok(()),
        other => Err(Error::Unsupported(format!(
            "harmonic checks are implemented on S² only, got {other}"
        ))),
    }
}

/// `max_x |∫ F(⟨x, y⟩) Y(y) dσ(y) − F̂(l) Y(x)|` over the probe points, with
/// the integral replaced by the equal-weight average over `space`.
pub fn funk_hecke_check<T: Scalar>(
    series: &GegenbauerSeries<T>,
    degree: usize,
    order: i32,
    space: &DiscreteSpace<T>,
    probes: &[Vec<T>],
) -> Result<T> {
    require_two_sphere(space)?;
    let ys: Vec<T> = space
        .points()
        .map(|y| real_harmonic(degree, order, y))
        .collect::<Result<_>>()?;
    let coeff = series.coeffs.get(degree).copied().unwrap_or(T::zero());
    let inv_n = T::from_usize_lossy(space.len()).recip();
    let mut worst = T::zero();
    for x in probes {
        let lhs = space
            .points()
            .zip(&ys)
            .map(|(y, &yv)| series.eval_raw(clamp_unit(dot(x, y))) * yv)
            .sum::<T>()
            * inv_n;
        let rhs = coeff * real_harmonic(degree, order, x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// `max |Σ_m Y_{l,m}(x) Y_{l,m}(y) − Z_l(⟨x, y⟩)|` over all node pairs,
/// diagonal included.
pub fn addition_formula_check<T: Scalar>(degree: usize, space: &DiscreteSpace<T>) -> Result<T> {
    require_two_sphere(space)?;
    let basis: Vec<Vec<T>> = space
        .points()
        .map(|x| harmonic_basis(degree, x))
        .collect::<Result<_>>()?;
    let lambda = c::<T>(0.5);
    let mut worst = T::zero();
    for i in 0..space.len() {
        for j in i..space.len() {
            let lhs = dot(&basis[i], &basis[j]);
            let t = clamp_unit(dot(space.point(i), space.point(j)));
            worst = worst.max((lhs - zonal_raw(degree, lambda, t)).abs());
        }
    }
    Ok(worst)
}

/// Series with `f̂(n) = +√F̂(n)`, so that `∫ f(⟨x,z⟩) f(⟨z,y⟩) dσ(z) = F(⟨x,y⟩)`.
///
/// Coefficients within `tol` of zero become zero.
pub fn sphere_sqrt<T: Scalar>(series: &GegenbauerSeries<T>, tol: T) -> Result<GegenbauerSeries<T>> {
    let mut coeffs = Vec::with_capacity(series.coeffs.len());
    for &a in &series.coeffs {
        if a < -tol {
            return Err(Error::NotPositiveDefinite {
                eigenvalue: a.as_f64(),
            });
        }
        coeffs.push(if a.abs() <= tol { T::zero() } else { a.sqrt() });
    }
    Ok(GegenbauerSeries {
        lambda: series.lambda,
        coeffs,
        truncation_error: series.truncation_error.sqrt(),
    })
}

/// `max |avg_z f(⟨x,z⟩) f(⟨z,y⟩) − F(⟨x,y⟩)|` over the given pairs, with the
/// z-average taken over the nodes of `space`.
pub fn sphere_sqrt_residual<T: Scalar>(
    f: &GegenbauerSeries<T>,
    target: impl Fn(T) -> T,
    space: &DiscreteSpace<T>,
    pairs: &[(Vec<T>, Vec<T>)],
) -> T {
    let inv_n = T::from_usize_lossy(space.len()).recip();
    let mut worst = T::zero();
    for (x, y) in pairs {
        let comp = space
            .points()
            .map(|z| f.eval_raw(clamp_unit(dot(x, z))) * f.eval_raw(clamp_unit(dot(z, y))))
            .sum::<T>()
            * inv_n;
        worst = worst.max((comp - target(clamp_unit(dot(x, y)))).abs());
    }
    worst
}

#[inline]
pub(crate) fn clamp_unit<T: Scalar>(t: T) -> T {
    t.max(-T::one()).min(T::one())
}
