use serde::{Deserialize, Serialize};

use crate::domains::{fibonacci_points, gauss_legendre, Quadrature1D};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::scalar::{c, Scalar};
use crate::sphere::zonal_mean;

/// Inner rule for the cap measure in dimensions without a closed form.
const CAP_NODES: usize = 32;
/// Rule for the mean distance `∫∫ ‖x − y‖`.
const MEAN_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapQuadrature {
    /// Gauss–Legendre nodes per piece of the height integral.
    #[serde(rename = "M_h")]
    pub m_h: usize,
    /// Fibonacci nodes for the integral over the cap centre.
    #[serde(rename = "N_x")]
    pub n_x: usize,
}

impl Default for CapQuadrature {
    fn default() -> Self {
        Self { m_h: 16, n_x: 2048 }
    }
}

impl CapQuadrature {
    pub fn doubled(self) -> Self {
        Self {
            m_h: 2 * self.m_h,
            n_x: 2 * self.n_x,
        }
    }
}

/// Normalized surface measure of a cap of angular radius `φ` on the sphere in `R^d`.
struct CapMeasure<T> {
    d: usize,
    rule: Quadrature1D<T>,
    total: T,
}

impl<T: Scalar> CapMeasure<T> {
    fn new(d: usize) -> Result<Self> {
        let rule = gauss_legendre::<T>(CAP_NODES)?;
        let mut m = Self {
            d,
            rule,
            total: T::one(),
        };
        m.total = m.raw(c(std::f64::consts::PI));
        Ok(m)
    }

    /// `∫_0^φ sin^{d−2} θ dθ`.
    fn raw(&self, phi: T) -> T {
        let p = self.d as i32 - 2;
        self.rule
            .mapped(T::zero(), phi)
            .into_iter()
            .map(|(t, w)| w * t.sin().powi(p))
            .sum()
    }

    fn at_angle(&self, phi: T) -> T {
        match self.d {
            2 => phi / c(std::f64::consts::PI),
            3 => (T::one() - phi.cos()) * c(0.5),
            _ => self.raw(phi) / self.total,
        }
    }
}

/// `σ(C(x, h))` for the cap `{z : ⟨z, x⟩ > h}` on the sphere in `R^d`.
pub fn cap_measure<T: Scalar>(h: T, d: usize) -> Result<T> {
    if d < 2 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
    }
    let h = h.max(-T::one()).min(T::one());
    Ok(CapMeasure::new(d)?.at_angle(h.acos()))
}

fn check_points<T: Scalar>(points: &[Vec<T>]) -> Result<usize> {
    let d = points.first().map(Vec::len).ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
    if d < 2 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: p.len(),
            });
        }
        let r = norm(p);
        if !r.is_finite() || (r - T::one()).abs() > c(T::MASS_TOL) {
            return Err(Error::NotUnitNorm {
                index: i,
                norm: r.as_f64(),
            });
        }
    }
    Ok(d)
}

/// `∫_{−1}^{1} ∫ (#{z ∈ ω : ⟨z, x⟩ > h}/N − σ(C(x, h)))² dσ(x) dh`, with
/// the outer integral replaced by the equal-weight average over `x_nodes`.
///
/// For fixed `x` the height integral is split at the projections `⟨z, x⟩`
/// and each piece is integrated in the angle `h = cos φ`.
pub fn cap_discrepancy_with_nodes<T: Scalar>(points: &[Vec<T>], m_h: usize, x_nodes: &[Vec<T>]) -> Result<T> {
    let d = check_points(points)?;
    if x_nodes.is_empty() {
        return Err(Error::InvalidArgument("no cap centres".into()));
    }
    if let Some(x) = x_nodes.iter().find(|x| x.len() != d) {
        return Err(Error::LengthMismatch {
            expected: d,
            got: x.len(),
        });
    }
    let rule = gauss_legendre::<T>(m_h)?;
    let cap = CapMeasure::new(d)?;
    let pi = c::<T>(std::f64::consts::PI);
    let inv_n = T::from_usize_lossy(points.len()).recip();

    let mut total = T::zero();
    let mut angles: Vec<T> = Vec::with_capacity(points.len());
    for x in x_nodes {
        angles.clear();
        angles.extend(points.iter().map(|z| dot(z, x).max(-T::one()).min(T::one()).acos()));
        angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        let mut lo = T::zero();
        let mut acc = T::zero();
        // On (angles[k−1], angles[k]) exactly k points lie inside the cap.
        for k in 0..=angles.len() {
            let hi = if k < angles.len() { angles[k] } else { pi };
            if hi > lo {
                let frac = T::from_usize_lossy(k) * inv_n;
                for (phi, w) in rule.mapped(lo, hi) {
                    let e = frac - cap.at_angle(phi);
                    acc += w * e * e * phi.sin();
                }
            }
            lo = lo.max(hi);
        }
        total += acc;
    }
    Ok(total / T::from_usize_lossy(x_nodes.len()))
}

/// Cap discrepancy with Fibonacci cap centres.
pub fn cap_discrepancy<T: Scalar>(points: &[Vec<T>], quad: CapQuadrature) -> Result<T> {
    let d = check_points(points)?;
    cap_discrepancy_with_nodes(points, quad.m_h, &fibonacci_points::<T>(d, quad.n_x)?)
}

/// Distance-energy gap, cap discrepancy and their ratio for one point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SetRatio<T> {
    /// `∫∫ ‖x − y‖ dσ dσ − (1/N²) Σ ‖z_i − z_j‖`.
    pub energy_gap: T,
    pub cap_d2: T,
    pub ratio: T,
}

fn set_ratio_with_nodes<T: Scalar>(set: &[Vec<T>], mean_dist: T, m_h: usize, x_nodes: &[Vec<T>]) -> Result<SetRatio<T>> {
    let n = T::from_usize_lossy(set.len());
    let e: T = set
        .iter()
        .flat_map(|a| set.iter().map(move |b| crate::linalg::distance(a, b)))
        .sum::<T>()
        / (n * n);
    let d2 = cap_discrepancy_with_nodes(set, m_h, x_nodes)?;
    if d2 < c(1e-14) {
        return Err(Error::Degenerate(format!("cap discrepancy {d2}")));
    }
    Ok(SetRatio {
        energy_gap: mean_dist - e,
        cap_d2: d2,
        ratio: (mean_dist - e) / d2,
    })
}

fn mean_distance<T: Scalar>(d: usize) -> Result<T> {
    zonal_mean(|t: T| (c::<T>(2.0) - c::<T>(2.0) * t).max(T::zero()).sqrt(), d, MEAN_NODES)
}

/// [`SetRatio`] for a single point set.
pub fn set_ratio<T: Scalar>(set: &[Vec<T>], quad: CapQuadrature) -> Result<SetRatio<T>> {
    let d = check_points(set)?;
    set_ratio_with_nodes(set, mean_distance(d)?, quad.m_h, &fibonacci_points::<T>(d, quad.n_x)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ClassicalRatio<T> {
    pub energy_gaps: Vec<T>,
    pub cap_d2: Vec<T>,
    pub ratios: Vec<T>,
    pub mean: T,
    /// `(max − min) / |mean|` over the ratios.
    pub spread: T,
    pub quadrature: CapQuadrature,
}

/// Distance-energy gap over cap discrepancy for each point set.
pub fn classical_ratio<T: Scalar>(sets: &[Vec<Vec<T>>], quad: CapQuadrature) -> Result<ClassicalRatio<T>> {
    if sets.len() < 2 {
        return Err(Error::InvalidArgument("need at least two point sets".into()));
    }
    let d = check_points(&sets[0])?;
    let mean_dist = mean_distance(d)?;
    let x_nodes = fibonacci_points::<T>(d, quad.n_x)?;
    let mut energy_gaps = Vec::with_capacity(sets.len());
    let mut cap_d2 = Vec::with_capacity(sets.len());
    let mut ratios = Vec::with_capacity(sets.len());
    for (s, set) in sets.iter().enumerate() {
        if check_points(set)? != d {
            return Err(Error::LengthMismatch {
                expected: d,
                got: set[0].len(),
            });
        }
        let r = set_ratio_with_nodes(set, mean_dist, quad.m_h, &x_nodes).map_err(|e| match e {
            Error::Degenerate(m) => Error::Degenerate(format!("set {s}: {m}")),
            other => other,
        })?;
        energy_gaps.push(r.energy_gap);
        cap_d2.push(r.cap_d2);
        ratios.push(r.ratio);
    }
    let mean = ratios.iter().copied().sum::<T>() / T::from_usize_lossy(ratios.len());
    let lo = ratios.iter().copied().fold(T::infinity(), T::min);
    let hi = ratios.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(ClassicalRatio {
        energy_gaps,
        cap_d2,
        ratios,
        mean,
        spread: (hi - lo) / mean.abs(),
        quadrature: quad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_measure_closed_forms() {
        assert!((cap_measure(0.3f64, 3).unwrap() - 0.35).abs() < 1e-15);
        assert!((cap_measure(0.0f64, 2).unwrap() - 0.5).abs() < 1e-15);
        // d = 4: σ(C(0)) = ½ by symmetry
        assert!((cap_measure(0.0f64, 4).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn single_point_value() {
        // by symmetry: 2 ∫_0^1 p (1 − p) dp = 1/3
        let d2 = cap_discrepancy(&[vec![0.0f64, 0.0, 1.0]], CapQuadrature::default()).unwrap();
        assert!((d2 - 1.0 / 3.0).abs() < 1e-4, "{d2}");
        let other = cap_discrepancy(&[vec![0.6f64, 0.0, 0.8]], CapQuadrature::default()).unwrap();
        assert!((d2 - other).abs() < 1e-4);
    }

    #[test]
    fn antipodal_pair_beats_single_point() {
        let q = CapQuadrature::default();
        let one = cap_discrepancy(&[vec![0.0f64, 0.0, 1.0]], q).unwrap();
        let two = cap_discrepancy(&[vec![0.0f64, 0.0, 1.0], vec![0.0, 0.0, -1.0]], q).unwrap();
        assert!(two < one);
    }

    #[test]
    fn rejects_off_sphere_points() {
        assert!(matches!(
            cap_discrepancy(&[vec![0.0f64, 0.0, 1.1]], CapQuadrature::default()),
            Err(Error::NotUnitNorm { index: 0, .. })
        ));
    }
}
