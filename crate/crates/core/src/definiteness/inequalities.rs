use serde::{Deserialize, Serialize};

use crate::domains::WeightedMeasure;
use crate::error::{Error, Result};
use crate::kernels::Gram;
use crate::scalar::{c, Scalar};

/// `½ (I(μ₁) + I(μ₂)) − I(μ₁, μ₂)`.
pub fn am_inequality_gap<T: Scalar>(
    gram: &Gram<T>,
    mu1: &WeightedMeasure<T>,
    mu2: &WeightedMeasure<T>,
) -> Result<T> {
    mu1.require_mass_one()?;
    mu2.require_mass_one()?;
    let i1 = gram.energy(mu1)?;
    let i2 = gram.energy(mu2)?;
    Ok((i1 + i2) * c(0.5) - gram.mixed(mu1, mu2)?)
}

/// `√(I(μ₁) I(μ₂)) − I(μ₁, μ₂)`. A self-energy below `−tol·‖G‖` is an error.
pub fn gm_inequality_gap<T: Scalar>(
    gram: &Gram<T>,
    mu1: &WeightedMeasure<T>,
    mu2: &WeightedMeasure<T>,
    tol: T,
) -> Result<T> {
    mu1.require_mass_one()?;
    mu2.require_mass_one()?;
    let thr = gram.abs_tol(tol);
    let i1 = gram.energy(mu1)?;
    let i2 = gram.energy(mu2)?;
    for e in [i1, i2] {
        if e < -thr {
            return Err(Error::NegativeSelfEnergy { energy: e.as_f64() });
        }
    }
    let geo = (i1.max(T::zero()) * i2.max(T::zero())).sqrt();
    Ok(geo - gram.mixed(mu1, mu2)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvexityScan<T> {
    /// `min_t [(1−t) f(0) + t f(1) − f(t)]` over the grid.
    pub min_gap: T,
    pub argmin_t: T,
    /// Second difference `2 (f(0) − 2 f(½) + f(1))`, the `t²` coefficient of `f`.
    pub curvature: T,
}

/// Chord gaps of `f(t) = I((1−t)μ + tν)` on `t_grid ⊂ [0, 1]`.
pub fn convexity_scan<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    nu: &WeightedMeasure<T>,
    t_grid: &[T],
) -> Result<ConvexityScan<T>> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty t grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(**t >= T::zero() && **t <= T::one())) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 1]")));
    }
    mu.require_mass_one()?;
    nu.require_mass_one()?;
    Ok(chord_scan(gram, mu.weights(), nu.weights(), t_grid))
}

/// Same scan on raw weight vectors, with no mass restriction.
pub(crate) fn chord_scan<T: Scalar>(gram: &Gram<T>, a: &[T], b: &[T], t_grid: &[T]) -> ConvexityScan<T> {
    let at = |t: T| -> T {
        let w: Vec<T> = a.iter().zip(b).map(|(&x, &y)| (T::one() - t) * x + t * y).collect();
        gram.quad(&w)
    };
    let f0 = at(T::zero());
    let f1 = at(T::one());
    let fh = at(c(0.5));
    let mut min_gap = T::infinity();
    let mut argmin_t = t_grid[0];
    for &t in t_grid {
        let gap = (T::one() - t) * f0 + t * f1 - at(t);
        if gap < min_gap {
            min_gap = gap;
            argmin_t = t;
        }
    }
    ConvexityScan {
        min_gap,
        argmin_t,
        curvature: c::<T>(2.0) * (f0 - c::<T>(2.0) * fh + f1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialVerdict {
    InvariantFullSupport,
    ConstOnSuppGeqElsewhere,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PotentialCondition<T> {
    pub verdict: PotentialVerdict,
    pub energy: T,
    /// `max |U − I|` over the support.
    pub support_deviation: T,
    /// `min (U − I)` off the support; `None` when the support is everything.
    pub off_support_margin: Option<T>,
    pub failing_nodes: Vec<usize>,
}

/// Compares `U = Gμ` against `I(μ)` node by node. `tol` is absolute.
///
/// The verdict depends on potential values only: a node with zero weight
/// whose potential equals `I(μ)` counts toward `InvariantFullSupport`.
pub fn potential_condition<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    tol: T,
) -> Result<PotentialCondition<T>> {
    let u = gram.potential(mu)?;
    let energy = crate::linalg::dot(mu.weights(), &u);
    let supp = mu.support();
    let mut on = vec![false; u.len()];
    supp.iter().for_each(|&i| on[i] = true);

    let mut support_deviation = T::zero();
    let mut off_support_margin: Option<T> = None;
    let mut failing_nodes = Vec::new();
    for (i, &ui) in u.iter().enumerate() {
        let d = ui - energy;
        if on[i] {
            support_deviation = support_deviation.max(d.abs());
            if d.abs() > tol {
                failing_nodes.push(i);
            }
        } else {
            off_support_margin = Some(off_support_margin.map_or(d, |m| m.min(d)));
            if d < -tol {
                failing_nodes.push(i);
            }
        }
    }
    let flat = u.iter().all(|&x| (x - energy).abs() <= tol);
    let verdict = if flat {
        PotentialVerdict::InvariantFullSupport
    } else if failing_nodes.is_empty() {
        PotentialVerdict::ConstOnSuppGeqElsewhere
    } else {
        PotentialVerdict::Fails
    };
    Ok(PotentialCondition {
        verdict,
        energy,
        support_deviation,
        off_support_margin,
        failing_nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LocalMinTest<T> {
    pub passed: bool,
    /// Index of the first violating probe.
    pub worst: Option<usize>,
    /// Smallest `f′(0) / ‖ν − μ‖` over non-degenerate probes.
    pub min_slope: T,
    /// Smallest `(f(t) − f(0)) / ‖ν − μ‖²` on the grid `t_max·k/steps`.
    pub min_increment: T,
    pub degenerate: usize,
}

/// Checks that `μ` is a local minimizer of `I` along each segment towards a
/// probe. `tol` is relative to `‖G‖`; slopes and curvatures are normalized
/// by the length of `ν − μ`, and probes with `ν ≈ μ` are skipped.
pub fn directional_local_min_test<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    probes: &[WeightedMeasure<T>],
    t_max: T,
    steps: usize,
    tol: T,
) -> Result<LocalMinTest<T>> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("no probe measures".into()));
    }
    if !(t_max > T::zero() && t_max <= T::one()) || steps == 0 {
        return Err(Error::InvalidArgument("need 0 < t_max ≤ 1 and steps ≥ 1".into()));
    }
    let thr = gram.abs_tol(tol);
    let i_mu = gram.energy(mu)?;
    let two = c::<T>(2.0);
    let mut out = LocalMinTest {
        passed: true,
        worst: None,
        min_slope: T::infinity(),
        min_increment: T::infinity(),
        degenerate: 0,
    };
    for (k, nu) in probes.iter().enumerate() {
        let d = nu.sub(mu)?;
        let len = d.weight_norm();
        if len <= c::<T>(1e-12).max(T::epsilon() * c(16.0)) {
            out.degenerate += 1;
            continue;
        }
        let slope = two * (gram.mixed(mu, nu)? - i_mu) / len;
        let curv = two * gram.energy(&d)? / (len * len);
        out.min_slope = out.min_slope.min(slope);
        for s in 1..=steps {
            let t = t_max * T::from_usize_lossy(s) / T::from_usize_lossy(steps);
            // f(t) − f(0) = t f′(0) + ½ t² f″
            let inc = t * slope / len + c::<T>(0.5) * t * t * curv;
            out.min_increment = out.min_increment.min(inc);
        }
        let bad = slope < -thr || (slope <= thr && curv < -thr);
        if bad && out.passed {
            out.passed = false;
            out.worst = Some(k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DiscreteSpace;
    use crate::kernels::KernelSpec;

    fn octa() -> (Gram<f64>, DiscreteSpace<f64>) {
        let s = DiscreteSpace::octahedron().unwrap();
        (KernelSpec::neg_distance().gram(&s).unwrap(), s)
    }

    #[test]
    fn am_gap_is_half_difference_energy() {
        let (g, s) = octa();
        let a = WeightedMeasure::new(&s, vec![0.5, 0.1, 0.1, 0.1, 0.1, 0.1]).unwrap();
        let b = WeightedMeasure::new(&s, vec![0.0, 0.3, 0.3, 0.0, 0.2, 0.2]).unwrap();
        let gap = am_inequality_gap(&g, &a, &b).unwrap();
        let half = 0.5 * g.energy(&a.sub(&b).unwrap()).unwrap();
        assert!((gap - half).abs() < 1e-12);
        assert!(am_inequality_gap(&g, &a, &a).unwrap().abs() < 1e-15);
    }

    #[test]
    fn gm_rejects_negative_self_energy() {
        let (g, s) = octa();
        let d = WeightedMeasure::dirac(&s, 0).unwrap();
        let u = WeightedMeasure::uniform(&s);
        assert!(matches!(
            gm_inequality_gap(&g, &u, &d, 1e-9),
            Err(Error::NegativeSelfEnergy { .. })
        ));
    }

    #[test]
    fn chord_gap_endpoints_and_curvature() {
        let (g, s) = octa();
        let a = WeightedMeasure::dirac(&s, 0).unwrap();
        let b = WeightedMeasure::dirac(&s, 2).unwrap();
        let ends = convexity_scan(&g, &a, &b, &[0.0, 1.0]).unwrap();
        assert_eq!(ends.min_gap, 0.0);
        let curv = g.energy(&b.sub(&a).unwrap()).unwrap();
        assert!((ends.curvature - curv).abs() < 1e-10);
        assert!(convexity_scan(&g, &a, &b, &[]).is_err());
    }

    #[test]
    fn interval_potential_keys_on_values() {
        let s = DiscreteSpace::<f64>::interval(3).unwrap();
        let g = KernelSpec::distance().gram(&s).unwrap();
        let mu = WeightedMeasure::new(&s, vec![0.5, 0.0, 0.5]).unwrap();
        let p = potential_condition(&g, &mu, 1e-12).unwrap();
        assert_eq!(p.verdict, PotentialVerdict::InvariantFullSupport);
        let d = WeightedMeasure::dirac(&s, 0).unwrap();
        let p = potential_condition(&g, &d, 1e-12).unwrap();
        assert_eq!(p.verdict, PotentialVerdict::ConstOnSuppGeqElsewhere);
        assert_eq!(p.off_support_margin, Some(1.0));
        let neg = KernelSpec::neg_distance().gram(&s).unwrap();
        let p = potential_condition(&neg, &d, 1e-12).unwrap();
        assert_eq!(p.verdict, PotentialVerdict::Fails);
        assert_eq!(p.failing_nodes, vec![1, 2]);
    }

    #[test]
    fn dirac_is_not_local_min_for_neg_distance() {
        let (g, s) = octa();
        let mu = WeightedMeasure::dirac(&s, 0).unwrap();
        let nu = WeightedMeasure::dirac(&s, 1).unwrap();
        let r = directional_local_min_test(&g, &mu, &[mu.clone(), nu], 1.0, 4, 1e-9).unwrap();
        assert!(!r.passed);
        assert_eq!(r.worst, Some(1));
        assert_eq!(r.degenerate, 1);
        // f′(0) = −4, normalized by ‖ν − μ‖ = √2
        assert!((r.min_slope + 4.0 / 2f64.sqrt()).abs() < 1e-12);
    }
}
