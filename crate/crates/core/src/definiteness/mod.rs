//! Definiteness classes of a kernel on a finite space, the mixed-energy
//! inequalities, convexity and minimizer tests, and the equivalence harness.

mod harness;
mod inequalities;

pub use harness::{equivalence_harness, Condition, ConsistencyReport, HarnessMode, HarnessOptions};
pub use inequalities::{
    am_inequality_gap, convexity_scan, directional_local_min_test, gm_inequality_gap,
    potential_condition, ConvexityScan, LocalMinTest, PotentialCondition, PotentialVerdict,
};

use serde::Serialize;

use crate::domains::{DiscreteSpace, WeightedMeasure};
use crate::error::Result;
use crate::kernels::{check_symmetric, Gram, KernelSpec};
use crate::linalg::{helmert_basis, helmert_compress, Matrix};
use crate::scalar::{c, Scalar};
use crate::spectral::symmetric_eigen;

/// Bisection steps allowed when searching for a certifying shift.
const SHIFT_STEPS: usize = 60;

#[derive(Debug, Clone)]
pub struct DefinitenessReport<T> {
    pub pd: bool,
    pub cpd: bool,
    pub strict_pd: bool,
    pub strict_cpd: bool,
    pub pd_mod_constant: bool,
    /// Unit-norm weight vector with the most negative quadratic form: mean-zero
    /// when `cpd` fails, otherwise a full-space direction. Present iff `!pd`.
    pub witness_violation: Option<WeightedMeasure<T>>,
    /// Smallest verified `C` with `K + C` positive semidefinite.
    pub shift_constant: Option<T>,
    pub min_eig_full: T,
    /// `None` on a one-node space, where no nonzero mean-zero measure exists.
    pub min_eig_centered: Option<T>,
    pub scale: T,
    pub tol: T,
}

#[derive(Serialize)]
struct ReportJson {
    pd: bool,
    cpd: bool,
    strict_pd: bool,
    strict_cpd: bool,
    pd_mod_constant: bool,
    witness_violation: Option<Vec<f64>>,
    shift_constant: Option<f64>,
    min_eig_full: f64,
    min_eig_centered: Option<f64>,
    scale: f64,
    tol: f64,
}

impl<T: Scalar> DefinitenessReport<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let r = ReportJson {
            pd: self.pd,
            cpd: self.cpd,
            strict_pd: self.strict_pd,
            strict_cpd: self.strict_cpd,
            pd_mod_constant: self.pd_mod_constant,
            witness_violation: self
                .witness_violation
                .as_ref()
                .map(|m| m.weights().iter().map(|x| x.as_f64()).collect()),
            shift_constant: self.shift_constant.map(Scalar::as_f64),
            min_eig_full: self.min_eig_full.as_f64(),
            min_eig_centered: self.min_eig_centered.map(Scalar::as_f64),
            scale: self.scale.as_f64(),
            tol: self.tol.as_f64(),
        };
        serde_json::to_value(r).expect("plain data serializes")
    }
}

/// Smallest eigenvalue and its eigenvector.
pub(crate) fn min_eigenpair<T: Scalar>(m: &Matrix<T>) -> Result<(T, Vec<T>)> {
    let e = symmetric_eigen(m)?;
    let j = e.values.len() - 1;
    Ok((e.values[j], e.vectors[j].clone()))
}

/// Centered quadratic form `QᵀGQ` minimum with its direction mapped back to
/// node weights (unit norm, zero sum).
pub(crate) fn centered_min<T: Scalar>(g: &Matrix<T>) -> Result<Option<(T, Vec<T>)>> {
    let n = g.rows();
    if n < 2 {
        return Ok(None);
    }
    let (lam, u) = min_eigenpair(&helmert_compress(g))?;
    let q = helmert_basis::<T>(n);
    let d = q.matvec(&u)?;
    Ok(Some((lam, d)))
}

fn unit_positive_sum<T: Scalar>(mut v: Vec<T>) -> Vec<T> {
    let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
    if norm > T::zero() {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let s: T = v.iter().copied().sum();
    if s < T::zero() {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Classifies the Gram matrix of a kernel. `tol` is relative to `max |G|`.
pub fn classify<T: Scalar>(gram: &Gram<T>, tol: T) -> Result<DefinitenessReport<T>> {
    let g = gram.matrix();
    check_symmetric(g)?;
    let n = g.rows();
    let scale = gram.scale();
    let thr = gram.abs_tol(tol);

    let (min_full, v_full) = min_eigenpair(g)?;
    let centered = centered_min(g)?;
    let min_centered = centered.as_ref().map(|(l, _)| *l);

    let pd = min_full >= -thr;
    let strict_pd = min_full > thr;
    let cpd = min_centered.is_none_or(|l| l >= -thr);
    let strict_cpd = min_centered.is_none_or(|l| l > thr);

    let witness = if !cpd {
        let d = centered.expect("n ≥ 2 when cpd fails").1;
        Some(unit_positive_sum(d))
    } else if !pd {
        Some(unit_positive_sum(v_full))
    } else {
        None
    };
    let witness_violation = witness
        .map(|w| WeightedMeasure::new(gram.space(), w))
        .transpose()?;

    let shift_constant = if !cpd {
        None
    } else if pd {
        Some(T::zero())
    } else {
        find_shift(g, thr, scale, n)?
    };

    Ok(DefinitenessReport {
        pd,
        cpd,
        strict_pd,
        strict_cpd,
        pd_mod_constant: shift_constant.is_some(),
        witness_violation,
        shift_constant,
        min_eig_full: min_full,
        min_eig_centered: min_centered,
        scale,
        tol,
    })
}

/// `λ_min(G + C·J)`.
pub(crate) fn shifted_min<T: Scalar>(g: &Matrix<T>, shift: T) -> Result<T> {
    let m = g.map(|x| x + shift);
    Ok(min_eigenpair(&m)?.0)
}

/// Bisects `C ∈ [0, N²·‖G‖]` for the smallest verified PSD shift.
fn find_shift<T: Scalar>(g: &Matrix<T>, thr: T, scale: T, n: usize) -> Result<Option<T>> {
    let psd = |s: T| -> Result<bool> { Ok(shifted_min(g, s)? >= -thr) };
    let hi0 = T::from_usize_lossy(n * n) * scale;
    if !psd(hi0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (T::zero(), hi0);
    for _ in 0..SHIFT_STEPS {
        if hi - lo <= c::<T>(1e-12) * hi0 {
            break;
        }
        let mid = (lo + hi) * c(0.5);
        if psd(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Builds the Gram matrix and classifies it.
pub fn classify_kernel<T: Scalar>(
    k: &KernelSpec<T>,
    space: &DiscreteSpace<T>,
    tol: T,
) -> Result<DefinitenessReport<T>> {
    classify(&k.gram(space)?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::SphereGenerator;

    #[test]
    fn constant_kernel() {
        let s = DiscreteSpace::<f64>::interval(4).unwrap();
        let r = classify_kernel(&KernelSpec::constant(1.0), &s, 1e-9).unwrap();
        assert!(r.pd && !r.strict_pd && r.cpd && !r.strict_cpd && r.pd_mod_constant);
        assert!(r.witness_violation.is_none());
        assert_eq!(r.shift_constant, Some(0.0));
    }

    #[test]
    fn coordinate_sum_not_pd_mod_constant() {
        let s = DiscreteSpace::<f64>::octahedron().unwrap();
        let r = classify_kernel(&KernelSpec::coordinate_sum(), &s, 1e-9).unwrap();
        assert!(r.cpd);
        assert!(!r.pd_mod_constant);
        assert!(!r.pd);
        assert!(r.witness_violation.is_some());
    }

    #[test]
    fn neg_distance_on_random_nodes() {
        let s = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 8, seed: 11 }).unwrap();
        let r = classify_kernel(&KernelSpec::neg_distance(), &s, 1e-9).unwrap();
        assert!(r.cpd && !r.pd && r.pd_mod_constant);
        let w = r.witness_violation.unwrap();
        assert!(w.weights().iter().all(|&x| x > 0.0));
        assert!((w.weight_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_node() {
        let s = DiscreteSpace::<f64>::interval(1).unwrap();
        let r = classify_kernel(&KernelSpec::constant(-1.0), &s, 1e-9).unwrap();
        assert!(!r.pd && r.cpd && r.strict_cpd);
        assert_eq!(r.min_eig_centered, None);
    }

    #[test]
    fn shift_certifies_psd() {
        let s = DiscreteSpace::<f64>::octahedron().unwrap();
        let g = KernelSpec::neg_distance().gram(&s).unwrap();
        let r = classify(&g, 1e-9).unwrap();
        let c = r.shift_constant.unwrap();
        assert!(shifted_min(g.matrix(), c).unwrap() >= -1e-9 * g.scale());
        assert!(c > 0.0);
    }
}
