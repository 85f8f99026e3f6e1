//! L² discrepancy relative to a measure, the generalized Stolarsky identity,
//! and the spherical-cap discrepancy of point sets.

mod cap;

pub use cap::{
    cap_discrepancy, cap_discrepancy_with_nodes, cap_measure, classical_ratio, set_ratio, CapQuadrature,
    ClassicalRatio, SetRatio,
};

use serde::{Deserialize, Serialize};

use crate::definiteness::classify;
use crate::domains::WeightedMeasure;
use crate::error::{Error, Result};
use crate::kernels::Gram;
use crate::scalar::Scalar;
use crate::spectral::{convolution_sqrt, mercer_decompose, SqrtKernel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DiscrepancyReport<T> {
    pub d2: T,
    /// `I(ν) − I(μ)`.
    pub energy_gap: T,
    /// `d2 − energy_gap`.
    pub identity_residual: T,
    pub cap_d2: Option<T>,
    pub ratio_cd: Option<T>,
    /// Constant added to `K` before taking the square root.
    pub shift_used: T,
    /// Number of nodes the identity was evaluated on.
    pub support_size: usize,
}

/// `Σ_z w_z (Σ_x (ν − μ)(x) k(x, z))²`, the sum over the support of `k`.
pub fn l2_discrepancy<T: Scalar>(
    k: &SqrtKernel<T>,
    mu: &WeightedMeasure<T>,
    nu: &WeightedMeasure<T>,
) -> Result<T> {
    mu.require_same_space(&k.space)?;
    nu.require_same_space(&k.space)?;
    let d: Vec<T> = nu.weights().iter().zip(mu.weights()).map(|(&a, &b)| a - b).collect();
    Ok(k.weighted_square_norm(&k.potential(&d)))
}

/// Convolution square root of `K + C` under `μ`, prepared once so that the
/// identity can be checked for many `ν`.
///
/// When `μ` does not charge every node, the space is cut down to `supp(μ)`;
/// every `ν` must then live on that support.
#[derive(Debug, Clone)]
pub struct StolarskyRoot<T> {
    pub k: SqrtKernel<T>,
    pub shift_used: T,
    gram: Gram<T>,
    mu: WeightedMeasure<T>,
    support: Vec<usize>,
}

impl<T: Scalar> StolarskyRoot<T> {
    pub fn new(gram: &Gram<T>, mu: &WeightedMeasure<T>, tol: T) -> Result<Self> {
        mu.require_same_space(gram.space())?;
        if !mu.is_probability() {
            return Err(Error::Precondition("μ must be a probability measure".into()));
        }
        let support = mu.support();
        let sub = if support.len() == gram.len() {
            gram.space().clone()
        } else {
            gram.space().subspace(&support)?
        };
        let g = Gram::new(gram.matrix().submatrix(&support), sub.clone());
        let m = mu.on_subspace(&sub, &support)?;

        let thr = g.abs_tol(tol);
        let inv = g.invariance(&m, thr)?;
        if !inv.invariant {
            return Err(Error::Precondition(format!(
                "μ is not invariant on its support: potential spread {}",
                inv.spread
            )));
        }
        let report = classify(&g, tol)?;
        let shift = report.shift_constant.ok_or_else(|| {
            Error::Precondition("kernel is not positive definite modulo a constant".into())
        })?;
        // one extra ‖G‖ keeps the shifted spectrum clear of the zero threshold
        let shift_used = shift + g.scale();
        let decomp = mercer_decompose(&g.shifted(shift_used), &m, tol)?;
        let k = convolution_sqrt(&decomp, None, tol)?;
        Ok(Self {
            k,
            shift_used,
            gram: gram.clone(),
            mu: mu.clone(),
            support,
        })
    }

    /// Both sides of `I(ν) − I(μ) = D²(ν)`.
    pub fn report(&self, nu: &WeightedMeasure<T>) -> Result<DiscrepancyReport<T>> {
        nu.require_same_space(self.gram.space())?;
        nu.require_mass_one()?;
        let mut inside = vec![false; self.gram.len()];
        self.support.iter().for_each(|&i| inside[i] = true);
        if let Some(i) = (0..self.gram.len()).find(|&i| !inside[i] && nu.weight(i) != T::zero()) {
            return Err(Error::Precondition(format!(
                "ν charges node {i} outside the support of μ"
            )));
        }
        let energy_gap = self.gram.energy(nu)? - self.gram.energy(&self.mu)?;
        let d: Vec<T> = self
            .support
            .iter()
            .map(|&i| nu.weight(i) - self.mu.weight(i))
            .collect();
        let d2 = self.k.weighted_square_norm(&self.k.potential_local(&d));
        Ok(DiscrepancyReport {
            d2,
            energy_gap,
            identity_residual: d2 - energy_gap,
            cap_d2: None,
            ratio_cd: None,
            shift_used: self.shift_used,
            support_size: self.support.len(),
        })
    }
}

/// Checks both sides of `I(ν) − I(μ) = D²(ν)` with `k` the convolution square
/// root of `K + C` under `μ`.
pub fn generalized_stolarsky<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    nu: &WeightedMeasure<T>,
    tol: T,
) -> Result<DiscrepancyReport<T>> {
    nu.require_same_space(gram.space())?;
    StolarskyRoot::new(gram, mu, tol)?.report(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DiscreteSpace;
    use crate::kernels::KernelSpec;

    #[test]
    fn octahedron_dirac() {
        let s = DiscreteSpace::<f64>::octahedron().unwrap();
        let g = KernelSpec::neg_distance().with_shift(1.5).gram(&s).unwrap();
        let mu = WeightedMeasure::uniform(&s);
        let nu = WeightedMeasure::dirac(&s, 0).unwrap();
        let r = generalized_stolarsky(&g, &mu, &nu, 1e-9).unwrap();
        assert!(r.identity_residual.abs() <= 1e-10 * g.scale());
        let same = generalized_stolarsky(&g, &mu, &mu, 1e-9).unwrap();
        assert!(same.d2.abs() < 1e-14 && same.energy_gap.abs() < 1e-14);
    }

    #[test]
    fn constant_root_sees_nothing() {
        let s = DiscreteSpace::<f64>::interval(5).unwrap();
        let g = KernelSpec::constant(1.0).gram(&s).unwrap();
        let mu = WeightedMeasure::uniform(&s);
        let k = convolution_sqrt(&mercer_decompose(&g, &mu, 1e-9).unwrap(), None, 1e-9).unwrap();
        let nu = WeightedMeasure::new(&s, vec![2.0, -1.0, 0.5, -0.25, -0.25]).unwrap();
        assert!(l2_discrepancy(&k, &mu, &nu).unwrap().abs() < 1e-14);
    }

    #[test]
    fn restricted_support() {
        // distance kernel on {-1, 0, 1}: ½(δ₋₁ + δ₁) has constant potential
        // on its support, and K + C is pd there
        let s = DiscreteSpace::<f64>::interval(3).unwrap();
        let g = KernelSpec::neg_distance().gram(&s).unwrap();
        let mu = WeightedMeasure::new(&s, vec![0.5, 0.0, 0.5]).unwrap();
        let nu = WeightedMeasure::new(&s, vec![0.8, 0.0, 0.2]).unwrap();
        let r = generalized_stolarsky(&g, &mu, &nu, 1e-9).unwrap();
        assert_eq!(r.support_size, 2);
        assert!(r.identity_residual.abs() < 1e-12);
        let off = WeightedMeasure::new(&s, vec![0.5, 0.5, 0.0]).unwrap();
        assert!(matches!(
            generalized_stolarsky(&g, &mu, &off, 1e-9),
            Err(Error::Precondition(_))
        ));
    }
}
