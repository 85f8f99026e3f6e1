use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{c, Scalar};
use crate::spectral::symmetric_eigen;

/// Gauss rule for `∫ f(t) (1 − t²)^(λ − 1/2) dt` over [-1, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Quadrature1D<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    pub lambda: T,
}

impl<T: Scalar> Quadrature1D<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Affine image on `[a, b]` for the Legendre case (λ = 1/2).
    pub fn mapped(&self, a: T, b: T) -> Vec<(T, T)> {
        let half = (b - a) * c(0.5);
        let mid = (a + b) * c(0.5);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| (mid + half * t, w * half))
            .collect()
    }
}

/// `∫_{-1}^{1} (1 − t²)^(λ − 1/2) dt = √π Γ(λ + 1/2) / Γ(λ + 1)`.
pub fn gegenbauer_weight_mass(lambda: f64) -> f64 {
    (0.5 * std::f64::consts::PI.ln() + libm::lgamma(lambda + 0.5) - libm::lgamma(lambda + 1.0))
        .exp()
}

/// Gauss–Gegenbauer rule with `m` nodes (Golub–Welsch).
pub fn gauss_gegenbauer<T: Scalar>(m: usize, lambda: T) -> Result<Quadrature1D<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    if !(lambda > c(-0.5)) {
        return Err(Error::InvalidArgument("Gegenbauer parameter must exceed -1/2".into()));
    }
    let lam = lambda.as_f64();
    let mut jac = Matrix::<T>::zeros(m, m);
    for k in 1..m {
        let kf = k as f64;
        let b2 = if k == 1 {
            1.0 / (2.0 * (1.0 + lam))
        } else {
            kf * (kf + 2.0 * lam - 1.0) / (4.0 * (kf + lam) * (kf + lam - 1.0))
        };
        let b = c::<T>(b2.sqrt());
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = symmetric_eigen(&jac)?;
    let mu0 = gegenbauer_weight_mass(lam);
    let mut pairs: Vec<(T, T)> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(&x, v)| (x, c::<T>(mu0) * v[0] * v[0]))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    // the weight is even, so enforce exact mirror symmetry
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = (pairs[j].0 - pairs[i].0) * c(0.5);
        let w = (pairs[i].1 + pairs[j].1) * c(0.5);
        pairs[i] = (-x, w);
        pairs[j] = (x, w);
    }
    if m % 2 == 1 {
        pairs[m / 2].0 = T::zero();
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(Quadrature1D {
        nodes,
        weights,
        lambda,
    })
}

/// Gauss–Legendre rule with `m` nodes.
pub fn gauss_legendre<T: Scalar>(m: usize) -> Result<Quadrature1D<T>> {
    gauss_gegenbauer(m, c(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_node_legendre() {
        let q = gauss_gegenbauer::<f64>(1, 0.5).unwrap();
        assert_eq!(q.nodes, vec![0.0]);
        assert!((q.weights[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fourth_moment() {
        let q = gauss_gegenbauer::<f64>(8, 0.5).unwrap();
        let m4 = q.integrate(|t| t.powi(4));
        assert!((m4 - 0.4).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_nodes_at_lambda_zero() {
        let m = 5;
        let q = gauss_gegenbauer::<f64>(m, 0.0).unwrap();
        for (k, &x) in q.nodes.iter().enumerate() {
            let expect = -((2 * k + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos();
            assert!((x - expect).abs() < 1e-13);
            assert!((q.weights[k] - std::f64::consts::PI / m as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_gegenbauer::<f64>(0, 0.5).is_err());
        assert!(gauss_gegenbauer::<f64>(3, -0.5).is_err());
    }
}
