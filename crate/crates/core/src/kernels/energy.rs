use serde::{Deserialize, Serialize};

use crate::domains::{DiscreteSpace, WeightedMeasure};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Scalar;

use super::KernelSpec;

/// A kernel's Gram matrix on one space. All energy evaluations go through
/// this; build it once and reuse it when many measures share a space.
#[derive(Debug, Clone)]
pub struct Gram<T> {
    matrix: Matrix<T>,
    space: DiscreteSpace<T>,
}

impl<T: Scalar> Gram<T> {
    pub fn new(matrix: Matrix<T>, space: DiscreteSpace<T>) -> Self {
        Self { matrix, space }
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn space(&self) -> &DiscreteSpace<T> {
        &self.space
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `max |G_ij|`, the reference scale for relative tolerances.
    pub fn scale(&self) -> T {
        self.matrix.max_abs()
    }

    /// `rel · scale`, never exactly zero.
    pub fn abs_tol(&self, rel: T) -> T {
        rel * self.scale().max(T::min_positive_value())
    }

    /// `G + C·J`.
    pub fn shifted(&self, shift: T) -> Self {
        Self {
            matrix: self.matrix.map(|x| x + shift),
            space: self.space.clone(),
        }
    }

    fn check(&self, mu: &WeightedMeasure<T>) -> Result<()> {
        mu.require_same_space(&self.space)
    }

    /// `I(μ) = Σ_ij w_i w_j G_ij`.
    pub fn energy(&self, mu: &WeightedMeasure<T>) -> Result<T> {
        self.check(mu)?;
        self.matrix.bilinear(mu.weights(), mu.weights())
    }

    /// `I(μ, ν) = Σ_ij μ_i ν_j G_ij`.
    pub fn mixed(&self, mu: &WeightedMeasure<T>, nu: &WeightedMeasure<T>) -> Result<T> {
        self.check(mu)?;
        self.check(nu)?;
        self.matrix.bilinear(mu.weights(), nu.weights())
    }

    /// `U(x_i) = Σ_j w_j G_ij` at every node.
    pub fn potential(&self, mu: &WeightedMeasure<T>) -> Result<Vec<T>> {
        self.check(mu)?;
        self.matrix.matvec(mu.weights())
    }

    /// Quadratic form on a raw weight vector.
    pub fn quad(&self, w: &[T]) -> T {
        self.matrix.bilinear(w, w).expect("length checked by caller")
    }

    pub fn report(
        &self,
        mu: &WeightedMeasure<T>,
        nu: Option<&WeightedMeasure<T>>,
    ) -> Result<EnergyReport<T>> {
        let potential = self.potential(mu)?;
        let energy = dot(mu.weights(), &potential);
        let mixed = nu.map(|nu| self.mixed(mu, nu)).transpose()?;
        let potential_min = potential.iter().copied().fold(T::infinity(), T::min);
        let potential_max = potential.iter().copied().fold(T::neg_infinity(), T::max);
        Ok(EnergyReport {
            energy,
            mixed,
            potential,
            potential_min,
            potential_max,
        })
    }

    /// `max_i |U(x_i) − I(μ)|` and whether it is at most `tol` (absolute).
    pub fn invariance(&self, mu: &WeightedMeasure<T>, tol: T) -> Result<Invariance<T>> {
        let u = self.potential(mu)?;
        let energy = dot(mu.weights(), &u);
        let spread = u.iter().fold(T::zero(), |m, &x| m.max((x - energy).abs()));
        Ok(Invariance {
            invariant: spread <= tol,
            spread,
            energy,
        })
    }

    /// `I(ν − μ) − (I(ν) − I(μ))`, which equals `2 (I(μ) − I(μ, ν))`.
    pub fn linearization_gap(&self, mu: &WeightedMeasure<T>, nu: &WeightedMeasure<T>) -> Result<T> {
        mu.require_mass_one()?;
        nu.require_mass_one()?;
        let diff = nu.sub(mu)?;
        Ok(self.energy(&diff)? - (self.energy(nu)? - self.energy(mu)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EnergyReport<T> {
    pub energy: T,
    pub mixed: Option<T>,
    pub potential: Vec<T>,
    pub potential_min: T,
    pub potential_max: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Invariance<T> {
    pub invariant: bool,
    pub spread: T,
    pub energy: T,
}

pub fn energy<T: Scalar>(k: &KernelSpec<T>, mu: &WeightedMeasure<T>) -> Result<T> {
    k.gram(mu.space())?.energy(mu)
}

pub fn mixed_energy<T: Scalar>(
    k: &KernelSpec<T>,
    mu: &WeightedMeasure<T>,
    nu: &WeightedMeasure<T>,
) -> Result<T> {
    if mu.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    k.gram(mu.space())?.mixed(mu, nu)
}

pub fn potential<T: Scalar>(k: &KernelSpec<T>, mu: &WeightedMeasure<T>) -> Result<Vec<T>> {
    k.gram(mu.space())?.potential(mu)
}

pub fn energy_report<T: Scalar>(
    k: &KernelSpec<T>,
    mu: &WeightedMeasure<T>,
    nu: Option<&WeightedMeasure<T>>,
) -> Result<EnergyReport<T>> {
    k.gram(mu.space())?.report(mu, nu)
}

pub fn is_invariant<T: Scalar>(k: &KernelSpec<T>, mu: &WeightedMeasure<T>, tol: T) -> Result<Invariance<T>> {
    k.gram(mu.space())?.invariance(mu, tol)
}

pub fn linearization_gap<T: Scalar>(
    k: &KernelSpec<T>,
    mu: &WeightedMeasure<T>,
    nu: &WeightedMeasure<T>,
) -> Result<T> {
    if mu.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    k.gram(mu.space())?.linearization_gap(mu, nu)
}

/// Probability measure whose potential is constant on its support.
///
/// Solves `G_S w = c·1`, `Σ w = 1` on an active set `S`, dropping the most
/// negative weight until all weights are nonnegative. For conditionally
/// positive definite kernels this is the energy minimizer over probability
/// measures on `S`.
pub fn equilibrium_measure<T: Scalar>(gram: &Gram<T>) -> Result<WeightedMeasure<T>> {
    let n = gram.len();
    let mut active: Vec<usize> = (0..n).collect();
    loop {
        let m = active.len();
        let mut kkt = Matrix::zeros(m + 1, m + 1);
        for (a, &i) in active.iter().enumerate() {
            for (b, &j) in active.iter().enumerate() {
                kkt[(a, b)] = gram.matrix()[(i, j)];
            }
            kkt[(a, m)] = T::one();
            kkt[(m, a)] = T::one();
        }
        let mut rhs = vec![T::zero(); m + 1];
        rhs[m] = T::one();
        let sol = kkt.solve(&rhs)?;
        let worst = (0..m).min_by(|&a, &b| sol[a].partial_cmp(&sol[b]).expect("finite"));
        match worst {
            Some(a) if sol[a] < T::zero() && m > 1 => {
                active.remove(a);
            }
            _ => {
                let mut w = vec![T::zero(); n];
                for (a, &i) in active.iter().enumerate() {
                    w[i] = sol[a];
                }
                return WeightedMeasure::new(gram.space(), w);
            }
        }
    }
}
