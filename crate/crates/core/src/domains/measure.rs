use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::scalar::{c, Scalar};

use super::space::DiscreteSpace;

/// Signed atomic measure: one real weight per node of a space.
#[derive(Clone, PartialEq)]
pub struct WeightedMeasure<T> {
    space: DiscreteSpace<T>,
    weights: Vec<T>,
    mass: T,
}

impl<T: fmt::Debug> fmt::Debug for WeightedMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedMeasure")
            .field("weights", &self.weights)
            .field("mass", &self.mass)
            .finish()
    }
}

impl<T: Scalar> WeightedMeasure<T> {
    pub fn new(space: &DiscreteSpace<T>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: weights.len(),
            });
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mass = weights.iter().copied().sum();
        Ok(Self {
            space: space.clone(),
            weights,
            mass,
        })
    }

    pub fn zero(space: &DiscreteSpace<T>) -> Self {
        Self {
            space: space.clone(),
            weights: vec![T::zero(); space.len()],
            mass: T::zero(),
        }
    }

    pub fn uniform(space: &DiscreteSpace<T>) -> Self {
        let w = T::from_usize_lossy(space.len()).recip();
        Self::new(space, vec![w; space.len()]).expect("finite weights")
    }

    /// Unit point mass at node `i`.
    pub fn dirac(space: &DiscreteSpace<T>, i: usize) -> Result<Self> {
        Self::from_atoms(space, &[(i, T::one())])
    }

    /// Builds a measure from `(node, weight)` pairs; repeated nodes accumulate.
    pub fn from_atoms(space: &DiscreteSpace<T>, atoms: &[(usize, T)]) -> Result<Self> {
        let mut w = vec![T::zero(); space.len()];
        for &(i, a) in atoms {
            if i >= space.len() {
                return Err(Error::InvalidArgument(format!("node {i} out of range")));
            }
            w[i] += a;
        }
        Self::new(space, w)
    }

    #[inline]
    pub fn space(&self) -> &DiscreteSpace<T> {
        &self.space
    }

    #[inline]
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, i: usize) -> T {
        self.weights[i]
    }

    #[inline]
    pub fn mass(&self) -> T {
        self.mass
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn mass_tol() -> T {
        c(T::MASS_TOL)
    }

    pub fn is_mass_one(&self) -> bool {
        (self.mass - T::one()).abs() <= Self::mass_tol()
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mass.abs() <= Self::mass_tol()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|&w| w >= T::zero())
    }

    pub fn is_probability(&self) -> bool {
        self.is_nonnegative() && self.is_mass_one()
    }

    /// Node indices carrying nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != T::zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.weights.iter().all(|&w| w != T::zero())
    }

    /// Zeroes the weights off the nodes where `keep` is true.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        let w = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, &x)| if keep(i) { x } else { T::zero() })
            .collect();
        Self::new(&self.space, w).expect("restriction keeps weights finite")
    }

    /// The same weights carried over to a subspace on the given node indices.
    pub fn on_subspace(&self, sub: &DiscreteSpace<T>, idx: &[usize]) -> Result<Self> {
        Self::new(sub, idx.iter().map(|&i| self.weights[i]).collect())
    }

    pub fn scaled(&self, a: T) -> Self {
        Self::new(&self.space, self.weights.iter().map(|&w| a * w).collect())
            .expect("finite scaling")
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Self::new(
            &self.space,
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(T::one(), other, -T::one())
    }

    /// `(1 − t)·self + t·other`.
    pub fn lerp(&self, other: &Self, t: T) -> Result<Self> {
        self.combine(T::one() - t, other, t)
    }

    /// Rescales to unit total mass.
    pub fn normalized(&self) -> Result<Self> {
        if self.mass.abs() <= Self::mass_tol() {
            return Err(Error::MassMismatch {
                expected: 1.0,
                found: self.mass.as_f64(),
            });
        }
        Ok(self.scaled(self.mass.recip()))
    }

    /// Positive and negative parts, `self = plus − minus`.
    pub fn jordan(&self) -> (Self, Self) {
        let plus = self.weights.iter().map(|&w| w.max(T::zero())).collect();
        let minus = self.weights.iter().map(|&w| (-w).max(T::zero())).collect();
        (
            Self::new(&self.space, plus).expect("finite"),
            Self::new(&self.space, minus).expect("finite"),
        )
    }

    /// Euclidean norm of the weight vector.
    pub fn weight_norm(&self) -> T {
        norm(&self.weights)
    }

    pub(crate) fn require_mass_one(&self) -> Result<()> {
        if self.is_mass_one() {
            Ok(())
        } else {
            Err(Error::MassMismatch {
                expected: 1.0,
                found: self.mass.as_f64(),
            })
        }
    }

    pub(crate) fn require_same_space(&self, space: &DiscreteSpace<T>) -> Result<()> {
        if &self.space == space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}
