//! Symmetric kernels on discrete spaces and the energies they induce.

mod energy;
mod interchange;

pub use energy::{
    energy, energy_report, equilibrium_measure, is_invariant, linearization_gap, mixed_energy,
    potential, EnergyReport, Gram, Invariance,
};
pub use interchange::KernelFile;

use crate::domains::DiscreteSpace;
use crate::error::{Error, Result};
use crate::linalg::{distance, dot, Matrix};
use crate::scalar::{c, Scalar};
use crate::sphere::GegenbauerSeries;

/// Profile `F` of an inner-product kernel `K(x, y) = F(⟨x, y⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<T> {
    /// `F(t) = Σ a_k t^k`, lowest power first.
    Polynomial(Vec<T>),
    Gegenbauer(GegenbauerSeries<T>),
}

impl<T: Scalar> Profile<T> {
    pub fn eval(&self, t: T) -> T {
        match self {
            Profile::Polynomial(a) => a.iter().rev().fold(T::zero(), |acc, &x| acc * t + x),
            Profile::Gegenbauer(s) => s.eval_raw(crate::sphere::clamp_unit(t)),
        }
    }

    pub fn derivative(&self, t: T) -> T {
        match self {
            Profile::Polynomial(a) => a
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(T::zero(), |acc, (k, &x)| acc * t + T::from_usize_lossy(k) * x),
            Profile::Gegenbauer(s) => s.derivative_raw(crate::sphere::clamp_unit(t)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily<T> {
    Constant(T),
    /// `‖x − y‖`.
    EuclideanDistance,
    /// `−‖x − y‖`.
    NegEuclideanDistance,
    /// `‖x − y‖^{−s}` off the diagonal; the diagonal is set to zero.
    Riesz { s: T },
    InnerProduct(Profile<T>),
    /// `x₁ + y₁`.
    CoordinateSum,
    /// Explicit Gram matrix, valid only on the space with the given hash.
    GramTable { matrix: Matrix<T>, space_hash: String },
}

/// A kernel family plus an additive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<T> {
    pub family: KernelFamily<T>,
    pub shift: T,
}

impl<T: Scalar> KernelSpec<T> {
    pub fn new(family: KernelFamily<T>) -> Self {
        Self {
            family,
            shift: T::zero(),
        }
    }

    pub fn with_shift(mut self, shift: T) -> Self {
        self.shift = shift;
        self
    }

    pub fn constant(v: T) -> Self {
        Self::new(KernelFamily::Constant(v))
    }

    pub fn distance() -> Self {
        Self::new(KernelFamily::EuclideanDistance)
    }

    pub fn neg_distance() -> Self {
        Self::new(KernelFamily::NegEuclideanDistance)
    }

    pub fn riesz(s: T) -> Result<Self> {
        if !(s > T::zero()) {
            return Err(Error::InvalidArgument("Riesz exponent must be positive".into()));
        }
        Ok(Self::new(KernelFamily::Riesz { s }))
    }

    pub fn polynomial(coeffs: Vec<T>) -> Self {
        Self::new(KernelFamily::InnerProduct(Profile::Polynomial(coeffs)))
    }

    pub fn gegenbauer(series: GegenbauerSeries<T>) -> Self {
        Self::new(KernelFamily::InnerProduct(Profile::Gegenbauer(series)))
    }

    pub fn coordinate_sum() -> Self {
        Self::new(KernelFamily::CoordinateSum)
    }

    /// Tabulated kernel bound to `space`. The matrix must be symmetric to 1e-12
    /// relative to its largest entry.
    pub fn gram_table(space: &DiscreteSpace<T>, matrix: Matrix<T>) -> Result<Self> {
        let n = space.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                got: matrix.rows() * matrix.cols(),
            });
        }
        if let Some(k) = matrix.as_slice().iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        check_symmetric(&matrix)?;
        Ok(Self::new(KernelFamily::GramTable {
            matrix,
            space_hash: space.hash().to_owned(),
        }))
    }

    pub fn name(&self) -> &'static str {
        match self.family {
            KernelFamily::Constant(_) => "constant",
            KernelFamily::EuclideanDistance => "euclidean_distance",
            KernelFamily::NegEuclideanDistance => "neg_euclidean_distance",
            KernelFamily::Riesz { .. } => "riesz",
            KernelFamily::InnerProduct(_) => "inner_product",
            KernelFamily::CoordinateSum => "coordinate_sum",
            KernelFamily::GramTable { .. } => "gram_table",
        }
    }

    /// `K(x, y)` for analytic families.
    pub fn evaluate(&self, x: &[T], y: &[T]) -> Result<T> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        let v = match &self.family {
            KernelFamily::Constant(v) => *v,
            KernelFamily::EuclideanDistance => distance(x, y),
            KernelFamily::NegEuclideanDistance => -distance(x, y),
            KernelFamily::Riesz { s } => {
                let r = distance(x, y);
                if r <= c(T::DUPLICATE_TOL) {
                    return Err(Error::CoincidentNodes(0, 0));
                }
                r.powf(-*s)
            }
            KernelFamily::InnerProduct(p) => p.eval(dot(x, y)),
            KernelFamily::CoordinateSum => x[0] + y[0],
            KernelFamily::GramTable { .. } => return Err(Error::OffNodeEvaluation),
        };
        Ok(v + self.shift)
    }

    /// Gram matrix on the nodes of `space`.
    pub fn gram(&self, space: &DiscreteSpace<T>) -> Result<Gram<T>> {
        let n = space.len();
        let matrix = match &self.family {
            KernelFamily::GramTable { matrix, space_hash } => {
                if space_hash != space.hash() {
                    return Err(Error::SpaceMismatch);
                }
                matrix.map(|x| x + self.shift)
            }
            KernelFamily::Riesz { s } => {
                let mut g = Matrix::zeros(n, n);
                for i in 0..n {
                    g[(i, i)] = self.shift;
                    for j in (i + 1)..n {
                        let r = space.distance(i, j);
                        if r <= c(T::DUPLICATE_TOL) {
                            return Err(Error::CoincidentNodes(i, j));
                        }
                        let v = r.powf(-*s) + self.shift;
                        g[(i, j)] = v;
                        g[(j, i)] = v;
                    }
                }
                g
            }
            _ => {
                let mut g = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in i..n {
                        let v = self.evaluate(space.point(i), space.point(j))?;
                        g[(i, j)] = v;
                        g[(j, i)] = v;
                    }
                }
                g
            }
        };
        Ok(Gram::new(matrix, space.clone()))
    }
}

pub(crate) fn check_symmetric<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    let (gap, i, j) = m.asymmetry();
    let tol = c::<T>(1e-12) * m.max_abs().max(T::one());
    if gap > tol {
        return Err(Error::AsymmetricGram {
            i,
            j,
            gap: gap.as_f64(),
        });
    }
    Ok(())
}
