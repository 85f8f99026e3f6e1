use serde::{Deserialize, Serialize};

use crate::domains::{DiscreteSpace, WeightedMeasure};
use crate::error::{Error, Result};
use crate::kernels::Gram;
use crate::linalg::{dot, Matrix};
use crate::scalar::Scalar;

use super::jacobi::symmetric_eigen;

/// Eigen-expansion of `T_{K,μ} ψ(x) = Σ_j w_j K(x, x_j) ψ(x_j)` on `supp(μ)`.
///
/// `phi[j][a]` is the j-th eigenfunction at the support node `support[a]`;
/// the eigenfunctions are orthonormal in `L²(μ)`.
#[derive(Debug, Clone)]
pub struct MercerDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub phi: Vec<Vec<T>>,
    pub support: Vec<usize>,
    pub weights: Vec<T>,
    pub rank: usize,
    /// `max_j ‖B v_j − λ_j v_j‖` for `B = D^{1/2} G D^{1/2}`.
    pub residual: T,
    /// `max |B|`, the scale the rank and residual refer to.
    pub scale: T,
    pub space: DiscreteSpace<T>,
}

/// JSON export of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MercerExport {
    pub eigenvalues: Vec<f64>,
    /// Row-major, one row per eigenfunction.
    pub phi: Vec<f64>,
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
    pub rank: usize,
    pub residual: f64,
}

pub fn mercer_decompose<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    tol: T,
) -> Result<MercerDecomposition<T>> {
    mu.require_same_space(gram.space())?;
    if let Some(i) = mu.weights().iter().position(|&w| w < T::zero()) {
        return Err(Error::NonPositiveWeight {
            index: i,
            weight: mu.weight(i).as_f64(),
        });
    }
    mu.require_mass_one()?;
    let support = mu.support();
    let weights: Vec<T> = support.iter().map(|&i| mu.weight(i)).collect();
    let roots: Vec<T> = weights.iter().map(|w| w.sqrt()).collect();
    let g = gram.matrix().submatrix(&support);
    let b = Matrix::from_fn(support.len(), support.len(), |a, c| roots[a] * g[(a, c)] * roots[c]);
    let eig = symmetric_eigen(&b)?;
    let residual = eig.residual(&b);
    let scale = b.max_abs();
    let lam_max = eig.values.iter().fold(T::zero(), |m, l| m.max(l.abs()));
    let cut = tol * lam_max;
    let rank = eig.values.iter().filter(|l| l.abs() > cut).count();
    let phi = eig
        .vectors
        .iter()
        .map(|v| v.iter().zip(&roots).map(|(&x, &r)| x / r).collect())
        .collect();
    Ok(MercerDecomposition {
        eigenvalues: eig.values,
        phi,
        support,
        weights,
        rank,
        residual,
        scale,
        space: gram.space().clone(),
    })
}

impl<T: Scalar> MercerDecomposition<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `⟨f, g⟩_{L²(μ)}` for functions sampled on the support.
    pub fn inner(&self, f: &[T], g: &[T]) -> T {
        f.iter()
            .zip(g)
            .zip(&self.weights)
            .map(|((&a, &b), &w)| w * a * b)
            .sum()
    }

    /// `Σ_{j<r} λ_j φ_j(x) φ_j(y)` on the support.
    pub fn reconstruct(&self, r: usize) -> Matrix<T> {
        let m = self.support.len();
        let mut out = Matrix::zeros(m, m);
        for (lam, f) in self.eigenvalues.iter().zip(&self.phi).take(r) {
            for a in 0..m {
                let la = *lam * f[a];
                for b in 0..m {
                    out[(a, b)] += la * f[b];
                }
            }
        }
        out
    }

    /// `max |Σ λ_j φ_j φ_jᵀ − G|` over support pairs, all terms kept.
    pub fn reconstruction_error(&self, gram: &Gram<T>) -> T {
        let r = self.reconstruct(self.len());
        let g = gram.matrix().submatrix(&self.support);
        r.zip_with(&g, |a, b| (a - b).abs())
            .expect("same shape")
            .max_abs()
    }

    /// `Σ λ_j − Σ w_i K(x_i, x_i)`.
    pub fn trace_gap(&self, gram: &Gram<T>) -> T {
        let lhs: T = self.eigenvalues.iter().copied().sum();
        let rhs: T = self
            .support
            .iter()
            .zip(&self.weights)
            .map(|(&i, &w)| w * gram.matrix()[(i, i)])
            .sum();
        lhs - rhs
    }

    /// `max_{j,k} |⟨φ_j, φ_k⟩_μ − δ_jk|`.
    pub fn orthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for j in 0..self.len() {
            for k in j..self.len() {
                let e = if j == k { T::one() } else { T::zero() };
                worst = worst.max((self.inner(&self.phi[j], &self.phi[k]) - e).abs());
            }
        }
        worst
    }

    /// `max_{r, x} (Σ_{j<r} λ_j φ_j(x)² − K(x, x))`; at most `tol` for PSD kernels.
    pub fn diagonal_excess(&self, gram: &Gram<T>) -> T {
        let mut worst = T::neg_infinity();
        for (a, &i) in self.support.iter().enumerate() {
            let mut partial = T::zero();
            for (lam, f) in self.eigenvalues.iter().zip(&self.phi) {
                partial += *lam * f[a] * f[a];
                worst = worst.max(partial - gram.matrix()[(i, i)]);
            }
        }
        worst
    }

    /// `T ψ` through the expansion `Σ λ_j ⟨ψ, φ_j⟩ φ_j`; `psi` lives on the support.
    pub fn apply(&self, psi: &[T]) -> Result<Vec<T>> {
        if psi.len() != self.support.len() {
            return Err(Error::LengthMismatch {
                expected: self.support.len(),
                got: psi.len(),
            });
        }
        let mut out = vec![T::zero(); psi.len()];
        for (lam, f) in self.eigenvalues.iter().zip(&self.phi) {
            let coef = *lam * self.inner(psi, f);
            for (o, &x) in out.iter_mut().zip(f) {
                *o += coef * x;
            }
        }
        Ok(out)
    }

    /// Index of the eigenfunction closest to a constant, with its deviation
    /// `min_c max |φ − c|` measured after L²(μ) normalization.
    pub fn constant_eigenfunction(&self) -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for (j, f) in self.phi.iter().enumerate() {
            let lo = f.iter().copied().fold(T::infinity(), T::min);
            let hi = f.iter().copied().fold(T::neg_infinity(), T::max);
            let dev = (hi - lo) * crate::scalar::c(0.5);
            if best.is_none_or(|(_, d)| dev < d) {
                best = Some((j, dev));
            }
        }
        best
    }

    pub fn export(&self) -> MercerExport {
        MercerExport {
            eigenvalues: self.eigenvalues.iter().map(|x| x.as_f64()).collect(),
            phi: self.phi.iter().flatten().map(|x| x.as_f64()).collect(),
            support: self.support.clone(),
            weights: self.weights.iter().map(|x| x.as_f64()).collect(),
            rank: self.rank,
            residual: self.residual.as_f64(),
        }
    }
}

/// `(T ψ)(x_i) = Σ_j w_j K(x_i, x_j) ψ(x_j)` at every node of the space.
pub fn hs_apply<T: Scalar>(gram: &Gram<T>, mu: &WeightedMeasure<T>, psi: &[T]) -> Result<Vec<T>> {
    mu.require_same_space(gram.space())?;
    if psi.len() != gram.len() {
        return Err(Error::LengthMismatch {
            expected: gram.len(),
            got: psi.len(),
        });
    }
    let wpsi: Vec<T> = mu.weights().iter().zip(psi).map(|(&w, &p)| w * p).collect();
    gram.matrix().matvec(&wpsi)
}

/// Convolution square root `k` with `Σ_z w_z k(x, z) k(z, y) = K(x, y)` on `supp(μ)`.
#[derive(Debug, Clone)]
pub struct SqrtKernel<T> {
    pub table: Matrix<T>,
    pub sign_choice: Vec<i8>,
    pub support: Vec<usize>,
    pub weights: Vec<T>,
    pub space: DiscreteSpace<T>,
}

/// `k = Σ_j s_j √λ_j φ_j φ_jᵀ`. Eigenvalues with `|λ| ≤ tol·λ_max` count as
/// zero; anything more negative is an error. `None` means all signs `+`.
pub fn convolution_sqrt<T: Scalar>(
    decomp: &MercerDecomposition<T>,
    sign_choice: Option<&[i8]>,
    tol: T,
) -> Result<SqrtKernel<T>> {
    let n = decomp.len();
    let signs: Vec<i8> = match sign_choice {
        Some(s) if s.len() != n => {
            return Err(Error::LengthMismatch {
                expected: n,
                got: s.len(),
            })
        }
        Some(s) => s.iter().map(|&x| if x < 0 { -1 } else { 1 }).collect(),
        None => vec![1; n],
    };
    let lam_max = decomp.eigenvalues.iter().fold(T::zero(), |m, l| m.max(l.abs()));
    let floor = -tol * lam_max;
    let mut table = Matrix::zeros(n, n);
    for ((&lam, f), &s) in decomp.eigenvalues.iter().zip(&decomp.phi).zip(&signs) {
        if lam < floor {
            return Err(Error::NotPositiveDefinite {
                eigenvalue: lam.as_f64(),
            });
        }
        if lam <= -floor {
            continue;
        }
        let root = if s < 0 { -lam.sqrt() } else { lam.sqrt() };
        for a in 0..n {
            let ra = root * f[a];
            for b in 0..n {
                table[(a, b)] += ra * f[b];
            }
        }
    }
    Ok(SqrtKernel {
        table,
        sign_choice: signs,
        support: decomp.support.clone(),
        weights: decomp.weights.clone(),
        space: decomp.space.clone(),
    })
}

impl<T: Scalar> SqrtKernel<T> {
    /// `(k∘k)(x, y) = Σ_z w_z k(x, z) k(z, y)` on the support.
    pub fn compose(&self) -> Matrix<T> {
        let n = self.support.len();
        Matrix::from_fn(n, n, |a, b| {
            (0..n)
                .map(|z| self.weights[z] * self.table[(a, z)] * self.table[(z, b)])
                .sum()
        })
    }

    /// `max |k∘k − G|` over support pairs.
    pub fn composition_error(&self, gram: &Gram<T>) -> T {
        let g = gram.matrix().submatrix(&self.support);
        self.compose()
            .zip_with(&g, |a, b| (a - b).abs())
            .expect("same shape")
            .max_abs()
    }

    /// `z ↦ Σ_x σ(x) k(x, z)` on the support, for weights `sigma` on the full space.
    pub fn potential(&self, sigma: &[T]) -> Vec<T> {
        let n = self.support.len();
        (0..n)
            .map(|z| {
                self.support
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| sigma[i] * self.table[(a, z)])
                    .sum()
            })
            .collect()
    }

    /// `z ↦ Σ_a d_a k(a, z)` for weights `d` indexed like the support.
    pub fn potential_local(&self, d: &[T]) -> Vec<T> {
        let n = self.support.len();
        (0..n)
            .map(|z| (0..n).map(|a| d[a] * self.table[(a, z)]).sum())
            .collect()
    }

    pub fn weighted_square_norm(&self, f: &[T]) -> T {
        let sq: Vec<T> = f.iter().map(|&x| x * x).collect();
        dot(&sq, &self.weights)
    }
}
