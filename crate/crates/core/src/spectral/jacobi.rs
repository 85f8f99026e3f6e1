//! Cyclic Jacobi rotations for dense symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{c, Scalar};

pub const MAX_SWEEPS: usize = 64;
pub const OFF_TOL: f64 = 1e-12;

/// Eigenpairs of a symmetric matrix.
///
/// `values` are sorted descending; `vectors[j]` is the unit eigenvector for
/// `values[j]`, sign-fixed so that its largest-magnitude entry is positive.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn min_value(&self) -> Option<T> {
        self.values.last().copied()
    }

    pub fn max_value(&self) -> Option<T> {
        self.values.first().copied()
    }

    /// Index of the smallest eigenvalue (the last one after sorting).
    pub fn argmin(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    /// `max_j ||A v_j - λ_j v_j||`.
    pub fn residual(&self, a: &Matrix<T>) -> T {
        let mut worst = T::zero();
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            let av = a.matvec(v).expect("square matrix");
            let r = av
                .iter()
                .zip(v)
                .map(|(&x, &y)| (x - *lam * y) * (x - *lam * y))
                .sum::<T>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }
}

fn off_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)] * a[(i, j)];
        }
    }
    (s + s).sqrt()
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Only the upper triangle is trusted; the input is symmetrized first.
pub fn symmetric_eigen<T: Scalar>(input: &Matrix<T>) -> Result<SymmetricEigen<T>> {
    if !input.is_square() {
        return Err(Error::InvalidArgument("eigen needs a square matrix".into()));
    }
    let n = input.rows();
    let mut a = Matrix::from_fn(n, n, |i, j| {
        if i <= j {
            input[(i, j)]
        } else {
            input[(j, i)]
        }
    });
    if let Some(k) = a.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(k));
    }
    let mut v = Matrix::<T>::identity(n);
    // single precision cannot reach the double-precision floor
    let floor = c::<T>(OFF_TOL.max(T::epsilon().as_f64() * n.max(1) as f64));
    let target = floor * a.frobenius();
    let mut sweeps = 0;
    let mut off = off_norm(&a);

    while off > target && off > T::min_positive_value() {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off.as_f64(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (apq + apq);
                let t = {
                    let s = if theta >= T::zero() { T::one() } else { -T::one() };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let cs = (t * t + T::one()).sqrt().recip();
                let sn = t * cs;
                let tau = sn / (T::one() + cs);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let np = arp - sn * (arq + tau * arp);
                    let nq = arq + sn * (arp - tau * arq);
                    a[(r, p)] = np;
                    a[(p, r)] = np;
                    a[(r, q)] = nq;
                    a[(q, r)] = nq;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - sn * (vrq + tau * vrp);
                    v[(r, q)] = vrq + sn * (vrp - tau * vrq);
                }
            }
        }
        off = off_norm(&a);
    }

    let scale = (0..n).fold(T::zero(), |m, i| m.max(a[(i, i)].abs()));
    // ties are values equal to within the convergence floor
    let tie = floor * scale.max(T::min_positive_value());
    let mut pairs: Vec<(T, Vec<T>, usize)> = (0..n)
        .map(|j| {
            let mut col = v.column(j);
            let dom = dominant_index(&col);
            if col[dom] < T::zero() {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            (a[(j, j)], col, dom)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    // within a cluster of numerically equal eigenvalues order by dominant node
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end - 1].0 - pairs[end].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by_key(|p| p.2);
        start = end;
    }

    let (values, vectors) = pairs.into_iter().map(|(l, v, _)| (l, v)).unzip();
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Eigenvalues only; same cost, less allocation downstream.
pub fn symmetric_eigenvalues<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    symmetric_eigen(a).map(|e| e.values)
}

pub(crate) fn dominant_index<T: Scalar>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}
