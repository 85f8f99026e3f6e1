//! The integral operator of a kernel at quadrature resolution: symmetric
//! eigendecomposition, Mercer expansion and convolution square roots.

mod jacobi;
mod mercer;

pub use jacobi::{symmetric_eigen, symmetric_eigenvalues, SymmetricEigen, MAX_SWEEPS, OFF_TOL};
pub use mercer::{
    convolution_sqrt, hs_apply, mercer_decompose, MercerDecomposition, MercerExport, SqrtKernel,
};
