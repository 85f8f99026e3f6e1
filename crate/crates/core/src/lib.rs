//! Energies, kernel definiteness, Mercer expansions and Stolarsky-type
//! discrepancy identities for kernels on finite discretizations of compact
//! spaces.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the precision.

pub mod definiteness;
pub mod domains;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod optimize;
pub mod scalar;
pub mod spectral;
pub mod stolarsky;
pub mod sphere;

pub use definiteness::{ConsistencyReport, DefinitenessReport, HarnessMode};
pub use domains::{DiscreteSpace, DomainTag, Quadrature1D, SphereGenerator, WeightedMeasure};
pub use error::{Error, Result};
pub use kernels::{Gram, KernelFamily, KernelSpec, Profile};
pub use linalg::Matrix;
pub use optimize::OptimizationTrace;
pub use scalar::Scalar;
pub use spectral::{MercerDecomposition, SqrtKernel};
pub use sphere::GegenbauerSeries;
pub use stolarsky::DiscrepancyReport;

pub type DiscreteSpace64 = DiscreteSpace<f64>;
pub type WeightedMeasure64 = WeightedMeasure<f64>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type Gram64 = Gram<f64>;
pub type Matrix64 = Matrix<f64>;
pub type MercerDecomposition64 = MercerDecomposition<f64>;
pub type GegenbauerSeries64 = GegenbauerSeries<f64>;
pub type SqrtKernel64 = SqrtKernel<f64>;
pub type DefinitenessReport64 = DefinitenessReport<f64>;
pub type DiscrepancyReport64 = DiscrepancyReport<f64>;
pub type OptimizationTrace64 = OptimizationTrace<f64>;

pub type DiscreteSpace32 = DiscreteSpace<f32>;
pub type WeightedMeasure32 = WeightedMeasure<f32>;
pub type KernelSpec32 = KernelSpec<f32>;
pub type Gram32 = Gram<f32>;
pub type Matrix32 = Matrix<f32>;
pub type MercerDecomposition32 = MercerDecomposition<f32>;
pub type GegenbauerSeries32 = GegenbauerSeries<f32>;
pub type SqrtKernel32 = SqrtKernel<f32>;
pub type DefinitenessReport32 = DefinitenessReport<f32>;
pub type DiscrepancyReport32 = DiscrepancyReport<f32>;
pub type OptimizationTrace32 = OptimizationTrace<f32>;
