//! Finite discretizations of compact spaces and atomic measures on them.

mod interchange;
mod measure;
mod polyhedra;
mod quadrature;
mod space;

pub use interchange::{SpaceFile, MeasureFile};
pub use measure::WeightedMeasure;
pub use polyhedra::{cube_points, icosahedron_points, octahedron_points, tetrahedron_points};
pub use quadrature::{gauss_gegenbauer, gauss_legendre, gegenbauer_weight_mass, Quadrature1D};
pub use space::{fibonacci_points, random_sphere_points, DiscreteSpace, DomainTag, SphereGenerator};
