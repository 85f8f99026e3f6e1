//! Vertex sets of a few regular polytopes, scaled to the unit sphere S².

use crate::error::Result;
use crate::scalar::{c, Scalar};

use super::space::{DiscreteSpace, SphereGenerator};

fn unit<T: Scalar>(v: [f64; 3]) -> Vec<T> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.iter().map(|&x| c(x / n)).collect()
}

pub fn octahedron_points<T: Scalar>() -> Vec<Vec<T>> {
    let mut pts = Vec::with_capacity(6);
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[k] = s;
            pts.push(unit(v));
        }
    }
    pts
}

pub fn tetrahedron_points<T: Scalar>() -> Vec<Vec<T>> {
    [
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]
    .into_iter()
    .map(unit)
    .collect()
}

pub fn cube_points<T: Scalar>() -> Vec<Vec<T>> {
    let mut pts = Vec::with_capacity(8);
    for i in 0..8 {
        let s = |b: usize| if (i >> b) & 1 == 1 { -1.0 } else { 1.0 };
        pts.push(unit([s(0), s(1), s(2)]));
    }
    pts
}

pub fn icosahedron_points<T: Scalar>() -> Vec<Vec<T>> {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::with_capacity(12);
    for a in [1.0, -1.0] {
        for b in [g, -g] {
            pts.push(unit([0.0, a, b]));
            pts.push(unit([a, b, 0.0]));
            pts.push(unit([b, 0.0, a]));
        }
    }
    pts
}

impl<T: Scalar> DiscreteSpace<T> {
    /// The six points ±e1, ±e2, ±e3, in that order.
    pub fn octahedron() -> Result<Self> {
        Self::sphere(3, SphereGenerator::Explicit(octahedron_points()))
    }

    pub fn tetrahedron() -> Result<Self> {
        Self::sphere(3, SphereGenerator::Explicit(tetrahedron_points()))
    }

    pub fn cube() -> Result<Self> {
        Self::sphere(3, SphereGenerator::Explicit(cube_points()))
    }

    pub fn icosahedron() -> Result<Self> {
        Self::sphere(3, SphereGenerator::Explicit(icosahedron_points()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_distances(s: &DiscreteSpace<f64>) -> Vec<f64> {
        let mut d = Vec::new();
        for i in 0..s.len() {
            for j in (i + 1)..s.len() {
                d.push(s.distance(i, j));
            }
        }
        d
    }

    #[test]
    fn tetrahedron_is_regular() {
        let s = DiscreteSpace::<f64>::tetrahedron().unwrap();
        let expect = (8.0f64 / 3.0).sqrt();
        for d in pair_distances(&s) {
            assert!((d - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn icosahedron_has_five_nearest_neighbours() {
        let s = DiscreteSpace::<f64>::icosahedron().unwrap();
        assert_eq!(s.len(), 12);
        let dmin = s.min_distance().unwrap();
        for i in 0..12 {
            let k = (0..12)
                .filter(|&j| j != i && (s.distance(i, j) - dmin).abs() < 1e-12)
                .count();
            assert_eq!(k, 5);
        }
    }
}
