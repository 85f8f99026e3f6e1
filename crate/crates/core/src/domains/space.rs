use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{distance, dot};
use crate::scalar::{c, Scalar};

/// What kind of compact set the nodes discretize.
///
/// `Sphere { dim }` is the unit sphere in `R^dim`, so `dim = 3` is S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainTag {
    Sphere { dim: usize },
    Interval,
    Hamming { n: usize },
    Generic,
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainTag::Sphere { dim } => write!(f, "sphere({dim})"),
            DomainTag::Interval => f.write_str("interval"),
            DomainTag::Hamming { n } => write!(f, "hamming({n})"),
            DomainTag::Generic => f.write_str("generic"),
        }
    }
}

/// Point generator for sphere spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereGenerator<T> {
    /// Golden-angle spiral on S², equally spaced angles on S¹.
    Fibonacci(usize),
    /// Normalized Gaussian vectors from a seeded ChaCha8 stream.
    Random { n: usize, seed: u64 },
    Explicit(Vec<Vec<T>>),
}

#[derive(Debug)]
struct Inner<T> {
    tag: DomainTag,
    dim: usize,
    coords: Vec<T>,
    params: Value,
    hash: String,
}

/// Finite node set standing in for a compact space.
///
/// Cheap to clone; clones share storage. Two spaces are considered the same
/// when their content hashes agree.
#[derive(Clone)]
pub struct DiscreteSpace<T> {
    inner: Arc<Inner<T>>,
}

impl<T> fmt::Debug for DiscreteSpace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteSpace")
            .field("tag", &self.inner.tag)
            .field("len", &(self.inner.coords.len() / self.inner.dim.max(1)))
            .field("dim", &self.inner.dim)
            .finish()
    }
}

impl<T> PartialEq for DiscreteSpace<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.hash == other.inner.hash
    }
}

impl<T: Scalar> DiscreteSpace<T> {
    pub(crate) fn build(
        tag: DomainTag,
        dim: usize,
        points: Vec<Vec<T>>,
        params: Value,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("a space needs at least one node".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("nodes need at least one coordinate".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(i));
            }
            coords.extend_from_slice(p);
        }
        match tag {
            DomainTag::Sphere { .. } => {
                let tol = T::MASS_TOL;
                for (i, p) in points.iter().enumerate() {
                    let norm = dot(p, p).sqrt().as_f64();
                    if (norm - 1.0).abs() > tol {
                        return Err(Error::NotUnitNorm { index: i, norm });
                    }
                }
            }
            DomainTag::Interval => {
                for (i, p) in points.iter().enumerate() {
                    if p[0].abs() > T::one() {
                        return Err(Error::OutsideInterval { index: i });
                    }
                }
            }
            DomainTag::Hamming { .. } | DomainTag::Generic => {}
        }
        check_duplicates(&points)?;
        let hash = content_hash(&tag, dim, &coords);
        Ok(Self {
            inner: Arc::new(Inner {
                tag,
                dim,
                coords,
                params,
                hash,
            }),
        })
    }

    /// Nodes on the unit sphere of `R^dim`.
    pub fn sphere(dim: usize, generator: SphereGenerator<T>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
        }
        let tag = DomainTag::Sphere { dim };
        match generator {
            SphereGenerator::Fibonacci(n) => {
                let pts = fibonacci_points(dim, n)?;
                Self::build(tag, dim, pts, json!({"d": dim, "generator": "fibonacci", "n": n}))
            }
            SphereGenerator::Random { n, seed } => {
                if n == 0 {
                    return Err(Error::InvalidArgument("N must be at least 1".into()));
                }
                let pts = random_sphere_points(dim, n, seed);
                Self::build(
                    tag,
                    dim,
                    pts,
                    json!({"d": dim, "generator": "random", "n": n, "seed": seed}),
                )
            }
            SphereGenerator::Explicit(pts) => {
                Self::build(tag, dim, pts, json!({"d": dim, "generator": "explicit"}))
            }
        }
    }

    /// `n` equispaced nodes on [-1, 1] including both endpoints.
    pub fn interval(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        let pts = if n == 1 {
            vec![vec![T::zero()]]
        } else {
            let step = c::<T>(2.0) / T::from_usize_lossy(n - 1);
            (0..n)
                .map(|i| {
                    let x = if i == n - 1 {
                        T::one()
                    } else {
                        -T::one() + step * T::from_usize_lossy(i)
                    };
                    vec![x]
                })
                .collect()
        };
        Self::build(DomainTag::Interval, 1, pts, json!({"n": n}))
    }

    /// Arbitrary nodes in [-1, 1].
    pub fn interval_points(points: &[T]) -> Result<Self> {
        let pts = points.iter().map(|&x| vec![x]).collect();
        Self::build(DomainTag::Interval, 1, pts, json!({"generator": "explicit"}))
    }

    /// The cube {±1}^n; bit `k` of the node index set means coordinate `k` is −1.
    pub fn hamming(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::InvalidArgument("Hamming dimension must be in 1..=16".into()));
        }
        let pts = (0..(1usize << n))
            .map(|i| {
                (0..n)
                    .map(|k| if (i >> k) & 1 == 1 { -T::one() } else { T::one() })
                    .collect()
            })
            .collect();
        Self::build(DomainTag::Hamming { n }, n, pts, json!({"n": n}))
    }

    pub fn generic(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        Self::build(DomainTag::Generic, dim, points, json!({"generator": "explicit"}))
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.inner.dim == 0 {
            0
        } else {
            self.inner.coords.len() / self.inner.dim
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    #[inline]
    pub fn tag(&self) -> DomainTag {
        self.inner.tag
    }

    pub fn params(&self) -> &Value {
        &self.inner.params
    }

    /// Hex SHA-256 over tag, dimension and coordinates.
    pub fn hash(&self) -> &str {
        &self.inner.hash
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        let d = self.inner.dim;
        &self.inner.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.inner.coords.chunks_exact(self.inner.dim)
    }

    /// Euclidean distance between nodes `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> T {
        distance(self.point(i), self.point(j))
    }

    /// Number of differing coordinates; meaningful on the Hamming cube.
    pub fn hamming_distance(&self, i: usize, j: usize) -> usize {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn min_distance(&self) -> Option<T> {
        let n = self.len();
        let mut best: Option<T> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.distance(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    /// Index of the node closest to `x`.
    pub fn nearest(&self, x: &[T]) -> usize {
        let mut best = (0, T::infinity());
        for (i, p) in self.points().enumerate() {
            let d = distance(p, x);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Subspace on the given node indices, in the given order.
    pub fn subspace(&self, idx: &[usize]) -> Result<Self> {
        let pts = idx
            .iter()
            .map(|&i| {
                if i >= self.len() {
                    Err(Error::InvalidArgument(format!("node {i} out of range")))
                } else {
                    Ok(self.point(i).to_vec())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(
            self.inner.tag,
            self.inner.dim,
            pts,
            json!({"parent": self.hash(), "indices": idx}),
        )
    }

    /// Applies `f` to every node and rebuilds the space, keeping the tag.
    pub fn map_points(&self, f: impl Fn(&[T]) -> Vec<T>) -> Result<Self> {
        let pts: Vec<Vec<T>> = self.points().map(f).collect();
        let dim = pts.first().map_or(0, Vec::len);
        Self::build(self.inner.tag, dim, pts, json!({"parent": self.hash(), "mapped": true}))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.points().map(<[T]>::to_vec).collect()
    }
}

fn check_duplicates<T: Scalar>(points: &[Vec<T>]) -> Result<()> {
    let tol = c::<T>(T::DUPLICATE_TOL);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if distance(&points[i], &points[j]) <= tol {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    Ok(())
}

fn content_hash<T: Scalar>(tag: &DomainTag, dim: usize, coords: &[T]) -> String {
    let mut h = Sha256::new();
    h.update(tag.to_string().as_bytes());
    h.update((dim as u64).to_le_bytes());
    for x in coords {
        h.update(x.as_f64().to_bits().to_le_bytes());
    }
    h.finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn normalize<T: Scalar>(mut p: Vec<T>) -> Vec<T> {
    let n = dot(&p, &p).sqrt();
    p.iter_mut().for_each(|x| *x /= n);
    p
}

/// Golden-angle spiral on S² or equally spaced angles on S¹.
pub fn fibonacci_points<T: Scalar>(dim: usize, n: usize) -> Result<Vec<Vec<T>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let tau = std::f64::consts::TAU;
    match dim {
        2 => Ok((0..n)
            .map(|i| {
                let a = tau * i as f64 / n as f64;
                normalize(vec![c(a.cos()), c(a.sin())])
            })
            .collect()),
        3 => {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            Ok((0..n)
                .map(|i| {
                    let z = 1.0 - (2 * i + 1) as f64 / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = tau * (i as f64 / golden).fract();
                    normalize(vec![c(r * phi.cos()), c(r * phi.sin()), c(z)])
                })
                .collect())
        }
        _ => Err(Error::Unsupported(format!(
            "Fibonacci nodes exist for S¹ and S² only, not the sphere in R^{dim}"
        ))),
    }
}

/// Seeded uniform points on the sphere of `R^dim`.
pub fn random_sphere_points<T: Scalar>(dim: usize, n: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if r > 1e-8 {
                break normalize(v.into_iter().map(c).collect());
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodal_pair() {
        let s = DiscreteSpace::sphere(
            3,
            SphereGenerator::Explicit(vec![vec![1.0f64, 0.0, 0.0], vec![-1.0, 0.0, 0.0]]),
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.distance(0, 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hamming_one() {
        let s = DiscreteSpace::<f64>::hamming(1).unwrap();
        assert_eq!(s.to_rows(), vec![vec![1.0], vec![-1.0]]);
    }

    #[test]
    fn fibonacci_hundred() {
        let s = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Fibonacci(100)).unwrap();
        assert_eq!(s.len(), 100);
        assert!(s.min_distance().unwrap() > 0.1);
        for p in s.points() {
            assert!((dot(p, p).sqrt() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn duplicates_rejected() {
        let r = DiscreteSpace::generic(vec![vec![0.0, 1.0], vec![0.0, 1.0]]);
        assert_eq!(r.unwrap_err(), Error::DuplicatePoints(0, 1));
    }

    #[test]
    fn non_unit_rejected() {
        let r = DiscreteSpace::sphere(2, SphereGenerator::Explicit(vec![vec![1.0, 0.1]]));
        assert!(matches!(r, Err(Error::NotUnitNorm { index: 0, .. })));
    }

    #[test]
    fn empty_rejected() {
        assert!(DiscreteSpace::<f64>::interval(0).is_err());
        assert!(DiscreteSpace::<f64>::sphere(3, SphereGenerator::Fibonacci(0)).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let a = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 9, seed: 4 }).unwrap();
        let b = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 9, seed: 4 }).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a, b);
    }

    #[test]
    fn interval_endpoints() {
        let s = DiscreteSpace::<f64>::interval(3).unwrap();
        assert_eq!(s.to_rows(), vec![vec![-1.0], vec![0.0], vec![1.0]]);
    }
}
