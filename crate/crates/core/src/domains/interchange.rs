//! JSON interchange for spaces and measures.
//!
//! Files always store `f64`; reading into `f32` rounds.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{c, Scalar};

use super::measure::WeightedMeasure;
use super::space::{DiscreteSpace, DomainTag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub tag: DomainTag,
    #[serde(default)]
    pub params: Value,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

/// A measure is stored as its space plus a weight vector.
pub type MeasureFile = SpaceFile;

impl SpaceFile {
    pub fn from_space<T: Scalar>(space: &DiscreteSpace<T>) -> Self {
        Self {
            tag: space.tag(),
            params: space.params().clone(),
            points: space
                .points()
                .map(|p| p.iter().map(|x| x.as_f64()).collect())
                .collect(),
            weights: None,
        }
    }

    pub fn from_measure<T: Scalar>(mu: &WeightedMeasure<T>) -> Self {
        let mut f = Self::from_space(mu.space());
        f.weights = Some(mu.weights().iter().map(|w| w.as_f64()).collect());
        f
    }

    pub fn to_space<T: Scalar>(&self) -> Result<DiscreteSpace<T>> {
        let dim = self.points.first().map_or(0, Vec::len);
        let pts = self
            .points
            .iter()
            .map(|p| p.iter().map(|&x| c(x)).collect())
            .collect();
        if let DomainTag::Sphere { dim: d } = self.tag {
            if d != dim {
                return Err(Error::LengthMismatch {
                    expected: d,
                    got: dim,
                });
            }
        }
        DiscreteSpace::build(self.tag, dim, pts, self.params.clone())
    }

    /// The stored measure, or the uniform one when no weights are present.
    pub fn to_measure<T: Scalar>(&self) -> Result<WeightedMeasure<T>> {
        let space = self.to_space()?;
        match &self.weights {
            Some(w) => WeightedMeasure::new(&space, w.iter().map(|&x| c(x)).collect()),
            None => Ok(WeightedMeasure::uniform(&space)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_hash_and_weights() {
        let s = DiscreteSpace::<f64>::icosahedron().unwrap();
        let mut w: Vec<f64> = (0..12).map(|i| i as f64 / 66.0).collect();
        w[0] = -0.125;
        let mu = WeightedMeasure::new(&s, w.clone()).unwrap();
        let text = SpaceFile::from_measure(&mu).to_json().unwrap();
        let back = SpaceFile::from_json(&text).unwrap();
        let nu: WeightedMeasure<f64> = back.to_measure().unwrap();
        assert_eq!(nu.space().hash(), s.hash());
        assert_eq!(nu.weights(), &w[..]);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn missing_weights_mean_uniform() {
        let f = SpaceFile::from_json(
            r#"{"tag":{"kind":"interval"},"points":[[-1.0],[1.0]]}"#,
        )
        .unwrap();
        let mu: WeightedMeasure<f64> = f.to_measure().unwrap();
        assert_eq!(mu.weights(), &[0.5, 0.5]);
    }
}
