//! JSON form of a kernel: `{family, params, shift}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{c, Scalar};
use crate::sphere::GegenbauerSeries;

use super::{KernelFamily, KernelSpec, Profile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelFile {
    pub family: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub shift: f64,
}

fn f64s<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.as_f64()).collect()
}

fn param_f64(params: &Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Serialization(format!("missing numeric parameter `{key}`")))
}

fn param_vec(params: &Value, key: &str) -> Result<Vec<f64>> {
    let arr = params
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Serialization(format!("missing array parameter `{key}`")))?;
    arr.iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| Error::Serialization(format!("non-numeric entry in `{key}`")))
        })
        .collect()
}

impl KernelFile {
    pub fn from_spec<T: Scalar>(k: &KernelSpec<T>) -> Self {
        let params = match &k.family {
            KernelFamily::Constant(v) => json!({"value": v.as_f64()}),
            KernelFamily::Riesz { s } => json!({"s": s.as_f64()}),
            KernelFamily::InnerProduct(Profile::Polynomial(a)) => json!({"polynomial": f64s(a)}),
            KernelFamily::InnerProduct(Profile::Gegenbauer(s)) => json!({
                "lambda": s.lambda.as_f64(),
                "coeffs": f64s(&s.coeffs),
                "truncation_error": s.truncation_error.as_f64(),
            }),
            KernelFamily::GramTable { matrix, space_hash } => json!({
                "n": matrix.rows(),
                "matrix": f64s(matrix.as_slice()),
                "space_hash": space_hash,
            }),
            _ => Value::Null,
        };
        Self {
            family: k.name().to_owned(),
            params,
            shift: k.shift.as_f64(),
        }
    }

    pub fn to_spec<T: Scalar>(&self) -> Result<KernelSpec<T>> {
        let p = &self.params;
        let cv = |v: Vec<f64>| v.into_iter().map(c::<T>).collect::<Vec<T>>();
        let family = match self.family.as_str() {
            "constant" => KernelFamily::Constant(c(param_f64(p, "value")?)),
            "euclidean_distance" => KernelFamily::EuclideanDistance,
            "neg_euclidean_distance" => KernelFamily::NegEuclideanDistance,
            "riesz" => KernelSpec::riesz(c(param_f64(p, "s")?))?.family,
            "coordinate_sum" => KernelFamily::CoordinateSum,
            "inner_product" => {
                if p.get("polynomial").is_some() {
                    KernelFamily::InnerProduct(Profile::Polynomial(cv(param_vec(p, "polynomial")?)))
                } else {
                    let mut s = GegenbauerSeries::new(c(param_f64(p, "lambda")?), cv(param_vec(p, "coeffs")?));
                    s.truncation_error = c(p.get("truncation_error").and_then(Value::as_f64).unwrap_or(0.0));
                    KernelFamily::InnerProduct(Profile::Gegenbauer(s))
                }
            }
            "gram_table" => {
                let n = param_f64(p, "n")? as usize;
                let matrix = Matrix::from_row_major(n, n, cv(param_vec(p, "matrix")?))?;
                super::check_symmetric(&matrix)?;
                let space_hash = p
                    .get("space_hash")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Serialization("missing `space_hash`".into()))?
                    .to_owned();
                KernelFamily::GramTable { matrix, space_hash }
            }
            other => return Err(Error::Serialization(format!("unknown kernel family `{other}`"))),
        };
        Ok(KernelSpec {
            family,
            shift: c(self.shift),
        })
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
    use crate::domains::DiscreteSpace;

    #[test]
    fn round_trips() {
        let s = DiscreteSpace::<f64>::interval(2).unwrap();
        let m = Matrix::from_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        let specs = vec![
            KernelSpec::constant(1.5),
            KernelSpec::neg_distance().with_shift(2.0),
            KernelSpec::riesz(0.5).unwrap(),
            KernelSpec::polynomial(vec![1.0, 0.0, 0.25]),
            KernelSpec::gegenbauer(GegenbauerSeries::new(0.5, vec![0.1, 0.2])),
            KernelSpec::gram_table(&s, m).unwrap(),
        ];
        for k in specs {
            let text = KernelFile::from_spec(&k).to_json().unwrap();
            let back: KernelSpec<f64> = KernelFile::from_json(&text).unwrap().to_spec().unwrap();
            assert_eq!(back, k);
        }
    }

    #[test]
    fn unknown_family() {
        let f = KernelFile::from_json(r#"{"family":"gaussian"}"#).unwrap();
        assert!(f.to_spec::<f64>().is_err());
    }
}
