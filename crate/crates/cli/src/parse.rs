//! `tag:param:param` grammar for spaces, kernels, measures and point sets.

use std::fs;

use invariance::domains::{
    cube_points, fibonacci_points, icosahedron_points, octahedron_points, random_sphere_points,
    tetrahedron_points, MeasureFile, SpaceFile,
};
use invariance::kernels::{equilibrium_measure, KernelFile};
use invariance::{DiscreteSpace64, Gram64, GegenbauerSeries64, KernelSpec64, SphereGenerator, WeightedMeasure64};

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn bad(what: &str, spec: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("bad {what} `{spec}`: {why}"))
}

fn num<T: std::str::FromStr>(what: &str, spec: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| bad(what, spec, format!("`{s}` is not a number")))
}

fn list(what: &str, spec: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| num(what, spec, x)).collect()
}

fn read(what: &str, spec: &str, path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| bad(what, spec, e))
}

fn arity(what: &str, spec: &str, parts: &[&str], n: std::ops::RangeInclusive<usize>) -> Result<()> {
    if n.contains(&parts.len()) {
        Ok(())
    } else {
        Err(bad(what, spec, "wrong number of parameters"))
    }
}

pub fn space(spec: &str) -> Result<DiscreteSpace64> {
    if let Some(path) = spec.strip_prefix("file:") {
        let f = SpaceFile::from_json(&read("space", spec, path)?).map_err(|e| bad("space", spec, e))?;
        return Ok(f.to_space()?);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let s = match parts[0] {
        "octahedron" => DiscreteSpace64::octahedron()?,
        "tetrahedron" => DiscreteSpace64::tetrahedron()?,
        "cube" => DiscreteSpace64::cube()?,
        "icosahedron" => DiscreteSpace64::icosahedron()?,
        "sphere" => {
            arity("space", spec, &parts, 4..=5)?;
            let d: usize = num("space", spec, parts[1])?;
            let n: usize = num("space", spec, parts[3])?;
            let gen = match (parts[2], parts.get(4)) {
                ("fib", None) => SphereGenerator::Fibonacci(n),
                ("random", seed) => SphereGenerator::Random {
                    n,
                    seed: seed.map_or(Ok(0), |s| num("space", spec, s))?,
                },
                _ => return Err(bad("space", spec, "generator must be `fib:N` or `random:N[:SEED]`")),
            };
            DiscreteSpace64::sphere(d, gen)?
        }
        "interval" => {
            arity("space", spec, &parts, 2..=2)?;
            DiscreteSpace64::interval(num("space", spec, parts[1])?)?
        }
        "hamming" => {
            arity("space", spec, &parts, 2..=2)?;
            DiscreteSpace64::hamming(num("space", spec, parts[1])?)?
        }
        _ => return Err(bad("space", spec, "unknown tag")),
    };
    if !matches!(parts[0], "sphere" | "interval" | "hamming") && parts.len() > 1 {
        return Err(bad("space", spec, "takes no parameters"));
    }
    Ok(s)
}

pub fn kernel(spec: &str, shift: f64) -> Result<KernelSpec64> {
    if let Some(path) = spec.strip_prefix("file:") {
        let f = KernelFile::from_json(&read("kernel", spec, path)?).map_err(|e| bad("kernel", spec, e))?;
        let k = f.to_spec()?;
        let base = k.shift;
        return Ok(k.with_shift(base + shift));
    }
    let (tag, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let none = |k: KernelSpec64| {
        if rest.is_empty() {
            Ok(k)
        } else {
            Err(bad("kernel", spec, "takes no parameters"))
        }
    };
    let k = match tag {
        "neg-distance" | "neg_euclidean_distance" => none(KernelSpec64::neg_distance())?,
        "distance" | "euclidean_distance" => none(KernelSpec64::distance())?,
        "coordinate-sum" | "coordinate_sum" => none(KernelSpec64::coordinate_sum())?,
        "constant" => KernelSpec64::constant(num("kernel", spec, rest)?),
        "riesz" => KernelSpec64::riesz(num("kernel", spec, rest)?)?,
        "poly" | "polynomial" => KernelSpec64::polynomial(list("kernel", spec, rest)?),
        "gegenbauer" => {
            let (lam, coeffs) = rest
                .split_once(':')
                .ok_or_else(|| bad("kernel", spec, "expected `gegenbauer:LAMBDA:c0,c1,…`"))?;
            KernelSpec64::gegenbauer(GegenbauerSeries64::new(
                num("kernel", spec, lam)?,
                list("kernel", spec, coeffs)?,
            ))
        }
        _ => return Err(bad("kernel", spec, "unknown family")),
    };
    Ok(k.with_shift(shift))
}

/// Measures are built on `space`; `equilibrium` needs the Gram matrix.
pub fn measure(spec: &str, space: &DiscreteSpace64, gram: &Gram64) -> Result<WeightedMeasure64> {
    if let Some(path) = spec.strip_prefix("file:") {
        let f = MeasureFile::from_json(&read("measure", spec, path)?).map_err(|e| bad("measure", spec, e))?;
        let m = f.to_measure()?;
        if m.space() != space {
            return Err(bad("measure", spec, "its nodes differ from --space"));
        }
        return Ok(WeightedMeasure64::new(space, m.weights().to_vec())?);
    }
    let (tag, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match (tag, rest.is_empty()) {
        ("uniform", true) => Ok(WeightedMeasure64::uniform(space)),
        ("equilibrium", true) => Ok(equilibrium_measure(gram)?),
        ("dirac", false) => Ok(WeightedMeasure64::dirac(space, num("measure", spec, rest)?)?),
        ("weights", false) => Ok(WeightedMeasure64::new(space, list("measure", spec, rest)?)?),
        _ => Err(bad("measure", spec, "expected uniform, equilibrium, dirac:I, weights:… or file:…")),
    }
}

/// A named point set on the sphere in `R^dim`.
pub fn points(spec: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    if let Some(path) = spec.strip_prefix("file:") {
        return serde_json::from_str(&read("points", spec, path)?).map_err(|e| bad("points", spec, e));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let fixed = |p: Vec<Vec<f64>>| {
        if parts.len() == 1 {
            Ok(p)
        } else {
            Err(bad("points", spec, "takes no parameters"))
        }
    };
    match parts[0] {
        "octahedron" => fixed(octahedron_points()),
        "tetrahedron" => fixed(tetrahedron_points()),
        "cube" => fixed(cube_points()),
        "icosahedron" => fixed(icosahedron_points()),
        "fib" => {
            arity("points", spec, &parts, 2..=2)?;
            Ok(fibonacci_points(dim, num("points", spec, parts[1])?)?)
        }
        "random" => {
            arity("points", spec, &parts, 2..=3)?;
            let n: usize = num("points", spec, parts[1])?;
            let seed = parts.get(2).map_or(Ok(0), |s| num("points", spec, s))?;
            if n == 0 {
                return Err(bad("points", spec, "N must be at least 1"));
            }
            Ok(random_sphere_points(dim, n, seed))
        }
        _ => Err(bad("points", spec, "unknown point set")),
    }
}

/// `+,-,+` or `1,-1,1`.
pub fn signs(spec: &str) -> Result<Vec<i8>> {
    spec.split(',')
        .map(|s| match s.trim() {
            "+" | "1" | "+1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(bad("signs", spec, format!("`{other}` is not a sign"))),
        })
        .collect()
}
