//! Projected gradient descent for the discrete energy
//! `E_K(ω) = (1/N²) Σ_{i,j} K(x_i, x_j)` of point configurations on a sphere.

use serde::{Deserialize, Serialize};

use crate::domains::random_sphere_points;
use crate::error::{Error, Result};
use crate::kernels::{KernelFamily, KernelSpec};
use crate::linalg::{distance, dot, norm};
use crate::scalar::{c, Scalar};
use crate::sphere::{gegenbauer_coeffs_default, schoenberg_classify, zonal_mean, GegenbauerSeries};

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
/// Central-difference step for [`gradient_check`].
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions<T> {
    pub max_iters: usize,
    /// Riemannian gradient norm at which to stop; `None` means `1e-8·N`.
    pub gtol: Option<T>,
    pub seed: u64,
}

impl<T: Scalar> Default for OptimizeOptions<T> {
    fn default() -> Self {
        Self {
            max_iters: 10_000,
            gtol: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OptimizationTrace<T> {
    /// Energy before the first step and after every accepted step.
    pub iterates: Vec<T>,
    pub grad_norms: Vec<T>,
    /// Accepted step size per iteration.
    pub step_policy: Vec<T>,
    pub final_points: Vec<Vec<T>>,
    pub grad_norm_final: T,
    pub converged: bool,
    /// Trial steps thrown away because points collided.
    pub rejected_steps: usize,
    pub seed: u64,
}

impl<T: Scalar> OptimizationTrace<T> {
    pub fn final_energy(&self) -> T {
        *self.iterates.last().expect("at least the initial energy")
    }

    /// `iter,energy,grad_norm` lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,energy,grad_norm\n");
        for (i, (e, g)) in self.iterates.iter().zip(&self.grad_norms).enumerate() {
            s.push_str(&format!("{i},{:e},{:e}\n", e.as_f64(), g.as_f64()));
        }
        s
    }

    pub fn final_config_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            points: Vec<Vec<f64>>,
            energy: f64,
            grad_norm_final: f64,
            converged: bool,
            iterations: usize,
            seed: &'a u64,
        }
        let out = Out {
            points: self
                .final_points
                .iter()
                .map(|p| p.iter().map(|x| x.as_f64()).collect())
                .collect(),
            energy: self.final_energy().as_f64(),
            grad_norm_final: self.grad_norm_final.as_f64(),
            converged: self.converged,
            iterations: self.step_policy.len(),
            seed: &self.seed,
        };
        Ok(serde_json::to_string_pretty(&out)?)
    }
}

fn require_differentiable<T: Scalar>(k: &KernelSpec<T>) -> Result<()> {
    match &k.family {
        KernelFamily::NegEuclideanDistance | KernelFamily::Riesz { .. } | KernelFamily::InnerProduct(_) => Ok(()),
        _ => Err(Error::NonDifferentiable(format!(
            "no analytic gradient for the {} family",
            k.name()
        ))),
    }
}

fn self_value<T: Scalar>(k: &KernelSpec<T>, x: &[T]) -> Result<T> {
    match k.family {
        KernelFamily::Riesz { .. } => Ok(k.shift),
        _ => k.evaluate(x, x),
    }
}

/// `(1/N²) Σ_{i,j} K(x_i, x_j)` with self-pairs included (the Riesz self-term
/// is the shift alone, as in its Gram matrix).
pub fn configuration_energy<T: Scalar>(k: &KernelSpec<T>, points: &[Vec<T>]) -> Result<T> {
    let n = points.len();
    let mut e = T::zero();
    for i in 0..n {
        e += self_value(k, &points[i])?;
        for j in i + 1..n {
            e += c::<T>(2.0) * k.evaluate(&points[i], &points[j])?;
        }
    }
    let nf = T::from_usize_lossy(n);
    Ok(e / (nf * nf))
}

/// `∇_x K(x, y)` in the ambient space.
fn pair_gradient<T: Scalar>(k: &KernelSpec<T>, x: &[T], y: &[T], out: &mut [T]) -> Result<()> {
    match &k.family {
        KernelFamily::NegEuclideanDistance => {
            let r = distance(x, y);
            if r == T::zero() {
                return Err(Error::NonDifferentiable("coincident points".into()));
            }
            for ((o, &a), &b) in out.iter_mut().zip(x).zip(y) {
                *o -= (a - b) / r;
            }
        }
        KernelFamily::Riesz { s } => {
            let r = distance(x, y);
            if r == T::zero() {
                return Err(Error::CoincidentNodes(0, 0));
            }
            let f = -*s * r.powf(-*s - c(2.0));
            for ((o, &a), &b) in out.iter_mut().zip(x).zip(y) {
                *o += f * (a - b);
            }
        }
        KernelFamily::InnerProduct(p) => {
            let f = p.derivative(dot(x, y));
            for (o, &b) in out.iter_mut().zip(y) {
                *o += f * b;
            }
        }
        _ => require_differentiable(k)?,
    }
    Ok(())
}

fn tangential<T: Scalar>(x: &[T], g: &mut [T]) {
    let r = dot(g, x);
    for (gi, &xi) in g.iter_mut().zip(x) {
        *gi -= r * xi;
    }
}

/// Riemannian gradient of the configuration energy, one tangent vector per point.
pub fn energy_gradient<T: Scalar>(k: &KernelSpec<T>, points: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    require_differentiable(k)?;
    let n = points.len();
    let nf = T::from_usize_lossy(n);
    let scale = c::<T>(2.0) / (nf * nf);
    let mut grads = Vec::with_capacity(n);
    for i in 0..n {
        let mut g = vec![T::zero(); points[i].len()];
        for j in 0..n {
            if j != i {
                pair_gradient(k, &points[i], &points[j], &mut g)?;
            }
        }
        g.iter_mut().for_each(|v| *v *= scale);
        tangential(&points[i], &mut g);
        grads.push(g);
    }
    Ok(grads)
}

fn flat_norm<T: Scalar>(v: &[Vec<T>]) -> T {
    v.iter().flatten().map(|&x| x * x).sum::<T>().sqrt()
}

/// `max |analytic − central difference| / max |analytic|` over all
/// tangential gradient components at `points`.
pub fn gradient_check<T: Scalar>(k: &KernelSpec<T>, points: &[Vec<T>]) -> Result<T> {
    let an = energy_gradient(k, points)?;
    let h = c::<T>(FD_STEP);
    let mut worst = T::zero();
    let mut big = T::zero();
    let mut pts = points.to_vec();
    for i in 0..points.len() {
        let mut fd = vec![T::zero(); points[i].len()];
        for a in 0..points[i].len() {
            let x0 = pts[i][a];
            pts[i][a] = x0 + h;
            let ep = configuration_energy(k, &pts)?;
            pts[i][a] = x0 - h;
            let em = configuration_energy(k, &pts)?;
            pts[i][a] = x0;
            fd[a] = (ep - em) / (c::<T>(2.0) * h);
        }
        tangential(&points[i], &mut fd);
        for (&x, &y) in an[i].iter().zip(&fd) {
            worst = worst.max((x - y).abs());
            big = big.max(x.abs());
        }
    }
    Ok(if big > T::zero() { worst / big } else { worst })
}

fn retract<T: Scalar>(points: &[Vec<T>], grads: &[Vec<T>], step: T) -> Vec<Vec<T>> {
    points
        .iter()
        .zip(grads)
        .map(|(x, g)| {
            let y: Vec<T> = x.iter().zip(g).map(|(&a, &b)| a - step * b).collect();
            let r = norm(&y);
            y.into_iter().map(|v| v / r).collect()
        })
        .collect()
}

/// Descends from `start` with Armijo backtracking; every trial point is
/// renormalized onto the sphere.
pub fn minimize_from<T: Scalar>(
    k: &KernelSpec<T>,
    start: Vec<Vec<T>>,
    opts: &OptimizeOptions<T>,
) -> Result<OptimizationTrace<T>> {
    require_differentiable(k)?;
    let n = start.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let gtol = opts.gtol.unwrap_or(c::<T>(1e-8) * T::from_usize_lossy(n));
    let mut points: Vec<Vec<T>> = start
        .into_iter()
        .map(|p| {
            let r = norm(&p);
            p.into_iter().map(|v| v / r).collect()
        })
        .collect();
    let mut energy = configuration_energy(k, &points)?;
    let mut grads = energy_gradient(k, &points)?;
    let mut gnorm = flat_norm(&grads);
    let mut trace = OptimizationTrace {
        iterates: vec![energy],
        grad_norms: vec![gnorm],
        step_policy: Vec::new(),
        final_points: Vec::new(),
        grad_norm_final: gnorm,
        converged: gnorm <= gtol,
        rejected_steps: 0,
        seed: opts.seed,
    };
    let mut step = T::one();
    let armijo = c::<T>(ARMIJO);
    for _ in 0..opts.max_iters {
        if gnorm <= gtol {
            trace.converged = true;
            break;
        }
        let mut accepted = None;
        let mut trial = step;
        for _ in 0..MAX_HALVINGS {
            let cand = retract(&points, &grads, trial);
            match configuration_energy(k, &cand) {
                Ok(e) if e.is_finite() && e <= energy - armijo * trial * gnorm * gnorm => {
                    accepted = Some((cand, e));
                    break;
                }
                Ok(_) => {}
                Err(Error::CoincidentNodes(..)) => trace.rejected_steps += 1,
                Err(e) => return Err(e),
            }
            trial *= c(0.5);
        }
        let Some((cand, e)) = accepted else { break };
        points = cand;
        energy = e;
        grads = match energy_gradient(k, &points) {
            Ok(g) => g,
            Err(Error::CoincidentNodes(..)) | Err(Error::NonDifferentiable(_)) => break,
            Err(e) => return Err(e),
        };
        gnorm = flat_norm(&grads);
        trace.iterates.push(energy);
        trace.grad_norms.push(gnorm);
        trace.step_policy.push(trial);
        step = (trial * c(2.0)).min(c(1e6));
    }
    trace.converged = gnorm <= gtol;
    trace.grad_norm_final = gnorm;
    trace.final_points = points;
    Ok(trace)
}

/// Seeded Gaussian start on the sphere in `R^d`, then [`minimize_from`].
pub fn minimize_config<T: Scalar>(
    k: &KernelSpec<T>,
    n: usize,
    d: usize,
    opts: &OptimizeOptions<T>,
) -> Result<OptimizationTrace<T>> {
    require_differentiable(k)?;
    if d < 2 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
    }
    minimize_from(k, random_sphere_points(d, n, opts.seed), opts)
}

/// Runs `restarts` seeds `seed, seed+1, …` and keeps the lowest final energy,
/// ties going to the earlier restart.
pub fn minimize_restarts<T: Scalar>(
    k: &KernelSpec<T>,
    n: usize,
    d: usize,
    opts: &OptimizeOptions<T>,
    restarts: usize,
) -> Result<OptimizationTrace<T>> {
    let mut best: Option<OptimizationTrace<T>> = None;
    for r in 0..restarts.max(1) {
        let o = OptimizeOptions {
            seed: opts.seed.wrapping_add(r as u64),
            ..*opts
        };
        let t = minimize_config(k, n, d, &o)?;
        if best.as_ref().is_none_or(|b| t.final_energy() < b.final_energy()) {
            best = Some(t);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Zonal profile `F` with `K(x, y) = F(⟨x, y⟩)` on the unit sphere, shift included.
pub fn zonal_profile<T: Scalar>(k: &KernelSpec<T>) -> Result<Box<dyn Fn(T) -> T + '_>> {
    let two = c::<T>(2.0);
    let shift = k.shift;
    let chord = move |t: T| (two - two * t).max(T::zero()).sqrt();
    Ok(match &k.family {
        KernelFamily::Constant(v) => {
            let v = *v;
            Box::new(move |_| v + shift)
        }
        KernelFamily::EuclideanDistance => Box::new(move |t| chord(t) + shift),
        KernelFamily::NegEuclideanDistance => Box::new(move |t| -chord(t) + shift),
        KernelFamily::Riesz { s } => {
            let s = *s;
            Box::new(move |t| chord(t).powf(-s) + shift)
        }
        KernelFamily::InnerProduct(p) => Box::new(move |t| p.eval(t) + shift),
        _ => {
            return Err(Error::Unsupported(format!(
                "the {} family is not a function of the inner product",
                k.name()
            )))
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ContinuumGap<T> {
    /// `E_K(ω)`.
    pub energy: T,
    /// `I_K(σ) = ∫∫ F(⟨x, y⟩) dσ dσ`.
    pub continuum: T,
    pub gap: T,
}

/// `E_K(ω) − I_K(σ)` for a kernel the Schoenberg test certifies cpd on the
/// sphere; `tol` applies to the Gegenbauer coefficients.
pub fn gap_vs_continuum<T: Scalar>(k: &KernelSpec<T>, points: &[Vec<T>], tol: T) -> Result<ContinuumGap<T>> {
    let d = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("empty configuration".into()))?;
    if d < 2 {
        return Err(Error::InvalidArgument("sphere dimension must be at least 2".into()));
    }
    let f = zonal_profile(k)?;
    let lambda = GegenbauerSeries::<T>::lambda_for_dim(d);
    let series = gegenbauer_coeffs_default(&f, lambda)?;
    if schoenberg_classify(&series, tol).cpd != Some(true) {
        return Err(Error::Precondition(format!(
            "{} is not certified conditionally positive definite on the sphere",
            k.name()
        )));
    }
    let continuum = zonal_mean(&f, d, 128)?;
    let energy = configuration_energy(k, points)?;
    Ok(ContinuumGap {
        energy,
        continuum,
        gap: energy - continuum,
    })
}
