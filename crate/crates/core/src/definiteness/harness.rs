use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domains::WeightedMeasure;
use crate::error::{Error, Result};
use crate::kernels::Gram;
use crate::linalg::Matrix;
use crate::scalar::{c, Scalar};
use crate::spectral::{convolution_sqrt, mercer_decompose, symmetric_eigen, MercerDecomposition};

use super::inequalities::{am_inequality_gap, chord_scan, directional_local_min_test, gm_inequality_gap};
use super::{centered_min, classify, potential_condition, shifted_min, PotentialVerdict};

/// Vertex pairs are exhaustive up to this many nodes, sampled beyond it.
const ALL_PAIRS_MAX: usize = 16;
const GRID: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarnessMode {
    /// Conditionally positive definite: ten conditions.
    Cpd,
    /// Positive definite.
    Pd,
    /// Conditionally strictly positive definite.
    Cspd,
}

#[derive(Debug, Clone, Copy)]
pub struct HarnessOptions<T> {
    /// Relative to `‖G‖_max`.
    pub tol: T,
    pub random_probes: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for HarnessOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(T::DEFAULT_TOL),
            random_probes: 16,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    /// Worst normalized value the verdict was read from, when there is one.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub mode: HarnessMode,
    pub conditions: Vec<Condition>,
    pub agree: bool,
    pub tol: f64,
    pub scale: f64,
}

impl ConsistencyReport {
    pub fn values(&self) -> Vec<bool> {
        self.conditions.iter().map(|c| c.holds).collect()
    }

    pub fn all_true(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn all_false(&self) -> bool {
        self.conditions.iter().all(|c| !c.holds)
    }
}

struct Ctx<'a, T: Scalar> {
    gram: &'a Gram<T>,
    mu: &'a WeightedMeasure<T>,
    tol: T,
    thr: T,
    n: usize,
    random: Vec<WeightedMeasure<T>>,
    grid: Vec<T>,
}

/// Evaluates every condition of the selected list on its own numerical route
/// and reports whether the verdicts coincide.
///
/// `μ` must be a probability measure with full support and constant potential
/// (within `tol·‖G‖`).
pub fn equivalence_harness<T: Scalar>(
    gram: &Gram<T>,
    mu: &WeightedMeasure<T>,
    mode: HarnessMode,
    opts: &HarnessOptions<T>,
) -> Result<ConsistencyReport> {
    mu.require_same_space(gram.space())?;
    let thr = gram.abs_tol(opts.tol);
    if !mu.is_probability() {
        return Err(Error::Precondition("μ must be a probability measure".into()));
    }
    if let Some(i) = mu.weights().iter().position(|&w| w <= T::zero()) {
        return Err(Error::Precondition(format!("μ has no mass at node {i}")));
    }
    let inv = gram.invariance(mu, thr)?;
    if !inv.invariant {
        return Err(Error::Precondition(format!(
            "μ is not invariant: potential spread {}",
            inv.spread
        )));
    }

    let n = gram.len();
    let ctx = Ctx {
        gram,
        mu,
        tol: opts.tol,
        thr,
        n,
        random: random_probabilities(gram, opts.random_probes, opts.seed)?,
        grid: (0..=GRID).map(|k| T::from_usize_lossy(k) / T::from_usize_lossy(GRID)).collect(),
    };
    let conditions = match mode {
        HarnessMode::Cpd => ctx.cpd_list()?,
        HarnessMode::Pd => ctx.pd_list()?,
        HarnessMode::Cspd => ctx.cspd_list()?,
    };
    let agree = conditions.windows(2).all(|w| w[0].holds == w[1].holds);
    Ok(ConsistencyReport {
        mode,
        conditions,
        agree,
        tol: opts.tol.as_f64(),
        scale: gram.scale().as_f64(),
    })
}

fn cond<T: Scalar>(name: &str, holds: bool, margin: Option<T>) -> Condition {
    Condition {
        name: name.to_string(),
        holds,
        margin: margin.map(Scalar::as_f64),
    }
}

fn random_probabilities<T: Scalar>(gram: &Gram<T>, count: usize, seed: u64) -> Result<Vec<WeightedMeasure<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let w: Vec<f64> = (0..gram.len()).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = w.iter().sum();
            WeightedMeasure::new(gram.space(), w.iter().map(|x| c(x / s)).collect())
        })
        .collect()
}

fn sq_norm<T: Scalar>(w: &[T]) -> T {
    w.iter().map(|&x| x * x).sum()
}

fn diff<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `(d⁺/|d⁺|, d⁻/|d⁻|)` for a nonzero mean-zero direction.
fn split_pair<T: Scalar>(gram: &Gram<T>, d: &[T]) -> Result<Option<(WeightedMeasure<T>, WeightedMeasure<T>)>> {
    let plus: Vec<T> = d.iter().map(|&x| x.max(T::zero())).collect();
    let minus: Vec<T> = d.iter().map(|&x| (-x).max(T::zero())).collect();
    let (mp, mm): (T, T) = (plus.iter().copied().sum(), minus.iter().copied().sum());
    if mp <= T::zero() || mm <= T::zero() {
        return Ok(None);
    }
    let a = WeightedMeasure::new(gram.space(), plus.iter().map(|&x| x / mp).collect())?;
    let b = WeightedMeasure::new(gram.space(), minus.iter().map(|&x| x / mm).collect())?;
    Ok(Some((a, b)))
}

/// `μ + ε d` with the largest `ε` keeping all weights nonnegative.
fn push_probe<T: Scalar>(mu: &WeightedMeasure<T>, d: &[T]) -> Result<Option<WeightedMeasure<T>>> {
    let eps = mu
        .weights()
        .iter()
        .zip(d)
        .filter(|(_, &x)| x < T::zero())
        .map(|(&w, &x)| w / -x)
        .fold(T::infinity(), T::min);
    if !eps.is_finite() {
        return Ok(None);
    }
    let w: Vec<T> = mu.weights().iter().zip(d).map(|(&m, &x)| (m + eps * x).max(T::zero())).collect();
    Ok(Some(WeightedMeasure::new(mu.space(), w)?))
}

impl<T: Scalar> Ctx<'_, T> {
    fn vertices(&self) -> Result<Vec<WeightedMeasure<T>>> {
        (0..self.n).map(|i| WeightedMeasure::dirac(self.gram.space(), i)).collect()
    }

    fn vertex_pairs(&self) -> Result<Vec<(WeightedMeasure<T>, WeightedMeasure<T>)>> {
        let v = self.vertices()?;
        let mut out = Vec::new();
        if self.n <= ALL_PAIRS_MAX {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    out.push((v[i].clone(), v[j].clone()));
                }
            }
        } else {
            for i in 0..self.n {
                for j in [(i + 1) % self.n, (i + self.n / 2) % self.n] {
                    out.push((v[i].clone(), v[j].clone()));
                }
            }
        }
        Ok(out)
    }

    fn random_pairs(&self) -> Vec<(WeightedMeasure<T>, WeightedMeasure<T>)> {
        self.random.chunks(2).filter(|p| p.len() == 2).map(|p| (p[0].clone(), p[1].clone())).collect()
    }

    /// Helmert route: most negative direction of `QᵀGQ`.
    fn helmert_direction(&self) -> Result<Option<(T, Vec<T>)>> {
        centered_min(self.gram.matrix())
    }

    /// Projected route: eigenvectors of the full `PGP` with the one most
    /// aligned to `1` removed.
    fn pgp_direction(&self) -> Result<Option<(T, Vec<T>)>> {
        let n = self.n;
        if n < 2 {
            return Ok(None);
        }
        let g = self.gram.matrix();
        let nf = T::from_usize_lossy(n);
        let r: Vec<T> = (0..n).map(|i| g.row(i).iter().copied().sum::<T>() / nf).collect();
        let tot: T = r.iter().copied().sum::<T>() / nf;
        let pgp = Matrix::from_fn(n, n, |i, j| g[(i, j)] - r[i] - r[j] + tot);
        let e = symmetric_eigen(&pgp)?;
        let drop = (0..n)
            .max_by(|&a, &b| {
                let sa = e.vectors[a].iter().copied().sum::<T>().abs();
                let sb = e.vectors[b].iter().copied().sum::<T>().abs();
                sa.partial_cmp(&sb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("n ≥ 2");
        let j = (0..n).rev().find(|&j| j != drop).expect("n ≥ 2");
        // P v is still an eigenvector; this strips the O(eps/gap) part along 1
        // that near-zero eigenvalues pick up
        let v = &e.vectors[j];
        let mean = v.iter().copied().sum::<T>() / nf;
        let pv: Vec<T> = v.iter().map(|&x| x - mean).collect();
        let r = sq_norm(&pv).sqrt();
        Ok(Some((e.values[j], pv.into_iter().map(|x| x / r).collect())))
    }

    fn mercer(&self) -> Result<MercerDecomposition<T>> {
        mercer_decompose(self.gram, self.mu, self.tol)
    }

    /// Normalized eigenvalues `λ_j / ‖w∘φ_j‖²`, with the constant
    /// eigenfunction (the one most aligned to `1` in `L²(μ)`) removed.
    /// The flag says whether `T 1 = I(μ) 1` holds within tolerance.
    fn mercer_spectrum(&self, m: &MercerDecomposition<T>) -> Result<(bool, Vec<T>)> {
        let ones = vec![T::one(); m.len()];
        let t1 = m.apply(&ones)?;
        let i_mu = self.gram.energy(self.mu)?;
        let const_ok = t1.iter().all(|&x| (x - i_mu).abs() <= self.thr);
        let drop = (0..m.len())
            .max_by(|&a, &b| {
                let sa = m.inner(&m.phi[a], &ones).abs();
                let sb = m.inner(&m.phi[b], &ones).abs();
                sa.partial_cmp(&sb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty support");
        let rest = (0..m.len())
            .filter(|&j| j != drop)
            .map(|j| {
                let d2: T = m.phi[j].iter().zip(&m.weights).map(|(&p, &w)| (w * p) * (w * p)).sum();
                m.eigenvalues[j] / d2
            })
            .collect();
        Ok((const_ok, rest))
    }

    fn mercer_probes(&self, m: &MercerDecomposition<T>) -> Result<Vec<WeightedMeasure<T>>> {
        let mut out = Vec::new();
        let ones = vec![T::one(); m.len()];
        for f in &m.phi {
            let mean = m.inner(f, &ones);
            let mut d = vec![T::zero(); self.n];
            for (a, &i) in m.support.iter().enumerate() {
                d[i] = m.weights[a] * (f[a] - mean);
            }
            if sq_norm(&d).sqrt() > c::<T>(1e-10) {
                if let Some(p) = push_probe(self.mu, &d)? {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    fn min_or_inf(values: impl Iterator<Item = T>) -> T {
        values.fold(T::infinity(), T::min)
    }

    /// Smallest `min_t chord gap / ‖b − a‖²` over the pairs.
    fn chord_margin(&self, pairs: &[(Vec<T>, Vec<T>)], curvature: bool) -> T {
        Self::min_or_inf(pairs.iter().filter_map(|(a, b)| {
            let len2 = sq_norm(&diff(a, b));
            if len2 <= c::<T>(1e-24) {
                return None;
            }
            let s = chord_scan(self.gram, a, b, &self.grid);
            Some(if curvature { s.curvature } else { s.min_gap } / len2)
        }))
    }

    fn am_margin(&self, pairs: &[(WeightedMeasure<T>, WeightedMeasure<T>)]) -> Result<T> {
        let mut worst = T::infinity();
        for (a, b) in pairs {
            let len2 = sq_norm(&diff(a.weights(), b.weights()));
            if len2 <= c::<T>(1e-24) {
                continue;
            }
            worst = worst.min(am_inequality_gap(self.gram, a, b)? / len2);
        }
        Ok(worst)
    }

    fn weights_of(pairs: &[(WeightedMeasure<T>, WeightedMeasure<T>)]) -> Vec<(Vec<T>, Vec<T>)> {
        pairs.iter().map(|(a, b)| (a.weights().to_vec(), b.weights().to_vec())).collect()
    }

    fn probability_pairs(&self, witness: Option<&[T]>) -> Result<Vec<(WeightedMeasure<T>, WeightedMeasure<T>)>> {
        let mut pairs = self.vertex_pairs()?;
        pairs.extend(self.random_pairs());
        if let Some(d) = witness {
            if let Some(p) = split_pair(self.gram, d)? {
                pairs.push(p);
            }
        }
        Ok(pairs)
    }

    fn pairs_at_mu(&self, witness: Option<&[T]>) -> Result<Vec<(WeightedMeasure<T>, WeightedMeasure<T>)>> {
        let mut probes = self.vertices()?;
        probes.extend(self.random.iter().cloned());
        if let Some(d) = witness {
            if let Some(p) = push_probe(self.mu, d)? {
                probes.push(p);
            }
        }
        Ok(probes.into_iter().map(|p| (self.mu.clone(), p)).collect())
    }

    /// `λ_min(G + N²‖G‖·J)`, evaluated directly on the shifted matrix.
    fn big_shift_min(&self) -> Result<T> {
        let cap = T::from_usize_lossy(self.n * self.n) * self.gram.scale();
        shifted_min(self.gram.matrix(), cap)
    }

    fn cpd_list(&self) -> Result<Vec<Condition>> {
        let thr = self.thr;
        let report = classify(self.gram, self.tol)?;
        let helmert = self.helmert_direction()?;
        let pgp = self.pgp_direction()?;
        let mercer = self.mercer()?;
        let h_dir = helmert.as_ref().map(|(_, d)| d.as_slice());
        let p_dir = pgp.as_ref().map(|(_, d)| d.as_slice());

        let shift_min = self.big_shift_min()?;
        let c1 = cond("pd_mod_constant", shift_min >= -thr, Some(shift_min));

        let c2 = cond("cpd", report.cpd, report.min_eig_centered);

        let mut probes = self.vertices()?;
        probes.extend(self.random.iter().cloned());
        probes.extend(self.mercer_probes(&mercer)?);
        let lm = directional_local_min_test(self.gram, self.mu, &probes, T::one(), 8, self.tol)?;
        let c3 = cond("local_min_at_mu", lm.passed, Some(lm.min_increment));

        let pc = potential_condition(self.gram, self.mu, thr)?;
        let c4 = cond(
            "global_min_on_probabilities",
            pc.verdict != PotentialVerdict::Fails && report.cpd,
            Some(pc.support_deviation),
        );

        let inv = self.gram.invariance(self.mu, thr)?;
        let pgp_min = pgp.as_ref().map(|(l, _)| *l);
        let c5 = cond(
            "global_min_on_mass_one",
            inv.invariant && pgp_min.is_none_or(|l| l >= -thr),
            pgp_min,
        );

        let conv_global = self.chord_margin(&Self::weights_of(&self.probability_pairs(p_dir)?), false);
        let c6 = cond("convex_on_probabilities", conv_global >= -thr, Some(conv_global));

        let conv_mu = self.chord_margin(&Self::weights_of(&self.pairs_at_mu(h_dir)?), false);
        let c7 = cond("convex_at_mu", conv_mu >= -thr, Some(conv_mu));

        let am_global = self.am_margin(&self.probability_pairs(h_dir)?)?;
        let c8 = cond("am_inequality", am_global >= -thr, Some(am_global));

        let am_mu = self.am_margin(&self.pairs_at_mu(p_dir)?)?;
        let c9 = cond("am_inequality_at_mu", am_mu >= -thr, Some(am_mu));

        let (const_ok, rest) = self.mercer_spectrum(&mercer)?;
        let m_min = Self::min_or_inf(rest.into_iter());
        let c10 = cond("mercer_nonnegative", const_ok && m_min >= -thr, Some(m_min));

        Ok(vec![c1, c2, c3, c4, c5, c6, c7, c8, c9, c10])
    }

    fn pd_list(&self) -> Result<Vec<Condition>> {
        let thr = self.thr;
        let report = classify(self.gram, self.tol)?;
        let p1 = cond("pd", report.pd, Some(report.min_eig_full));

        // Full-space most negative direction, split into probability parts.
        let e = symmetric_eigen(self.gram.matrix())?;
        let v = e.vectors[self.n - 1].clone();
        let mut pairs = self.vertex_pairs()?;
        pairs.extend(self.random_pairs());
        let mut singles: Vec<WeightedMeasure<T>> = self.vertices()?;
        singles.extend(self.random.iter().cloned());
        let plus: Vec<T> = v.iter().map(|&x| x.max(T::zero())).collect();
        let minus: Vec<T> = v.iter().map(|&x| (-x).max(T::zero())).collect();
        let parts: Vec<WeightedMeasure<T>> = [plus, minus]
            .into_iter()
            .filter_map(|p| {
                let m: T = p.iter().copied().sum();
                (m > T::zero()).then(|| WeightedMeasure::new(self.gram.space(), p.iter().map(|&x| x / m).collect()))
            })
            .collect::<Result<_>>()?;
        if parts.len() == 2 {
            pairs.push((parts[0].clone(), parts[1].clone()));
        }
        singles.extend(parts);
        let mut gm_worst = T::infinity();
        for s in &singles {
            gm_worst = gm_worst.min(self.gram.energy(s)? / sq_norm(s.weights()));
        }
        let mut gm_ok = gm_worst >= -thr;
        for (a, b) in &pairs {
            match gm_inequality_gap(self.gram, a, b, self.tol) {
                Ok(g) => {
                    let g = g / (sq_norm(a.weights()) * sq_norm(b.weights())).sqrt();
                    gm_worst = gm_worst.min(g);
                    gm_ok &= g >= -thr;
                }
                Err(Error::NegativeSelfEnergy { .. }) => gm_ok = false,
                Err(e) => return Err(e),
            }
        }
        let p2 = cond("gm_inequality_and_nonnegative_energy", gm_ok, Some(gm_worst));

        let pc = potential_condition(self.gram, self.mu, thr)?;
        let pgp_min = self.pgp_direction()?.map(|(l, _)| l);
        let i_mu = self.gram.energy(self.mu)?;
        let p3 = cond(
            "mu_global_min_with_nonnegative_energy",
            pc.verdict != PotentialVerdict::Fails && pgp_min.is_none_or(|l| l >= -thr) && i_mu >= -thr,
            Some(i_mu),
        );

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut signed: Vec<(Vec<T>, Vec<T>)> = (0..self.random.len().max(2) / 2)
            .map(|_| {
                let mut draw = || -> Vec<T> {
                    (0..self.n).map(|_| c(StandardNormal.sample(&mut rng))).collect()
                };
                (draw(), draw())
            })
            .collect();
        signed.push((vec![T::zero(); self.n], v.clone()));
        signed.extend(Self::weights_of(&self.vertex_pairs()?));
        let conv = self.chord_margin(&signed, false);
        let p4 = cond("convex_on_signed_measures", conv >= -thr, Some(conv));

        let mercer = self.mercer()?;
        let all: Vec<T> = (0..mercer.len())
            .map(|j| {
                let d2: T = mercer.phi[j]
                    .iter()
                    .zip(&mercer.weights)
                    .map(|(&p, &w)| (w * p) * (w * p))
                    .sum();
                mercer.eigenvalues[j] / d2
            })
            .collect();
        let m_min = Self::min_or_inf(all.into_iter());
        let p5 = cond("mercer_all_nonnegative", m_min >= -thr, Some(m_min));

        let p6 = cond::<T>("convolution_sqrt_exists", convolution_sqrt(&mercer, None, self.tol).is_ok(), None);

        Ok(vec![p1, p2, p3, p4, p5, p6])
    }

    fn cspd_list(&self) -> Result<Vec<Condition>> {
        let thr = self.thr;
        let report = classify(self.gram, self.tol)?;
        let s1 = cond("strict_cpd", report.strict_cpd, report.min_eig_centered);

        let shift_min = self.big_shift_min()?;
        let s2 = cond("strict_pd_mod_constant", shift_min > thr, Some(shift_min));

        let inv = self.gram.invariance(self.mu, thr)?;
        let pgp = self.pgp_direction()?;
        let pgp_min = pgp.as_ref().map(|(l, _)| *l);
        let s3 = cond(
            "unique_minimizer",
            inv.invariant && pgp_min.is_none_or(|l| l > thr),
            pgp_min,
        );

        let h_dir = self.helmert_direction()?;
        let pairs = self.probability_pairs(h_dir.as_ref().map(|(_, d)| d.as_slice()))?;
        let curv = self.chord_margin(&Self::weights_of(&pairs), true);
        let s4 = cond("strictly_convex_on_probabilities", curv > thr, Some(curv));

        let mercer = self.mercer()?;
        let (const_ok, rest) = self.mercer_spectrum(&mercer)?;
        let m_min = Self::min_or_inf(rest.into_iter());
        let s5 = cond("mercer_positive", const_ok && m_min > thr, Some(m_min));

        Ok(vec![s1, s2, s3, s4, s5])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DiscreteSpace;
    use crate::kernels::KernelSpec;

    #[test]
    fn octahedron_neg_distance_all_true() {
        let s = DiscreteSpace::<f64>::octahedron().unwrap();
        let g = KernelSpec::neg_distance().with_shift(3.0).gram(&s).unwrap();
        let mu = WeightedMeasure::uniform(&s);
        let r = equivalence_harness(&g, &mu, HarnessMode::Cpd, &HarnessOptions::default()).unwrap();
        assert_eq!(r.conditions.len(), 10);
        assert!(r.agree && r.all_true(), "{r:?}");
        let r = equivalence_harness(&g, &mu, HarnessMode::Cspd, &HarnessOptions::default()).unwrap();
        assert!(r.agree && r.all_true(), "{r:?}");
    }

    #[test]
    fn coordinate_sum_has_no_invariant_uniform_measure() {
        // G = [[2, 0], [0, −2]], so the uniform potential is (1, −1)
        let s = DiscreteSpace::<f64>::sphere(
            3,
            crate::domains::SphereGenerator::Explicit(vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]]),
        )
        .unwrap();
        let g = KernelSpec::coordinate_sum().gram(&s).unwrap();
        let mu = WeightedMeasure::uniform(&s);
        assert!(matches!(
            equivalence_harness(&g, &mu, HarnessMode::Cpd, &HarnessOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rejects_non_invariant_measure() {
        let s = DiscreteSpace::<f64>::interval(5).unwrap();
        let g = KernelSpec::distance().gram(&s).unwrap();
        let mu = WeightedMeasure::uniform(&s);
        assert!(matches!(
            equivalence_harness(&g, &mu, HarnessMode::Cpd, &HarnessOptions::default()),
            Err(Error::Precondition(_))
        ));
    }
}
