use serde_json::{json, Value};

use invariance::definiteness::{classify_kernel, equivalence_harness, HarnessOptions};
use invariance::optimize::{gap_vs_continuum, minimize_restarts, zonal_profile, OptimizeOptions};
use invariance::spectral::{convolution_sqrt, mercer_decompose};
use invariance::sphere::{gegenbauer_coeffs, schoenberg_classify, DEFAULT_N_MAX};
use invariance::stolarsky::{cap_discrepancy, classical_ratio, generalized_stolarsky, set_ratio, CapQuadrature};
use invariance::{Error, GegenbauerSeries64, HarnessMode};

use crate::args::*;
use crate::config::{required, resolve, tolerance, RunArgs};
use crate::error::CliError;
use crate::output::{cell, emit, render, scalar_rows, Report};
use crate::parse;

type Result<T> = std::result::Result<T, CliError>;

const DEFAULT_TOL: f64 = 1e-9;
/// Coefficient tolerance for the Schoenberg certificate behind the continuum
/// gap; it must clear the truncation error of non-smooth profiles.
const CONTINUUM_TOL: f64 = 1e-4;

macro_rules! run_args {
    ($t:ty, |$a:ident| $fill:block) => {
        impl RunArgs for $t {
            fn io(&self) -> &IoArgs {
                &self.io
            }
            fn io_mut(&mut self) -> &mut IoArgs {
                &mut self.io
            }
            fn fill_defaults(&mut self) {
                let $a = self;
                $fill
            }
        }
    };
}

run_args!(ClassifyArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.tol.get_or_insert(DEFAULT_TOL);
});
run_args!(EnergyArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.measure.get_or_insert_with(|| "uniform".into());
    a.tol.get_or_insert(DEFAULT_TOL);
});
run_args!(MercerArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.measure.get_or_insert_with(|| "uniform".into());
    a.tol.get_or_insert(DEFAULT_TOL);
});
run_args!(SqrtArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.measure.get_or_insert_with(|| "uniform".into());
    a.tol.get_or_insert(DEFAULT_TOL);
});
run_args!(StolarskyArgs, |a| {
    a.mode.get_or_insert(StolarskyMode::Generalized);
    if a.mode == Some(StolarskyMode::Generalized) {
        a.shift.get_or_insert(0.0);
        a.measure.get_or_insert_with(|| "uniform".into());
        a.tol.get_or_insert(DEFAULT_TOL);
    } else {
        let q = CapQuadrature::default();
        a.dim.get_or_insert(3);
        a.m_h.get_or_insert(q.m_h);
        a.n_x.get_or_insert(q.n_x);
    }
});
run_args!(CapDiscArgs, |a| {
    let q = CapQuadrature::default();
    a.dim.get_or_insert(3);
    a.m_h.get_or_insert(q.m_h);
    a.n_x.get_or_insert(q.n_x);
});
run_args!(GegenbauerArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.dim.get_or_insert(3);
    let n = *a.n_max.get_or_insert(DEFAULT_N_MAX);
    a.m_quad.get_or_insert(2 * n);
    a.tol.get_or_insert(DEFAULT_TOL);
});
run_args!(OptimizeArgs, |a| {
    a.shift.get_or_insert(0.0);
    a.dim.get_or_insert(3);
    a.seed.get_or_insert(0);
    a.restarts.get_or_insert(1);
    a.max_iters.get_or_insert(OptimizeOptions::<f64>::default().max_iters);
    a.tol.get_or_insert(CONTINUUM_TOL);
});
run_args!(HarnessArgs, |a| {
    let d = HarnessOptions::<f64>::default();
    a.shift.get_or_insert(0.0);
    a.measure.get_or_insert_with(|| "uniform".into());
    a.mode.get_or_insert(HarnessModeArg::Cpd);
    a.probes.get_or_insert(d.random_probes);
    a.seed.get_or_insert(d.seed);
    a.tol.get_or_insert(DEFAULT_TOL);
});

fn execute<A: RunArgs>(name: &str, cli: A, f: impl FnOnce(&A) -> Result<Report>) -> Result<()> {
    let a = resolve(cli)?;
    let report = f(&a)?;
    let config = serde_json::to_value(&a).expect("flags serialize");
    let format = a.io().format.expect("defaults filled");
    emit(&render(name, &config, &report, format), a.io())
}

pub fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Classify(a) => execute("classify", a, classify),
        Command::Energy(a) => execute("energy", a, energy),
        Command::Mercer(a) => execute("mercer", a, mercer),
        Command::Sqrt(a) => execute("sqrt", a, sqrt),
        Command::Stolarsky(a) => execute("stolarsky", a, stolarsky),
        Command::CapDisc(a) => execute("cap-disc", a, cap_disc),
        Command::Gegenbauer(a) => execute("gegenbauer", a, gegenbauer),
        Command::Optimize(a) => execute("optimize", a, optimize),
        Command::Harness(a) => execute("harness", a, harness),
    }
}

fn num(x: f64) -> String {
    cell(&json!(x))
}

fn floats(v: &[f64]) -> Value {
    json!(v)
}

fn classify(a: &ClassifyArgs) -> Result<Report> {
    let space = parse::space(required(&a.space, "space")?)?;
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let r = classify_kernel(&k, &space, tolerance(a.tol)?)?;
    let mut json = r.to_json_value();
    json["n"] = json!(space.len());
    json["space_hash"] = json!(space.hash());
    let rows = scalar_rows(&json);
    Ok(Report::new(json).csv(vec!["quantity", "value"], rows))
}

fn energy(a: &EnergyArgs) -> Result<Report> {
    let space = parse::space(required(&a.space, "space")?)?;
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let gram = k.gram(&space)?;
    let mu = parse::measure(required(&a.measure, "measure")?, &space, &gram)?;
    let nu = a.nu.as_deref().map(|s| parse::measure(s, &space, &gram)).transpose()?;
    let r = gram.report(&mu, nu.as_ref())?;
    let inv = gram.invariance(&mu, gram.abs_tol(tolerance(a.tol)?))?;
    let json = json!({
        "energy": r.energy,
        "mixed": r.mixed,
        "potential": r.potential,
        "potential_min": r.potential_min,
        "potential_max": r.potential_max,
        "invariant": inv.invariant,
        "potential_spread": inv.spread,
        "weights": mu.weights(),
        "scale": gram.scale(),
    });
    let rows = (0..space.len())
        .map(|i| vec![i.to_string(), num(mu.weight(i)), num(r.potential[i])])
        .collect();
    Ok(Report::new(json).csv(vec!["node", "weight", "potential"], rows))
}

fn mercer(a: &MercerArgs) -> Result<Report> {
    let space = parse::space(required(&a.space, "space")?)?;
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let gram = k.gram(&space)?;
    let mu = parse::measure(required(&a.measure, "measure")?, &space, &gram)?;
    let d = mercer_decompose(&gram, &mu, tolerance(a.tol)?)?;
    let e = d.export();
    let json = json!({
        "eigenvalues": e.eigenvalues,
        "phi": d.phi,
        "support": e.support,
        "weights": e.weights,
        "rank": e.rank,
        "residual": e.residual,
        "trace_gap": d.trace_gap(&gram),
        "reconstruction_error": d.reconstruction_error(&gram),
        "orthonormality_error": d.orthonormality_error(),
    });
    let rows = e
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, l)| vec![j.to_string(), num(*l)])
        .collect();
    Ok(Report::new(json).csv(vec!["index", "eigenvalue"], rows))
}

fn sqrt(a: &SqrtArgs) -> Result<Report> {
    let space = parse::space(required(&a.space, "space")?)?;
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let gram = k.gram(&space)?;
    let mu = parse::measure(required(&a.measure, "measure")?, &space, &gram)?;
    let tol = tolerance(a.tol)?;
    let d = mercer_decompose(&gram, &mu, tol)?;
    let signs = a.signs.as_deref().map(parse::signs).transpose()?;
    let root = convolution_sqrt(&d, signs.as_deref(), tol)?;
    let table = root.table.to_rows();
    let json = json!({
        "support": root.support,
        "sign_choice": root.sign_choice,
        "table": table,
        "composition_error": root.composition_error(&gram),
    });
    let mut rows = Vec::new();
    for (a, &i) in root.support.iter().enumerate() {
        for (b, &j) in root.support.iter().enumerate() {
            rows.push(vec![i.to_string(), j.to_string(), num(table[a][b])]);
        }
    }
    Ok(Report::new(json).csv(vec!["i", "j", "k"], rows))
}

fn quadrature(m_h: Option<usize>, n_x: Option<usize>) -> Result<CapQuadrature> {
    let q = CapQuadrature {
        m_h: m_h.expect("defaults filled"),
        n_x: n_x.expect("defaults filled"),
    };
    if q.m_h == 0 || q.n_x == 0 {
        return Err(CliError::Usage("--m-h and --n-x must be positive".into()));
    }
    Ok(q)
}

fn stolarsky(a: &StolarskyArgs) -> Result<Report> {
    match a.mode.expect("defaults filled") {
        StolarskyMode::Generalized => {
            let space = parse::space(required(&a.space, "space")?)?;
            let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
            let gram = k.gram(&space)?;
            let mu = parse::measure(required(&a.measure, "measure")?, &space, &gram)?;
            let nu = parse::measure(required(&a.nu, "nu")?, &space, &gram)?;
            let r = generalized_stolarsky(&gram, &mu, &nu, tolerance(a.tol)?)?;
            let json = json!({
                "mode": "generalized",
                "d2": r.d2,
                "energy_gap": r.energy_gap,
                "residual": r.identity_residual,
                "cap_d2": r.cap_d2,
                "ratio_cd": r.ratio_cd,
                "quadrature": null,
                "shift_used": r.shift_used,
                "support_size": r.support_size,
            });
            let rows = scalar_rows(&json);
            Ok(Report::new(json).csv(vec!["quantity", "value"], rows))
        }
        StolarskyMode::Classical => {
            let specs = a
                .points
                .as_ref()
                .filter(|p| !p.is_empty())
                .ok_or_else(|| CliError::Usage("--points is required in classical mode".into()))?;
            let dim = a.dim.expect("defaults filled");
            let sets = specs
                .iter()
                .map(|s| parse::points(s, dim))
                .collect::<Result<Vec<_>>>()?;
            let q = quadrature(a.m_h, a.n_x)?;
            let (gaps, d2s, ratios, mean, spread) = if sets.len() >= 2 {
                let r = classical_ratio(&sets, q)?;
                (r.energy_gaps, r.cap_d2, r.ratios, r.mean, Some(r.spread))
            } else {
                let r = set_ratio(&sets[0], q)?;
                (vec![r.energy_gap], vec![r.cap_d2], vec![r.ratio], r.ratio, None)
            };
            let per_set: Vec<Value> = specs
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    json!({
                        "points": s,
                        "n": sets[i].len(),
                        "energy_gap": gaps[i],
                        "cap_d2": d2s[i],
                        "ratio": ratios[i],
                    })
                })
                .collect();
            let rows = specs
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    vec![s.clone(), sets[i].len().to_string(), num(gaps[i]), num(d2s[i]), num(ratios[i])]
                })
                .collect();
            let json = json!({
                "mode": "classical",
                "sets": per_set,
                "ratio_cd": mean,
                "spread": spread,
                "quadrature": q,
            });
            Ok(Report::new(json).csv(vec!["points", "n", "energy_gap", "cap_d2", "ratio"], rows))
        }
    }
}

fn cap_disc(a: &CapDiscArgs) -> Result<Report> {
    let pts = parse::points(required(&a.points, "points")?, a.dim.expect("defaults filled"))?;
    let q = quadrature(a.m_h, a.n_x)?;
    let d2 = cap_discrepancy(&pts, q)?;
    let json = json!({
        "cap_d2": d2,
        "n": pts.len(),
        "dim": pts[0].len(),
        "quadrature": q,
    });
    Ok(Report::new(json).csv(
        vec!["n", "dim", "M_h", "N_x", "cap_d2"],
        vec![vec![pts.len().to_string(), pts[0].len().to_string(), q.m_h.to_string(), q.n_x.to_string(), num(d2)]],
    ))
}

fn gegenbauer(a: &GegenbauerArgs) -> Result<Report> {
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let dim = a.dim.expect("defaults filled");
    if dim < 2 {
        return Err(CliError::Usage("--dim must be at least 2".into()));
    }
    let f = zonal_profile(&k)?;
    let lambda = GegenbauerSeries64::lambda_for_dim(dim);
    let s = gegenbauer_coeffs(&f, lambda, a.n_max.expect("defaults filled"), a.m_quad.expect("defaults filled"))?;
    let v = schoenberg_classify(&s, tolerance(a.tol)?);
    let json = json!({
        "lambda": s.lambda,
        "coeffs": floats(&s.coeffs),
        "truncation_error": s.truncation_error,
        "pd": v.pd,
        "cpd": v.cpd,
    });
    let rows = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| vec![n.to_string(), num(*c)])
        .collect();
    Ok(Report::new(json).csv(vec!["n", "coeff"], rows))
}

fn optimize(a: &OptimizeArgs) -> Result<Report> {
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let n = a.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    if let Some(g) = a.gtol {
        if !(g.is_finite() && g > 0.0) {
            return Err(CliError::Usage(format!("--gtol must be positive, got {g}")));
        }
    }
    let opts = OptimizeOptions {
        max_iters: a.max_iters.expect("defaults filled"),
        gtol: a.gtol,
        seed: a.seed.expect("defaults filled"),
    };
    let t = minimize_restarts(&k, n, a.dim.expect("defaults filled"), &opts, a.restarts.expect("defaults filled"))?;
    let continuum = match gap_vs_continuum(&k, &t.final_points, tolerance(a.tol)?) {
        Ok(g) => json!({"energy": g.energy, "continuum": g.continuum, "gap": g.gap}),
        Err(Error::Precondition(_) | Error::Unsupported(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let json = json!({
        "energy": t.final_energy(),
        "converged": t.converged,
        "grad_norm_final": t.grad_norm_final,
        "iterations": t.step_policy.len(),
        "rejected_steps": t.rejected_steps,
        "seed": t.seed,
        "points": t.final_points,
        "energies": t.iterates,
        "grad_norms": t.grad_norms,
        "continuum": continuum,
    });
    let rows = t
        .iterates
        .iter()
        .zip(&t.grad_norms)
        .enumerate()
        .map(|(i, (e, g))| vec![i.to_string(), num(*e), num(*g)])
        .collect();
    Ok(Report::new(json).csv(vec!["iter", "energy", "grad_norm"], rows))
}

fn harness(a: &HarnessArgs) -> Result<Report> {
    let space = parse::space(required(&a.space, "space")?)?;
    let k = parse::kernel(required(&a.kernel, "kernel")?, a.shift.unwrap_or_default())?;
    let gram = k.gram(&space)?;
    let mu = parse::measure(required(&a.measure, "measure")?, &space, &gram)?;
    let mode = match a.mode.expect("defaults filled") {
        HarnessModeArg::Cpd => HarnessMode::Cpd,
        HarnessModeArg::Pd => HarnessMode::Pd,
        HarnessModeArg::Cspd => HarnessMode::Cspd,
    };
    let opts = HarnessOptions {
        tol: tolerance(a.tol)?,
        random_probes: a.probes.expect("defaults filled"),
        seed: a.seed.expect("defaults filled"),
    };
    let r = equivalence_harness(&gram, &mu, mode, &opts)?;
    let rows = r
        .conditions
        .iter()
        .map(|c| vec![c.name.to_string(), c.holds.to_string(), c.margin.map(num).unwrap_or_default()])
        .collect();
    let mut json = serde_json::to_value(&r).expect("report serializes");
    json["all_true"] = json!(r.all_true());
    json["all_false"] = json!(r.all_false());
    Ok(Report::new(json).csv(vec!["condition", "holds", "margin"], rows))
}
