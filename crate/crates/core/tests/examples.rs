//! Small worked cases with answers known in closed form.

use invariance::definiteness::{
    am_inequality_gap, classify, convexity_scan, directional_local_min_test, equivalence_harness,
    gm_inequality_gap, potential_condition, HarnessMode, HarnessOptions, PotentialVerdict,
};
use invariance::domains::{fibonacci_points, gauss_gegenbauer, random_sphere_points, tetrahedron_points, SpaceFile};
use invariance::kernels::{equilibrium_measure, KernelFile};
use invariance::linalg::{helmert_basis, Matrix};
use invariance::optimize::{configuration_energy, gap_vs_continuum, minimize_config, OptimizeOptions};
use invariance::spectral::{convolution_sqrt, hs_apply, mercer_decompose};
use invariance::sphere::{
    addition_formula_check, gegenbauer_coeffs, gegenbauer_eval, schoenberg_classify, sphere_sqrt,
    GegenbauerSeries,
};
use invariance::stolarsky::{cap_discrepancy, cap_discrepancy_with_nodes, classical_ratio, generalized_stolarsky, l2_discrepancy, CapQuadrature};
use invariance::{
    DiscreteSpace, DiscreteSpace32, Error, Gram, KernelSpec, KernelSpec32, OptimizationTrace, SphereGenerator,
    WeightedMeasure, WeightedMeasure32,
};

type Space = DiscreteSpace<f64>;
type Measure = WeightedMeasure<f64>;

fn e1_pair() -> Space {
    DiscreteSpace::sphere(3, SphereGenerator::Explicit(vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0]])).unwrap()
}

/// `(C+1) δ_{−e1} − C δ_{e1}`.
fn signed_pair(s: &Space, c: f64) -> Measure {
    WeightedMeasure::new(s, vec![-c, c + 1.0]).unwrap()
}

fn half_ends(s: &Space) -> Measure {
    let n = s.len();
    let mut w = vec![0.0; n];
    w[0] = 0.5;
    w[n - 1] = 0.5;
    WeightedMeasure::new(s, w).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn spaces_and_measures() {
    let h = DiscreteSpace::<f64>::hamming(1).unwrap();
    let mut pts: Vec<f64> = h.points().map(|p| p[0]).collect();
    pts.sort_by(f64::total_cmp);
    assert_eq!(pts, vec![-1.0, 1.0]);

    let fib = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Fibonacci(100)).unwrap();
    // brute force rather than the space's own helper
    let mut min = f64::INFINITY;
    for i in 0..100 {
        for j in (i + 1)..100 {
            let d: f64 = fib.point(i).iter().zip(fib.point(j)).map(|(a, b)| (a - b).powi(2)).sum();
            min = min.min(d.sqrt());
        }
    }
    assert!(min > 0.1, "{min}");

    let s = e1_pair();
    assert_eq!(s.len(), 2);
    let mu = signed_pair(&s, 1.0);
    assert!(mu.is_mass_one() && !mu.is_probability());
    let u = WeightedMeasure::uniform(&fib);
    assert!(u.is_probability() && close(u.mass(), 1.0, 1e-14));
    let d = u.sub(&WeightedMeasure::dirac(&fib, 3).unwrap()).unwrap();
    assert!(d.is_mean_zero());
}

#[test]
fn gauss_gegenbauer_rules() {
    let q = gauss_gegenbauer::<f64>(1, 0.5).unwrap();
    assert!(q.nodes[0].abs() < 1e-15 && close(q.weights[0], 2.0, 1e-14));

    let q = gauss_gegenbauer::<f64>(8, 0.5).unwrap();
    let m4: f64 = q.nodes.iter().zip(&q.weights).map(|(t, w)| w * t.powi(4)).sum();
    assert!(close(m4, 0.4, 1e-13), "{m4}");
    for lambda in [0.5, 1.0, 2.5] {
        let q = gauss_gegenbauer::<f64>(7, lambda).unwrap();
        let mut sorted = q.nodes.clone();
        sorted.sort_by(f64::total_cmp);
        for i in 0..7 {
            assert!(close(sorted[i], -sorted[6 - i], 1e-14));
        }
    }
}

#[test]
fn energies_by_hand() {
    let s = e1_pair();
    let c = 2.0;
    let k = KernelSpec::coordinate_sum().with_shift(c);
    assert!(close(k.gram(&s).unwrap().energy(&signed_pair(&s, c)).unwrap(), -3.0 * c - 2.0, 1e-12));

    let line = DiscreteSpace::<f64>::interval(3).unwrap();
    let g = KernelSpec::distance().gram(&line).unwrap();
    let mu = half_ends(&line);
    assert!(close(g.energy(&mu).unwrap(), 1.0, 1e-15));
    for u in g.potential(&mu).unwrap() {
        assert!(close(u, 1.0, 1e-15));
    }
    let inv = g.invariance(&mu, 1e-14).unwrap();
    assert!(inv.invariant && inv.spread <= 1e-14);

    let konst = KernelSpec::constant(1.5).gram(&line).unwrap();
    let a = mu.scaled(2.0);
    let b = WeightedMeasure::dirac(&line, 1).unwrap().scaled(-3.0);
    assert!(close(konst.mixed(&a, &b).unwrap(), 1.5 * 2.0 * -3.0, 1e-14));

    // δ_{e1} against δ_{−e1} under ‖x − y‖
    let dist = KernelSpec::distance().gram(&s).unwrap();
    let (p, q) = (WeightedMeasure::dirac(&s, 0).unwrap(), WeightedMeasure::dirac(&s, 1).unwrap());
    assert!(close(dist.linearization_gap(&p, &q).unwrap(), -4.0, 1e-14));
    assert!(!dist.invariance(&p, 1e-9).unwrap().invariant);

    let tet = DiscreteSpace::<f64>::tetrahedron().unwrap();
    let u = WeightedMeasure::uniform(&tet);
    for k in [KernelSpec::polynomial(vec![0.2, -1.0, 3.0]), KernelSpec::neg_distance()] {
        let g = k.gram(&tet).unwrap();
        assert!(g.invariance(&u, 1e-13).unwrap().invariant);
        let nu = WeightedMeasure::new(&tet, vec![2.0, -0.5, 0.25, -0.75]).unwrap();
        assert!(close(g.mixed(&u, &nu).unwrap(), g.energy(&u).unwrap(), 1e-13));
    }
}

#[test]
fn definiteness_examples() {
    let s = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 8, seed: 5 }).unwrap();
    let r = classify(&KernelSpec::neg_distance().gram(&s).unwrap(), 1e-9).unwrap();
    assert!(r.cpd && !r.pd);
    let w = r.witness_violation.unwrap();
    // the witness is mostly one-signed
    let pos: f64 = w.weights().iter().filter(|&&x| x > 0.0).sum();
    let neg: f64 = w.weights().iter().filter(|&&x| x < 0.0).sum();
    assert!(pos.abs() > 4.0 * neg.abs() || neg.abs() > 4.0 * pos.abs());

    let r = classify(&KernelSpec::constant(1.0).gram(&s).unwrap(), 1e-9).unwrap();
    assert!(r.pd && !r.strict_pd);

    let three = DiscreteSpace::sphere(
        3,
        SphereGenerator::Explicit(vec![vec![1.0, 0.0, 0.0], vec![-1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
    )
    .unwrap();
    let r = classify(&KernelSpec::coordinate_sum().gram(&three).unwrap(), 1e-9).unwrap();
    assert!(r.cpd && !r.pd_mod_constant);

    let pair = e1_pair();
    let g = KernelSpec::coordinate_sum().with_shift(1.0).gram(&pair).unwrap();
    let mu = signed_pair(&pair, 1.0);
    assert!(matches!(gm_inequality_gap(&g, &mu, &mu, 1e-9), Err(Error::NegativeSelfEnergy { .. })));
    assert!(close(am_inequality_gap(&g, &mu, &mu).unwrap(), 0.0, 1e-15));
}

/// `G = a 11ᵀ/n + Q Λ Qᵀ` on the Helmert complement, so uniform weights are invariant.
fn centered_gram(space: &Space, a: f64, lambdas: &[f64]) -> Gram<f64> {
    let n = space.len();
    let q = helmert_basis::<f64>(n);
    let m = Matrix::from_fn(n, n, |i, j| {
        a / n as f64 + (0..n - 1).map(|k| lambdas[k] * q[(i, k)] * q[(j, k)]).sum::<f64>()
    });
    Gram::new(m, space.clone())
}

#[test]
fn inequality_examples() {
    let s = DiscreteSpace::<f64>::tetrahedron().unwrap();
    let g = centered_gram(&s, 1.0, &[-1.0, 0.5, 0.5]);
    let r = classify(&g, 1e-9).unwrap();
    assert!(!r.cpd);
    // split the violating direction into two probability measures
    let w = r.witness_violation.unwrap();
    let u = WeightedMeasure::uniform(&s);
    let t = 0.24 / w.weights().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let m1 = u.combine(1.0, &w, t).unwrap();
    let m2 = u.combine(1.0, &w, -t).unwrap();
    assert!(m1.is_probability() && m2.is_probability());
    assert!(am_inequality_gap(&g, &m1, &m2).unwrap() < 0.0);
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    assert!(convexity_scan(&g, &m1, &m2, &grid).unwrap().min_gap < 0.0);

    let pd = KernelSpec::polynomial(vec![1.0, 0.5, 1.0]).gram(&s).unwrap();
    let a = WeightedMeasure::new(&s, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
    let b = WeightedMeasure::new(&s, vec![0.7, 0.1, 0.1, 0.1]).unwrap();
    assert!(gm_inequality_gap(&pd, &a, &b, 1e-9).unwrap() >= 0.0);
    let scan = convexity_scan(&pd, &a, &b, &[0.0, 1.0]).unwrap();
    assert!(scan.min_gap.abs() < 1e-15);

    let nd = KernelSpec::neg_distance().gram(&s).unwrap();
    assert!(convexity_scan(&nd, &a, &b, &grid).unwrap().min_gap >= -1e-14);
    let pc = potential_condition(&nd, &u, 1e-12).unwrap();
    assert_eq!(pc.verdict, PotentialVerdict::InvariantFullSupport);

    let line = DiscreteSpace::<f64>::interval(3).unwrap();
    let g = KernelSpec::distance().gram(&line).unwrap();
    // weight zero at the middle node, yet its potential matches
    let pc = potential_condition(&g, &half_ends(&line), 1e-12).unwrap();
    assert_eq!(pc.verdict, PotentialVerdict::InvariantFullSupport);

    let pair = e1_pair();
    let dist = KernelSpec::distance().gram(&pair).unwrap();
    let p = WeightedMeasure::dirac(&pair, 0).unwrap();
    // δ_{e1} minimizes the nonnegative distance energy, so it passes there
    assert_eq!(potential_condition(&dist, &p, 1e-12).unwrap().verdict, PotentialVerdict::ConstOnSuppGeqElsewhere);
    let neg = KernelSpec::neg_distance().gram(&pair).unwrap();
    assert_eq!(potential_condition(&neg, &p, 1e-12).unwrap().verdict, PotentialVerdict::Fails);
    let q = WeightedMeasure::dirac(&pair, 1).unwrap();
    let t = directional_local_min_test(&neg, &p, &[q], 1.0, 8, 1e-12).unwrap();
    assert!(!t.passed && t.worst == Some(0));
    let t = directional_local_min_test(&neg, &p, std::slice::from_ref(&p), 1.0, 8, 1e-12).unwrap();
    assert!(t.passed && t.degenerate == 1);

    let oct = DiscreteSpace::<f64>::octahedron().unwrap();
    let g = KernelSpec::neg_distance().gram(&oct).unwrap();
    let mu = equilibrium_measure(&g).unwrap();
    let probes: Vec<Measure> = (0..6).map(|i| WeightedMeasure::dirac(&oct, i).unwrap()).collect();
    assert!(directional_local_min_test(&g, &mu, &probes, 1.0, 8, 1e-12).unwrap().passed);
}

#[test]
fn harness_examples() {
    let opts = HarnessOptions::default();
    let oct = DiscreteSpace::<f64>::octahedron().unwrap();
    let u = WeightedMeasure::uniform(&oct);
    let g = KernelSpec::neg_distance().with_shift(3.0).gram(&oct).unwrap();
    let r = equivalence_harness(&g, &u, HarnessMode::Cpd, &opts).unwrap();
    assert!(r.agree && r.values().iter().all(|&v| v), "{r:?}");

    // x₁ + y₁ against uniform weights on {e1, −e1} has potential x₁, not a constant
    let pair = e1_pair();
    let g = KernelSpec::coordinate_sum().gram(&pair).unwrap();
    let r = equivalence_harness(&g, &WeightedMeasure::uniform(&pair), HarnessMode::Cpd, &opts);
    assert!(matches!(r, Err(Error::Precondition(_))), "{r:?}");

    let tet = DiscreteSpace::<f64>::tetrahedron().unwrap();
    let g = centered_gram(&tet, 1.0, &[-1.0, 0.5, 0.5]);
    let r = equivalence_harness(&g, &WeightedMeasure::uniform(&tet), HarnessMode::Cpd, &opts).unwrap();
    assert!(r.agree && r.values().iter().all(|&v| !v), "{r:?}");

    let g = KernelSpec::polynomial(vec![1.0, 1.0, 1.0]).gram(&oct).unwrap();
    let r = equivalence_harness(&g, &u, HarnessMode::Pd, &opts).unwrap();
    assert!(r.agree && r.values().iter().all(|&v| v), "{r:?}");
    let g = KernelSpec::neg_distance().gram(&oct).unwrap();
    let r = equivalence_harness(&g, &u, HarnessMode::Pd, &opts).unwrap();
    assert!(r.agree && r.values().iter().all(|&v| !v), "{r:?}");

    let g = KernelSpec::neg_distance().with_shift(3.0).gram(&oct).unwrap();
    let r = equivalence_harness(&g, &u, HarnessMode::Cspd, &opts).unwrap();
    assert!(r.agree && r.values().iter().all(|&v| v), "{r:?}");

    let line = DiscreteSpace::<f64>::interval(4).unwrap();
    let g = KernelSpec::neg_distance().gram(&line).unwrap();
    assert!(equivalence_harness(&g, &WeightedMeasure::uniform(&line), HarnessMode::Cpd, &opts).is_err());
}

#[test]
fn mercer_examples() {
    let s = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 7, seed: 2 }).unwrap();
    let g = KernelSpec::constant(1.0).gram(&s).unwrap();
    let m = mercer_decompose(&g, &WeightedMeasure::uniform(&s), 1e-12).unwrap();
    assert_eq!(m.rank, 1);
    assert!(close(m.eigenvalues[0], 1.0, 1e-13));
    assert!(m.phi[0].iter().all(|p| close(p.abs(), 1.0, 1e-12)));

    let oct = DiscreteSpace::<f64>::octahedron().unwrap();
    let u = WeightedMeasure::uniform(&oct);
    let g = KernelSpec::polynomial(vec![0.0, 1.0]).gram(&oct).unwrap();
    let m = mercer_decompose(&g, &u, 1e-12).unwrap();
    assert_eq!(m.rank, 3);
    for l in &m.eigenvalues[..3] {
        assert!(close(*l, 1.0 / 3.0, 1e-13));
    }
    // each eigenfunction is a combination of coordinate functions, so odd
    for phi in &m.phi[..3] {
        for (i, j) in [(0, 1), (2, 3), (4, 5)] {
            assert!(close(phi[i], -phi[j], 1e-12));
        }
    }

    let g = KernelSpec::neg_distance().gram(&oct).unwrap();
    let m = mercer_decompose(&g, &u, 1e-12).unwrap();
    let (j, dev) = m.constant_eigenfunction().unwrap();
    assert!(dev < 1e-12);
    assert!(close(m.eigenvalues[j], g.energy(&u).unwrap(), 1e-12));
    let ones = vec![1.0; 6];
    let t1 = hs_apply(&g, &u, &ones).unwrap();
    assert!(t1.iter().all(|&v| close(v, g.energy(&u).unwrap(), 1e-13)));
    let psi = vec![0.3, -1.0, 2.0, 0.0, 0.5, -0.25];
    let direct = hs_apply(&g, &u, &psi).unwrap();
    let spectral = m.apply(&psi).unwrap();
    for (a, b) in direct.iter().zip(&spectral) {
        assert!(close(*a, *b, 1e-9));
    }
}

#[test]
fn square_root_examples() {
    let oct = DiscreteSpace::<f64>::octahedron().unwrap();
    let u = WeightedMeasure::uniform(&oct);
    let g = KernelSpec::constant(1.0).gram(&oct).unwrap();
    let k = convolution_sqrt(&mercer_decompose(&g, &u, 1e-12).unwrap(), None, 1e-9).unwrap();
    assert!(k.table.as_slice().iter().all(|v| close(v.abs(), 1.0, 1e-12)));

    let g = KernelSpec::polynomial(vec![0.0, 0.0, 1.0]).gram(&oct).unwrap();
    let m = mercer_decompose(&g, &u, 1e-12).unwrap();
    let a = convolution_sqrt(&m, None, 1e-9).unwrap();
    let signs: Vec<i8> = (0..m.len()).map(|j| if j % 2 == 0 { -1 } else { 1 }).collect();
    let b = convolution_sqrt(&m, Some(&signs), 1e-9).unwrap();
    assert!(a.composition_error(&g) <= 1e-10);
    let (ca, cb) = (a.compose(), b.compose());
    for (x, y) in ca.as_slice().iter().zip(cb.as_slice()) {
        assert!(close(*x, *y, 1e-12));
    }

    // d² against ν − μ expanded as a quadratic form in G
    let g = KernelSpec::polynomial(vec![1.0, 1.0]).gram(&oct).unwrap();
    let k = convolution_sqrt(&mercer_decompose(&g, &u, 1e-12).unwrap(), None, 1e-9).unwrap();
    let nu = WeightedMeasure::new(&oct, vec![0.4, 0.1, 0.05, 0.15, 0.2, 0.1]).unwrap();
    let d2 = l2_discrepancy(&k, &u, &nu).unwrap();
    assert!(close(d2, g.energy(&nu.sub(&u).unwrap()).unwrap(), 1e-13));
    assert!(l2_discrepancy(&k, &u, &u).unwrap().abs() < 1e-15);

    let c1 = KernelSpec::constant(1.0).gram(&oct).unwrap();
    let k1 = convolution_sqrt(&mercer_decompose(&c1, &u, 1e-12).unwrap(), None, 1e-9).unwrap();
    assert!(l2_discrepancy(&k1, &u, &nu).unwrap().abs() < 1e-15);
}

#[test]
fn stolarsky_identity_examples() {
    let oct = DiscreteSpace::<f64>::octahedron().unwrap();
    let u = WeightedMeasure::uniform(&oct);
    let g = KernelSpec::neg_distance().with_shift(2.0).gram(&oct).unwrap();
    let r = generalized_stolarsky(&g, &u, &WeightedMeasure::dirac(&oct, 0).unwrap(), 1e-9).unwrap();
    assert!(r.identity_residual.abs() <= 1e-10, "{r:?}");
    // both sides at δ_{e1}: I(δ) = 2, I(μ) = 2 − (4√2 + 2)/6
    assert!(close(r.energy_gap, (4.0 * 2f64.sqrt() + 2.0) / 6.0, 1e-12));
    let r = generalized_stolarsky(&g, &u, &u, 1e-9).unwrap();
    assert!(r.d2.abs() < 1e-14 && r.energy_gap.abs() < 1e-14);

    let fib = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Fibonacci(100)).unwrap();
    let g = KernelSpec::neg_distance().gram(&fib).unwrap();
    let mu = equilibrium_measure(&g).unwrap();
    let atoms: Vec<(usize, f64)> = (0..100).step_by(10).map(|i| (i, 0.1)).collect();
    let omega = WeightedMeasure::from_atoms(&fib, &atoms).unwrap();
    let r = generalized_stolarsky(&g, &mu, &omega, 1e-9).unwrap();
    assert!(r.identity_residual.abs() <= 1e-8 * g.scale(), "{r:?}");
}

#[test]
fn cap_discrepancy_examples() {
    let quad = CapQuadrature { m_h: 16, n_x: 1024 };
    let single = |p: Vec<f64>| cap_discrepancy(&[p], quad).unwrap();
    let a = single(vec![0.0, 0.0, 1.0]);
    let b = single(vec![0.6, 0.0, 0.8]);
    assert!(close(a, b, 1e-3 * a), "{a} {b}");
    let pair = cap_discrepancy(&[vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]], quad).unwrap();
    assert!(pair < a);

    // a rotation about z by 0.7 rad
    let rot = |p: &Vec<f64>| {
        let (s, c) = 0.7f64.sin_cos();
        vec![c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]]
    };
    let set = random_sphere_points::<f64>(3, 8, 4);
    let turned: Vec<Vec<f64>> = set.iter().map(rot).collect();
    // rotating the cap centres along with the points leaves every term unchanged
    let nodes = fibonacci_points::<f64>(3, 512).unwrap();
    let turned_nodes: Vec<Vec<f64>> = nodes.iter().map(rot).collect();
    let d0 = cap_discrepancy_with_nodes(&set, 16, &nodes).unwrap();
    let d1 = cap_discrepancy_with_nodes(&turned, 16, &turned_nodes).unwrap();
    assert!((d0 - d1).abs() <= 1e-12 * d0, "{d0} {d1}");
    let r = classical_ratio(&[set.clone(), turned], quad).unwrap();
    assert!(r.spread <= 1e-3, "{r:?}");

    let other = random_sphere_points::<f64>(3, 8, 9);
    let r = classical_ratio(&[set, other], quad).unwrap();
    assert!(r.spread <= 1e-3, "{r:?}");

    let square: Vec<Vec<f64>> = (0..4)
        .map(|k| {
            let t = std::f64::consts::FRAC_PI_2 * k as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    let circle = classical_ratio(&[square, random_sphere_points(2, 4, 1)], quad).unwrap();
    assert!(circle.spread <= 1e-3, "{circle:?}");
}

#[test]
fn gegenbauer_examples() {
    assert!(close(gegenbauer_eval(0, 0.5, 0.3).unwrap(), 1.0, 1e-15));
    assert!(close(gegenbauer_eval(1, 0.5, 0.5).unwrap(), 0.5, 1e-15));
    assert!(close(gegenbauer_eval(2, 0.5, 1.0).unwrap(), 1.0, 1e-15));
    assert!(close(gegenbauer_eval(2, 0.5, 0.3).unwrap(), (3.0 * 0.09 - 1.0) / 2.0, 1e-15));

    let t = gegenbauer_coeffs(|t: f64| t, 0.5, 12, 24).unwrap();
    assert!(close(t.coeffs[1], 1.0 / 3.0, 1e-13));
    assert!(t.coeffs.iter().enumerate().all(|(n, &c)| n == 1 || c.abs() < 1e-13));
    let one = gegenbauer_coeffs(|_: f64| 1.0, 0.5, 12, 24).unwrap();
    assert!(close(one.coeffs[0], 1.0, 1e-14) && one.coeffs[1..].iter().all(|c| c.abs() < 1e-13));

    let dist = gegenbauer_coeffs(|t: f64| (2.0 - 2.0 * t).max(0.0).sqrt(), 0.5, 24, 200).unwrap();
    assert!(dist.coeffs[0] > 0.0);
    assert!(dist.coeffs[1..].iter().all(|&c| c < 0.0), "{:?}", dist.coeffs);

    let v = schoenberg_classify(&t, 1e-9);
    assert_eq!(v.pd, Some(true));
    let neg = gegenbauer_coeffs(|t: f64| -(2.0 - 2.0 * t).max(0.0).sqrt(), 0.5, 64, 400).unwrap();
    let v = schoenberg_classify(&neg, 1e-4);
    assert_eq!((v.cpd, v.pd), (Some(true), Some(false)));
    let v = schoenberg_classify(&gegenbauer_coeffs(|t: f64| -t, 0.5, 12, 24).unwrap(), 1e-9);
    assert_eq!(v.cpd, Some(false));

    let f = sphere_sqrt(&t, 1e-9).unwrap();
    assert!(close(f.coeffs[1], 1.0 / 3f64.sqrt(), 1e-13));
    let f = sphere_sqrt(&GegenbauerSeries::new(0.5, vec![1.0]), 1e-9).unwrap();
    assert!(close(f.eval(0.2).unwrap(), 1.0, 1e-15));

    let fib = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Fibonacci(64)).unwrap();
    assert!(addition_formula_check(0, &fib).unwrap() <= 1e-12);
    assert!(addition_formula_check(1, &fib).unwrap() <= 1e-12);
    assert!(addition_formula_check(2, &fib).unwrap() <= 1e-10);
}

#[test]
fn optimizer_examples() {
    let k = KernelSpec::neg_distance();
    let t = minimize_config(&k, 2, 3, &OptimizeOptions::default()).unwrap();
    assert!(close(t.final_energy(), -1.0, 1e-10));

    let t = minimize_config(&k, 3, 2, &OptimizeOptions { seed: 4, ..Default::default() }).unwrap();
    let p = &t.final_points;
    for i in 0..3 {
        let j = (i + 1) % 3;
        let ip = p[i][0] * p[j][0] + p[i][1] * p[j][1];
        assert!(close(ip, -0.5, 1e-6), "{ip}");
    }

    let tet = tetrahedron_points::<f64>();
    let g = gap_vs_continuum(&k, &tet, 1e-4).unwrap();
    // E = −(12/16)·√(8/3) against the continuum value −4/3
    assert!(close(g.gap, 4.0 / 3.0 - 0.75 * (8.0f64 / 3.0).sqrt(), 1e-8), "{g:?}");

    let opt = minimize_config(&k, 12, 3, &OptimizeOptions { seed: 1, ..Default::default() }).unwrap();
    let opt_gap = gap_vs_continuum(&k, &opt.final_points, 1e-4).unwrap().gap;
    let rnd_gap = gap_vs_continuum(&k, &random_sphere_points(3, 12, 1), 1e-4).unwrap().gap;
    assert!(rnd_gap > opt_gap);

    let gaps: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&n| {
            let pts = fibonacci_points::<f64>(3, n).unwrap();
            gap_vs_continuum(&k, &pts, 1e-4).unwrap().gap
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(close(configuration_energy(&k, &tet).unwrap(), -(3.0 * (8.0f64 / 3.0).sqrt()) / 4.0, 1e-12));
}

#[test]
fn json_round_trips() {
    let s = DiscreteSpace::<f64>::sphere(3, SphereGenerator::Random { n: 5, seed: 3 }).unwrap();
    let back: Space = SpaceFile::from_json(&SpaceFile::from_space(&s).to_json().unwrap()).unwrap().to_space().unwrap();
    assert_eq!(back, s);

    let mu = WeightedMeasure::new(&s, vec![0.1, 0.2, 0.3, 0.15, 0.25]).unwrap();
    let f = SpaceFile::from_json(&SpaceFile::from_measure(&mu).to_json().unwrap()).unwrap();
    assert_eq!(f.to_measure::<f64>().unwrap(), mu);

    for k in [
        KernelSpec::neg_distance().with_shift(1.25),
        KernelSpec::riesz(0.5).unwrap(),
        KernelSpec::polynomial(vec![1.0, -2.0, 0.5]),
        KernelSpec::gegenbauer(GegenbauerSeries::new(0.5, vec![0.0, 1.0])),
    ] {
        let back: KernelSpec<f64> = KernelFile::from_json(&KernelFile::from_spec(&k).to_json().unwrap())
            .unwrap()
            .to_spec()
            .unwrap();
        assert_eq!(back, k);
    }

    let series = GegenbauerSeries::new(1.0, vec![0.5, -0.25, 0.125]);
    assert_eq!(GegenbauerSeries::from_json(&series.to_json().unwrap()).unwrap(), series);

    let t = minimize_config(&KernelSpec::neg_distance(), 4, 3, &OptimizeOptions { max_iters: 20, ..Default::default() }).unwrap();
    let back: OptimizationTrace<f64> = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}

#[test]
fn single_precision() {
    let oct = DiscreteSpace32::octahedron().unwrap();
    let u = WeightedMeasure32::uniform(&oct);
    let g = KernelSpec32::neg_distance().gram(&oct).unwrap();
    let r = classify(&g, 1e-5).unwrap();
    assert!(r.cpd && !r.pd);
    let m = mercer_decompose(&g, &u, 1e-6).unwrap();
    assert!(m.trace_gap(&g).abs() < 1e-5);
    let shifted = g.shifted(2.0);
    let r = generalized_stolarsky(&shifted, &u, &WeightedMeasure32::dirac(&oct, 2).unwrap(), 1e-5).unwrap();
    assert!(r.identity_residual.abs() < 1e-4, "{r:?}");
    let t = minimize_config(&KernelSpec32::neg_distance(), 4, 3, &OptimizeOptions::default()).unwrap();
    assert!((t.final_energy() + (8.0f32 / 3.0).sqrt() * 0.75).abs() < 1e-4);
}
