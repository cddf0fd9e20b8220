//! Named verification suites producing machine-readable reports; shared by
//! the CLI `verify` subcommand and the acceptance tests.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::Serialize;

use crate::cases::{make_case, ManufacturedLoad, TimeProfile};
use crate::eigen::smallest_generalized_eigenvalue;
use crate::error::{Result, ShellError};
use crate::geometry::{
    eval_frame, eval_metrics3d, loglog_slope, verify_expansions, Chart, Rect,
};
use crate::material::{
    elastic_equivalent_tensor, elastic_membrane_tensor, tensor2d, tensor3d,
    tensor3d_limit, MaterialParams, TensorKind2d, TensorKind3d,
};
use crate::memory::{solve_transient, verify_closure_ode, Scheme};
use crate::shell2d::{self, NormKind, ShellModel};

/// Seed of every randomized parameter sweep in the test configuration.
pub const SWEEP_SEED: u64 = 1729;

/// How a measured value is compared with its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparator {
    LessEq,
    GreaterEq,
}

/// One measured property with its tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub comparator: Comparator,
    pub pass: bool,
}

impl CheckRecord {
    pub fn le(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            value,
            threshold,
            comparator: Comparator::LessEq,
            pass: value <= threshold,
        }
    }

    pub fn ge(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            value,
            threshold,
            comparator: Comparator::GreaterEq,
            pass: value >= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, records: Vec<CheckRecord>) -> Self {
        let pass = records.iter().all(|r| r.pass);
        SuiteReport { suite: suite.into(), records, pass }
    }
}

/// Runs a named suite: `geometry`, `tensors`, `closure`, `korn` or
/// `manufactured`.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    match name {
        "geometry" => geometry_suite(),
        "tensors" => tensor_suite(),
        "closure" => closure_suite(),
        "korn" => korn_suite(),
        "manufactured" => manufactured_suite(),
        other => Err(ShellError::UnknownSuite(other.into())),
    }
}

pub const SUITES: [&str; 5] = ["geometry", "tensors", "closure", "korn", "manufactured"];

fn benchmark_charts() -> Vec<(&'static str, Chart)> {
    vec![
        ("flat_plate", Chart::FlatPlate { rect: Rect::unit() }),
        ("cylinder", Chart::Cylinder { radius: 1.0, rect: Rect::new(0.0, 1.5, 0.0, 1.0) }),
        ("paraboloid", Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) }),
    ]
}

fn x3_samples() -> Vec<f64> {
    vec![-0.9, -0.4, 0.3, 0.8]
}

/// Expansion orders of the scaled symbols plus frame identities against
/// finite differences.
pub fn geometry_suite() -> Result<SuiteReport> {
    let mut records = Vec::new();

    // expansion slopes on the paraboloid: stated orders {1, 2, 1, 2}
    let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
    let ys: Vec<[f64; 2]> = chart
        .rect()
        .lattice(4, 4)
        .into_iter()
        .filter(|y| y[0].abs() > 0.05 || y[1].abs() > 0.05)
        .collect();
    let report = verify_expansions(&chart, &ys, &x3_samples(), &[1e-1, 1e-2, 1e-3])?;
    for entry in &report.entries {
        let slope = entry.slope.unwrap_or(entry.stated_order);
        records.push(CheckRecord::le(
            format!("paraboloid slope deviation: {}", entry.name),
            (slope - entry.stated_order).abs(),
            0.2,
        ));
    }

    // frame quantities vs. central finite differences of the chart map
    let h = 1e-5;
    for (name, chart) in benchmark_charts() {
        let r = chart.rect();
        let mut worst: f64 = 0.0;
        let mut worst_inv: f64 = 0.0;
        for &frac in &[[0.2, 0.3], [0.5, 0.55], [0.8, 0.7]] {
            let y = [r.a1 + frac[0] * r.len1(), r.a2 + frac[1] * r.len2()];
            let f = eval_frame(&chart, y)?;
            worst_inv = worst_inv.max(f.invariant_residual());
            let d1 = |a: usize, p: [f64; 2]| {
                let mut yp = p;
                let mut ym = p;
                yp[a] += h;
                ym[a] -= h;
                (chart.point(yp) - chart.point(ym)) / (2.0 * h)
            };
            let a1 = d1(0, y);
            let a2 = d1(1, y);
            let a3 = a1.cross(&a2).normalize();
            let scale = f.a_cov.norm().max(1.0);
            worst = worst.max((a1 - f.a_vec[0]).norm() / scale);
            worst = worst.max((a2 - f.a_vec[1]).norm() / scale);
            for alpha in 0..2 {
                for beta in 0..2 {
                    let mut yp = y;
                    let mut ym = y;
                    yp[beta] += h;
                    ym[beta] -= h;
                    let da = (d1(alpha, yp) - d1(alpha, ym)) / (2.0 * h);
                    let bscale = f.b_cov.norm().max(1.0);
                    worst = worst.max((a3.dot(&da) - f.b_cov[(alpha, beta)]).abs() / bscale);
                }
            }
        }
        records.push(CheckRecord::le(format!("{name}: frame vs finite differences"), worst, 1e-6));
        records.push(CheckRecord::le(format!("{name}: frame invariants"), worst_inv, 1e-12));
    }

    // structural zeros and positivity of g(eps)
    let mut worst_zero: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    for (_, chart) in benchmark_charts() {
        for &y in chart.rect().lattice(4, 4).iter() {
            for &x3 in &x3_samples() {
                let m = eval_metrics3d(&chart, y, x3, 0.1)?;
                for alpha in 0..2 {
                    worst_zero = worst_zero.max(m.christoffel[2][alpha][2].abs());
                }
                for p in 0..3 {
                    worst_zero = worst_zero.max(m.christoffel[p][2][2].abs());
                }
                min_det = min_det.min(m.det_g);
            }
        }
    }
    records.push(CheckRecord::le("structural zeros of Gamma(eps)", worst_zero, 0.0));
    records.push(CheckRecord::ge("min det g(eps) over lattice", min_det, 1e-10));

    Ok(SuiteReport::new("geometry", records))
}

fn material_sweep(n: usize) -> Vec<MaterialParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    (0..n)
        .map(|_| {
            MaterialParams::new(
                rng.random_range(0.0..4.0),
                rng.random_range(0.05..4.0),
                rng.random_range(0.05..4.0),
                rng.random_range(0.05..4.0),
            )
            .expect("sweep ranges satisfy the material constraints")
        })
        .collect()
}

/// Tensor symmetries, ellipticity, thin limits and the steady-state
/// elastic equivalence, over a fixed-seed material sweep.
pub fn tensor_suite() -> Result<SuiteReport> {
    let mut records = Vec::new();
    let sweep = material_sweep(100);

    let mut sym_res: f64 = 0.0;
    let mut min_a = f64::INFINITY;
    let mut min_b = f64::INFINITY;
    let mut min_c = f64::INFINITY;
    let mut steady_res: f64 = 0.0;
    for (_, chart) in benchmark_charts() {
        let r = chart.rect();
        for &frac in &[[0.25, 0.4], [0.7, 0.8]] {
            let y = [r.a1 + frac[0] * r.len1(), r.a2 + frac[1] * r.len2()];
            let frame = eval_frame(&chart, y)?;
            for m in &sweep {
                let a = tensor2d(TensorKind2d::Stiffness, m, &frame)?;
                let b = tensor2d(TensorKind2d::Viscosity, m, &frame)?;
                let c = tensor2d(TensorKind2d::Memory, m, &frame)?;
                sym_res = sym_res
                    .max(a.symmetry_residual())
                    .max(b.symmetry_residual())
                    .max(c.symmetry_residual());
                min_a = min_a.min(a.min_eigenvalue());
                min_b = min_b.min(b.min_eigenvalue());
                min_c = min_c.min(c.min_eigenvalue());
                let eq = elastic_equivalent_tensor(m, &frame)?;
                let want = elastic_membrane_tensor(m, &frame);
                let scale = want.frobenius();
                let mut diff = eq;
                for al in 0..2 {
                    for be in 0..2 {
                        for si in 0..2 {
                            for ta in 0..2 {
                                diff.c[al][be][si][ta] -= want.c[al][be][si][ta];
                            }
                        }
                    }
                }
                steady_res = steady_res.max(diff.frobenius() / scale);
            }
        }
    }
    records.push(CheckRecord::le("2D tensor symmetry residual", sym_res, 1e-12));
    records.push(CheckRecord::ge("min eigenvalue of stiffness tensor over sweep", min_a, 1e-10));
    records.push(CheckRecord::ge("min eigenvalue of viscosity tensor over sweep", min_b, 1e-10));
    records.push(CheckRecord::ge("min eigenvalue of memory tensor over sweep", min_c, -1e-13));
    records.push(CheckRecord::le("steady-state elastic equivalence", steady_res, 1e-12));

    // 3D: ellipticity at sample points, zero components, limits, slopes
    let mut min_a3 = f64::INFINITY;
    let mut min_b3 = f64::INFINITY;
    let mut zero_res: f64 = 0.0;
    for (_, chart) in benchmark_charts() {
        let r = chart.rect();
        let y = [r.a1 + 0.4 * r.len1(), r.a2 + 0.3 * r.len2()];
        for m in sweep.iter().take(25) {
            for &x3 in &[-0.8, 0.5] {
                let g = eval_metrics3d(&chart, y, x3, 0.1)?;
                let a3t = tensor3d(TensorKind3d::Elasticity, m, &g);
                let b3t = tensor3d(TensorKind3d::Viscosity, m, &g);
                min_a3 = min_a3.min(a3t.min_eigenvalue());
                min_b3 = min_b3.min(b3t.min_eigenvalue());
                zero_res = zero_res.max(a3t.zero_component_residual()).max(b3t.zero_component_residual());
            }
        }
    }
    records.push(CheckRecord::ge("min eigenvalue of 3D elasticity tensor", min_a3, 1e-10));
    records.push(CheckRecord::ge("min eigenvalue of 3D viscosity tensor", min_b3, 1e-10));
    records.push(CheckRecord::le("3D zero-component law", zero_res, 0.0));

    // limit components and first-order convergence on the paraboloid
    let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
    let y = [0.1, 0.2];
    let frame = eval_frame(&chart, y)?;
    let m = MaterialParams::new(1.3, 0.8, 0.9, 1.1)?;
    let a0 = tensor3d_limit(TensorKind3d::Elasticity, &m, &frame);
    let b0 = tensor3d_limit(TensorKind3d::Viscosity, &m, &frame);
    let mut limit_res: f64 = 0.0;
    for al in 0..2 {
        for si in 0..2 {
            limit_res = limit_res.max((a0.c[al][2][si][2] - m.mu * frame.a_con[(al, si)]).abs());
            limit_res =
                limit_res.max((b0.c[al][2][si][2] - 0.5 * m.rho * frame.a_con[(al, si)]).abs());
            limit_res = limit_res.max((a0.c[al][si][2][2] - m.lambda * frame.a_con[(al, si)]).abs());
            limit_res = limit_res.max((b0.c[al][si][2][2] - m.theta * frame.a_con[(al, si)]).abs());
        }
    }
    limit_res = limit_res.max((a0.c[2][2][2][2] - (m.lambda + 2.0 * m.mu)).abs());
    limit_res = limit_res.max((b0.c[2][2][2][2] - (m.theta + m.rho)).abs());
    records.push(CheckRecord::le("3D limit tensor closed forms", limit_res, 1e-12));

    let eps_list = [1e-1, 1e-2, 1e-3];
    for (kind, limit, label) in
        [(TensorKind3d::Elasticity, &a0, "A"), (TensorKind3d::Viscosity, &b0, "B")]
    {
        let dists: Vec<f64> = eps_list
            .iter()
            .map(|&e| {
                let g = eval_metrics3d(&chart, y, 0.5, e).unwrap();
                tensor3d(kind, &m, &g).frobenius_distance(limit)
            })
            .collect();
        records.push(CheckRecord::ge(
            format!("slope of |{label}(eps) - {label}(0)|"),
            loglog_slope(&eps_list, &dists),
            0.9,
        ));
    }

    Ok(SuiteReport::new("tensors", records))
}

/// The transverse-strain closure: the integral formula must solve the
/// pointwise ordinary differential equation for three shipped trajectories.
pub fn closure_suite() -> Result<SuiteReport> {
    let mut records = Vec::new();

    let unit = MaterialParams::new(1.0, 1.0, 1.0, 1.0)?;
    let rep = verify_closure_ode(&unit, &|_| 0.0, &|_| 0.0, 2.0, 1000)?;
    records.push(CheckRecord::le("zero trajectory residual", rep.max_residual, 0.0));

    let rep = verify_closure_ode(&unit, &|t| t, &|_| 1.0, 2.0, 10_000)?;
    records.push(CheckRecord::le("linear trajectory residual", rep.max_residual, 1e-8));

    let mut rng = ChaCha8Rng::seed_from_u64(SWEEP_SEED);
    let m = MaterialParams::new(
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
    )?;
    let rep = verify_closure_ode(&m, &|t| 1.0 - (-t).exp(), &|t| (-t).exp(), 2.0, 10_000)?;
    records.push(CheckRecord::le("saturating trajectory residual", rep.max_residual, 1e-7));

    Ok(SuiteReport::new("closure", records))
}

/// Discrete coercivity constants and the membrane/flexural space
/// dichotomy witness.
pub fn korn_suite() -> Result<SuiteReport> {
    let mut records = Vec::new();

    // elliptic-cap membrane: generalized eigenvalue of M_a against the
    // H1 x H1 x L2 Gram, stable under one refinement
    let cap = make_case("elliptic_cap")?;
    let mut cap_eigs = Vec::new();
    for n in [16usize, 32] {
        let space = cap.space(ShellModel::Membrane, n, n)?;
        let sys = shell2d::assemble(&cap.chart, &cap.material, &space, 0.1, None)?;
        let gram = shell2d::gram_matrix(&space, NormKind::Membrane);
        let eig = smallest_generalized_eigenvalue(&sys.m_a.as_dense(), &gram.as_dense())?;
        records.push(CheckRecord::ge(format!("membrane Korn eigenvalue (n={n})"), eig, 1e-10));
        cap_eigs.push(eig);
    }
    let ratio = cap_eigs[1] / cap_eigs[0];
    records.push(CheckRecord::le("membrane Korn refinement ratio |log2|", ratio.log2().abs(), 1.0));

    // clamped-cylinder flexural system against the H1 x H1 x H2 Gram
    let cyl = make_case("clamped_cylinder")?;
    let mut cyl_eigs = Vec::new();
    for n in [16usize, 32] {
        let space = cyl.space(ShellModel::Flexural, n, n)?;
        let sys = shell2d::assemble(&cyl.chart, &cyl.material, &space, 0.1, None)?;
        let gram = shell2d::gram_matrix(&space, NormKind::Flexural);
        let eig = smallest_generalized_eigenvalue(&sys.m_a.as_dense(), &gram.as_dense())?;
        records.push(CheckRecord::ge(format!("flexural Korn eigenvalue (n={n})"), eig, 1e-12));
        cyl_eigs.push(eig);
    }
    let ratio = cyl_eigs[1] / cyl_eigs[0];
    records.push(CheckRecord::le("flexural Korn refinement ratio |log2|", ratio.log2().abs(), 1.0));

    // dichotomy witness: min |gamma(eta)| over the unit sphere of the
    // membrane norm, on the flexural-type clamped space
    let n = 16;
    let cyl_space = cyl.space(ShellModel::Flexural, n, n)?;
    let kg = shell2d::gamma_gram(&cyl_space, &cyl.chart)?;
    let gram = shell2d::gram_matrix(&cyl_space, NormKind::Membrane);
    let lam = smallest_generalized_eigenvalue(&kg.as_dense(), &gram.as_dense())?;
    records.push(CheckRecord::le(
        "cylinder: min |gamma| on unit sphere (inextensional witness)",
        lam.max(0.0).sqrt(),
        1e-2,
    ));

    let cap_space = cap.space(ShellModel::Flexural, n, n)?;
    let kg = shell2d::gamma_gram(&cap_space, &cap.chart)?;
    let gram = shell2d::gram_matrix(&cap_space, NormKind::Membrane);
    let lam = smallest_generalized_eigenvalue(&kg.as_dense(), &gram.as_dense())?;
    records.push(CheckRecord::ge(
        "elliptic cap: min |gamma| on unit sphere (rigidity)",
        lam.max(0.0).sqrt(),
        1e-1,
    ));

    Ok(SuiteReport::new("korn", records))
}

/// Manufactured-solution convergence orders of both schemes on a flat-plate
/// membrane and a clamped-cylinder flexural system.
pub fn manufactured_suite() -> Result<SuiteReport> {
    let mut records = Vec::new();
    let steps = [100usize, 200, 400];

    for (case_name, model) in
        [("flat_plate", ShellModel::Membrane), ("clamped_cylinder", ShellModel::Flexural)]
    {
        let case = make_case(case_name)?;
        let space = case.space(model, 8, 8)?;
        let sys = shell2d::assemble(&case.chart, &case.material, &space, 0.1, None)?;
        let k = sys.memory.decay;
        let xi_hat = DVector::from_fn(space.dim, |i, _| ((i as f64) * 0.37).sin() + 0.2);
        let load =
            ManufacturedLoad::new(&sys.m_a, &sys.m_b, Some(&sys.m_c), k, xi_hat, TimeProfile::Sine)?;

        for scheme in [Scheme::Trapezoidal, Scheme::BackwardEuler] {
            let mut errs = Vec::new();
            for &n in &steps {
                let res = solve_transient(
                    &sys.m_a,
                    &sys.m_b,
                    Some(&sys.m_c),
                    k,
                    DVector::zeros(space.dim),
                    &|t| load.eval(t),
                    2.0,
                    n,
                    scheme,
                    None,
                )?;
                let mut err: f64 = 0.0;
                let mut scale: f64 = 0.0;
                for (i, &t) in res.times.iter().enumerate() {
                    let exact = load.exact(t);
                    err = err.max((&res.states[i] - &exact).norm());
                    scale = scale.max(exact.norm());
                }
                errs.push(err / scale);
            }
            let slope = (errs[0] / errs[2]).log2() / 2.0;
            let want = match scheme {
                Scheme::Trapezoidal => 2.0,
                Scheme::BackwardEuler => 1.0,
            };
            records.push(CheckRecord::le(
                format!("{case_name} {} order deviation", scheme.name()),
                (slope - want).abs(),
                0.1,
            ));
        }
    }

    Ok(SuiteReport::new("manufactured", records))
}
