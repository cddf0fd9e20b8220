//! Time integration of `M_b xi' + M_a xi - M_c h = p(t)` with the
//! exponential-history state `h(t) = int_0^t exp(-k (t-s)) xi(s) ds`,
//! which satisfies `h' = xi - k h`, `h(0) = 0`.  The Volterra memory term
//! is thereby local in time and needs no history storage.

use std::time::Instant;

use nalgebra::DVector;

use crate::error::{Result, ShellError};
use crate::material::{memory_constants, MaterialParams};
use crate::quadrature::GaussRule;
use crate::sym::{SymFactor, SymMatrix};

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Scheme {
    BackwardEuler,
    Trapezoidal,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::BackwardEuler => "backward-euler",
            Scheme::Trapezoidal => "trapezoidal",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = ShellError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward-euler" | "be" => Ok(Scheme::BackwardEuler),
            "trapezoidal" | "tr" => Ok(Scheme::Trapezoidal),
            other => Err(ShellError::InvalidParameter(format!("unknown scheme `{other}`"))),
        }
    }
}

/// State after `n` steps: time, displacement coefficients and the
/// exponential history accumulator (same dimension).
#[derive(Debug, Clone)]
pub struct MemoryState {
    pub t: f64,
    pub xi: DVector<f64>,
    pub h: DVector<f64>,
    pub dt: f64,
}

impl MemoryState {
    /// Initial state: `h(0) = 0` always (the kernel integral over an empty
    /// interval).
    pub fn initial(xi0: DVector<f64>, dt: f64) -> Self {
        let h = DVector::zeros(xi0.len());
        MemoryState { t: 0.0, xi: xi0, h, dt }
    }
}

/// One-step integrator holding the factorized step matrix.
pub struct Stepper<'a> {
    m_a: &'a SymMatrix,
    m_b: &'a SymMatrix,
    m_c: Option<&'a SymMatrix>,
    dt: f64,
    scheme: Scheme,
    factor: SymFactor,
    exp_kdt: f64,
}

impl<'a> Stepper<'a> {
    /// Builds and factorizes the step matrix
    /// (`M_b/dt + M_a/2 - dt/4 M_c` for the trapezoidal scheme,
    /// `M_b/dt + M_a - dt M_c` for backward Euler); both are symmetric and
    /// positive definite for moderate `dt`.
    pub fn new(
        m_a: &'a SymMatrix,
        m_b: &'a SymMatrix,
        m_c: Option<&'a SymMatrix>,
        k: f64,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(ShellError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let mut terms: Vec<(f64, &SymMatrix)> = match scheme {
            Scheme::Trapezoidal => vec![(1.0 / dt, m_b), (0.5, m_a)],
            Scheme::BackwardEuler => vec![(1.0 / dt, m_b), (1.0, m_a)],
        };
        if let Some(mc) = m_c {
            let coef = match scheme {
                Scheme::Trapezoidal => -0.25 * dt,
                Scheme::BackwardEuler => -dt,
            };
            terms.push((coef, mc));
        }
        let step_matrix = SymMatrix::lincomb(&terms);
        let factor = step_matrix.factorize()?;
        Ok(Stepper { m_a, m_b, m_c, dt, scheme, factor, exp_kdt: (-k * dt).exp() })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Advances one step given the loads at `t_n` and `t_{n+1}`.
    pub fn step(&self, state: &MemoryState, p_n: &DVector<f64>, p_np1: &DVector<f64>) -> MemoryState {
        let dt = self.dt;
        let e = self.exp_kdt;
        match self.scheme {
            Scheme::Trapezoidal => {
                // rhs = (p_n + p_{n+1})/2 + M_b xi_n / dt - M_a xi_n / 2
                //       + M_c [ (1+e)/2 h_n + dt/4 e xi_n ]
                let mut rhs = 0.5 * (p_n + p_np1);
                rhs += self.m_b.matvec(&state.xi) / dt;
                rhs -= self.m_a.matvec(&state.xi) * 0.5;
                if let Some(mc) = self.m_c {
                    let hist = state.h.clone() * (0.5 * (1.0 + e)) + state.xi.clone() * (0.25 * dt * e);
                    rhs += mc.matvec(&hist);
                }
                let xi = self.factor.solve(&rhs);
                // h_{n+1} = e h_n + dt/2 (e xi_n + xi_{n+1})
                let h = state.h.clone() * e + (state.xi.clone() * e + xi.clone()) * (0.5 * dt);
                MemoryState { t: state.t + dt, xi, h, dt }
            }
            Scheme::BackwardEuler => {
                let mut rhs = p_np1.clone();
                rhs += self.m_b.matvec(&state.xi) / dt;
                if let Some(mc) = self.m_c {
                    rhs += mc.matvec(&(state.h.clone() * e));
                }
                let xi = self.factor.solve(&rhs);
                let h = state.h.clone() * e + xi.clone() * dt;
                MemoryState { t: state.t + dt, xi, h, dt }
            }
        }
    }
}

/// Transient run output: the full coefficient trajectory plus per-step
/// diagnostics.
pub struct TransientResult {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
    /// Energy-like quadratic form `xi^T M_a xi` per step.
    pub energy: Vec<f64>,
    /// `|gamma(xi)|_{0,omega}` per step, when a strain Gram matrix is given.
    pub gamma_norm: Option<Vec<f64>>,
    pub wall_seconds: f64,
}

/// Integrates the system over `[0, t_end]` with `n_steps` uniform steps.
///
/// `gamma_gram` (if given) adds the inextensionality diagnostic; a nonzero
/// `|gamma(xi_0)|` is reported by the caller as an initial-condition
/// compatibility warning, not an error.
#[allow(clippy::too_many_arguments)]
pub fn solve_transient(
    m_a: &SymMatrix,
    m_b: &SymMatrix,
    m_c: Option<&SymMatrix>,
    k: f64,
    xi0: DVector<f64>,
    p: &dyn Fn(f64) -> DVector<f64>,
    t_end: f64,
    n_steps: usize,
    scheme: Scheme,
    gamma_gram: Option<&SymMatrix>,
) -> Result<TransientResult> {
    if !(t_end > 0.0) || n_steps == 0 {
        return Err(ShellError::InvalidParameter("need t_end > 0 and n_steps >= 1".into()));
    }
    let start = Instant::now();
    let dt = t_end / n_steps as f64;
    let stepper = Stepper::new(m_a, m_b, m_c, k, dt, scheme)?;

    let mut state = MemoryState::initial(xi0, dt);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut energy = Vec::with_capacity(n_steps + 1);
    let mut gnorm = gamma_gram.map(|_| Vec::with_capacity(n_steps + 1));

    let record =
        |st: &MemoryState, times: &mut Vec<f64>, states: &mut Vec<DVector<f64>>, energy: &mut Vec<f64>, gnorm: &mut Option<Vec<f64>>| {
            times.push(st.t);
            energy.push(m_a.quadratic(&st.xi));
            if let (Some(v), Some(gg)) = (gnorm.as_mut(), gamma_gram) {
                v.push(gg.quadratic(&st.xi).max(0.0).sqrt());
            }
            states.push(st.xi.clone());
        };
    record(&state, &mut times, &mut states, &mut energy, &mut gnorm);

    let mut p_n = p(0.0);
    for n in 0..n_steps {
        let t_next = dt * (n + 1) as f64;
        let p_next = p(t_next);
        state = stepper.step(&state, &p_n, &p_next);
        p_n = p_next;
        record(&state, &mut times, &mut states, &mut energy, &mut gnorm);
    }

    Ok(TransientResult {
        times,
        states,
        energy,
        gamma_norm: gnorm,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Report of the ordinary-differential-equation closure check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ClosureReport {
    pub max_residual: f64,
    pub n_points: usize,
    pub t_end: f64,
}

/// Verifies that the transverse-strain integral formula
/// `E(t) = -theta/(theta+rho) (m(t) + Lambda int_0^t exp(-k(t-s)) m(s) ds)`
/// solves the closure equation
/// `lambda m + (lambda+2mu) E + theta m' + (theta+rho) E' = 0`
/// for a synthetic trace trajectory `m(t) = a^{ab} e^0_{a||b}(t)` with
/// `m(0) = 0`.  The kernel integral is accumulated by per-step Gauss
/// quadrature on the exponential recursion and `E'` by five-point central
/// differences; the residual must vanish to quadrature accuracy.
pub fn verify_closure_ode(
    material: &MaterialParams,
    trace: &dyn Fn(f64) -> f64,
    trace_dot: &dyn Fn(f64) -> f64,
    t_end: f64,
    n_points: usize,
) -> Result<ClosureReport> {
    if n_points < 8 {
        return Err(ShellError::InvalidParameter("need at least 8 grid points".into()));
    }
    let mc = memory_constants(material)?;
    let (k, lam_mem) = (mc.decay, mc.weight);
    let (la, mu, th, rh) = (material.lambda, material.mu, material.theta, material.rho);

    let n = n_points;
    let dt = t_end / n as f64;
    let rule = GaussRule::new(3);

    // h_i = int_0^{t_i} exp(-k (t_i - s)) m(s) ds by exponential recursion
    let mut h = vec![0.0; n + 1];
    for i in 0..n {
        let t0 = i as f64 * dt;
        let t1 = t0 + dt;
        let local = rule.integrate(t0, t1, |s| (-k * (t1 - s)).exp() * trace(s));
        h[i + 1] = (-k * dt).exp() * h[i] + local;
    }

    let coef = -th / (th + rh);
    let e_fun: Vec<f64> =
        (0..=n).map(|i| coef * (trace(i as f64 * dt) + lam_mem * h[i])).collect();

    let mut max_residual: f64 = 0.0;
    for i in 2..=(n - 2) {
        let t = i as f64 * dt;
        let e_dot =
            (-e_fun[i + 2] + 8.0 * e_fun[i + 1] - 8.0 * e_fun[i - 1] + e_fun[i - 2]) / (12.0 * dt);
        let r = la * trace(t) + (la + 2.0 * mu) * e_fun[i] + th * trace_dot(t) + (th + rh) * e_dot;
        max_residual = max_residual.max(r.abs());
    }
    Ok(ClosureReport { max_residual, n_points: n, t_end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn scalar(m: f64) -> SymMatrix {
        SymMatrix::Dense(nalgebra::DMatrix::from_element(1, 1, m))
    }

    #[test]
    fn zero_load_is_a_fixed_point() {
        let (ma, mb, mc) = (scalar(1.0), scalar(1.0), scalar(0.3));
        let res = solve_transient(
            &ma,
            &mb,
            Some(&mc),
            1.0,
            DVector::zeros(1),
            &|_| DVector::zeros(1),
            1.0,
            20,
            Scheme::Trapezoidal,
            None,
        )
        .unwrap();
        for xi in &res.states {
            assert_eq!(xi[0], 0.0);
        }
    }

    /// Scalar system M_b = M_a = 1, M_c = 0, p = 1: xi(t) = 1 - exp(-t),
    /// with second-order trapezoidal error.
    #[test]
    fn scalar_ode_orders() {
        let (ma, mb) = (scalar(1.0), scalar(1.0));
        let p = |_t: f64| DVector::from_element(1, 1.0);
        let mut errs_tr = Vec::new();
        let mut errs_be = Vec::new();
        for &n in &[50usize, 100, 200] {
            for (scheme, errs) in
                [(Scheme::Trapezoidal, &mut errs_tr), (Scheme::BackwardEuler, &mut errs_be)]
            {
                let res = solve_transient(
                    &ma,
                    &mb,
                    None,
                    1.0,
                    DVector::zeros(1),
                    &p,
                    2.0,
                    n,
                    scheme,
                    None,
                )
                .unwrap();
                let err = res
                    .times
                    .iter()
                    .zip(&res.states)
                    .map(|(&t, xi)| (xi[0] - (1.0 - (-t).exp())).abs())
                    .fold(0.0_f64, f64::max);
                errs.push(err);
            }
        }
        let slope_tr = (errs_tr[0] / errs_tr[2]).log2() / 2.0;
        let slope_be = (errs_be[0] / errs_be[2]).log2() / 2.0;
        assert!((slope_tr - 2.0).abs() < 0.1, "trapezoidal order {slope_tr}");
        assert!((slope_be - 1.0).abs() < 0.1, "backward Euler order {slope_be}");
    }

    /// With xi frozen at 1, the exponential recursion with exact local
    /// quadrature reproduces (1 - exp(-k t))/k exactly.
    #[test]
    fn frozen_kernel_accumulator_closed_form() {
        let k: f64 = 1.7;
        let dt = 0.05;
        let e = (-k * dt).exp();
        let exact_local = (1.0 - e) / k;
        let mut h = 0.0;
        for n in 1..=200 {
            h = e * h + exact_local;
            let t = n as f64 * dt;
            assert_relative_eq!(h, (1.0 - (-k * t).exp()) / k, epsilon = 1e-13);
        }
    }

    /// Trapezoidal history propagation reproduces the kernel integral of a
    /// piecewise-linear signal with O(dt^2) error per unit time.
    #[test]
    fn kernel_recursion_second_order_for_piecewise_linear() {
        let k = 0.9;
        let t_end = 2.0;
        let xi = |t: f64| 0.3 + 1.7 * t - 0.4 * (t * 3.0).sin();
        let fine = GaussRule::new(24);
        let exact = |t: f64| {
            // composite high-order quadrature of the kernel integral
            let n = 64;
            let mut v = 0.0;
            for i in 0..n {
                let a = t * i as f64 / n as f64;
                let b = t * (i + 1) as f64 / n as f64;
                v += fine.integrate(a, b, |s| (-k * (t - s)).exp() * xi(s));
            }
            v
        };
        let mut errors = Vec::new();
        for &n in &[40usize, 80] {
            let dt = t_end / n as f64;
            let e = (-k * dt).exp();
            let mut h = 0.0;
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let t0 = i as f64 * dt;
                let t1 = t0 + dt;
                h = e * h + 0.5 * dt * (e * xi(t0) + xi(t1));
                worst = worst.max((h - exact(t1)).abs());
            }
            errors.push(worst);
        }
        let ratio = errors[0] / errors[1];
        assert!(ratio > 3.3 && ratio < 4.7, "ratio {ratio}");
    }

    #[test]
    fn closure_residual_vanishes_for_zero_trace() {
        let m = MaterialParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let rep = verify_closure_ode(&m, &|_| 0.0, &|_| 0.0, 2.0, 100).unwrap();
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn closure_residual_linear_trace() {
        let m = MaterialParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let rep = verify_closure_ode(&m, &|t| t, &|_| 1.0, 2.0, 10_000).unwrap();
        assert!(rep.max_residual < 1e-8, "residual {}", rep.max_residual);
    }

    #[test]
    fn step_matrix_not_spd_reports_solve_failure() {
        // huge dt with a strong memory term makes the step matrix indefinite
        let (ma, mb, mc) = (scalar(1.0), scalar(1.0), scalar(5.0));
        let err = Stepper::new(&ma, &mb, Some(&mc), 1.0, 10.0, Scheme::BackwardEuler);
        assert!(matches!(err, Err(ShellError::SolveFailure(_))));
    }
}
