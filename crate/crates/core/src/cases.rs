//! Benchmark cases: charts, boundary conditions, loads and material
//! presets exercised by the tests and the CLI, plus the manufactured-load
//! construction and the thin-limit validation study.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Result, ShellError};
use crate::geometry::{Chart, Edge, EdgeSet, Rect};
use crate::material::{memory_constants, MaterialParams};
use crate::memory::{solve_transient, Scheme};
use crate::shell2d::{self, FunctionSpace2d, ShellModel};
use crate::solver3d::{assemble_3d, l2_error_split, thickness_average, Mesh3d};
use crate::sym::SymMatrix;

/// Which model(s) a case is set up for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseModel {
    Membrane,
    Flexural,
    Both,
}

impl CaseModel {
    pub fn supports(&self, model: ShellModel) -> bool {
        match self {
            CaseModel::Membrane => model == ShellModel::Membrane,
            CaseModel::Flexural => model == ShellModel::Flexural,
            CaseModel::Both => true,
        }
    }
}

/// Spatial body-force profile (contravariant components against the
/// surface basis), constant through the thickness.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum BodyLoad {
    Zero,
    /// Constant contravariant components.
    Constant([f64; 3]),
    /// Smooth in-plane profile over the parameter rectangle:
    /// `f^1 = a1 sin(pi s) sin(pi r)`, `f^2 = a2 s (1-s) r (1-r)` with
    /// `(s, r)` the normalized rectangle coordinates.
    InPlaneBump { a1: f64, a2: f64 },
    /// Normal load `f^3 = amp (16 s (1-s) r (1-r))^2`, vanishing with its
    /// slope on the boundary (keeps the limit membrane solution free of a
    /// lateral boundary layer).
    NormalBump { amp: f64 },
}

impl BodyLoad {
    pub fn eval(&self, rect: &Rect, y: [f64; 2]) -> [f64; 3] {
        match self {
            BodyLoad::Zero => [0.0; 3],
            BodyLoad::Constant(v) => *v,
            BodyLoad::InPlaneBump { a1, a2 } => {
                let s = (y[0] - rect.a1) / rect.len1();
                let r = (y[1] - rect.a2) / rect.len2();
                let pi = std::f64::consts::PI;
                [
                    a1 * (pi * s).sin() * (pi * r).sin(),
                    a2 * 16.0 * s * (1.0 - s) * r * (1.0 - r),
                    0.0,
                ]
            }
            BodyLoad::NormalBump { amp } => {
                let s = (y[0] - rect.a1) / rect.len1();
                let r = (y[1] - rect.a2) / rect.len2();
                let b = 16.0 * s * (1.0 - s) * r * (1.0 - r);
                [0.0, 0.0, amp * b * b]
            }
        }
    }
}

/// Time profile `g(t)` with closed-form exponential-kernel integral
/// `int_0^t exp(-k (t-s)) g(s) ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TimeProfile {
    Zero,
    One,
    /// `g(t) = t`
    Linear,
    /// `g(t) = sin t`
    Sine,
    /// `g(t) = 1 - exp(-rate t)`
    SmoothRamp { rate: f64 },
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Zero => 0.0,
            TimeProfile::One => 1.0,
            TimeProfile::Linear => t,
            TimeProfile::Sine => t.sin(),
            TimeProfile::SmoothRamp { rate } => 1.0 - (-rate * t).exp(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Zero | TimeProfile::One => 0.0,
            TimeProfile::Linear => 1.0,
            TimeProfile::Sine => t.cos(),
            TimeProfile::SmoothRamp { rate } => rate * (-rate * t).exp(),
        }
    }

    /// `int_0^t exp(-k (t-s)) g(s) ds` in closed form.
    pub fn kernel_integral(&self, k: f64, t: f64) -> Result<f64> {
        let ekt = (-k * t).exp();
        match self {
            TimeProfile::Zero => Ok(0.0),
            TimeProfile::One => Ok((1.0 - ekt) / k),
            TimeProfile::Linear => Ok(t / k - (1.0 - ekt) / (k * k)),
            TimeProfile::Sine => Ok((k * t.sin() - t.cos() + ekt) / (k * k + 1.0)),
            TimeProfile::SmoothRamp { rate } => {
                if (k - rate).abs() < 1e-12 * k.abs().max(*rate) {
                    return Err(ShellError::UnsupportedProfile(format!(
                        "smooth ramp rate {rate} coincides with the kernel decay {k}"
                    )));
                }
                Ok((1.0 - ekt) / k - ((-rate * t).exp() - ekt) / (k - rate))
            }
        }
    }
}

/// Material presets (nondimensional units).
pub fn material_preset(name: &str) -> Result<MaterialParams> {
    match name {
        "default" => MaterialParams::new(1.0, 1.0, 1.0, 1.0),
        // nearly incompressible rubber-like solid: lambda >> mu
        "rubber" => MaterialParams::new(10.0, 1.0, 1.0, 1.0),
        // weak viscosity
        "low-viscosity" => MaterialParams::new(1.0, 1.0, 0.1, 0.1),
        other => Err(ShellError::InvalidParameter(format!("unknown material preset `{other}`"))),
    }
}

/// Fully-populated benchmark configuration.
#[derive(Debug, Clone, Serialize)]
pub struct CaseSpec {
    pub name: String,
    pub chart: Chart,
    pub clamped: EdgeSet,
    pub model: CaseModel,
    pub material: MaterialParams,
    /// Force order `p`: body force `O(eps^p)`, tractions `O(eps^{p+1})`.
    pub force_order: i32,
    pub body_load: BodyLoad,
    pub time_profile: TimeProfile,
    pub horizon: f64,
    /// Default 2D resolution and degrees (tangential / normal).
    pub n1: usize,
    pub n2: usize,
    pub degree_t: usize,
    pub degree_n: usize,
    /// Default 3D mesh (elements) and element orders.
    pub n3d: (usize, usize, usize),
    pub orders3d: (usize, usize, usize),
}

/// Builds one of the shipped cases.
pub fn make_case(name: &str) -> Result<CaseSpec> {
    let default = material_preset("default")?;
    match name {
        "flat_plate" => Ok(CaseSpec {
            name: name.into(),
            chart: Chart::FlatPlate { rect: Rect::unit() },
            clamped: EdgeSet::all(),
            model: CaseModel::Both,
            material: default,
            force_order: 0,
            body_load: BodyLoad::InPlaneBump { a1: 1.0, a2: 0.5 },
            time_profile: TimeProfile::SmoothRamp { rate: 2.0 },
            horizon: 1.0,
            n1: 16,
            n2: 16,
            degree_t: 2,
            degree_n: 3,
            n3d: (8, 8, 2),
            orders3d: (2, 2, 2),
        }),
        "clamped_cylinder" => Ok(CaseSpec {
            name: name.into(),
            chart: Chart::Cylinder {
                radius: 1.0,
                rect: Rect::new(0.0, std::f64::consts::FRAC_PI_2, 0.0, 1.0),
            },
            clamped: EdgeSet::single(Edge::West),
            model: CaseModel::Flexural,
            material: default,
            force_order: 2,
            body_load: BodyLoad::Constant([0.0, 0.0, 1.0]),
            time_profile: TimeProfile::SmoothRamp { rate: 2.0 },
            horizon: 1.0,
            n1: 16,
            n2: 16,
            degree_t: 2,
            degree_n: 3,
            n3d: (8, 8, 2),
            orders3d: (2, 2, 2),
        }),
        "elliptic_cap" => Ok(CaseSpec {
            name: name.into(),
            chart: Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) },
            clamped: EdgeSet::all(),
            model: CaseModel::Membrane,
            material: default,
            force_order: 0,
            body_load: BodyLoad::NormalBump { amp: 1.0 },
            time_profile: TimeProfile::SmoothRamp { rate: 2.0 },
            horizon: 1.0,
            n1: 16,
            n2: 16,
            degree_t: 2,
            degree_n: 3,
            n3d: (8, 8, 2),
            orders3d: (2, 2, 2),
        }),
        // minimal system for stepper smoke tests and CLI demos
        "manufactured_scalar" => Ok(CaseSpec {
            name: name.into(),
            chart: Chart::FlatPlate { rect: Rect::unit() },
            clamped: EdgeSet::all(),
            model: CaseModel::Membrane,
            material: default,
            force_order: 0,
            body_load: BodyLoad::Constant([1.0, 1.0, 0.0]),
            time_profile: TimeProfile::Sine,
            horizon: 2.0,
            n1: 2,
            n2: 2,
            degree_t: 1,
            degree_n: 3,
            n3d: (2, 2, 1),
            orders3d: (1, 1, 1),
        }),
        other => Err(ShellError::UnknownCase(other.into())),
    }
}

impl CaseSpec {
    /// The 2D space for the given model at resolution `(n1, n2)`.  On the
    /// flat plate the models decouple exactly: the membrane keeps only the
    /// in-plane components and the flexural model only the normal one.
    pub fn space(&self, model: ShellModel, n1: usize, n2: usize) -> Result<FunctionSpace2d> {
        let flat = matches!(self.chart, Chart::FlatPlate { .. });
        match model {
            ShellModel::Membrane => FunctionSpace2d::membrane(
                self.chart.rect(),
                self.clamped,
                n1,
                n2,
                self.degree_t,
                !flat,
            ),
            ShellModel::Flexural => FunctionSpace2d::flexural(
                self.chart.rect(),
                self.clamped,
                n1,
                n2,
                self.degree_t,
                self.degree_n,
                !flat,
            ),
        }
    }

    /// Chart validity: tangents independent and injectivity on a lattice.
    pub fn validate_chart(&self) -> Result<()> {
        for &y in self.chart.rect().lattice(8, 8).iter() {
            crate::geometry::eval_frame(&self.chart, y)?;
        }
        if !self.chart.injective_on_lattice(10) {
            return Err(ShellError::InvalidParameter(format!(
                "chart of case `{}` is not injective on the verification lattice",
                self.name
            )));
        }
        Ok(())
    }

    /// Spatial load vector of the scaled limit problem:
    /// `p^i = int_{-1}^{1} f^i dx3 + h_+ + h_-` tested against the space.
    pub fn limit_load_vector(&self, space: &FunctionSpace2d) -> Result<DVector<f64>> {
        let rect = self.chart.rect();
        let body = self.body_load;
        shell2d::load_resultant(
            space,
            &self.chart,
            &move |y, _x3| body.eval(&rect, y),
            &|_| [0.0; 3],
            &|_| [0.0; 3],
            1.0,
            None,
        )
    }
}

/// Load provider for a manufactured solution `xi*(t) = g(t) xi_hat`:
/// `p(t) = g(t) M_a xi_hat + g'(t) M_b xi_hat - K_g(t) M_c xi_hat` with the
/// kernel integral `K_g` in closed form, so the semi-discrete solution is
/// exactly `xi*`.
pub struct ManufacturedLoad {
    pub xi_hat: DVector<f64>,
    pub profile: TimeProfile,
    pub k: f64,
    ma_xi: DVector<f64>,
    mb_xi: DVector<f64>,
    mc_xi: Option<DVector<f64>>,
}

impl ManufacturedLoad {
    pub fn new(
        m_a: &SymMatrix,
        m_b: &SymMatrix,
        m_c: Option<&SymMatrix>,
        k: f64,
        xi_hat: DVector<f64>,
        profile: TimeProfile,
    ) -> Result<Self> {
        profile.kernel_integral(k, 1.0)?; // closed form must exist
        if profile.value(0.0) != 0.0 {
            return Err(ShellError::InvalidParameter(
                "manufactured profile must vanish at t = 0".into(),
            ));
        }
        Ok(ManufacturedLoad {
            ma_xi: m_a.matvec(&xi_hat),
            mb_xi: m_b.matvec(&xi_hat),
            mc_xi: m_c.map(|m| m.matvec(&xi_hat)),
            xi_hat,
            profile,
            k,
        })
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        let g = self.profile.value(t);
        let gd = self.profile.derivative(t);
        let mut p = &self.ma_xi * g + &self.mb_xi * gd;
        if let Some(mc) = &self.mc_xi {
            let kg = self.profile.kernel_integral(self.k, t).expect("validated at construction");
            p -= mc * kg;
        }
        p
    }

    pub fn exact(&self, t: f64) -> DVector<f64> {
        &self.xi_hat * self.profile.value(t)
    }
}

/// One row of the thin-limit validation study.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub eps: f64,
    /// Relative space-time error, all components together.
    pub err_total: f64,
    /// Per-component errors, normalized by the full 2D solution norm.
    pub err_comp: [f64; 3],
    pub n_dofs_3d: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyTable {
    pub case: String,
    pub model: ShellModel,
    pub rows: Vec<StudyRow>,
    pub n3d: (usize, usize, usize),
    pub orders3d: (usize, usize, usize),
    pub n_steps: usize,
    pub horizon: f64,
    /// Penalty half-thickness used for the flexural 2D reference.
    pub eps_ref_2d: Option<f64>,
}

/// Runs the thin-limit study for one case: solves the 2D limit problem once
/// and the scaled 3D problem per `eps`, then reports relative space-time
/// errors of the thickness-averaged 3D solution against the 2D one.
pub fn asymptotic_study(case: &CaseSpec, eps_list: &[f64], n_steps: usize) -> Result<StudyTable> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(ShellError::InvalidParameter("eps list must be strictly decreasing".into()));
    }
    case.validate_chart()?;
    let model = match case.model {
        CaseModel::Membrane | CaseModel::Both => ShellModel::Membrane,
        CaseModel::Flexural => ShellModel::Flexural,
    };
    let mc = memory_constants(&case.material)?;
    let t_end = case.horizon;
    let rect = case.chart.rect();
    let body = case.body_load;
    let profile = case.time_profile;

    // 2D reference.  Membrane: the scaled limit system (eps-independent).
    // Flexural: the de-scaled system at a small penalty thickness, which
    // enforces the inextensionality constraint of the limit problem.
    let space = case.space(model, case.n1, case.n2)?;
    let (eps_2d, eps_ref_2d) = match model {
        ShellModel::Membrane => (1.0, None),
        ShellModel::Flexural => (0.02, Some(0.02)),
    };
    let sys2d = shell2d::assemble(&case.chart, &case.material, &space, eps_2d, None)?;
    let load2d = case.limit_load_vector(&space)?;
    let load_scale = match model {
        ShellModel::Membrane => 1.0,
        // de-scaled flexural load: p^{i,eps} = eps^3 p^{i,2}
        ShellModel::Flexural => eps_2d * eps_2d * eps_2d,
    };
    let p2d = move |t: f64| &load2d * (profile.value(t) * load_scale);
    let res2d = solve_transient(
        &sys2d.m_a,
        &sys2d.m_b,
        Some(&sys2d.m_c),
        mc.decay,
        DVector::zeros(space.dim),
        &p2d,
        t_end,
        n_steps,
        Scheme::Trapezoidal,
        None,
    )?;

    // 3D runs
    let mut rows = Vec::new();
    for &eps in eps_list {
        let mesh = Mesh3d::new(rect, case.n3d, case.orders3d, case.clamped);
        let sys3d = assemble_3d(&case.chart, &case.material, &mesh, eps, 3)?;
        let l3d = sys3d.assemble_load(
            case.force_order,
            &move |y, _x3| body.eval(&rect, y),
            &|_| [0.0; 3],
            &|_| [0.0; 3],
        )?;
        let p3d = move |t: f64| &l3d * profile.value(t);
        let res3d = solve_transient(
            &sys3d.m_a,
            &sys3d.m_b,
            None,
            mc.decay,
            DVector::zeros(sys3d.n_dofs),
            &p3d,
            t_end,
            n_steps,
            Scheme::Trapezoidal,
            None,
        )?;

        // discrete-L2-in-time accumulation (skip the zero initial state)
        let mut num = [0.0; 3];
        let mut den = [0.0; 3];
        for n in 1..=n_steps {
            let avg = thickness_average(&mesh, &sys3d.expand(&res3d.states[n]));
            let (nu, de) = l2_error_split(&mesh, &avg, &space, &res2d.states[n]);
            for c in 0..3 {
                num[c] += nu[c];
                den[c] += de[c];
            }
        }
        let den_total: f64 = den.iter().sum();
        let num_total: f64 = num.iter().sum();
        rows.push(StudyRow {
            eps,
            err_total: (num_total / den_total).sqrt(),
            err_comp: [
                (num[0] / den_total).sqrt(),
                (num[1] / den_total).sqrt(),
                (num[2] / den_total).sqrt(),
            ],
            n_dofs_3d: sys3d.n_dofs,
        });
    }

    Ok(StudyTable {
        case: case.name.clone(),
        model,
        rows,
        n3d: case.n3d,
        orders3d: case.orders3d,
        n_steps,
        horizon: t_end,
        eps_ref_2d,
    })
}
