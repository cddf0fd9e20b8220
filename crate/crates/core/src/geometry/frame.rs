//! First and second fundamental forms, Christoffel symbols and covariant
//! derivatives of the curvature on the middle surface.

use nalgebra::{Matrix2, Vector3};

use super::chart::Chart;
use super::DEGENERACY_THRESHOLD;
use crate::error::{Result, ShellError};

/// Per-point geometric package of the middle surface.
///
/// Index conventions: `a_cov[(alpha, beta)] = a_{alpha beta}`,
/// `a_con[(alpha, beta)] = a^{alpha beta}`, `b_mix[(sigma, alpha)] =
/// b^sigma_alpha`, `christoffel[sigma][alpha][beta] = Gamma^sigma_{alpha
/// beta}`.
#[derive(Debug, Clone)]
pub struct SurfaceFrame {
    pub y: [f64; 2],
    /// Covariant tangents `a_alpha`.
    pub a_vec: [Vector3<f64>; 2],
    /// Contravariant tangents `a^alpha`.
    pub a_con_vec: [Vector3<f64>; 2],
    /// Unit normal `a_3`.
    pub a3: Vector3<f64>,
    /// First fundamental form `a_{alpha beta}`.
    pub a_cov: Matrix2<f64>,
    /// Inverse metric `a^{alpha beta}`.
    pub a_con: Matrix2<f64>,
    /// Second fundamental form `b_{alpha beta}`.
    pub b_cov: Matrix2<f64>,
    /// Mixed curvature `b^sigma_alpha`, stored at `(sigma, alpha)`.
    pub b_mix: Matrix2<f64>,
    /// Christoffel symbols of the surface.
    pub christoffel: [[[f64; 2]; 2]; 2],
    /// `det(a_{alpha beta})`.
    pub det_a: f64,
    /// Area element factor `sqrt(a)`.
    pub sqrt_a: f64,
}

/// Covariant derivatives of the mixed curvature tensor,
/// `comp[sigma][beta][alpha] = b^sigma_beta |_alpha`.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureGradient {
    pub comp: [[[f64; 2]; 2]; 2],
}

/// Evaluates the full surface frame at a parameter point.
pub fn eval_frame(chart: &Chart, y: [f64; 2]) -> Result<SurfaceFrame> {
    let a1 = chart.d1(y, 0);
    let a2 = chart.d1(y, 1);
    let n = a1.cross(&a2);
    let norm = n.norm();
    if norm <= DEGENERACY_THRESHOLD {
        return Err(ShellError::DegenerateChart { y1: y[0], y2: y[1], norm });
    }
    let a3 = n / norm;

    let a_cov = Matrix2::new(a1.dot(&a1), a1.dot(&a2), a2.dot(&a1), a2.dot(&a2));
    // |a1 x a2|^2 = det(a_cov), so positivity is already guaranteed.
    let det_a = a_cov.determinant();
    let a_con = Matrix2::new(a_cov[(1, 1)], -a_cov[(0, 1)], -a_cov[(1, 0)], a_cov[(0, 0)]) / det_a;

    let a_vec = [a1, a2];
    let mut a_con_vec = [Vector3::zeros(); 2];
    for s in 0..2 {
        a_con_vec[s] = a_con[(s, 0)] * a_vec[0] + a_con[(s, 1)] * a_vec[1];
    }

    let mut b_cov = Matrix2::zeros();
    let mut christoffel = [[[0.0; 2]; 2]; 2];
    for alpha in 0..2 {
        for beta in 0..2 {
            let d2 = chart.d2(y, alpha, beta);
            b_cov[(alpha, beta)] = a3.dot(&d2);
            for sigma in 0..2 {
                christoffel[sigma][alpha][beta] = a_con_vec[sigma].dot(&d2);
            }
        }
    }
    let b_mix = a_con * b_cov;

    Ok(SurfaceFrame {
        y,
        a_vec,
        a_con_vec,
        a3,
        a_cov,
        a_con,
        b_cov,
        b_mix,
        christoffel,
        det_a,
        sqrt_a: det_a.sqrt(),
    })
}

/// Covariant derivative of the mixed curvature,
/// `b^sigma_beta |_alpha = d_alpha b^sigma_beta + Gamma^sigma_{alpha tau}
/// b^tau_beta - Gamma^tau_{alpha beta} b^sigma_tau`.  Needs third chart
/// derivatives through `d_alpha b_{tau beta}`.
pub fn curvature_covariant_derivative(chart: &Chart, y: [f64; 2]) -> Result<CurvatureGradient> {
    let f = eval_frame(chart, y)?;

    // d_alpha a_{kappa lambda} and d_alpha a^{kappa lambda}
    let mut da_cov = [Matrix2::zeros(); 2];
    for alpha in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                da_cov[alpha][(k, l)] =
                    chart.d2(y, alpha, k).dot(&f.a_vec[l]) + f.a_vec[k].dot(&chart.d2(y, alpha, l));
            }
        }
    }
    let da_con: Vec<Matrix2<f64>> =
        (0..2).map(|alpha| -f.a_con * da_cov[alpha] * f.a_con).collect();

    // d_alpha a3 by the Weingarten relation d_alpha a3 = -b^sigma_alpha a_sigma
    let da3: Vec<Vector3<f64>> = (0..2)
        .map(|alpha| -(f.b_mix[(0, alpha)] * f.a_vec[0] + f.b_mix[(1, alpha)] * f.a_vec[1]))
        .collect();

    // d_alpha b_{tau beta} = d_alpha a3 . d2(tau,beta) + a3 . d3(alpha,tau,beta)
    let mut db_cov = [Matrix2::zeros(); 2];
    for alpha in 0..2 {
        for tau in 0..2 {
            for beta in 0..2 {
                db_cov[alpha][(tau, beta)] = da3[alpha].dot(&chart.d2(y, tau, beta))
                    + f.a3.dot(&chart.d3(y, alpha, tau, beta));
            }
        }
    }

    let mut comp = [[[0.0; 2]; 2]; 2];
    for sigma in 0..2 {
        for beta in 0..2 {
            for alpha in 0..2 {
                let db_mix = (da_con[alpha] * f.b_cov + f.a_con * db_cov[alpha])[(sigma, beta)];
                let mut v = db_mix;
                for tau in 0..2 {
                    v += f.christoffel[sigma][alpha][tau] * f.b_mix[(tau, beta)];
                    v -= f.christoffel[tau][alpha][beta] * f.b_mix[(sigma, tau)];
                }
                comp[sigma][beta][alpha] = v;
            }
        }
    }
    Ok(CurvatureGradient { comp })
}

impl SurfaceFrame {
    /// Largest violation of the frame identities: `a^{..} a_{..} = id`,
    /// symmetry of `a_cov`, `b_cov` and the Christoffel symbols, and
    /// `|a3| = 1`.  Used by verification suites.
    pub fn invariant_residual(&self) -> f64 {
        let id_res = (self.a_con * self.a_cov - Matrix2::identity()).norm();
        let sym_a = (self.a_cov[(0, 1)] - self.a_cov[(1, 0)]).abs();
        let sym_b = (self.b_cov[(0, 1)] - self.b_cov[(1, 0)]).abs();
        let mut sym_g: f64 = 0.0;
        for s in 0..2 {
            sym_g = sym_g.max((self.christoffel[s][0][1] - self.christoffel[s][1][0]).abs());
        }
        let unit = (self.a3.norm() - 1.0).abs();
        id_res.max(sym_a).max(sym_b).max(sym_g).max(unit)
    }
}
