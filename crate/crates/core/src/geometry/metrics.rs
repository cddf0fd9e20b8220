//! Metric data of the scaled three-dimensional body `Theta(y, x3^eps) =
//! theta(y) + x3^eps a3(y)`, evaluated at `x3^eps = eps * x3` with
//! `x3 in (-1, 1)`.

use nalgebra::{Matrix3, Vector3};

use super::chart::Chart;
use super::frame::eval_frame;
use crate::error::{Result, ShellError};

/// Covariant/contravariant 3D metric and Christoffel symbols at one point
/// of the scaled body.
///
/// All quantities are the physical ones of the map `Theta` with respect to
/// the coordinates `(y1, y2, x3^eps)`, evaluated at `x3^eps = eps * x3`
/// (this is exactly the scaling `Gamma^p_ij(eps)(x) = Gamma^{p,eps}_ij(x^eps)`,
/// `g(eps)(x) = g^eps(x^eps)`).  `christoffel[p][i][j] = Gamma^p_ij(eps)`.
#[derive(Debug, Clone)]
pub struct Metrics3d {
    pub y: [f64; 2],
    pub x3: f64,
    pub eps: f64,
    /// Covariant basis `g_i`.
    pub g_vec: [Vector3<f64>; 3],
    /// Covariant metric `g_ij`.
    pub g_cov: Matrix3<f64>,
    /// Contravariant metric `g^ij`.
    pub g_con: Matrix3<f64>,
    /// Scaled 3D Christoffel symbols `Gamma^p_ij(eps)`.
    pub christoffel: [[[f64; 3]; 3]; 3],
    /// `g(eps) = det(g_ij)`.
    pub det_g: f64,
    /// Volume element factor `sqrt(g(eps))`.
    pub sqrt_g: f64,
}

/// Evaluates the 3D metric package at `(y, x3)` for half-thickness `eps`.
pub fn eval_metrics3d(chart: &Chart, y: [f64; 2], x3: f64, eps: f64) -> Result<Metrics3d> {
    let frame = eval_frame(chart, y)?;
    let a1 = frame.a_vec[0];
    let a2 = frame.a_vec[1];

    // Normal direction and its first/second derivatives from the quotient
    // rule on a3 = n / |n|; the chart supplies third derivatives.
    let n = a1.cross(&a2);
    let w = n.norm();
    let dn: Vec<Vector3<f64>> = (0..2)
        .map(|s| chart.d2(y, s, 0).cross(&a2) + a1.cross(&chart.d2(y, s, 1)))
        .collect();
    let mut ddn = [[Vector3::zeros(); 2]; 2];
    for t in 0..2 {
        for s in 0..2 {
            ddn[t][s] = chart.d3(y, t, s, 0).cross(&a2)
                + chart.d2(y, s, 0).cross(&chart.d2(y, t, 1))
                + chart.d2(y, t, 0).cross(&chart.d2(y, s, 1))
                + a1.cross(&chart.d3(y, t, s, 1));
        }
    }
    let dw: Vec<f64> = (0..2).map(|s| n.dot(&dn[s]) / w).collect();
    let mut ddw = [[0.0; 2]; 2];
    for t in 0..2 {
        for s in 0..2 {
            ddw[t][s] = (dn[t].dot(&dn[s]) + n.dot(&ddn[t][s]) - dw[t] * dw[s]) / w;
        }
    }
    let a3 = n / w;
    let da3: Vec<Vector3<f64>> = (0..2).map(|s| dn[s] / w - n * (dw[s] / (w * w))).collect();
    let mut dda3 = [[Vector3::zeros(); 2]; 2];
    for t in 0..2 {
        for s in 0..2 {
            dda3[t][s] = ddn[t][s] / w - dn[s] * (dw[t] / (w * w)) - dn[t] * (dw[s] / (w * w))
                - n * (ddw[t][s] / (w * w))
                + n * (2.0 * dw[s] * dw[t] / (w * w * w));
        }
    }

    let z = eps * x3;
    let g_vec = [a1 + z * da3[0], a2 + z * da3[1], a3];

    let det = g_vec[0].cross(&g_vec[1]).dot(&g_vec[2]);
    if det <= 0.0 {
        return Err(ShellError::ThicknessTooLarge { y1: y[0], y2: y[1], x3, eps, det });
    }

    // g_{alpha 3} = 0 and g_{33} = 1 hold identically (the normal fiber is
    // orthogonal to the shifted tangents and a3 is unit), so the metric has
    // exact arrow structure; only the in-plane block needs inversion.
    let mut g_cov = Matrix3::identity();
    for i in 0..2 {
        for j in 0..2 {
            g_cov[(i, j)] = g_vec[i].dot(&g_vec[j]);
        }
    }
    let block = nalgebra::Matrix2::new(g_cov[(0, 0)], g_cov[(0, 1)], g_cov[(1, 0)], g_cov[(1, 1)]);
    let det_block = block.determinant();
    if det_block <= 0.0 {
        return Err(ShellError::ThicknessTooLarge { y1: y[0], y2: y[1], x3, eps, det: det_block });
    }
    let block_inv =
        nalgebra::Matrix2::new(block[(1, 1)], -block[(0, 1)], -block[(1, 0)], block[(0, 0)])
            / det_block;
    let mut g_con = Matrix3::identity();
    for i in 0..2 {
        for j in 0..2 {
            g_con[(i, j)] = block_inv[(i, j)];
        }
    }

    // dg[i][j] = d_i g_j = d_i d_j Theta (physical derivatives, symmetric)
    let mut dg = [[Vector3::zeros(); 3]; 3];
    for b in 0..2 {
        for a in 0..2 {
            dg[b][a] = chart.d2(y, b, a) + z * dda3[b][a];
        }
        dg[2][b] = da3[b];
        dg[b][2] = da3[b];
    }
    dg[2][2] = Vector3::zeros();

    let mut g_con_vec = [Vector3::zeros(); 3];
    for p in 0..3 {
        g_con_vec[p] = g_con[(p, 0)] * g_vec[0] + g_con[(p, 1)] * g_vec[1] + g_con[(p, 2)] * g_vec[2];
    }
    let mut christoffel = [[[0.0; 3]; 3]; 3];
    for p in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                christoffel[p][i][j] = g_con_vec[p].dot(&dg[i][j]);
            }
        }
    }
    // Gamma^3_{alpha 3} and Gamma^p_{33} vanish structurally: d_3 g_3 = 0 and
    // the normal component of d_alpha a3 is identically zero.
    for alpha in 0..2 {
        christoffel[2][alpha][2] = 0.0;
        christoffel[2][2][alpha] = 0.0;
    }
    for p in 0..3 {
        christoffel[p][2][2] = 0.0;
    }

    Ok(Metrics3d {
        y,
        x3,
        eps,
        g_vec,
        g_cov,
        g_con,
        christoffel,
        det_g: det_block,
        sqrt_g: det_block.sqrt(),
    })
}

/// Largest half-thickness (from 1, halving) for which `det(g1, g2, g3) > 0`
/// across the sample lattice with `x3` spanning `[-1, 1]`.
pub fn epsilon0(chart: &Chart, n_lattice: usize) -> Result<f64> {
    let ys = chart.rect().lattice(n_lattice, n_lattice);
    let x3s = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut eps = 1.0;
    for _ in 0..60 {
        let ok = ys.iter().all(|&y| {
            x3s.iter().all(|&x3| eval_metrics3d(chart, y, x3, eps).is_ok())
        });
        if ok {
            return Ok(eps);
        }
        eps *= 0.5;
    }
    Err(ShellError::InvalidParameter(
        "no positive half-thickness keeps det(g1,g2,g3) > 0 on the lattice".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{eval_frame, Rect};
    use approx::assert_relative_eq;

    #[test]
    fn flat_plate_metrics_are_trivial() {
        let chart = Chart::FlatPlate { rect: Rect::unit() };
        for &eps in &[0.5, 0.1, 1e-3] {
            let m = eval_metrics3d(&chart, [0.3, 0.6], 0.7, eps).unwrap();
            assert_relative_eq!(m.g_cov, Matrix3::identity(), epsilon = 1e-15);
            assert_eq!(m.det_g, 1.0);
            for p in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(m.christoffel[p][i][j], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn structural_zeros_hold_exactly() {
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        let m = eval_metrics3d(&chart, [0.1, 0.2], 0.5, 0.1).unwrap();
        for alpha in 0..2 {
            assert_eq!(m.christoffel[2][alpha][2], 0.0);
            assert_eq!(m.christoffel[2][2][alpha], 0.0);
        }
        for p in 0..3 {
            assert_eq!(m.christoffel[p][2][2], 0.0);
        }
    }

    #[test]
    fn mixed_curvature_identity_for_gamma3() {
        // Gamma^3_ab(eps) = b_ab - eps x3 b^s_a b_sb holds exactly.
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        let y = [0.15, -0.2];
        let (x3, eps) = (0.4, 0.05);
        let f = eval_frame(&chart, y).unwrap();
        let m = eval_metrics3d(&chart, y, x3, eps).unwrap();
        let bb = f.b_cov * f.b_mix; // (b^s_a b_{s b}) = (b_cov b_mix) transposed pieces
        for a in 0..2 {
            for b in 0..2 {
                let bsq: f64 = (0..2).map(|s| f.b_mix[(s, a)] * f.b_cov[(s, b)]).sum();
                assert_relative_eq!(
                    m.christoffel[2][a][b],
                    f.b_cov[(a, b)] - eps * x3 * bsq,
                    epsilon = 1e-13
                );
                // same contraction either way
                assert_relative_eq!(bsq, bb[(b, a)], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn thickness_too_large_detected() {
        // curvature ~2 near the corner, so eps = 2 folds the normal fibers
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        match eval_metrics3d(&chart, [0.45, 0.45], 1.0, 2.0) {
            Err(ShellError::ThicknessTooLarge { .. }) => {}
            other => panic!("expected ThicknessTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn epsilon0_halving() {
        let chart = Chart::FlatPlate { rect: Rect::unit() };
        assert_eq!(epsilon0(&chart, 4).unwrap(), 1.0);
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        let e0 = epsilon0(&chart, 6).unwrap();
        assert!(e0 > 0.0 && e0 <= 1.0);
        // all sample evaluations must succeed at eps0
        for &y in chart.rect().lattice(6, 6).iter() {
            assert!(eval_metrics3d(&chart, y, -1.0, e0).is_ok());
        }
    }

    /// Richardson check on the second-order expansion of the in-plane
    /// Christoffel symbols at a fixed point of the paraboloid.
    #[test]
    fn christoffel_expansion_is_second_order() {
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        let y = [0.1, 0.2];
        let x3 = 0.5;
        let f = eval_frame(&chart, y).unwrap();
        let grad = crate::geometry::curvature_covariant_derivative(&chart, y).unwrap();
        let eps_list = [1e-1, 1e-2, 1e-3];
        let mut norms = Vec::new();
        for &eps in &eps_list {
            let m = eval_metrics3d(&chart, y, x3, eps).unwrap();
            let mut worst: f64 = 0.0;
            for s in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let rem = m.christoffel[s][a][b] - f.christoffel[s][a][b]
                            + eps * x3 * grad.comp[s][b][a];
                        worst = worst.max(rem.abs());
                    }
                }
            }
            norms.push(worst);
        }
        let slope = crate::geometry::loglog_slope(&eps_list, &norms);
        assert!((slope - 2.0).abs() < 0.2, "observed slope {slope}");
    }
}
