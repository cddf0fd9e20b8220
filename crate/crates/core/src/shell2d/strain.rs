//! Linearized membrane strain `gamma` (change of metric) and bending strain
//! `rho` (change of curvature) of a surface displacement field.

use nalgebra::Matrix2;

use crate::geometry::{CurvatureGradient, SurfaceFrame};

/// `gamma_ab(eta) = (d_b eta_a + d_a eta_b)/2 - Gamma^s_ab eta_s - b_ab eta_3`
/// for a field given by values `eta[i]` and gradients `deta[i][alpha] =
/// d_alpha eta_i` at one point.
pub fn gamma(frame: &SurfaceFrame, eta: &[f64; 3], deta: &[[f64; 2]; 3]) -> Matrix2<f64> {
    let mut g = Matrix2::zeros();
    for al in 0..2 {
        for be in 0..2 {
            let mut v = 0.5 * (deta[al][be] + deta[be][al]);
            for s in 0..2 {
                v -= frame.christoffel[s][al][be] * eta[s];
            }
            v -= frame.b_cov[(al, be)] * eta[2];
            g[(al, be)] = v;
        }
    }
    g
}

/// `rho_ab(eta)` per the change-of-curvature formula; needs the covariant
/// curvature gradient and second derivatives of the normal component.
pub fn rho(
    frame: &SurfaceFrame,
    bgrad: &CurvatureGradient,
    eta: &[f64; 3],
    deta: &[[f64; 2]; 3],
    d2eta3: &Matrix2<f64>,
) -> Matrix2<f64> {
    let mut r = Matrix2::zeros();
    for al in 0..2 {
        for be in 0..2 {
            let mut v = d2eta3[(al, be)];
            for s in 0..2 {
                v -= frame.christoffel[s][al][be] * deta[2][s];
            }
            let mut bb = 0.0;
            for s in 0..2 {
                bb += frame.b_mix[(s, al)] * frame.b_cov[(s, be)];
            }
            v -= bb * eta[2];
            // b^s_a (d_b eta_s - Gamma^t_bs eta_t) + b^t_b (d_a eta_t - Gamma^s_at eta_s)
            for s in 0..2 {
                let mut term = deta[s][be];
                for t in 0..2 {
                    term -= frame.christoffel[t][be][s] * eta[t];
                }
                v += frame.b_mix[(s, al)] * term;
            }
            for t in 0..2 {
                let mut term = deta[t][al];
                for s in 0..2 {
                    term -= frame.christoffel[s][al][t] * eta[s];
                }
                v += frame.b_mix[(t, be)] * term;
            }
            for t in 0..2 {
                v += bgrad.comp[t][be][al] * eta[t];
            }
            r[(al, be)] = v;
        }
    }
    // symmetric by Codazzi; enforce exactly
    let off = 0.5 * (r[(0, 1)] + r[(1, 0)]);
    r[(0, 1)] = off;
    r[(1, 0)] = off;
    r
}

/// Engineering strain row `[gamma_11, gamma_22, gamma_12]` of a scalar basis
/// function `N` placed in displacement component `comp`.
pub fn gamma_row(frame: &SurfaceFrame, comp: usize, n: f64, dn: [f64; 2]) -> [f64; 3] {
    let entry = |al: usize, be: usize| -> f64 {
        if comp < 2 {
            let mut v = -frame.christoffel[comp][al][be] * n;
            if al == comp {
                v += 0.5 * dn[be];
            }
            if be == comp {
                v += 0.5 * dn[al];
            }
            v
        } else {
            -frame.b_cov[(al, be)] * n
        }
    };
    [entry(0, 0), entry(1, 1), entry(0, 1)]
}

/// Engineering bending row `[rho_11, rho_22, rho_12]` of a scalar basis
/// function in component `comp`; `d2n` is its Hessian (only used for the
/// normal component).
pub fn rho_row(
    frame: &SurfaceFrame,
    bgrad: &CurvatureGradient,
    comp: usize,
    n: f64,
    dn: [f64; 2],
    d2n: &Matrix2<f64>,
) -> [f64; 3] {
    let entry = |al: usize, be: usize| -> f64 {
        if comp == 2 {
            let mut v = d2n[(al, be)];
            for s in 0..2 {
                v -= frame.christoffel[s][al][be] * dn[s];
            }
            let mut bb = 0.0;
            for s in 0..2 {
                bb += frame.b_mix[(s, al)] * frame.b_cov[(s, be)];
            }
            v - bb * n
        } else {
            let mut v = frame.b_mix[(comp, al)] * dn[be] + frame.b_mix[(comp, be)] * dn[al];
            for s in 0..2 {
                v -= frame.b_mix[(s, al)] * frame.christoffel[comp][be][s] * n;
                v -= frame.b_mix[(s, be)] * frame.christoffel[comp][al][s] * n;
            }
            v + bgrad.comp[comp][be][al] * n
        }
    };
    let r01 = 0.5 * (entry(0, 1) + entry(1, 0));
    [entry(0, 0), entry(1, 1), r01]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{curvature_covariant_derivative, eval_frame, Chart, Rect};
    use approx::assert_relative_eq;

    fn flat() -> SurfaceFrame {
        eval_frame(&Chart::FlatPlate { rect: Rect::unit() }, [0.3, 0.4]).unwrap()
    }

    fn cylinder_frame_and_grad() -> (SurfaceFrame, CurvatureGradient) {
        let chart = Chart::Cylinder { radius: 1.0, rect: Rect::new(0.0, 1.5, 0.0, 1.0) };
        (
            eval_frame(&chart, [0.4, 0.3]).unwrap(),
            curvature_covariant_derivative(&chart, [0.4, 0.3]).unwrap(),
        )
    }

    #[test]
    fn gamma_of_infinitesimal_rotation_vanishes() {
        // eta = c*(y2, -y1, 0) on the flat plate
        let f = flat();
        let c = 0.37;
        let eta = [c * f.y[1], -c * f.y[0], 0.0];
        let deta = [[0.0, c], [-c, 0.0], [0.0, 0.0]];
        let g = gamma(&f, &eta, &deta);
        assert_relative_eq!(g.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn gamma_of_plane_stretch() {
        // eta = (y1, 0, 0): gamma_11 = 1, others 0
        let f = flat();
        let eta = [f.y[0], 0.0, 0.0];
        let deta = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]];
        let g = gamma(&f, &eta, &deta);
        assert_relative_eq!(g[(0, 0)], 1.0);
        assert_relative_eq!(g[(0, 1)], 0.0);
        assert_relative_eq!(g[(1, 1)], 0.0);
    }

    #[test]
    fn gamma_of_normal_displacement_is_minus_curvature() {
        let (f, _) = cylinder_frame_and_grad();
        let eta = [0.0, 0.0, 1.0];
        let deta = [[0.0; 2]; 3];
        let g = gamma(&f, &eta, &deta);
        for al in 0..2 {
            for be in 0..2 {
                assert_relative_eq!(g[(al, be)], -f.b_cov[(al, be)], epsilon = 1e-13);
            }
        }
        assert_relative_eq!(g[(0, 0)].abs(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(g[(1, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rho_on_flat_plate_is_hessian() {
        let f = flat();
        let bg = CurvatureGradient { comp: [[[0.0; 2]; 2]; 2] };
        // eta3 = y1^2: Hessian diag(2, 0)
        let eta = [0.0, 0.0, f.y[0] * f.y[0]];
        let deta = [[0.0; 2], [0.0; 2], [2.0 * f.y[0], 0.0]];
        let h = Matrix2::new(2.0, 0.0, 0.0, 0.0);
        let r = rho(&f, &bg, &eta, &deta, &h);
        assert_relative_eq!(r[(0, 0)], 2.0);
        assert_relative_eq!(r[(1, 1)], 0.0);
        assert_relative_eq!(r[(0, 1)], 0.0);
    }

    #[test]
    fn rho_of_unit_normal_on_cylinder() {
        let (f, bg) = cylinder_frame_and_grad();
        let eta = [0.0, 0.0, 1.0];
        let deta = [[0.0; 2]; 3];
        let r = rho(&f, &bg, &eta, &deta, &Matrix2::zeros());
        // rho_ab = -b^s_a b_sb: |rho_11| = 1 for the unit cylinder
        for al in 0..2 {
            for be in 0..2 {
                let mut want = 0.0;
                for s in 0..2 {
                    want -= f.b_mix[(s, al)] * f.b_cov[(s, be)];
                }
                assert_relative_eq!(r[(al, be)], want, epsilon = 1e-12);
            }
        }
        assert_relative_eq!(r[(0, 0)].abs(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn rows_match_full_evaluation() {
        // basis-function rows agree with gamma/rho of the corresponding field
        let chart = Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) };
        let y = [0.12, -0.27];
        let f = eval_frame(&chart, y).unwrap();
        let bg = curvature_covariant_derivative(&chart, y).unwrap();
        let n = 0.83;
        let dn = [0.41, -0.9];
        let d2n = Matrix2::new(1.3, 0.2, 0.2, -0.5);
        for comp in 0..3 {
            let mut eta = [0.0; 3];
            let mut deta = [[0.0; 2]; 3];
            eta[comp] = n;
            deta[comp] = dn;
            let hess = if comp == 2 { d2n } else { Matrix2::zeros() };
            let g = gamma(&f, &eta, &deta);
            let gr = gamma_row(&f, comp, n, dn);
            assert_relative_eq!(gr[0], g[(0, 0)], epsilon = 1e-14);
            assert_relative_eq!(gr[1], g[(1, 1)], epsilon = 1e-14);
            assert_relative_eq!(gr[2], g[(0, 1)], epsilon = 1e-14);
            let r = rho(&f, &bg, &eta, &deta, &hess);
            let rr = rho_row(&f, &bg, comp, n, dn, &hess);
            assert_relative_eq!(rr[0], r[(0, 0)], epsilon = 1e-13);
            assert_relative_eq!(rr[1], r[(1, 1)], epsilon = 1e-13);
            assert_relative_eq!(rr[2], r[(0, 1)], epsilon = 1e-13);
        }
    }
}
