//! Assembly of the scaled three-dimensional problem on `omega x (-1, 1)`
//! and the thickness-averaging comparison functionals.

use nalgebra::{DVector, Matrix3, Vector6};

use super::mesh::{Lagrange1d, Mesh3d};
use crate::error::{Result, ShellError};
use crate::geometry::{eval_metrics3d, Chart, Metrics3d};
use crate::material::{tensor3d, MaterialParams, TensorKind3d, VOIGT3D_PAIRS};
use crate::quadrature::GaussRule;
use crate::shell2d::FunctionSpace2d;
use crate::sym::{SymMatrix, SymTriplets};

/// Assembled scaled 3D system (Kelvin-Voigt: elastic and viscous forms,
/// no memory term).
pub struct System3d {
    pub mesh: Mesh3d,
    pub chart: Chart,
    pub material: MaterialParams,
    pub eps: f64,
    pub m_a: SymMatrix,
    pub m_b: SymMatrix,
    /// `map[3*node + comp] -> free dof`, `None` on `Gamma_0`.
    pub dof_map: Vec<Option<usize>>,
    pub n_dofs: usize,
    pub quad_points: usize,
}

/// Scaled linearized strains `e_{i||j}(eps; v)` at a point, for a field
/// given by values `v[i]` and derivatives `dv[i][j] = d_j v_i` in the
/// scaled coordinates `(y1, y2, x3)`.
pub fn scaled_strain(
    metrics: &Metrics3d,
    eps: f64,
    v: &[f64; 3],
    dv: &[[f64; 3]; 3],
) -> Matrix3<f64> {
    let mut e = Matrix3::zeros();
    // physical derivatives: d^eps_alpha = d_alpha, d^eps_3 = (1/eps) d_3
    let d = |i: usize, j: usize| -> f64 {
        if j == 2 {
            dv[i][2] / eps
        } else {
            dv[i][j]
        }
    };
    for i in 0..3 {
        for j in 0..3 {
            let mut val = 0.5 * (d(i, j) + d(j, i));
            for p in 0..3 {
                val -= metrics.christoffel[p][i][j] * v[p];
            }
            e[(i, j)] = val;
        }
    }
    e
}

/// Engineering strain row `[e11, e22, e33, e23, e13, e12]` of a scalar
/// shape function `n` (derivatives `dn` in scaled coordinates) placed in
/// displacement component `comp`.
fn strain_row(metrics: &Metrics3d, eps: f64, comp: usize, n: f64, dn: [f64; 3]) -> Vector6<f64> {
    let d = |j: usize| if j == 2 { dn[2] / eps } else { dn[j] };
    let mut row = Vector6::zeros();
    for (m, &(i, j)) in VOIGT3D_PAIRS.iter().enumerate() {
        let mut v = -metrics.christoffel[comp][i][j] * n;
        if i == comp {
            v += 0.5 * d(j);
        }
        if j == comp {
            v += 0.5 * d(i);
        }
        row[m] = v;
    }
    row
}

struct ElementBasis {
    /// Per local node: global node indices.
    nodes: Vec<(usize, usize, usize)>,
    l1: Lagrange1d,
    l2: Lagrange1d,
    l3: Lagrange1d,
}

impl ElementBasis {
    fn shape(&self, t: (f64, f64, f64), scale: (f64, f64, f64)) -> (Vec<f64>, Vec<[f64; 3]>) {
        let (v1, d1) = self.l1.eval(t.0);
        let (v2, d2) = self.l2.eval(t.1);
        let (v3, d3) = self.l3.eval(t.2);
        let mut vals = Vec::with_capacity(self.nodes.len());
        let mut ders = Vec::with_capacity(self.nodes.len());
        let mut idx = 0;
        for j1 in 0..v1.len() {
            for j2 in 0..v2.len() {
                for j3 in 0..v3.len() {
                    vals.push(v1[j1] * v2[j2] * v3[j3]);
                    ders.push([
                        d1[j1] * v2[j2] * v3[j3] / scale.0,
                        v1[j1] * d2[j2] * v3[j3] / scale.1,
                        v1[j1] * v2[j2] * d3[j3] / scale.2,
                    ]);
                    idx += 1;
                }
            }
        }
        debug_assert_eq!(idx, self.nodes.len());
        (vals, ders)
    }
}

fn element_basis(mesh: &Mesh3d, e: (usize, usize, usize)) -> ElementBasis {
    let o = mesh.element_origin(e);
    let q = mesh.orders;
    let mut nodes = Vec::with_capacity((q.0 + 1) * (q.1 + 1) * (q.2 + 1));
    for j1 in 0..=q.0 {
        for j2 in 0..=q.1 {
            for j3 in 0..=q.2 {
                nodes.push((o.0 + j1, o.1 + j2, o.2 + j3));
            }
        }
    }
    ElementBasis {
        nodes,
        l1: Lagrange1d::new(q.0),
        l2: Lagrange1d::new(q.1),
        l3: Lagrange1d::new(q.2),
    }
}

/// Assembles the elastic (`m_a`) and viscous (`m_b`) forms of the scaled 3D
/// problem.  `quad_points` Gauss points per direction (at least 3).
pub fn assemble_3d(
    chart: &Chart,
    material: &MaterialParams,
    mesh: &Mesh3d,
    eps: f64,
    quad_points: usize,
) -> Result<System3d> {
    if mesh.clamped.is_empty() {
        return Err(ShellError::SingularSpace);
    }
    material.validate()?;
    let points = quad_points.max(3);
    let rule = GaussRule::new(points);
    let (dof_map, n_dofs) = mesh.dof_map();
    if n_dofs == 0 {
        return Err(ShellError::SingularSpace);
    }

    let mut tri_a = SymTriplets::new(n_dofs);
    let mut tri_b = SymTriplets::new(n_dofs);
    let ref_pts = rule.mapped(0.0, 1.0);

    for e1 in 0..mesh.n.0 {
        for e2 in 0..mesh.n.1 {
            for e3 in 0..mesh.n.2 {
                let eb = element_basis(mesh, (e1, e2, e3));
                let (b1, b2, b3) = mesh.element_bounds((e1, e2, e3));
                let scale = (b1[1] - b1[0], b2[1] - b2[0], b3[1] - b3[0]);
                // free dofs of this element, with their local (node, comp) slots
                let mut local: Vec<(usize, usize, usize)> = Vec::new(); // (local node, comp, global dof)
                for (ln, &nd) in eb.nodes.iter().enumerate() {
                    let node = mesh.node_index(nd);
                    for c in 0..3 {
                        if let Some(gd) = dof_map[3 * node + c] {
                            local.push((ln, c, gd));
                        }
                    }
                }
                let nl = local.len();
                let mut ka = nalgebra::DMatrix::<f64>::zeros(nl, nl);
                let mut kb = nalgebra::DMatrix::<f64>::zeros(nl, nl);

                for &(g1, w1) in &ref_pts {
                    for &(g2, w2) in &ref_pts {
                        for &(g3, w3) in &ref_pts {
                            let y = [b1[0] + g1 * scale.0, b2[0] + g2 * scale.1];
                            let x3 = b3[0] + g3 * scale.2;
                            let metrics = eval_metrics3d(chart, y, x3, eps)?;
                            let ca = tensor3d(TensorKind3d::Elasticity, material, &metrics)
                                .assembly_matrix();
                            let cb = tensor3d(TensorKind3d::Viscosity, material, &metrics)
                                .assembly_matrix();
                            let w = w1 * w2 * w3 * scale.0 * scale.1 * scale.2 * metrics.sqrt_g;

                            let (vals, ders) = eb.shape((g1, g2, g3), scale);
                            let rows: Vec<Vector6<f64>> = local
                                .iter()
                                .map(|&(ln, c, _)| strain_row(&metrics, eps, c, vals[ln], ders[ln]))
                                .collect();
                            for i in 0..nl {
                                let cari = ca * rows[i];
                                let cbri = cb * rows[i];
                                for j in i..nl {
                                    ka[(i, j)] += w * rows[j].dot(&cari);
                                    kb[(i, j)] += w * rows[j].dot(&cbri);
                                }
                            }
                        }
                    }
                }

                for i in 0..nl {
                    for j in i..nl {
                        let (gi, gj) = (local[i].2, local[j].2);
                        let (lo, hi) = if gi <= gj { (gi, gj) } else { (gj, gi) };
                        tri_a.add_upper(lo, hi, ka[(i, j)]);
                        tri_b.add_upper(lo, hi, kb[(i, j)]);
                    }
                }
            }
        }
    }

    Ok(System3d {
        mesh: mesh.clone(),
        chart: chart.clone(),
        material: *material,
        eps,
        m_a: tri_a.into_matrix(),
        m_b: tri_b.into_matrix(),
        dof_map,
        n_dofs,
        quad_points: points,
    })
}

impl System3d {
    /// Load vector of scaled body force `eps^p f^{i,p}(y, x3, t-fixed)` plus
    /// top/bottom tractions `eps^p h^{i,p+1}`, in contravariant components.
    pub fn assemble_load(
        &self,
        force_order: i32,
        f: &dyn Fn([f64; 2], f64) -> [f64; 3],
        h_top: &dyn Fn([f64; 2]) -> [f64; 3],
        h_bottom: &dyn Fn([f64; 2]) -> [f64; 3],
    ) -> Result<DVector<f64>> {
        let mesh = &self.mesh;
        let rule = GaussRule::new(self.quad_points);
        let mut load = DVector::zeros(self.n_dofs);
        let epsp = self.eps.powi(force_order);

        for e1 in 0..mesh.n.0 {
            for e2 in 0..mesh.n.1 {
                for e3 in 0..mesh.n.2 {
                    let eb = element_basis(mesh, (e1, e2, e3));
                    let (b1, b2, b3) = mesh.element_bounds((e1, e2, e3));
                    let scale = (b1[1] - b1[0], b2[1] - b2[0], b3[1] - b3[0]);
                    let dofs: Vec<[Option<usize>; 3]> = eb
                        .nodes
                        .iter()
                        .map(|&nd| {
                            let node = mesh.node_index(nd);
                            [dof_map_get(&self.dof_map, node, 0), dof_map_get(&self.dof_map, node, 1), dof_map_get(&self.dof_map, node, 2)]
                        })
                        .collect();

                    // volume force
                    for &(g1, w1) in rule.mapped(0.0, 1.0).iter() {
                        for &(g2, w2) in rule.mapped(0.0, 1.0).iter() {
                            for &(g3, w3) in rule.mapped(0.0, 1.0).iter() {
                                let y = [b1[0] + g1 * scale.0, b2[0] + g2 * scale.1];
                                let x3 = b3[0] + g3 * scale.2;
                                let metrics = eval_metrics3d(&self.chart, y, x3, self.eps)?;
                                let w = w1 * w2 * w3 * scale.0 * scale.1 * scale.2 * metrics.sqrt_g;
                                let fv = f(y, x3);
                                let (vals, _) = eb.shape((g1, g2, g3), scale);
                                for (ln, dcomp) in dofs.iter().enumerate() {
                                    for c in 0..3 {
                                        if let Some(gd) = dcomp[c] {
                                            load[gd] += epsp * w * fv[c] * vals[ln];
                                        }
                                    }
                                }
                            }
                        }
                    }

                    // top/bottom tractions on the faces x3 = +-1
                    for (face_e3, t3, h) in
                        [(mesh.n.2 - 1, 1.0, &h_top), (0usize, 0.0, &h_bottom)]
                    {
                        if e3 != face_e3 {
                            continue;
                        }
                        let x3 = if t3 > 0.5 { 1.0 } else { -1.0 };
                        for &(g1, w1) in rule.mapped(0.0, 1.0).iter() {
                            for &(g2, w2) in rule.mapped(0.0, 1.0).iter() {
                                let y = [b1[0] + g1 * scale.0, b2[0] + g2 * scale.1];
                                let metrics = eval_metrics3d(&self.chart, y, x3, self.eps)?;
                                let w = w1 * w2 * scale.0 * scale.1 * metrics.sqrt_g;
                                let hv = h(y);
                                let (vals, _) = eb.shape((g1, g2, t3), scale);
                                for (ln, dcomp) in dofs.iter().enumerate() {
                                    for c in 0..3 {
                                        if let Some(gd) = dcomp[c] {
                                            load[gd] += epsp * w * hv[c] * vals[ln];
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(load)
    }

    /// Expands a free-dof vector to the full nodal vector (clamped nodes
    /// zero), laid out as `3*node + comp`.
    pub fn expand(&self, xi: &DVector<f64>) -> DVector<f64> {
        let mut full = DVector::zeros(3 * self.mesh.n_nodes());
        for (slot, dof) in self.dof_map.iter().enumerate() {
            if let Some(d) = dof {
                full[slot] = xi[*d];
            }
        }
        full
    }
}

fn dof_map_get(map: &[Option<usize>], node: usize, comp: usize) -> Option<usize> {
    map[3 * node + comp]
}

/// Thickness average `u_i(y) = 1/2 int_{-1}^{1} u_i(y, x3) dx3` per
/// in-plane node, by the trapezoidal rule across node layers.  Input is the
/// full nodal vector; output is laid out `3*(i1*m2+i2) + comp`.
pub fn thickness_average(mesh: &Mesh3d, full: &DVector<f64>) -> DVector<f64> {
    let m = mesh.m();
    let mut avg = DVector::zeros(3 * m.0 * m.1);
    let dz = 2.0 / (m.2 - 1) as f64;
    for i1 in 0..m.0 {
        for i2 in 0..m.1 {
            for c in 0..3 {
                let mut acc = 0.0;
                for i3 in 0..m.2 {
                    let wz = if i3 == 0 || i3 == m.2 - 1 { 0.5 } else { 1.0 };
                    acc += wz * full[3 * mesh.node_index((i1, i2, i3)) + c];
                }
                avg[3 * (i1 * m.1 + i2) + c] = 0.5 * acc * dz;
            }
        }
    }
    avg
}

/// Evaluates the in-plane interpolant of a thickness-averaged nodal field.
pub fn eval_average(mesh: &Mesh3d, avg: &DVector<f64>, y: [f64; 2]) -> [f64; 3] {
    let m = mesh.m();
    let q = (mesh.orders.0, mesh.orders.1);
    let w1 = mesh.rect.len1() / mesh.n.0 as f64;
    let w2 = mesh.rect.len2() / mesh.n.1 as f64;
    let e1 = (((y[0] - mesh.rect.a1) / w1).floor() as isize).clamp(0, mesh.n.0 as isize - 1) as usize;
    let e2 = (((y[1] - mesh.rect.a2) / w2).floor() as isize).clamp(0, mesh.n.1 as isize - 1) as usize;
    let t1 = (y[0] - mesh.rect.a1 - e1 as f64 * w1) / w1;
    let t2 = (y[1] - mesh.rect.a2 - e2 as f64 * w2) / w2;
    let (v1, _) = Lagrange1d::new(q.0).eval(t1);
    let (v2, _) = Lagrange1d::new(q.1).eval(t2);
    let mut out = [0.0; 3];
    for j1 in 0..=q.0 {
        for j2 in 0..=q.1 {
            let i1 = e1 * q.0 + j1;
            let i2 = e2 * q.1 + j2;
            let base = 3 * (i1 * m.1 + i2);
            for c in 0..3 {
                out[c] += v1[j1] * v2[j2] * avg[base + c];
            }
        }
    }
    out
}

/// Relative `L^2(omega)` distance between a thickness-averaged 3D field and
/// a 2D spline field, per component: returns
/// `(sum_i int (avg_i - xi_i)^2 dy, sum_i int xi_i^2 dy)` split by component.
pub fn l2_error_split(
    mesh: &Mesh3d,
    avg: &DVector<f64>,
    space: &FunctionSpace2d,
    coeffs: &DVector<f64>,
) -> ([f64; 3], [f64; 3]) {
    let rule = GaussRule::new(3);
    let mut num = [0.0; 3];
    let mut den = [0.0; 3];
    for e1 in 0..mesh.n.0 {
        for e2 in 0..mesh.n.1 {
            let (b1, b2, _) = mesh.element_bounds((e1, e2, 0));
            for &(x1, w1) in rule.mapped(b1[0], b1[1]).iter() {
                for &(x2, w2) in rule.mapped(b2[0], b2[1]).iter() {
                    let y = [x1, x2];
                    let ua = eval_average(mesh, avg, y);
                    let ux = space.eval_displacement(coeffs, y);
                    let w = w1 * w2;
                    for c in 0..3 {
                        num[c] += w * (ua[c] - ux[c]) * (ua[c] - ux[c]);
                        den[c] += w * ux[c] * ux[c];
                    }
                }
            }
        }
    }
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EdgeSet, Rect};
    use approx::assert_relative_eq;

    fn flat_chart() -> Chart {
        Chart::FlatPlate { rect: Rect::unit() }
    }

    #[test]
    fn scaled_strain_flat_examples() {
        let chart = flat_chart();
        let eps = 0.1;
        let m = eval_metrics3d(&chart, [0.3, 0.4], 0.2, eps).unwrap();
        // v = (0, 0, x3): e_33 = 1/eps, others zero
        let v = [0.0, 0.0, 0.2];
        let dv = [[0.0; 3], [0.0; 3], [0.0, 0.0, 1.0]];
        let e = scaled_strain(&m, eps, &v, &dv);
        assert_relative_eq!(e[(2, 2)], 10.0);
        assert_relative_eq!(e[(0, 0)], 0.0);
        assert_relative_eq!(e[(0, 2)], 0.0);
        // constant field: all strains zero
        let e = scaled_strain(&m, eps, &[0.3, -0.2, 0.9], &[[0.0; 3]; 3]);
        assert_relative_eq!(e.norm(), 0.0);
    }

    /// Scaled strains match the physical strains of the transported field
    /// on the physical domain (change-of-variables consistency).
    #[test]
    fn scaled_strain_change_of_variables() {
        let chart = Chart::Cylinder { radius: 1.0, rect: Rect::new(0.0, 1.5, 0.0, 1.0) };
        let eps = 0.05;
        // polynomial field in PHYSICAL coordinates (y1, y2, z), z = eps*x3
        let wfun = |y: [f64; 2], z: f64| -> [f64; 3] {
            [y[0] * y[0] - 2.0 * z + y[1] * z, 0.5 * y[1] + y[0] * z, z * z + 0.3 * y[0] * y[1]]
        };
        let dw = |y: [f64; 2], z: f64| -> [[f64; 3]; 3] {
            // dw[i][j] = d w_i / d (y1, y2, z)
            [
                [2.0 * y[0], z, -2.0 + y[1]],
                [z, 0.5, y[0]],
                [0.3 * y[1], 0.3 * y[0], 2.0 * z],
            ]
        };
        let (y, x3) = ([0.7, 0.4], 0.6);
        let z = eps * x3;
        let metrics = eval_metrics3d(&chart, y, x3, eps).unwrap();

        // scaled route: v(x) = w(y, eps x3), dv in scaled coordinates
        let v = wfun(y, z);
        let dwp = dw(y, z);
        let mut dv = [[0.0; 3]; 3];
        for i in 0..3 {
            dv[i][0] = dwp[i][0];
            dv[i][1] = dwp[i][1];
            dv[i][2] = eps * dwp[i][2];
        }
        let e_scaled = scaled_strain(&metrics, eps, &v, &dv);

        // physical route: e_ij = (d_j w_i + d_i w_j)/2 - Gamma^p_ij w_p with
        // the same physical symbols
        let mut e_phys = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut val = 0.5 * (dwp[i][j] + dwp[j][i]);
                for p in 0..3 {
                    val -= metrics.christoffel[p][i][j] * v[p];
                }
                e_phys[(i, j)] = val;
            }
        }
        assert_relative_eq!((e_scaled - e_phys).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_force_zero_load_and_empty_clamp_rejected() {
        let chart = flat_chart();
        let m = MaterialParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let mesh = Mesh3d::new(Rect::unit(), (2, 2, 1), (1, 1, 1), EdgeSet::all());
        let sys = assemble_3d(&chart, &m, &mesh, 0.1, 3).unwrap();
        let load = sys
            .assemble_load(0, &|_, _| [0.0; 3], &|_| [0.0; 3], &|_| [0.0; 3])
            .unwrap();
        assert_eq!(load.norm(), 0.0);

        let free = Mesh3d::new(Rect::unit(), (2, 2, 1), (1, 1, 1), EdgeSet::none());
        assert!(matches!(
            assemble_3d(&chart, &m, &free, 0.1, 3),
            Err(ShellError::SingularSpace)
        ));
    }

    #[test]
    fn matrices_are_spd_on_benchmarks() {
        let m = MaterialParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        for (chart, rect) in [
            (flat_chart(), Rect::unit()),
            (Chart::Cylinder { radius: 1.0, rect: Rect::new(0.0, 1.5, 0.0, 1.0) }, Rect::new(0.0, 1.5, 0.0, 1.0)),
            (Chart::Paraboloid { rect: Rect::new(-0.5, 0.5, -0.5, 0.5) }, Rect::new(-0.5, 0.5, -0.5, 0.5)),
        ] {
            let mesh = Mesh3d::new(rect, (3, 3, 1), (1, 1, 1), EdgeSet::all());
            let sys = assemble_3d(&chart, &m, &mesh, 0.1, 3).unwrap();
            assert_eq!(sys.m_a.asymmetry(), 0.0);
            assert_eq!(sys.m_b.asymmetry(), 0.0);
            assert!(sys.m_a.factorize().is_ok(), "elastic matrix not SPD");
            assert!(sys.m_b.factorize().is_ok(), "viscous matrix not SPD");
        }
    }

    #[test]
    fn thickness_average_rules() {
        let mesh = Mesh3d::new(Rect::unit(), (2, 2, 4), (1, 1, 1), EdgeSet::all());
        let m = mesh.m();
        let mut constant = DVector::zeros(3 * mesh.n_nodes());
        let mut linear = DVector::zeros(3 * mesh.n_nodes());
        let mut quadratic = DVector::zeros(3 * mesh.n_nodes());
        for i1 in 0..m.0 {
            for i2 in 0..m.1 {
                for i3 in 0..m.2 {
                    let (_, x3) = mesh.node_coord((i1, i2, i3));
                    let node = mesh.node_index((i1, i2, i3));
                    constant[3 * node] = 2.5;
                    linear[3 * node] = x3;
                    quadratic[3 * node] = x3 * x3;
                }
            }
        }
        let avg_c = thickness_average(&mesh, &constant);
        let avg_l = thickness_average(&mesh, &linear);
        let avg_q = thickness_average(&mesh, &quadratic);
        for i in 0..m.0 * m.1 {
            assert_relative_eq!(avg_c[3 * i], 2.5, epsilon = 1e-14);
            assert_relative_eq!(avg_l[3 * i], 0.0, epsilon = 1e-14);
            // trapezoidal: 1/3 + O(layers^-2)
            assert_relative_eq!(avg_q[3 * i], 1.0 / 3.0, epsilon = 0.05);
            assert!((avg_q[3 * i] - 1.0 / 3.0).abs() > 1e-6);
        }
    }
}
