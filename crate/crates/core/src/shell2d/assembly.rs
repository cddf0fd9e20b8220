//! Galerkin assembly of the two-dimensional shell systems and of the
//! Gram matrices used by coercivity and diagnostic checks.

use std::io::Write;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3};

use super::space::{FunctionSpace2d, ShellModel};
use super::strain::{gamma_row, rho_row};
use crate::error::{Result, ShellError};
use crate::geometry::{curvature_covariant_derivative, eval_frame, Chart};
use crate::material::{memory_constants, tensor2d, MaterialParams, MemoryConstants, TensorKind2d};
use crate::quadrature::GaussRule;
use crate::sym::SymMatrix;

/// Assembled membrane or flexural system.
///
/// `m_a`, `m_b`, `m_c` are the matrices of the stiffness, viscosity and
/// memory bilinear forms on the constrained space.  The membrane model
/// carries the factor `eps`; the flexural model carries `eps^3/3` on the
/// bending forms plus the `eps`-scaled membrane forms of the same tensors
/// (the inextensionality constraint of the flexural limit is not imposed on
/// the discrete space; the membrane part is what penalizes stretching, and
/// without it the bending forms alone are singular on curved charts).
pub struct ShellSystem {
    pub space: FunctionSpace2d,
    pub chart: Chart,
    pub material: MaterialParams,
    pub memory: MemoryConstants,
    pub model: ShellModel,
    pub eps: f64,
    pub quad_points: usize,
    pub m_a: SymMatrix,
    pub m_b: SymMatrix,
    pub m_c: SymMatrix,
}

struct LocalBasis {
    dof: usize,
    n: f64,
    dn: [f64; 2],
    d2n: Matrix2<f64>,
    comp: usize,
}

fn local_basis_at(
    space: &FunctionSpace2d,
    span: (usize, usize),
    y: [f64; 2],
    need_hessian: bool,
) -> Vec<LocalBasis> {
    let mut out = Vec::new();
    for c in 0..3 {
        let Some(cs) = space.components[c].as_ref() else { continue };
        let nd = if need_hessian && c == 2 { 2 } else { 1 };
        let e1 = cs.s1.basis.eval(span.0, y[0], nd.min(cs.s1.basis.degree));
        let e2 = cs.s2.basis.eval(span.1, y[1], nd.min(cs.s2.basis.degree));
        let d2_1 = e1.ders.len() > 2;
        let d2_2 = e2.ders.len() > 2;
        for (j1, &b1) in e1.ders[0].iter().enumerate() {
            let Some(a1) = cs.s1.index_of[e1.first + j1] else { continue };
            for (j2, &b2) in e2.ders[0].iter().enumerate() {
                let Some(a2) = cs.s2.index_of[e2.first + j2] else { continue };
                let db1 = e1.ders[1][j1];
                let db2 = e2.ders[1][j2];
                let d2n = if need_hessian && c == 2 {
                    let dd1 = if d2_1 { e1.ders[2][j1] } else { 0.0 };
                    let dd2 = if d2_2 { e2.ders[2][j2] } else { 0.0 };
                    Matrix2::new(dd1 * b2, db1 * db2, db1 * db2, b1 * dd2)
                } else {
                    Matrix2::zeros()
                };
                out.push(LocalBasis {
                    dof: space.global_index(c, a1, a2),
                    n: b1 * b2,
                    dn: [db1 * b2, b1 * db2],
                    d2n,
                    comp: c,
                });
            }
        }
    }
    out
}

fn quad_grid(space: &FunctionSpace2d, points: usize) -> (GaussRule, Vec<Vec<(f64, f64)>>, Vec<Vec<(f64, f64)>>) {
    let rule = GaussRule::new(points);
    let basis = space
        .components
        .iter()
        .flatten()
        .next()
        .expect("nonempty space");
    let spans1 = (0..basis.s1.basis.n_spans)
        .map(|s| {
            let (a, b) = basis.s1.basis.span_bounds(s);
            rule.mapped(a, b)
        })
        .collect();
    let spans2 = (0..basis.s2.basis.n_spans)
        .map(|s| {
            let (a, b) = basis.s2.basis.span_bounds(s);
            rule.mapped(a, b)
        })
        .collect();
    (rule, spans1, spans2)
}

/// Assembles the shell system for the space's model.  `quad_points`
/// defaults to `max degree + 2` Gauss points per knot span per direction.
pub fn assemble(
    chart: &Chart,
    material: &MaterialParams,
    space: &FunctionSpace2d,
    eps: f64,
    quad_points: Option<usize>,
) -> Result<ShellSystem> {
    if space.dim == 0 {
        return Err(ShellError::SingularSpace);
    }
    if !(eps > 0.0) {
        return Err(ShellError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    material.validate()?;
    let memory = memory_constants(material)?;
    let points = quad_points.unwrap_or(space.max_degree + 2);
    let flexural = space.model == ShellModel::Flexural;

    let n = space.dim;
    let mut m_a = DMatrix::zeros(n, n);
    let mut m_b = DMatrix::zeros(n, n);
    let mut m_c = DMatrix::zeros(n, n);

    let (_, spans1, spans2) = quad_grid(space, points);
    let (w_gamma, w_rho) = if flexural { (eps, eps * eps * eps / 3.0) } else { (eps, 0.0) };

    for (s1, pts1) in spans1.iter().enumerate() {
        for (s2, pts2) in spans2.iter().enumerate() {
            for &(x1, w1) in pts1 {
                for &(x2, w2) in pts2 {
                    let y = [x1, x2];
                    let frame = eval_frame(chart, y)?;
                    let bgrad = if flexural {
                        Some(curvature_covariant_derivative(chart, y)?)
                    } else {
                        None
                    };
                    let ca = tensor2d(TensorKind2d::Stiffness, material, &frame)?.assembly_matrix();
                    let cb = tensor2d(TensorKind2d::Viscosity, material, &frame)?.assembly_matrix();
                    let cc = tensor2d(TensorKind2d::Memory, material, &frame)?.assembly_matrix();

                    let locals = local_basis_at(space, (s1, s2), y, flexural);
                    let w = w1 * w2 * frame.sqrt_a;

                    let g_rows: Vec<[f64; 3]> = locals
                        .iter()
                        .map(|l| gamma_row(&frame, l.comp, l.n, l.dn))
                        .collect();
                    let r_rows: Vec<[f64; 3]> = if let Some(bg) = &bgrad {
                        locals
                            .iter()
                            .map(|l| rho_row(&frame, bg, l.comp, l.n, l.dn, &l.d2n))
                            .collect()
                    } else {
                        Vec::new()
                    };

                    for (i, li) in locals.iter().enumerate() {
                        for (j, lj) in locals.iter().enumerate().skip(i) {
                            let pair = |c: &Matrix3<f64>, rows: &Vec<[f64; 3]>, scale: f64| {
                                if scale == 0.0 || rows.is_empty() {
                                    return 0.0;
                                }
                                let ri = rows[i];
                                let rj = rows[j];
                                let mut v = 0.0;
                                for p in 0..3 {
                                    for q in 0..3 {
                                        v += ri[p] * c[(p, q)] * rj[q];
                                    }
                                }
                                scale * v
                            };
                            let va = w * (pair(&ca, &g_rows, w_gamma) + pair(&ca, &r_rows, w_rho));
                            let vb = w * (pair(&cb, &g_rows, w_gamma) + pair(&cb, &r_rows, w_rho));
                            let vc = w * (pair(&cc, &g_rows, w_gamma) + pair(&cc, &r_rows, w_rho));
                            m_a[(li.dof, lj.dof)] += va;
                            m_b[(li.dof, lj.dof)] += vb;
                            m_c[(li.dof, lj.dof)] += vc;
                            if li.dof != lj.dof {
                                m_a[(lj.dof, li.dof)] += va;
                                m_b[(lj.dof, li.dof)] += vb;
                                m_c[(lj.dof, li.dof)] += vc;
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(ShellSystem {
        space: space.clone(),
        chart: chart.clone(),
        material: *material,
        memory,
        model: space.model,
        eps,
        quad_points: points,
        m_a: SymMatrix::Dense(m_a),
        m_b: SymMatrix::Dense(m_b),
        m_c: SymMatrix::Dense(m_c),
    })
}

/// Load vector `int_omega p^i eta_i sqrt(a) dy` for a surface density `p`.
pub fn assemble_load(
    space: &FunctionSpace2d,
    chart: &Chart,
    p: &dyn Fn([f64; 2]) -> [f64; 3],
    quad_points: Option<usize>,
) -> Result<DVector<f64>> {
    let points = quad_points.unwrap_or(space.max_degree + 2);
    let (_, spans1, spans2) = quad_grid(space, points);
    let mut load = DVector::zeros(space.dim);
    for (s1, pts1) in spans1.iter().enumerate() {
        for (s2, pts2) in spans2.iter().enumerate() {
            for &(x1, w1) in pts1 {
                for &(x2, w2) in pts2 {
                    let y = [x1, x2];
                    let frame = eval_frame(chart, y)?;
                    let pv = p(y);
                    let w = w1 * w2 * frame.sqrt_a;
                    for l in local_basis_at(space, (s1, s2), y, false) {
                        load[l.dof] += w * pv[l.comp] * l.n;
                    }
                }
            }
        }
    }
    Ok(load)
}

/// Thickness-integrated surface density
/// `p^i(y) = int_{-eps}^{eps} f^i(y, x3) dx3 + h^i_+(y) + h^i_-(y)`
/// at one parameter point; `f` takes the physical transverse coordinate.
pub fn thickness_resultant(
    f: &dyn Fn([f64; 2], f64) -> [f64; 3],
    h_plus: &dyn Fn([f64; 2]) -> [f64; 3],
    h_minus: &dyn Fn([f64; 2]) -> [f64; 3],
    eps: f64,
    y: [f64; 2],
) -> [f64; 3] {
    let rule = GaussRule::new(6);
    let mut p = [0.0; 3];
    for &(x3, w) in &rule.mapped(-eps, eps) {
        let fv = f(y, x3);
        for i in 0..3 {
            p[i] += w * fv[i];
        }
    }
    let hp = h_plus(y);
    let hm = h_minus(y);
    for i in 0..3 {
        p[i] += hp[i] + hm[i];
    }
    p
}

/// Load vector built from a through-thickness body force and top/bottom
/// tractions.
pub fn load_resultant(
    space: &FunctionSpace2d,
    chart: &Chart,
    f: &dyn Fn([f64; 2], f64) -> [f64; 3],
    h_plus: &dyn Fn([f64; 2]) -> [f64; 3],
    h_minus: &dyn Fn([f64; 2]) -> [f64; 3],
    eps: f64,
    quad_points: Option<usize>,
) -> Result<DVector<f64>> {
    assemble_load(
        space,
        chart,
        &|y| thickness_resultant(f, h_plus, h_minus, eps, y),
        quad_points,
    )
}

/// Which norm a Gram matrix represents (parameter-domain Sobolev norms).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `H1 x H1 x L2`: the elliptic membrane norm.
    Membrane,
    /// `H1 x H1 x H2`: the flexural norm.
    Flexural,
}

/// Gram matrix of the chosen norm on the space.
pub fn gram_matrix(space: &FunctionSpace2d, kind: NormKind) -> SymMatrix {
    let points = space.max_degree + 2;
    let (_, spans1, spans2) = quad_grid(space, points);
    let n = space.dim;
    let mut g = DMatrix::zeros(n, n);
    let need_h2 = kind == NormKind::Flexural;
    for (s1, pts1) in spans1.iter().enumerate() {
        for (s2, pts2) in spans2.iter().enumerate() {
            for &(x1, w1) in pts1 {
                for &(x2, w2) in pts2 {
                    let w = w1 * w2;
                    let locals = local_basis_at(space, (s1, s2), [x1, x2], need_h2);
                    for (i, li) in locals.iter().enumerate() {
                        for (j, lj) in locals.iter().enumerate().skip(i) {
                            if li.comp != lj.comp {
                                continue;
                            }
                            let mut v = li.n * lj.n;
                            let h1 = li.comp < 2 || need_h2;
                            if h1 {
                                v += li.dn[0] * lj.dn[0] + li.dn[1] * lj.dn[1];
                            }
                            if need_h2 && li.comp == 2 {
                                v += li.d2n[(0, 0)] * lj.d2n[(0, 0)]
                                    + 2.0 * li.d2n[(0, 1)] * lj.d2n[(0, 1)]
                                    + li.d2n[(1, 1)] * lj.d2n[(1, 1)];
                            }
                            let v = w * v;
                            g[(li.dof, lj.dof)] += v;
                            if li.dof != lj.dof {
                                g[(lj.dof, li.dof)] += v;
                            }
                        }
                    }
                }
            }
        }
    }
    SymMatrix::Dense(g)
}

/// Gram matrix of the membrane strain, `int sum_ab gamma_ab(phi_I)
/// gamma_ab(phi_J) dy`; `sqrt(xi^T K xi)` is the inextensionality
/// diagnostic `|gamma(xi)|_{0,omega}`.
pub fn gamma_gram(space: &FunctionSpace2d, chart: &Chart) -> Result<SymMatrix> {
    let points = space.max_degree + 2;
    let (_, spans1, spans2) = quad_grid(space, points);
    let n = space.dim;
    let mut g = DMatrix::zeros(n, n);
    for (s1, pts1) in spans1.iter().enumerate() {
        for (s2, pts2) in spans2.iter().enumerate() {
            for &(x1, w1) in pts1 {
                for &(x2, w2) in pts2 {
                    let y = [x1, x2];
                    let frame = eval_frame(chart, y)?;
                    let w = w1 * w2;
                    let locals = local_basis_at(space, (s1, s2), y, false);
                    let rows: Vec<[f64; 3]> = locals
                        .iter()
                        .map(|l| gamma_row(&frame, l.comp, l.n, l.dn))
                        .collect();
                    for i in 0..locals.len() {
                        for j in i..locals.len() {
                            let v = w
                                * (rows[i][0] * rows[j][0]
                                    + rows[i][1] * rows[j][1]
                                    + 2.0 * rows[i][2] * rows[j][2]);
                            g[(locals[i].dof, locals[j].dof)] += v;
                            if locals[i].dof != locals[j].dof {
                                g[(locals[j].dof, locals[i].dof)] += v;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SymMatrix::Dense(g))
}

/// Plain-text triplet export: `row col value`, 17 significant digits,
/// nonzero entries in row-major order.
pub fn export_triplets<W: Write>(m: &DMatrix<f64>, out: &mut W) -> std::io::Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                writeln!(out, "{} {} {:.16e}", i, j, v)?;
            }
        }
    }
    Ok(())
}
