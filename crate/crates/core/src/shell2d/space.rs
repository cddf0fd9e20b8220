//! Tensor-product spline spaces for the three covariant displacement
//! components, with clamping applied per rectangle edge.

use nalgebra::{DVector, Matrix2};

use crate::error::{Result, ShellError};
use crate::geometry::{EdgeSet, Rect};
use crate::spline::{BsplineBasis, EndConstraint, Space1d};

/// Which two-dimensional limit model a space discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ShellModel {
    Membrane,
    Flexural,
}

/// Tensor product of two constrained 1D spline spaces.
#[derive(Debug, Clone)]
pub struct ComponentSpace {
    pub s1: Space1d,
    pub s2: Space1d,
}

impl ComponentSpace {
    pub fn dim(&self) -> usize {
        self.s1.dim() * self.s2.dim()
    }
}

/// Function space for `(eta_1, eta_2, eta_3)`.  A `None` component is held
/// identically zero (used where the model decouples it exactly, e.g. the
/// in-plane components of flat-plate bending).
#[derive(Debug, Clone)]
pub struct FunctionSpace2d {
    pub rect: Rect,
    pub clamped: EdgeSet,
    pub model: ShellModel,
    pub components: [Option<ComponentSpace>; 3],
    pub offsets: [usize; 3],
    pub dim: usize,
    pub n_spans: (usize, usize),
    pub max_degree: usize,
}

fn end_constraints(clamped: &EdgeSet, dir: usize, kind: EndConstraint) -> (EndConstraint, EndConstraint) {
    use crate::geometry::Edge::*;
    let (lo, hi) = if dir == 0 { (West, East) } else { (South, North) };
    (
        if clamped.contains(lo) { kind } else { EndConstraint::Free },
        if clamped.contains(hi) { kind } else { EndConstraint::Free },
    )
}

fn component_space(
    rect: Rect,
    n1: usize,
    n2: usize,
    degree: usize,
    clamped: &EdgeSet,
    kind: EndConstraint,
) -> ComponentSpace {
    let (l1, r1) = end_constraints(clamped, 0, kind);
    let (l2, r2) = end_constraints(clamped, 1, kind);
    ComponentSpace {
        s1: Space1d::new(BsplineBasis::open_uniform(degree, rect.a1, rect.b1, n1), l1, r1),
        s2: Space1d::new(BsplineBasis::open_uniform(degree, rect.a2, rect.b2, n2), l2, r2),
    }
}

impl FunctionSpace2d {
    /// Membrane space: tangential components clamped (`H^1`-type trace
    /// condition) on `gamma_0`, normal component unconstrained (`L^2`).
    /// `include_normal = false` drops `eta_3` entirely, for charts where the
    /// membrane model decouples it (flat plate).
    pub fn membrane(
        rect: Rect,
        clamped: EdgeSet,
        n1: usize,
        n2: usize,
        degree_t: usize,
        include_normal: bool,
    ) -> Result<Self> {
        let tang = component_space(rect, n1, n2, degree_t, &clamped, EndConstraint::Value);
        let norm = if include_normal {
            Some(component_space(rect, n1, n2, degree_t, &EdgeSet::none(), EndConstraint::Value))
        } else {
            None
        };
        Self::build(rect, clamped, ShellModel::Membrane, [Some(tang.clone()), Some(tang), norm])
    }

    /// Flexural space: all components clamped on `gamma_0`, the normal one
    /// with zero trace and zero normal slope; `eta_3` uses splines of at
    /// least cubic degree so it is `H^2`-conforming.
    pub fn flexural(
        rect: Rect,
        clamped: EdgeSet,
        n1: usize,
        n2: usize,
        degree_t: usize,
        degree_n: usize,
        include_tangential: bool,
    ) -> Result<Self> {
        assert!(degree_n >= 3, "normal component needs C^1 splines (degree >= 3)");
        let tang = if include_tangential {
            Some(component_space(rect, n1, n2, degree_t, &clamped, EndConstraint::Value))
        } else {
            None
        };
        let norm = component_space(rect, n1, n2, degree_n, &clamped, EndConstraint::ValueAndDeriv);
        Self::build(rect, clamped, ShellModel::Flexural, [tang.clone(), tang, Some(norm)])
    }

    fn build(
        rect: Rect,
        clamped: EdgeSet,
        model: ShellModel,
        components: [Option<ComponentSpace>; 3],
    ) -> Result<Self> {
        let mut offsets = [0usize; 3];
        let mut dim = 0usize;
        let mut n_spans = None;
        let mut max_degree = 0;
        for (c, comp) in components.iter().enumerate() {
            offsets[c] = dim;
            if let Some(cs) = comp {
                dim += cs.dim();
                max_degree = max_degree.max(cs.s1.basis.degree).max(cs.s2.basis.degree);
                let spans = (cs.s1.basis.n_spans, cs.s2.basis.n_spans);
                match n_spans {
                    None => n_spans = Some(spans),
                    Some(s) => assert_eq!(s, spans, "components must share the span grid"),
                }
            }
        }
        if dim == 0 {
            return Err(ShellError::SingularSpace);
        }
        Ok(FunctionSpace2d {
            rect,
            clamped,
            model,
            components,
            offsets,
            dim,
            n_spans: n_spans.unwrap(),
            max_degree,
        })
    }

    /// Global index of the active tensor basis function `(i1, i2)` of
    /// component `c` (indices into the active lists).
    pub fn global_index(&self, c: usize, i1: usize, i2: usize) -> usize {
        let cs = self.components[c].as_ref().unwrap();
        self.offsets[c] + i1 * cs.s2.dim() + i2
    }

    /// Component values at `y`.
    pub fn eval_displacement(&self, coeffs: &DVector<f64>, y: [f64; 2]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for c in 0..3 {
            out[c] = self.eval_component(c, coeffs, y, 0, 0);
        }
        out
    }

    /// Gradient `d_alpha eta_i` at `y`.
    pub fn eval_gradient(&self, coeffs: &DVector<f64>, y: [f64; 2]) -> [[f64; 2]; 3] {
        let mut out = [[0.0; 2]; 3];
        for c in 0..3 {
            out[c][0] = self.eval_component(c, coeffs, y, 1, 0);
            out[c][1] = self.eval_component(c, coeffs, y, 0, 1);
        }
        out
    }

    /// Hessian of the normal component at `y`.
    pub fn eval_normal_hessian(&self, coeffs: &DVector<f64>, y: [f64; 2]) -> Matrix2<f64> {
        Matrix2::new(
            self.eval_component(2, coeffs, y, 2, 0),
            self.eval_component(2, coeffs, y, 1, 1),
            self.eval_component(2, coeffs, y, 1, 1),
            self.eval_component(2, coeffs, y, 0, 2),
        )
    }

    /// Evaluates component `c` with derivative orders `(d1, d2)` per
    /// direction; zero for absent components.
    pub fn eval_component(
        &self,
        c: usize,
        coeffs: &DVector<f64>,
        y: [f64; 2],
        d1: usize,
        d2: usize,
    ) -> f64 {
        let Some(cs) = self.components[c].as_ref() else {
            return 0.0;
        };
        let s1 = cs.s1.basis.find_span(y[0]);
        let s2 = cs.s2.basis.find_span(y[1]);
        let e1 = cs.s1.basis.eval(s1, y[0], d1);
        let e2 = cs.s2.basis.eval(s2, y[1], d2);
        let mut v = 0.0;
        for (j1, &b1) in e1.ders[d1].iter().enumerate() {
            let Some(a1) = cs.s1.index_of[e1.first + j1] else { continue };
            for (j2, &b2) in e2.ders[d2].iter().enumerate() {
                let Some(a2) = cs.s2.index_of[e2.first + j2] else { continue };
                v += coeffs[self.global_index(c, a1, a2)] * b1 * b2;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn membrane_space_dimensions() {
        let rect = Rect::unit();
        let s = FunctionSpace2d::membrane(rect, EdgeSet::all(), 4, 4, 2, true).unwrap();
        // degree-2 basis has 6 functions per direction, minus 2 clamped = 4
        let tang = 4 * 4;
        let norm = 6 * 6;
        assert_eq!(s.dim, 2 * tang + norm);
        assert_eq!(s.offsets[1], tang);
        assert_eq!(s.offsets[2], 2 * tang);
    }

    #[test]
    fn flexural_space_drops_two_per_clamped_end() {
        let rect = Rect::unit();
        let s = FunctionSpace2d::flexural(
            rect,
            EdgeSet::single(crate::geometry::Edge::West),
            4,
            4,
            2,
            3,
            true,
        )
        .unwrap();
        // tangential: (6-1)*6; normal: (7-2)*7
        assert_eq!(s.components[0].as_ref().unwrap().dim(), 5 * 6);
        assert_eq!(s.components[2].as_ref().unwrap().dim(), 5 * 7);
    }

    #[test]
    fn empty_space_is_singular() {
        let rect = Rect::unit();
        let err = FunctionSpace2d::flexural(rect, EdgeSet::all(), 1, 1, 2, 3, false);
        assert!(matches!(err, Err(ShellError::SingularSpace)));
    }

    #[test]
    fn clamped_traces_vanish_on_boundary_quadrature_points() {
        let rect = Rect::new(0.0, 1.5, -1.0, 1.0);
        let s = FunctionSpace2d::flexural(rect, EdgeSet::all(), 5, 4, 2, 3, true).unwrap();
        let coeffs = DVector::from_fn(s.dim, |i, _| ((i * 37 % 17) as f64 - 8.0) / 9.0);
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let pts = [
                [rect.a1, rect.a2 + t * rect.len2()],
                [rect.b1, rect.a2 + t * rect.len2()],
                [rect.a1 + t * rect.len1(), rect.a2],
                [rect.a1 + t * rect.len1(), rect.b2],
            ];
            for (k, &y) in pts.iter().enumerate() {
                let u = s.eval_displacement(&coeffs, y);
                for c in 0..3 {
                    assert_relative_eq!(u[c], 0.0, epsilon = 1e-12);
                }
                // normal slope of eta_3 across the clamped edge
                let g = s.eval_gradient(&coeffs, y);
                let normal_dir = if k < 2 { 0 } else { 1 };
                assert_relative_eq!(g[2][normal_dir], 0.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn membrane_normal_component_is_unconstrained() {
        let rect = Rect::unit();
        let s = FunctionSpace2d::membrane(rect, EdgeSet::all(), 4, 4, 2, true).unwrap();
        let coeffs = DVector::from_fn(s.dim, |i, _| (i as f64 * 0.31).cos());
        let u = s.eval_displacement(&coeffs, [0.0, 0.5]);
        assert_relative_eq!(u[0], 0.0, epsilon = 1e-13);
        assert_relative_eq!(u[1], 0.0, epsilon = 1e-13);
        assert!(u[2].abs() > 1e-3);
    }
}
