//! Tensor-product Lagrange hexahedral grid on the scaled slab
//! `omega x (-1, 1)`.

use crate::geometry::{Edge, EdgeSet, Rect};

/// Uniform 1D Lagrange element basis of order `q` (nodes at the `q + 1`
/// uniformly spaced points of each element).
#[derive(Debug, Clone)]
pub struct Lagrange1d {
    pub order: usize,
    /// Reference nodes on [0, 1].
    pub ref_nodes: Vec<f64>,
}

impl Lagrange1d {
    pub fn new(order: usize) -> Self {
        assert!((1..=3).contains(&order), "supported element orders: 1..3");
        let ref_nodes = (0..=order).map(|i| i as f64 / order as f64).collect();
        Lagrange1d { order, ref_nodes }
    }

    /// Values and derivatives of all `q + 1` shape functions at reference
    /// coordinate `t in [0, 1]`; derivatives are w.r.t. `t`.
    pub fn eval(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.ref_nodes.len();
        let mut vals = vec![0.0; n];
        let mut ders = vec![0.0; n];
        for j in 0..n {
            let xj = self.ref_nodes[j];
            let mut v = 1.0;
            for (m, &xm) in self.ref_nodes.iter().enumerate() {
                if m != j {
                    v *= (t - xm) / (xj - xm);
                }
            }
            vals[j] = v;
            let mut d = 0.0;
            for (i, &xi) in self.ref_nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut term = 1.0 / (xj - xi);
                for (m, &xm) in self.ref_nodes.iter().enumerate() {
                    if m != j && m != i {
                        term *= (t - xm) / (xj - xm);
                    }
                }
                d += term;
            }
            ders[j] = d;
        }
        (vals, ders)
    }
}

/// Structured hexahedral mesh: `n` elements and polynomial order `orders`
/// per direction, on `rect x (-1, 1)`.  The lateral faces over the clamped
/// edges form `Gamma_0`.
#[derive(Debug, Clone)]
pub struct Mesh3d {
    pub rect: Rect,
    pub n: (usize, usize, usize),
    pub orders: (usize, usize, usize),
    pub clamped: EdgeSet,
}

impl Mesh3d {
    pub fn new(rect: Rect, n: (usize, usize, usize), orders: (usize, usize, usize), clamped: EdgeSet) -> Self {
        assert!(n.0 >= 1 && n.1 >= 1 && n.2 >= 1);
        Mesh3d { rect, n, orders, clamped }
    }

    /// Nodes per direction.
    pub fn m(&self) -> (usize, usize, usize) {
        (
            self.n.0 * self.orders.0 + 1,
            self.n.1 * self.orders.1 + 1,
            self.n.2 * self.orders.2 + 1,
        )
    }

    pub fn n_nodes(&self) -> usize {
        let m = self.m();
        m.0 * m.1 * m.2
    }

    pub fn node_coord(&self, i: (usize, usize, usize)) -> ([f64; 2], f64) {
        let m = self.m();
        let y1 = self.rect.a1 + self.rect.len1() * i.0 as f64 / (m.0 - 1) as f64;
        let y2 = self.rect.a2 + self.rect.len2() * i.1 as f64 / (m.1 - 1) as f64;
        let x3 = -1.0 + 2.0 * i.2 as f64 / (m.2 - 1) as f64;
        ([y1, y2], x3)
    }

    pub fn node_index(&self, i: (usize, usize, usize)) -> usize {
        let m = self.m();
        (i.0 * m.1 + i.1) * m.2 + i.2
    }

    /// Whether the in-plane node column `(i1, i2)` lies on `gamma_0`.
    pub fn column_clamped(&self, i1: usize, i2: usize) -> bool {
        let m = self.m();
        (self.clamped.contains(Edge::West) && i1 == 0)
            || (self.clamped.contains(Edge::East) && i1 == m.0 - 1)
            || (self.clamped.contains(Edge::South) && i2 == 0)
            || (self.clamped.contains(Edge::North) && i2 == m.1 - 1)
    }

    /// Free-dof numbering: `map[3*node + comp]`, `None` on `Gamma_0`.
    pub fn dof_map(&self) -> (Vec<Option<usize>>, usize) {
        let m = self.m();
        let mut map = vec![None; 3 * self.n_nodes()];
        let mut next = 0;
        for i1 in 0..m.0 {
            for i2 in 0..m.1 {
                let clamped = self.column_clamped(i1, i2);
                for i3 in 0..m.2 {
                    let node = self.node_index((i1, i2, i3));
                    if !clamped {
                        for c in 0..3 {
                            map[3 * node + c] = Some(next);
                            next += 1;
                        }
                    }
                }
            }
        }
        (map, next)
    }

    /// Element's first node index per direction.
    pub fn element_origin(&self, e: (usize, usize, usize)) -> (usize, usize, usize) {
        (e.0 * self.orders.0, e.1 * self.orders.1, e.2 * self.orders.2)
    }

    /// Geometric bounds of an element: `[y1 range] x [y2 range] x [x3 range]`.
    pub fn element_bounds(&self, e: (usize, usize, usize)) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let (lo, hi) = (
            self.node_coord(self.element_origin(e)),
            self.node_coord((
                self.element_origin(e).0 + self.orders.0,
                self.element_origin(e).1 + self.orders.1,
                self.element_origin(e).2 + self.orders.2,
            )),
        );
        ([lo.0[0], hi.0[0]], [lo.0[1], hi.0[1]], [lo.1, hi.1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lagrange_basis_is_nodal_and_sums_to_one() {
        for q in 1..=3 {
            let l = Lagrange1d::new(q);
            for (j, &xj) in l.ref_nodes.clone().iter().enumerate() {
                let (v, _) = l.eval(xj);
                for (i, &vi) in v.iter().enumerate() {
                    assert_relative_eq!(vi, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-13);
                }
            }
            let (v, d) = l.eval(0.37);
            assert_relative_eq!(v.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
            assert_relative_eq!(d.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn lagrange_derivative_matches_fd() {
        let l = Lagrange1d::new(2);
        let t = 0.61;
        let h = 1e-6;
        let (_, d) = l.eval(t);
        let (vp, _) = l.eval(t + h);
        let (vm, _) = l.eval(t - h);
        for j in 0..3 {
            assert_relative_eq!((vp[j] - vm[j]) / (2.0 * h), d[j], epsilon = 1e-6);
        }
    }

    #[test]
    fn clamped_columns_follow_edges() {
        let mesh = Mesh3d::new(
            Rect::unit(),
            (3, 2, 2),
            (1, 1, 1),
            EdgeSet::single(Edge::West),
        );
        let (map, ndof) = mesh.dof_map();
        let m = mesh.m();
        assert_eq!(ndof, 3 * (m.0 - 1) * m.1 * m.2);
        for i2 in 0..m.1 {
            for i3 in 0..m.2 {
                let node = mesh.node_index((0, i2, i3));
                assert!(map[3 * node].is_none());
                let inner = mesh.node_index((1, i2, i3));
                assert!(map[3 * inner].is_some());
            }
        }
    }
}
