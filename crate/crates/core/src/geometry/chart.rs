//! Analytic charts of middle surfaces over an axis-aligned parameter
//! rectangle, with partial derivatives through third order.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Axis-aligned parameter rectangle `(a1, b1) x (a2, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl Rect {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Self {
        assert!(b1 > a1 && b2 > a2, "empty parameter rectangle");
        Rect { a1, b1, a2, b2 }
    }

    pub fn unit() -> Self {
        Rect::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn len1(&self) -> f64 {
        self.b1 - self.a1
    }

    pub fn len2(&self) -> f64 {
        self.b2 - self.a2
    }

    pub fn contains(&self, y: [f64; 2]) -> bool {
        y[0] >= self.a1 && y[0] <= self.b1 && y[1] >= self.a2 && y[1] <= self.b2
    }

    /// Uniform `n1 x n2` lattice including the boundary.
    pub fn lattice(&self, n1: usize, n2: usize) -> Vec<[f64; 2]> {
        let mut pts = Vec::with_capacity((n1 + 1) * (n2 + 1));
        for i in 0..=n1 {
            for j in 0..=n2 {
                pts.push([
                    self.a1 + self.len1() * i as f64 / n1 as f64,
                    self.a2 + self.len2() * j as f64 / n2 as f64,
                ]);
            }
        }
        pts
    }
}

/// One edge of the parameter rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Edge {
    /// `y1 = a1`
    West,
    /// `y1 = b1`
    East,
    /// `y2 = a2`
    South,
    /// `y2 = b2`
    North,
}

/// The subset `gamma_0` of the boundary carrying the clamping condition,
/// as a union of rectangle edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EdgeSet {
    pub west: bool,
    pub east: bool,
    pub south: bool,
    pub north: bool,
}

impl EdgeSet {
    pub fn all() -> Self {
        EdgeSet { west: true, east: true, south: true, north: true }
    }

    pub fn none() -> Self {
        EdgeSet::default()
    }

    pub fn single(edge: Edge) -> Self {
        let mut s = EdgeSet::none();
        s.set(edge, true);
        s
    }

    pub fn set(&mut self, edge: Edge, value: bool) {
        match edge {
            Edge::West => self.west = value,
            Edge::East => self.east = value,
            Edge::South => self.south = value,
            Edge::North => self.north = value,
        }
    }

    pub fn contains(&self, edge: Edge) -> bool {
        match edge {
            Edge::West => self.west,
            Edge::East => self.east,
            Edge::South => self.south,
            Edge::North => self.north,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.west || self.east || self.south || self.north)
    }
}

/// Analytic parametrization of a middle surface.  Derivatives are supplied
/// in closed form; finite differences appear only in test oracles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Chart {
    /// `theta(y) = (y1, y2, 0)`.
    FlatPlate { rect: Rect },
    /// `theta(y) = (R cos(y1/R), R sin(y1/R), y2)`; `y1` is arc length.
    Cylinder { radius: f64, rect: Rect },
    /// Elliptic paraboloid `theta(y) = (y1, y2, y1^2 + y2^2)`.
    Paraboloid { rect: Rect },
    /// Cone `theta(y) = (y1 cos y2, y1 sin y2, y1)`; degenerate at `y1 = 0`.
    Cone { rect: Rect },
    /// `c * theta` for a base chart; used for homogeneity checks.
    Scaled { inner: Box<Chart>, factor: f64 },
}

impl Chart {
    pub fn rect(&self) -> Rect {
        match self {
            Chart::FlatPlate { rect }
            | Chart::Cylinder { rect, .. }
            | Chart::Paraboloid { rect }
            | Chart::Cone { rect } => *rect,
            Chart::Scaled { inner, .. } => inner.rect(),
        }
    }

    pub fn point(&self, y: [f64; 2]) -> Vector3<f64> {
        match self {
            Chart::FlatPlate { .. } => Vector3::new(y[0], y[1], 0.0),
            Chart::Cylinder { radius, .. } => {
                let t = y[0] / radius;
                Vector3::new(radius * t.cos(), radius * t.sin(), y[1])
            }
            Chart::Paraboloid { .. } => Vector3::new(y[0], y[1], y[0] * y[0] + y[1] * y[1]),
            Chart::Cone { .. } => Vector3::new(y[0] * y[1].cos(), y[0] * y[1].sin(), y[0]),
            Chart::Scaled { inner, factor } => inner.point(y) * *factor,
        }
    }

    /// First derivative `d theta / d y_a`, `a` in `{0, 1}`.
    pub fn d1(&self, y: [f64; 2], a: usize) -> Vector3<f64> {
        match self {
            Chart::FlatPlate { .. } => match a {
                0 => Vector3::new(1.0, 0.0, 0.0),
                _ => Vector3::new(0.0, 1.0, 0.0),
            },
            Chart::Cylinder { radius, .. } => {
                let t = y[0] / radius;
                match a {
                    0 => Vector3::new(-t.sin(), t.cos(), 0.0),
                    _ => Vector3::new(0.0, 0.0, 1.0),
                }
            }
            Chart::Paraboloid { .. } => match a {
                0 => Vector3::new(1.0, 0.0, 2.0 * y[0]),
                _ => Vector3::new(0.0, 1.0, 2.0 * y[1]),
            },
            Chart::Cone { .. } => match a {
                0 => Vector3::new(y[1].cos(), y[1].sin(), 1.0),
                _ => Vector3::new(-y[0] * y[1].sin(), y[0] * y[1].cos(), 0.0),
            },
            Chart::Scaled { inner, factor } => inner.d1(y, a) * *factor,
        }
    }

    /// Second derivative `d^2 theta / (d y_a d y_b)`.
    pub fn d2(&self, y: [f64; 2], a: usize, b: usize) -> Vector3<f64> {
        match self {
            Chart::FlatPlate { .. } => Vector3::zeros(),
            Chart::Cylinder { radius, .. } => {
                if a == 0 && b == 0 {
                    let t = y[0] / radius;
                    Vector3::new(-t.cos() / radius, -t.sin() / radius, 0.0)
                } else {
                    Vector3::zeros()
                }
            }
            Chart::Paraboloid { .. } => {
                if a == b {
                    Vector3::new(0.0, 0.0, 2.0)
                } else {
                    Vector3::zeros()
                }
            }
            Chart::Cone { .. } => match (a, b) {
                (0, 0) => Vector3::zeros(),
                (1, 1) => Vector3::new(-y[0] * y[1].cos(), -y[0] * y[1].sin(), 0.0),
                _ => Vector3::new(-y[1].sin(), y[1].cos(), 0.0),
            },
            Chart::Scaled { inner, factor } => inner.d2(y, a, b) * *factor,
        }
    }

    /// Third derivative `d^3 theta / (d y_a d y_b d y_c)`.
    pub fn d3(&self, y: [f64; 2], a: usize, b: usize, c: usize) -> Vector3<f64> {
        match self {
            Chart::FlatPlate { .. } | Chart::Paraboloid { .. } => Vector3::zeros(),
            Chart::Cylinder { radius, .. } => {
                if a == 0 && b == 0 && c == 0 {
                    let t = y[0] / radius;
                    let r2 = radius * radius;
                    Vector3::new(t.sin() / r2, -t.cos() / r2, 0.0)
                } else {
                    Vector3::zeros()
                }
            }
            Chart::Cone { .. } => {
                let ones = a + b + c;
                match ones {
                    // one derivative in y2 and two in y1, or permutations
                    0 | 1 => Vector3::zeros(),
                    2 => Vector3::new(-y[1].cos(), -y[1].sin(), 0.0),
                    _ => Vector3::new(y[0] * y[1].sin(), -y[0] * y[1].cos(), 0.0),
                }
            }
            Chart::Scaled { inner, factor } => inner.d3(y, a, b, c) * *factor,
        }
    }

    /// Checks injectivity on a verification lattice: all pairwise images
    /// must be distinct.
    pub fn injective_on_lattice(&self, n: usize) -> bool {
        let pts: Vec<Vector3<f64>> = self.rect().lattice(n, n).iter().map(|&y| self.point(y)).collect();
        let scale = self.rect().len1().max(self.rect().len2());
        let tol = 1e-9 * scale;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                if (pts[i] - pts[j]).norm() < tol {
                    return false;
                }
            }
        }
        true
    }
}
