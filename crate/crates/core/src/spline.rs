//! Univariate B-spline bases on open uniform knot vectors, with derivatives
//! through second order, and constrained 1D spaces.

use crate::quadrature::GaussRule;

/// B-spline basis of a given degree on an open uniform knot vector over
/// `[a, b]` with `n_spans` knot spans.  Basis functions are `C^{p-1}` across
/// interior knots; there are `n_spans + degree` of them.
#[derive(Debug, Clone)]
pub struct BsplineBasis {
    pub degree: usize,
    pub knots: Vec<f64>,
    pub n_spans: usize,
    pub a: f64,
    pub b: f64,
}

/// Values and first `n_ders` derivatives of the `degree + 1` basis functions
/// active on one span, at one evaluation point.
#[derive(Debug, Clone)]
pub struct BasisEval {
    /// Global index of the first active basis function.
    pub first: usize,
    /// `ders[k][j]` = k-th derivative of the j-th active function.
    pub ders: Vec<Vec<f64>>,
}

impl BsplineBasis {
    pub fn open_uniform(degree: usize, a: f64, b: f64, n_spans: usize) -> Self {
        assert!(n_spans >= 1 && b > a);
        let p = degree;
        let mut knots = Vec::with_capacity(n_spans + 1 + 2 * p);
        for _ in 0..p {
            knots.push(a);
        }
        for i in 0..=n_spans {
            knots.push(a + (b - a) * i as f64 / n_spans as f64);
        }
        for _ in 0..p {
            knots.push(b);
        }
        BsplineBasis { degree, knots, n_spans, a, b }
    }

    pub fn n_basis(&self) -> usize {
        self.n_spans + self.degree
    }

    /// Bounds of the i-th knot span.
    pub fn span_bounds(&self, span: usize) -> (f64, f64) {
        let w = (self.b - self.a) / self.n_spans as f64;
        (self.a + span as f64 * w, self.a + (span + 1) as f64 * w)
    }

    /// Index of the knot span containing `u` (clamped to the domain).
    pub fn find_span(&self, u: f64) -> usize {
        let w = (self.b - self.a) / self.n_spans as f64;
        (((u - self.a) / w).floor() as isize).clamp(0, self.n_spans as isize - 1) as usize
    }

    /// Cox-de Boor evaluation with derivatives (the standard `DersBasisFuns`
    /// triangular scheme).
    pub fn eval(&self, span: usize, u: f64, n_ders: usize) -> BasisEval {
        let p = self.degree;
        // knot index such that knots[k] <= u < knots[k+1]
        let k = span + p;
        let knots = &self.knots;

        // ndu[j][r]: basis functions and knot differences triangle
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = u - knots[k + 1 - j];
            right[j] = knots[k + j] - u;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let nd = n_ders.min(p);
        let mut ders = vec![vec![0.0; p + 1]; n_ders + 1];
        for (j, d) in ders[0].iter_mut().enumerate() {
            *d = ndu[j][p];
        }

        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let mut s1 = 0;
            let mut s2 = 1;
            a[0][0] = 1.0;
            for dk in 1..=nd {
                let mut d = 0.0;
                let rk = r as isize - dk as isize;
                let pk = (p - dk) as isize;
                if r as isize >= dk as isize {
                    a[s2][0] = a[s1][0] / ndu[(pk + 1) as usize][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk as usize];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk { dk - 1 } else { p - r };
                for j in j1..=j2 {
                    a[s2][j] = (a[s1][j] - a[s1][j - 1])
                        / ndu[(pk + 1) as usize][(rk + j as isize) as usize];
                    d += a[s2][j] * ndu[(rk + j as isize) as usize][pk as usize];
                }
                if r as isize <= pk {
                    a[s2][dk] = -a[s1][dk - 1] / ndu[(pk + 1) as usize][r];
                    d += a[s2][dk] * ndu[r][pk as usize];
                }
                ders[dk][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for dk in 1..=nd {
            for v in ders[dk].iter_mut() {
                *v *= factor;
            }
            factor *= (p - dk) as f64;
        }

        BasisEval { first: span, ders }
    }
}

/// End condition on one side of a 1D space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndConstraint {
    Free,
    /// Trace zero: drops the single end function of the open basis.
    Value,
    /// Trace and first derivative zero: drops the two end functions.
    ValueAndDeriv,
}

impl EndConstraint {
    fn dropped(&self) -> usize {
        match self {
            EndConstraint::Free => 0,
            EndConstraint::Value => 1,
            EndConstraint::ValueAndDeriv => 2,
        }
    }
}

/// B-spline space with boundary constraints applied by removing end basis
/// functions (open knot vectors make both the trace and the end slope
/// depend only on the first/last one or two coefficients).
#[derive(Debug, Clone)]
pub struct Space1d {
    pub basis: BsplineBasis,
    /// Active global basis indices, in increasing order.
    pub active: Vec<usize>,
    /// Global basis index -> active index.
    pub index_of: Vec<Option<usize>>,
}

impl Space1d {
    pub fn new(basis: BsplineBasis, left: EndConstraint, right: EndConstraint) -> Self {
        let n = basis.n_basis();
        let lo = left.dropped();
        let hi = n - right.dropped();
        let active: Vec<usize> = (lo..hi).collect();
        let mut index_of = vec![None; n];
        for (ai, &gi) in active.iter().enumerate() {
            index_of[gi] = Some(ai);
        }
        Space1d { basis, active, index_of }
    }

    pub fn dim(&self) -> usize {
        self.active.len()
    }

    /// Evaluates an active-coefficient expansion at `u` (derivative `der`).
    pub fn eval_coeffs(&self, coeffs: &[f64], u: f64, der: usize) -> f64 {
        let span = self.basis.find_span(u);
        let e = self.basis.eval(span, u, der);
        let mut v = 0.0;
        for (j, &d) in e.ders[der].iter().enumerate() {
            if let Some(ai) = self.index_of[e.first + j] {
                v += coeffs[ai] * d;
            }
        }
        v
    }
}

/// Gauss points per span for exact integration of products of the basis
/// with itself plus smooth geometry factors.
pub fn quadrature_for_degree(max_degree: usize) -> GaussRule {
    GaussRule::new(max_degree + 2)
}
