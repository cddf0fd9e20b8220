//! Gauss-Legendre quadrature rules.

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Builds the `n`-point rule by Newton iteration on the Legendre
    /// polynomial `P_n`, seeded with the Chebyshev-like estimate of the
    /// k-th root.  Exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one point");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - k] = x;
            weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to the interval `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, half * w))
            .collect()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(a, b).iter().map(|&(x, w)| w * f(x)).sum()
    }
}

/// Value and first derivative of the Legendre polynomial `P_n` at `x`,
/// via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exactness_up_to_degree_2n_minus_1() {
        // n-point Gauss integrates monomials up to degree 2n-1 exactly.
        for n in 1..=8 {
            let rule = GaussRule::new(n);
            for d in 0..(2 * n) {
                let exact = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(d as i32));
                assert_relative_eq!(got, exact, epsilon = 1e-13, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn mapped_interval_weights_sum_to_length() {
        let rule = GaussRule::new(5);
        let total: f64 = rule.mapped(2.0, 5.0).iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(total, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_transcendental() {
        let rule = GaussRule::new(12);
        let got = rule.integrate(0.0, 1.0, |x| x.exp());
        assert_relative_eq!(got, 1.0_f64.exp() - 1.0, epsilon = 1e-13);
    }
}
