//! Symmetric system matrices with a dense (nalgebra) and a sparse (sprs)
//! backend behind one interface, so the time stepper can run unchanged on
//! the small 2D systems and the larger 3D ones.

use nalgebra::{DMatrix, DVector, Dyn};
use sprs::{CsMatI, TriMatI};
use sprs_ldl::{Ldl, LdlNumeric};

use crate::error::{Result, ShellError};

pub type CsMat = CsMatI<f64, usize>;

/// Symmetric matrix in either dense or CSR storage.
#[derive(Debug, Clone)]
pub enum SymMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsMat),
}

/// Factorization of an SPD [`SymMatrix`].
pub enum SymFactor {
    Dense(nalgebra::linalg::Cholesky<f64, Dyn>),
    Sparse(Box<LdlNumeric<f64, usize>>),
}

impl SymMatrix {
    pub fn dense_zeros(n: usize) -> Self {
        SymMatrix::Dense(DMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        match self {
            SymMatrix::Dense(m) => m.nrows(),
            SymMatrix::Sparse(m) => m.rows(),
        }
    }

    pub fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            SymMatrix::Dense(m) => m * x,
            SymMatrix::Sparse(m) => {
                let mut y = DVector::zeros(m.rows());
                for (row, vec) in m.outer_iterator().enumerate() {
                    let mut acc = 0.0;
                    for (col, &v) in vec.iter() {
                        acc += v * x[col];
                    }
                    y[row] = acc;
                }
                y
            }
        }
    }

    /// `x . (A x)`.
    pub fn quadratic(&self, x: &DVector<f64>) -> f64 {
        self.matvec(x).dot(x)
    }

    /// Linear combination of same-backend, same-size matrices.
    pub fn lincomb(terms: &[(f64, &SymMatrix)]) -> SymMatrix {
        assert!(!terms.is_empty());
        match terms[0].1 {
            SymMatrix::Dense(first) => {
                let mut acc = first * terms[0].0;
                for &(c, m) in &terms[1..] {
                    match m {
                        SymMatrix::Dense(d) => acc += d * c,
                        SymMatrix::Sparse(_) => panic!("mixed matrix backends"),
                    }
                }
                SymMatrix::Dense(acc)
            }
            SymMatrix::Sparse(first) => {
                let mut acc = first.map(|v| v * terms[0].0);
                for &(c, m) in &terms[1..] {
                    match m {
                        SymMatrix::Sparse(s) => acc = &acc + &s.map(|v| v * c),
                        SymMatrix::Dense(_) => panic!("mixed matrix backends"),
                    }
                }
                SymMatrix::Sparse(acc)
            }
        }
    }

    /// SPD factorization (dense Cholesky / sparse LDLt with a positive
    /// diagonal check).  Fails with `SolveFailure` on non-SPD input.
    pub fn factorize(&self) -> Result<SymFactor> {
        match self {
            SymMatrix::Dense(m) => nalgebra::linalg::Cholesky::new(m.clone())
                .map(SymFactor::Dense)
                .ok_or_else(|| ShellError::SolveFailure("dense Cholesky failed (matrix not SPD)".into())),
            SymMatrix::Sparse(m) => {
                let ldl = Ldl::new()
                    .check_symmetry(sprs::SymmetryCheck::DontCheckSymmetry)
                    .fill_in_reduction(sprs::FillInReduction::ReverseCuthillMcKee)
                    .numeric(m.view())
                    .map_err(|e| ShellError::SolveFailure(format!("sparse LDLt failed: {e}")))?;
                if ldl.d().iter().any(|&d| !(d > 0.0)) {
                    return Err(ShellError::SolveFailure(
                        "sparse LDLt produced a non-positive pivot (matrix not SPD)".into(),
                    ));
                }
                Ok(SymFactor::Sparse(Box::new(ldl)))
            }
        }
    }

    pub fn as_dense(&self) -> DMatrix<f64> {
        match self {
            SymMatrix::Dense(m) => m.clone(),
            SymMatrix::Sparse(m) => {
                let mut d = DMatrix::zeros(m.rows(), m.cols());
                for (row, vec) in m.outer_iterator().enumerate() {
                    for (col, &v) in vec.iter() {
                        d[(row, col)] = v;
                    }
                }
                d
            }
        }
    }

    /// Largest absolute asymmetry `|A - A^T|_max`; assembly sanity metric.
    pub fn asymmetry(&self) -> f64 {
        let d = self.as_dense();
        let mut worst: f64 = 0.0;
        for i in 0..d.nrows() {
            for j in (i + 1)..d.ncols() {
                worst = worst.max((d[(i, j)] - d[(j, i)]).abs());
            }
        }
        worst
    }
}

impl SymFactor {
    pub fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        match self {
            SymFactor::Dense(chol) => chol.solve(rhs),
            SymFactor::Sparse(ldl) => {
                let out: Vec<f64> = ldl.solve(rhs.as_slice());
                DVector::from_vec(out)
            }
        }
    }
}

/// Triplet accumulator for symmetric sparse assembly.  Callers push the
/// upper triangle (`i <= j`); the mirror entry is added automatically, so
/// the result is exactly symmetric.
pub struct SymTriplets {
    n: usize,
    tri: TriMatI<f64, usize>,
}

impl SymTriplets {
    pub fn new(n: usize) -> Self {
        SymTriplets { n, tri: TriMatI::new((n, n)) }
    }

    pub fn add_upper(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i <= j);
        self.tri.add_triplet(i, j, v);
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Compresses the upper triangle (summing duplicates), then mirrors the
    /// strict upper part, so the result is exactly symmetric.
    pub fn into_matrix(self) -> SymMatrix {
        let upper: CsMat = self.tri.to_csr();
        let mut full = TriMatI::new((self.n, self.n));
        for (row, vec) in upper.outer_iterator().enumerate() {
            for (col, &v) in vec.iter() {
                full.add_triplet(row, col, v);
                if row != col {
                    full.add_triplet(col, row, v);
                }
            }
        }
        SymMatrix::Sparse(full.to_csr())
    }
}
