//! Material data: Lame/viscosity coefficients, the memory constants of the
//! dimension-reduced model, and the fourth-order tensors of both the 3D
//! body and the 2D shell models.

use nalgebra::{Matrix2, Matrix3, Matrix6};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ShellError};
use crate::geometry::{Metrics3d, SurfaceFrame};

/// Lame coefficients `lambda >= 0`, `mu > 0` and viscosity coefficients
/// `theta >= 0`, `rho >= 0` of a homogeneous isotropic Kelvin-Voigt solid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub lambda: f64,
    pub mu: f64,
    pub theta: f64,
    pub rho: f64,
}

impl MaterialParams {
    pub fn new(lambda: f64, mu: f64, theta: f64, rho: f64) -> Result<Self> {
        let m = MaterialParams { lambda, mu, theta, rho };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || self.lambda < 0.0 || self.theta < 0.0 || self.rho < 0.0 {
            return Err(ShellError::InvalidParameter(format!(
                "material needs mu > 0 and lambda, theta, rho >= 0, got {self:?}"
            )));
        }
        Ok(())
    }

    /// The memory model additionally requires a strictly positive `theta`.
    pub fn require_viscous(&self) -> Result<()> {
        if self.theta <= 0.0 || self.theta + self.rho <= 0.0 {
            return Err(ShellError::ZeroViscosity);
        }
        Ok(())
    }

    /// `theta * Lambda = (lambda rho - 2 mu theta) / (theta + rho)`, the
    /// coefficient driving the memory tensor; well defined for `theta +
    /// rho > 0` even when `theta = 0`.
    pub fn theta_lambda(&self) -> f64 {
        (self.lambda * self.rho - 2.0 * self.mu * self.theta) / (self.theta + self.rho)
    }
}

/// Constants of the exponential memory kernel:
/// `Lambda = lambda/theta - (lambda + 2 mu)/(theta + rho)` (weight) and
/// `k = (lambda + 2 mu)/(theta + rho)` (decay rate), both in 1/time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemoryConstants {
    pub weight: f64,
    pub decay: f64,
}

/// Computes the memory constants; fails with `ZeroViscosity` when
/// `theta = 0` (the derivation divides by `theta`).
pub fn memory_constants(m: &MaterialParams) -> Result<MemoryConstants> {
    m.validate()?;
    m.require_viscous()?;
    let decay = (m.lambda + 2.0 * m.mu) / (m.theta + m.rho);
    let weight = m.lambda / m.theta - decay;
    Ok(MemoryConstants { weight, decay })
}

/// Contravariant components `T^{alpha beta sigma tau}` of a fourth-order
/// surface tensor, `c[alpha][beta][sigma][tau]`.
#[derive(Debug, Clone, Copy)]
pub struct Tensor2d {
    pub c: [[[[f64; 2]; 2]; 2]; 2],
}

/// Contravariant components `T^{ijkl}` of a fourth-order 3D tensor.
#[derive(Debug, Clone, Copy)]
pub struct Tensor3d {
    pub c: [[[[f64; 3]; 3]; 3]; 3],
}

/// Which of the three 2D shell tensors to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind2d {
    /// `a`: instantaneous stiffness.
    Stiffness,
    /// `b`: viscosity.
    Viscosity,
    /// `c`: memory.
    Memory,
}

/// Which of the two 3D tensors to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind3d {
    Elasticity,
    Viscosity,
}

fn tensor2d_from_metric(a: &Matrix2<f64>, coef_iso: f64, coef_sym: f64) -> Tensor2d {
    let mut t = [[[[0.0; 2]; 2]; 2]; 2];
    for al in 0..2 {
        for be in 0..2 {
            for si in 0..2 {
                for ta in 0..2 {
                    t[al][be][si][ta] = coef_iso * a[(al, be)] * a[(si, ta)]
                        + coef_sym * (a[(al, si)] * a[(be, ta)] + a[(al, ta)] * a[(be, si)]);
                }
            }
        }
    }
    Tensor2d { c: t }
}

fn tensor3d_from_metric(g: &Matrix3<f64>, coef_iso: f64, coef_sym: f64) -> Tensor3d {
    let mut t = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    t[i][j][k][l] = coef_iso * g[(i, j)] * g[(k, l)]
                        + coef_sym * (g[(i, k)] * g[(j, l)] + g[(i, l)] * g[(j, k)]);
                }
            }
        }
    }
    Tensor3d { c: t }
}

/// Builds one of the three two-dimensional shell tensors at a surface point:
///
/// * stiffness `a = (2 lambda rho^2 + 4 mu theta^2)/(theta+rho)^2 a.a + 2 mu ten`,
/// * viscosity `b = 2 theta rho/(theta+rho) a.a + rho ten`,
/// * memory    `c = 2 (theta Lambda)^2/(theta+rho) a.a`,
///
/// with `ten = a^{as} a^{bt} + a^{at} a^{bs}`.
pub fn tensor2d(kind: TensorKind2d, m: &MaterialParams, frame: &SurfaceFrame) -> Result<Tensor2d> {
    m.validate()?;
    let sum = m.theta + m.rho;
    if sum <= 0.0 {
        return Err(ShellError::ZeroViscosity);
    }
    let (coef_iso, coef_sym) = match kind {
        TensorKind2d::Stiffness => (
            (2.0 * m.lambda * m.rho * m.rho + 4.0 * m.mu * m.theta * m.theta) / (sum * sum),
            2.0 * m.mu,
        ),
        TensorKind2d::Viscosity => (2.0 * m.theta * m.rho / sum, m.rho),
        TensorKind2d::Memory => {
            let tl = m.theta_lambda();
            (2.0 * tl * tl / sum, 0.0)
        }
    };
    Ok(tensor2d_from_metric(&frame.a_con, coef_iso, coef_sym))
}

/// 3D elasticity / viscosity tensor at a point of the scaled body:
/// `A = lambda g.g + mu ten`, `B = theta g.g + rho/2 ten`.
pub fn tensor3d(kind: TensorKind3d, m: &MaterialParams, metrics: &Metrics3d) -> Tensor3d {
    let (ci, cs) = match kind {
        TensorKind3d::Elasticity => (m.lambda, m.mu),
        TensorKind3d::Viscosity => (m.theta, 0.5 * m.rho),
    };
    tensor3d_from_metric(&metrics.g_con, ci, cs)
}

/// Thin limit `A(0)` / `B(0)` of the 3D tensors: the surface metric extended
/// by `g^{a3} = 0`, `g^{33} = 1`.
pub fn tensor3d_limit(kind: TensorKind3d, m: &MaterialParams, frame: &SurfaceFrame) -> Tensor3d {
    let mut g = Matrix3::identity();
    for a in 0..2 {
        for b in 0..2 {
            g[(a, b)] = frame.a_con[(a, b)];
        }
    }
    let (ci, cs) = match kind {
        TensorKind3d::Elasticity => (m.lambda, m.mu),
        TensorKind3d::Viscosity => (m.theta, 0.5 * m.rho),
    };
    tensor3d_from_metric(&g, ci, cs)
}

/// Steady-state combination `a - c/k`; algebraically equal to the elastic
/// membrane tensor `4 lambda mu/(lambda+2mu) a.a + 2 mu ten`.
pub fn elastic_equivalent_tensor(m: &MaterialParams, frame: &SurfaceFrame) -> Result<Tensor2d> {
    let k = memory_constants(m)?.decay;
    let a = tensor2d(TensorKind2d::Stiffness, m, frame)?;
    let c = tensor2d(TensorKind2d::Memory, m, frame)?;
    let mut t = a.c;
    for al in 0..2 {
        for be in 0..2 {
            for si in 0..2 {
                for ta in 0..2 {
                    t[al][be][si][ta] -= c.c[al][be][si][ta] / k;
                }
            }
        }
    }
    Ok(Tensor2d { c: t })
}

/// The elastic membrane tensor written directly from its closed form;
/// test oracle for [`elastic_equivalent_tensor`].
pub fn elastic_membrane_tensor(m: &MaterialParams, frame: &SurfaceFrame) -> Tensor2d {
    let ci = 4.0 * m.lambda * m.mu / (m.lambda + 2.0 * m.mu);
    tensor2d_from_metric(&frame.a_con, ci, 2.0 * m.mu)
}

impl Tensor2d {
    pub fn zeros() -> Self {
        Tensor2d { c: [[[[0.0; 2]; 2]; 2]; 2] }
    }

    /// `T^{abst} s_{st} t_{ab}`.
    pub fn contract(&self, s: &Matrix2<f64>, t: &Matrix2<f64>) -> f64 {
        let mut v = 0.0;
        for al in 0..2 {
            for be in 0..2 {
                for si in 0..2 {
                    for ta in 0..2 {
                        v += self.c[al][be][si][ta] * s[(si, ta)] * t[(al, be)];
                    }
                }
            }
        }
        v
    }

    /// Representation on the orthonormal basis of symmetric 2x2 matrices
    /// `{e11, e22, (e12+e21)/sqrt(2)}`; its eigenvalues are the tensor's
    /// eigenvalues as a map on symmetric matrices.
    pub fn voigt_sym(&self) -> Matrix3<f64> {
        let c = &self.c;
        let s2 = std::f64::consts::SQRT_2;
        Matrix3::new(
            c[0][0][0][0],
            c[0][0][1][1],
            s2 * c[0][0][0][1],
            c[1][1][0][0],
            c[1][1][1][1],
            s2 * c[1][1][0][1],
            s2 * c[0][1][0][0],
            s2 * c[0][1][1][1],
            2.0 * c[0][1][0][1],
        )
    }

    /// Matrix form acting on the engineering strain vector `[s11, s22, s12]`
    /// such that `v(t)^T M v(s) = T^{abst} s_st t_ab`; used by assembly.
    pub fn assembly_matrix(&self) -> Matrix3<f64> {
        let c = &self.c;
        Matrix3::new(
            c[0][0][0][0],
            c[0][0][1][1],
            2.0 * c[0][0][0][1],
            c[1][1][0][0],
            c[1][1][1][1],
            2.0 * c[1][1][0][1],
            2.0 * c[0][1][0][0],
            2.0 * c[0][1][1][1],
            4.0 * c[0][1][0][1],
        )
    }

    /// Smallest eigenvalue as a symmetric map on symmetric matrices.
    pub fn min_eigenvalue(&self) -> f64 {
        self.voigt_sym()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest violation of the minor/major symmetries.
    pub fn symmetry_residual(&self) -> f64 {
        let c = &self.c;
        let mut worst: f64 = 0.0;
        for al in 0..2 {
            for be in 0..2 {
                for si in 0..2 {
                    for ta in 0..2 {
                        let v = c[al][be][si][ta];
                        worst = worst
                            .max((v - c[be][al][si][ta]).abs())
                            .max((v - c[al][be][ta][si]).abs())
                            .max((v - c[si][ta][al][be]).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for al in 0..2 {
            for be in 0..2 {
                for si in 0..2 {
                    for ta in 0..2 {
                        s += self.c[al][be][si][ta] * self.c[al][be][si][ta];
                    }
                }
            }
        }
        s.sqrt()
    }
}

/// Index pairs of the 6-dimensional symmetric basis `{11, 22, 33, 23, 13, 12}`.
pub const VOIGT3D_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

impl Tensor3d {
    /// `T^{ijkl} s_{kl} t_{ij}`.
    pub fn contract(&self, s: &Matrix3<f64>, t: &Matrix3<f64>) -> f64 {
        let mut v = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        v += self.c[i][j][k][l] * s[(k, l)] * t[(i, j)];
                    }
                }
            }
        }
        v
    }

    /// Orthonormal-basis representation on symmetric 3x3 matrices.
    pub fn voigt_sym(&self) -> Matrix6<f64> {
        let s2 = std::f64::consts::SQRT_2;
        let w = [1.0, 1.0, 1.0, s2, s2, s2];
        let mut m = Matrix6::zeros();
        for (r, &(i, j)) in VOIGT3D_PAIRS.iter().enumerate() {
            for (cidx, &(k, l)) in VOIGT3D_PAIRS.iter().enumerate() {
                m[(r, cidx)] = w[r] * w[cidx] * self.c[i][j][k][l];
            }
        }
        m
    }

    /// Matrix acting on `[e11, e22, e33, e23, e13, e12]` for assembly.
    pub fn assembly_matrix(&self) -> Matrix6<f64> {
        let w = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0];
        let mut m = Matrix6::zeros();
        for (r, &(i, j)) in VOIGT3D_PAIRS.iter().enumerate() {
            for (cidx, &(k, l)) in VOIGT3D_PAIRS.iter().enumerate() {
                m[(r, cidx)] = w[r] * w[cidx] * self.c[i][j][k][l];
            }
        }
        m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.voigt_sym()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn symmetry_residual(&self) -> f64 {
        let c = &self.c;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let v = c[i][j][k][l];
                        worst = worst
                            .max((v - c[j][i][k][l]).abs())
                            .max((v - c[i][j][l][k]).abs())
                            .max((v - c[k][l][i][j]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest magnitude among the structurally vanishing components
    /// `T^{ab s 3}` and `T^{a 3 3 3}`.
    pub fn zero_component_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for s in 0..2 {
                    worst = worst.max(self.c[a][b][s][2].abs());
                }
            }
            worst = worst.max(self.c[a][2][2][2].abs());
        }
        worst
    }

    pub fn frobenius_distance(&self, other: &Tensor3d) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let d = self.c[i][j][k][l] - other.c[i][j][k][l];
                        s += d * d;
                    }
                }
            }
        }
        s.sqrt()
    }
}
