//! Density matrices for one and two qubits: invariant-checked construction,
//! partial traces, von Neumann entropy (base 2) and positivity repair.
//!
//! Redfield dynamics is not guaranteed completely positive, so trajectories
//! can transiently produce slightly negative eigenvalues; `project_to_physical`
//! clamps those within a tolerance and renormalizes, and hard-fails beyond it.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::{Mat2, Mat4};

/// Hermiticity tolerance accepted at construction.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Unit-trace tolerance accepted at construction.
pub const TRACE_TOL: f64 = 1e-8;
/// Eigenvalues above this (negative) floor count as physical after repair.
pub const PSD_TOL: f64 = 1e-12;

/// Which marginal `partial_trace` keeps: A is qubit 1, B is qubit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitDensityMatrix {
    m: Mat4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitDensityMatrix {
    m: Mat2,
}

fn entropy_from_eigs(vals: &[f64]) -> Result<f64> {
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-9 {
        return Err(Error::UnphysicalState {
            min_eigenvalue: min,
        });
    }
    let mut s = 0.0;
    for &p in vals {
        if p > 1e-300 {
            s -= p * p.log2();
        }
    }
    Ok(s.max(0.0))
}

impl TwoQubitDensityMatrix {
    /// Wraps a raw matrix, enforcing Hermiticity and unit trace.
    pub fn new(m: Mat4) -> Result<Self> {
        let herm = m.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace: tr.re,
                tol: TRACE_TOL,
            });
        }
        Ok(Self { m })
    }

    /// |psi⟩⟨psi| from amplitudes in the product basis; renormalizes.
    pub fn from_pure(amps: [C64; 4]) -> Self {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = amps[i] * amps[j].conj() / (norm * norm);
            }
        }
        Self { m }
    }

    /// |↑↓⟩⟨↑↓|.
    pub fn up_down() -> Self {
        let mut m = Mat4::zeros();
        m.e[1][1] = C64::new(1.0, 0.0);
        Self { m }
    }

    /// (|↑↓⟩ + |↓↑⟩)(⟨↑↓| + ⟨↓↑|)/2.
    pub fn bell_psi_plus() -> Self {
        let h = C64::new(0.5, 0.0);
        let mut m = Mat4::zeros();
        m.e[1][1] = h;
        m.e[1][2] = h;
        m.e[2][1] = h;
        m.e[2][2] = h;
        Self { m }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Mat4::identity().scale_re(0.25),
        }
    }

    /// z |Φ⟩⟨Φ| + (1-z) I/4 with |Φ⟩ = (|↑↓⟩ + |↓↑⟩)/√2.
    pub fn werner(z: f64) -> Self {
        let bell = Self::bell_psi_plus().m.scale_re(z);
        let mixed = Mat4::identity().scale_re((1.0 - z) / 4.0);
        Self { m: bell + mixed }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn partial_trace(&self, keep: Subsystem) -> SingleQubitDensityMatrix {
        let r = &self.m.e;
        let mut m = Mat2::zeros();
        match keep {
            Subsystem::A => {
                for a in 0..2 {
                    for ap in 0..2 {
                        m.e[a][ap] = r[2 * a][2 * ap] + r[2 * a + 1][2 * ap + 1];
                    }
                }
            }
            Subsystem::B => {
                for b in 0..2 {
                    for bp in 0..2 {
                        m.e[b][bp] = r[b][bp] + r[2 + b][2 + bp];
                    }
                }
            }
        }
        SingleQubitDensityMatrix { m }
    }

    /// Von Neumann entropy in bits; fails on eigenvalues below -1e-9.
    pub fn entropy_bits(&self) -> Result<f64> {
        let (_, vals) = self.m.eigh()?;
        entropy_from_eigs(&vals)
    }

    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        Ok(self.m.eigh()?.1)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        match self.m.eigh() {
            Ok((_, vals)) => vals[0],
            Err(_) => f64::NAN,
        }
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn trace_error(&self) -> f64 {
        (self.m.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.m.hermiticity_error()
    }

    /// Clamps eigenvalues in [-tol, 0) to zero and renormalizes the trace.
    /// A matrix that is already positive semidefinite is returned unchanged;
    /// a violation beyond `tol` is an error carrying the offending eigenvalue.
    pub fn project_to_physical(&self, tol: f64) -> Result<Self> {
        let (v, vals) = self.m.eigh()?;
        if vals[0] >= 0.0 {
            return Ok(*self);
        }
        if vals[0] < -tol {
            return Err(Error::UnphysicalState {
                min_eigenvalue: vals[0],
            });
        }
        let clamped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        let mut m = Mat4::zeros();
        for k in 0..4 {
            let p = clamped[k] / total;
            if p == 0.0 {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    m.e[i][j] += v.e[i][k] * v.e[j][k].conj() * p;
                }
            }
        }
        Ok(Self { m: m.hermitize() })
    }
}

impl SingleQubitDensityMatrix {
    pub fn new(m: Mat2) -> Result<Self> {
        let herm = m.hermiticity_error();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne {
                trace: tr.re,
                tol: TRACE_TOL,
            });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn entropy_bits(&self) -> Result<f64> {
        let (_, vals) = self.m.eigh()?;
        entropy_from_eigs(&vals)
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }
}
