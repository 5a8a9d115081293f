//! Two coupled charge qubits: H_S = Δ(σx⁽¹⁾ + σx⁽²⁾) + J σz⁽¹⁾⊗σz⁽²⁾, its
//! closed-form propagator, the interaction-picture coupling operators
//! Λ(t) = U_S†(t) σz U_S(t), and the weak/strong estimates for the time of
//! maximal entanglement.
//!
//! Energies are in units of 1/τ with ħ = 1; times in units of τ.

use crate::error::{Error, Result};
use crate::mat::{expm4, id2, kron, sigma_x, sigma_y, sigma_z, Mat4, I};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Tunneling energy Δ.
    pub delta: f64,
    /// Coulomb coupling J.
    pub j: f64,
    /// Single-qubit energy offset; zero throughout the studied dynamics and
    /// required to be zero by the closed-form propagator.
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(delta: f64, j: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidModel {
                reason: format!("delta must be > 0, got {delta}"),
            });
        }
        if !(j >= 0.0) {
            return Err(Error::InvalidModel {
                reason: format!("j must be >= 0, got {j}"),
            });
        }
        Ok(Self {
            delta,
            j,
            epsilon: 0.0,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Ω = sqrt(J² + 4Δ²).
    pub fn omega(&self) -> f64 {
        (self.j * self.j + 4.0 * self.delta * self.delta).sqrt()
    }
}

/// Which system operator couples to a bath.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingSide {
    /// σz⁽¹⁾ + σz⁽²⁾, one bath shared by both qubits.
    Common,
    /// σz⁽¹⁾ only.
    Qubit1,
    /// σz⁽²⁾ only.
    Qubit2,
}

pub fn system_hamiltonian(p: &ModelParams) -> Mat4 {
    let sx = sigma_x();
    let sz = sigma_z();
    let mut h =
        (kron(&sx, &id2()) + kron(&id2(), &sx)).scale_re(p.delta) + kron(&sz, &sz).scale_re(p.j);
    if p.epsilon != 0.0 {
        h = h + (kron(&sz, &id2()) + kron(&id2(), &sz)).scale_re(p.epsilon / 2.0);
    }
    h
}

/// U_S(t) = exp(-i H_S t) in closed form:
///
///   U = ½(cos Ωt + cos Jt) I
///     - i (Δ/Ω) sin Ωt (σx⁽¹⁾ + σx⁽²⁾)
///     + ½(cos Ωt - cos Jt) σx⁽¹⁾σx⁽²⁾
///     - (i/2)(sin Jt - (J/Ω) sin Ωt) σy⁽¹⁾σy⁽²⁾
///     - (i/2)(sin Jt + (J/Ω) sin Ωt) σz⁽¹⁾σz⁽²⁾
///
/// Only valid for epsilon = 0; otherwise use [`propagator_expm`].
pub fn closed_form_propagator(p: &ModelParams, t: f64) -> Result<Mat4> {
    if p.epsilon != 0.0 {
        return Err(Error::ClosedFormNeedsZeroEpsilon);
    }
    let omega = p.omega();
    let (c_om, s_om) = ((omega * t).cos(), (omega * t).sin());
    let (c_j, s_j) = ((p.j * t).cos(), (p.j * t).sin());
    let sx = sigma_x();
    let sy = sigma_y();
    let sz = sigma_z();

    let u = Mat4::identity().scale_re(0.5 * (c_om + c_j))
        + (kron(&sx, &id2()) + kron(&id2(), &sx)).scale(-I * (p.delta / omega) * s_om)
        + kron(&sx, &sx).scale_re(0.5 * (c_om - c_j))
        + kron(&sy, &sy).scale(-I * 0.5 * (s_j - (p.j / omega) * s_om))
        + kron(&sz, &sz).scale(-I * 0.5 * (s_j + (p.j / omega) * s_om));
    Ok(u)
}

/// exp(-i H_S t) by scaling and squaring; works for any epsilon and serves as
/// the numerical cross-check for the closed form.
pub fn propagator_expm(p: &ModelParams, t: f64) -> Mat4 {
    expm4(&system_hamiltonian(p).scale(-I * t))
}

fn propagator_any(p: &ModelParams, t: f64) -> Mat4 {
    if p.epsilon == 0.0 {
        closed_form_propagator(p, t).expect("epsilon is zero")
    } else {
        propagator_expm(p, t)
    }
}

/// Λ(t) = U_S†(t) Z U_S(t) with Z selected by `side`.
pub fn interaction_coupling(p: &ModelParams, t: f64, side: CouplingSide) -> Mat4 {
    let z = coupling_operator(side);
    let u = propagator_any(p, t);
    u.adjoint() * z * u
}

/// The Schrödinger-picture coupling operator Z for `side`.
pub fn coupling_operator(side: CouplingSide) -> Mat4 {
    let sz = sigma_z();
    match side {
        CouplingSide::Common => kron(&sz, &id2()) + kron(&id2(), &sz),
        CouplingSide::Qubit1 => kron(&sz, &id2()),
        CouplingSide::Qubit2 => kron(&id2(), &sz),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Weak,
    Strong,
}

/// Estimated time at which |↑↓⟩ evolves into a maximally entangled state:
/// weak coupling (J ≤ Δ/2): t = (1/J)(π/2 + nπ);
/// strong coupling (J ≥ 2Δ): t = (J/Δ²)(π/4 + nπ/2).
///
/// These are the coherence-based estimates; they are exact only deep inside
/// the respective regime, which is why the gates below reject parameters
/// outside J ≤ Δ/2 or J ≥ 2Δ.
pub fn max_entanglement_time(p: &ModelParams, regime: Regime, n: u32) -> Result<f64> {
    let n = n as f64;
    match regime {
        Regime::Weak => {
            if p.j <= 0.0 || p.j > p.delta / 2.0 {
                return Err(Error::RegimeMismatch {
                    regime: "weak",
                    j: p.j,
                    delta: p.delta,
                });
            }
            Ok((std::f64::consts::FRAC_PI_2 + n * std::f64::consts::PI) / p.j)
        }
        Regime::Strong => {
            if p.j < 2.0 * p.delta {
                return Err(Error::RegimeMismatch {
                    regime: "strong",
                    j: p.j,
                    delta: p.delta,
                });
            }
            Ok(p.j / (p.delta * p.delta)
                * (std::f64::consts::FRAC_PI_4 + n * std::f64::consts::FRAC_PI_2))
        }
    }
}
