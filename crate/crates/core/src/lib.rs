//! Simulation library for two coupled double-quantum-dot charge qubits in
//! contact with an ohmic oscillator bath (shared or per-qubit), integrated
//! with a time-local non-Markovian Redfield equation, and analyzed through
//! entanglement of formation and quantum discord.
//!
//! Units: ħ = 1, times in τ, energies and frequencies in 1/τ. With the
//! physical τ = 10⁻¹⁰ s of lateral GaAs double dots, Δ = π/2 corresponds to
//! roughly 10 μeV. Temperatures entered in kelvin are converted through
//! β = ħ/(k_B T τ).
//!
//! Module map:
//! - [`mat`]: complex 2x2/4x4 matrices, Jacobi eigensolver, matrix exponential
//! - [`state`]: density matrices, partial traces, entropy, positivity repair
//! - [`model`]: system Hamiltonian, closed-form propagator, Λ(t) couplings
//! - [`bath`]: ohmic spectral density and the correlation kernel D(Δt)
//! - [`redfield`]: the RK4 + memory-integral trajectory integrator
//! - [`measures`]: concurrence, EoF, mutual information, discord
//! - [`scenario`]: run configuration, figure presets, CSV emission

// parameter validation uses `!(x > 0.0)` so that NaN input is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// indexed loops over fixed 2x2/4x4 dimensions read better than iterator
// chains in the linear-algebra kernels
#![allow(clippy::needless_range_loop)]

pub mod bath;
pub mod error;
pub mod mat;
pub mod measures;
pub mod model;
pub mod redfield;
pub mod scenario;
pub mod state;

pub use error::{Error, Result};
