//! Ohmic oscillator bath: spectral density J(ω) = η ω exp(-ω/ω_c), thermal
//! occupation, and the two-time correlation kernel
//!
//!   D(Δt) = T₁(Δt) + T₂(Δt)
//!   T₁(Δt) = ∫ dω J(ω) n(ω) e^{-iωΔt},   T₂(Δt) = ∫ dω J(ω) (n(ω)+1) e^{+iωΔt}
//!
//! in closed polygamma form, plus an adaptive-quadrature evaluation of the
//! same integrals used as a cross-check oracle.
//!
//! The closed form of D(Δt) is
//!
//!   η ω_c² / (1 - i ω_c Δt)²  +  (2η/β²) Re ψ₁(1 + 1/(βω_c) - iΔt/β)
//!
//! where ψ₁ is the trigamma function. The first term is the zero-temperature
//! piece ∫ dω η ω e^{-ω/ω_c} e^{+iωΔt}, which fixes the sign of its
//! imaginary part: Im D(Δt) > 0 for Δt > 0 and is independent of β.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One shared bath on σz⁽¹⁾+σz⁽²⁾, or two uncorrelated copies on σz⁽¹⁾ and σz⁽²⁾.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Common,
    Independent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathParams {
    /// Dimensionless damping constant η ≥ 0.
    pub eta: f64,
    /// Cutoff frequency ω_c in 1/τ.
    pub omega_c: f64,
    /// Inverse temperature β in τ (ħ = 1).
    pub beta: f64,
    pub topology: Topology,
}

impl BathParams {
    pub fn new(eta: f64, omega_c: f64, beta: f64, topology: Topology) -> Result<Self> {
        if !(eta >= 0.0) {
            return Err(Error::InvalidBath {
                reason: format!("eta must be >= 0, got {eta}"),
            });
        }
        if !(omega_c > 0.0) {
            return Err(Error::InvalidBath {
                reason: format!("omega_c must be > 0, got {omega_c}"),
            });
        }
        if !(beta > 0.0) {
            return Err(Error::InvalidBath {
                reason: format!("beta must be > 0, got {beta}"),
            });
        }
        Ok(Self {
            eta,
            omega_c,
            beta,
            topology,
        })
    }
}

/// One sample of the correlation kernel at time difference `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSample {
    pub dt: f64,
    pub value: C64,
}

/// J(ω) = η ω exp(-ω/ω_c) for ω ≥ 0.
pub fn spectral_density(b: &BathParams, omega: f64) -> Result<f64> {
    if omega < 0.0 {
        return Err(Error::NegativeFrequency { omega });
    }
    Ok(b.eta * omega * (-omega / b.omega_c).exp())
}

/// n(ω) = 1/(exp(βω) - 1) for β > 0, ω > 0.
pub fn bose_occupation(beta: f64, omega: f64) -> Result<f64> {
    if !(beta > 0.0) || !(omega > 0.0) {
        return Err(Error::OccupationDomain { beta, omega });
    }
    Ok(1.0 / (beta * omega).exp_m1())
}

// Bernoulli numbers B2..B12 for the asymptotic tail of psi_1.
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// Trigamma ψ₁(z) for Re z > 0: recurrence ψ₁(z) = ψ₁(z+1) + 1/z² until
/// Re z ≥ 10, then the asymptotic series 1/z + 1/(2z²) + Σ B₂ₖ/z^{2k+1}.
pub fn complex_trigamma(z: C64) -> Result<C64> {
    if !(z.re > 0.0) {
        return Err(Error::TrigammaDomain { re: z.re });
    }
    let mut z = z;
    let mut acc = C64::new(0.0, 0.0);
    while z.re < 10.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let w = 1.0 / z;
    let w2 = w * w;
    let mut sum = w + 0.5 * w2;
    let mut term = w2 * w;
    for b in BERNOULLI {
        sum += b * term;
        term *= w2;
    }
    Ok(acc + sum)
}

/// Closed-form kernel D(Δt); see the module docs for the expression.
pub fn kernel_closed_form(b: &BathParams, dt: f64) -> C64 {
    let zero_t = b.eta * b.omega_c * b.omega_c
        / ((C64::new(1.0, 0.0) - C64::new(0.0, b.omega_c * dt)).powi(2));
    let arg = C64::new(1.0 + 1.0 / (b.beta * b.omega_c), -dt / b.beta);
    let thermal = 2.0 * b.eta / (b.beta * b.beta)
        * complex_trigamma(arg)
            .expect("kernel argument has Re z >= 1")
            .re;
    zero_t + C64::new(thermal, 0.0)
}

/// T₁(Δt) and T₂(Δt) evaluated by adaptive Simpson quadrature to absolute
/// tolerance `abs_tol` each. Test oracle; not used by the integrator.
pub fn kernel_quadrature_parts(b: &BathParams, dt: f64, abs_tol: f64) -> Result<(C64, C64)> {
    let t1 = integrate_adaptive(
        |w| thermal_weight(b, w) * C64::from_polar(1.0, -w * dt),
        b,
        dt,
        abs_tol,
    )?;
    let t2 = integrate_adaptive(
        |w| {
            (thermal_weight(b, w) + spectral_density(b, w).unwrap_or(0.0))
                * C64::from_polar(1.0, w * dt)
        },
        b,
        dt,
        abs_tol,
    )?;
    Ok((t1, t2))
}

/// T₁(Δt) + T₂(Δt) by adaptive quadrature to absolute tolerance `abs_tol`.
pub fn kernel_quadrature(b: &BathParams, dt: f64, abs_tol: f64) -> Result<C64> {
    let (t1, t2) = kernel_quadrature_parts(b, dt, abs_tol / 2.0)?;
    Ok(t1 + t2)
}

/// J(ω) n(ω), continued to η/β at ω = 0 where both factors degenerate.
fn thermal_weight(b: &BathParams, omega: f64) -> f64 {
    if omega == 0.0 {
        return b.eta / b.beta;
    }
    let x = b.beta * omega;
    b.eta * omega * (-omega / b.omega_c).exp() / x.exp_m1()
}

fn simpson(fa: C64, fm: C64, fb: C64, h: f64) -> C64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

struct AdaptiveState {
    evals: usize,
    hard_floor: f64,
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: u32,
    st: &mut AdaptiveState,
) -> Result<C64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    st.evals += 2;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let err = (left + right - whole).norm() / 15.0;
    // rounding floor: the signed panel value can cancel to near zero while
    // the integrand itself stays large, so scale the floor by |f|
    let abs_mass = (fa.norm() + 4.0 * flm.norm() + 2.0 * fm.norm() + 4.0 * frm.norm() + fb.norm())
        * (b - a)
        / 12.0;
    // accept within the local share or at the machine-precision floor; the
    // signed leaf-noise contributions cancel statistically, so failure to
    // converge is signaled by subdivision exhaustion below, not by summing
    // absolute leaf estimates
    if err <= tol || err <= 4e-16 * abs_mass || err <= st.hard_floor {
        return Ok(left + right + (left + right - whole) / 15.0);
    }
    if depth == 0 || st.evals > 40_000_000 {
        return Err(Error::QuadratureNoConvergence { tol, reached: err });
    }
    let l = adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, st)?;
    let r = adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, st)?;
    Ok(l + r)
}

fn integrate_adaptive<F: Fn(f64) -> C64>(
    f: F,
    b: &BathParams,
    dt: f64,
    abs_tol: f64,
) -> Result<C64> {
    // beyond ~45 cutoffs the integrand is below 1e-17 of its peak
    let w_max = 45.0 * b.omega_c;
    // uniform seeding fine enough to track the e^{iω dt} oscillation, plus a
    // geometric zone near ω = 0 that resolves the thermal boundary layer of
    // width 1/β (sharper than any reasonable uniform grid at low temperature)
    let per_osc = (w_max * dt.abs() / std::f64::consts::PI).ceil() as usize * 2;
    let n_uniform = (2 * per_osc).clamp(64, 200_000);
    let uniform_step = w_max / n_uniform as f64;
    let mut edges = vec![0.0f64];
    let mut w = ((1.0 / b.beta).min(b.omega_c) / 16.0).min(uniform_step);
    while edges.last().unwrap() + w < uniform_step {
        let next = edges.last().unwrap() + w;
        edges.push(next);
        w *= 2.0;
    }
    for k in 1..n_uniform {
        let next = k as f64 * uniform_step;
        if next > *edges.last().unwrap() {
            edges.push(next);
        }
    }
    edges.push(w_max);

    let mut st = AdaptiveState {
        evals: 0,
        hard_floor: abs_tol * 1e-6,
    };
    let mut total = C64::new(0.0, 0.0);
    let panel_tol = abs_tol / edges.len() as f64;
    let mut fa = f(edges[0]);
    for pair in edges.windows(2) {
        let (a, bb) = (pair[0], pair[1]);
        let m = 0.5 * (a + bb);
        let fm = f(m);
        let fb = f(bb);
        st.evals += 2;
        let whole = simpson(fa, fm, fb, bb - a);
        total += adapt(&f, a, bb, fa, fm, fb, whole, panel_tol, 30, &mut st)?;
        fa = fb;
    }
    Ok(total)
}
