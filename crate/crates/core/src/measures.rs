//! Quantum-correlation measures on two-qubit states: Wootters concurrence,
//! entanglement of formation, quantum mutual information, classical
//! correlation via minimization over projective measurements on one qubit,
//! and quantum discord. All entropic quantities are in bits.
//!
//! The measurement minimization runs a coarse (θ, φ) grid followed by
//! Nelder-Mead refinement; the objective is smooth and two-dimensional, so
//! this finds the projective-measurement optimum reliably.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::{kron, sigma_y, Mat2, Mat4};
use crate::state::{Subsystem, TwoQubitDensityMatrix};

/// Bloch angles of the projector basis on the measured qubit:
/// |π₀⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩ and |π₁⟩ ⟂ |π₀⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    /// Normalizes arbitrary angles onto θ ∈ [0, π], φ ∈ [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Self {
        let (st, ct) = (theta.sin(), theta.cos());
        let (sp, cp) = (phi.sin(), phi.cos());
        let n = [st * cp, st * sp, ct];
        let t = n[2].clamp(-1.0, 1.0).acos();
        let mut p = n[1].atan2(n[0]);
        if p < 0.0 {
            p += 2.0 * std::f64::consts::PI;
        }
        if t == 0.0 || t == std::f64::consts::PI {
            p = 0.0;
        }
        Self { theta: t, phi: p }
    }

    /// The two orthogonal rank-1 projectors |π_j⟩⟨π_j|.
    pub fn projectors(&self) -> [Mat2; 2] {
        let (v0, v1) = self.basis_vectors();
        [outer2(&v0), outer2(&v1)]
    }

    fn basis_vectors(&self) -> ([C64; 2], [C64; 2]) {
        let c = (self.theta / 2.0).cos();
        let s = (self.theta / 2.0).sin();
        let e = C64::from_polar(1.0, self.phi);
        ([C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)])
    }
}

fn outer2(v: &[C64; 2]) -> Mat2 {
    let mut m = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m.e[i][j] = v[i] * v[j].conj();
        }
    }
    m
}

/// Which qubit the projective measurement acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasuredSubsystem {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerSettings {
    /// Grid resolution per angle for the coarse scan.
    pub grid: usize,
    /// Nelder-Mead stops when the simplex diameter falls below this.
    pub simplex_tol: f64,
    pub max_iterations: usize,
    pub measured: MeasuredSubsystem,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid: 64,
            simplex_tol: 1e-6,
            max_iterations: 600,
            measured: MeasuredSubsystem::B,
        }
    }
}

/// All correlation measures of one state at one time.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub concurrence: f64,
    pub eof: f64,
    pub argmin_angles: MeasurementAngles,
}

/// Wootters concurrence: C = max(0, λ₁-λ₂-λ₃-λ₄) with λᵢ the descending
/// square roots of the eigenvalues of ρ (σy⊗σy) ρ* (σy⊗σy), computed through
/// the Hermitian form eig(√ρ ρ̃ √ρ).
pub fn concurrence(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let m = *rho.matrix();
    let yy = kron(&sigma_y(), &sigma_y());
    let rho_tilde = yy * m.conj() * yy;

    let (v, vals) = m.eigh()?;
    if vals[0] < -1e-9 {
        return Err(Error::UnphysicalState {
            min_eigenvalue: vals[0],
        });
    }
    let mut sqrt_rho = Mat4::zeros();
    for k in 0..4 {
        let s = vals[k].max(0.0).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho.e[i][j] += v.e[i][k] * v.e[j][k].conj() * s;
            }
        }
    }
    let prod = (sqrt_rho * rho_tilde * sqrt_rho).hermitize();
    let (_, lam2) = prod.eigh()?;
    let mut lam: Vec<f64> = lam2.iter().map(|&x| x.max(0.0).sqrt()).collect();
    lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0))
}

/// EoF as the binary entropy of f(C) = (1 + sqrt(1 - C²))/2.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return 0.0;
    }
    if c == 1.0 {
        return 1.0;
    }
    let f = 0.5 * (1.0 + (1.0 - c * c).sqrt());
    binary_entropy_bits(f)
}

fn binary_entropy_bits(p: f64) -> f64 {
    let mut s = 0.0;
    for q in [p, 1.0 - p] {
        if q > 1e-300 {
            s -= q * q.log2();
        }
    }
    s
}

pub fn entanglement_of_formation(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// I(A:B) = S(A) + S(B) - S(AB).
pub fn mutual_information(rho: &TwoQubitDensityMatrix) -> Result<f64> {
    let sa = rho.partial_trace(Subsystem::A).entropy_bits()?;
    let sb = rho.partial_trace(Subsystem::B).entropy_bits()?;
    let sab = rho.entropy_bits()?;
    Ok((sa + sb - sab).max(0.0))
}

/// Eigenvalues of a Hermitian 2x2 in closed form, clipped of numerical noise.
fn eig2_clipped(m: &[[C64; 2]; 2]) -> (f64, f64) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let half = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
    let clip = |x: f64| if x > -1e-9 && x < 0.0 { 0.0 } else { x };
    (clip(half - r), clip(half + r))
}

fn entropy2(m: &[[C64; 2]; 2]) -> f64 {
    let (lo, hi) = eig2_clipped(m);
    let mut s = 0.0;
    for p in [lo, hi] {
        if p > 1e-300 {
            s -= p * p.log2();
        }
    }
    s
}

/// S(unmeasured | {Π_j}) = Σ_j p_j S(ρ_{·|j}) for the projective measurement
/// defined by `angles` on the `measured` qubit. Outcomes with p_j < 1e-12
/// contribute zero.
pub fn post_measurement_conditional_entropy(
    rho: &TwoQubitDensityMatrix,
    angles: MeasurementAngles,
    measured: MeasuredSubsystem,
) -> f64 {
    let (v0, v1) = angles.basis_vectors();
    let r = &rho.matrix().e;
    let mut total = 0.0;
    for vec in [&v0, &v1] {
        // unnormalized conditional state of the unmeasured qubit
        let mut m = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for ap in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..2 {
                    for cp in 0..2 {
                        let entry = match measured {
                            MeasuredSubsystem::B => r[2 * a + c][2 * ap + cp],
                            MeasuredSubsystem::A => r[2 * c + a][2 * cp + ap],
                        };
                        acc += vec[c].conj() * entry * vec[cp];
                    }
                }
                m[a][ap] = acc;
            }
        }
        let p = (m[0][0] + m[1][1]).re;
        if p < 1e-12 {
            continue;
        }
        let inv = 1.0 / p;
        for row in m.iter_mut() {
            for z in row.iter_mut() {
                *z *= inv;
            }
        }
        total += p * entropy2(&m);
    }
    total
}

/// J(A:B) = S(unmeasured) - min over projectors of the conditional entropy.
/// Returns the correlation in bits and the minimizing measurement angles.
pub fn classical_correlation(
    rho: &TwoQubitDensityMatrix,
    opt: &OptimizerSettings,
) -> Result<(f64, MeasurementAngles)> {
    let marginal = match opt.measured {
        MeasuredSubsystem::B => rho.partial_trace(Subsystem::A),
        MeasuredSubsystem::A => rho.partial_trace(Subsystem::B),
    };
    let s_marginal = marginal.entropy_bits()?;
    let (min_cond, angles) = minimize_conditional_entropy(rho, opt)?;
    Ok(((s_marginal - min_cond).max(0.0), angles))
}

/// Grid scan plus Nelder-Mead refinement of S(·|{Π_j}) over (θ, φ).
fn minimize_conditional_entropy(
    rho: &TwoQubitDensityMatrix,
    opt: &OptimizerSettings,
) -> Result<(f64, MeasurementAngles)> {
    use std::f64::consts::PI;
    let f = |theta: f64, phi: f64| {
        post_measurement_conditional_entropy(rho, MeasurementAngles { theta, phi }, opt.measured)
    };
    let n = opt.grid.max(4);
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(n * n);
    for i in 0..n {
        let theta = PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            cells.push((f(theta, phi), theta, phi));
        }
    }
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let grid_best = cells[0].0;

    let mut best = (grid_best, MeasurementAngles::new(cells[0].1, cells[0].2));
    let step = PI / (n - 1) as f64;
    for &(_, theta, phi) in cells.iter().take(3) {
        let (val, t, p) = nelder_mead_2d(&f, theta, phi, step, opt)?;
        if val < best.0 {
            best = (val, MeasurementAngles::new(t, p));
        }
    }
    Ok(best)
}

fn nelder_mead_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    x0: f64,
    y0: f64,
    step: f64,
    opt: &OptimizerSettings,
) -> Result<(f64, f64, f64)> {
    let mut simplex = [
        (f(x0, y0), x0, y0),
        (f(x0 + step, y0), x0 + step, y0),
        (f(x0, y0 + step), x0, y0 + step),
    ];
    let diameter = |s: &[(f64, f64, f64); 3]| -> f64 {
        let mut d = 0.0f64;
        for i in 0..3 {
            for j in (i + 1)..3 {
                d = d.max(((s[i].1 - s[j].1).powi(2) + (s[i].2 - s[j].2).powi(2)).sqrt());
            }
        }
        d
    };
    for _ in 0..opt.max_iterations {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if diameter(&simplex) < opt.simplex_tol {
            return Ok(simplex[0]);
        }
        let (bx, by) = (simplex[0].1, simplex[0].2);
        let (sx, sy) = (simplex[1].1, simplex[1].2);
        let (wx, wy) = (simplex[2].1, simplex[2].2);
        let (cx, cy) = (0.5 * (bx + sx), 0.5 * (by + sy));
        let (rx, ry) = (2.0 * cx - wx, 2.0 * cy - wy);
        let fr = f(rx, ry);
        if fr < simplex[0].0 {
            let (ex, ey) = (cx + 2.0 * (rx - cx), cy + 2.0 * (ry - cy));
            let fe = f(ex, ey);
            simplex[2] = if fe < fr { (fe, ex, ey) } else { (fr, rx, ry) };
        } else if fr < simplex[1].0 {
            simplex[2] = (fr, rx, ry);
        } else {
            let (kx, ky) = (0.5 * (cx + wx), 0.5 * (cy + wy));
            let fk = f(kx, ky);
            if fk < simplex[2].0 {
                simplex[2] = (fk, kx, ky);
            } else {
                // shrink toward the best vertex
                for vertex in simplex[1..3].iter_mut() {
                    let nx = 0.5 * (vertex.1 + bx);
                    let ny = 0.5 * (vertex.2 + by);
                    *vertex = (f(nx, ny), nx, ny);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let spread = diameter(&simplex);
    if spread < 1e-3 {
        // flat objective near the optimum; accept the best vertex
        return Ok(simplex[0]);
    }
    Err(Error::OptimizerStall { spread })
}

/// δ(A:B) = I(A:B) - J(A:B), clipped of sub-1e-9 negative noise, together
/// with all supporting measures.
pub fn quantum_discord(
    rho: &TwoQubitDensityMatrix,
    opt: &OptimizerSettings,
) -> Result<CorrelationReport> {
    let mutual_info = mutual_information(rho)?;
    let (classical_corr, argmin_angles) = classical_correlation(rho, opt)?;
    let raw = mutual_info - classical_corr;
    let discord = if raw < 0.0 && raw > -1e-9 { 0.0 } else { raw };
    let concurrence = concurrence(rho)?;
    let eof = eof_from_concurrence(concurrence);
    Ok(CorrelationReport {
        mutual_info,
        classical_corr,
        discord,
        concurrence,
        eof,
        argmin_angles,
    })
}
