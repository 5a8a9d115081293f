//! Scenario configuration, kelvin conversion, figure presets and CSV output.
//!
//! A scenario bundles model, bath, initial state, integrator and measure
//! settings. Configs are TOML documents whose tables mirror the struct
//! fields one to one; presets return the parameter bundles behind the
//! published figure families.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{BathParams, Topology};
use crate::error::{Error, Result};
use crate::mat::{Mat4, C64};
use crate::measures::{quantum_discord, MeasuredSubsystem, OptimizerSettings};
use crate::model::ModelParams;
use crate::redfield::{evolve, IntegratorConfig, Trajectory};
use crate::state::TwoQubitDensityMatrix;

/// β in code units (τ) from a temperature in kelvin: β = ħ/(k_B T τ).
pub fn kelvin_to_beta(kelvin: f64) -> Result<f64> {
    const HBAR: f64 = 1.054571817e-34; // J s
    const KB: f64 = 1.380649e-23; // J/K
    const TAU: f64 = 1e-10; // s
    if !(kelvin > 0.0) {
        return Err(Error::NonPositiveTemperature { kelvin });
    }
    Ok(HBAR / (KB * kelvin * TAU))
}

/// Which state the measures are computed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    Schrodinger,
    Interaction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)] // config value, built once per run
pub enum InitialStateSpec {
    /// "up_down" or "bell_psi_plus".
    Named(String),
    /// Explicit 4x4 matrix, split into real and imaginary parts.
    Explicit {
        re: [[f64; 4]; 4],
        im: [[f64; 4]; 4],
    },
}

impl InitialStateSpec {
    pub fn resolve(&self) -> Result<TwoQubitDensityMatrix> {
        match self {
            Self::Named(name) => match name.as_str() {
                "up_down" => Ok(TwoQubitDensityMatrix::up_down()),
                "bell_psi_plus" => Ok(TwoQubitDensityMatrix::bell_psi_plus()),
                other => Err(Error::InvalidScenario {
                    reason: format!(
                        "unknown initial state '{other}' (expected up_down or bell_psi_plus)"
                    ),
                }),
            },
            Self::Explicit { re, im } => {
                let mut m = Mat4::zeros();
                for i in 0..4 {
                    for j in 0..4 {
                        m.e[i][j] = C64::new(re[i][j], im[i][j]);
                    }
                }
                TwoQubitDensityMatrix::new(m)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default = "default_delta")]
    pub delta: f64,
    pub j: f64,
    #[serde(default)]
    pub epsilon: f64,
}

fn default_delta() -> f64 {
    std::f64::consts::FRAC_PI_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub eta: f64,
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    /// Exactly one of `beta` (in τ) or `temperature_kelvin` must be given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_kelvin: Option<f64>,
}

fn default_omega_c() -> f64 {
    200.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasuresSection {
    /// Coarse grid resolution per measurement angle.
    pub grid: usize,
    /// Nelder-Mead stopping diameter.
    pub simplex_tol: f64,
    /// Qubit the optimized projective measurement acts on: "a" or "b".
    pub measured: String,
    pub picture: Picture,
}

impl Default for MeasuresSection {
    fn default() -> Self {
        Self {
            grid: 64,
            simplex_tol: 1e-6,
            measured: "b".to_string(),
            picture: Picture::Schrodinger,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// CSV destination; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Measures are evaluated every `stride`-th integrator step.
    pub stride: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelSection,
    pub bath: BathSection,
    pub topology: Topology,
    pub initial_state: InitialStateSpec,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub measures: MeasuresSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Default measure stride: every 4th integrator step.
pub const DEFAULT_STRIDE: usize = 4;

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("scenario configs serialize")
    }

    /// Validates and resolves units and named states.
    pub fn resolve(&self) -> Result<ResolvedScenario> {
        let model =
            ModelParams::new(self.model.delta, self.model.j)?.with_epsilon(self.model.epsilon);
        let beta = match (self.bath.beta, self.bath.temperature_kelvin) {
            (Some(b), None) => b,
            (None, Some(t)) => kelvin_to_beta(t)?,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidScenario {
                    reason: "give either bath.beta or bath.temperature_kelvin, not both".into(),
                })
            }
            (None, None) => {
                return Err(Error::InvalidScenario {
                    reason: "one of bath.beta or bath.temperature_kelvin is required".into(),
                })
            }
        };
        let bath = BathParams::new(self.bath.eta, self.bath.omega_c, beta, self.topology)?;
        let initial = self.initial_state.resolve()?;
        let measured = match self.measures.measured.as_str() {
            "a" | "A" => MeasuredSubsystem::A,
            "b" | "B" => MeasuredSubsystem::B,
            other => {
                return Err(Error::InvalidScenario {
                    reason: format!("measures.measured must be 'a' or 'b', got '{other}'"),
                })
            }
        };
        let optimizer = OptimizerSettings {
            grid: self.measures.grid,
            simplex_tol: self.measures.simplex_tol,
            measured,
            ..OptimizerSettings::default()
        };
        let stride = self.output.stride.unwrap_or(DEFAULT_STRIDE).max(1);
        Ok(ResolvedScenario {
            model,
            bath,
            initial,
            integrator: self.integrator,
            optimizer,
            picture: self.measures.picture,
            stride,
            out_path: self.output.path.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResolvedScenario {
    pub model: ModelParams,
    pub bath: BathParams,
    pub initial: TwoQubitDensityMatrix,
    pub integrator: IntegratorConfig,
    pub optimizer: OptimizerSettings,
    pub picture: Picture,
    pub stride: usize,
    pub out_path: Option<PathBuf>,
}

/// One CSV row: measures and integrator diagnostics at one sampled time.
#[derive(Clone, Copy, Debug)]
pub struct OutputRow {
    pub t: f64,
    pub eof: f64,
    pub discord: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub concurrence: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    pub purity: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ScenarioSummary {
    pub final_eof: f64,
    pub final_discord: f64,
    /// Time of the first entanglement peak reaching 99% of the run maximum.
    pub first_eof_max_time: Option<f64>,
    /// Mean discord over the last 10% of sampled rows.
    pub discord_plateau: f64,
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub config: ScenarioConfig,
    pub rows: Vec<OutputRow>,
    pub summary: ScenarioSummary,
}

/// Integrates the scenario and computes measures at the configured stride.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun> {
    let resolved = cfg.resolve()?;
    let traj = evolve(
        &resolved.initial,
        &resolved.model,
        &resolved.bath,
        &resolved.integrator,
    )?;
    let rows = measure_trajectory(&traj, &resolved)?;
    let summary = summarize(&rows);
    Ok(ScenarioRun {
        config: cfg.clone(),
        rows,
        summary,
    })
}

/// Computes one `OutputRow` per sampled trajectory point (always including
/// the final one), in parallel over samples.
pub fn measure_trajectory(traj: &Trajectory, rs: &ResolvedScenario) -> Result<Vec<OutputRow>> {
    let n = traj.points.len();
    let mut indices: Vec<usize> = (0..n).step_by(rs.stride).collect();
    if *indices.last().unwrap() != n - 1 {
        indices.push(n - 1);
    }
    indices
        .par_iter()
        .map(|&i| {
            let p = &traj.points[i];
            let state = match rs.picture {
                Picture::Schrodinger => &p.rho_s,
                Picture::Interaction => &p.rho_i,
            };
            let stamp = |e: Error| Error::MeasureFailure {
                t: p.t,
                source: Box::new(e),
            };
            let state = state
                .project_to_physical(rs.integrator.positivity_tol)
                .map_err(stamp)?;
            let report = quantum_discord(&state, &rs.optimizer).map_err(stamp)?;
            Ok(OutputRow {
                t: p.t,
                eof: report.eof,
                discord: report.discord,
                mutual_info: report.mutual_info,
                classical_corr: report.classical_corr,
                concurrence: report.concurrence,
                trace_error: p.trace_error,
                min_eigenvalue: p.min_eigenvalue,
                purity: p.purity,
            })
        })
        .collect()
}

fn summarize(rows: &[OutputRow]) -> ScenarioSummary {
    let eof_series: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.eof)).collect();
    let tail = rows.len().div_ceil(10);
    let plateau = rows[rows.len() - tail..]
        .iter()
        .map(|r| r.discord)
        .sum::<f64>()
        / tail as f64;
    ScenarioSummary {
        final_eof: rows.last().map(|r| r.eof).unwrap_or(0.0),
        final_discord: rows.last().map(|r| r.discord).unwrap_or(0.0),
        first_eof_max_time: first_peak_time(&eof_series, 0.99),
        discord_plateau: plateau,
    }
}

/// Time of the first local maximum whose height reaches `rel_height` times
/// the global maximum of the series, refined by a parabolic fit through the
/// peak and its neighbors. Returns None for series without an interior peak.
pub fn first_peak_time(series: &[(f64, f64)], rel_height: f64) -> Option<f64> {
    if series.len() < 3 {
        return None;
    }
    let global = series
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(global > 0.0) {
        return None;
    }
    let floor = rel_height * global;
    for k in 1..series.len() - 1 {
        let (tl, vl) = series[k - 1];
        let (tc, vc) = series[k];
        let (tr, vr) = series[k + 1];
        if vc >= vl && vc > vr && vc >= floor {
            // parabola through the three points
            let denom = vl - 2.0 * vc + vr;
            if denom.abs() < 1e-300 {
                return Some(tc);
            }
            let shift = 0.5 * (vl - vr) / denom;
            let h = 0.5 * (tr - tl);
            return Some(tc + shift.clamp(-1.0, 1.0) * h);
        }
    }
    None
}

/// Known figure presets, in source order of the figure families.
pub const PRESET_NAMES: [&str; 20] = [
    "fig1a",
    "fig1b",
    "fig1c",
    "fig1d",
    "fig1e",
    "fig1f",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig5a",
    "fig5b",
    "fig5c",
    "fig6_common",
    "fig6_independent",
];

/// Alias kept for the log-linear decay analysis of the common-bath run.
pub const PRESET_ALIASES: [&str; 1] = ["fig7_loglinear"];

/// Parameter bundle behind a named figure panel.
///
/// fig1a-f: unitary limit (η = 0), J/Δ ∈ {1/8, 1/4, 1/2, 4, 8, 16}, |↑↓⟩.
/// fig2/fig3: strong coupling J = 4Δ at T ∈ {0.1, 0.5, 2} K with
/// η = 1/600 (fig2) or 1/200 (fig3), |↑↓⟩.
/// fig4/fig5: weak coupling J = Δ/4, same temperature sweep, η = 1/600
/// (fig4) or 1/200 (fig5), |↑↓⟩.
/// fig6_common / fig6_independent (and fig7_loglinear, the same common-bath
/// run on a log scale): J = 0, T = 0.1 K, η = 1/600, Bell |Ψ⁺⟩, 50τ horizon.
///
/// The fig5 presets ship with positivity_tol = 0.05: at η = 1/200 and
/// J = Δ/4 the Redfield state develops genuine negativity reaching ≈ -0.03
/// at 0.1 K (converged under step halving), far past the default 1e-3
/// budget, and the runs would otherwise abort.
pub fn figure_preset(name: &str) -> Result<ScenarioConfig> {
    let d = std::f64::consts::FRAC_PI_2;
    let (j, eta, kelvin, topology, initial, t_final) = match name {
        "fig1a" => (d / 8.0, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig1b" => (d / 4.0, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig1c" => (d / 2.0, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig1d" => (4.0 * d, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig1e" => (8.0 * d, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig1f" => (16.0 * d, 0.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig2a" => (4.0 * d, 1.0 / 600.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig2b" => (4.0 * d, 1.0 / 600.0, 0.5, Topology::Common, "up_down", 20.0),
        "fig2c" => (4.0 * d, 1.0 / 600.0, 2.0, Topology::Common, "up_down", 20.0),
        "fig3a" => (4.0 * d, 1.0 / 200.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig3b" => (4.0 * d, 1.0 / 200.0, 0.5, Topology::Common, "up_down", 20.0),
        "fig3c" => (4.0 * d, 1.0 / 200.0, 2.0, Topology::Common, "up_down", 20.0),
        "fig4a" => (d / 4.0, 1.0 / 600.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig4b" => (d / 4.0, 1.0 / 600.0, 0.5, Topology::Common, "up_down", 20.0),
        "fig4c" => (d / 4.0, 1.0 / 600.0, 2.0, Topology::Common, "up_down", 20.0),
        "fig5a" => (d / 4.0, 1.0 / 200.0, 0.1, Topology::Common, "up_down", 20.0),
        "fig5b" => (d / 4.0, 1.0 / 200.0, 0.5, Topology::Common, "up_down", 20.0),
        "fig5c" => (d / 4.0, 1.0 / 200.0, 2.0, Topology::Common, "up_down", 20.0),
        "fig6_common" | "fig7_loglinear" => (
            0.0,
            1.0 / 600.0,
            0.1,
            Topology::Common,
            "bell_psi_plus",
            50.0,
        ),
        "fig6_independent" => (
            0.0,
            1.0 / 600.0,
            0.1,
            Topology::Independent,
            "bell_psi_plus",
            50.0,
        ),
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_string(),
            })
        }
    };
    let positivity_tol = if name.starts_with("fig5") { 0.05 } else { 1e-3 };
    Ok(ScenarioConfig {
        model: ModelSection {
            delta: d,
            j,
            epsilon: 0.0,
        },
        bath: BathSection {
            eta,
            omega_c: 200.0,
            beta: None,
            temperature_kelvin: Some(kelvin),
        },
        topology,
        initial_state: InitialStateSpec::Named(initial.to_string()),
        integrator: IntegratorConfig {
            t_final,
            positivity_tol,
            ..Default::default()
        },
        measures: MeasuresSection::default(),
        output: OutputSection::default(),
    })
}

/// Writes the resolved config as `#` comments, the header line, then one row
/// per sample with 9 significant digits. Identical configs produce identical
/// bytes regardless of destination; nothing time- or host-dependent is
/// emitted.
pub fn write_csv<W: Write>(mut w: W, run: &ScenarioRun) -> std::io::Result<()> {
    let mut echoed = run.config.clone();
    echoed.output.path = None;
    for line in echoed.to_toml().lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(
        w,
        "t,eof,discord,mutual_info,classical_corr,concurrence,trace_error,min_eigenvalue,purity"
    )?;
    for r in &run.rows {
        writeln!(
            w,
            "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}",
            r.t,
            r.eof,
            r.discord,
            r.mutual_info,
            r.classical_corr,
            r.concurrence,
            r.trace_error,
            r.min_eigenvalue,
            r.purity
        )?;
    }
    Ok(())
}
