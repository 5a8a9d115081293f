//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS/FAIL line with the measured values (run with `-- --nocapture` to see
//! the lines for passing criteria).
//!
//! Criteria 2, 7 and 8 assert thresholds that the dynamics, integrated
//! exactly as specified, does not meet; see README "Known red acceptance
//! criteria" for the measurements behind them. They are kept as stated
//! rather than tuned to pass.

use std::sync::OnceLock;
use std::time::Instant;

use dqdsim_core::bath::{
    complex_trigamma, kernel_closed_form, kernel_quadrature, BathParams, Topology,
};
use dqdsim_core::mat::C64;
use dqdsim_core::measures::{classical_correlation, quantum_discord, OptimizerSettings};
use dqdsim_core::model::{closed_form_propagator, propagator_expm, ModelParams};
use dqdsim_core::redfield::evolve;
use dqdsim_core::scenario::{figure_preset, first_peak_time, run_scenario, ScenarioRun};
use dqdsim_core::state::TwoQubitDensityMatrix;

const DELTA: f64 = std::f64::consts::FRAC_PI_2;

fn fig1_runs() -> &'static Vec<(String, ScenarioRun)> {
    static RUNS: OnceLock<Vec<(String, ScenarioRun)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        ["fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f"]
            .iter()
            .map(|name| {
                let mut cfg = figure_preset(name).unwrap();
                cfg.output.stride = Some(10); // 0.05 tau sampling
                (name.to_string(), run_scenario(&cfg).unwrap())
            })
            .collect()
    })
}

fn fig2_runs() -> &'static Vec<(f64, ScenarioRun)> {
    static RUNS: OnceLock<Vec<(f64, ScenarioRun)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        [("fig2a", 0.1), ("fig2b", 0.5), ("fig2c", 2.0)]
            .iter()
            .map(|(name, t)| (*t, run_scenario(&figure_preset(name).unwrap()).unwrap()))
            .collect()
    })
}

fn peak_of(run: &ScenarioRun) -> f64 {
    let series: Vec<(f64, f64)> = run.rows.iter().map(|r| (r.t, r.eof)).collect();
    first_peak_time(&series, 0.99).expect("trajectory has an entanglement peak")
}

#[test]
fn criterion_01_pure_state_coincidence() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (name, run) in fig1_runs() {
        for r in &run.rows {
            let gap = (r.eof - r.discord).abs();
            if gap > worst {
                worst = gap;
            }
            assert!(gap <= 1e-3, "{name} t={}: |eof-discord| = {gap:.3e}", r.t);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "ACCEPTANCE 01 pure-state coincidence: PASS (max |eof-discord| = {worst:.2e}, {elapsed:.0} s)"
    );
    assert!(elapsed < 120.0, "runtime target exceeded: {elapsed:.1} s");
}

#[test]
fn criterion_02_max_entanglement_times() {
    let runs = fig1_runs();
    let weak = peak_of(&runs.iter().find(|(n, _)| n == "fig1b").unwrap().1);
    let strong = peak_of(&runs.iter().find(|(n, _)| n == "fig1d").unwrap().1);
    let weak_ok = (weak - 4.0).abs() <= 0.2;
    let strong_ok = (strong - 2.0).abs() <= 0.1;
    println!(
        "ACCEPTANCE 02 max-entanglement times: {} (J=Delta/4 peak {weak:.4} vs 4.0 +-5%: {}; J=4Delta peak {strong:.4} vs 2.0 +-5%: {})",
        if weak_ok && strong_ok { "PASS" } else { "FAIL" },
        if weak_ok { "ok" } else { "out" },
        if strong_ok { "ok" } else { "out" },
    );
    assert!(
        weak_ok,
        "weak-regime first peak {weak:.4} outside 4.0 +- 0.2"
    );
    assert!(
        strong_ok,
        "strong-regime first peak {strong:.4} outside 2.0 +- 0.1"
    );
}

#[test]
fn criterion_03_matched_regime_equivalence() {
    let runs = fig1_runs();
    let by_name = |n: &str| peak_of(&runs.iter().find(|(name, _)| name == n).unwrap().1);
    let pairs = [("fig1a", "fig1f"), ("fig1b", "fig1e")];
    let mut report = Vec::new();
    for (w, s) in pairs {
        let (tw, ts) = (by_name(w), by_name(s));
        let rel = (tw - ts).abs() / tw;
        report.push(format!("{w}/{s}: {tw:.3} vs {ts:.3} ({:.1}%)", rel * 100.0));
        assert!(
            rel <= 0.10,
            "matched pair {w}/{s} differs by {:.1}%",
            rel * 100.0
        );
    }
    println!(
        "ACCEPTANCE 03 matched-regime equivalence: PASS ({})",
        report.join("; ")
    );
}

#[test]
fn criterion_04_kernel_correctness() {
    let pi = std::f64::consts::PI;
    let t1 = complex_trigamma(C64::new(1.0, 0.0)).unwrap();
    let t2 = complex_trigamma(C64::new(0.5, 0.0)).unwrap();
    assert!((t1.re - pi * pi / 6.0).abs() <= 1e-10 && t1.im.abs() <= 1e-12);
    assert!((t2.re - pi * pi / 2.0).abs() <= 1e-10 && t2.im.abs() <= 1e-12);

    let mut worst: f64 = 0.0;
    for kelvin in [0.1, 0.5, 2.0] {
        let beta = dqdsim_core::scenario::kelvin_to_beta(kelvin).unwrap();
        let bath = BathParams::new(1.0 / 600.0, 200.0, beta, Topology::Common).unwrap();
        // the absolute quadrature budget is set per point at a third of the
        // 1e-6 relative band, so the oracle is always accurate enough for
        // the comparison it certifies (|D| spans 8.6e-7 .. 70 here)
        for dt in [0.0, 0.01, 0.1, 1.0, 5.0] {
            let closed = kernel_closed_form(&bath, dt);
            let quad = kernel_quadrature(&bath, dt, closed.norm() * 3.3e-7).unwrap();
            let rel = (closed - quad).norm() / quad.norm();
            worst = worst.max(rel);
            assert!(rel <= 1e-6, "T={kelvin} K, dt={dt}: rel err {rel:.2e}");
        }
    }
    println!(
        "ACCEPTANCE 04 kernel correctness: PASS (trigamma identities to 1e-10, closed vs quadrature worst rel {worst:.2e})"
    );
}

#[test]
fn criterion_05_propagator_correctness() {
    let mut worst: f64 = 0.0;
    for j_fac in [0.125, 0.25, 0.5, 4.0, 8.0, 16.0] {
        let p = ModelParams::new(DELTA, j_fac * DELTA).unwrap();
        let mut t = 0.5;
        while t <= 20.0 {
            let u = closed_form_propagator(&p, t).unwrap();
            let diff = u.max_abs_diff(&propagator_expm(&p, t));
            worst = worst.max(diff);
            assert!(diff <= 1e-10, "J={j_fac}Delta t={t}: diff {diff:.2e}");
            t += 0.5;
        }
    }
    println!("ACCEPTANCE 05 propagator correctness: PASS (worst entry diff {worst:.2e})");
}

#[test]
fn criterion_06_integrator_hygiene_and_convergence() {
    // diagnostics across every dissipative 20-tau preset (the 50-tau fig6
    // pair is covered with the same assertions inside criterion 07)
    let mut positivity_breaches = Vec::new();
    for name in [
        "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig5a",
        "fig5b", "fig5c",
    ] {
        let cfg = figure_preset(name).unwrap();
        let rs = cfg.resolve().unwrap();
        let traj = evolve(&rs.initial, &rs.model, &rs.bath, &rs.integrator).unwrap();
        let mut min_eig = f64::INFINITY;
        for p in &traj.points {
            assert!(
                p.trace_error <= 1e-8,
                "{name} t={}: trace error {}",
                p.t,
                p.trace_error
            );
            assert!(p.rho_i.hermiticity_error() <= 1e-10, "{name} t={}", p.t);
            min_eig = min_eig.min(p.min_eigenvalue);
        }
        if min_eig < -1e-3 {
            positivity_breaches.push(format!("{name}: min eig {min_eig:.3e}"));
        }
    }

    // step halving changes the measure curves by <= 1e-4
    let mut base = figure_preset("fig2a").unwrap();
    base.integrator.t_final = 10.0;
    base.output.stride = Some(4);
    let coarse = run_scenario(&base).unwrap();
    base.integrator.dt /= 2.0;
    base.output.stride = Some(8);
    let fine = run_scenario(&base).unwrap();
    let mut worst: f64 = 0.0;
    for (a, b) in coarse.rows.iter().zip(&fine.rows) {
        assert!((a.t - b.t).abs() < 1e-12);
        worst = worst
            .max((a.eof - b.eof).abs())
            .max((a.discord - b.discord).abs());
    }
    assert!(worst <= 1e-4, "step halving moved measures by {worst:.2e}");

    // fourth-order error reduction on a smooth observable (purity at t = 5)
    let purity_at_5 = |dt: f64| -> f64 {
        let mut cfg = figure_preset("fig2a").unwrap();
        cfg.integrator.dt = dt;
        cfg.integrator.t_final = 5.0;
        let rs = cfg.resolve().unwrap();
        let traj = evolve(&rs.initial, &rs.model, &rs.bath, &rs.integrator).unwrap();
        traj.last().purity
    };
    let (p1, p2, p3) = (
        purity_at_5(0.005),
        purity_at_5(0.0025),
        purity_at_5(0.00125),
    );
    let ratio = (p1 - p2).abs() / (p2 - p3).abs();
    assert!(
        (8.0..=32.0).contains(&ratio),
        "error-reduction ratio {ratio:.1} not ~16 (purities {p1:.12} {p2:.12} {p3:.12})"
    );
    println!(
        "ACCEPTANCE 06 integrator hygiene: {} (halving delta {worst:.2e}, order ratio {ratio:.1}{})",
        if positivity_breaches.is_empty() { "PASS" } else { "FAIL" },
        if positivity_breaches.is_empty() {
            String::new()
        } else {
            format!("; positivity budget exceeded by {}", positivity_breaches.join(", "))
        }
    );
    assert!(
        positivity_breaches.is_empty(),
        "min eigenvalue below -1e-3 in: {}",
        positivity_breaches.join(", ")
    );
}

#[test]
fn criterion_07_bath_topology_contrast() {
    let run = |name: &str| {
        let cfg = figure_preset(name).unwrap();
        run_scenario(&cfg).unwrap()
    };
    let common = run("fig6_common");
    let indep = run("fig6_independent");
    // hygiene on the 50-tau runs (criterion 6 contract)
    for run in [&common, &indep] {
        for r in &run.rows {
            assert!(r.trace_error <= 1e-8);
            assert!(r.min_eigenvalue >= -1e-3);
        }
    }
    let ce = common.summary.final_eof;
    let cd_plateau = common.summary.discord_plateau;
    let ie = indep.summary.final_eof;
    let id = indep.summary.final_discord;
    let ratio = cd_plateau / id.max(1e-300);

    let ok = ie < 0.01 && id < 0.01 && ce < 0.01 && cd_plateau > 0.05 && ratio >= 10.0;
    println!(
        "ACCEPTANCE 07 bath-topology contrast: {} (independent: eof {ie:.4}, discord {id:.4} [both < 0.01?]; common: eof {ce:.4} [< 0.01?], discord plateau {cd_plateau:.4} [> 0.05?]; plateau/indep ratio {ratio:.1} [>= 10?])",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ie < 0.01, "independent-bath EoF(50) = {ie:.4} not < 0.01");
    assert!(
        id < 0.01,
        "independent-bath discord(50) = {id:.4} not < 0.01"
    );
    assert!(ce < 0.01, "common-bath EoF(50) = {ce:.4} not < 0.01");
    assert!(
        cd_plateau > 0.05,
        "common-bath discord plateau = {cd_plateau:.4} not > 0.05"
    );
    assert!(
        ratio >= 10.0,
        "plateau/independent ratio = {ratio:.1} not >= 10"
    );
}

#[test]
fn criterion_08_temperature_robustness_ordering() {
    let runs = fig2_runs();
    let eof_cold = runs
        .iter()
        .find(|(t, _)| *t == 0.1)
        .unwrap()
        .1
        .summary
        .final_eof;
    let eof_hot = runs
        .iter()
        .find(|(t, _)| *t == 2.0)
        .unwrap()
        .1
        .summary
        .final_eof;
    let mut all_ge = true;
    let mut detail = Vec::new();
    for (t, run) in runs {
        let s = &run.summary;
        let ge = s.final_discord >= s.final_eof;
        all_ge &= ge;
        detail.push(format!(
            "T={t}K: discord {:.4} vs eof {:.4} ({})",
            s.final_discord,
            s.final_eof,
            if ge { "ok" } else { "out" }
        ));
    }
    let ordering = eof_hot < eof_cold;
    println!(
        "ACCEPTANCE 08 temperature robustness: {} ({}; eof(2K) {eof_hot:.4} < eof(0.1K) {eof_cold:.4}: {ordering})",
        if all_ge && ordering { "PASS" } else { "FAIL" },
        detail.join("; ")
    );
    assert!(
        ordering,
        "EoF at 2 K ({eof_hot:.4}) not below EoF at 0.1 K ({eof_cold:.4})"
    );
    assert!(
        all_ge,
        "discord >= EoF violated at t_final: {}",
        detail.join("; ")
    );
}

#[test]
fn criterion_09_discord_optimizer_soundness() {
    let opt = OptimizerSettings::default();
    for z in [0.3, 0.5, 0.7, 1.0] {
        let rho = TwoQubitDensityMatrix::werner(z);
        let (j_cl, _) = classical_correlation(&rho, &opt).unwrap();
        let oracle = if z >= 1.0 {
            1.0
        } else {
            (1.0 + z) / 2.0 * (1.0 + z).log2() + (1.0 - z) / 2.0 * (1.0 - z).log2()
        };
        assert!(
            (j_cl - oracle).abs() <= 1e-4,
            "werner z={z}: classical correlation {j_cl:.6} vs closed form {oracle:.6}"
        );
    }
    let rep = quantum_discord(&TwoQubitDensityMatrix::werner(0.5), &opt).unwrap();
    assert!((rep.mutual_info - 0.45120505930460153).abs() <= 1e-3);
    assert!((rep.classical_corr - 0.18872187554086717).abs() <= 1e-3);
    assert!((rep.discord - 0.26248318376373436).abs() <= 1e-3);
    println!(
        "ACCEPTANCE 09 discord optimizer soundness: PASS (werner 0.5 report I {:.4}, J {:.4}, discord {:.4})",
        rep.mutual_info, rep.classical_corr, rep.discord
    );
}

#[test]
fn criterion_10_desk_scale_runtime() {
    let start = Instant::now();
    let run = run_scenario(&figure_preset("fig2a").unwrap()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(run.rows.len() >= 1000);
    println!(
        "ACCEPTANCE 10 desk-scale runtime: {} (fig2a with discord every 4th step took {elapsed:.1} s)",
        if elapsed < 60.0 { "PASS" } else { "FAIL" }
    );
    assert!(
        elapsed < 60.0,
        "fig2a preset took {elapsed:.1} s (budget 60 s)"
    );
}
