//! Self-checks of the algebraic and estimator invariants, shared by the
//! `check` command and the acceptance suite.

use crate::control::{quantize_command, wheel_velocities, ControlParams, COMMAND_RESOLUTION};
use crate::radio::{doppler_loss_delta, AntennaPattern, SPEED_OF_LIGHT};
use crate::scan::{error_step, synthesize_scan, update_center, wca_bearing, ScanConfig};
use crate::scenario::{scenario_preset, PRESET_NAMES};
use crate::trace::{run_scenario, TraceRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Sign, fixed-point and bound properties of the per-sweep error map over a
/// 1° grid of `e ∈ [-85°, 85°]`.
pub fn wca_contraction(gamma: f64) -> CheckOutcome {
    let config = ScanConfig {
        gamma,
        ..Default::default()
    };
    let gr = AntennaPattern::directional(10.0).gr_db;
    let mut failures = Vec::new();
    if error_step(0.0, &config, gr) != 0.0 {
        failures.push("f(0) != 0".to_string());
    }
    for k in -85..=85 {
        if k == 0 {
            continue;
        }
        let e = (k as f64).to_radians();
        let f = error_step(e, &config, gr);
        if f.signum() != -e.signum() || !(f.abs() < 2.0 * e.abs()) {
            failures.push(format!("e={k}°: f={:.6}°", f.to_degrees()));
        }
    }
    let name = format!("wca contraction (γ={gamma})");
    if failures.is_empty() {
        CheckOutcome::new(name, true, "171 grid points, f(0) = 0")
    } else {
        CheckOutcome::new(name, false, failures.join("; "))
    }
}

/// Center-angle error after each sweep on a static, noiseless source,
/// starting `e0` away from it (rad). Element 0 is `e0`.
pub fn convergence_errors(e0: f64, sweeps: usize, gamma: f64) -> Vec<f64> {
    let pattern = AntennaPattern::directional(10.0);
    let base = ScanConfig {
        gamma,
        ..Default::default()
    };
    let mut center = e0;
    let mut errors = vec![e0];
    for _ in 0..sweeps {
        let config = base.centered_at(center);
        let scan = synthesize_scan(&config, |a| -40.0 + pattern.receive_gain_db(a));
        let estimate = wca_bearing(&scan, gamma).expect("valid scan");
        center = update_center(center, &estimate);
        errors.push(center);
    }
    errors
}

pub fn wca_convergence(e0_deg: f64, sweeps: usize, tol_deg: f64) -> CheckOutcome {
    let errors = convergence_errors(e0_deg.to_radians(), sweeps, 10.0);
    let first = errors.iter().position(|e| e.to_degrees().abs() < tol_deg);
    let name = "wca convergence";
    match first {
        Some(k) => CheckOutcome::new(name, true, format!("|e| < {tol_deg}° after {k} sweeps from {e0_deg}°")),
        None => CheckOutcome::new(
            name,
            false,
            format!("|e| = {:.3}° after {sweeps} sweeps", errors[sweeps].to_degrees()),
        ),
    }
}

/// Largest bearing change from shifting random scans by `offsets` (rad).
pub fn offset_invariance_error(trials: usize, offsets: &[f64], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let config = ScanConfig {
            theta_cen: rng.random_range(-1.5..1.5),
            half_count: rng.random_range(1..=24),
            gamma: [1.0, 5.0, 10.0][rng.random_range(0..3)],
            ..Default::default()
        };
        let scan = synthesize_scan(&config, |_| rng.random_range(-90.0..-20.0));
        let base = wca_bearing(&scan, config.gamma).expect("valid scan").theta_hat;
        for &c in offsets {
            let shifted = scan.with_rssi(scan.samples.iter().map(|s| s.rssi + c).collect::<Vec<_>>());
            let b = wca_bearing(&shifted, config.gamma).expect("valid scan").theta_hat;
            worst = worst.max((b - base).abs());
        }
    }
    worst
}

pub fn offset_invariance(trials: usize, tol: f64) -> CheckOutcome {
    let worst = offset_invariance_error(trials, &[-10.0, 10.0], 7);
    CheckOutcome::new(
        "uniform offset invariance",
        worst < tol,
        format!("{trials} scans, max shift {worst:.3e} rad"),
    )
}

/// Counts random wheel commands whose sum differs from `2v`.
pub fn sum_invariance_violations(samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = ControlParams::default();
    (0..samples)
        .filter(|_| {
            let theta = rng.random_range(-3.2..3.2);
            let prev = rng.random_range(-3.2..3.2);
            let v = quantize_command(rng.random_range(0.0..params.v_max));
            let c = wheel_velocities(theta, prev, v, &params);
            c.v_left + c.v_right != 2.0 * v
        })
        .count()
}

pub fn sum_invariance(samples: usize) -> CheckOutcome {
    let bad = sum_invariance_violations(samples, 11);
    CheckOutcome::new(
        "wheel sum invariance",
        bad == 0,
        format!("{bad} of {samples} random commands off 2v (grid {COMMAND_RESOLUTION} mm/s)"),
    )
}

/// Follower rows whose mode is `stop` but whose wheels are not at rest.
pub fn stop_dominance_violations(rows: &[TraceRow]) -> usize {
    rows.iter()
        .filter(|r| r.mode.as_deref() == Some("stop") && (r.v_left != 0.0 || r.v_right != 0.0))
        .count()
}

/// Largest Doppler loss magnitude for speeds up to `v_max` (m/s).
pub fn max_doppler_loss(v_max: f64) -> f64 {
    (0..=1000)
        .map(|k| v_max * k as f64 / 1000.0)
        .flat_map(|v| [v, -v])
        .map(|v| doppler_loss_delta(v, SPEED_OF_LIGHT).abs())
        .fold(0.0, f64::max)
}

pub fn doppler_bound(v_max: f64, tol: f64) -> CheckOutcome {
    let worst = max_doppler_loss(v_max);
    CheckOutcome::new(
        "doppler insignificance",
        worst < tol,
        format!("max |loss| {worst:.3e} dB for |v| <= {v_max} m/s"),
    )
}

/// Short runs of every preset: trace length, stop dominance and
/// reproducibility.
pub fn preset_smoke(duration_s: f64) -> Vec<CheckOutcome> {
    PRESET_NAMES
        .iter()
        .map(|name| {
            let mut config = scenario_preset(name).expect("bundled preset");
            config.duration_s = duration_s;
            let label = format!("preset {name}");
            let first = match run_scenario(&config) {
                Ok(rows) => rows,
                Err(e) => return CheckOutcome::new(label, false, e.to_string()),
            };
            let second = run_scenario(&config).expect("first run succeeded");
            let ticks = first.last().map_or(0, |r| r.tick + 1);
            let expected = (duration_s / config.scan_config().duration()).floor() as usize + 1;
            let stops = stop_dominance_violations(&first);
            let passed = ticks == expected && stops == 0 && first == second;
            CheckOutcome::new(
                label,
                passed,
                format!("{ticks}/{expected} ticks, {stops} stop violations, reproducible: {}", first == second),
            )
        })
        .collect()
}

/// The full suite run by `convoy check`.
pub fn run_all() -> Vec<CheckOutcome> {
    let mut out = vec![
        wca_contraction(1.0),
        wca_contraction(10.0),
        wca_convergence(60.0, 10, 1.0),
        offset_invariance(500, 1e-12),
        sum_invariance(10_000),
        doppler_bound(10.0, 1e-6),
    ];
    out.extend(preset_smoke(20.0));
    out
}
