//! Follower velocity control: steering from the bearing estimate, a
//! background speed that falls as the leader's signal strengthens, and the
//! drive/stop decision over the front and rear links.

use crate::avoidance::{
    apply_penalty, classify_situation, escape_direction, AvoidanceParams, Situation, SonarScan,
};
use crate::error::DomainError;
use crate::scan::{update_center, wca_bearing, BearingEstimate, ScanResult};
use crate::sim::{Motion, RobotState};
use serde::{Deserialize, Serialize};

/// Wheel commands are issued on a 1/1024 mm/s grid. On that grid the sums
/// and differences below are exact in `f64`.
pub const COMMAND_RESOLUTION: f64 = 1.0 / 1024.0;

pub fn quantize_command(v: f64) -> f64 {
    (v / COMMAND_RESOLUTION).round() * COMMAND_RESOLUTION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    /// Proportional steering gain (mm/s per rad).
    pub kp: f64,
    /// Derivative steering gain (mm/s per rad).
    pub kd: f64,
    /// Speed-vs-RSSI slope (mm/s per dB).
    pub omega1: f64,
    /// Speed offset (mm/s).
    pub omega2: f64,
    /// Leader-side stop threshold (dBm).
    pub threshold_l: f64,
    /// Rear-side stop threshold (dBm).
    pub threshold_b: f64,
    /// Wheel speed limit (mm/s).
    pub v_max: f64,
}

impl Default for ControlParams {
    fn default() -> Self {
        Self::from_degree_gains(1.0, 0.3)
    }
}

impl ControlParams {
    /// Builds parameters from steering gains given per degree of bearing.
    pub fn from_degree_gains(kp_per_deg: f64, kd_per_deg: f64) -> Self {
        Self {
            kp: kp_per_deg.to_degrees(),
            kd: kd_per_deg.to_degrees(),
            omega1: 10.0,
            omega2: 150.0,
            threshold_l: -30.0,
            threshold_b: -40.0,
            v_max: 400.0,
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |f: &str, r: &str| Err(DomainError::invalid(format!("control.{f}"), r));
        if !(self.kp >= 0.0) {
            return bad("kp", "must be non-negative");
        }
        if !(self.kd >= 0.0) {
            return bad("kd", "must be non-negative");
        }
        if !(self.omega1 > 0.0) {
            return bad("omega1", "must be positive");
        }
        if !(self.omega2 > 0.0) {
            return bad("omega2", "must be positive");
        }
        if !(self.v_max > 0.0) {
            return bad("v_max", "must be positive");
        }
        if !self.threshold_l.is_finite() || !self.threshold_b.is_finite() {
            return bad("threshold_l", "thresholds must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WheelCommand {
    /// mm/s
    pub v_left: f64,
    /// mm/s
    pub v_right: f64,
}

impl WheelCommand {
    pub const STOP: WheelCommand = WheelCommand {
        v_left: 0.0,
        v_right: 0.0,
    };

    pub fn is_stopped(&self) -> bool {
        self.v_left == 0.0 && self.v_right == 0.0
    }
}

/// `-ω1·RSSI - ω2`, clamped to `[0, v_max]`.
pub fn background_velocity(best_rssi: f64, params: &ControlParams) -> f64 {
    quantize_command((-params.omega1 * best_rssi - params.omega2).clamp(0.0, params.v_max))
}

/// Left/right wheel speeds steering toward `theta_hat`.
///
/// The steering term is limited so neither wheel exceeds `v_max`; the wheel
/// sum stays `2v` for any `v` on the command grid.
pub fn wheel_velocities(theta_hat: f64, theta_hat_prev: f64, v: f64, params: &ControlParams) -> WheelCommand {
    let v = quantize_command(v.clamp(-params.v_max, params.v_max));
    let room = params.v_max - v.abs();
    let steer = quantize_command(steering_term(theta_hat, theta_hat_prev, params).clamp(-room, room));
    WheelCommand {
        v_left: v + steer,
        v_right: v - steer,
    }
}

fn steering_term(theta_hat: f64, theta_hat_prev: f64, params: &ControlParams) -> f64 {
    params.kp * theta_hat + params.kd * (theta_hat - theta_hat_prev)
}

/// Background speed lowered so that the full steering term fits under
/// `v_max`: turning takes priority over forward progress.
pub fn turn_priority_speed(v: f64, theta_hat: f64, theta_hat_prev: f64, params: &ControlParams) -> f64 {
    let headroom = (params.v_max - steering_term(theta_hat, theta_hat_prev, params).abs()).max(0.0);
    quantize_command(v.min(headroom))
}

pub fn stop_decision(rssi_leader: f64, rssi_behind: f64, params: &ControlParams) -> Motion {
    if rssi_leader < params.threshold_l && rssi_behind > params.threshold_b {
        Motion::Drive
    } else {
        Motion::Stop
    }
}

/// Everything a follower needs to turn one sweep into a command.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowerParams {
    pub control: ControlParams,
    pub avoidance: AvoidanceParams,
    pub gamma: f64,
    /// Boresight gain of the sensing antenna; the leader RSSI is reported
    /// relative to it so thresholds read against the 1 m reference power.
    pub sensing_gain_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FollowerStep {
    pub command: WheelCommand,
    pub state: RobotState,
    pub situation: Situation,
    /// Antenna bearing estimate from this sweep.
    pub estimate: BearingEstimate,
    /// Bearing fed to the wheel controller.
    pub steer: f64,
    pub rssi_leader: f64,
}

/// One scan-and-act cycle.
pub fn follower_step(
    state: &RobotState,
    scan: &ScanResult,
    sonar: &SonarScan,
    rssi_behind: f64,
    params: &FollowerParams,
) -> Result<FollowerStep, DomainError> {
    let situation = classify_situation(sonar, &params.avoidance);
    let estimate = match situation {
        Situation::Free => wca_bearing(scan, params.gamma)?,
        Situation::Situation2 | Situation::Situation1 => {
            wca_bearing(&apply_penalty(scan, sonar, &params.avoidance)?, params.gamma)?
        }
    };
    let steer = match situation {
        Situation::Situation1 => -escape_direction(sonar, params.avoidance.gamma_sonar)?,
        _ => estimate.theta_hat,
    };
    let rssi_leader = scan.best_rssi - params.sensing_gain_db;
    let mode = stop_decision(rssi_leader, rssi_behind, &params.control);
    let command = match mode {
        Motion::Stop => WheelCommand::STOP,
        Motion::Drive => {
            let prev = state.scan_prev_bearing.unwrap_or(steer);
            let v = background_velocity(rssi_leader, &params.control);
            let v = turn_priority_speed(v, steer, prev, &params.control);
            wheel_velocities(steer, prev, v, &params.control)
        }
    };
    let next = RobotState {
        wheels: command,
        antenna_center: update_center(state.antenna_center, &estimate),
        mode,
        scan_prev_bearing: Some(steer),
        ..state.clone()
    };
    Ok(FollowerStep {
        command,
        state: next,
        situation,
        estimate,
        steer,
        rssi_leader,
    })
}
