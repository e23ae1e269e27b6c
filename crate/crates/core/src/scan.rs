//! Rotating-antenna sweeps and weighted-centroid bearing estimation.
//!
//! A sweep samples `2N + 1` body-frame angles symmetric about the current
//! center angle. Each sample is weighted by `10^(rssi/γ)` and the bearing is
//! the weighted mean angle. The next sweep is centered on that estimate.

use crate::error::DomainError;
use crate::radio::AntennaPattern;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Total sweep range θ^i (rad).
    pub theta_interest: f64,
    /// Body-frame center angle (rad).
    pub theta_cen: f64,
    /// Samples are indexed `j = -N..=N`.
    pub half_count: usize,
    /// Antenna angular velocity (rad/s).
    pub scan_rate: f64,
    /// Weight gain γ.
    pub gamma: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            theta_interest: PI,
            theta_cen: 0.0,
            half_count: 12,
            scan_rate: PI,
            gamma: 10.0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), DomainError> {
        if !(self.theta_interest > 0.0 && self.theta_interest <= 2.0 * PI) {
            return Err(DomainError::invalid("scan.theta_interest", "must lie in (0, 2π]"));
        }
        if self.half_count < 1 {
            return Err(DomainError::invalid("scan.half_count", "must be at least 1"));
        }
        if !(self.gamma > 0.0) {
            return Err(DomainError::invalid("scan.gamma", "must be positive"));
        }
        if !(self.scan_rate > 0.0) {
            return Err(DomainError::invalid("scan.scan_rate", "must be positive"));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        2 * self.half_count + 1
    }

    /// Angular step between adjacent samples.
    pub fn step(&self) -> f64 {
        self.theta_interest / (2 * self.half_count) as f64
    }

    /// Sweep time θ^i / θ̇ (s).
    pub fn duration(&self) -> f64 {
        self.theta_interest / self.scan_rate
    }

    /// Largest angular offset from the center.
    pub fn theta_max(&self) -> f64 {
        self.theta_interest / 2.0
    }

    /// `[θ^s, θ^e]`.
    pub fn window(&self) -> (f64, f64) {
        (self.theta_cen - self.theta_max(), self.theta_cen + self.theta_max())
    }

    /// Copy re-centered on `center`, clamped so the sweep stays within the
    /// body-frame limits `[-π, π]`.
    pub fn centered_at(&self, center: f64) -> Self {
        let lim = (PI - self.theta_max()).max(0.0);
        Self {
            theta_cen: center.clamp(-lim, lim),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSample {
    pub angle: f64,
    pub rssi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub samples: Vec<ScanSample>,
    pub best_rssi: f64,
    pub duration: f64,
}

impl ScanResult {
    /// Sorts the samples by angle and derives the best reading.
    pub fn new(mut samples: Vec<ScanSample>, duration: f64) -> Self {
        samples.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        let best_rssi = samples.iter().map(|s| s.rssi).fold(f64::NEG_INFINITY, f64::max);
        Self {
            samples,
            best_rssi,
            duration,
        }
    }

    pub fn angle_range(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.angle, self.samples.last()?.angle))
    }

    /// Same angles with the readings replaced.
    pub fn with_rssi(&self, rssi: impl IntoIterator<Item = f64>) -> Self {
        let samples = self
            .samples
            .iter()
            .zip(rssi)
            .map(|(s, r)| ScanSample { angle: s.angle, rssi: r })
            .collect();
        Self::new(samples, self.duration)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BearingEstimate {
    /// Estimated direction of arrival, body frame (rad).
    pub theta_hat: f64,
    /// Center-angle error against ground truth, when known.
    pub error: Option<f64>,
}

impl BearingEstimate {
    pub fn with_truth(self, true_bearing: f64) -> Self {
        Self {
            error: Some(self.theta_hat - true_bearing),
            ..self
        }
    }
}

pub fn scan_angles(config: &ScanConfig) -> Vec<f64> {
    let n = config.half_count as i64;
    let step = config.step();
    (-n..=n).map(|j| config.theta_cen + j as f64 * step).collect()
}

/// Samples `rssi_at` at every sweep angle.
pub fn synthesize_scan(config: &ScanConfig, mut rssi_at: impl FnMut(f64) -> f64) -> ScanResult {
    let samples = scan_angles(config)
        .into_iter()
        .map(|angle| ScanSample {
            angle,
            rssi: rssi_at(angle),
        })
        .collect();
    ScanResult::new(samples, config.duration())
}

pub fn wca_weight(rssi: f64, gamma: f64) -> Result<f64, DomainError> {
    if !(gamma > 0.0) {
        return Err(DomainError::NonPositiveGain(gamma));
    }
    Ok(10f64.powf(rssi / gamma))
}

/// Weighted-centroid bearing of a sweep.
pub fn wca_bearing(scan: &ScanResult, gamma: f64) -> Result<BearingEstimate, DomainError> {
    if !(gamma > 0.0) {
        return Err(DomainError::NonPositiveGain(gamma));
    }
    if scan.samples.is_empty() {
        return Err(DomainError::Empty("scan"));
    }
    // Weights are taken relative to the strongest sample; the common factor
    // cancels and small readings cannot underflow.
    let top = scan.samples.iter().map(|s| s.rssi).fold(f64::NEG_INFINITY, f64::max);
    let (num, den) = scan.samples.iter().fold((0.0, 0.0), |(num, den), s| {
        let w = 10f64.powf((s.rssi - top) / gamma);
        (num + w * s.angle, den + w)
    });
    let (lo, hi) = scan.angle_range().expect("non-empty");
    Ok(BearingEstimate {
        theta_hat: (num / den).clamp(lo, hi),
        error: None,
    })
}

/// Next sweep center: the latest estimate, or the previous center if the
/// estimate is unusable.
pub fn update_center(prev_center: f64, estimate: &BearingEstimate) -> f64 {
    if estimate.theta_hat.is_finite() {
        estimate.theta_hat
    } else {
        prev_center
    }
}

/// Per-sweep change of the center-angle error for a noiseless static
/// source seen through a cos² receive pattern of peak gain `gr_db`.
pub fn error_step(e: f64, config: &ScanConfig, gr_db: f64) -> f64 {
    let pattern = AntennaPattern::directional(gr_db);
    let n = config.half_count as i64;
    let step = config.step();
    let w = |j: i64| 10f64.powf(pattern.receive_gain_db(e + j as f64 * step) / config.gamma);
    // Mirrored samples are paired so that f(0) = 0 and f(-e) = -f(e) exactly.
    let (num, den) = (1..=n).fold((0.0, w(0)), |(num, den), j| {
        let (a, b) = (w(j), w(-j));
        (num + j as f64 * (a - b), den + (a + b))
    });
    step * num / den
}

/// Whether the bearing can be tracked for the given leader motion.
pub fn tracking_feasible(
    v_relative: f64,
    v_leader_perp: f64,
    scan_rate: f64,
    d: f64,
    theta_max: f64,
) -> bool {
    v_relative <= scan_rate * d / theta_max || v_leader_perp <= scan_rate * d + theta_max * v_relative
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn scan_of(angles_deg: &[f64], rssi: &[f64]) -> ScanResult {
        ScanResult::new(
            angles_deg
                .iter()
                .zip(rssi)
                .map(|(&a, &r)| ScanSample { angle: deg(a), rssi: r })
                .collect(),
            1.0,
        )
    }

    #[test]
    fn angles_span_the_window() {
        let c = ScanConfig {
            half_count: 1,
            ..Default::default()
        };
        let a = scan_angles(&c);
        assert_eq!(a, vec![-FRAC_PI_2, 0.0, FRAC_PI_2]);
        let a = scan_angles(&ScanConfig {
            theta_cen: PI / 4.0,
            ..c
        });
        for (x, y) in a.iter().zip([-PI / 4.0, PI / 4.0, 3.0 * PI / 4.0]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(scan_angles(&ScanConfig::default()).len(), 25);
    }

    #[test]
    fn weights() {
        assert!((wca_weight(-30.0, 10.0).unwrap() - 1e-3).abs() < 1e-18);
        assert_eq!(wca_weight(0.0, 3.0).unwrap(), 1.0);
        let r = wca_weight(-40.0, 10.0).unwrap() / wca_weight(-30.0, 10.0).unwrap();
        assert!((r - 0.1).abs() < 1e-15);
        assert_eq!(wca_weight(-30.0, 0.0), Err(DomainError::NonPositiveGain(0.0)));
        assert!(wca_weight(-30.0, -1.0).is_err());
    }

    #[test]
    fn bearing_examples() {
        let b = wca_bearing(&scan_of(&[-10.0, 0.0, 10.0], &[-40.0, -30.0, -40.0]), 10.0).unwrap();
        assert!(b.theta_hat.abs() < 1e-15);
        // Frozen from a 30-digit evaluation of the weighted mean.
        let b = wca_bearing(&scan_of(&[-10.0, 0.0, 10.0], &[-40.0, -30.0, -35.0]), 10.0).unwrap();
        assert!((b.theta_hat.to_degrees() - 1.526_786_659_641_491).abs() < 1e-9);
        let b = wca_bearing(&scan_of(&[-30.0, 0.0, 60.0], &[-50.0; 3]), 10.0).unwrap();
        assert!((b.theta_hat - deg(10.0)).abs() < 1e-12);
        assert_eq!(
            wca_bearing(&ScanResult::new(vec![], 1.0), 10.0),
            Err(DomainError::Empty("scan"))
        );
    }

    #[test]
    fn center_update_passes_estimate_through() {
        let est = BearingEstimate {
            theta_hat: 0.3,
            error: None,
        };
        assert_eq!(update_center(0.0, &est), 0.3);
        let nan = BearingEstimate {
            theta_hat: f64::NAN,
            error: None,
        };
        assert_eq!(update_center(0.1, &nan), 0.1);
        // A sweep centered on the edge angle is clamped to the servo limits.
        let c = ScanConfig::default().centered_at(FRAC_PI_2);
        assert_eq!(c.window(), (0.0, PI));
        assert_eq!(ScanConfig::default().centered_at(2.0).theta_cen, FRAC_PI_2);
    }

    #[test]
    fn error_step_shape() {
        let c = ScanConfig::default();
        assert_eq!(error_step(0.0, &c, 10.0), 0.0);
        assert!(error_step(0.5, &c, 10.0) < 0.0);
        assert!(error_step(-0.5, &c, 10.0) > 0.0);
    }

    #[test]
    fn tracking_conditions() {
        assert!(tracking_feasible(10.0, 1e9, PI, 5.0, FRAC_PI_2));
        assert!(!tracking_feasible(10.5, 1e9, PI, 5.0, FRAC_PI_2));
        assert!(tracking_feasible(0.0, 0.0, PI, 5.0, FRAC_PI_2));
        assert!(!tracking_feasible(1e3, 1e6, PI, 5.0, FRAC_PI_2));
        // Condition 2 alone.
        assert!(tracking_feasible(20.0, 40.0, PI, 5.0, FRAC_PI_2));
    }

    #[test]
    fn config_validation() {
        assert!(ScanConfig::default().validate().is_ok());
        assert!(ScanConfig { gamma: -1.0, ..Default::default() }.validate().is_err());
        assert!(ScanConfig { half_count: 0, ..Default::default() }.validate().is_err());
        assert!(ScanConfig { theta_interest: 7.0, ..Default::default() }.validate().is_err());
        assert!(ScanConfig { scan_rate: 0.0, ..Default::default() }.validate().is_err());
    }
}
