//! Sonar-driven obstacle handling.
//!
//! Close obstacles (Situation 1) are escaped by steering away from the
//! weighted centroid of the sonar returns. Detected but distant obstacles
//! (Situation 2) lower the antenna readings in their direction by a
//! distance-decaying pseudo-RSSI, which pushes the bearing estimate toward
//! open space while the follower keeps tracking.

use crate::error::DomainError;
use crate::scan::ScanResult;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SonarBeam {
    /// Body-frame angle (rad).
    pub angle: f64,
    /// Range reading (m).
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SonarScan {
    pub beams: Vec<SonarBeam>,
    pub max_range: f64,
}

impl SonarScan {
    /// Sorts beams by angle and clips readings into `(0, max_range]`.
    pub fn new(mut beams: Vec<SonarBeam>, max_range: f64) -> Self {
        beams.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        for b in &mut beams {
            b.distance = b.distance.clamp(1e-6, max_range);
        }
        Self { beams, max_range }
    }

    pub fn count(&self) -> usize {
        self.beams.len()
    }

    pub fn min_distance(&self) -> f64 {
        self.beams.iter().map(|b| b.distance).fold(self.max_range, f64::min)
    }

    fn half_pitch(&self) -> f64 {
        match self.beams.len() {
            0 | 1 => 0.0,
            n => (self.beams[n - 1].angle - self.beams[0].angle) / (2 * (n - 1)) as f64,
        }
    }

    /// Beam whose angle is nearest to `angle`, if within half a beam pitch.
    pub fn covering_beam(&self, angle: f64) -> Option<&SonarBeam> {
        let half = self.half_pitch();
        self.beams
            .iter()
            .min_by(|a, b| (a.angle - angle).abs().total_cmp(&(b.angle - angle).abs()))
            .filter(|b| (b.angle - angle).abs() <= half + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AvoidanceParams {
    /// Situation 1 distance (m).
    pub d_crit: f64,
    /// Detection threshold (cm).
    pub threshold_o: f64,
    /// Penalty scale; zero disables the penalty.
    pub alpha: f64,
    /// Penalty decay (1/m).
    pub beta: f64,
    pub gamma_sonar: f64,
}

impl Default for AvoidanceParams {
    fn default() -> Self {
        Self {
            d_crit: 1.0,
            threshold_o: 800.0,
            alpha: 20.0,
            beta: 0.5,
            gamma_sonar: 10.0,
        }
    }
}

impl AvoidanceParams {
    pub fn threshold_m(&self) -> f64 {
        self.threshold_o / 100.0
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |f: &str, r: &str| Err(DomainError::invalid(format!("avoidance.{f}"), r));
        if !(self.d_crit > 0.0) {
            return bad("d_crit", "must be positive");
        }
        if !(self.threshold_o > self.d_crit * 100.0) {
            return bad("threshold_o", "must exceed d_crit (in cm)");
        }
        if !(self.alpha >= 0.0) {
            return bad("alpha", "must be non-negative");
        }
        if !(self.beta > 0.0) {
            return bad("beta", "must be positive");
        }
        if !(self.gamma_sonar > 0.0) {
            return bad("gamma_sonar", "must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Situation {
    Free,
    Situation2,
    Situation1,
}

impl Situation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Situation::Free => "free",
            Situation::Situation2 => "situation2",
            Situation::Situation1 => "situation1",
        }
    }
}

pub fn classify_situation(sonar: &SonarScan, params: &AvoidanceParams) -> Situation {
    let d = sonar.min_distance();
    if d < params.d_crit {
        Situation::Situation1
    } else if d < params.threshold_m() {
        Situation::Situation2
    } else {
        Situation::Free
    }
}

/// Weighted centroid of the sonar returns, weights `10^(-distance/γ)`.
///
/// Closer returns weigh more, so the result points at the obstacle mass;
/// the controller steers against it.
pub fn escape_direction(sonar: &SonarScan, gamma_sonar: f64) -> Result<f64, DomainError> {
    if !(gamma_sonar > 0.0) {
        return Err(DomainError::NonPositiveGain(gamma_sonar));
    }
    if sonar.beams.is_empty() {
        return Err(DomainError::Empty("sonar scan"));
    }
    let (num, den) = sonar.beams.iter().fold((0.0, 0.0), |(num, den), b| {
        let w = 10f64.powf(-b.distance / gamma_sonar);
        (num + w * b.angle, den + w)
    });
    Ok(num / den)
}

/// `α·exp(-β·distance)`.
pub fn pseudo_rssi(distance: f64, alpha: f64, beta: f64) -> f64 {
    alpha * (-beta * distance).exp()
}

/// Lowers each antenna reading by the pseudo-RSSI of the sonar beam that
/// covers its angle, when that beam sees an obstacle inside the detection
/// threshold.
pub fn apply_penalty(
    scan: &ScanResult,
    sonar: &SonarScan,
    params: &AvoidanceParams,
) -> Result<ScanResult, DomainError> {
    if sonar.beams.is_empty() {
        return Err(DomainError::Coverage("sonar scan has no beams".into()));
    }
    if sonar
        .beams
        .iter()
        .any(|b| !(b.angle.abs() <= std::f64::consts::PI) || !(b.distance > 0.0))
    {
        return Err(DomainError::Coverage("beam outside the body frame".into()));
    }
    if sonar.beams.windows(2).any(|w| w[0].angle >= w[1].angle) {
        return Err(DomainError::Coverage("beams are not in strictly increasing angle order".into()));
    }
    let threshold = params.threshold_m();
    let rssi = scan.samples.iter().map(|s| match sonar.covering_beam(s.angle) {
        Some(b) if b.distance < threshold => s.rssi - pseudo_rssi(b.distance, params.alpha, params.beta),
        _ => s.rssi,
    });
    Ok(scan.with_rssi(rssi.collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scan::ScanSample;

    fn sonar(pairs: &[(f64, f64)], max_range: f64) -> SonarScan {
        SonarScan::new(
            pairs
                .iter()
                .map(|&(a, d)| SonarBeam {
                    angle: a.to_radians(),
                    distance: d,
                })
                .collect(),
            max_range,
        )
    }

    #[test]
    fn situations_partition_distance() {
        let p = AvoidanceParams::default();
        assert_eq!(classify_situation(&sonar(&[(0.0, 0.5), (10.0, 9.0)], 10.0), &p), Situation::Situation1);
        assert_eq!(classify_situation(&sonar(&[(0.0, 3.0)], 10.0), &p), Situation::Situation2);
        assert_eq!(classify_situation(&sonar(&[(0.0, 10.0), (20.0, 10.0)], 10.0), &p), Situation::Free);
        assert_eq!(classify_situation(&sonar(&[(0.0, 1.0)], 10.0), &p), Situation::Situation2);
        assert_eq!(classify_situation(&sonar(&[(0.0, 8.0)], 10.0), &p), Situation::Free);
    }

    #[test]
    fn escape_examples() {
        let s = sonar(&[(-30.0, 2.0), (0.0, 4.0), (30.0, 2.0)], 10.0);
        assert!(escape_direction(&s, 10.0).unwrap().abs() < 1e-15);
        // Frozen from a 30-digit evaluation of the weighted mean.
        let s = sonar(&[(-45.0, 5.0), (0.0, 5.0), (45.0, 1.0)], 10.0);
        let e = escape_direction(&s, 10.0).unwrap().to_degrees();
        assert!((e - 15.079_034_113_712_852).abs() < 1e-9, "{e}");
        let s = sonar(&[(-40.0, 3.0), (10.0, 3.0), (90.0, 3.0)], 10.0);
        assert!((escape_direction(&s, 10.0).unwrap().to_degrees() - 20.0).abs() < 1e-9);
        assert!(escape_direction(&SonarScan::new(vec![], 10.0), 10.0).is_err());
    }

    #[test]
    fn pseudo_rssi_examples() {
        assert!(pseudo_rssi(1e4, 20.0, 0.5) < 1e-300);
        assert!((pseudo_rssi(1.0, 20.0, 0.5) - 12.130_613_194_252_668).abs() < 1e-12);
        assert_eq!(pseudo_rssi(0.3, 0.0, 0.5), 0.0);
        assert!(pseudo_rssi(1.0, 20.0, 0.5) > pseudo_rssi(1.1, 20.0, 0.5));
    }

    #[test]
    fn penalty_only_where_covered_and_detected() {
        let scan = ScanResult::new(
            [-120.0, -20.0, -40.0, 20.0, 120.0]
                .iter()
                .map(|a: &f64| ScanSample {
                    angle: a.to_radians(),
                    rssi: -40.0,
                })
                .collect(),
            1.0,
        );
        let p = AvoidanceParams::default();
        let s = sonar(&[(-90.0, 10.0), (-30.0, 2.0), (30.0, 9.0), (90.0, 10.0)], 10.0);
        let out = apply_penalty(&scan, &s, &p).unwrap();
        let r: Vec<f64> = out.samples.iter().map(|s| s.rssi).collect();
        // Sorted angles: -120 (uncovered), -40, -20 (both on the -30° beam), 20, 120.
        let hit = -40.0 - pseudo_rssi(2.0, 20.0, 0.5);
        assert_eq!(r, vec![-40.0, hit, hit, -40.0, -40.0]);
    }

    #[test]
    fn penalty_disabled_or_clear_is_identity() {
        let scan = ScanResult::new(
            (0..5)
                .map(|i| ScanSample {
                    angle: (i as f64 - 2.0) * 0.3,
                    rssi: -40.0 - i as f64,
                })
                .collect(),
            1.0,
        );
        let s = sonar(&[(-60.0, 2.0), (0.0, 1.5), (60.0, 3.0)], 10.0);
        let off = AvoidanceParams {
            alpha: 0.0,
            ..Default::default()
        };
        assert_eq!(apply_penalty(&scan, &s, &off).unwrap(), scan);
        let clear = sonar(&[(-60.0, 10.0), (0.0, 10.0), (60.0, 10.0)], 10.0);
        assert_eq!(apply_penalty(&scan, &clear, &AvoidanceParams::default()).unwrap(), scan);
    }

    #[test]
    fn coverage_errors() {
        let scan = ScanResult::new(vec![ScanSample { angle: 0.0, rssi: -40.0 }], 1.0);
        let p = AvoidanceParams::default();
        assert!(matches!(
            apply_penalty(&scan, &SonarScan::new(vec![], 10.0), &p),
            Err(DomainError::Coverage(_))
        ));
        let bad = SonarScan {
            beams: vec![SonarBeam { angle: 4.0, distance: 1.0 }],
            max_range: 10.0,
        };
        assert!(apply_penalty(&scan, &bad, &p).is_err());
    }
}
