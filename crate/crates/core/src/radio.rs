//! Received signal strength between two nodes.
//!
//! The mean power follows a log-distance law referenced to 1 m, plus the
//! receive antenna's angular gain, the transmit gain, and a fixed loss per
//! obstacle crossed. Stochastic terms are a zero-mean Gaussian shadowing
//! draw and a Nakagami-amplitude multipath draw, both in dB.

use crate::error::DomainError;
use crate::geometry::{normalize_angle, Pose};
use crate::world::WorldModel;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, LN_10, PI};

pub const SPEED_OF_LIGHT: f64 = 2.998e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PathLossModel {
    /// Received power at 1 m (dBm).
    pub l0_dbm: f64,
    /// Log-distance decay exponent.
    pub n: f64,
    pub shadow_sigma_db: f64,
    /// Enables the multipath term.
    pub multipath: bool,
    /// Nakagami shape (1 is Rayleigh).
    pub multipath_m: f64,
    /// Loss per crossed obstacle unless the obstacle sets its own (dB).
    pub wall_loss_db: f64,
    pub freq_hz: f64,
    /// Wave speed (m/s).
    pub c: f64,
    /// Apply the relative-velocity term to the free-space loss.
    pub doppler: bool,
}

impl Default for PathLossModel {
    fn default() -> Self {
        Self {
            l0_dbm: -15.0,
            n: 2.0,
            shadow_sigma_db: 0.0,
            multipath: false,
            multipath_m: 1.0,
            wall_loss_db: 10.0,
            freq_hz: 2.4e9,
            c: SPEED_OF_LIGHT,
            doppler: false,
        }
    }
}

impl PathLossModel {
    /// Noise-free copy.
    pub fn noiseless(&self) -> Self {
        Self {
            shadow_sigma_db: 0.0,
            multipath: false,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let bad = |f: &str, r: &str| Err(DomainError::invalid(format!("radio.{f}"), r));
        if !(self.n > 0.0) {
            return bad("n", "must be positive");
        }
        if !(self.shadow_sigma_db >= 0.0) {
            return bad("shadow_sigma_db", "must be non-negative");
        }
        if !(self.multipath_m >= 0.5) {
            return bad("multipath_m", "Nakagami shape must be at least 0.5");
        }
        if !(self.wall_loss_db >= 0.0) {
            return bad("wall_loss_db", "must be non-negative");
        }
        if !(self.freq_hz > 0.0) {
            return bad("freq_hz", "must be positive");
        }
        if !(self.c > 0.0) {
            return bad("c", "must be positive");
        }
        if !self.l0_dbm.is_finite() {
            return bad("l0_dbm", "must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntennaKind {
    Omni,
    Directional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    pub kind: AntennaKind,
    /// Peak receive gain (dB).
    pub gr_db: f64,
    /// Transmit gain (dB).
    pub gt_db: f64,
    /// Nominal half-power width; informational only.
    pub beamwidth_deg: f64,
}

impl AntennaPattern {
    pub fn omni(gain_db: f64) -> Self {
        Self {
            kind: AntennaKind::Omni,
            gr_db: gain_db,
            gt_db: gain_db,
            beamwidth_deg: 360.0,
        }
    }

    /// cos² pattern; the back half-plane contributes no gain.
    pub fn directional(gain_db: f64) -> Self {
        Self {
            kind: AntennaKind::Directional,
            gr_db: gain_db,
            gt_db: gain_db,
            beamwidth_deg: 90.0,
        }
    }

    /// Gain multiplier at boresight error `phi`.
    pub fn pattern(&self, phi: f64) -> f64 {
        match self.kind {
            AntennaKind::Omni => 1.0,
            AntennaKind::Directional => {
                let phi = normalize_angle(phi);
                if phi.abs() > FRAC_PI_2 {
                    0.0
                } else {
                    phi.cos().powi(2)
                }
            }
        }
    }

    /// Receive gain (dB) at boresight error `phi`.
    pub fn receive_gain_db(&self, phi: f64) -> f64 {
        self.gr_db * self.pattern(phi)
    }
}

/// Free-space loss `20·log10(4π·d·f/c)` in dB.
pub fn free_space_loss(d: f64, model: &PathLossModel) -> Result<f64, DomainError> {
    if !(d > 0.0) {
        return Err(DomainError::NonPositiveDistance(d));
    }
    Ok(20.0 * (4.0 * PI * d * model.freq_hz / model.c).log10())
}

/// Mean received power (dBm) at `rx` from `tx`.
///
/// `rx_boresight` is the world-frame pointing direction of the receive
/// antenna.
pub fn deterministic_rssi(
    tx: &Pose,
    rx: &Pose,
    rx_boresight: f64,
    tx_pattern: &AntennaPattern,
    rx_pattern: &AntennaPattern,
    model: &PathLossModel,
    world: &WorldModel,
) -> Result<f64, DomainError> {
    let (tp, rp) = (tx.position(), rx.position());
    let d = tp.distance(&rp);
    if d == 0.0 {
        return Err(DomainError::CoincidentPositions);
    }
    let phi = rp.direction_to(&tp) - rx_boresight;
    let walls = world.crossing_loss_db(&tp, &rp, model.wall_loss_db);
    Ok(model.l0_dbm - 10.0 * model.n * d.log10() + rx_pattern.receive_gain_db(phi) + tx_pattern.gt_db - walls)
}

/// Zero-mean Gaussian shadowing draw (dB). Draws nothing when σ = 0.
pub fn draw_shadowing<R: Rng + ?Sized>(model: &PathLossModel, rng: &mut R) -> f64 {
    if model.shadow_sigma_db > 0.0 {
        Normal::new(0.0, model.shadow_sigma_db).expect("validated sigma").sample(rng)
    } else {
        0.0
    }
}

/// Multipath fluctuation `20·log10(a)` with `a ~ Nakagami(m, Ω = 1)` (dB).
pub fn draw_multipath<R: Rng + ?Sized>(model: &PathLossModel, rng: &mut R) -> f64 {
    if !model.multipath {
        return 0.0;
    }
    let m = model.multipath_m;
    // a² ~ Gamma(m, Ω/m)
    let power: f64 = Gamma::new(m, 1.0 / m).expect("validated shape").sample(rng);
    10.0 * power.max(f64::MIN_POSITIVE).log10()
}

/// One noisy RSSI observation around a deterministic mean.
pub fn sample_rssi<R: Rng + ?Sized>(deterministic_dbm: f64, model: &PathLossModel, rng: &mut R) -> f64 {
    let shadow = draw_shadowing(model, rng);
    let multipath = draw_multipath(model, rng);
    if shadow == 0.0 && multipath == 0.0 {
        return deterministic_dbm;
    }
    deterministic_dbm + shadow + multipath
}

/// Observed frequency for a follower closing at `v_follower` on a leader
/// receding at `v_leader`.
pub fn doppler_frequency(f: f64, v_follower: f64, v_leader: f64, c: f64) -> f64 {
    f * (1.0 + (v_follower - v_leader) / c)
}

/// Extra free-space loss `20·log10((c + v)/c)` (dB) from a relative
/// velocity `v` (positive when separating).
pub fn doppler_loss_delta(v_relative: f64, c: f64) -> f64 {
    20.0 / LN_10 * (v_relative / c).ln_1p()
}

/// Parallel and perpendicular components of a speed `v` relative to the
/// true line of bearing.
pub fn velocity_components(v: f64, theta_cen: f64, theta_cen_star: f64) -> (f64, f64) {
    let (s, c) = (theta_cen - theta_cen_star).sin_cos();
    (v * c, v * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn empty() -> WorldModel {
        WorldModel::empty([-100.0, -100.0, 100.0, 100.0])
    }

    #[test]
    fn free_space_loss_values() {
        let m = PathLossModel::default();
        // Frozen from a 30-digit evaluation of 20·log10(4π·d·2.4e9/2.998e8).
        assert!((free_space_loss(1.0, &m).unwrap() - 40.051_789_544_428_83).abs() < 1e-9);
        assert!((free_space_loss(10.0, &m).unwrap() - 60.051_789_544_428_83).abs() < 1e-9);
        let unity = PathLossModel {
            freq_hz: m.c / (4.0 * PI),
            ..m.clone()
        };
        assert!(free_space_loss(1.0, &unity).unwrap().abs() < 1e-12);
        assert!(matches!(free_space_loss(0.0, &m), Err(DomainError::NonPositiveDistance(_))));
        assert!(free_space_loss(-1.0, &m).is_err());
    }

    #[test]
    fn deterministic_rssi_examples() {
        let m = PathLossModel::default();
        let omni = AntennaPattern::omni(0.0);
        let tx = Pose::new(1.0, 0.0, 0.0);
        let rx = Pose::new(0.0, 0.0, 0.0);
        let p = deterministic_rssi(&tx, &rx, 0.0, &omni, &omni, &m, &empty()).unwrap();
        assert_eq!(p, m.l0_dbm);

        let tx = Pose::new(10.0, 0.0, 0.0);
        let p = deterministic_rssi(&tx, &rx, 0.0, &omni, &omni, &m, &empty()).unwrap();
        assert!((p - -35.0).abs() < 1e-12);

        // Receiver looking 90° away from the source: no gain left.
        let dir = AntennaPattern::directional(10.0);
        let side = deterministic_rssi(&tx, &rx, FRAC_PI_2, &omni, &dir, &m, &empty()).unwrap();
        assert!((side - p).abs() < 1e-12);
        let back = deterministic_rssi(&tx, &rx, PI, &omni, &dir, &m, &empty()).unwrap();
        assert_eq!(back, p);
        let front = deterministic_rssi(&tx, &rx, 0.0, &omni, &dir, &m, &empty()).unwrap();
        assert!((front - p - 10.0).abs() < 1e-12);

        assert_eq!(
            deterministic_rssi(&rx, &rx, 0.0, &omni, &omni, &m, &empty()),
            Err(DomainError::CoincidentPositions)
        );
    }

    #[test]
    fn walls_subtract_per_crossing() {
        use crate::world::Obstacle;
        let m = PathLossModel::default();
        let omni = AntennaPattern::omni(0.0);
        let w = empty()
            .with_obstacle(Obstacle::segment((2.0, -5.0), (2.0, 5.0)))
            .with_obstacle(Obstacle::segment((4.0, -5.0), (4.0, 5.0)).with_attenuation(3.0));
        let tx = Pose::new(10.0, 0.0, 0.0);
        let rx = Pose::new(0.0, 0.0, 0.0);
        let p = deterministic_rssi(&tx, &rx, 0.0, &omni, &omni, &m, &w).unwrap();
        assert!((p - (-35.0 - 13.0)).abs() < 1e-12);
    }

    #[test]
    fn noise_disabled_is_identity() {
        let m = PathLossModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(sample_rssi(-35.0, &m, &mut rng), -35.0);
    }

    #[test]
    fn shadowing_mean_converges() {
        let m = PathLossModel {
            shadow_sigma_db: 2.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let mean = (0..n).map(|_| sample_rssi(-35.0, &m, &mut rng)).sum::<f64>() / n as f64;
        assert!((mean - -35.0).abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn seeded_streams_repeat() {
        let m = PathLossModel {
            shadow_sigma_db: 2.0,
            multipath: true,
            ..Default::default()
        };
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sample_rssi(-50.0, &m, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn rayleigh_multipath_mean_matches_digamma() {
        // E[10·log10(G)] for G ~ Exp(1) is -10·γ_E/ln 10 ≈ -2.5068 dB.
        let m = PathLossModel {
            multipath: true,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 200_000;
        let mean = (0..n).map(|_| draw_multipath(&m, &mut rng)).sum::<f64>() / n as f64;
        let expected = -10.0 * 0.577_215_664_901_532_9 / LN_10;
        assert!((mean - expected).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn doppler_examples() {
        let f = 2.4e9;
        assert_eq!(doppler_frequency(f, 0.0, 0.0, SPEED_OF_LIGHT), f);
        let up = doppler_frequency(f, 1.0, 0.0, SPEED_OF_LIGHT) - f;
        assert!((up - 8.005_336_891_260_84).abs() < 1e-5);
        let down = doppler_frequency(f, 0.0, 1.0, SPEED_OF_LIGHT) - f;
        assert!((up + down).abs() < 1e-5);

        assert_eq!(doppler_loss_delta(0.0, SPEED_OF_LIGHT), 0.0);
        let d1 = doppler_loss_delta(1.0, SPEED_OF_LIGHT);
        assert!((d1 - 2.897_228_026_543_995e-8).abs() < 1e-20);
        assert!(doppler_loss_delta(10.0, SPEED_OF_LIGHT).abs() < 1e-6);
    }

    #[test]
    fn velocity_component_examples() {
        assert_eq!(velocity_components(0.2, 0.3, 0.3), (0.2, 0.0));
        let (p, q) = velocity_components(0.2, FRAC_PI_2, 0.0);
        assert!(p.abs() < 1e-15 && (q - 0.2).abs() < 1e-15);
        let (p, q) = velocity_components(0.2, PI / 4.0, 0.0);
        assert!((p - 0.141_421_356_237_309_5).abs() < 1e-12);
        assert!((q - 0.141_421_356_237_309_5).abs() < 1e-12);
    }

    #[test]
    fn invalid_models_are_rejected() {
        let ok = PathLossModel::default();
        assert!(ok.validate().is_ok());
        for bad in [
            PathLossModel { n: 0.0, ..ok.clone() },
            PathLossModel { shadow_sigma_db: -1.0, ..ok.clone() },
            PathLossModel { multipath_m: 0.2, ..ok.clone() },
            PathLossModel { wall_loss_db: -0.1, ..ok.clone() },
            PathLossModel { freq_hz: 0.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
