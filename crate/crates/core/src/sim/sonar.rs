use crate::avoidance::{SonarBeam, SonarScan};
use crate::error::DomainError;
use crate::geometry::Pose;
use crate::world::WorldModel;
use serde::{Deserialize, Serialize};

/// Ring of range sensors spread evenly over a frontal arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SonarArray {
    pub count: usize,
    /// Total arc covered by the beam centers (deg).
    pub fov_deg: f64,
    /// m
    pub max_range: f64,
}

impl Default for SonarArray {
    fn default() -> Self {
        Self {
            count: 8,
            fov_deg: 180.0,
            max_range: 10.0,
        }
    }
}

impl SonarArray {
    /// Body-frame beam angles (rad).
    pub fn angles(&self) -> Vec<f64> {
        let fov = self.fov_deg.to_radians();
        match self.count {
            0 => vec![],
            1 => vec![0.0],
            n => (0..n)
                .map(|k| -fov / 2.0 + fov * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        if self.count == 0 {
            return Err(DomainError::invalid("sonar.count", "must be at least 1"));
        }
        if !(self.fov_deg >= 0.0 && self.fov_deg <= 360.0) {
            return Err(DomainError::invalid("sonar.fov_deg", "must lie in [0, 360]"));
        }
        if !(self.max_range > 0.0) {
            return Err(DomainError::invalid("sonar.max_range", "must be positive"));
        }
        Ok(())
    }
}

/// Nearest obstacle along each beam, clipped to the sensor range. World
/// edges are not sonar targets.
pub fn raycast_sonar(pose: &Pose, world: &WorldModel, array: &SonarArray) -> SonarScan {
    let origin = pose.position();
    let beams = array
        .angles()
        .into_iter()
        .map(|angle| SonarBeam {
            angle,
            distance: world
                .ray_distance(&origin, pose.body_to_world(angle))
                .unwrap_or(array.max_range)
                .min(array.max_range),
        })
        .collect();
    SonarScan::new(beams, array.max_range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Obstacle;

    #[test]
    fn empty_world_reads_max_range() {
        let s = raycast_sonar(
            &Pose::new(0.0, 0.0, 0.3),
            &WorldModel::empty([-5.0, -5.0, 5.0, 5.0]),
            &SonarArray::default(),
        );
        assert_eq!(s.count(), 8);
        assert!(s.beams.iter().all(|b| b.distance == 10.0));
    }

    #[test]
    fn wall_ahead_and_oblique() {
        let w = WorldModel::empty([-20.0, -20.0, 20.0, 20.0])
            .with_obstacle(Obstacle::segment((2.0, -10.0), (2.0, 10.0)));
        let array = SonarArray {
            count: 5,
            fov_deg: 180.0,
            max_range: 10.0,
        };
        let s = raycast_sonar(&Pose::new(0.0, 0.0, 0.0), &w, &array);
        let at = |deg: f64| s.beams.iter().find(|b| (b.angle - deg.to_radians()).abs() < 1e-9).unwrap().distance;
        assert!((at(0.0) - 2.0).abs() < 1e-12);
        let oblique = 2.0 / 45f64.to_radians().cos();
        assert!((at(45.0) - oblique).abs() < 1e-12);
        assert!((at(-45.0) - oblique).abs() < 1e-12);
        assert_eq!(at(90.0), 10.0);
    }
}
