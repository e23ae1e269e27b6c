use crate::error::DomainError;
use crate::geometry::{Point, Pose};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
    /// Pause on arrival (s).
    #[serde(default)]
    pub dwell_s: f64,
}

impl Waypoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y, dwell_s: 0.0 }
    }

    pub fn dwell(mut self, s: f64) -> Self {
        self.dwell_s = s;
        self
    }

    fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Hold { at: Point },
    Move { from: Point, to: Point },
}

/// Piecewise-linear constant-speed path through waypoints, starting at the
/// first one.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderScript {
    /// `(start time, duration, phase)`.
    phases: Vec<(f64, f64, Phase)>,
    end: Point,
    speed: f64,
}

impl LeaderScript {
    pub fn new(waypoints: &[Waypoint], speed: f64) -> Result<Self, DomainError> {
        let first = waypoints.first().ok_or(DomainError::Empty("leader waypoints"))?;
        if waypoints.len() > 1 && !(speed > 0.0) {
            return Err(DomainError::invalid("leader.speed", "must be positive"));
        }
        if waypoints.iter().any(|w| !(w.dwell_s >= 0.0)) {
            return Err(DomainError::invalid("leader.waypoints.dwell_s", "must be non-negative"));
        }
        let mut phases = Vec::new();
        let mut t = 0.0;
        for (i, w) in waypoints.iter().enumerate() {
            if w.dwell_s > 0.0 {
                phases.push((t, w.dwell_s, Phase::Hold { at: w.point() }));
                t += w.dwell_s;
            }
            if let Some(next) = waypoints.get(i + 1) {
                let len = w.point().distance(&next.point());
                if len > 0.0 {
                    phases.push((
                        t,
                        len / speed,
                        Phase::Move {
                            from: w.point(),
                            to: next.point(),
                        },
                    ));
                    t += len / speed;
                }
            }
        }
        let end = waypoints.last().unwrap_or(first).point();
        Ok(Self { phases, end, speed })
    }

    /// Time at which the path is complete.
    pub fn total_time(&self) -> f64 {
        self.phases.last().map_or(0.0, |(t, d, _)| t + d)
    }

    fn heading_near(&self, idx: usize) -> f64 {
        let dir = |p: &Phase| match p {
            Phase::Move { from, to } => Some(from.direction_to(to)),
            Phase::Hold { .. } => None,
        };
        self.phases[..=idx.min(self.phases.len().saturating_sub(1))]
            .iter()
            .rev()
            .find_map(|(_, _, p)| dir(p))
            .or_else(|| self.phases.iter().find_map(|(_, _, p)| dir(p)))
            .unwrap_or(0.0)
    }

    fn locate(&self, t: f64) -> Option<usize> {
        self.phases.iter().position(|(start, dur, _)| t < start + dur)
    }

    pub fn pose_at(&self, t: f64) -> Pose {
        let t = t.max(0.0);
        match self.locate(t) {
            None => {
                let h = if self.phases.is_empty() { 0.0 } else { self.heading_near(self.phases.len() - 1) };
                Pose::new(self.end.x, self.end.y, h)
            }
            Some(i) => {
                let (start, dur, phase) = self.phases[i];
                match phase {
                    Phase::Hold { at } => Pose::new(at.x, at.y, self.heading_near(i)),
                    Phase::Move { from, to } => {
                        let s = (t - start) / dur;
                        Pose::new(
                            from.x + s * (to.x - from.x),
                            from.y + s * (to.y - from.y),
                            from.direction_to(&to),
                        )
                    }
                }
            }
        }
    }

    /// World-frame velocity (m/s).
    pub fn velocity_at(&self, t: f64) -> (f64, f64) {
        match self.locate(t.max(0.0)).map(|i| self.phases[i].2) {
            Some(Phase::Move { from, to }) => {
                let h = from.direction_to(&to);
                (self.speed * h.cos(), self.speed * h.sin())
            }
            _ => (0.0, 0.0),
        }
    }
}

/// Leader pose at time `t`.
pub fn leader_script(t: f64, waypoints: &[Waypoint], speed: f64) -> Result<Pose, DomainError> {
    Ok(LeaderScript::new(waypoints, speed)?.pose_at(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_waypoint_is_stationary() {
        let w = [Waypoint::new(3.0, 4.0)];
        for t in [0.0, 10.0, 1e6] {
            let p = leader_script(t, &w, 0.2).unwrap();
            assert_eq!((p.x, p.y), (3.0, 4.0));
        }
        assert!(leader_script(0.0, &[], 0.2).is_err());
    }

    #[test]
    fn arrival_time_is_distance_over_speed() {
        let w = [Waypoint::new(0.0, 0.0), Waypoint::new(10.0, 0.0)];
        let s = LeaderScript::new(&w, 0.2).unwrap();
        assert!((s.total_time() - 50.0).abs() < 1e-9);
        assert!((s.pose_at(25.0).x - 5.0).abs() < 1e-12);
        assert_eq!(s.pose_at(50.0).x, 10.0);
        assert_eq!(s.pose_at(80.0).x, 10.0);
        assert_eq!(s.velocity_at(10.0), (0.2, 0.0));
        assert_eq!(s.velocity_at(60.0), (0.0, 0.0));
    }

    #[test]
    fn dwell_holds_pose() {
        let w = [
            Waypoint::new(0.0, 0.0),
            Waypoint::new(0.0, 2.0).dwell(10.0),
            Waypoint::new(2.0, 2.0),
        ];
        let s = LeaderScript::new(&w, 1.0).unwrap();
        let a = s.pose_at(2.0);
        for t in [2.5, 6.0, 11.9] {
            assert_eq!(s.pose_at(t), a);
        }
        assert!((a.heading - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((s.pose_at(13.0).x - 1.0).abs() < 1e-12);
    }
}
