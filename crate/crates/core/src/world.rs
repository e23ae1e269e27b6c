//! Static world geometry: bounds, attenuating obstacles, named waypoints.

use crate::error::DomainError;
use crate::geometry::{Point, Segment};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A wall segment or a solid axis-aligned block.
///
/// `attenuation_db` overrides the radio model's per-crossing wall loss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Obstacle {
    Segment {
        from: [f64; 2],
        to: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attenuation_db: Option<f64>,
    },
    Rect {
        min: [f64; 2],
        max: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attenuation_db: Option<f64>,
    },
}

impl Obstacle {
    pub fn segment(from: (f64, f64), to: (f64, f64)) -> Self {
        Obstacle::Segment {
            from: [from.0, from.1],
            to: [to.0, to.1],
            attenuation_db: None,
        }
    }

    pub fn rect(min: (f64, f64), max: (f64, f64)) -> Self {
        Obstacle::Rect {
            min: [min.0, min.1],
            max: [max.0, max.1],
            attenuation_db: None,
        }
    }

    pub fn with_attenuation(mut self, db: f64) -> Self {
        match &mut self {
            Obstacle::Segment { attenuation_db, .. } | Obstacle::Rect { attenuation_db, .. } => {
                *attenuation_db = Some(db)
            }
        }
        self
    }

    pub fn attenuation_db(&self) -> Option<f64> {
        match self {
            Obstacle::Segment { attenuation_db, .. } | Obstacle::Rect { attenuation_db, .. } => {
                *attenuation_db
            }
        }
    }

    /// Boundary edges.
    pub fn edges(&self) -> Vec<Segment> {
        match self {
            Obstacle::Segment { from, to, .. } => {
                vec![Segment::new(Point::new(from[0], from[1]), Point::new(to[0], to[1]))]
            }
            Obstacle::Rect { min, max, .. } => {
                let c = [
                    Point::new(min[0], min[1]),
                    Point::new(max[0], min[1]),
                    Point::new(max[0], max[1]),
                    Point::new(min[0], max[1]),
                ];
                (0..4).map(|i| Segment::new(c[i], c[(i + 1) % 4])).collect()
            }
        }
    }

    fn contains(&self, p: &Point) -> bool {
        match self {
            Obstacle::Segment { .. } => false,
            Obstacle::Rect { min, max, .. } => {
                p.x > min[0] && p.x < max[0] && p.y > min[1] && p.y < max[1]
            }
        }
    }

    /// Whether the straight path `a → b` passes through this obstacle.
    pub fn blocks(&self, a: &Point, b: &Point) -> bool {
        let path = Segment::new(*a, *b);
        self.contains(a) || self.contains(b) || self.edges().iter().any(|e| e.intersects(&path))
    }

    /// Distance from a point to the obstacle surface; zero inside a block.
    pub fn distance_to(&self, p: &Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .iter()
            .map(|e| e.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    fn points(&self) -> Vec<[f64; 2]> {
        match self {
            Obstacle::Segment { from, to, .. } => vec![*from, *to],
            Obstacle::Rect { min, max, .. } => vec![*min, *max],
        }
    }
}

/// Rectangular world with obstacles and named waypoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldModel {
    /// `[x_min, y_min, x_max, y_max]` in meters.
    pub bounds: [f64; 4],
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub annotations: BTreeMap<String, [f64; 2]>,
}

impl WorldModel {
    pub fn empty(bounds: [f64; 4]) -> Self {
        Self {
            bounds,
            obstacles: Vec::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn with_obstacle(mut self, o: Obstacle) -> Self {
        self.obstacles.push(o);
        self
    }

    pub fn annotate(mut self, name: &str, x: f64, y: f64) -> Self {
        self.annotations.insert(name.to_string(), [x, y]);
        self
    }

    pub fn annotation(&self, name: &str) -> Option<Point> {
        self.annotations.get(name).map(|p| Point::new(p[0], p[1]))
    }

    pub fn validate(&self) -> Result<(), DomainError> {
        let [x0, y0, x1, y1] = self.bounds;
        if !(x0 < x1 && y0 < y1) {
            return Err(DomainError::invalid("world.bounds", "expected x_min < x_max and y_min < y_max"));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            if let Some(a) = o.attenuation_db() {
                if !(a >= 0.0) {
                    return Err(DomainError::invalid(
                        format!("world.obstacles[{i}].attenuation_db"),
                        "must be non-negative",
                    ));
                }
            }
            if o.points().iter().any(|p| !self.in_bounds(&Point::new(p[0], p[1]))) {
                return Err(DomainError::invalid(format!("world.obstacles[{i}]"), "lies outside the bounds"));
            }
            if let Obstacle::Rect { min, max, .. } = o {
                if !(min[0] < max[0] && min[1] < max[1]) {
                    return Err(DomainError::invalid(format!("world.obstacles[{i}]"), "min must be below max"));
                }
            }
        }
        Ok(())
    }

    pub fn in_bounds(&self, p: &Point) -> bool {
        let [x0, y0, x1, y1] = self.bounds;
        p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1
    }

    /// Sum of attenuation over the obstacles crossed by the straight path.
    pub fn crossing_loss_db(&self, a: &Point, b: &Point, default_db: f64) -> f64 {
        self.obstacles
            .iter()
            .filter(|o| o.blocks(a, b))
            .map(|o| o.attenuation_db().unwrap_or(default_db))
            .sum()
    }

    pub fn crossing_count(&self, a: &Point, b: &Point) -> usize {
        self.obstacles.iter().filter(|o| o.blocks(a, b)).count()
    }

    /// Nearest obstacle hit along a ray.
    pub fn ray_distance(&self, origin: &Point, direction: f64) -> Option<f64> {
        self.obstacles
            .iter()
            .flat_map(|o| o.edges())
            .filter_map(|e| e.ray_hit(origin, direction))
            .min_by(f64::total_cmp)
    }

    /// Distance to the nearest obstacle surface or world edge.
    pub fn clearance(&self, p: &Point) -> f64 {
        let [x0, y0, x1, y1] = self.bounds;
        let edge = (p.x - x0).min(x1 - p.x).min(p.y - y0).min(y1 - p.y);
        self.obstacles
            .iter()
            .map(|o| o.distance_to(p))
            .fold(edge, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn world() -> WorldModel {
        WorldModel::empty([-20.0, -20.0, 20.0, 20.0])
            .with_obstacle(Obstacle::segment((5.0, -5.0), (5.0, 5.0)))
            .with_obstacle(Obstacle::rect((-4.0, -1.0), (-2.0, 1.0)).with_attenuation(25.0))
    }

    #[test]
    fn crossing_loss_counts_each_obstacle_once() {
        let w = world();
        let o = Point::new(0.0, 0.0);
        assert_eq!(w.crossing_count(&o, &Point::new(10.0, 0.0)), 1);
        assert_eq!(w.crossing_loss_db(&o, &Point::new(10.0, 0.0), 10.0), 10.0);
        // The block counts once even though two of its edges are crossed.
        assert_eq!(w.crossing_loss_db(&o, &Point::new(-10.0, 0.0), 10.0), 25.0);
        assert_eq!(w.crossing_count(&o, &Point::new(0.0, 10.0)), 0);
    }

    #[test]
    fn rays_and_clearance() {
        let w = world();
        let o = Point::new(0.0, 0.0);
        assert!((w.ray_distance(&o, 0.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((w.ray_distance(&o, std::f64::consts::PI).unwrap() - 2.0).abs() < 1e-12);
        assert!(w.ray_distance(&o, std::f64::consts::FRAC_PI_2).is_none());
        assert!((w.clearance(&o) - 2.0).abs() < 1e-12);
        assert_eq!(w.clearance(&Point::new(-3.0, 0.0)), 0.0);
    }

    #[test]
    fn validation_rejects_out_of_bounds_and_negative_loss() {
        let w = WorldModel::empty([0.0, 0.0, 1.0, 1.0]).with_obstacle(Obstacle::segment((0.0, 0.0), (2.0, 0.0)));
        assert!(w.validate().is_err());
        let w = WorldModel::empty([0.0, 0.0, 1.0, 1.0])
            .with_obstacle(Obstacle::segment((0.0, 0.0), (1.0, 0.0)).with_attenuation(-1.0));
        assert!(w.validate().is_err());
        assert!(world().validate().is_ok());
    }
}
