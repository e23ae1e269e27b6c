//! Planar geometry shared by the radio, sonar and kinematics code.
//!
//! World frame: x east, y north, headings counter-clockwise from +x.
//! Body frame: angles are measured from the robot's nose and increase
//! clockwise (toward the right side). A faster left wheel therefore turns
//! the robot toward positive body angles.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    /// World-frame direction from `self` toward `other`.
    pub fn direction_to(&self, other: &Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }

    pub fn offset(&self, heading: f64, dist: f64) -> Point {
        Point::new(self.x + dist * heading.cos(), self.y + dist * heading.sin())
    }
}

/// Planar position (m) and heading (rad, normalized to `(-π, π]`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: normalize_angle(heading),
        }
    }

    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        self.position().distance(&other.position())
    }

    /// Converts a body-frame angle into a world-frame direction.
    pub fn body_to_world(&self, body_angle: f64) -> f64 {
        normalize_angle(self.heading - body_angle)
    }

    /// Converts a world-frame direction into a body-frame angle.
    pub fn world_to_body(&self, world_angle: f64) -> f64 {
        normalize_angle(self.heading - world_angle)
    }

    /// Body-frame bearing of a point.
    pub fn bearing_to(&self, target: &Point) -> f64 {
        self.world_to_body(self.position().direction_to(target))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

fn cross(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ax * by - ay * bx
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    /// Ray parameter `t ≥ 0` at which the ray `origin + t·(cos θ, sin θ)`
    /// hits this segment, if it does.
    pub fn ray_hit(&self, origin: &Point, direction: f64) -> Option<f64> {
        let (dx, dy) = (direction.cos(), direction.sin());
        let (ex, ey) = (self.b.x - self.a.x, self.b.y - self.a.y);
        let denom = cross(dx, dy, ex, ey);
        if denom.abs() < 1e-12 {
            return None;
        }
        let (wx, wy) = (self.a.x - origin.x, self.a.y - origin.y);
        let t = cross(wx, wy, ex, ey) / denom;
        let u = cross(wx, wy, dx, dy) / denom;
        (t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u)).then_some(t)
    }

    /// Proper or touching intersection with another segment.
    pub fn intersects(&self, other: &Segment) -> bool {
        let d1 = orient(&other.a, &other.b, &self.a);
        let d2 = orient(&other.a, &other.b, &self.b);
        let d3 = orient(&self.a, &self.b, &other.a);
        let d4 = orient(&self.a, &self.b, &other.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_segment(&other.a, &other.b, &self.a))
            || (d2 == 0.0 && on_segment(&other.a, &other.b, &self.b))
            || (d3 == 0.0 && on_segment(&self.a, &self.b, &other.a))
            || (d4 == 0.0 && on_segment(&self.a, &self.b, &other.b))
    }

    pub fn distance_to_point(&self, p: &Point) -> f64 {
        let (ex, ey) = (self.b.x - self.a.x, self.b.y - self.a.y);
        let len2 = ex * ex + ey * ey;
        if len2 == 0.0 {
            return self.a.distance(p);
        }
        let t = (((p.x - self.a.x) * ex + (p.y - self.a.y) * ey) / len2).clamp(0.0, 1.0);
        Point::new(self.a.x + t * ex, self.a.y + t * ey).distance(p)
    }
}

fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y)
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}
