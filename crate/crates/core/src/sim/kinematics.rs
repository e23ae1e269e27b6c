use super::RobotState;
use crate::control::WheelCommand;
use crate::geometry::{Pose, Segment};
use crate::world::WorldModel;

/// Collision radius of every robot (m).
pub const ROBOT_RADIUS: f64 = 0.3;

const SUBSTEPS: usize = 20;

/// Exact differential-drive arc over `dt` seconds. Wheel speeds are in mm/s;
/// a faster left wheel turns the robot clockwise.
pub fn integrate_pose(pose: &Pose, command: WheelCommand, dt: f64, axle_width: f64) -> Pose {
    let v = (command.v_left + command.v_right) / 2000.0;
    let omega = -(command.v_left - command.v_right) / (1000.0 * axle_width);
    let h = pose.heading;
    if omega.abs() < 1e-12 {
        return Pose::new(pose.x + v * dt * h.cos(), pose.y + v * dt * h.sin(), h);
    }
    let h1 = h + omega * dt;
    let r = v / omega;
    Pose::new(pose.x + r * (h1.sin() - h.sin()), pose.y - r * (h1.cos() - h.cos()), h1)
}

/// Advances a robot for `dt` seconds. Translation halts at contact with an
/// obstacle or the world edge; rotation always proceeds.
pub fn step_kinematics(
    state: &RobotState,
    command: WheelCommand,
    dt: f64,
    axle_width: f64,
    world: &WorldModel,
) -> RobotState {
    let h = dt / SUBSTEPS as f64;
    let mut pose = state.pose;
    for _ in 0..SUBSTEPS {
        let next = integrate_pose(&pose, command, h, axle_width);
        let (from, to) = (pose.position(), next.position());
        let path = Segment::new(from, to);
        let crosses = world
            .obstacles
            .iter()
            .flat_map(|o| o.edges())
            .any(|e| e.intersects(&path));
        let clear_after = world.clearance(&to);
        let blocked = !world.in_bounds(&to)
            || crosses
            || (clear_after < ROBOT_RADIUS && clear_after < world.clearance(&from));
        pose = if blocked {
            Pose::new(pose.x, pose.y, next.heading)
        } else {
            next
        };
    }
    RobotState {
        pose,
        wheels: command,
        ..state.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Role;
    use crate::world::Obstacle;
    use std::f64::consts::FRAC_PI_2;

    fn open() -> WorldModel {
        WorldModel::empty([-50.0, -50.0, 50.0, 50.0])
    }

    fn cmd(l: f64, r: f64) -> WheelCommand {
        WheelCommand { v_left: l, v_right: r }
    }

    #[test]
    fn straight_advance() {
        let s = RobotState::new(Role::Follower, Pose::new(0.0, 0.0, 0.0));
        let out = step_kinematics(&s, cmd(200.0, 200.0), 1.0, 0.33, &open());
        assert!((out.pose.x - 0.2).abs() < 1e-12 && out.pose.y.abs() < 1e-12);
    }

    #[test]
    fn pure_rotation_keeps_position() {
        let p = integrate_pose(&Pose::new(1.0, 2.0, 0.0), cmd(100.0, -100.0), 1.0, 0.4);
        assert!((p.x - 1.0).abs() < 1e-12 && (p.y - 2.0).abs() < 1e-12);
        // Left faster: clockwise, so the world heading decreases.
        assert!((p.heading + 0.5).abs() < 1e-12);
    }

    #[test]
    fn quarter_circle() {
        let axle = 0.33;
        let (l, r) = (150.0, 250.0);
        let omega = (r - l) / (1000.0 * axle);
        let t = FRAC_PI_2 / omega;
        let mut pose = Pose::new(0.0, 0.0, 0.0);
        for _ in 0..7 {
            pose = integrate_pose(&pose, cmd(l, r), t / 7.0, axle);
        }
        assert!((pose.heading - FRAC_PI_2).abs() < 1e-6);
        // Radius v/ω about (0, R).
        let radius = (l + r) / 2000.0 / omega;
        assert!((pose.x - radius).abs() < 1e-9 && (pose.y - radius).abs() < 1e-9);
    }

    #[test]
    fn stops_at_wall_contact() {
        let w = open().with_obstacle(Obstacle::segment((2.0, -5.0), (2.0, 5.0)));
        let s = RobotState::new(Role::Follower, Pose::new(0.0, 0.0, 0.0));
        let out = step_kinematics(&s, cmd(400.0, 400.0), 20.0, 0.33, &w);
        assert!(out.pose.x < 2.0 - ROBOT_RADIUS + 0.05);
        assert!(out.pose.x > 1.0);
        assert!(w.clearance(&out.pose.position()) > 0.0);
    }
}
