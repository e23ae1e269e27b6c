//! Bundled worlds and scenarios.
//!
//! Scenario presets accept a relay-count suffix: `indoor_corridor:2` places
//! two relay robots between the command center and the user.

use super::{NodeConfig, ScenarioConfig, WorldRef};
use crate::radio::PathLossModel;
use crate::sim::{Role, Waypoint};
use crate::world::{Obstacle, WorldModel};

pub const PRESET_NAMES: [&str; 4] = ["indoor_corridor", "outdoor_lot", "obstacle_course", "convergence_bench"];

/// Bundled world geometry by name.
pub fn world_preset(name: &str) -> Option<WorldModel> {
    match name {
        "open" => Some(WorldModel::empty([-50.0, -50.0, 50.0, 50.0])),
        "indoor_corridor" => Some(indoor_corridor()),
        "outdoor_lot" => Some(outdoor_lot()),
        "obstacle_course" => Some(obstacle_course()),
        "convergence_bench" => Some(WorldModel::empty([-40.0, -40.0, 40.0, 40.0])),
        _ => None,
    }
}

/// Three 4 m wide corridors joined by two right-angle corners. The blocks
/// between them are brick rooms; the inner block holds two rooms side by
/// side.
fn indoor_corridor() -> WorldModel {
    let brick = 12.0;
    let block = |min, max| Obstacle::rect(min, max).with_attenuation(brick);
    WorldModel::empty([-5.0, -27.0, 42.0, 5.0])
        .with_obstacle(block((-5.0, 2.0), (42.0, 5.0)))
        .with_obstacle(block((-5.0, -27.0), (13.0, -2.0)))
        .with_obstacle(block((17.0, -20.0), (29.0, 2.0)))
        .with_obstacle(block((29.0, -20.0), (42.0, 2.0)))
        .with_obstacle(block((13.0, -27.0), (42.0, -24.0)))
        .with_obstacle(block((-5.0, -2.0), (-3.0, 2.0)))
        .with_obstacle(block((40.0, -24.0), (42.0, -20.0)))
        .annotate("command_center", 0.0, 0.0)
        .annotate("corner_1", 15.0, 0.0)
        .annotate("corner_2", 15.0, -22.0)
        .annotate("goal", 36.0, -22.0)
}

/// 100 × 70 m lot; the route runs along two pairs of buildings separated by
/// alleys and turns two corners.
fn outdoor_lot() -> WorldModel {
    let building = |min, max| Obstacle::rect(min, max).with_attenuation(11.0);
    WorldModel::empty([0.0, 0.0, 100.0, 70.0])
        .with_obstacle(building((0.0, 12.0), (28.0, 70.0)))
        .with_obstacle(building((32.0, 12.0), (60.0, 70.0)))
        .with_obstacle(building((70.0, 0.0), (100.0, 30.0)))
        .with_obstacle(building((70.0, 34.0), (100.0, 52.0)))
        .annotate("command_center", 5.0, 5.0)
        .annotate("corner_1", 65.0, 5.0)
        .annotate("corner_2", 65.0, 61.0)
        .annotate("goal", 95.0, 61.0)
}

/// A follower boxed in front of a building, with the only way around on
/// its right.
fn obstacle_course() -> WorldModel {
    WorldModel::empty([-8.0, -25.0, 35.0, 10.0])
        .with_obstacle(Obstacle::rect((4.0, -6.0), (8.0, 10.0)).with_attenuation(15.0))
        .with_obstacle(Obstacle::segment((-8.0, 3.0), (4.0, 3.0)))
        .annotate("leader_side", 8.5, 0.0)
}

fn parse(name: &str) -> Option<(&str, Option<usize>)> {
    match name.split_once(':') {
        Some((base, n)) => Some((base, Some(n.parse().ok()?))),
        None => Some((name, None)),
    }
}

/// Bundled scenario by name.
pub fn scenario_preset(name: &str) -> Option<ScenarioConfig> {
    let (base, relays) = parse(name)?;
    let mut c = match base {
        "indoor_corridor" => indoor_scenario(relays.unwrap_or(2)),
        "outdoor_lot" => outdoor_scenario(relays.unwrap_or(2)),
        "obstacle_course" if relays.is_none() => obstacle_scenario(),
        "convergence_bench" if relays.is_none() => convergence_scenario(),
        _ => return None,
    };
    c.name = name.to_string();
    Some(c)
}

/// Command center, `relays` followers lined up behind the user, and the user.
fn relay_roster(cc: (f64, f64), heading_deg: f64, spacing: f64, relays: usize) -> Vec<NodeConfig> {
    let (s, c) = heading_deg.to_radians().sin_cos();
    let at = |k: usize| (cc.0 + c * spacing * k as f64, cc.1 + s * spacing * k as f64);
    let mut nodes = vec![NodeConfig::new(Role::CommandCenter, cc.0, cc.1, heading_deg)];
    for k in 1..=relays {
        let (x, y) = at(k);
        nodes.push(NodeConfig::new(Role::Follower, x, y, heading_deg));
    }
    let (x, y) = at(relays + 1);
    nodes.push(NodeConfig::new(Role::Leader, x, y, heading_deg));
    nodes
}

fn indoor_scenario(relays: usize) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(1, relay_roster((0.0, 0.0), 0.0, 1.2, relays));
    c.world = WorldRef::Preset("indoor_corridor".into());
    c.duration_s = 360.0;
    c.radio = PathLossModel {
        n: 2.2,
        shadow_sigma_db: 1.0,
        multipath: true,
        multipath_m: 4.0,
        ..Default::default()
    };
    c.control.threshold_l = -30.0;
    c.control.threshold_b = -47.0;
    c.leader.speed = 0.2;
    c.leader.waypoints = vec![
        Waypoint::new(15.0, 0.0),
        Waypoint::new(15.0, -22.0),
        Waypoint::new(36.0, -22.0),
    ];
    c
}

fn outdoor_scenario(relays: usize) -> ScenarioConfig {
    let mut c = ScenarioConfig::new(1, relay_roster((5.0, 5.0), 0.0, 1.5, relays));
    c.world = WorldRef::Preset("outdoor_lot".into());
    c.duration_s = 900.0;
    c.radio = PathLossModel {
        n: 2.0,
        shadow_sigma_db: 1.0,
        multipath: true,
        multipath_m: 4.0,
        ..Default::default()
    };
    c.control.threshold_l = -30.0;
    c.control.threshold_b = -55.0;
    c.leader.speed = 0.2;
    c.leader.waypoints = vec![
        Waypoint::new(65.0, 5.0),
        Waypoint::new(65.0, 61.0),
        Waypoint::new(95.0, 61.0),
    ];
    c
}

fn obstacle_scenario() -> ScenarioConfig {
    let mut c = ScenarioConfig::new(
        1,
        vec![
            NodeConfig::new(Role::Follower, 0.0, 0.0, 0.0),
            NodeConfig::new(Role::Leader, 12.0, 0.0, 0.0),
        ],
    );
    c.world = WorldRef::Preset("obstacle_course".into());
    c.duration_s = 150.0;
    c.radio = PathLossModel {
        n: 2.0,
        ..Default::default()
    };
    c.control.threshold_l = -25.0;
    c.avoidance.alpha = 40.0;
    c.avoidance.beta = 0.3;
    c.avoidance.d_crit = 0.6;
    c.leader.speed = 0.2;
    c.leader.waypoints = vec![Waypoint::new(27.0, 0.0)];
    c
}

fn convergence_scenario() -> ScenarioConfig {
    let mut c = ScenarioConfig::new(
        1,
        vec![
            NodeConfig::new(Role::Follower, 0.0, 0.0, 0.0),
            NodeConfig::new(Role::Leader, 5.0, 8.66, 0.0),
        ],
    );
    c.world = WorldRef::Preset("convergence_bench".into());
    c.duration_s = 60.0;
    c.control.threshold_l = -25.0;
    c.leader.speed = 0.3;
    c.leader.waypoints = vec![
        Waypoint::new(15.0, 10.0),
        Waypoint::new(15.0, -10.0),
        Waypoint::new(-5.0, -10.0),
    ];
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in ["indoor_corridor:0", "indoor_corridor:1", "indoor_corridor:2", "outdoor_lot:1", "obstacle_course", "convergence_bench"] {
            let c = scenario_preset(name).unwrap();
            c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(scenario_preset("nowhere").is_none());
        assert!(scenario_preset("indoor_corridor:x").is_none());
    }

    #[test]
    fn corridor_goal_is_shadowed_from_command_center() {
        let w = indoor_corridor();
        let cc = w.annotation("command_center").unwrap();
        let goal = w.annotation("goal").unwrap();
        assert_eq!(w.crossing_count(&cc, &goal), 3);
        assert_eq!(w.crossing_count(&cc, &w.annotation("corner_1").unwrap()), 0);
    }
}
