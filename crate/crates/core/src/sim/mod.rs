//! World simulation: robot state, kinematics, sonar, the leader script and
//! the tick loop.

mod engine;
mod kinematics;
mod script;
mod sonar;

pub use engine::{FollowerTick, NodeTick, Simulation, TickReport};
pub use kinematics::{integrate_pose, step_kinematics, ROBOT_RADIUS};
pub use script::{leader_script, LeaderScript, Waypoint};
pub use sonar::{raycast_sonar, SonarArray};

use crate::control::WheelCommand;
use crate::geometry::Pose;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Static head of the relay chain.
    CommandCenter,
    /// Relay robot chasing the node ahead of it.
    Follower,
    /// Scripted end node at the front of the chain.
    #[serde(alias = "end_user")]
    Leader,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::CommandCenter => "command_center",
            Role::Follower => "follower",
            Role::Leader => "leader",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Motion {
    Drive,
    Stop,
}

impl Motion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Motion::Drive => "drive",
            Motion::Stop => "stop",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub pose: Pose,
    pub role: Role,
    pub wheels: WheelCommand,
    /// Body-frame center of the next antenna sweep (rad).
    pub antenna_center: f64,
    pub mode: Motion,
    /// Steering bearing from the previous sweep, for the derivative term.
    pub scan_prev_bearing: Option<f64>,
}

impl RobotState {
    pub fn new(role: Role, pose: Pose) -> Self {
        Self {
            pose,
            role,
            wheels: WheelCommand::STOP,
            antenna_center: 0.0,
            mode: Motion::Stop,
            scan_prev_bearing: None,
        }
    }
}
