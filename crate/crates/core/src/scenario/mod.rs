//! Scenario configuration: a strict TOML schema with defaults for every
//! model parameter, plus bundled presets.

mod presets;

pub use presets::{scenario_preset, world_preset, PRESET_NAMES};

use crate::avoidance::AvoidanceParams;
use crate::chain::ChainParams;
use crate::control::ControlParams;
use crate::error::{ConfigError, DomainError};
use crate::geometry::{Point, Pose};
use crate::radio::{AntennaPattern, PathLossModel};
use crate::scan::ScanConfig;
use crate::sim::{Role, SonarArray, Waypoint};
use crate::world::WorldModel;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub seed: u64,
    #[serde(default)]
    pub duration_s: f64,
    #[serde(default)]
    pub world: WorldRef,
    /// Default output directory for `run`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default)]
    pub radio: PathLossModel,
    #[serde(default)]
    pub antennas: AntennaSettings,
    #[serde(default)]
    pub scan: ScanSettings,
    #[serde(default)]
    pub control: ControlSettings,
    #[serde(default)]
    pub avoidance: AvoidanceParams,
    #[serde(default)]
    pub sonar: SonarArray,
    #[serde(default)]
    pub chain: ChainParams,
    #[serde(default)]
    pub leader: LeaderSettings,
    /// Ordered from the rear of the chain to the leader.
    pub nodes: Vec<NodeConfig>,
}

/// A bundled world by name, or an inline definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WorldRef {
    Preset(String),
    Inline(WorldModel),
}

impl Default for WorldRef {
    fn default() -> Self {
        WorldRef::Preset("open".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AntennaSettings {
    /// Peak gain of the rotating sensing antenna (dB).
    pub sensing_gain_db: f64,
    /// Peak gain of the directional data-link antenna (dB).
    pub data_gain_db: f64,
    /// Gain of every omnidirectional antenna (dB).
    pub omni_gain_db: f64,
}

impl Default for AntennaSettings {
    fn default() -> Self {
        Self {
            sensing_gain_db: 10.0,
            data_gain_db: 10.0,
            omni_gain_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSettings {
    pub theta_interest_deg: f64,
    pub half_count: usize,
    pub scan_rate_deg_s: f64,
    pub gamma: f64,
    /// Move the leader along its script between samples of one sweep.
    pub intra_scan_leader_motion: bool,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            theta_interest_deg: 180.0,
            half_count: 12,
            scan_rate_deg_s: 180.0,
            gamma: 10.0,
            intra_scan_leader_motion: false,
        }
    }
}

impl ScanSettings {
    pub fn to_config(&self) -> ScanConfig {
        ScanConfig {
            theta_interest: self.theta_interest_deg.to_radians(),
            theta_cen: 0.0,
            half_count: self.half_count,
            scan_rate: self.scan_rate_deg_s.to_radians(),
            gamma: self.gamma,
        }
    }
}

/// Follower control settings. Steering gains are per degree of bearing
/// error, wheel speeds in mm/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlSettings {
    pub kp: f64,
    pub kd: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub threshold_l: f64,
    pub threshold_b: f64,
    pub v_max: f64,
    /// m
    pub axle_width: f64,
}

impl Default for ControlSettings {
    fn default() -> Self {
        let p = ControlParams::default();
        Self {
            kp: 1.0,
            kd: 0.3,
            omega1: p.omega1,
            omega2: p.omega2,
            threshold_l: p.threshold_l,
            threshold_b: p.threshold_b,
            v_max: p.v_max,
            axle_width: 0.33,
        }
    }
}

impl ControlSettings {
    pub fn to_params(&self) -> ControlParams {
        ControlParams {
            omega1: self.omega1,
            omega2: self.omega2,
            threshold_l: self.threshold_l,
            threshold_b: self.threshold_b,
            v_max: self.v_max,
            ..ControlParams::from_degree_gains(self.kp, self.kd)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LeaderSettings {
    /// m/s
    pub speed: f64,
    /// Visited in order after the leader's initial position.
    pub waypoints: Vec<Waypoint>,
    /// Pause at the initial position (s).
    pub start_dwell_s: f64,
}

impl Default for LeaderSettings {
    fn default() -> Self {
        Self {
            speed: 0.2,
            waypoints: Vec::new(),
            start_dwell_s: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub heading_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_b: Option<f64>,
}

impl NodeConfig {
    pub fn new(role: Role, x: f64, y: f64, heading_deg: f64) -> Self {
        Self {
            role,
            name: None,
            x,
            y,
            heading_deg,
            threshold_l: None,
            threshold_b: None,
        }
    }

    pub fn pose(&self) -> Pose {
        Pose::new(self.x, self.y, self.heading_deg.to_radians())
    }
}

impl ScenarioConfig {
    /// Minimal scenario: defaults everywhere, the given roster, open world.
    pub fn new(seed: u64, nodes: Vec<NodeConfig>) -> Self {
        Self {
            name: String::new(),
            seed,
            duration_s: 0.0,
            world: WorldRef::default(),
            out_dir: None,
            radio: PathLossModel::default(),
            antennas: AntennaSettings::default(),
            scan: ScanSettings::default(),
            control: ControlSettings::default(),
            avoidance: AvoidanceParams::default(),
            sonar: SonarArray::default(),
            chain: ChainParams::default(),
            leader: LeaderSettings::default(),
            nodes,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        let config: ScenarioConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Invalid(vec![e.message().to_string()]))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn world_model(&self) -> Result<WorldModel, ConfigError> {
        match &self.world {
            WorldRef::Preset(name) => world_preset(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone())),
            WorldRef::Inline(w) => Ok(w.clone()),
        }
    }

    pub fn scan_config(&self) -> ScanConfig {
        self.scan.to_config()
    }

    /// Control parameters for node `idx`, with its threshold overrides.
    pub fn control_for(&self, idx: usize) -> ControlParams {
        let mut p = self.control.to_params();
        if let Some(node) = self.nodes.get(idx) {
            p.threshold_l = node.threshold_l.unwrap_or(p.threshold_l);
            p.threshold_b = node.threshold_b.unwrap_or(p.threshold_b);
        }
        p
    }

    pub fn sensing_antenna(&self) -> AntennaPattern {
        AntennaPattern::directional(self.antennas.sensing_gain_db)
    }

    pub fn data_antenna(&self) -> AntennaPattern {
        AntennaPattern::directional(self.antennas.data_gain_db)
    }

    pub fn omni_antenna(&self) -> AntennaPattern {
        AntennaPattern::omni(self.antennas.omni_gain_db)
    }

    /// Leader path: its start position followed by the configured waypoints.
    pub fn leader_waypoints(&self) -> Vec<Waypoint> {
        let start = self.nodes.last().map(|n| Waypoint::new(n.x, n.y).dwell(self.leader.start_dwell_s));
        start.into_iter().chain(self.leader.waypoints.iter().copied()).collect()
    }

    /// Display name of node `idx`.
    pub fn node_name(&self, idx: usize) -> String {
        let node = &self.nodes[idx];
        if let Some(n) = &node.name {
            return n.clone();
        }
        match node.role {
            Role::CommandCenter => "cc".into(),
            Role::Leader => "leader".into(),
            Role::Follower => {
                let k = self.nodes[..idx].iter().filter(|n| n.role == Role::Follower).count();
                format!("r{}", k + 1)
            }
        }
    }

    pub fn follower_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.role == Role::Follower).count()
    }

    /// Checks every parameter and reports all violations with field paths.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs: Vec<String> = Vec::new();
        let mut push = |r: Result<(), DomainError>| {
            if let Err(e) = r {
                errs.push(match e {
                    DomainError::InvalidParameter { field, reason } => format!("{field}: {reason}"),
                    other => other.to_string(),
                });
            }
        };
        if !(self.duration_s >= 0.0 && self.duration_s.is_finite()) {
            push(Err(DomainError::invalid("duration_s", "must be a non-negative number")));
        }
        // TOML integers are signed 64-bit.
        if i64::try_from(self.seed).is_err() {
            push(Err(DomainError::invalid("seed", "must not exceed 2^63 - 1")));
        }
        push(self.radio.validate());
        push(self.scan_config().validate().map_err(|e| match e {
            DomainError::InvalidParameter { field, reason } => {
                let key = field.trim_start_matches("scan.");
                let key = match key {
                    "theta_interest" => "theta_interest_deg",
                    "scan_rate" => "scan_rate_deg_s",
                    k => k,
                };
                DomainError::invalid(format!("scan.{key}"), reason)
            }
            e => e,
        }));
        push(self.control.to_params().validate());
        if !(self.control.axle_width > 0.0) {
            push(Err(DomainError::invalid("control.axle_width", "must be positive")));
        }
        push(self.avoidance.validate());
        push(self.sonar.validate());
        push(self.chain.validate());
        if !(self.leader.speed >= 0.0) || (!self.leader.waypoints.is_empty() && !(self.leader.speed > 0.0)) {
            push(Err(DomainError::invalid("leader.speed", "must be positive when waypoints are given")));
        }
        if !(self.leader.start_dwell_s >= 0.0) {
            push(Err(DomainError::invalid("leader.start_dwell_s", "must be non-negative")));
        }
        for (i, w) in self.leader.waypoints.iter().enumerate() {
            if !(w.dwell_s >= 0.0) {
                push(Err(DomainError::invalid(format!("leader.waypoints[{i}].dwell_s"), "must be non-negative")));
            }
        }
        let world = match self.world_model() {
            Ok(w) => {
                push(w.validate());
                Some(w)
            }
            Err(e) => {
                push(Err(DomainError::invalid("world", e.to_string())));
                None
            }
        };
        if self.nodes.len() < 2 {
            push(Err(DomainError::invalid("nodes", "need at least two nodes")));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let last = i + 1 == self.nodes.len();
            match n.role {
                Role::Leader if !last => {
                    push(Err(DomainError::invalid(format!("nodes[{i}].role"), "only the last node may be the leader")))
                }
                Role::CommandCenter if i != 0 => push(Err(DomainError::invalid(
                    format!("nodes[{i}].role"),
                    "only the first node may be the command center",
                ))),
                Role::Follower | Role::CommandCenter if last => {
                    push(Err(DomainError::invalid(format!("nodes[{i}].role"), "the last node must be the leader")))
                }
                _ => {}
            }
            if !(n.x.is_finite() && n.y.is_finite() && n.heading_deg.is_finite()) {
                push(Err(DomainError::invalid(format!("nodes[{i}]"), "pose must be finite")));
            } else if let Some(w) = &world {
                if !w.in_bounds(&Point::new(n.x, n.y)) {
                    push(Err(DomainError::invalid(format!("nodes[{i}]"), "lies outside the world bounds")));
                }
            }
            for (key, v) in [("threshold_l", n.threshold_l), ("threshold_b", n.threshold_b)] {
                if v.is_some_and(|v| !v.is_finite()) {
                    push(Err(DomainError::invalid(format!("nodes[{i}].{key}"), "must be finite")));
                }
            }
        }
        if let Some(w) = &world {
            for (i, wp) in self.leader.waypoints.iter().enumerate() {
                if !w.in_bounds(&Point::new(wp.x, wp.y)) {
                    push(Err(DomainError::invalid(format!("leader.waypoints[{i}]"), "lies outside the world bounds")));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }
}

/// Copy of `config` with one dotted field (`radio.n`, `nodes.1.x`, `seed`)
/// replaced. `value` is read as a TOML value, falling back to a string.
pub fn with_override(config: &ScenarioConfig, field: &str, value: &str) -> Result<ScenarioConfig, ConfigError> {
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    let mut root = toml::Value::try_from(config).map_err(|e| ConfigError::Invalid(vec![e.to_string()]))?;
    let unknown = || ConfigError::Invalid(vec![format!("{field}: no such field")]);
    let mut slot = &mut root;
    let parts: Vec<&str> = field.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        slot = match slot {
            toml::Value::Table(t) if last => {
                t.insert(part.to_string(), parsed);
                break;
            }
            toml::Value::Table(t) => t.get_mut(*part).ok_or_else(unknown)?,
            toml::Value::Array(a) => {
                let idx: usize = part.parse().map_err(|_| unknown())?;
                let item = a.get_mut(idx).ok_or_else(unknown)?;
                if last {
                    *item = parsed;
                    break;
                }
                item
            }
            _ => return Err(unknown()),
        };
    }
    ScenarioConfig::from_toml(&toml::to_string(&root).map_err(|e| ConfigError::Invalid(vec![e.to_string()]))?)
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Missing {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_toml(&text)
}

/// Resolves a scenario argument: an existing file path, or a preset name
/// such as `indoor_corridor:2` (the suffix is the relay count).
pub fn resolve_scenario(arg: &str) -> Result<ScenarioConfig, ConfigError> {
    let path = Path::new(arg);
    if path.exists() || arg.ends_with(".toml") {
        return load_scenario(path);
    }
    let config = scenario_preset(arg).ok_or_else(|| ConfigError::UnknownPreset(arg.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
seed = 1

[[nodes]]
role = "follower"
x = 0.0
y = 0.0

[[nodes]]
role = "leader"
x = 5.0
y = 0.0
"#;

    #[test]
    fn minimal_config_takes_defaults() {
        let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.scan.gamma, 10.0);
        assert_eq!(c.control.kp, 1.0);
        assert_eq!(c.control.kd, 0.3);
        assert_eq!(c.control.omega1, 10.0);
        assert_eq!(c.control.omega2, 150.0);
        assert_eq!(c.scan.theta_interest_deg, 180.0);
        assert_eq!(c.avoidance.threshold_o, 800.0);
        assert_eq!(c.node_name(0), "r1");
        assert_eq!(c.node_name(1), "leader");
    }

    #[test]
    fn invariant_violation_names_field() {
        let text = format!("{MINIMAL}\n[scan]\ngamma = -1.0\n");
        match ScenarioConfig::from_toml(&text) {
            Err(ConfigError::Invalid(msgs)) => assert!(msgs.iter().any(|m| m.starts_with("scan.gamma")), "{msgs:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = MINIMAL.replace("seed = 1", "seed = 1\nspeed_of_sound = 3");
        assert!(matches!(ScenarioConfig::from_toml(&text), Err(ConfigError::Invalid(_))));
        let text = format!("{MINIMAL}\n[radio]\nl0 = -15\n");
        assert!(matches!(ScenarioConfig::from_toml(&text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn malformed_text_is_syntax_error() {
        assert!(matches!(ScenarioConfig::from_toml("seed = = 1"), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn missing_seed_rejected() {
        let text = MINIMAL.replace("seed = 1", "");
        assert!(matches!(ScenarioConfig::from_toml(&text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn roster_rules() {
        let text = MINIMAL.replace("role = \"leader\"", "role = \"follower\"");
        assert!(ScenarioConfig::from_toml(&text).is_err());
    }

    #[test]
    fn toml_round_trip() {
        let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(ScenarioConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn dotted_overrides() {
        let c = ScenarioConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(with_override(&c, "radio.n", "3").unwrap().radio.n, 3.0);
        assert_eq!(with_override(&c, "seed", "9").unwrap().seed, 9);
        assert_eq!(with_override(&c, "nodes.0.x", "-2.5").unwrap().nodes[0].x, -2.5);
        assert!(matches!(with_override(&c, "radio.bogus", "1"), Err(ConfigError::Invalid(_))));
        assert!(matches!(with_override(&c, "scan.gamma", "-1"), Err(ConfigError::Invalid(_))));
        assert!(with_override(&c, "nodes.7.x", "1").is_err());
    }
}
