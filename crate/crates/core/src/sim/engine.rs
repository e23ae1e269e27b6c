use super::{raycast_sonar, step_kinematics, LeaderScript, RobotState, Role, SonarArray};
use crate::avoidance::Situation;
use crate::chain::{evaluate_links, ChainNode, ChainParams, ChainState, LinkAntennas};
use crate::control::{follower_step, FollowerParams};
use crate::error::{DomainError, SimError};
use crate::geometry::{normalize_angle, Pose};
use crate::radio::{
    deterministic_rssi, doppler_loss_delta, draw_multipath, draw_shadowing, sample_rssi, AntennaPattern,
    PathLossModel,
};
use crate::scan::{tracking_feasible, ScanConfig, ScanResult, ScanSample};
use crate::scenario::ScenarioConfig;
use crate::world::WorldModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-node outcome of one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeTick {
    pub name: String,
    pub state: RobotState,
    pub follower: Option<FollowerTick>,
}

/// What a follower saw and decided during its sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FollowerTick {
    pub situation: Situation,
    /// Center of the sweep just performed (body frame, rad).
    pub scan_center: f64,
    /// WCA estimate (body frame, rad).
    pub bearing: f64,
    /// Ground-truth bearing of the node ahead at sweep time.
    pub true_bearing: f64,
    pub doa_in_window: bool,
    /// Gain-referred best RSSI of the sweep (dBm).
    pub rssi_leader: f64,
    /// `None` for the rearmost node.
    pub rssi_behind: Option<f64>,
    /// Range rate to the node ahead, positive when separating (m/s).
    pub v_relative: f64,
    /// Speed of the node ahead across the line of bearing (m/s).
    pub v_leader_perp: f64,
    pub tracking_feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TickReport {
    pub tick: usize,
    pub t: f64,
    pub nodes: Vec<NodeTick>,
    pub chain: ChainState,
}

/// Sequential, single-owner simulation of one scenario.
#[derive(Debug, Clone)]
pub struct Simulation {
    world: WorldModel,
    model: PathLossModel,
    scan: ScanConfig,
    sonar: SonarArray,
    chain: ChainParams,
    sensing: AntennaPattern,
    omni: AntennaPattern,
    link_antennas: LinkAntennas,
    followers: Vec<Option<FollowerParams>>,
    axle_width: f64,
    intra_scan: bool,
    script: LeaderScript,
    names: Vec<String>,
    states: Vec<RobotState>,
    /// World-frame velocity of each node over the last tick (m/s).
    velocities: Vec<(f64, f64)>,
    scan_rngs: Vec<ChaCha8Rng>,
    rear_rngs: Vec<ChaCha8Rng>,
    chain_rng: ChaCha8Rng,
    tick: usize,
    t: f64,
    ticks_total: usize,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

impl Simulation {
    pub fn new(config: &ScenarioConfig) -> Result<Self, SimError> {
        config.validate()?;
        let world = config.world_model()?;
        let scan = config.scan_config();
        let sensing = config.sensing_antenna();
        let n = config.nodes.len();
        let followers = (0..n)
            .map(|i| {
                (config.nodes[i].role == Role::Follower).then(|| FollowerParams {
                    control: config.control_for(i),
                    avoidance: config.avoidance.clone(),
                    gamma: scan.gamma,
                    sensing_gain_db: sensing.gr_db,
                })
            })
            .collect();
        let script = LeaderScript::new(&config.leader_waypoints(), config.leader.speed)
            .map_err(|e| SimError::Tick { tick: 0, source: e })?;
        let mut states: Vec<RobotState> = config
            .nodes
            .iter()
            .map(|node| RobotState::new(node.role, node.pose()))
            .collect();
        if let Some(leader) = states.last_mut() {
            let start = script.pose_at(0.0);
            leader.pose = Pose::new(start.x, start.y, leader.pose.heading);
        }
        let dt = scan.duration();
        Ok(Self {
            model: config.radio.clone(),
            sonar: config.sonar.clone(),
            chain: config.chain.clone(),
            omni: config.omni_antenna(),
            link_antennas: LinkAntennas {
                directional: config.data_antenna(),
                omni: config.omni_antenna(),
            },
            sensing,
            followers,
            axle_width: config.control.axle_width,
            intra_scan: config.scan.intra_scan_leader_motion,
            script,
            names: (0..n).map(|i| config.node_name(i)).collect(),
            states,
            velocities: vec![(0.0, 0.0); n],
            scan_rngs: (0..n as u64).map(|i| stream(config.seed, 1 + 2 * i)).collect(),
            rear_rngs: (0..n as u64).map(|i| stream(config.seed, 2 + 2 * i)).collect(),
            chain_rng: stream(config.seed, 0),
            tick: 0,
            t: 0.0,
            ticks_total: (config.duration_s / dt + 1e-9).floor() as usize,
            world,
            scan,
        })
    }

    /// Simulated time (s).
    pub fn time(&self) -> f64 {
        self.t
    }

    /// Length of one tick: one antenna sweep (s).
    pub fn tick_length(&self) -> f64 {
        self.scan.duration()
    }

    /// Number of ticks the scenario's duration allows.
    pub fn ticks_total(&self) -> usize {
        self.ticks_total
    }

    pub fn is_finished(&self) -> bool {
        self.tick >= self.ticks_total
    }

    pub fn states(&self) -> &[RobotState] {
        &self.states
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self) -> &WorldModel {
        &self.world
    }

    /// State before the first tick, with the chain evaluated once.
    pub fn initial_report(&mut self) -> Result<TickReport, SimError> {
        let chain = self.evaluate_chain().map_err(|e| SimError::Tick { tick: 0, source: e })?;
        Ok(TickReport {
            tick: 0,
            t: 0.0,
            nodes: self.node_ticks(vec![None; self.states.len()]),
            chain,
        })
    }

    /// Advances one sweep period.
    pub fn tick(&mut self) -> Result<TickReport, SimError> {
        let tick = self.tick + 1;
        let wrap = |source: DomainError| SimError::Tick { tick, source };
        let dt = self.tick_length();
        let t_prev = self.t;
        self.t = tick as f64 * dt;

        let last = self.states.len() - 1;
        self.states[last].pose = self.script.pose_at(self.t);
        self.velocities[last] = self.script.velocity_at(self.t);

        let mut reports = Vec::with_capacity(self.states.len());
        for i in 0..last {
            let Some(params) = self.followers[i].clone() else {
                reports.push(None);
                continue;
            };
            let report = self.follower_tick(i, &params, t_prev).map_err(wrap)?;
            let before = self.states[i].pose;
            let mut moved = step_kinematics(&report.0, report.0.wheels, dt, self.axle_width, &self.world);
            let after = moved.pose;
            // The pan servo holds the next sweep center fixed in the world
            // frame while the body turns.
            let turned = normalize_angle(after.heading - before.heading);
            moved.antenna_center = normalize_angle(moved.antenna_center + turned);
            self.velocities[i] = ((after.x - before.x) / dt, (after.y - before.y) / dt);
            self.states[i] = moved;
            reports.push(Some(report.1));
        }
        // The scripted leader has no follower report.
        reports.push(None);
        let chain = self.evaluate_chain().map_err(wrap)?;
        self.tick = tick;
        Ok(TickReport {
            tick,
            t: self.t,
            nodes: self.node_ticks(reports),
            chain,
        })
    }

    /// Runs the remaining ticks, returning the initial report followed by
    /// one report per tick.
    pub fn run(mut self) -> Result<Vec<TickReport>, SimError> {
        let mut out = Vec::with_capacity(self.ticks_total + 1);
        out.push(self.initial_report()?);
        while !self.is_finished() {
            out.push(self.tick()?);
        }
        Ok(out)
    }

    fn node_ticks(&self, reports: Vec<Option<FollowerTick>>) -> Vec<NodeTick> {
        self.states
            .iter()
            .zip(reports)
            .enumerate()
            .map(|(i, (s, f))| NodeTick {
                name: self.names[i].clone(),
                state: s.clone(),
                follower: f,
            })
            .collect()
    }

    fn follower_tick(
        &mut self,
        i: usize,
        params: &FollowerParams,
        t_prev: f64,
    ) -> Result<(RobotState, FollowerTick), DomainError> {
        let state = self.states[i].clone();
        let pose = state.pose;
        let ahead_idx = i + 1;
        let ahead_is_scripted = ahead_idx == self.states.len() - 1;
        let ahead = self.states[ahead_idx].pose;
        let scan_cfg = self.scan.centered_at(state.antenna_center);
        let speed_self = self.velocities[i];
        let speed_ahead = self.velocities[ahead_idx];

        let range_rate = |tx: &Pose, v_tx: (f64, f64)| {
            let d = pose.distance(tx).max(1e-9);
            let (ux, uy) = ((tx.x - pose.x) / d, (tx.y - pose.y) / d);
            (v_tx.0 - speed_self.0) * ux + (v_tx.1 - speed_self.1) * uy
        };

        // Shadowing is a slow term: one draw per sweep. Multipath varies per
        // sample.
        let rng = &mut self.scan_rngs[i];
        let shadow = draw_shadowing(&self.model, rng);
        let angles = crate::scan::scan_angles(&scan_cfg);
        let count = angles.len();
        let mut samples = Vec::with_capacity(count);
        for (k, angle) in angles.into_iter().enumerate() {
            let (tx, v_tx) = if self.intra_scan && ahead_is_scripted {
                let tk = t_prev + (k + 1) as f64 / count as f64 * (self.t - t_prev);
                (self.script.pose_at(tk), self.script.velocity_at(tk))
            } else {
                (ahead, speed_ahead)
            };
            let mut rssi = deterministic_rssi(
                &tx,
                &pose,
                pose.body_to_world(angle),
                &self.omni,
                &self.sensing,
                &self.model,
                &self.world,
            )?;
            if self.model.doppler {
                rssi -= doppler_loss_delta(range_rate(&tx, v_tx), self.model.c);
            }
            rssi += shadow + draw_multipath(&self.model, rng);
            samples.push(ScanSample { angle, rssi });
        }
        let scan = ScanResult::new(samples, scan_cfg.duration());

        let rssi_behind = if i > 0 {
            let rear = self.states[i - 1].pose;
            let mean = deterministic_rssi(&rear, &pose, 0.0, &self.omni, &self.omni, &self.model, &self.world)?;
            Some(sample_rssi(mean, &self.model, &mut self.rear_rngs[i]))
        } else {
            None
        };

        let sonar = raycast_sonar(&pose, &self.world, &self.sonar);
        let step = follower_step(&state, &scan, &sonar, rssi_behind.unwrap_or(f64::INFINITY), params)?;

        let target = if self.intra_scan && ahead_is_scripted { self.script.pose_at(self.t) } else { ahead };
        let true_bearing = pose.bearing_to(&target.position());
        let (lo, hi) = scan_cfg.window();
        let doa_in_window = in_window(true_bearing, lo, hi);

        let d = pose.distance(&target);
        let v_relative = range_rate(&target, speed_ahead);
        let los = pose.position().direction_to(&target.position());
        let v_leader_perp = (-speed_ahead.0 * los.sin() + speed_ahead.1 * los.cos()).abs();
        let feasible = tracking_feasible(
            v_relative.abs(),
            v_leader_perp,
            self.scan.scan_rate,
            d,
            self.scan.theta_max(),
        );
        Ok((
            step.state,
            FollowerTick {
                situation: step.situation,
                scan_center: scan_cfg.theta_cen,
                bearing: step.estimate.theta_hat,
                true_bearing,
                doa_in_window,
                rssi_leader: step.rssi_leader,
                rssi_behind,
                v_relative,
                v_leader_perp,
                tracking_feasible: feasible,
            },
        ))
    }

    fn evaluate_chain(&mut self) -> Result<ChainState, DomainError> {
        let n = self.states.len();
        let nodes: Vec<ChainNode> = (0..n)
            .map(|i| {
                let s = &self.states[i];
                let aim = match s.role {
                    Role::Follower => s.pose.body_to_world(s.antenna_center),
                    _ if i + 1 < n => s.pose.position().direction_to(&self.states[i + 1].pose.position()),
                    _ => s.pose.heading,
                };
                ChainNode {
                    pose: s.pose,
                    data_boresight: aim,
                }
            })
            .collect();
        let links_model = PathLossModel {
            multipath: false,
            ..self.model.clone()
        };
        evaluate_links(&nodes, &self.link_antennas, &links_model, &self.world, &self.chain, &mut self.chain_rng)
    }
}

fn in_window(angle: f64, lo: f64, hi: f64) -> bool {
    const EPS: f64 = 1e-9;
    let a = normalize_angle(angle);
    [a - std::f64::consts::TAU, a, a + std::f64::consts::TAU]
        .iter()
        .any(|&x| x >= lo - EPS && x <= hi + EPS)
}
