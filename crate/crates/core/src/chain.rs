//! The relay chain from the command center to the end node: per-link
//! signal strength, connectivity and end-to-end throughput.

use crate::error::DomainError;
use crate::geometry::Pose;
use crate::radio::{deterministic_rssi, draw_multipath, draw_shadowing, AntennaPattern, PathLossModel};
use crate::world::WorldModel;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChainParams {
    /// Links weaker than this count as broken (dBm).
    pub link_floor: f64,
    /// `[rssi_dbm, mbps]` steps in increasing RSSI order; the rate applies
    /// at and above its threshold.
    pub rate_table: Vec<[f64; 2]>,
}

impl Default for ChainParams {
    fn default() -> Self {
        Self {
            link_floor: -67.0,
            rate_table: vec![
                [-90.0, 1.0],
                [-85.0, 2.0],
                [-80.0, 6.0],
                [-75.0, 9.0],
                [-70.0, 12.0],
                [-65.0, 18.0],
                [-60.0, 24.0],
                [-55.0, 36.0],
                [-45.0, 48.0],
                [-30.0, 54.0],
            ],
        }
    }
}

impl ChainParams {
    pub fn validate(&self) -> Result<(), DomainError> {
        if self.rate_table.is_empty() {
            return Err(DomainError::invalid("chain.rate_table", "must not be empty"));
        }
        if self.rate_table.windows(2).any(|w| !(w[0][0] < w[1][0] && w[0][1] <= w[1][1])) {
            return Err(DomainError::invalid(
                "chain.rate_table",
                "thresholds must increase and rates must not decrease",
            ));
        }
        if self.rate_table.iter().any(|r| !(r[1] >= 0.0)) {
            return Err(DomainError::invalid("chain.rate_table", "rates must be non-negative"));
        }
        if !self.link_floor.is_finite() {
            return Err(DomainError::invalid("chain.link_floor", "must be finite"));
        }
        Ok(())
    }

    pub fn rate_max(&self) -> f64 {
        self.rate_table.last().map_or(0.0, |r| r[1])
    }
}

/// Step lookup of the link rate (Mbps); zero below the first threshold.
pub fn link_rate(rssi: f64, params: &ChainParams) -> f64 {
    params
        .rate_table
        .iter()
        .take_while(|r| rssi >= r[0])
        .last()
        .map_or(0.0, |r| r[1])
}

/// A chain member as seen by the link evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainNode {
    pub pose: Pose,
    /// World-frame pointing direction of the node's directional data
    /// antenna, used toward the node ahead of it.
    pub data_boresight: f64,
}

/// Antennas used on every hop.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkAntennas {
    /// On the rear node of a hop, aimed at the node ahead.
    pub directional: AntennaPattern,
    /// On the front node of a hop.
    pub omni: AntennaPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkState {
    /// Received at the rear node from the node ahead (dBm).
    pub rssi_forward: f64,
    /// Received at the front node from the node behind (dBm).
    pub rssi_backward: f64,
}

impl LinkState {
    pub fn weakest(&self) -> f64 {
        self.rssi_forward.min(self.rssi_backward)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub links: Vec<LinkState>,
    pub connected: bool,
    pub throughput_mbps: f64,
}

impl ChainState {
    pub fn hop_count(&self) -> usize {
        self.links.len()
    }
}

/// Samples both directions of every hop. The mean power is reciprocal;
/// each direction gets its own shadowing and multipath draw.
pub fn evaluate_links<R: Rng + ?Sized>(
    nodes: &[ChainNode],
    antennas: &LinkAntennas,
    model: &PathLossModel,
    world: &WorldModel,
    params: &ChainParams,
    rng: &mut R,
) -> Result<ChainState, DomainError> {
    if nodes.len() < 2 {
        return Err(DomainError::invalid("nodes", "a chain needs at least two nodes"));
    }
    let links = nodes
        .windows(2)
        .map(|pair| {
            let (rear, front) = (&pair[0], &pair[1]);
            let mean = deterministic_rssi(
                &front.pose,
                &rear.pose,
                rear.data_boresight,
                &antennas.omni,
                &antennas.directional,
                model,
                world,
            )?;
            let mut noisy = || mean + draw_shadowing(model, rng) + draw_multipath(model, rng);
            Ok(LinkState {
                rssi_forward: noisy(),
                rssi_backward: noisy(),
            })
        })
        .collect::<Result<Vec<_>, DomainError>>()?;
    let connected = links.iter().all(|l| l.weakest() >= params.link_floor);
    let mut state = ChainState {
        links,
        connected,
        throughput_mbps: 0.0,
    };
    state.throughput_mbps = end_to_end_throughput(&state, state.hop_count(), params)?;
    Ok(state)
}

/// Weakest-link rate divided by the hop count; zero when disconnected.
pub fn end_to_end_throughput(chain: &ChainState, hop_count: usize, params: &ChainParams) -> Result<f64, DomainError> {
    if hop_count < 1 {
        return Err(DomainError::invalid("hop_count", "must be at least 1"));
    }
    if !chain.connected || chain.links.is_empty() {
        return Ok(0.0);
    }
    let weakest = chain
        .links
        .iter()
        .map(|l| link_rate(l.weakest(), params))
        .fold(f64::INFINITY, f64::min);
    Ok(weakest / hop_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Obstacle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn antennas() -> LinkAntennas {
        LinkAntennas {
            directional: AntennaPattern::directional(10.0),
            omni: AntennaPattern::omni(0.0),
        }
    }

    fn node(x: f64, y: f64, aim: f64) -> ChainNode {
        ChainNode {
            pose: Pose::new(x, y, 0.0),
            data_boresight: aim,
        }
    }

    fn open() -> WorldModel {
        WorldModel::empty([-50.0, -50.0, 50.0, 50.0])
    }

    #[test]
    fn rate_lookup() {
        let p = ChainParams::default();
        assert_eq!(link_rate(-95.0, &p), 0.0);
        assert_eq!(link_rate(-20.0, &p), p.rate_max());
        assert_eq!(link_rate(-60.0, &p), 24.0);
        assert_eq!(link_rate(-57.5, &p), 24.0);
        assert_eq!(link_rate(-90.0, &p), 1.0);
    }

    #[test]
    fn reference_distance_link() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = PathLossModel::default();
        let s = evaluate_links(&[node(0.0, 0.0, 0.0), node(1.0, 0.0, 0.0)], &antennas(), &m, &open(), &ChainParams::default(), &mut rng)
            .unwrap();
        assert_eq!(s.links.len(), 1);
        assert_eq!(s.links[0].rssi_forward, m.l0_dbm + 10.0);
        assert!(s.connected);
        assert_eq!(s.throughput_mbps, 54.0);
    }

    #[test]
    fn weak_link_disconnects() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = PathLossModel {
            n: 4.0,
            ..Default::default()
        };
        let s = evaluate_links(
            &[node(0.0, 0.0, 0.0), node(1.0, 0.0, 0.0), node(1.0, 45.0, 0.0)],
            &antennas(),
            &m,
            &open(),
            &ChainParams::default(),
            &mut rng,
        )
        .unwrap();
        assert!(!s.connected);
        assert_eq!(s.throughput_mbps, 0.0);
    }

    #[test]
    fn middle_node_behind_wall_loses_wall_loss_on_both_links() {
        let m = PathLossModel::default();
        let p = ChainParams::default();
        let run = |w: &WorldModel| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            evaluate_links(
                &[node(0.0, 0.0, 0.0), node(5.0, 5.0, -0.8), node(10.0, 0.0, 0.0)],
                &antennas(),
                &m,
                w,
                &p,
                &mut rng,
            )
            .unwrap()
        };
        let clear = run(&open());
        let walled = run(&open().with_obstacle(Obstacle::segment((3.0, 4.0), (7.0, 4.0))));
        for (a, b) in clear.links.iter().zip(&walled.links) {
            assert!((a.rssi_forward - b.rssi_forward - 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hop_division() {
        let p = ChainParams::default();
        let strong = LinkState {
            rssi_forward: -20.0,
            rssi_backward: -20.0,
        };
        let c = ChainState {
            links: vec![strong, strong],
            connected: true,
            throughput_mbps: 0.0,
        };
        assert_eq!(end_to_end_throughput(&c, 2, &p).unwrap(), 27.0);
        let one = ChainState {
            links: vec![strong],
            ..c.clone()
        };
        assert_eq!(end_to_end_throughput(&one, 1, &p).unwrap(), 54.0);
        let off = ChainState {
            connected: false,
            ..c
        };
        assert_eq!(end_to_end_throughput(&off, 2, &p).unwrap(), 0.0);
        assert!(end_to_end_throughput(&one, 0, &p).is_err());
    }
}
