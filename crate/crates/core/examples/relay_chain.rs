//! End-to-end throughput of a straight chain as relays are added between
//! the same two endpoints, in the open and past a brick wall.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_convoy::chain::{evaluate_links, ChainNode, ChainParams, LinkAntennas};
use relay_convoy::radio::{AntennaPattern, PathLossModel};
use relay_convoy::world::{Obstacle, WorldModel};
use relay_convoy::Pose;

fn main() -> Result<(), relay_convoy::DomainError> {
    let antennas = LinkAntennas {
        directional: AntennaPattern::directional(10.0),
        omni: AntennaPattern::omni(0.0),
    };
    let model = PathLossModel {
        n: 2.2,
        ..Default::default()
    };
    let params = ChainParams::default();
    let open = WorldModel::empty([-10.0, -10.0, 110.0, 10.0]);
    let walled = open.clone().with_obstacle(Obstacle::rect((30.0, -10.0), (31.0, 10.0)).with_attenuation(12.0));
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    for span in [20.0, 40.0, 80.0] {
        for (label, world) in [("open", &open), ("walled", &walled)] {
            let row: Vec<String> = (0..=3)
                .map(|relays| {
                    let nodes: Vec<ChainNode> = (0..=relays + 1)
                        .map(|k| ChainNode {
                            pose: Pose::new(span * k as f64 / (relays + 1) as f64, 0.0, 0.0),
                            data_boresight: 0.0,
                        })
                        .collect();
                    let state = evaluate_links(&nodes, &antennas, &model, world, &params, &mut rng)?;
                    Ok(format!("{:>5.1}", state.throughput_mbps))
                })
                .collect::<Result<_, relay_convoy::DomainError>>()?;
            println!("{span:>4} m {label:>6}: relays 0..3 -> {} Mbps", row.join(" "));
        }
    }
    Ok(())
}
