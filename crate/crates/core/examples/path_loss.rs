//! Mean received power against distance, behind walls and around the
//! directional pattern, plus one noisy draw per point.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_convoy::radio::{deterministic_rssi, sample_rssi, AntennaPattern, PathLossModel};
use relay_convoy::world::{Obstacle, WorldModel};
use relay_convoy::Pose;

fn main() -> Result<(), relay_convoy::DomainError> {
    let model = PathLossModel {
        n: 2.5,
        shadow_sigma_db: 2.0,
        multipath: true,
        multipath_m: 4.0,
        ..Default::default()
    };
    let open = WorldModel::empty([-100.0, -100.0, 100.0, 100.0]);
    let walled = open.clone().with_obstacle(Obstacle::rect((3.0, -5.0), (3.5, 5.0)).with_attenuation(12.0));
    let omni = AntennaPattern::omni(0.0);
    let rx = Pose::new(0.0, 0.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("{:>6} {:>10} {:>10} {:>10}", "d (m)", "open", "walled", "noisy");
    for d in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let tx = Pose::new(d, 0.0, 0.0);
        let a = deterministic_rssi(&tx, &rx, 0.0, &omni, &omni, &model, &open)?;
        let b = deterministic_rssi(&tx, &rx, 0.0, &omni, &omni, &model, &walled)?;
        println!("{d:>6.1} {a:>10.2} {b:>10.2} {:>10.2}", sample_rssi(a, &model, &mut rng));
    }

    let directional = AntennaPattern::directional(10.0);
    let tx = Pose::new(5.0, 0.0, 0.0);
    println!("\n{:>10} {:>10}", "aim (deg)", "rssi");
    for aim in (-90..=90).step_by(30) {
        let boresight = (aim as f64).to_radians();
        let r = deterministic_rssi(&tx, &rx, boresight, &omni, &directional, &model, &open)?;
        println!("{aim:>10} {r:>10.2}");
    }
    Ok(())
}
