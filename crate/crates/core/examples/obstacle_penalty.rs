//! A wall in front of the follower: the sonar penalty pushes the bearing
//! estimate away from it, more strongly the larger the penalty scale.

use relay_convoy::avoidance::{apply_penalty, classify_situation, AvoidanceParams, SonarBeam, SonarScan};
use relay_convoy::radio::AntennaPattern;
use relay_convoy::scan::{synthesize_scan, wca_bearing, ScanConfig};

fn main() -> Result<(), relay_convoy::DomainError> {
    let pattern = AntennaPattern::directional(10.0);
    let config = ScanConfig::default();
    // Leader straight ahead; the wall covers the front and left beams.
    let scan = synthesize_scan(&config, |a| -50.0 + pattern.receive_gain_db(a));
    let beams = (0..8)
        .map(|i| {
            let angle = (-90.0 + i as f64 * 180.0 / 7.0_f64).to_radians();
            let distance = if angle <= 0.5 { 3.0 } else { 10.0 };
            SonarBeam { angle, distance }
        })
        .collect();
    let sonar = SonarScan::new(beams, 10.0);

    for alpha in [0.0, 10.0, 20.0, 40.0, 80.0] {
        let params = AvoidanceParams {
            alpha,
            beta: 0.3,
            ..Default::default()
        };
        let penalized = apply_penalty(&scan, &sonar, &params)?;
        let b = wca_bearing(&penalized, config.gamma)?;
        println!(
            "alpha {alpha:>4}: {:?}, bearing {:>7.2} deg",
            classify_situation(&sonar, &params),
            b.theta_hat.to_degrees()
        );
    }
    Ok(())
}
