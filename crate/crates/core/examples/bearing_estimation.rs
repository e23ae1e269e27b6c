//! Weighted-centroid bearing estimates: one noisy sweep, then the center
//! error shrinking sweep by sweep on a static source.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relay_convoy::checks::convergence_errors;
use relay_convoy::radio::{sample_rssi, AntennaPattern, PathLossModel};
use relay_convoy::scan::{synthesize_scan, wca_bearing, ScanConfig};

fn main() -> Result<(), relay_convoy::DomainError> {
    let pattern = AntennaPattern::directional(10.0);
    let model = PathLossModel {
        shadow_sigma_db: 2.0,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let config = ScanConfig::default();
    let truth = 25f64.to_radians();
    let scan = synthesize_scan(&config, |a| sample_rssi(-45.0 + pattern.receive_gain_db(a - truth), &model, &mut rng));
    for gamma in [1.0, 5.0, 10.0, 20.0] {
        let b = wca_bearing(&scan, gamma)?.with_truth(truth);
        println!(
            "gamma {gamma:>4}: estimate {:>7.2} deg, error {:>6.2} deg",
            b.theta_hat.to_degrees(),
            b.error.unwrap_or_default().to_degrees()
        );
    }

    println!("\nsweep  center error (deg)");
    for (k, e) in convergence_errors(60f64.to_radians(), 6, 10.0).iter().enumerate() {
        println!("{k:>5}  {:>8.3}", e.to_degrees());
    }
    Ok(())
}
