//! Full corridor convoy for 0, 1 and 2 relays: throughput over time and
//! where the chain first broke.

use relay_convoy::scenario::scenario_preset;
use relay_convoy::trace::{run_scenario, Summary};

fn main() -> Result<(), relay_convoy::SimError> {
    for relays in 0..=2 {
        let config = scenario_preset(&format!("indoor_corridor:{relays}")).expect("bundled preset");
        let rows = run_scenario(&config)?;
        let summary = Summary::from_trace(&rows);
        let samples: Vec<String> = rows
            .iter()
            .filter(|r| r.role == "leader" && r.tick % 40 == 0)
            .map(|r| format!("{:.0}", r.throughput_mbps))
            .collect();
        println!(
            "{relays} relays: mean {:.1} Mbps, min {:.1} Mbps, first break {:?}",
            summary.mean_throughput_mbps, summary.min_throughput_mbps, summary.first_disconnection_s
        );
        println!("  every 40 s: {}", samples.join(" "));
        for (node, d) in &summary.final_distances {
            println!("  final gap ahead of {node}: {d:.2} m");
        }
    }
    Ok(())
}
