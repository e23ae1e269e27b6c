//! Parameter sweep from a scenario file written on the fly: path-loss
//! exponent against outdoor throughput, and a trace export.

use relay_convoy::scenario::{load_scenario, scenario_preset, with_override};
use relay_convoy::trace::{export_plotdata, run_scenario, ExportKind, Summary};

fn main() -> Result<(), relay_convoy::SimError> {
    let dir = std::env::temp_dir().join("convoy_sweep_example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("outdoor.toml");
    std::fs::write(&path, scenario_preset("outdoor_lot:1").expect("bundled preset").to_toml())?;
    let base = load_scenario(&path)?;

    for n in ["1.8", "2.0", "2.2", "2.5"] {
        let config = with_override(&base, "radio.n", n)?;
        let s = Summary::from_trace(&run_scenario(&config)?);
        println!(
            "n = {n}: mean {:.1} Mbps, min {:.1} Mbps, first break {:?}",
            s.mean_throughput_mbps, s.min_throughput_mbps, s.first_disconnection_s
        );
    }

    let mut short = base.clone();
    short.duration_s = 5.0;
    let rows = run_scenario(&short)?;
    println!();
    export_plotdata(&rows, ExportKind::Path, std::io::stdout().lock())
}
