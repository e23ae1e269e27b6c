//! Wheel commands for a range of leader bearings and signal strengths,
//! and the stop rule.

use relay_convoy::control::{
    background_velocity, stop_decision, turn_priority_speed, wheel_velocities, ControlParams,
};

fn main() {
    let params = ControlParams::default();
    println!("{:>10} {:>8} {:>10} {:>10}", "rssi", "v", "v_left", "v_right");
    for rssi in [-70.0, -50.0, -40.0, -30.0, -20.0, -15.0] {
        for bearing in [-30.0_f64, 0.0, 45.0] {
            let theta = bearing.to_radians();
            let v = background_velocity(rssi, &params);
            let v = turn_priority_speed(v, theta, theta, &params);
            let c = wheel_velocities(theta, theta, v, &params);
            println!("{rssi:>10} {v:>8.1} {:>10.2} {:>10.2}   bearing {bearing} deg", c.v_left, c.v_right);
        }
    }

    println!();
    for (leader, behind) in [(-40.0, -30.0), (-10.0, -30.0), (-40.0, -80.0)] {
        println!("leader {leader} dBm, behind {behind} dBm: {:?}", stop_decision(leader, behind, &params));
    }
}
