//! Write a point of the uplink region as time sharing between at most
//! three product input distributions.

use twrc::channel::builtin_channel;
use twrc::region::{conv_r1, decompose_time_sharing, RatePoint, SearchConfig};

fn main() {
    let table = builtin_channel("multiplier").unwrap().uplink.table().unwrap();
    let conv = conv_r1(&table, &SearchConfig::default()).unwrap();
    for target in [RatePoint::new(0.3, 0.2), RatePoint::new(0.6, 0.4), RatePoint::new(0.0, 1.0)] {
        let ts = decompose_time_sharing(&target, &conv).unwrap();
        println!("{target}: {} component(s), residual {:e}", ts.components.len(), ts.residual(&target, &table).unwrap());
        for c in &ts.components {
            println!("  w={:.4} p1={:?} p2={:?}", c.weight, c.p1.probs(), c.p2.probs());
        }
    }
    match decompose_time_sharing(&RatePoint::new(0.9, 0.9), &conv) {
        Err(e) => println!("(0.9, 0.9): {e}"),
        Ok(_) => unreachable!(),
    }
}
