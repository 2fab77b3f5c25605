//! Downlink frontier of a BSC broadcast. With crossover 0.1 both legs
//! carry 1 - h(0.1) ~ 0.531 bits at once.

use twrc::channel::builtin_channel;
use twrc::region::{r2_frontier, SweepConfig};

fn main() {
    for e in [0.0, 0.1, 0.3] {
        let spec = builtin_channel(&format!("xor+bsc-broadcast({e})")).unwrap();
        let f = r2_frontier(&spec.downlink, &SweepConfig::default()).unwrap();
        let v = f.max_sum_vertex().unwrap();
        println!(
            "crossover {e}: {} vertex(es), corner {}, gap bound {:e}",
            f.vertices.len(),
            v.point,
            f.max_gap.unwrap_or(0.0)
        );
    }
}
