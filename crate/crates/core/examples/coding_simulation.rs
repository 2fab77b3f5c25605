//! Error rates of the relay-index scheme inside and outside the region.

use twrc::channel::builtin_channel;
use twrc::region::RatePoint;
use twrc::sim::{reports_csv, sweep, SimConfig};

fn main() {
    let spec = builtin_channel("xor+noiseless").unwrap();
    let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.8, 0.8), 100);
    cfg.trials = 2000;
    let inside = sweep(&spec, &cfg, &[100, 200, 400]).unwrap();
    print!("{}", reports_csv(&inside));

    // Leg capacity of a BSC(0.3) is about 0.119; ask user 1 for more.
    let spec = builtin_channel("xor+bsc-broadcast(0.3)").unwrap();
    let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.1, 0.32), 400);
    cfg.trials = 1000;
    let outside = sweep(&spec, &cfg, &[400]).unwrap();
    print!("{}", reports_csv(&outside));
    println!("mode {:?}", outside[0].mode);
}
