//! The binary multiplier uplink. Its symmetric boundary point sits at
//! about (0.617, 0.617), below the unit square.

use twrc::channel::builtin_channel;
use twrc::region::{conv_r1, extreme_points, SearchConfig};

fn main() {
    let table = builtin_channel("multiplier").unwrap().uplink.table().unwrap();
    let ext = extreme_points(&table).unwrap();
    println!("r1max {}  r2max {}", ext.r1max.point, ext.r2max.point);

    for resolution in [16, 64, 256] {
        let cfg = SearchConfig {
            resolution,
            ..SearchConfig::default()
        };
        let conv = conv_r1(&table, &cfg).unwrap();
        let sym = conv.max_sum_vertex().unwrap().point;
        println!("resolution {resolution:>3}: {} vertices, max-sum {sym}", conv.vertices.len());
    }
}
