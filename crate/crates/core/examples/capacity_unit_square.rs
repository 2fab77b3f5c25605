//! xor uplink, noiseless downlink: the capacity region is the unit square.

use twrc::channel::builtin_channel;
use twrc::region::{capacity_layers, region_csv, RegionConfig};

fn main() {
    let spec = builtin_channel("xor+noiseless").expect("built-in");
    let layers = capacity_layers(&spec, &RegionConfig::default()).expect("region");
    print!("{}", region_csv(&layers.capacity));
    let best = layers.capacity.max_sum_vertex().expect("non-empty").point;
    println!("corner {best}");
}
