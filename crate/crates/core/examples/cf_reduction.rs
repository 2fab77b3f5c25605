//! Compress-forward with Ŷ0 = Y0 recovers the uplink rectangle; its
//! margins are I(X0; Yi) minus H(Y0 | Xj).

use twrc::channel::builtin_channel;
use twrc::prob::Pmf;
use twrc::region::{cf_evaluate, uplink_rectangle, CfInput};

fn main() {
    let spec = builtin_channel("multiplier+noiseless").unwrap();
    let table = spec.uplink.table().unwrap();
    let (p1, p2) = (Pmf::bernoulli(0.6).unwrap(), Pmf::bernoulli(0.3).unwrap());
    let cf = CfInput::identity(p1.clone(), p2.clone(), table.y0_size(), Pmf::uniform(2));
    let e = cf_evaluate(&cf, &spec.uplink, &spec.downlink, 0.0).unwrap();
    println!("cf rates   {}", e.rates);
    println!("rectangle  {}", uplink_rectangle(&p1, &p2, &table).unwrap());
    println!("margins    {:.6} {:.6}  feasible {}", e.slack.0, e.slack.1, e.feasible);

    // A constant quantizer sends nothing and costs nothing.
    let constant = CfInput {
        y0hat_given_y0: vec![Pmf::point_mass(1, 0); table.y0_size()],
        ..cf
    };
    let e = cf_evaluate(&constant, &spec.uplink, &spec.downlink, 0.0).unwrap();
    println!("constant   {} feasible {}", e.rates, e.feasible);
}
