//! Property tests for pmfs, channels and regions.

use proptest::prelude::*;
use twrc::channel::{
    builtin_channel, downlink_joints, is_deterministic, to_table, uplink_joint, DownlinkChannel, Uplink, UplinkTable,
};
use twrc::prob::{entropy, mutual_information, sample, simplex_grid, JointPmf, Pmf, RandomSource};
use twrc::region::{
    capacity_layers, cf_evaluate, conv_r1, decompose_time_sharing, downlink_rates, general_rectangle, r2_frontier,
    r4_hull, region_contains, uplink_rectangle, CfInput, RatePoint, RegionConfig, SearchConfig, SweepConfig,
    CERT_TOLERANCE,
};

fn pmf(dim: usize) -> impl Strategy<Value = Pmf> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 0.001f64..1.0], dim)
        .prop_filter("some mass", |w| w.iter().sum::<f64>() > 0.0)
        .prop_map(|w| Pmf::normalized(w).unwrap())
}

fn joint(a: usize, b: usize) -> impl Strategy<Value = JointPmf> {
    pmf(a * b).prop_map(move |p| JointPmf::new(vec![a, b], p.probs().to_vec()).unwrap())
}

fn table() -> impl Strategy<Value = UplinkTable> {
    (2usize..=3, 2usize..=3, 2usize..=4).prop_flat_map(|(a, b, y)| {
        prop::collection::vec(prop::collection::vec(0..y, b), a)
            .prop_map(move |rows| UplinkTable::new(a, b, y, &rows).unwrap())
    })
}

fn table_with_inputs() -> impl Strategy<Value = (UplinkTable, Pmf, Pmf)> {
    table().prop_flat_map(|t| {
        let (a, b) = (t.x1_size(), t.x2_size());
        (Just(t), pmf(a), pmf(b))
    })
}

/// A downlink with `|X0| = 2` and correlated outputs.
fn downlink(ny1: usize, ny2: usize) -> impl Strategy<Value = DownlinkChannel> {
    prop::collection::vec(pmf(ny1 * ny2), 2).prop_map(move |rows| {
        let p: Vec<Vec<Vec<f64>>> = rows
            .iter()
            .map(|r| r.probs().chunks(ny2).map(|c| c.to_vec()).collect())
            .collect();
        DownlinkChannel::new(&p).unwrap()
    })
}

fn small_search() -> SearchConfig {
    SearchConfig {
        resolution: 16,
        ..SearchConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_bounds(p in (1usize..8).prop_flat_map(pmf)) {
        let h = entropy(&p);
        prop_assert!(h >= 0.0 && h <= (p.len() as f64).log2() + 1e-12);
        prop_assert_eq!(h == 0.0, p.point_mass_symbol().is_some());
    }

    #[test]
    fn chain_rule(j in joint(3, 4)) {
        let hab = j.entropy_of(&[0, 1]).unwrap();
        let hb = j.entropy_of(&[1]).unwrap();
        let ha_b = j.conditional_entropy_of(&[0], &[1]).unwrap();
        prop_assert!((hab - hb - ha_b).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_symmetric(j in joint(3, 2)) {
        let a = j.entropy_of(&[0]).unwrap() - j.conditional_entropy_of(&[0], &[1]).unwrap();
        let b = j.entropy_of(&[1]).unwrap() - j.conditional_entropy_of(&[1], &[0]).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((mutual_information(&j).unwrap() - a).abs() < 1e-10);
    }

    #[test]
    fn grid_refinement_contains_coarse(d in 1usize..4, r in 1usize..7) {
        let fine = simplex_grid(d, 2 * r).unwrap();
        for p in simplex_grid(d, r).unwrap() {
            prop_assert!(fine.iter().any(|q| q.probs() == p.probs()));
        }
    }

    #[test]
    fn sampling_replays(p in pmf(5), seed in any::<u64>(), stream in any::<u64>()) {
        let src = RandomSource::new(seed, stream);
        let draw = |src: RandomSource| {
            let mut rng = src.rng();
            (0..64).map(|_| sample(&p, &mut rng)).collect::<Vec<_>>()
        };
        prop_assert_eq!(draw(src), draw(src));
    }

    #[test]
    fn lifted_table_round_trips(t in table()) {
        let s = t.to_stochastic();
        prop_assert!(is_deterministic(&s));
        prop_assert_eq!(to_table(&s).unwrap(), t);
    }

    #[test]
    fn deterministic_uplink_has_no_residual_entropy((t, p1, p2) in table_with_inputs()) {
        let j = uplink_joint(&p1, &p2, &t).unwrap();
        prop_assert!(j.conditional_entropy_of(&[2], &[0, 1]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn general_rectangle_agrees((t, p1, p2) in table_with_inputs()) {
        let a = uplink_rectangle(&p1, &p2, &t).unwrap();
        let b = general_rectangle(&p1, &p2, &t.to_stochastic()).unwrap();
        prop_assert!((a.r1 - b.r1).abs() < 1e-12 && (a.r2 - b.r2).abs() < 1e-12);
    }

    #[test]
    fn downlink_joints_ignore_output_correlation(d in downlink(2, 3), p0 in pmf(2)) {
        let indep = DownlinkChannel::independent_legs(&d.leg1(), &d.leg2()).unwrap();
        let (a1, a2) = downlink_joints(&p0, &d).unwrap();
        let (b1, b2) = downlink_joints(&p0, &indep).unwrap();
        for (x, y) in a1.probs().iter().zip(b1.probs()).chain(a2.probs().iter().zip(b2.probs())) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn cf_identity_is_the_rectangle((t, p1, p2) in table_with_inputs(), p0 in pmf(2)) {
        let d = DownlinkChannel::independent_legs(
            &[vec![0.9, 0.1], vec![0.2, 0.8]],
            &[vec![1.0, 0.0], vec![0.3, 0.7]],
        ).unwrap();
        let up = Uplink::Deterministic(t.clone());
        let cf = CfInput::identity(p1.clone(), p2.clone(), t.y0_size(), p0.clone());
        let e = cf_evaluate(&cf, &up, &d, 0.0).unwrap();
        let rect = uplink_rectangle(&p1, &p2, &t).unwrap();
        let down = downlink_rates(&p0, &d).unwrap();
        prop_assert!(e.rates.distance(&rect) < 1e-12);
        prop_assert!((e.slack.0 - (down.r2 - rect.r2)).abs() < 1e-12);
        prop_assert!((e.slack.1 - (down.r1 - rect.r1)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn uplink_certificates_reevaluate(t in table()) {
        let conv = conv_r1(&t, &small_search()).unwrap();
        for v in &conv.vertices {
            let cert = v.uplink.as_ref().unwrap();
            prop_assert!(cert.residual(&v.point, &t).unwrap() <= CERT_TOLERANCE);
        }
        prop_assert!(conv.check_shape().is_ok());
    }

    #[test]
    fn refinement_is_monotone(t in table()) {
        let coarse = conv_r1(&t, &SearchConfig { resolution: 8, ..SearchConfig::default() }).unwrap();
        let fine = conv_r1(&t, &small_search()).unwrap();
        for p in coarse.points() {
            prop_assert!(region_contains(&fine, &p, 1e-9), "{p}");
        }
    }

    #[test]
    fn frontier_is_concave_and_decreasing(d in downlink(2, 2)) {
        let f = r2_frontier(&d, &SweepConfig { lambda_steps: 65, ..SweepConfig::default() }).unwrap();
        prop_assert!(f.check_shape().is_ok(), "{:?}", f.check_shape());
        prop_assert!(f.max_gap.unwrap() <= 1e-9);
    }

    #[test]
    fn decomposition_reconstructs(t in table(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let conv = conv_r1(&t, &small_search()).unwrap();
        let target = RatePoint::new(u * conv.max_r1(), v * conv.max_r2());
        prop_assume!(region_contains(&conv, &target, 0.0));
        let ts = decompose_time_sharing(&target, &conv).unwrap();
        prop_assert!(ts.components.len() <= 3);
        prop_assert!((ts.components.iter().map(|c| c.weight).sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(ts.residual(&target, &t).unwrap() <= 1e-6);
    }
}

#[test]
fn capacity_inside_both_layers() {
    for name in ["xor+bsc-broadcast(0.1)", "multiplier+bsc-broadcast(0.2)", "ff-adder-3+noiseless", "noiseless-orthogonal"] {
        let spec = builtin_channel(name).unwrap();
        let layers = capacity_layers(&spec, &RegionConfig::default()).unwrap();
        for v in &layers.capacity.vertices {
            assert!(region_contains(&layers.conv_r1, &v.point, 1e-9), "{name} {}", v.point);
            assert!(region_contains(&layers.r2_frontier, &v.point, 1e-9), "{name} {}", v.point);
        }
        let t = spec.uplink.table().unwrap();
        assert!(layers.capacity.certificate_error(&t, &spec.downlink).unwrap() <= 1e-9, "{name}");
    }
}

#[test]
fn inner_region_inside_capacity() {
    for name in ["xor+bsc-broadcast(0.1)", "multiplier+noiseless", "multiplier+bsc-broadcast(0.2)"] {
        let spec = builtin_channel(name).unwrap();
        let cfg = RegionConfig::default();
        let cap = capacity_layers(&spec, &cfg).unwrap().capacity;
        for p in r4_hull(&spec, &cfg).unwrap().points() {
            assert!(region_contains(&cap, &p, 1e-9), "{name} {p}");
        }
    }
}
