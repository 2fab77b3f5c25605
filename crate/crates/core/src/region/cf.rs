//! Compress-forward inner bound, evaluated at one input.

use super::{RatePoint, RegionError, TimeShare};
use crate::channel::{ChannelError, DownlinkChannel, Uplink};
use crate::prob::{JointPmf, Pmf};
use serde::{Deserialize, Serialize};

use super::downlink_rates;

/// Largest time-sharing alphabet accepted.
pub const CF_Q_BOUND: usize = 4;
/// Extra quantizer symbols allowed beyond `|Y0|`.
const CF_YHAT_EXTRA: usize = 3;
/// Margins must beat the slack by more than this to count as strict.
const STRICT_TOL: f64 = 1e-12;

/// One choice of `p(q) p(x1|q) p(x2|q) p(ŷ0|y0) p(x0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfInput {
    pub q_pmf: Pmf,
    pub x1_given_q: Vec<Pmf>,
    pub x2_given_q: Vec<Pmf>,
    pub y0hat_given_y0: Vec<Pmf>,
    pub x0_pmf: Pmf,
}

impl CfInput {
    /// `Ŷ0 = Y0` with no time sharing.
    pub fn identity(p1: Pmf, p2: Pmf, y0_size: usize, p0: Pmf) -> Self {
        Self {
            q_pmf: Pmf::point_mass(1, 0),
            x1_given_q: vec![p1],
            x2_given_q: vec![p2],
            y0hat_given_y0: (0..y0_size).map(|y| Pmf::point_mass(y0_size, y)).collect(),
            x0_pmf: p0,
        }
    }

    /// `Ŷ0 = Y0` with `Q` running over the components of a time share.
    pub fn identity_time_shared(ts: &TimeShare, y0_size: usize, p0: Pmf) -> Result<Self, RegionError> {
        let q_pmf = Pmf::normalized(ts.components.iter().map(|c| c.weight).collect())?;
        Ok(Self {
            q_pmf,
            x1_given_q: ts.components.iter().map(|c| c.p1.clone()).collect(),
            x2_given_q: ts.components.iter().map(|c| c.p2.clone()).collect(),
            y0hat_given_y0: (0..y0_size).map(|y| Pmf::point_mass(y0_size, y)).collect(),
            x0_pmf: p0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfEvaluation {
    /// `(I(X1; Ŷ0 | X2, Q), I(X2; Ŷ0 | X1, Q))`.
    pub rates: RatePoint,
    /// Both margins exceed the slack strictly.
    pub feasible: bool,
    /// `I(X0; Y1) - H(Ŷ0|X1,Q) + H(Ŷ0|Y0)` and the same with users swapped.
    pub slack: (f64, f64),
}

fn size_check(what: &str, expected: usize, actual: usize) -> Result<(), RegionError> {
    if expected != actual {
        return Err(ChannelError::SizeMismatch {
            what: what.into(),
            expected,
            actual,
        }
        .into());
    }
    Ok(())
}

pub fn cf_evaluate(cf: &CfInput, u: &Uplink, d: &DownlinkChannel, delta: f64) -> Result<CfEvaluation, RegionError> {
    let (n1, n2, ny) = u.sizes();
    let nq = cf.q_pmf.len();
    if nq > CF_Q_BOUND {
        return Err(RegionError::Cardinality {
            what: "Q".into(),
            size: nq,
            bound: CF_Q_BOUND,
        });
    }
    size_check("x1_given_q slices", nq, cf.x1_given_q.len())?;
    size_check("x2_given_q slices", nq, cf.x2_given_q.len())?;
    size_check("y0hat_given_y0 slices", ny, cf.y0hat_given_y0.len())?;
    for p in &cf.x1_given_q {
        size_check("p(x1|q) length", n1, p.len())?;
    }
    for p in &cf.x2_given_q {
        size_check("p(x2|q) length", n2, p.len())?;
    }
    let nh = cf.y0hat_given_y0.first().map_or(0, Pmf::len);
    for p in &cf.y0hat_given_y0 {
        size_check("p(ŷ0|y0) length", nh, p.len())?;
    }
    if nh > ny + CF_YHAT_EXTRA {
        return Err(RegionError::Cardinality {
            what: "Ŷ0".into(),
            size: nh,
            bound: ny + CF_YHAT_EXTRA,
        });
    }
    size_check("p(x0) length", d.x0_size(), cf.x0_pmf.len())?;

    let w = u.to_stochastic();
    // Axes (Q, X1, X2, Y0, Ŷ0).
    let j = JointPmf::from_fn(vec![nq, n1, n2, ny, nh], |i| {
        cf.q_pmf.get(i[0])
            * cf.x1_given_q[i[0]].get(i[1])
            * cf.x2_given_q[i[0]].get(i[2])
            * w.slice(i[1], i[2])[i[3]]
            * cf.y0hat_given_y0[i[3]].get(i[4])
    })?;
    let rates = RatePoint::new(
        j.mutual_information_of(&[1], &[4], &[2, 0])?.max(0.0),
        j.mutual_information_of(&[2], &[4], &[1, 0])?.max(0.0),
    );
    let h_given_y0 = j.conditional_entropy_of(&[4], &[3])?;
    let down = downlink_rates(&cf.x0_pmf, d)?;
    // down.r2 = I(X0; Y1), down.r1 = I(X0; Y2).
    let m1 = down.r2 - (j.conditional_entropy_of(&[4], &[1, 0])? - h_given_y0);
    let m2 = down.r1 - (j.conditional_entropy_of(&[4], &[2, 0])? - h_given_y0);
    Ok(CfEvaluation {
        rates,
        feasible: m1 > delta + STRICT_TOL && m2 > delta + STRICT_TOL,
        slack: (m1, m2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_channel;
    use crate::region::uplink_rectangle;

    #[test]
    fn identity_quantizer_reduces_to_rectangle() {
        let spec = builtin_channel("multiplier+noiseless-orthogonal").unwrap();
        let t = spec.uplink.table().unwrap();
        let (p1, p2) = (Pmf::bernoulli(0.3).unwrap(), Pmf::bernoulli(0.8).unwrap());
        let cf = CfInput::identity(p1.clone(), p2.clone(), 2, Pmf::uniform(4));
        let e = cf_evaluate(&cf, &spec.uplink, &spec.downlink, 0.0).unwrap();
        let r = uplink_rectangle(&p1, &p2, &t).unwrap();
        assert!(e.rates.distance(&r) < 1e-12);
        assert!(e.feasible);
    }

    #[test]
    fn useless_quantizer() {
        let spec = builtin_channel("xor+bsc-broadcast(0.1)").unwrap();
        let cf = CfInput {
            y0hat_given_y0: vec![Pmf::uniform(3); 2],
            ..CfInput::identity(Pmf::uniform(2), Pmf::uniform(2), 2, Pmf::uniform(2))
        };
        let e = cf_evaluate(&cf, &spec.uplink, &spec.downlink, 0.0).unwrap();
        assert!(e.rates.r1.abs() < 1e-12 && e.rates.r2.abs() < 1e-12);
        assert!(e.feasible);
    }

    #[test]
    fn equality_is_not_strict() {
        let spec = builtin_channel("xor").unwrap();
        let cf = CfInput::identity(Pmf::uniform(2), Pmf::uniform(2), 2, Pmf::uniform(2));
        let e = cf_evaluate(&cf, &spec.uplink, &spec.downlink, 0.0).unwrap();
        assert!(e.rates.distance(&RatePoint::new(1.0, 1.0)) < 1e-12);
        assert!(!e.feasible);
        assert!(e.slack.0.abs() < 1e-12 && e.slack.1.abs() < 1e-12);
    }

    #[test]
    fn cardinality_bounds() {
        let spec = builtin_channel("xor").unwrap();
        let base = CfInput::identity(Pmf::uniform(2), Pmf::uniform(2), 2, Pmf::uniform(2));
        let big_q = CfInput {
            q_pmf: Pmf::uniform(5),
            x1_given_q: vec![Pmf::uniform(2); 5],
            x2_given_q: vec![Pmf::uniform(2); 5],
            ..base.clone()
        };
        assert!(matches!(
            cf_evaluate(&big_q, &spec.uplink, &spec.downlink, 0.0),
            Err(RegionError::Cardinality { bound: 4, .. })
        ));
        let big_hat = CfInput {
            y0hat_given_y0: vec![Pmf::uniform(6); 2],
            ..base.clone()
        };
        assert!(matches!(
            cf_evaluate(&big_hat, &spec.uplink, &spec.downlink, 0.0),
            Err(RegionError::Cardinality { bound: 5, .. })
        ));
        let ok_hat = CfInput {
            y0hat_given_y0: vec![Pmf::uniform(5); 2],
            ..base
        };
        assert!(cf_evaluate(&ok_hat, &spec.uplink, &spec.downlink, 0.0).is_ok());
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let ok = r#"{"q_pmf":[1.0],"x1_given_q":[[0.5,0.5]],"x2_given_q":[[0.5,0.5]],
                     "y0hat_given_y0":[[1.0,0.0],[0.0,1.0]],"x0_pmf":[0.5,0.5]}"#;
        assert!(serde_json::from_str::<CfInput>(ok).is_ok());
        let bad = ok.replace("\"q_pmf\"", "\"extra\":1,\"q_pmf\"");
        assert!(serde_json::from_str::<CfInput>(&bad).is_err());
        let unnormalized = ok.replace("[0.5,0.5]}", "[0.5,0.6]}");
        assert!(serde_json::from_str::<CfInput>(&unnormalized).is_err());
    }
}
