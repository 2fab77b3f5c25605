//! Named example channels.
//!
//! A name is `UPLINK[+DOWNLINK]`:
//!
//! - uplinks: `xor`, `multiplier`, `ff-adder-Q` (also `ff-adder(Q)`, `Q` prime)
//! - downlinks: `noiseless` (both users see `X0`), `noiseless-orthogonal`
//!   (`X0 = (a, b)`, user 1 sees `a`, user 2 sees `b`), `bsc-broadcast(E)`
//!   (independent BSC(E) legs)
//!
//! A bare uplink gets the noiseless broadcast over its output alphabet. A bare
//! downlink gets a default uplink: `noiseless-orthogonal` pairs with the
//! multiplier, the others with xor.

use super::{ChannelError, ChannelSpec, DownlinkChannel, Uplink, UplinkTable};

#[derive(Debug, Clone, PartialEq)]
enum UplinkName {
    Xor,
    Multiplier,
    FfAdder(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum DownlinkName {
    Noiseless,
    NoiselessOrthogonal,
    BscBroadcast(f64),
}

fn parameter(part: &str, prefix: &str) -> Option<String> {
    let rest = part.strip_prefix(prefix)?;
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        return Some(inner.to_string());
    }
    rest.strip_prefix('-')
        .or_else(|| rest.strip_prefix(':'))
        .map(str::to_string)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn parse_uplink(part: &str) -> Result<Option<UplinkName>, ChannelError> {
    Ok(match part {
        "xor" => Some(UplinkName::Xor),
        "multiplier" => Some(UplinkName::Multiplier),
        _ => match parameter(part, "ff-adder") {
            Some(q) => {
                let q: usize = q
                    .parse()
                    .map_err(|_| ChannelError::InvalidParameter(format!("ff-adder order '{q}' is not an integer")))?;
                if !is_prime(q) {
                    return Err(ChannelError::InvalidParameter(format!("ff-adder order {q} is not prime")));
                }
                Some(UplinkName::FfAdder(q))
            }
            None => None,
        },
    })
}

fn parse_downlink(part: &str) -> Result<Option<DownlinkName>, ChannelError> {
    Ok(match part {
        "noiseless" => Some(DownlinkName::Noiseless),
        "noiseless-orthogonal" => Some(DownlinkName::NoiselessOrthogonal),
        _ => match parameter(part, "bsc-broadcast") {
            Some(e) => {
                let eps: f64 = e
                    .parse()
                    .map_err(|_| ChannelError::InvalidParameter(format!("crossover '{e}' is not a number")))?;
                if !(0.0..=1.0).contains(&eps) {
                    return Err(ChannelError::InvalidParameter(format!("crossover {eps} outside [0, 1]")));
                }
                Some(DownlinkName::BscBroadcast(eps))
            }
            None => None,
        },
    })
}

fn build_uplink(name: &UplinkName) -> Result<UplinkTable, ChannelError> {
    match *name {
        UplinkName::Xor => UplinkTable::from_fn(2, 2, 2, |a, b| a ^ b),
        UplinkName::Multiplier => UplinkTable::from_fn(2, 2, 2, |a, b| a * b),
        UplinkName::FfAdder(q) => UplinkTable::from_fn(q, q, q, |a, b| (a + b) % q),
    }
}

fn build_downlink(name: &DownlinkName, copy_size: usize) -> Result<DownlinkChannel, ChannelError> {
    match *name {
        DownlinkName::Noiseless => {
            let p: Vec<Vec<Vec<f64>>> = (0..copy_size)
                .map(|x0| {
                    (0..copy_size)
                        .map(|y1| (0..copy_size).map(|y2| if y1 == x0 && y2 == x0 { 1.0 } else { 0.0 }).collect())
                        .collect()
                })
                .collect();
            DownlinkChannel::new(&p)
        }
        DownlinkName::NoiselessOrthogonal => {
            // x0 = 2a + b; user 1 sees a, user 2 sees b.
            let p: Vec<Vec<Vec<f64>>> = (0..4)
                .map(|x0| {
                    (0..2)
                        .map(|y1| (0..2).map(|y2| if y1 == x0 >> 1 && y2 == x0 & 1 { 1.0 } else { 0.0 }).collect())
                        .collect()
                })
                .collect();
            DownlinkChannel::new(&p)
        }
        DownlinkName::BscBroadcast(e) => {
            let w = vec![vec![1.0 - e, e], vec![e, 1.0 - e]];
            DownlinkChannel::independent_legs(&w, &w)
        }
    }
}

fn uplink_label(name: &UplinkName) -> String {
    match name {
        UplinkName::Xor => "xor".into(),
        UplinkName::Multiplier => "multiplier".into(),
        UplinkName::FfAdder(q) => format!("ff-adder-{q}"),
    }
}

fn downlink_label(name: &DownlinkName) -> String {
    match name {
        DownlinkName::Noiseless => "noiseless".into(),
        DownlinkName::NoiselessOrthogonal => "noiseless-orthogonal".into(),
        DownlinkName::BscBroadcast(e) => format!("bsc-broadcast({e})"),
    }
}

/// Builds a named example channel; see the module docs for the grammar.
pub fn builtin_channel(name: &str) -> Result<ChannelSpec, ChannelError> {
    let unknown = || ChannelError::UnknownBuiltin(name.to_string());
    let parts: Vec<&str> = name.trim().split('+').map(str::trim).collect();
    let (up, down) = match parts.as_slice() {
        [single] => match (parse_uplink(single)?, parse_downlink(single)?) {
            (Some(u), _) => (u, DownlinkName::Noiseless),
            (None, Some(d)) => {
                let u = if d == DownlinkName::NoiselessOrthogonal {
                    UplinkName::Multiplier
                } else {
                    UplinkName::Xor
                };
                (u, d)
            }
            (None, None) => return Err(unknown()),
        },
        [u, d] => (parse_uplink(u)?.ok_or_else(unknown)?, parse_downlink(d)?.ok_or_else(unknown)?),
        _ => return Err(unknown()),
    };
    let table = build_uplink(&up)?;
    let downlink = build_downlink(&down, table.y0_size())?;
    Ok(ChannelSpec::new(
        format!("{}+{}", uplink_label(&up), downlink_label(&down)),
        Uplink::Deterministic(table),
        downlink,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(name: &str) -> Vec<Vec<usize>> {
        builtin_channel(name).unwrap().uplink.table().unwrap().rows()
    }

    #[test]
    fn named_uplinks() {
        assert_eq!(table("xor"), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(table("multiplier"), vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(table("ff-adder-3"), vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(table("ff-adder(5)").len(), 5);
    }

    #[test]
    fn orthogonal_downlink() {
        let spec = builtin_channel("noiseless-orthogonal").unwrap();
        assert_eq!(table("noiseless-orthogonal"), vec![vec![0, 0], vec![0, 1]]);
        let d = &spec.downlink;
        assert_eq!((d.x0_size(), d.y1_size(), d.y2_size()), (4, 2, 2));
        let leg1 = d.leg1();
        let leg2 = d.leg2();
        for x0 in 0..4 {
            assert_eq!(leg1[x0][x0 >> 1], 1.0);
            assert_eq!(leg2[x0][x0 & 1], 1.0);
        }
    }

    #[test]
    fn composite_names() {
        let spec = builtin_channel("xor+bsc-broadcast(0.1)").unwrap();
        assert_eq!(spec.name, "xor+bsc-broadcast(0.1)");
        assert!((spec.downlink.leg1()[0][1] - 0.1).abs() < 1e-15);
        assert_eq!(builtin_channel("bsc-broadcast(0.1)").unwrap(), spec);
        let m = builtin_channel("multiplier+noiseless-orthogonal").unwrap();
        assert_eq!(m, builtin_channel("noiseless-orthogonal").unwrap());
        assert_eq!(builtin_channel("ff-adder-3").unwrap().downlink.x0_size(), 3);
    }

    #[test]
    fn bad_names() {
        assert!(matches!(builtin_channel("adder"), Err(ChannelError::UnknownBuiltin(_))));
        assert!(matches!(builtin_channel("ff-adder-4"), Err(ChannelError::InvalidParameter(_))));
        assert!(matches!(builtin_channel("bsc-broadcast(1.5)"), Err(ChannelError::InvalidParameter(_))));
        assert!(matches!(builtin_channel("xor+multiplier"), Err(ChannelError::UnknownBuiltin(_))));
        assert!(matches!(builtin_channel("xor+noiseless+noiseless"), Err(ChannelError::UnknownBuiltin(_))));
    }
}
