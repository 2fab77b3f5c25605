//! The restricted two-way relay channel: a deterministic (or general
//! stochastic) uplink `p(y0 | x1, x2)` and an arbitrary broadcast downlink
//! `p(y1, y2 | x0)`.

mod builtin;
mod spec_file;

pub use builtin::builtin_channel;
pub use spec_file::{emit_channel_spec, parse_channel_spec};

use crate::prob::{JointPmf, Pmf, ProbError, MASS_TOLERANCE};
use thiserror::Error;

/// Default per-alphabet size cap for the optimizing operations.
pub const DEFAULT_ALPHABET_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{what}: expected {expected}, got {actual}")]
    SizeMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },
    #[error("uplink table cell (x1={x1}, x2={x2}) = {value} is outside 0..{y0_size}")]
    TableEntryOutOfRange {
        x1: usize,
        x2: usize,
        value: usize,
        y0_size: usize,
    },
    #[error("uplink slice p(y0 | x1={x1}, x2={x2}) is not a pmf: {source}")]
    InvalidUplinkSlice {
        x1: usize,
        x2: usize,
        source: ProbError,
    },
    #[error("downlink slice p(y1, y2 | x0={x0}) is not a pmf: {source}")]
    InvalidDownlinkSlice { x0: usize, source: ProbError },
    #[error("uplink is not deterministic: p(y0 | x1={x1}, x2={x2}) has more than one symbol with positive mass")]
    NotDeterministic { x1: usize, x2: usize },
    #[error("alphabet {which} has size {size}, above the cap of {cap}")]
    AlphabetTooLarge {
        which: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("malformed channel spec at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown built-in channel '{0}'")]
    UnknownBuiltin(String),
    #[error("invalid built-in parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Prob(#[from] ProbError),
}

/// Deterministic uplink `y0 = f(x1, x2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UplinkTable {
    x1_size: usize,
    x2_size: usize,
    y0_size: usize,
    table: Vec<usize>,
}

impl UplinkTable {
    /// `rows[x1][x2]` is the relay's output symbol.
    pub fn new(x1_size: usize, x2_size: usize, y0_size: usize, rows: &[Vec<usize>]) -> Result<Self, ChannelError> {
        if x1_size == 0 || x2_size == 0 || y0_size == 0 {
            return Err(ProbError::EmptyAlphabet.into());
        }
        if rows.len() != x1_size {
            return Err(ChannelError::SizeMismatch {
                what: "uplink table rows (x1_size)".into(),
                expected: x1_size,
                actual: rows.len(),
            });
        }
        let mut table = Vec::with_capacity(x1_size * x2_size);
        for (x1, row) in rows.iter().enumerate() {
            if row.len() != x2_size {
                return Err(ChannelError::SizeMismatch {
                    what: format!("uplink table row x1={x1} (x2_size)"),
                    expected: x2_size,
                    actual: row.len(),
                });
            }
            for (x2, &value) in row.iter().enumerate() {
                if value >= y0_size {
                    return Err(ChannelError::TableEntryOutOfRange { x1, x2, value, y0_size });
                }
                table.push(value);
            }
        }
        Ok(Self {
            x1_size,
            x2_size,
            y0_size,
            table,
        })
    }

    pub fn from_fn(
        x1_size: usize,
        x2_size: usize,
        y0_size: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, ChannelError> {
        let rows: Vec<Vec<usize>> = (0..x1_size).map(|a| (0..x2_size).map(|b| f(a, b)).collect()).collect();
        Self::new(x1_size, x2_size, y0_size, &rows)
    }

    pub fn x1_size(&self) -> usize {
        self.x1_size
    }

    pub fn x2_size(&self) -> usize {
        self.x2_size
    }

    pub fn y0_size(&self) -> usize {
        self.y0_size
    }

    #[inline]
    pub fn output(&self, x1: usize, x2: usize) -> usize {
        self.table[x1 * self.x2_size + x2]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.x2_size).map(|r| r.to_vec()).collect()
    }

    /// Number of distinct output symbols actually produced.
    pub fn reachable_count(&self) -> usize {
        let mut seen = vec![false; self.y0_size];
        for &y in &self.table {
            seen[y] = true;
        }
        seen.iter().filter(|&&s| s).count()
    }

    /// Declared output symbols never produced by any input pair.
    pub fn unreachable_outputs(&self) -> Vec<usize> {
        let mut seen = vec![false; self.y0_size];
        for &y in &self.table {
            seen[y] = true;
        }
        (0..self.y0_size).filter(|&y| !seen[y]).collect()
    }

    /// Indicator form `p(y0 | x1, x2) = 1[y0 = f(x1, x2)]`.
    pub fn to_stochastic(&self) -> StochasticUplink {
        let mut p = vec![0.0; self.table.len() * self.y0_size];
        for (cell, &y) in self.table.iter().enumerate() {
            p[cell * self.y0_size + y] = 1.0;
        }
        StochasticUplink {
            x1_size: self.x1_size,
            x2_size: self.x2_size,
            y0_size: self.y0_size,
            p,
        }
    }
}

/// General uplink `p(y0 | x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticUplink {
    x1_size: usize,
    x2_size: usize,
    y0_size: usize,
    p: Vec<f64>,
}

impl StochasticUplink {
    /// `p[x1][x2][y0]`.
    pub fn new(p: &[Vec<Vec<f64>>]) -> Result<Self, ChannelError> {
        let x1_size = p.len();
        let x2_size = p.first().map_or(0, |r| r.len());
        let y0_size = p.first().and_then(|r| r.first()).map_or(0, |s| s.len());
        if x1_size == 0 || x2_size == 0 || y0_size == 0 {
            return Err(ProbError::EmptyAlphabet.into());
        }
        let mut flat = Vec::with_capacity(x1_size * x2_size * y0_size);
        for (x1, row) in p.iter().enumerate() {
            if row.len() != x2_size {
                return Err(ChannelError::SizeMismatch {
                    what: format!("stochastic uplink row x1={x1} (x2_size)"),
                    expected: x2_size,
                    actual: row.len(),
                });
            }
            for (x2, slice) in row.iter().enumerate() {
                if slice.len() != y0_size {
                    return Err(ChannelError::SizeMismatch {
                        what: format!("stochastic uplink slice (x1={x1}, x2={x2}) (y0_size)"),
                        expected: y0_size,
                        actual: slice.len(),
                    });
                }
                Pmf::new(slice.clone()).map_err(|source| ChannelError::InvalidUplinkSlice { x1, x2, source })?;
                flat.extend_from_slice(slice);
            }
        }
        Ok(Self {
            x1_size,
            x2_size,
            y0_size,
            p: flat,
        })
    }

    pub fn x1_size(&self) -> usize {
        self.x1_size
    }

    pub fn x2_size(&self) -> usize {
        self.x2_size
    }

    pub fn y0_size(&self) -> usize {
        self.y0_size
    }

    pub fn slice(&self, x1: usize, x2: usize) -> &[f64] {
        let start = (x1 * self.x2_size + x2) * self.y0_size;
        &self.p[start..start + self.y0_size]
    }

    pub fn nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.x1_size)
            .map(|a| (0..self.x2_size).map(|b| self.slice(a, b).to_vec()).collect())
            .collect()
    }
}

/// True iff every slice is a point mass within [`MASS_TOLERANCE`].
pub fn is_deterministic(u: &StochasticUplink) -> bool {
    to_table(u).is_ok()
}

/// Extracts `f` from a point-mass uplink.
pub fn to_table(u: &StochasticUplink) -> Result<UplinkTable, ChannelError> {
    let mut rows = Vec::with_capacity(u.x1_size);
    for x1 in 0..u.x1_size {
        let mut row = Vec::with_capacity(u.x2_size);
        for x2 in 0..u.x2_size {
            let slice = u.slice(x1, x2);
            let heavy = slice.iter().position(|&p| (p - 1.0).abs() <= MASS_TOLERANCE);
            let rest_zero = slice
                .iter()
                .enumerate()
                .all(|(y, &p)| Some(y) == heavy || p <= MASS_TOLERANCE);
            match heavy {
                Some(y) if rest_zero => row.push(y),
                _ => return Err(ChannelError::NotDeterministic { x1, x2 }),
            }
        }
        rows.push(row);
    }
    UplinkTable::new(u.x1_size, u.x2_size, u.y0_size, &rows)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Uplink {
    Deterministic(UplinkTable),
    Stochastic(StochasticUplink),
}

impl Uplink {
    pub fn sizes(&self) -> (usize, usize, usize) {
        match self {
            Uplink::Deterministic(t) => (t.x1_size, t.x2_size, t.y0_size),
            Uplink::Stochastic(s) => (s.x1_size, s.x2_size, s.y0_size),
        }
    }

    /// The deterministic table, or `NotDeterministic` naming the first
    /// offending cell. Stochastic uplinks whose slices are all point masses
    /// are accepted.
    pub fn table(&self) -> Result<UplinkTable, ChannelError> {
        match self {
            Uplink::Deterministic(t) => Ok(t.clone()),
            Uplink::Stochastic(s) => to_table(s),
        }
    }

    pub fn to_stochastic(&self) -> StochasticUplink {
        match self {
            Uplink::Deterministic(t) => t.to_stochastic(),
            Uplink::Stochastic(s) => s.clone(),
        }
    }
}

/// Broadcast downlink `p(y1, y2 | x0)` stored as the full joint.
#[derive(Debug, Clone, PartialEq)]
pub struct DownlinkChannel {
    x0_size: usize,
    y1_size: usize,
    y2_size: usize,
    p: Vec<f64>,
}

impl DownlinkChannel {
    /// `p[x0][y1][y2]`.
    pub fn new(p: &[Vec<Vec<f64>>]) -> Result<Self, ChannelError> {
        let x0_size = p.len();
        let y1_size = p.first().map_or(0, |r| r.len());
        let y2_size = p.first().and_then(|r| r.first()).map_or(0, |s| s.len());
        if x0_size == 0 || y1_size == 0 || y2_size == 0 {
            return Err(ProbError::EmptyAlphabet.into());
        }
        let mut flat = Vec::with_capacity(x0_size * y1_size * y2_size);
        for (x0, block) in p.iter().enumerate() {
            if block.len() != y1_size {
                return Err(ChannelError::SizeMismatch {
                    what: format!("downlink block x0={x0} (y1_size)"),
                    expected: y1_size,
                    actual: block.len(),
                });
            }
            let start = flat.len();
            for (y1, row) in block.iter().enumerate() {
                if row.len() != y2_size {
                    return Err(ChannelError::SizeMismatch {
                        what: format!("downlink row (x0={x0}, y1={y1}) (y2_size)"),
                        expected: y2_size,
                        actual: row.len(),
                    });
                }
                flat.extend_from_slice(row);
            }
            Pmf::new(flat[start..].to_vec()).map_err(|source| ChannelError::InvalidDownlinkSlice { x0, source })?;
        }
        Ok(Self {
            x0_size,
            y1_size,
            y2_size,
            p: flat,
        })
    }

    /// Builds `p(y1, y2 | x0) = w1(y1 | x0) w2(y2 | x0)`.
    pub fn independent_legs(w1: &[Vec<f64>], w2: &[Vec<f64>]) -> Result<Self, ChannelError> {
        if w1.len() != w2.len() {
            return Err(ChannelError::SizeMismatch {
                what: "leg input alphabets".into(),
                expected: w1.len(),
                actual: w2.len(),
            });
        }
        let nested: Vec<Vec<Vec<f64>>> = w1
            .iter()
            .zip(w2)
            .map(|(a, b)| a.iter().map(|&pa| b.iter().map(|&pb| pa * pb).collect()).collect())
            .collect();
        Self::new(&nested)
    }

    pub fn x0_size(&self) -> usize {
        self.x0_size
    }

    pub fn y1_size(&self) -> usize {
        self.y1_size
    }

    pub fn y2_size(&self) -> usize {
        self.y2_size
    }

    /// Flat `p(y1, y2 | x0)` with `y2` fastest.
    pub fn slice(&self, x0: usize) -> &[f64] {
        let n = self.y1_size * self.y2_size;
        &self.p[x0 * n..(x0 + 1) * n]
    }

    /// `p(y1 | x0)` for every `x0`.
    pub fn leg1(&self) -> Vec<Vec<f64>> {
        (0..self.x0_size)
            .map(|x0| self.slice(x0).chunks(self.y2_size).map(|r| r.iter().sum()).collect())
            .collect()
    }

    /// `p(y2 | x0)` for every `x0`.
    pub fn leg2(&self) -> Vec<Vec<f64>> {
        (0..self.x0_size)
            .map(|x0| {
                let s = self.slice(x0);
                (0..self.y2_size)
                    .map(|y2| (0..self.y1_size).map(|y1| s[y1 * self.y2_size + y2]).sum())
                    .collect()
            })
            .collect()
    }

    pub fn nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.x0_size)
            .map(|x0| self.slice(x0).chunks(self.y2_size).map(|r| r.to_vec()).collect())
            .collect()
    }
}

/// A complete channel description.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub name: String,
    pub uplink: Uplink,
    pub downlink: DownlinkChannel,
}

impl ChannelSpec {
    pub fn new(name: impl Into<String>, uplink: Uplink, downlink: DownlinkChannel) -> Self {
        Self {
            name: name.into(),
            uplink,
            downlink,
        }
    }

    pub fn check_alphabet_cap(&self, cap: usize) -> Result<(), ChannelError> {
        let (x1, x2, y0) = self.uplink.sizes();
        let d = &self.downlink;
        for (which, size) in [
            ("X1", x1),
            ("X2", x2),
            ("Y0", y0),
            ("X0", d.x0_size),
            ("Y1", d.y1_size),
            ("Y2", d.y2_size),
        ] {
            if size > cap {
                return Err(ChannelError::AlphabetTooLarge { which, size, cap });
            }
        }
        Ok(())
    }
}

fn check_len(what: &str, expected: usize, actual: usize) -> Result<(), ChannelError> {
    if expected != actual {
        return Err(ChannelError::SizeMismatch {
            what: what.into(),
            expected,
            actual,
        });
    }
    Ok(())
}

/// `p(x1, x2, y0) = p1(x1) p2(x2) 1[y0 = f(x1, x2)]`, axes `(X1, X2, Y0)`.
pub fn uplink_joint(p1: &Pmf, p2: &Pmf, u: &UplinkTable) -> Result<JointPmf, ChannelError> {
    check_len("p(x1) length", u.x1_size, p1.len())?;
    check_len("p(x2) length", u.x2_size, p2.len())?;
    let mut probs = vec![0.0; u.x1_size * u.x2_size * u.y0_size];
    for x1 in 0..u.x1_size {
        for x2 in 0..u.x2_size {
            let cell = x1 * u.x2_size + x2;
            probs[cell * u.y0_size + u.output(x1, x2)] = p1.get(x1) * p2.get(x2);
        }
    }
    Ok(JointPmf::new(vec![u.x1_size, u.x2_size, u.y0_size], probs)?)
}

/// `p(x1, x2, y0) = p1(x1) p2(x2) p(y0 | x1, x2)`, axes `(X1, X2, Y0)`.
pub fn stochastic_uplink_joint(p1: &Pmf, p2: &Pmf, u: &StochasticUplink) -> Result<JointPmf, ChannelError> {
    check_len("p(x1) length", u.x1_size, p1.len())?;
    check_len("p(x2) length", u.x2_size, p2.len())?;
    let mut probs = Vec::with_capacity(u.p.len());
    for x1 in 0..u.x1_size {
        for x2 in 0..u.x2_size {
            let w = p1.get(x1) * p2.get(x2);
            probs.extend(u.slice(x1, x2).iter().map(|&p| w * p));
        }
    }
    Ok(JointPmf::new(vec![u.x1_size, u.x2_size, u.y0_size], probs)?)
}

/// The two user-facing joints `p(x0, y1)` and `p(x0, y2)`.
pub fn downlink_joints(p0: &Pmf, d: &DownlinkChannel) -> Result<(JointPmf, JointPmf), ChannelError> {
    check_len("p(x0) length", d.x0_size, p0.len())?;
    let leg = |w: Vec<Vec<f64>>, ysize: usize| -> Result<JointPmf, ChannelError> {
        let probs: Vec<f64> = w
            .iter()
            .enumerate()
            .flat_map(|(x0, row)| row.iter().map(move |&p| p0.get(x0) * p))
            .collect();
        Ok(JointPmf::new(vec![d.x0_size, ysize], probs)?)
    };
    Ok((leg(d.leg1(), d.y1_size)?, leg(d.leg2(), d.y2_size)?))
}
