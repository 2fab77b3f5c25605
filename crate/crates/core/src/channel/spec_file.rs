//! JSON channel spec documents.
//!
//! ```json
//! {"name": "xor",
//!  "uplink": {"type": "deterministic", "x1_size": 2, "x2_size": 2, "y0_size": 2,
//!             "table": [[0, 1], [1, 0]]},
//!  "downlink": {"x0_size": 2, "y1_size": 2, "y2_size": 2,
//!               "p": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}}
//! ```
//!
//! `table` is indexed `[x1][x2]`, a stochastic uplink's `p` is indexed
//! `[x1][x2][y0]`, and the downlink `p` is indexed `[x0][y1][y2]`.
//! Unknown keys are rejected.

use super::{ChannelError, ChannelSpec, DownlinkChannel, StochasticUplink, Uplink, UplinkTable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    name: String,
    uplink: UplinkDoc,
    downlink: DownlinkDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum UplinkDoc {
    Deterministic {
        x1_size: usize,
        x2_size: usize,
        y0_size: usize,
        table: Vec<Vec<usize>>,
    },
    Stochastic {
        p: Vec<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DownlinkDoc {
    x0_size: usize,
    y1_size: usize,
    y2_size: usize,
    p: Vec<Vec<Vec<f64>>>,
}

fn declared(what: &str, declared: usize, actual: usize) -> Result<(), ChannelError> {
    if declared != actual {
        return Err(ChannelError::SizeMismatch {
            what: what.into(),
            expected: declared,
            actual,
        });
    }
    Ok(())
}

pub fn parse_channel_spec(text: &str) -> Result<ChannelSpec, ChannelError> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| ChannelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let uplink = match doc.uplink {
        UplinkDoc::Deterministic {
            x1_size,
            x2_size,
            y0_size,
            table,
        } => Uplink::Deterministic(UplinkTable::new(x1_size, x2_size, y0_size, &table)?),
        UplinkDoc::Stochastic { p } => Uplink::Stochastic(StochasticUplink::new(&p)?),
    };
    let d = &doc.downlink;
    declared("downlink.p blocks (x0_size)", d.x0_size, d.p.len())?;
    let downlink = DownlinkChannel::new(&d.p)?;
    declared("downlink y1_size", d.y1_size, downlink.y1_size())?;
    declared("downlink y2_size", d.y2_size, downlink.y2_size())?;
    Ok(ChannelSpec::new(doc.name, uplink, downlink))
}

pub fn emit_channel_spec(spec: &ChannelSpec) -> String {
    let uplink = match &spec.uplink {
        Uplink::Deterministic(t) => UplinkDoc::Deterministic {
            x1_size: t.x1_size(),
            x2_size: t.x2_size(),
            y0_size: t.y0_size(),
            table: t.rows(),
        },
        Uplink::Stochastic(s) => UplinkDoc::Stochastic { p: s.nested() },
    };
    let d = &spec.downlink;
    let doc = SpecDoc {
        name: spec.name.clone(),
        uplink,
        downlink: DownlinkDoc {
            x0_size: d.x0_size(),
            y1_size: d.y1_size(),
            y2_size: d.y2_size(),
            p: d.nested(),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("spec documents always serialize");
    out.push('\n');
    out
}
