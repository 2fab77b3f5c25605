//! Monte Carlo error estimates for the relay-index coding scheme.
//!
//! Users send i.i.d. random codewords, the relay indexes the distinct
//! uplink output sequences and forwards a random codeword for the index,
//! each user decodes the index by joint typicality among the candidates
//! consistent with its own message, then inverts the uplink.
//!
//! Two codebook modes run the same scheme. *Explicit* builds every
//! codebook and the relay index; it needs `⌈nR1⌉ + ⌈nR2⌉` within
//! `bit_cap`. *Implicit* materializes only the transmitted codewords and
//! accounts for the competing ones exactly in distribution: a wrong relay
//! codeword is independent of the received sequence, so it is typical with
//! probability `π` computed by summing over joint types, and a wrong
//! message matches the uplink output with probability `ρ`, a product over
//! positions. Implicit mode counts every other-user message as a distinct
//! competitor, which can only overstate the error.

mod codebook;
mod trial;
mod typical;

pub use codebook::{candidate_set, decode_message, decode_w0, Codebook, DecodeFailure, Node, RelayIndex, Side};
pub use trial::{build_codebooks, BatchCodebooks, TrialOutcome};
pub use typical::{jointly_typical, TypicalSet};

use crate::channel::{ChannelError, ChannelSpec};
use crate::prob::{Pmf, ProbError, RandomSource};
use crate::region::RatePoint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959963984540054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error("simulation budget exceeded: {0}")]
    Budget(String),
    #[error("invalid simulation config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookMode {
    /// Explicit when within the caps, otherwise implicit.
    Auto,
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub rates: RatePoint,
    pub p1: Pmf,
    pub p2: Pmf,
    pub p0: Pmf,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    /// Trials sharing one draw of the codebooks.
    pub batch_size: usize,
    /// Blocks `B`; only enters the effective-rate accounting.
    pub blocks: usize,
    pub seed: u64,
    pub mode: CodebookMode,
    /// Largest `⌈nR1⌉ + ⌈nR2⌉` for explicit codebooks.
    pub bit_cap: u32,
    /// Largest `N1 N2 n` symbol evaluations for one explicit relay index.
    pub explicit_work_cap: u64,
    /// Largest number of joint types summed for one false-alarm probability.
    pub type_budget: u64,
}

impl SimConfig {
    /// Defaults for everything but the channel-dependent inputs.
    pub fn new(rates: RatePoint, p1: Pmf, p2: Pmf, p0: Pmf, n: usize) -> Self {
        Self {
            rates,
            p1,
            p2,
            p0,
            n,
            epsilon: 0.05,
            trials: 1000,
            batch_size: 100,
            blocks: 10,
            seed: 0,
            mode: CodebookMode::Auto,
            bit_cap: 24,
            explicit_work_cap: 1 << 26,
            type_budget: 1 << 24,
        }
    }

    /// Uniform inputs on every alphabet of `spec`.
    pub fn uniform(spec: &ChannelSpec, rates: RatePoint, n: usize) -> Self {
        let (x1, x2, _) = spec.uplink.sizes();
        Self::new(
            rates,
            Pmf::uniform(x1),
            Pmf::uniform(x2),
            Pmf::uniform(spec.downlink.x0_size()),
            n,
        )
    }

    /// `⌈n R_i⌉`, ignoring rounding noise just above an integer.
    pub fn message_bits(&self) -> (u32, u32) {
        let bits = |r: f64| (self.n as f64 * r - 1e-9).ceil().max(0.0) as u32;
        (bits(self.rates.r1), bits(self.rates.r2))
    }

    fn validate(&self, spec: &ChannelSpec) -> Result<(), SimError> {
        let (x1, x2, _) = spec.uplink.sizes();
        let bad = |m: String| Err(SimError::Invalid(m));
        for (what, p, size) in [
            ("p1", &self.p1, x1),
            ("p2", &self.p2, x2),
            ("p0", &self.p0, spec.downlink.x0_size()),
        ] {
            if p.len() != size {
                return bad(format!("{what} has {} entries, alphabet has {size}", p.len()));
            }
        }
        if !(self.rates.r1.is_finite() && self.rates.r2.is_finite()) || self.rates.r1 < 0.0 || self.rates.r2 < 0.0 {
            return bad(format!("rates {} must be finite and non-negative", self.rates));
        }
        if self.n == 0 || self.trials == 0 || self.batch_size == 0 || self.blocks == 0 {
            return bad("n, trials, batch_size and blocks must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon {} must be positive", self.epsilon));
        }
        let (k1, k2) = self.message_bits();
        if k1 > 4096 || k2 > 4096 {
            return bad(format!("{k1} + {k2} message bits is beyond the simulator's limit of 4096 each"));
        }
        Ok(())
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (nf, p) = (n as f64, k as f64 / n as f64);
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = WILSON_Z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    pub trials: usize,
    pub w0_u1: usize,
    pub w0_u2: usize,
    pub msg_u1: usize,
    pub msg_u2: usize,
    pub total: usize,
}

impl ErrorCounts {
    fn add(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        self.w0_u1 += o.err_w0_u1 as usize;
        self.w0_u2 += o.err_w0_u2 as usize;
        self.msg_u1 += o.err_msg_u1 as usize;
        self.msg_u2 += o.err_msg_u2 as usize;
        self.total += o.err_total() as usize;
    }

    fn merge(&mut self, o: &ErrorCounts) {
        self.trials += o.trials;
        self.w0_u1 += o.w0_u1;
        self.w0_u2 += o.w0_u2;
        self.msg_u1 += o.msg_u1;
        self.msg_u2 += o.msg_u2;
        self.total += o.total;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub channel: String,
    pub n: usize,
    pub requested_rates: RatePoint,
    pub message_bits: (u32, u32),
    /// `⌈n R_i⌉ / n`, the rates actually simulated.
    pub simulated_rates: RatePoint,
    /// `R_i (B - 1) / B`.
    pub effective_rates: RatePoint,
    pub blocks: usize,
    pub epsilon: f64,
    pub mode: CodebookMode,
    pub batches: usize,
    pub counts: ErrorCounts,
    pub err_w0_u1: f64,
    pub err_w0_u2: f64,
    pub err_msg_u1: f64,
    pub err_msg_u2: f64,
    pub err_total: f64,
    /// Wilson 95% interval for `err_total`.
    pub ci_total: (f64, f64),
    /// Mean and largest relay index size over batches (explicit mode only).
    pub m_mean: Option<f64>,
    pub m_max: Option<usize>,
    pub seed: u64,
    pub generator: String,
    pub runtime_secs: f64,
}

impl SimReport {
    pub const CSV_HEADER: &'static str = "n,R1,R2,err_w0_u1,err_w0_u2,err_msg_u1,err_msg_u2,err_total,ci_lo,ci_hi,m_mean";

    pub fn csv_row(&self) -> String {
        let m = self.m_mean.map(|m| m.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.simulated_rates.r1,
            self.simulated_rates.r2,
            self.err_w0_u1,
            self.err_w0_u2,
            self.err_msg_u1,
            self.err_msg_u2,
            self.err_total,
            self.ci_total.0,
            self.ci_total.1,
            m
        )
    }

    /// The report with its wall-clock field cleared, for comparisons.
    pub fn without_timing(&self) -> SimReport {
        SimReport {
            runtime_secs: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// Header plus one row per report.
pub fn reports_csv(reports: &[SimReport]) -> String {
    let mut out = String::from(SimReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// The stream for block length `n`; independent of which other lengths
/// are simulated alongside.
fn run_source(cfg: &SimConfig) -> RandomSource {
    RandomSource::new(cfg.seed, 0).derive(cfg.n as u64)
}

/// Codebook-averaged error rates: trials run in batches, each batch with a
/// fresh draw of all codebooks. Batches run in parallel and merge in batch
/// order.
pub fn estimate_error(spec: &ChannelSpec, cfg: &SimConfig) -> Result<SimReport, SimError> {
    let start = Instant::now();
    cfg.validate(spec)?;
    let plan = trial::Plan::new(spec, cfg)?;
    let src = run_source(cfg);
    let batches = cfg.trials.div_ceil(cfg.batch_size);
    let per_batch: Vec<(ErrorCounts, Option<usize>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let size = cfg.batch_size.min(cfg.trials - b * cfg.batch_size);
            plan.run_batch(src.derive(b as u64), size)
        })
        .collect::<Result<_, SimError>>()?;

    let mut counts = ErrorCounts::default();
    let mut ms = Vec::new();
    for (c, m) in &per_batch {
        counts.merge(c);
        ms.extend(*m);
    }
    let rate = |k: usize| k as f64 / counts.trials as f64;
    let (k1, k2) = cfg.message_bits();
    let n = cfg.n as f64;
    let keep = (cfg.blocks - 1) as f64 / cfg.blocks as f64;
    Ok(SimReport {
        channel: spec.name.clone(),
        n: cfg.n,
        requested_rates: cfg.rates,
        message_bits: (k1, k2),
        simulated_rates: RatePoint::new(k1 as f64 / n, k2 as f64 / n),
        effective_rates: RatePoint::new(cfg.rates.r1 * keep, cfg.rates.r2 * keep),
        blocks: cfg.blocks,
        epsilon: cfg.epsilon,
        mode: plan.mode(),
        batches,
        counts,
        err_w0_u1: rate(counts.w0_u1),
        err_w0_u2: rate(counts.w0_u2),
        err_msg_u1: rate(counts.msg_u1),
        err_msg_u2: rate(counts.msg_u2),
        err_total: rate(counts.total),
        ci_total: wilson_interval(counts.total, counts.trials),
        m_mean: (!ms.is_empty()).then(|| ms.iter().sum::<usize>() as f64 / ms.len() as f64),
        m_max: ms.iter().copied().max(),
        seed: cfg.seed,
        generator: RandomSource::GENERATOR.to_string(),
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// [`estimate_error`] at each block length in turn.
pub fn sweep(spec: &ChannelSpec, cfg: &SimConfig, n_list: &[usize]) -> Result<Vec<SimReport>, SimError> {
    n_list
        .iter()
        .map(|&n| estimate_error(spec, &SimConfig { n, ..cfg.clone() }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_channel;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.03699).abs() < 1e-4, "{hi}");
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
        let w = |n: usize| {
            let (lo, hi) = wilson_interval(n / 5, n);
            hi - lo
        };
        assert!((w(1000) / w(2000) - 2f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn message_bits_round_up() {
        let spec = builtin_channel("xor").unwrap();
        let cfg = SimConfig::uniform(&spec, RatePoint::new(0.8, 0.15), 10);
        assert_eq!(cfg.message_bits(), (8, 2));
        let cfg = SimConfig::uniform(&spec, RatePoint::new(0.3, 0.0), 10);
        assert_eq!(cfg.message_bits(), (3, 0));
    }

    #[test]
    fn zero_rates_never_fail() {
        let spec = builtin_channel("xor+noiseless").unwrap();
        let mut cfg = SimConfig::uniform(&spec, RatePoint::ORIGIN, 50);
        cfg.trials = 300;
        let r = estimate_error(&spec, &cfg).unwrap();
        assert_eq!(r.mode, CodebookMode::Explicit);
        assert_eq!(r.counts.total, 0);
        assert_eq!(r.m_max, Some(1));
    }

    #[test]
    fn effective_rate_accounting() {
        let spec = builtin_channel("xor").unwrap();
        let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.4, 0.2), 20);
        cfg.trials = 10;
        let r = estimate_error(&spec, &cfg).unwrap();
        assert!((r.effective_rates.r1 - 0.9 * 0.4).abs() < 1e-15);
        assert!((r.effective_rates.r2 - 0.9 * 0.2).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let spec = builtin_channel("xor").unwrap();
        let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.4, 0.2), 20);
        cfg.p0 = Pmf::uniform(3);
        assert!(matches!(estimate_error(&spec, &cfg), Err(SimError::Invalid(_))));
        let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.4, 0.2), 20);
        cfg.epsilon = 0.0;
        assert!(estimate_error(&spec, &cfg).is_err());
        let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.8, 0.8), 40);
        cfg.mode = CodebookMode::Explicit;
        assert!(matches!(estimate_error(&spec, &cfg), Err(SimError::Budget(_))));
    }

    #[test]
    fn csv_shape() {
        let spec = builtin_channel("xor").unwrap();
        let mut cfg = SimConfig::uniform(&spec, RatePoint::new(0.25, 0.25), 16);
        cfg.trials = 20;
        let r = estimate_error(&spec, &cfg).unwrap();
        let text = reports_csv(&[r]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SimReport::CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 11);
        assert!(lines[1].starts_with("16,0.25,0.25,"));
    }
}
