//! One batch of trials: codebooks, transmission and decoding.

use super::codebook::{candidate_set, decode_message, decode_w0, Codebook, Node, RelayIndex, Side};
use super::typical::TypicalSet;
use super::{CodebookMode, ErrorCounts, SimConfig, SimError};
use crate::channel::{downlink_joints, ChannelSpec, UplinkTable};
use crate::prob::{mix64, Pmf, RandomSource, Sampler};
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Mutex;

const CB_USER1: u64 = 1;
const CB_USER2: u64 = 2;
const CB_RELAY: u64 = 3;
const TRIALS: u64 = 4;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub err_w0_u1: bool,
    pub err_w0_u2: bool,
    /// User 1 failed to recover `w2`.
    pub err_msg_u1: bool,
    /// User 2 failed to recover `w1`.
    pub err_msg_u2: bool,
}

impl TrialOutcome {
    pub fn err_total(&self) -> bool {
        self.err_msg_u1 || self.err_msg_u2
    }
}

/// Everything fixed for one block length.
pub(crate) struct Plan {
    table: UplinkTable,
    cfg: SimConfig,
    mode: CodebookMode,
    bits: (u32, u32),
    ts1: TypicalSet,
    ts2: TypicalSet,
    /// Joint `(y1, y2)` sampler per relay symbol.
    downlink: Vec<Sampler>,
    y2_size: usize,
    y1_size: usize,
    s1: Sampler,
    s2: Sampler,
    s0: Sampler,
    /// `P(f(x1, X2) = y0)` indexed `[x1][y0]`, and its mirror `[x2][y0]`.
    hit1: Vec<Vec<f64>>,
    hit2: Vec<Vec<f64>>,
    false_alarms: Mutex<HashMap<(Side, Vec<usize>), f64>>,
}

impl Plan {
    pub(crate) fn new(spec: &ChannelSpec, cfg: &SimConfig) -> Result<Self, SimError> {
        let table = spec.uplink.table()?;
        let bits = cfg.message_bits();
        let total_bits = bits.0 + bits.1;
        let work = 2f64.powi(total_bits as i32) * cfg.n as f64;
        let fits = total_bits <= cfg.bit_cap && work <= cfg.explicit_work_cap as f64;
        let mode = match cfg.mode {
            CodebookMode::Auto if fits => CodebookMode::Explicit,
            CodebookMode::Auto => CodebookMode::Implicit,
            CodebookMode::Explicit if !fits => {
                return Err(SimError::Budget(format!(
                    "explicit codebooks need {total_bits} message bits and {work:.0} symbol evaluations \
                     (caps: {} bits, {} evaluations); lower the rates or n, raise the caps, or use implicit mode",
                    cfg.bit_cap, cfg.explicit_work_cap
                )))
            }
            m => m,
        };
        let (j1, j2) = downlink_joints(&cfg.p0, &spec.downlink)?;
        let d = &spec.downlink;
        let downlink = (0..d.x0_size())
            .map(|x0| Pmf::new(d.slice(x0).to_vec()).map(|p| Sampler::new(&p)))
            .collect::<Result<_, _>>()?;
        let ny = table.y0_size();
        let mut hit1 = vec![vec![0.0; ny]; table.x1_size()];
        let mut hit2 = vec![vec![0.0; ny]; table.x2_size()];
        for a in 0..table.x1_size() {
            for b in 0..table.x2_size() {
                hit1[a][table.output(a, b)] += cfg.p2.get(b);
                hit2[b][table.output(a, b)] += cfg.p1.get(a);
            }
        }
        Ok(Self {
            ts1: TypicalSet::new(&j1, cfg.epsilon)?,
            ts2: TypicalSet::new(&j2, cfg.epsilon)?,
            s1: Sampler::new(&cfg.p1),
            s2: Sampler::new(&cfg.p2),
            s0: Sampler::new(&cfg.p0),
            downlink,
            y1_size: d.y1_size(),
            y2_size: d.y2_size(),
            table,
            cfg: cfg.clone(),
            mode,
            bits,
            hit1,
            hit2,
            false_alarms: Mutex::new(HashMap::new()),
        })
    }

    pub(crate) fn mode(&self) -> CodebookMode {
        self.mode
    }

    fn send_downlink(&self, x0: &[u8], rng: &mut impl Rng) -> (Vec<u8>, Vec<u8>) {
        let mut y1 = Vec::with_capacity(x0.len());
        let mut y2 = Vec::with_capacity(x0.len());
        for &s in x0 {
            let pair = self.downlink[s as usize].sample(rng);
            y1.push((pair / self.y2_size) as u8);
            y2.push((pair % self.y2_size) as u8);
        }
        (y1, y2)
    }

    /// Errors and the relay index size for one batch.
    pub(crate) fn run_batch(&self, src: RandomSource, trials: usize) -> Result<(ErrorCounts, Option<usize>), SimError> {
        let mut counts = ErrorCounts::default();
        match self.mode {
            CodebookMode::Implicit => {
                for t in 0..trials {
                    let mut rng = src.derive2(TRIALS, t as u64).rng();
                    counts.add(&self.implicit_trial(src, &mut rng)?);
                }
                Ok((counts, None))
            }
            _ => {
                let books = build_codebooks(&self.table, &self.cfg, src)?;
                for t in 0..trials {
                    let mut rng = src.derive2(TRIALS, t as u64).rng();
                    counts.add(&run_trial(self, &books, &mut rng));
                }
                Ok((counts, Some(books.index.m())))
            }
        }
    }

    fn false_alarm(&self, side: Side, y: &[u8]) -> Result<f64, SimError> {
        let (size, ts) = match side {
            Side::User1 => (self.y1_size, &self.ts1),
            Side::User2 => (self.y2_size, &self.ts2),
        };
        let mut counts = vec![0usize; size];
        for &b in y {
            counts[b as usize] += 1;
        }
        let key = (side, counts);
        if let Some(&p) = self.false_alarms.lock().expect("cache lock").get(&key) {
            return Ok(p);
        }
        let p = ts.false_alarm(self.cfg.p0.probs(), &key.1, self.cfg.type_budget as u128)?;
        self.false_alarms.lock().expect("cache lock").insert(key, p);
        Ok(p)
    }

    fn implicit_trial(&self, src: RandomSource, rng: &mut impl Rng) -> Result<TrialOutcome, SimError> {
        let n = self.cfg.n;
        let (k1, k2) = self.bits;
        let w1 = random_message(k1, rng);
        let w2 = random_message(k2, rng);
        let codeword = |tag: u64, key: u64, s: &Sampler| -> Vec<u8> {
            let mut r = src.derive2(tag, key).rng();
            (0..n).map(|_| s.sample(&mut r) as u8).collect()
        };
        let x1 = codeword(CB_USER1, limbs_key(&w1), &self.s1);
        let x2 = codeword(CB_USER2, limbs_key(&w2), &self.s2);
        let y0: Vec<u8> = x1
            .iter()
            .zip(&x2)
            .map(|(&a, &b)| self.table.output(a as usize, b as usize) as u8)
            .collect();
        let x0 = codeword(CB_RELAY, seq_key(&y0), &self.s0);
        let (y1, y2) = self.send_downlink(&x0, rng);

        // Competitors: every other message of the other user.
        let others = |bits: u32| 2f64.powi(bits as i32) - 1.0;
        let w0_error = |side: Side, y: &[u8], ts: &TypicalSet, competitors: f64, rng: &mut dyn rand::RngCore| {
            let truth = ts.contains(&x0, y);
            let pi = self.false_alarm(side, y)?;
            let wrong = rng.gen::<f64>() < any_of(competitors, pi);
            Ok::<bool, SimError>(!truth || wrong)
        };
        let err_w0_u1 = w0_error(Side::User1, &y1, &self.ts1, others(k2), rng)?;
        let err_w0_u2 = w0_error(Side::User2, &y2, &self.ts2, others(k1), rng)?;

        let collision = |own: &[u8], hit: &[Vec<f64>], competitors: f64, rng: &mut dyn rand::RngCore| {
            let log_rho: f64 = own.iter().zip(&y0).map(|(&a, &y)| hit[a as usize][y as usize].ln()).sum();
            rng.gen::<f64>() < any_of(competitors, log_rho.exp())
        };
        let c1 = collision(&x1, &self.hit1, others(k2), rng);
        let c2 = collision(&x2, &self.hit2, others(k1), rng);
        Ok(TrialOutcome {
            err_w0_u1,
            err_w0_u2,
            err_msg_u1: err_w0_u1 || c1,
            err_msg_u2: err_w0_u2 || c2,
        })
    }
}

/// `1 - (1 - p)^count`.
fn any_of(count: f64, p: f64) -> f64 {
    if count <= 0.0 || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    -(count * (-p).ln_1p()).exp_m1()
}

fn random_message(bits: u32, rng: &mut impl Rng) -> Vec<u64> {
    let limbs = bits.div_ceil(64) as usize;
    let mut w: Vec<u64> = (0..limbs).map(|_| rng.gen()).collect();
    if bits % 64 != 0 {
        if let Some(top) = w.last_mut() {
            *top &= (1u64 << (bits % 64)) - 1;
        }
    }
    w
}

fn limbs_key(limbs: &[u64]) -> u64 {
    limbs.iter().fold(limbs.len() as u64, |h, &l| mix64(h ^ l))
}

fn seq_key(seq: &[u8]) -> u64 {
    seq.chunks(8).fold(seq.len() as u64, |h, c| {
        let mut word = [0u8; 8];
        word[..c.len()].copy_from_slice(c);
        mix64(h ^ u64::from_le_bytes(word))
    })
}

/// One draw of all codebooks and the relay index.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchCodebooks {
    pub user1: Codebook,
    pub user2: Codebook,
    pub relay: Codebook,
    pub index: RelayIndex,
}

pub fn build_codebooks(table: &UplinkTable, cfg: &SimConfig, src: RandomSource) -> Result<BatchCodebooks, SimError> {
    let (k1, k2) = cfg.message_bits();
    if k1 + k2 > cfg.bit_cap {
        return Err(SimError::Budget(format!(
            "explicit codebooks need {} message bits, cap is {}",
            k1 + k2,
            cfg.bit_cap
        )));
    }
    let user1 = Codebook::generate(Node::User1, 1 << k1, cfg.n, &cfg.p1, src.derive(CB_USER1));
    let user2 = Codebook::generate(Node::User2, 1 << k2, cfg.n, &cfg.p2, src.derive(CB_USER2));
    let index = RelayIndex::build(&user1, &user2, table)?;
    let relay = Codebook::generate(Node::Relay, index.m(), cfg.n, &cfg.p0, src.derive(CB_RELAY));
    Ok(BatchCodebooks {
        user1,
        user2,
        relay,
        index,
    })
}

/// One transmission over explicit codebooks.
fn run_trial(plan: &Plan, books: &BatchCodebooks, rng: &mut impl Rng) -> TrialOutcome {
    let w1 = rng.gen_range(0..books.user1.num_words());
    let w2 = rng.gen_range(0..books.user2.num_words());
    let w0 = books.index.forward(w1, w2);
    let (y1, y2) = plan.send_downlink(books.relay.word(w0), rng);

    let at_user = |side: Side, own: usize, other: usize, y: &[u8], ts: &TypicalSet| {
        let cands = candidate_set(side, own, &books.index);
        match decode_w0(y, &books.relay, &cands, ts) {
            Ok(w) if w == w0 => (false, decode_message(side, w, own, &books.index) != Ok(other)),
            _ => (true, true),
        }
    };
    let (err_w0_u1, err_msg_u1) = at_user(Side::User1, w1, w2, &y1, &plan.ts1);
    let (err_w0_u2, err_msg_u2) = at_user(Side::User2, w2, w1, &y2, &plan.ts2);
    TrialOutcome {
        err_w0_u1,
        err_w0_u2,
        err_msg_u1,
        err_msg_u2,
    }
}
