//! Explicit random codebooks and the relay's index of uplink outputs.

use super::typical::TypicalSet;
use super::SimError;
use crate::channel::UplinkTable;
use crate::prob::{Pmf, RandomSource, Sampler};
use serde::Serialize;
use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    User1,
    User2,
    Relay,
}

/// `num_words` i.i.d. sequences of length `n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub owner: Node,
    pub n: usize,
    pub gen_pmf: Pmf,
    pub source: Option<RandomSource>,
    words: Vec<u8>,
}

impl Codebook {
    pub fn generate(owner: Node, num_words: usize, n: usize, gen_pmf: &Pmf, source: RandomSource) -> Self {
        let sampler = Sampler::new(gen_pmf);
        let mut rng = source.rng();
        let words = (0..num_words * n).map(|_| sampler.sample(&mut rng) as u8).collect();
        Self {
            owner,
            n,
            gen_pmf: gen_pmf.clone(),
            source: Some(source),
            words,
        }
    }

    /// A codebook with given words, all of length `n`.
    pub fn from_words(owner: Node, gen_pmf: &Pmf, words: &[Vec<u8>]) -> Result<Self, SimError> {
        let n = words.first().map_or(0, Vec::len);
        if words.iter().any(|w| w.len() != n) {
            return Err(SimError::Invalid("codewords differ in length".into()));
        }
        if words.iter().flatten().any(|&s| s as usize >= gen_pmf.len()) {
            return Err(SimError::Invalid("codeword symbol outside the alphabet".into()));
        }
        Ok(Self {
            owner,
            n,
            gen_pmf: gen_pmf.clone(),
            source: None,
            words: words.concat(),
        })
    }

    pub fn num_words(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.words.len() / self.n
        }
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i * self.n..(i + 1) * self.n]
    }
}

fn seq_hash(seq: &[u8]) -> u64 {
    let mut h = DefaultHasher::new();
    seq.hash(&mut h);
    h.finish()
}

/// The distinct uplink output sequences over all message pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayIndex {
    n: usize,
    n2: usize,
    forward: Vec<u32>,
    sequences: Vec<u8>,
}

impl RelayIndex {
    /// Indices are assigned in order of first appearance, scanning `w1`
    /// then `w2`; they are 0-based.
    pub fn build(cb1: &Codebook, cb2: &Codebook, u: &UplinkTable) -> Result<Self, SimError> {
        if cb1.n != cb2.n {
            return Err(SimError::Invalid("codebooks differ in block length".into()));
        }
        let n = cb1.n;
        let (n1, n2) = (cb1.num_words(), cb2.num_words());
        let mut forward = Vec::with_capacity(n1 * n2);
        let mut sequences: Vec<u8> = Vec::new();
        let mut seen: HashMap<u64, Vec<u32>> = HashMap::new();
        let mut y0 = vec![0u8; n];
        for a in 0..n1 {
            let x1 = cb1.word(a);
            for k in 0..n2 {
                let x2 = cb2.word(k);
                for t in 0..n {
                    y0[t] = u.output(x1[t] as usize, x2[t] as usize) as u8;
                }
                let bucket = seen.entry(seq_hash(&y0)).or_default();
                let found = bucket
                    .iter()
                    .copied()
                    .find(|&w| &sequences[w as usize * n..(w as usize + 1) * n] == y0.as_slice());
                let w0 = match found {
                    Some(w) => w,
                    None => {
                        let w = (sequences.len() / n.max(1)) as u32;
                        sequences.extend_from_slice(&y0);
                        bucket.push(w);
                        w
                    }
                };
                forward.push(w0);
            }
        }
        Ok(Self {
            n,
            n2,
            forward,
            sequences,
        })
    }

    /// Number of distinct uplink output sequences.
    pub fn m(&self) -> usize {
        if self.n == 0 {
            usize::from(!self.forward.is_empty())
        } else {
            self.sequences.len() / self.n
        }
    }

    pub fn forward(&self, w1: usize, w2: usize) -> usize {
        self.forward[w1 * self.n2 + w2] as usize
    }

    pub fn inverse(&self, w0: usize) -> &[u8] {
        &self.sequences[w0 * self.n..(w0 + 1) * self.n]
    }

    fn n1(&self) -> usize {
        self.forward.len() / self.n2.max(1)
    }
}

/// Which user is decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    User1,
    User2,
}

/// Relay indices consistent with the decoding user's own message: at user
/// 1 these are `{w0(own, k)}` over all `k`, and symmetrically at user 2.
/// Sorted and deduplicated.
pub fn candidate_set(side: Side, own: usize, idx: &RelayIndex) -> Vec<usize> {
    let mut s: Vec<usize> = match side {
        Side::User1 => (0..idx.n2).map(|k| idx.forward(own, k)).collect(),
        Side::User2 => (0..idx.n1()).map(|k| idx.forward(k, own)).collect(),
    };
    s.sort_unstable();
    s.dedup();
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(rename_all = "snake_case")]
pub enum DecodeFailure {
    #[error("no candidate passed")]
    None,
    #[error("more than one candidate passed")]
    Ambiguous,
}

/// The unique candidate whose relay codeword is jointly typical with `y`.
pub fn decode_w0(y: &[u8], relay: &Codebook, candidates: &[usize], ts: &TypicalSet) -> Result<usize, DecodeFailure> {
    let mut found = None;
    for &c in candidates {
        if ts.contains(relay.word(c), y) {
            if found.is_some() {
                return Err(DecodeFailure::Ambiguous);
            }
            found = Some(c);
        }
    }
    found.ok_or(DecodeFailure::None)
}

/// The unique other-user message `k` whose pairing with `own` produces the
/// uplink sequence of `w0`.
pub fn decode_message(side: Side, w0: usize, own: usize, idx: &RelayIndex) -> Result<usize, DecodeFailure> {
    let others = match side {
        Side::User1 => idx.n2,
        Side::User2 => idx.n1(),
    };
    let mut found = None;
    for k in 0..others {
        let w = match side {
            Side::User1 => idx.forward(own, k),
            Side::User2 => idx.forward(k, own),
        };
        if w == w0 {
            if found.is_some() {
                return Err(DecodeFailure::Ambiguous);
            }
            found = Some(k);
        }
    }
    found.ok_or(DecodeFailure::None)
}
