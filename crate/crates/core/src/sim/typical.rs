//! Weak joint typicality.

use super::SimError;
use crate::prob::JointPmf;

/// The weakly typical set of a two-axis joint `p(x, y)`.
///
/// A pair passes when `-(1/n) log2 p` is within `epsilon` of the entropy
/// for `x`, for `y` and for the pair.
#[derive(Debug, Clone)]
pub struct TypicalSet {
    nx: usize,
    ny: usize,
    log_x: Vec<f64>,
    log_y: Vec<f64>,
    log_xy: Vec<f64>,
    hx: f64,
    hy: f64,
    hxy: f64,
    epsilon: f64,
}

fn log2_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.log2()
    } else {
        f64::NEG_INFINITY
    }
}

impl TypicalSet {
    pub fn new(joint: &JointPmf, epsilon: f64) -> Result<Self, SimError> {
        if joint.ndim() != 2 {
            return Err(SimError::Invalid(format!("typical set needs a 2-axis joint, got {}", joint.ndim())));
        }
        let (nx, ny) = (joint.dims()[0], joint.dims()[1]);
        let px = joint.marginal_pmf(0)?;
        let py = joint.marginal_pmf(1)?;
        Ok(Self {
            nx,
            ny,
            log_x: px.probs().iter().map(|&p| log2_or_neg_inf(p)).collect(),
            log_y: py.probs().iter().map(|&p| log2_or_neg_inf(p)).collect(),
            log_xy: joint.probs().iter().map(|&p| log2_or_neg_inf(p)).collect(),
            hx: joint.entropy_of(&[0])?,
            hy: joint.entropy_of(&[1])?,
            hxy: joint.entropy_of(&[0, 1])?,
            epsilon,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn within(&self, log_sum: f64, n: usize, h: f64) -> bool {
        log_sum.is_finite() && (-log_sum / n as f64 - h).abs() <= self.epsilon
    }

    /// Marginal test for `y` alone.
    pub fn y_typical(&self, y: &[u8]) -> bool {
        let s: f64 = y.iter().map(|&b| self.log_y[b as usize]).sum();
        !y.is_empty() && self.within(s, y.len(), self.hy)
    }

    pub fn contains(&self, x: &[u8], y: &[u8]) -> bool {
        if x.len() != y.len() || x.is_empty() {
            return false;
        }
        let (mut sx, mut sy, mut sxy) = (0.0, 0.0, 0.0);
        for (&a, &b) in x.iter().zip(y) {
            let (a, b) = (a as usize, b as usize);
            if a >= self.nx || b >= self.ny {
                return false;
            }
            let l = self.log_xy[a * self.ny + b];
            if l == f64::NEG_INFINITY {
                return false;
            }
            sx += self.log_x[a];
            sy += self.log_y[b];
            sxy += l;
        }
        let n = x.len();
        self.within(sx, n, self.hx) && self.within(sy, n, self.hy) && self.within(sxy, n, self.hxy)
    }

    /// Probability that `X ~ p_x` i.i.d., drawn independently of a fixed
    /// `y` with symbol counts `y_counts`, lands in the typical set with `y`.
    ///
    /// Sums exactly over joint types, which costs the product over `y`
    /// symbols of the number of compositions of that symbol's count; more
    /// than `budget` types is an error.
    pub fn false_alarm(&self, p_x: &[f64], y_counts: &[usize], budget: u128) -> Result<f64, SimError> {
        let n: usize = y_counts.iter().sum();
        if n == 0 || y_counts.len() != self.ny || p_x.len() != self.nx {
            return Err(SimError::Invalid("false_alarm: shape mismatch".into()));
        }
        let sy: f64 = y_counts.iter().enumerate().map(|(b, &c)| c as f64 * self.log_y[b]).sum();
        if !self.within(sy, n, self.hy) {
            return Ok(0.0);
        }
        // Per y symbol, the x symbols that X can produce and that keep the
        // pair inside the support.
        let allowed: Vec<Vec<usize>> = (0..self.ny)
            .map(|b| {
                (0..self.nx)
                    .filter(|&a| p_x[a] > 0.0 && self.log_xy[a * self.ny + b].is_finite())
                    .collect()
            })
            .collect();
        let mut types: u128 = 1;
        for (b, &c) in y_counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if allowed[b].is_empty() {
                return Ok(0.0);
            }
            let k = allowed[b].len() as u128;
            types = types.saturating_mul(crate::prob::simplex_grid_count(k as usize, c));
        }
        if types > budget {
            return Err(SimError::Budget(format!(
                "false-alarm enumeration needs {types} joint types, budget is {budget}"
            )));
        }

        let mut ln_fact = vec![0.0f64; n + 1];
        for i in 1..=n {
            ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
        }
        let ln_px: Vec<f64> = p_x.iter().map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY }).collect();

        // Each y class contributes (ln prob, x log-sum, pair log-sum) per
        // conditional composition; classes combine by convolution.
        let mut acc: Vec<(f64, f64, f64)> = vec![(0.0, 0.0, 0.0)];
        for (b, &c) in y_counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let syms = &allowed[b];
            let mut class = Vec::new();
            let mut parts = vec![0usize; syms.len()];
            compositions(&mut parts, 0, c, &mut |parts| {
                let mut lp = ln_fact[c];
                let (mut lx, mut lxy) = (0.0, 0.0);
                for (&a, &k) in syms.iter().zip(parts.iter()) {
                    if k == 0 {
                        continue;
                    }
                    lp += k as f64 * ln_px[a] - ln_fact[k];
                    lx += k as f64 * self.log_x[a];
                    lxy += k as f64 * self.log_xy[a * self.ny + b];
                }
                class.push((lp, lx, lxy));
            });
            let mut next = Vec::with_capacity(acc.len() * class.len());
            for &(p0, x0, xy0) in &acc {
                for &(p1, x1, xy1) in &class {
                    next.push((p0 + p1, x0 + x1, xy0 + xy1));
                }
            }
            acc = next;
        }
        let total: f64 = acc
            .iter()
            .filter(|&&(_, lx, lxy)| self.within(lx, n, self.hx) && self.within(lxy, n, self.hxy))
            .map(|&(lp, _, _)| lp.exp())
            .sum();
        Ok(total.min(1.0))
    }
}

fn compositions(parts: &mut [usize], axis: usize, remaining: usize, f: &mut impl FnMut(&[usize])) {
    if axis + 1 == parts.len() {
        parts[axis] = remaining;
        f(parts);
        return;
    }
    for k in 0..=remaining {
        parts[axis] = k;
        compositions(parts, axis + 1, remaining - k, f);
    }
}

/// One-shot form of [`TypicalSet::contains`].
pub fn jointly_typical(x: &[u8], y: &[u8], joint: &JointPmf, epsilon: f64) -> Result<bool, SimError> {
    Ok(TypicalSet::new(joint, epsilon)?.contains(x, y))
}
