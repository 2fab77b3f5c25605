//! The downlink side: the Pareto frontier of `(I(X0; Y2), I(X0; Y1))`.

use super::geometry::pareto_hull;
use super::{CertifiedVertex, RatePoint, RegionError, RegionKind, RegionPolyline};
use crate::channel::{downlink_joints, ChannelError, DownlinkChannel, DEFAULT_ALPHABET_CAP};
use crate::prob::{mutual_information, simplex_grid_capped, Pmf};
use serde::{Deserialize, Serialize};

/// `(I(X0; Y2), I(X0; Y1))`: user 1's message reaches user 2 over leg 2.
pub fn downlink_rates(p0: &Pmf, d: &DownlinkChannel) -> Result<RatePoint, RegionError> {
    let (j1, j2) = downlink_joints(p0, d)?;
    Ok(RatePoint::new(
        mutual_information(&j2)?.max(0.0),
        mutual_information(&j1)?.max(0.0),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub lambda_steps: usize,
    /// Ascent iterations per start.
    pub max_iters: usize,
    /// Stop once the duality gap bound falls below this.
    pub gap_tol: f64,
    pub alphabet_cap: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lambda_steps: 257,
            max_iters: 20_000,
            gap_tol: 1e-10,
            alphabet_cap: DEFAULT_ALPHABET_CAP,
        }
    }
}

const MAX_LAMBDA_STEPS: usize = 1 << 16;
const LAMBDA_CLAMP: f64 = 1e-6;
const MAX_STEP: f64 = 16.0;
const MIN_STEP: f64 = 1e-12;
/// Relative size of rounding noise in objective values.
const VALUE_NOISE: f64 = 1e-14;

/// `I(p; W)` in bits and the divergences `D(W_x || pW)`.
fn info_and_divergences(p: &[f64], w: &[Vec<f64>], q: &mut [f64], div: &mut [f64]) -> f64 {
    q.iter_mut().for_each(|v| *v = 0.0);
    for (px, row) in p.iter().zip(w) {
        for (qy, wy) in q.iter_mut().zip(row) {
            *qy += px * wy;
        }
    }
    for (dx, row) in div.iter_mut().zip(w) {
        *dx = row
            .iter()
            .zip(q.iter())
            .filter(|(&wy, _)| wy > 0.0)
            .map(|(&wy, &qy)| wy * (wy / qy.max(1e-300)).log2())
            .sum();
    }
    p.iter().zip(div.iter()).map(|(a, b)| a * b).sum()
}

struct Scalarized<'a> {
    lambda: f64,
    w1: &'a [Vec<f64>],
    w2: &'a [Vec<f64>],
}

struct Eval {
    value: f64,
    grad: Vec<f64>,
}

impl Scalarized<'_> {
    fn eval(&self, p: &[f64]) -> Eval {
        let n = p.len();
        let (mut q1, mut q2) = (vec![0.0; self.w1[0].len()], vec![0.0; self.w2[0].len()]);
        let (mut d1, mut d2) = (vec![0.0; n], vec![0.0; n]);
        let i1 = info_and_divergences(p, self.w1, &mut q1, &mut d1);
        let i2 = info_and_divergences(p, self.w2, &mut q2, &mut d2);
        let grad = (0..n).map(|x| self.lambda * d2[x] + (1.0 - self.lambda) * d1[x]).collect();
        Eval {
            value: self.lambda * i2 + (1.0 - self.lambda) * i1,
            grad,
        }
    }

    /// Upper bound on the distance to the optimum, from concavity.
    fn gap(p: &[f64], e: &Eval) -> f64 {
        let best = e.grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        best - p.iter().zip(&e.grad).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Exponentiated-gradient ascent with step backtracking. Returns the
    /// final point, its value and its gap bound.
    ///
    /// Close to the optimum the objective moves by less than its rounding
    /// noise while the gap is still first order, so there a step is judged
    /// by the gap instead.
    fn maximize(&self, start: Vec<f64>, cfg: &SweepConfig) -> (Vec<f64>, f64, f64) {
        let mut p = start;
        let mut e = self.eval(&p);
        let mut gap = Self::gap(&p, &e);
        let mut eta: f64 = 1.0;
        for _ in 0..cfg.max_iters {
            if gap <= cfg.gap_tol {
                break;
            }
            let noise = VALUE_NOISE * e.value.abs().max(1.0);
            let top = e.grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut accepted = false;
            while eta > MIN_STEP {
                let mut next: Vec<f64> = p
                    .iter()
                    .zip(&e.grad)
                    .map(|(pi, gi)| pi * (eta * (gi - top)).exp2())
                    .collect();
                let s: f64 = next.iter().sum();
                next.iter_mut().for_each(|v| *v /= s);
                let ne = self.eval(&next);
                let ngap = Self::gap(&next, &ne);
                if ne.value > e.value + noise || (ne.value >= e.value - noise && ngap < gap) {
                    p = next;
                    e = ne;
                    gap = ngap;
                    accepted = true;
                    eta = (eta * 2.0).min(MAX_STEP);
                    break;
                }
                eta /= 2.0;
            }
            if !accepted {
                break;
            }
        }
        (p, e.value, gap)
    }
}

/// The uniform pmf and a coarse grid pulled a tenth of the way to uniform.
fn seeds(n: usize) -> Vec<Vec<f64>> {
    let u = 1.0 / n as f64;
    let mut out = vec![vec![u; n]];
    let res = if n <= 4 { 4 } else { 1 };
    if let Ok(grid) = simplex_grid_capped(n, res, 4096) {
        out.extend(grid.iter().map(|g| g.probs().iter().map(|v| 0.9 * v + 0.1 * u).collect()));
    }
    out
}

/// Traces the frontier by maximizing `λ I(X0; Y2) + (1 - λ) I(X0; Y1)` over
/// `p(x0)` for evenly spaced `λ`. The objective is concave in `p(x0)`; each
/// maximizer stops on a duality-gap bound, and the largest bound left is
/// reported in `max_gap`.
pub fn r2_frontier(d: &DownlinkChannel, cfg: &SweepConfig) -> Result<RegionPolyline, RegionError> {
    for (which, size) in [("X0", d.x0_size()), ("Y1", d.y1_size()), ("Y2", d.y2_size())] {
        if size > cfg.alphabet_cap {
            return Err(ChannelError::AlphabetTooLarge {
                which,
                size,
                cap: cfg.alphabet_cap,
            }
            .into());
        }
    }
    if cfg.lambda_steps > MAX_LAMBDA_STEPS {
        return Err(RegionError::BudgetExceeded {
            what: "downlink sweep lambda steps".into(),
            needed: cfg.lambda_steps as u128,
            budget: MAX_LAMBDA_STEPS as u128,
        });
    }
    let steps = cfg.lambda_steps.max(2);
    let (w1, w2) = (d.leg1(), d.leg2());
    let grid = seeds(d.x0_size());
    let lambda_at = |k: usize| (k as f64 / (steps - 1) as f64).clamp(LAMBDA_CLAMP, 1.0 - LAMBDA_CLAMP);

    // Start in the middle and walk out to both ends, warm-starting each
    // step from its neighbour. A grid seed that already beats the warm
    // start gets its own ascent.
    let mid = (steps - 1) / 2;
    let order: Vec<(usize, Option<usize>)> = std::iter::once((mid, None))
        .chain((mid + 1..steps).map(|k| (k, Some(k - 1))))
        .chain((0..mid).rev().map(|k| (k, Some(k + 1))))
        .collect();
    let mut solved: Vec<Option<(Vec<f64>, f64)>> = vec![None; steps];
    for (k, from) in order {
        let obj = Scalarized {
            lambda: lambda_at(k),
            w1: &w1,
            w2: &w2,
        };
        let best_seed = grid
            .iter()
            .map(|g| (obj.eval(g).value, g))
            .fold(None, |b: Option<(f64, &Vec<f64>)>, c| match b {
                Some(b) if b.0 >= c.0 => Some(b),
                _ => Some(c),
            })
            .map(|(_, g)| g.clone())
            .expect("seed set is never empty");
        let mut result = None;
        if let Some(prev) = from.and_then(|f| solved[f].as_ref()) {
            result = Some(obj.maximize(prev.0.clone(), cfg));
        }
        let seed_better = result.as_ref().is_none_or(|r| obj.eval(&best_seed).value > r.1);
        if seed_better {
            let alt = obj.maximize(best_seed, cfg);
            if result.as_ref().is_none_or(|r| alt.1 > r.1) {
                result = Some(alt);
            }
        }
        let (p, _, gap) = result.expect("one ascent always runs");
        solved[k] = Some((p, gap));
    }
    let solved: Vec<(Vec<f64>, f64)> = solved.into_iter().map(|s| s.expect("every step solved")).collect();

    let max_gap = solved.iter().map(|s| s.1).fold(0.0, f64::max);
    let mut cands = Vec::with_capacity(solved.len());
    for (p, _) in solved {
        let p0 = Pmf::normalized(p)?;
        cands.push((downlink_rates(&p0, d)?, p0));
    }
    let vertices = pareto_hull(&cands, false)
        .into_iter()
        .map(|(pt, p0)| CertifiedVertex::downlink(pt, p0))
        .collect();
    Ok(RegionPolyline {
        kind: RegionKind::R2Frontier,
        vertices,
        resolution: steps,
        max_gap: Some(max_gap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::builtin_channel;

    fn downlink(name: &str) -> DownlinkChannel {
        builtin_channel(name).unwrap().downlink
    }

    #[test]
    fn rates_examples() {
        let d = downlink("xor+noiseless");
        assert_eq!(downlink_rates(&Pmf::uniform(2), &d).unwrap(), RatePoint::new(1.0, 1.0));
        let d = downlink("noiseless-orthogonal");
        let r = downlink_rates(&Pmf::uniform(4), &d).unwrap();
        assert!(r.distance(&RatePoint::new(1.0, 1.0)) < 1e-12);
    }

    #[test]
    fn noiseless_frontier_is_one_point() {
        let f = r2_frontier(&downlink("xor+noiseless"), &SweepConfig::default()).unwrap();
        assert_eq!(f.vertices.len(), 1);
        assert!(f.vertices[0].point.distance(&RatePoint::new(1.0, 1.0)) < 1e-9);
    }

    #[test]
    fn orthogonal_frontier_reaches_unit_corner() {
        let f = r2_frontier(&downlink("noiseless-orthogonal"), &SweepConfig::default()).unwrap();
        assert!(f.points().iter().any(|p| p.distance(&RatePoint::new(1.0, 1.0)) < 1e-6));
    }

    #[test]
    fn bsc_frontier_corner() {
        let d = downlink("bsc-broadcast(0.1)");
        let f = r2_frontier(&d, &SweepConfig::default()).unwrap();
        let best = f.max_sum_vertex().unwrap().point;
        assert!((best.r1 - 0.5310).abs() < 1e-3 && (best.r2 - 0.5310).abs() < 1e-3, "{best}");
        assert!(f.max_gap.unwrap() <= 1e-9);
        assert!(f.certificate_error(&builtin_channel("xor").unwrap().uplink.table().unwrap(), &d).unwrap() < 1e-9);
    }

    #[test]
    fn asymmetric_frontier_is_concave() {
        // Leg 1 a BSC(0.05), leg 2 a Z-channel: the maximizers differ.
        let w1 = vec![vec![0.95, 0.05], vec![0.05, 0.95]];
        let w2 = vec![vec![1.0, 0.0], vec![0.4, 0.6]];
        let d = DownlinkChannel::independent_legs(&w1, &w2).unwrap();
        let f = r2_frontier(&d, &SweepConfig::default()).unwrap();
        assert!(f.vertices.len() > 3);
        f.check_shape().unwrap();
    }
}
