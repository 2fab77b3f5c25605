//! The uplink side: rectangles, their convex hull and time sharing.

use super::geometry::{pareto_hull, region_contains};
use super::{
    CertifiedVertex, RatePoint, RegionError, RegionKind, RegionPolyline, TimeShare, TimeShareComponent, CERT_TOLERANCE,
};
use crate::channel::{stochastic_uplink_joint, uplink_joint, ChannelError, StochasticUplink, UplinkTable, DEFAULT_ALPHABET_CAP};
use crate::prob::{entropy_bits, simplex_grid_capped, simplex_grid_count, Pmf, RandomSource};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `(H(Y0 | X2), H(Y0 | X1))` for independent inputs.
pub fn uplink_rectangle(p1: &Pmf, p2: &Pmf, u: &UplinkTable) -> Result<RatePoint, RegionError> {
    let j = uplink_joint(p1, p2, u)?;
    Ok(RatePoint::new(
        j.conditional_entropy_of(&[2], &[1])?,
        j.conditional_entropy_of(&[2], &[0])?,
    ))
}

/// `(I(X1; Y0 | X2), I(X2; Y0 | X1))` for independent inputs.
pub fn general_rectangle(p1: &Pmf, p2: &Pmf, u: &StochasticUplink) -> Result<RatePoint, RegionError> {
    let j = stochastic_uplink_joint(p1, p2, u)?;
    Ok(RatePoint::new(
        j.mutual_information_of(&[0], &[2], &[1])?.max(0.0),
        j.mutual_information_of(&[1], &[2], &[0])?.max(0.0),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    /// Grid step is `1 / resolution` on each input simplex.
    pub resolution: usize,
    /// Largest grid per simplex before switching to random sampling.
    pub max_grid_points: usize,
    /// Largest number of `(p1, p2)` pairs evaluated.
    pub max_pairs: u64,
    /// Seed for the sampled fallback.
    pub sample_seed: u64,
    pub alphabet_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            resolution: 64,
            max_grid_points: 1_000_000,
            max_pairs: 50_000_000,
            sample_seed: 0,
            alphabet_cap: DEFAULT_ALPHABET_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremePoints {
    pub r0: CertifiedVertex,
    pub r1max: CertifiedVertex,
    pub r2max: CertifiedVertex,
}

/// Input pmf on `size` symbols giving equal mass to each class of `class_of`
/// (split equally inside a class), with `k` classes.
fn class_uniform(classes: &[usize]) -> Pmf {
    let mut counts = std::collections::BTreeMap::new();
    for &c in classes {
        *counts.entry(c).or_insert(0usize) += 1;
    }
    let k = counts.len() as f64;
    Pmf::normalized(classes.iter().map(|c| 1.0 / (k * counts[c] as f64)).collect())
        .expect("class weights are positive")
}

fn distinct(values: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = values.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn check_cap(u: &UplinkTable, cap: usize) -> Result<(), RegionError> {
    for (which, size) in [("X1", u.x1_size()), ("X2", u.x2_size()), ("Y0", u.y0_size())] {
        if size > cap {
            return Err(ChannelError::AlphabetTooLarge { which, size, cap }.into());
        }
    }
    Ok(())
}

/// The corner points `r0 = (0, 0)`, `r1max` on the `r1` axis and `r2max` on
/// the `r2` axis. With `x2` fixed, `H(Y0 | X2 = x2)` is largest when `X1`
/// spreads uniformly over the distinct outputs of row `x2`.
pub fn extreme_points(u: &UplinkTable) -> Result<ExtremePoints, RegionError> {
    let (n1, n2) = (u.x1_size(), u.x2_size());
    let r0 = {
        let (p1, p2) = (Pmf::point_mass(n1, 0), Pmf::point_mass(n2, 0));
        CertifiedVertex::uplink(uplink_rectangle(&p1, &p2, u)?, p1, p2)
    };

    let best_x2 = (0..n2)
        .map(|x2| distinct((0..n1).map(|x1| u.output(x1, x2))))
        .enumerate()
        .fold((0, 0), |b, (i, k)| if k > b.1 { (i, k) } else { b })
        .0;
    let p1 = class_uniform(&(0..n1).map(|x1| u.output(x1, best_x2)).collect::<Vec<_>>());
    let p2 = Pmf::point_mass(n2, best_x2);
    let r1max = CertifiedVertex::uplink(uplink_rectangle(&p1, &p2, u)?, p1, p2);

    let best_x1 = (0..n1)
        .map(|x1| distinct((0..n2).map(|x2| u.output(x1, x2))))
        .enumerate()
        .fold((0, 0), |b, (i, k)| if k > b.1 { (i, k) } else { b })
        .0;
    let p2 = class_uniform(&(0..n2).map(|x2| u.output(best_x1, x2)).collect::<Vec<_>>());
    let p1 = Pmf::point_mass(n1, best_x1);
    let r2max = CertifiedVertex::uplink(uplink_rectangle(&p1, &p2, u)?, p1, p2);

    Ok(ExtremePoints { r0, r1max, r2max })
}

/// Seeded Dirichlet(1) samples plus the simplex vertices and the uniform pmf.
fn sampled_simplex(dim: usize, count: usize, src: RandomSource) -> Vec<Pmf> {
    let mut out: Vec<Pmf> = (0..dim).map(|i| Pmf::point_mass(dim, i)).collect();
    out.push(Pmf::uniform(dim));
    let mut rng = src.rng();
    while out.len() < count.max(dim + 1) {
        let w: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        if let Ok(p) = Pmf::normalized(w) {
            out.push(p);
        }
    }
    out
}

fn search_set(dim: usize, cfg: &SearchConfig, other: u128, src: RandomSource) -> Result<Vec<Pmf>, RegionError> {
    let count = simplex_grid_count(dim, cfg.resolution);
    if count <= cfg.max_grid_points as u128 {
        return Ok(simplex_grid_capped(dim, cfg.resolution, cfg.max_grid_points)?);
    }
    let room = (cfg.max_pairs as u128 / other.max(1)).min(cfg.max_grid_points as u128) as usize;
    Ok(sampled_simplex(dim, room, src))
}

/// `H(f(X, y))` for every fixed value of the other input, `X ~ p`.
fn pushforward_entropies(p: &Pmf, outputs: &[Vec<usize>], y0_size: usize, scratch: &mut [f64]) -> Vec<f64> {
    outputs
        .iter()
        .map(|row| {
            scratch[..y0_size].iter_mut().for_each(|s| *s = 0.0);
            for (x, &y) in row.iter().enumerate() {
                scratch[y] += p.get(x);
            }
            entropy_bits(&scratch[..y0_size])
        })
        .collect()
}

/// Inner approximation of the convex hull of all rectangles
/// `[0, H(Y0|X2)] x [0, H(Y0|X1)]` over product inputs from the search set.
///
/// Each vertex is re-evaluated from its certificate, so certificates
/// reproduce their points to rounding error.
pub fn conv_r1(u: &UplinkTable, cfg: &SearchConfig) -> Result<RegionPolyline, RegionError> {
    check_cap(u, cfg.alphabet_cap)?;
    let (n1, n2, ny) = (u.x1_size(), u.x2_size(), u.y0_size());
    let src = RandomSource::new(cfg.sample_seed, 0x5ea7c4);
    let c2 = simplex_grid_count(n2, cfg.resolution).min(cfg.max_grid_points as u128);
    let g1 = search_set(n1, cfg, c2, src.derive(1))?;
    let g2 = search_set(n2, cfg, g1.len() as u128, src.derive(2))?;
    let pairs = g1.len() as u128 * g2.len() as u128;
    if pairs > cfg.max_pairs as u128 {
        return Err(RegionError::BudgetExceeded {
            what: "uplink search".into(),
            needed: pairs,
            budget: cfg.max_pairs as u128,
        });
    }

    // Column x2 of the table, as a function of x1; and row x1, of x2.
    let by_x2: Vec<Vec<usize>> = (0..n2).map(|x2| (0..n1).map(|x1| u.output(x1, x2)).collect()).collect();
    let by_x1: Vec<Vec<usize>> = (0..n1).map(|x1| (0..n2).map(|x2| u.output(x1, x2)).collect()).collect();
    let h1: Vec<Vec<f64>> = g1
        .par_iter()
        .map(|p| pushforward_entropies(p, &by_x2, ny, &mut vec![0.0; ny]))
        .collect();
    let h2: Vec<Vec<f64>> = g2
        .par_iter()
        .map(|p| pushforward_entropies(p, &by_x1, ny, &mut vec![0.0; ny]))
        .collect();

    let chunk_hulls: Vec<Vec<(RatePoint, (usize, usize))>> = (0..g1.len())
        .into_par_iter()
        .map(|i| {
            let pts: Vec<(RatePoint, (usize, usize))> = (0..g2.len())
                .map(|j| {
                    let r1: f64 = (0..n2).map(|x2| g2[j].get(x2) * h1[i][x2]).sum();
                    let r2: f64 = (0..n1).map(|x1| g1[i].get(x1) * h2[j][x1]).sum();
                    (RatePoint::new(r1, r2), (i, j))
                })
                .collect();
            pareto_hull(&pts, true)
        })
        .collect();

    let ext = extreme_points(u)?;
    let mut cands: Vec<(RatePoint, Option<(usize, usize)>, Option<CertifiedVertex>)> = [&ext.r0, &ext.r1max, &ext.r2max]
        .into_iter()
        .map(|v| (v.point, None, Some(v.clone())))
        .collect();
    cands.extend(chunk_hulls.into_iter().flatten().map(|(p, ij)| (p, Some(ij), None)));
    let tagged: Vec<(RatePoint, usize)> = cands.iter().enumerate().map(|(k, c)| (c.0, k)).collect();
    let hull = pareto_hull(&tagged, true);

    let vertices = hull
        .into_iter()
        .map(|(_, k)| match &cands[k] {
            (_, _, Some(v)) => Ok(v.clone()),
            (_, Some((i, j)), None) => {
                let (p1, p2) = (g1[*i].clone(), g2[*j].clone());
                Ok(CertifiedVertex::uplink(uplink_rectangle(&p1, &p2, u)?, p1, p2))
            }
            _ => unreachable!("every candidate has a certificate"),
        })
        .collect::<Result<Vec<_>, RegionError>>()?;
    Ok(RegionPolyline {
        kind: RegionKind::ConvR1,
        vertices,
        resolution: cfg.resolution,
        max_gap: None,
    })
}

fn r0_component(region: &RegionPolyline, weight: f64) -> Option<TimeShareComponent> {
    let ts = region.vertices.iter().find_map(|v| v.uplink.as_ref())?;
    let c = ts.components.first()?;
    Some(TimeShareComponent {
        weight,
        p1: Pmf::point_mass(c.p1.len(), 0),
        p2: Pmf::point_mass(c.p2.len(), 0),
    })
}

fn vertex_components(region: &RegionPolyline, idx: usize, weight: f64) -> Vec<TimeShareComponent> {
    region.vertices[idx]
        .uplink
        .as_ref()
        .map(|t| t.scaled(weight).collect())
        .unwrap_or_default()
}

/// Writes `target` as a time share of at most three certified rectangles:
/// the two ends of the boundary edge hit by the ray from the origin, plus
/// the origin rectangle for interior targets.
///
/// The origin rectangle uses point-mass inputs, which is `(0, 0)` for any
/// deterministic uplink.
pub fn decompose_time_sharing(target: &RatePoint, region: &RegionPolyline) -> Result<TimeShare, RegionError> {
    let outside = || RegionError::PointOutsideRegion {
        r1: target.r1,
        r2: target.r2,
    };
    if region.vertices.is_empty() {
        return Err(RegionError::EmptyRegion);
    }
    if !(target.r1.is_finite() && target.r2.is_finite()) || target.r1 < 0.0 || target.r2 < 0.0 {
        return Err(RegionError::InvalidPoint {
            r1: target.r1,
            r2: target.r2,
        });
    }
    if !region_contains(region, target, CERT_TOLERANCE) {
        return Err(outside());
    }
    if target.r1 <= CERT_TOLERANCE * 1e-3 && target.r2 <= CERT_TOLERANCE * 1e-3 {
        let c = r0_component(region, 1.0).ok_or_else(outside)?;
        return Ok(TimeShare { components: vec![c] });
    }

    // Exact vertex hit.
    if let Some(i) = region.vertices.iter().position(|v| v.point.distance(target) <= 1e-12) {
        return Ok(TimeShare {
            components: vertex_components(region, i, 1.0),
        });
    }

    let (beta, seg, mu) = region.ray_hit(*target).ok_or_else(outside)?;
    // Boundary targets within tolerance are pulled onto the boundary.
    let beta = beta.max(1.0);
    let mut components = Vec::with_capacity(3);
    if region.vertices.len() == 1 {
        components.extend(vertex_components(region, 0, 1.0 / beta));
    } else {
        let (wa, wb) = ((1.0 - mu) / beta, mu / beta);
        if wa > 0.0 {
            components.extend(vertex_components(region, seg, wa));
        }
        if wb > 0.0 {
            components.extend(vertex_components(region, seg + 1, wb));
        }
    }
    let rest = 1.0 - 1.0 / beta;
    if rest > 0.0 {
        components.extend(r0_component(region, rest));
    }
    if components.is_empty() {
        return Err(outside());
    }
    Ok(TimeShare { components })
}
