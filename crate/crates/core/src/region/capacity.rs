//! The capacity region and the single-letter inner region built from
//! triples `(p1, p2, p0)`.

use super::geometry::{intersect_regions, pareto_hull};
use super::{
    conv_r1, decompose_time_sharing, downlink_rates, extreme_points, r2_frontier, uplink_rectangle, CertifiedVertex,
    RatePoint, RegionError, RegionKind, RegionPolyline, RelayMix, SearchConfig, SweepConfig, TimeShare,
};
use crate::channel::ChannelSpec;
use crate::prob::{simplex_grid_capped, Pmf};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegionConfig {
    pub search: SearchConfig,
    pub sweep: SweepConfig,
    /// Grid resolution of the `(p1, p2)` search for the triple-based region.
    pub r4_resolution: usize,
}

impl Default for RegionConfig {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            sweep: SweepConfig::default(),
            r4_resolution: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityLayers {
    pub conv_r1: RegionPolyline,
    pub r2_frontier: RegionPolyline,
    pub capacity: RegionPolyline,
}

/// Both constituent regions and their intersection.
///
/// Capacity vertices carry an exact time share of at most three uplink
/// rectangles and a relay mixture whose rates dominate the vertex.
pub fn capacity_layers(spec: &ChannelSpec, cfg: &RegionConfig) -> Result<CapacityLayers, RegionError> {
    let table = spec.uplink.table()?;
    spec.check_alphabet_cap(cfg.search.alphabet_cap.max(cfg.sweep.alphabet_cap))?;
    let conv = conv_r1(&table, &cfg.search)?;
    let front = r2_frontier(&spec.downlink, &cfg.sweep)?;
    let mut cap = intersect_regions(&conv, &front);
    cap.kind = RegionKind::Capacity;
    cap.resolution = conv.resolution;
    for v in &mut cap.vertices {
        v.uplink = Some(decompose_time_sharing(&v.point, &conv)?);
    }
    Ok(CapacityLayers {
        conv_r1: conv,
        r2_frontier: front,
        capacity: cap,
    })
}

pub fn capacity_region(spec: &ChannelSpec, cfg: &RegionConfig) -> Result<RegionPolyline, RegionError> {
    Ok(capacity_layers(spec, cfg)?.capacity)
}

/// Componentwise minimum of the uplink rectangle and `(I(X0; Y2), I(X0; Y1))`.
pub fn r4_point(p1: &Pmf, p2: &Pmf, p0: &Pmf, spec: &ChannelSpec) -> Result<RatePoint, RegionError> {
    let table = spec.uplink.table()?;
    Ok(uplink_rectangle(p1, p2, &table)?.min(&downlink_rates(p0, &spec.downlink)?))
}

/// Hull of [`r4_point`] over grid inputs `(p1, p2)` at `cfg.r4_resolution`
/// and the relay inputs certifying the downlink frontier.
pub fn r4_hull(spec: &ChannelSpec, cfg: &RegionConfig) -> Result<RegionPolyline, RegionError> {
    let table = spec.uplink.table()?;
    spec.check_alphabet_cap(cfg.search.alphabet_cap.max(cfg.sweep.alphabet_cap))?;
    let front = r2_frontier(&spec.downlink, &cfg.sweep)?;
    let relays: Vec<(Pmf, RatePoint)> = front
        .vertices
        .iter()
        .filter_map(|v| v.downlink.as_ref())
        .map(|m| {
            let p0 = m.components[0].1.clone();
            downlink_rates(&p0, &spec.downlink).map(|r| (p0, r))
        })
        .collect::<Result<_, _>>()?;

    let cap = cfg.search.max_grid_points;
    let g1 = simplex_grid_capped(table.x1_size(), cfg.r4_resolution, cap)?;
    let g2 = simplex_grid_capped(table.x2_size(), cfg.r4_resolution, cap)?;
    let mut inputs: Vec<(Pmf, Pmf)> = g1
        .iter()
        .flat_map(|a| g2.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let ext = extreme_points(&table)?;
    for v in [&ext.r0, &ext.r1max, &ext.r2max] {
        let c = &v.uplink.as_ref().expect("extreme points are certified").components[0];
        inputs.push((c.p1.clone(), c.p2.clone()));
    }
    let needed = inputs.len() as u128 * relays.len() as u128;
    if needed > cfg.search.max_pairs as u128 {
        return Err(RegionError::BudgetExceeded {
            what: "triple search".into(),
            needed,
            budget: cfg.search.max_pairs as u128,
        });
    }

    let chunks: Vec<Vec<(RatePoint, (usize, usize))>> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, (p1, p2))| {
            let rect = uplink_rectangle(p1, p2, &table)?;
            let pts: Vec<(RatePoint, (usize, usize))> = relays
                .iter()
                .enumerate()
                .map(|(k, (_, r))| (rect.min(r), (i, k)))
                .collect();
            Ok(pareto_hull(&pts, true))
        })
        .collect::<Result<_, RegionError>>()?;
    let all: Vec<(RatePoint, (usize, usize))> = chunks.into_iter().flatten().collect();
    let vertices = pareto_hull(&all, true)
        .into_iter()
        .map(|(point, (i, k))| CertifiedVertex {
            point,
            uplink: Some(TimeShare::single(inputs[i].0.clone(), inputs[i].1.clone())),
            downlink: Some(RelayMix::single(relays[k].0.clone())),
        })
        .collect();
    Ok(RegionPolyline {
        kind: RegionKind::R4Hull,
        vertices,
        resolution: cfg.r4_resolution,
        max_gap: front.max_gap,
    })
}
