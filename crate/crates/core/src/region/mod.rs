//! Rate regions in the `(R1, R2)` plane.
//!
//! Every region here is downward closed, convex, and stored as its
//! upper-right boundary: a polyline ordered by non-decreasing `r1` with
//! non-increasing `r2`. The region is the union of the boxes `[0, v]` over
//! points `v` of the polyline. Each vertex carries the input distributions
//! that achieve (or, for intersections, dominate) it.

mod capacity;
mod cf;
mod downlink;
mod geometry;
mod output;
mod uplink;

pub use capacity::{capacity_layers, capacity_region, r4_hull, r4_point, CapacityLayers, RegionConfig};
pub use cf::{cf_evaluate, CfEvaluation, CfInput, CF_Q_BOUND};
pub use downlink::{downlink_rates, r2_frontier, SweepConfig};
pub use geometry::{boundary_hausdorff, intersect_regions, region_contains};
pub use output::{parse_region_csv, region_csv, regions_svg};
pub use uplink::{
    conv_r1, decompose_time_sharing, extreme_points, general_rectangle, uplink_rectangle, ExtremePoints, SearchConfig,
};

use crate::channel::{ChannelError, DownlinkChannel, UplinkTable};
use crate::prob::{Pmf, ProbError};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Tolerance used when re-evaluating a certificate.
pub const CERT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error("{what} needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { what: String, needed: u128, budget: u128 },
    #[error("point ({r1}, {r2}) lies outside the region")]
    PointOutsideRegion { r1: f64, r2: f64 },
    #[error("{what} has {size} symbols, bound is {bound}")]
    Cardinality { what: String, size: usize, bound: usize },
    #[error("region has no vertices")]
    EmptyRegion,
    #[error("rate point ({r1}, {r2}) must be finite and non-negative")]
    InvalidPoint { r1: f64, r2: f64 },
    #[error("region csv line {line}: {message}")]
    Csv { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub const ORIGIN: RatePoint = RatePoint { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    /// Checked constructor for user-supplied rates.
    pub fn try_new(r1: f64, r2: f64) -> Result<Self, RegionError> {
        if r1.is_finite() && r2.is_finite() && r1 >= 0.0 && r2 >= 0.0 {
            Ok(Self { r1, r2 })
        } else {
            Err(RegionError::InvalidPoint { r1, r2 })
        }
    }

    pub fn distance(&self, other: &RatePoint) -> f64 {
        (self.r1 - other.r1).hypot(self.r2 - other.r2)
    }

    /// Componentwise `self >= other - tol`.
    pub fn dominates(&self, other: &RatePoint, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol
    }

    pub fn min(&self, other: &RatePoint) -> RatePoint {
        RatePoint::new(self.r1.min(other.r1), self.r2.min(other.r2))
    }
}

impl fmt::Display for RatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6})", self.r1, self.r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    ConvR1,
    R2Frontier,
    Capacity,
    R4Hull,
}

impl RegionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionKind::ConvR1 => "conv_r1",
            RegionKind::R2Frontier => "r2_frontier",
            RegionKind::Capacity => "capacity",
            RegionKind::R4Hull => "r4_hull",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "conv_r1" => RegionKind::ConvR1,
            "r2_frontier" => RegionKind::R2Frontier,
            "capacity" => RegionKind::Capacity,
            "r4_hull" => RegionKind::R4Hull,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeShareComponent {
    pub weight: f64,
    pub p1: Pmf,
    pub p2: Pmf,
}

/// Time sharing over product input distributions. The weights play the
/// role of `p(q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeShare {
    pub components: Vec<TimeShareComponent>,
}

impl TimeShare {
    pub fn single(p1: Pmf, p2: Pmf) -> Self {
        Self {
            components: vec![TimeShareComponent { weight: 1.0, p1, p2 }],
        }
    }

    /// `Σ_q p(q) (H(Y0 | X2, Q=q), H(Y0 | X1, Q=q))`.
    pub fn evaluate(&self, u: &UplinkTable) -> Result<RatePoint, RegionError> {
        let mut acc = RatePoint::ORIGIN;
        for c in &self.components {
            let r = uplink_rectangle(&c.p1, &c.p2, u)?;
            acc.r1 += c.weight * r.r1;
            acc.r2 += c.weight * r.r2;
        }
        Ok(acc)
    }

    pub fn residual(&self, target: &RatePoint, u: &UplinkTable) -> Result<f64, RegionError> {
        Ok(self.evaluate(u)?.distance(target))
    }

    fn scaled(&self, w: f64) -> impl Iterator<Item = TimeShareComponent> + '_ {
        self.components.iter().map(move |c| TimeShareComponent {
            weight: c.weight * w,
            ..c.clone()
        })
    }
}

/// Time sharing over relay input distributions, evaluated as
/// `Σ w (I(X0; Y2), I(X0; Y1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelayMix {
    pub components: Vec<(f64, Pmf)>,
}

impl RelayMix {
    pub fn single(p0: Pmf) -> Self {
        Self {
            components: vec![(1.0, p0)],
        }
    }

    pub fn evaluate(&self, d: &DownlinkChannel) -> Result<RatePoint, RegionError> {
        let mut acc = RatePoint::ORIGIN;
        for (w, p0) in &self.components {
            let r = downlink_rates(p0, d)?;
            acc.r1 += w * r.r1;
            acc.r2 += w * r.r2;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedVertex {
    pub point: RatePoint,
    pub uplink: Option<TimeShare>,
    pub downlink: Option<RelayMix>,
}

impl CertifiedVertex {
    pub fn uplink(point: RatePoint, p1: Pmf, p2: Pmf) -> Self {
        Self {
            point,
            uplink: Some(TimeShare::single(p1, p2)),
            downlink: None,
        }
    }

    pub fn downlink(point: RatePoint, p0: Pmf) -> Self {
        Self {
            point,
            uplink: None,
            downlink: Some(RelayMix::single(p0)),
        }
    }
}

/// Downward-closed convex region given by its upper-right boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPolyline {
    pub kind: RegionKind,
    pub vertices: Vec<CertifiedVertex>,
    /// Search resolution for uplink-side regions, λ-steps for the frontier.
    pub resolution: usize,
    /// Largest optimality-gap bound left by the downlink maximizer, if any.
    pub max_gap: Option<f64>,
}

impl RegionPolyline {
    pub fn points(&self) -> Vec<RatePoint> {
        self.vertices.iter().map(|v| v.point).collect()
    }

    pub fn max_r1(&self) -> f64 {
        self.vertices.iter().map(|v| v.point.r1).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.vertices.iter().map(|v| v.point.r2).fold(0.0, f64::max)
    }

    /// The vertex maximizing `r1 + r2` (first one on ties).
    pub fn max_sum_vertex(&self) -> Option<&CertifiedVertex> {
        self.vertices.iter().fold(None, |best: Option<&CertifiedVertex>, v| match best {
            Some(b) if b.point.r1 + b.point.r2 >= v.point.r1 + v.point.r2 => Some(b),
            _ => Some(v),
        })
    }

    pub fn is_degenerate(&self) -> bool {
        self.max_r1() == 0.0 && self.max_r2() == 0.0
    }

    /// Largest certificate mismatch over all vertices. Uplink-side regions
    /// must reproduce their vertices exactly; capacity vertices reproduce on
    /// the uplink side and are dominated on the downlink side; `r4_hull`
    /// vertices are the componentwise minimum of both sides.
    pub fn certificate_error(&self, u: &UplinkTable, d: &DownlinkChannel) -> Result<f64, RegionError> {
        let mut worst: f64 = 0.0;
        for v in &self.vertices {
            let up = v.uplink.as_ref().map(|t| t.evaluate(u)).transpose()?;
            let down = v.downlink.as_ref().map(|m| m.evaluate(d)).transpose()?;
            let shortfall = |w: &RatePoint| (v.point.r1 - w.r1).max(v.point.r2 - w.r2).max(0.0);
            let err = match (self.kind, up, down) {
                (RegionKind::ConvR1, Some(up), _) => up.distance(&v.point),
                (RegionKind::R2Frontier, _, Some(down)) => down.distance(&v.point),
                (RegionKind::Capacity, Some(up), Some(down)) => up.distance(&v.point).max(shortfall(&down)),
                (RegionKind::R4Hull, Some(up), Some(down)) => up.min(&down).distance(&v.point),
                _ => f64::INFINITY,
            };
            worst = worst.max(err);
        }
        Ok(worst)
    }

    /// Checks ordering and concavity of the boundary.
    pub fn check_shape(&self) -> Result<(), String> {
        let pts = self.points();
        if pts.is_empty() {
            return Err("no vertices".into());
        }
        for w in pts.windows(2) {
            if w[1].r1 < w[0].r1 - 1e-12 || w[1].r2 > w[0].r2 + 1e-12 {
                return Err(format!("vertices {} -> {} are not monotone", w[0], w[1]));
            }
        }
        for w in pts.windows(3) {
            let c = geometry::cross(w[0], w[1], w[2]);
            if c > 1e-9 {
                return Err(format!("boundary turns outward at {} (cross {c:e})", w[1]));
            }
        }
        Ok(())
    }
}
