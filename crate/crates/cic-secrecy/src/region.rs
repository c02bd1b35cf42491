//! Geometry over rate points: Pareto frontiers, time-sharing
//! convexification, containment tests, and the Gaussian trade-off sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    eval_gpc, eval_spc, eval_spc_perfect, GaussianChannel, GpcParams, SpcParams,
};

/// An equivocation-rate triple with the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    pub re2: f64,
    /// Free-form parameter record (scheme, sweep values, ...).
    pub provenance: serde_json::Value,
}

impl RatePoint {
    pub fn new(r1: f64, r2: f64, re2: f64) -> Result<Self> {
        Self::with_provenance(r1, r2, re2, serde_json::Value::Null)
    }

    pub fn with_provenance(
        r1: f64,
        r2: f64,
        re2: f64,
        provenance: serde_json::Value,
    ) -> Result<Self> {
        for (name, v) in [("r1", r1), ("r2", r2), ("re2", re2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if re2 > r2 + 1e-12 {
            return Err(Error::Domain(format!("re2 = {re2} exceeds r2 = {r2}")));
        }
        Ok(RatePoint {
            r1,
            r2,
            re2,
            provenance,
        })
    }

    /// Coordinatewise dominance within `tol`.
    pub fn dominates(&self, other: &RatePoint, tol: f64) -> bool {
        self.r1 + tol >= other.r1 && self.r2 + tol >= other.r2 && self.re2 + tol >= other.re2
    }
}

/// A finite cloud of rate points with its Pareto frontier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub points: Vec<RatePoint>,
    /// Indices of Pareto-maximal points, in stable input order.
    pub frontier: Vec<usize>,
    pub convexified: bool,
}

impl Region {
    pub fn frontier_points(&self) -> impl Iterator<Item = &RatePoint> {
        self.frontier.iter().map(|&i| &self.points[i])
    }
}

/// Extract the Pareto-maximal points under coordinatewise `>=` dominance.
/// Order among frontier points follows the input order.
pub fn pareto_frontier(points: Vec<RatePoint>) -> Result<Region> {
    if points.is_empty() {
        return Err(Error::Invalid(
            "pareto_frontier needs at least one point".into(),
        ));
    }
    let frontier = maximal_indices(&points);
    Ok(Region {
        points,
        frontier,
        convexified: false,
    })
}

fn maximal_indices(points: &[RatePoint]) -> Vec<usize> {
    let mut frontier = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let strictly_better = q.r1 > p.r1 || q.r2 > p.r2 || q.re2 > p.re2;
            if q.dominates(p, 0.0) && strictly_better {
                continue 'outer;
            }
            // Exact duplicates: keep the first occurrence only.
            if !strictly_better && q.dominates(p, 0.0) && j < i {
                continue 'outer;
            }
        }
        frontier.push(i);
    }
    frontier
}

/// Close the region under pairwise time sharing: add convex combinations of
/// frontier pairs on a lambda grid with `samples` points, then re-extract the
/// frontier. The output region contains the input region.
pub fn time_share_hull(region: &Region, samples: usize) -> Result<Region> {
    if region.points.is_empty() {
        return Err(Error::Invalid(
            "time_share_hull needs at least one point".into(),
        ));
    }
    let samples = samples.max(2);
    let mut points = region.points.clone();
    let frontier: Vec<RatePoint> = region.frontier_points().cloned().collect();
    for (i, p) in frontier.iter().enumerate() {
        for q in frontier.iter().skip(i + 1) {
            for k in 1..samples.saturating_sub(1) {
                let lambda = k as f64 / (samples - 1) as f64;
                let mix = |a: f64, b: f64| lambda * a + (1.0 - lambda) * b;
                points.push(RatePoint {
                    r1: mix(p.r1, q.r1),
                    r2: mix(p.r2, q.r2),
                    re2: mix(p.re2, q.re2),
                    provenance: serde_json::json!({
                        "time_share": { "lambda": lambda }
                    }),
                });
            }
        }
    }
    let frontier = maximal_indices(&points);
    Ok(Region {
        points,
        frontier,
        convexified: true,
    })
}

/// True iff some frontier point dominates `p` within `tol`.
pub fn contains(region: &Region, p: &RatePoint, tol: f64) -> bool {
    region.frontier_points().any(|q| q.dominates(p, tol))
}

/// Which inner-bound family a Gaussian sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepScheme {
    /// Dirty-paper inner bound over a rho grid; R2 is capped at the Re2
    /// bound so every emitted point operates at perfect secrecy.
    Gpc,
    /// The perfect-secrecy superposition corollary (single point).
    SpcPerfect,
    /// Full superposition bound over a (rho, rho1, rho2) grid.
    Spc,
}

/// Generate the trade-off curve between the primary rate and the secret
/// cognitive rate for a weak-interference Gaussian channel.
///
/// Every point carries both the raw bounds and the min-composed secrecy
/// operating point `r2 = min(R2 bound, Re2 bound)` in its coordinates.
pub fn sweep_tradeoff(ch: &GaussianChannel, scheme: SweepScheme, grid: usize) -> Result<Region> {
    if ch.a > 1.0 {
        return Err(Error::WeakInterferenceRequired(ch.a));
    }
    let grid = grid.max(2);
    let step = |k: usize| k as f64 / (grid - 1) as f64;
    let mut points = Vec::new();
    match scheme {
        SweepScheme::Gpc => {
            for k in 0..grid {
                let rho = step(k);
                let rc = eval_gpc(ch, &GpcParams::new(rho)?)?;
                let r2 = rc.value("R2");
                let re2 = rc.value("Re2").max(0.0);
                points.push(RatePoint::with_provenance(
                    rc.value("R1"),
                    r2.min(re2).max(0.0),
                    re2.min(r2),
                    serde_json::json!({
                        "scheme": "gpc", "rho": rho,
                        "r2_bound": r2, "re2_bound": re2,
                    }),
                )?);
            }
        }
        SweepScheme::SpcPerfect => {
            let rc = eval_spc_perfect(ch)?;
            let r1 = rc.value("R1").min(rc.value("R1+R2")).max(0.0);
            let r2 = rc.value("R2").max(0.0);
            points.push(RatePoint::with_provenance(
                r1,
                r2,
                r2,
                serde_json::json!({
                    "scheme": "spc_perfect",
                    "r1_bound": rc.value("R1"),
                    "sum_bound": rc.value("R1+R2"),
                }),
            )?);
        }
        SweepScheme::Spc => {
            for i in 0..grid {
                for j in 0..grid {
                    for k in 0..grid {
                        let (rho, rho1, rho2) = (step(i), step(j), step(k));
                        let p = match SpcParams::new(rho, rho1, rho2) {
                            Ok(p) => p,
                            Err(_) => continue, // infeasible power split
                        };
                        let rc = eval_spc(ch, &p)?;
                        if !rc.feasible {
                            continue;
                        }
                        let r1 = rc.value("R1").min(rc.value("R1+R2")).max(0.0);
                        let r2b = rc.value("R2");
                        let re2 = rc.value("Re2").max(0.0);
                        let r2 = r2b.min(re2).min((rc.value("R1+R2") - r1).max(0.0));
                        points.push(RatePoint::with_provenance(
                            r1,
                            r2.max(0.0),
                            r2.max(0.0),
                            serde_json::json!({
                                "scheme": "spc", "rho": rho, "rho1": rho1, "rho2": rho2,
                                "r2_bound": r2b, "re2_bound": re2,
                            }),
                        )?);
                    }
                }
            }
        }
    }
    pareto_frontier(points)
}
