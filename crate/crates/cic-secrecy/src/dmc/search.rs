//! Grid and random search over factorized input families.
//!
//! Candidates are enumerated deterministically: every conditional slice of
//! the scheme's factorization is drawn either from a fixed-resolution
//! lattice on the probability simplex or from seeded Dirichlet-like
//! samples, and the deterministic x2 map is picked from a small affine
//! family. Results are reproducible for any worker count because the merge
//! is ordered by (objective, candidate index).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::RegionConstraints;
use crate::dmc::eval::{eval_binning_inner, eval_superposition_inner};
use crate::dmc::{
    binning_input, layered_input, BinningDesign, DmcChannel, FactoredInput, LayeredDesign, Scheme,
};
use crate::error::{Error, Result};
use crate::region::RatePoint;

/// How candidates are generated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMode {
    /// Every conditional slice on a simplex lattice with `resolution`
    /// levels per coordinate. Lattices nest whenever
    /// `(r2 - 1) % (r1 - 1) == 0`.
    Grid { resolution: usize },
    /// `samples` seeded Dirichlet-like draws.
    Random { samples: usize },
}

/// What the optimizer maximizes, evaluated on the achievable corner point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    MaxRe2,
    /// Maximize r2 among candidates whose corner reaches at least `min_r1`.
    MaxR2GivenR1 {
        min_r1: f64,
    },
    /// Maximize `w . (r1, r2, re2)`.
    WeightedSum {
        weights: [f64; 3],
    },
}

/// Auxiliary alphabet sizes for the searched factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSizes {
    pub x1a: usize,
    pub x1b: usize,
    pub t: usize,
    pub u: usize,
    pub v: usize,
}

impl AuxSizes {
    /// Defaults sized to the channel inputs: the x1 split carried entirely
    /// by x1a, binary u, and v matching the cognitive input.
    pub fn for_channel(ch: &DmcChannel) -> Self {
        AuxSizes {
            x1a: ch.x1,
            x1b: 1,
            t: 1,
            u: 2,
            v: ch.x2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub seed: u64,
    pub objective: Objective,
    pub aux: AuxSizes,
    /// Hard cap on enumerated candidates; grid searches above it error out.
    pub max_candidates: u64,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, seed: u64, objective: Objective, aux: AuxSizes) -> Result<Self> {
        if let SearchMode::Grid { resolution } = mode {
            if resolution < 2 {
                return Err(Error::Invalid(format!(
                    "grid resolution must be >= 2, got {resolution}"
                )));
            }
        }
        if let SearchMode::Random { samples } = mode {
            if samples == 0 {
                return Err(Error::Invalid("random search needs >= 1 sample".into()));
            }
        }
        for (name, k) in [
            ("x1a", aux.x1a),
            ("x1b", aux.x1b),
            ("t", aux.t),
            ("u", aux.u),
            ("v", aux.v),
        ] {
            if k < 1 {
                return Err(Error::EmptyAlphabet(name.into()));
            }
        }
        Ok(SearchConfig {
            mode,
            seed,
            objective,
            aux,
            max_candidates: 2_000_000,
        })
    }

    pub fn with_max_candidates(mut self, cap: u64) -> Self {
        self.max_candidates = cap;
        self
    }
}

/// Best candidate found, with everything needed to reproduce it.
#[derive(Debug, Clone)]
pub struct FoundPoint {
    pub input: FactoredInput,
    pub constraints: RegionConstraints,
    pub point: RatePoint,
    pub objective: f64,
    pub candidates: u64,
    pub candidate_index: u64,
}

#[derive(Debug, Clone)]
pub enum OptimizeOutcome {
    Found(Box<FoundPoint>),
    /// Every probed candidate was infeasible or excluded by the objective.
    NoFeasiblePoint {
        candidates: u64,
    },
}

/// Number of deterministic x2-map variants probed per candidate.
const X2_MAPS: usize = 5;

fn x2_map_value(map: usize, modulus: usize, u: usize, v: usize, x1: usize, s1: usize) -> usize {
    let raw = match map {
        0 => v,
        1 => v + s1,
        2 => v + x1,
        3 => v + x1 + s1,
        _ => u + v,
    };
    raw % modulus
}

/// One conditional slice family: `count` slices, each a distribution over
/// `k` symbols.
#[derive(Debug, Clone, Copy)]
struct SliceBlock {
    count: usize,
    k: usize,
}

fn blocks_for(scheme: Scheme, ch: &DmcChannel, aux: &AuxSizes) -> Result<Vec<SliceBlock>> {
    Ok(match scheme {
        Scheme::Binning => vec![
            SliceBlock {
                count: 1,
                k: aux.x1a,
            },
            SliceBlock {
                count: aux.x1a,
                k: aux.x1b,
            },
            SliceBlock {
                count: aux.x1a * aux.x1b * ch.s1,
                k: aux.u,
            },
            SliceBlock {
                count: aux.u * aux.x1a * aux.x1b * ch.s1,
                k: aux.v,
            },
        ],
        Scheme::Superposition => vec![
            SliceBlock { count: 1, k: ch.x1 },
            SliceBlock {
                count: ch.x1 * ch.s1,
                k: aux.t,
            },
            SliceBlock {
                count: aux.t * ch.x1 * ch.s1,
                k: aux.u,
            },
            SliceBlock {
                count: aux.t * aux.u * ch.x1 * ch.s1,
                k: aux.v,
            },
        ],
        other => {
            return Err(Error::Invalid(format!(
                "optimize_region supports Binning and Superposition, got {other:?}"
            )))
        }
    })
}

/// All lattice distributions over `k` symbols with `levels` levels:
/// integer compositions of `levels - 1` scaled down.
fn lattice(k: usize, levels: usize) -> Vec<Vec<f64>> {
    let m = levels - 1;
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    fn rec(slot: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<f64>>, m: usize) {
        if slot + 1 == current.len() {
            current[slot] = left;
            out.push(current.iter().map(|&c| c as f64 / m as f64).collect());
            return;
        }
        for c in 0..=left {
            current[slot] = c;
            rec(slot + 1, left - c, current, out, m);
        }
    }
    if k == 1 {
        return vec![vec![1.0]];
    }
    rec(0, m, &mut current, &mut out, m);
    out
}

/// The per-candidate probability tables: one Vec per slice, in block order.
type Slices = Vec<Vec<f64>>;

struct CandidateSpace {
    blocks: Vec<SliceBlock>,
    /// Lattice per block (grid mode only).
    lattices: Vec<Vec<Vec<f64>>>,
    total: u64,
    mode: SearchMode,
    seed: u64,
}

impl CandidateSpace {
    fn build(scheme: Scheme, ch: &DmcChannel, cfg: &SearchConfig) -> Result<Self> {
        let blocks = blocks_for(scheme, ch, &cfg.aux)?;
        match cfg.mode {
            SearchMode::Grid { resolution } => {
                let lattices: Vec<Vec<Vec<f64>>> =
                    blocks.iter().map(|b| lattice(b.k, resolution)).collect();
                let mut total: u128 = X2_MAPS as u128;
                for (b, l) in blocks.iter().zip(&lattices) {
                    for _ in 0..b.count {
                        total = total.saturating_mul(l.len() as u128);
                    }
                }
                if total > cfg.max_candidates as u128 {
                    return Err(Error::SearchSpaceTooLarge(total, cfg.max_candidates));
                }
                Ok(CandidateSpace {
                    blocks,
                    lattices,
                    total: total as u64,
                    mode: cfg.mode,
                    seed: cfg.seed,
                })
            }
            SearchMode::Random { samples } => {
                let total = (samples as u64).min(cfg.max_candidates);
                Ok(CandidateSpace {
                    blocks,
                    lattices: Vec::new(),
                    total,
                    mode: cfg.mode,
                    seed: cfg.seed,
                })
            }
        }
    }

    /// Decode candidate `idx` into its slice tables and x2-map index.
    fn decode(&self, idx: u64) -> (Slices, usize) {
        match self.mode {
            SearchMode::Grid { .. } => {
                let mut rest = idx;
                let map = (rest % X2_MAPS as u64) as usize;
                rest /= X2_MAPS as u64;
                let mut slices = Vec::new();
                for (b, l) in self.blocks.iter().zip(&self.lattices) {
                    let radix = l.len() as u64;
                    for _ in 0..b.count {
                        let digit = (rest % radix) as usize;
                        rest /= radix;
                        slices.push(l[digit].clone());
                    }
                }
                (slices, map)
            }
            SearchMode::Random { .. } => {
                let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
                rng.set_stream(idx + 1);
                let mut slices = Vec::new();
                for b in &self.blocks {
                    for _ in 0..b.count {
                        let mut w: Vec<f64> =
                            (0..b.k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                        let sum: f64 = w.iter().sum();
                        for x in &mut w {
                            *x /= sum;
                        }
                        slices.push(w);
                    }
                }
                let map = rng.gen_range(0..X2_MAPS);
                (slices, map)
            }
        }
    }
}

struct Evaluated {
    constraints: RegionConstraints,
    point: RatePoint,
}

fn build_input(
    scheme: Scheme,
    ch: &DmcChannel,
    aux: &AuxSizes,
    slices: &Slices,
    map: usize,
) -> Result<FactoredInput> {
    match scheme {
        Scheme::Binning => {
            let off_x1b = 1;
            let off_u = off_x1b + aux.x1a;
            let off_v = off_u + aux.x1a * aux.x1b * ch.s1;
            let x1b = aux.x1b;
            let s1 = ch.s1;
            let (ax1a, ax1b) = (aux.x1a, aux.x1b);
            binning_input(
                ch,
                &BinningDesign {
                    x1a: aux.x1a,
                    x1b: aux.x1b,
                    u: aux.u,
                    v: aux.v,
                    p_x1a: &|a| slices[0][a],
                    p_x1b: &|a, b| slices[off_x1b + a][b],
                    x1_map: &|a, b| (a * x1b + b) % ch.x1,
                    p_u: &|a, b, s, u| slices[off_u + (a * ax1b + b) * s1 + s][u],
                    p_v: &|u, a, b, s, v| slices[off_v + ((u * ax1a + a) * ax1b + b) * s1 + s][v],
                    x2_map: &|u, v, x1, s| x2_map_value(map, ch.x2, u, v, x1, s),
                },
            )
        }
        Scheme::Superposition => {
            let off_t = 1;
            let off_u = off_t + ch.x1 * ch.s1;
            let off_v = off_u + aux.t * ch.x1 * ch.s1;
            let s1 = ch.s1;
            let au = aux.u;
            layered_input(
                ch,
                Scheme::Superposition,
                &LayeredDesign {
                    t: aux.t,
                    u: aux.u,
                    v: aux.v,
                    p_x1: &|x1| slices[0][x1],
                    p_t: &|x1, s, t| slices[off_t + x1 * s1 + s][t],
                    p_u: &|t, x1, s, u| slices[off_u + (t * ch.x1 + x1) * s1 + s][u],
                    p_v: &|t, u, x1, s, v| slices[off_v + ((t * au + u) * ch.x1 + x1) * s1 + s][v],
                    p_x2: &|t, u, v, x1, s, x2| {
                        let _ = t;
                        if x2 == x2_map_value(map, ch.x2, u, v, x1, s) {
                            1.0
                        } else {
                            0.0
                        }
                    },
                },
            )
        }
        _ => unreachable!("blocks_for rejects other schemes"),
    }
}

/// Achievable corner for a binning input: the rate-split corner with all of
/// the primary rate on the first layer and all of the cognitive rate on the
/// private layer, with the common-layer bin rate charged against the
/// primary decoder.
pub fn binning_corner(ch: &DmcChannel, f: &FactoredInput) -> Result<RatePoint> {
    f.expect_scheme(Scheme::Binning)?;
    let w = ch.extend(&f.joint)?;
    let r1 = w
        .mi(&["x1"], &["u", "y1"], &[])?
        .min(w.mi(&["u", "x1"], &["y1"], &[])? - w.mi(&["u"], &["s1"], &["x1"])?)
        .max(0.0);
    let r2 = (w.mi(&["v"], &["y2", "s2"], &["u"])? - w.mi(&["v"], &["x1", "s1"], &["u"])?)
        .min(w.mi(&["u", "v"], &["y2", "s2"], &[])? - w.mi(&["u", "v"], &["x1", "s1"], &[])?)
        .max(0.0);
    let re2 = (w.mi(&["v"], &["y2", "s2", "u"], &[])?
        - w.mi(&["v", "s1"], &["x1", "y1", "u"], &[])?)
    .max(0.0)
    .min(r2);
    RatePoint::new(r1, r2, re2)
}

/// Achievable corner for a superposition input: no common cognitive layer,
/// all cognitive rate private.
pub fn superposition_corner(rc: &RegionConstraints) -> Result<RatePoint> {
    let r1 = rc.value("R1+R21").max(0.0);
    let r2 = rc
        .value("R22")
        .min(rc.value("R2 (u,v)"))
        .min(rc.value("R2 (t,u,v)"))
        .min(rc.value("R1+R2") - r1)
        .max(0.0);
    let re2 = rc.value("Re2").max(0.0).min(r2);
    RatePoint::new(r1, r2, re2)
}

fn evaluate_candidate(
    scheme: Scheme,
    ch: &DmcChannel,
    aux: &AuxSizes,
    slices: &Slices,
    map: usize,
) -> Result<Evaluated> {
    let input = build_input(scheme, ch, aux, slices, map)?;
    match scheme {
        Scheme::Binning => {
            let constraints = eval_binning_inner(ch, &input)?;
            let point = binning_corner(ch, &input)?;
            Ok(Evaluated { constraints, point })
        }
        Scheme::Superposition => {
            let constraints = eval_superposition_inner(ch, &input)?;
            let point = superposition_corner(&constraints)?;
            Ok(Evaluated { constraints, point })
        }
        _ => unreachable!(),
    }
}

fn score(objective: &Objective, p: &RatePoint) -> Option<f64> {
    let s = match objective {
        Objective::MaxRe2 => p.re2,
        Objective::MaxR2GivenR1 { min_r1 } => {
            if p.r1 + 1e-12 < *min_r1 {
                return None;
            }
            p.r2
        }
        Objective::WeightedSum { weights } => {
            weights[0] * p.r1 + weights[1] * p.r2 + weights[2] * p.re2
        }
    };
    s.is_finite().then_some(s)
}

/// Search the scheme's input family for the candidate maximizing the
/// configured objective. Candidates whose inner-bound constraint set is
/// infeasible (a negative right-hand side) are skipped. Deterministic for a
/// fixed config and seed, for any worker count.
pub fn optimize_region(
    ch: &DmcChannel,
    scheme: Scheme,
    cfg: &SearchConfig,
) -> Result<OptimizeOutcome> {
    let space = CandidateSpace::build(scheme, ch, cfg)?;
    let total = space.total;
    let best = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let (slices, map) = space.decode(idx);
            let ev = evaluate_candidate(scheme, ch, &cfg.aux, &slices, map).ok()?;
            if !ev.constraints.feasible {
                return None;
            }
            let s = score(&cfg.objective, &ev.point)?;
            Some((s, idx))
        })
        .reduce_with(|a, b| {
            // Higher objective wins; ties break toward the lower index so
            // the outcome is independent of scheduling.
            if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) {
                b
            } else {
                a
            }
        });
    match best {
        None => Ok(OptimizeOutcome::NoFeasiblePoint { candidates: total }),
        Some((objective, idx)) => {
            let (slices, map) = space.decode(idx);
            let ev = evaluate_candidate(scheme, ch, &cfg.aux, &slices, map)?;
            Ok(OptimizeOutcome::Found(Box::new(FoundPoint {
                input: build_input(scheme, ch, &cfg.aux, &slices, map)?,
                constraints: ev.constraints,
                point: ev.point,
                objective,
                candidates: total,
                candidate_index: idx,
            })))
        }
    }
}
