//! Inner-bound optimization over parameterized input families.
//!
//! Runs the grid and random searches on the clean parallel binary channel
//! with the binning scheme. The optimizer enumerates factorized candidate
//! distributions, skips the ones whose constraint set has a negative
//! right-hand side, and returns the corner maximizing the objective.
//! Results are deterministic for a fixed seed, whatever the worker count.

use cic_secrecy::dmc::search::{
    optimize_region, AuxSizes, Objective, OptimizeOutcome, SearchConfig, SearchMode,
};
use cic_secrecy::dmc::{DmcChannel, Scheme, StatePrior};
use cic_secrecy::Result;

fn main() -> Result<()> {
    // y1 = x1 and y2 = x2, no state: the cognitive user can carry a full
    // secret bit because receiver 1 never sees x2.
    let ch = DmcChannel::from_fn(
        [2, 2, 1, 1, 2, 2],
        StatePrior::Independent {
            s1: vec![1.0],
            s2: vec![1.0],
        },
        |x1, x2, _, _, y1, y2| if y1 == x1 && y2 == x2 { 1.0 } else { 0.0 },
    )?;
    let aux = AuxSizes::for_channel(&ch);

    for (name, mode) in [
        ("grid", SearchMode::Grid { resolution: 4 }),
        ("random", SearchMode::Random { samples: 2000 }),
    ] {
        let cfg = SearchConfig::new(mode, 7, Objective::MaxRe2, aux)?;
        match optimize_region(&ch, Scheme::Binning, &cfg)? {
            OptimizeOutcome::Found(fp) => println!(
                "{name}: re2 = {:.6} at corner (r1 = {:.6}, r2 = {:.6}), candidate {} of {}",
                fp.point.re2, fp.point.r1, fp.point.r2, fp.candidate_index, fp.candidates
            ),
            OptimizeOutcome::NoFeasiblePoint { candidates } => {
                println!("{name}: no feasible point among {candidates} candidates")
            }
        }
    }

    // A constrained objective: the best secret rate while the primary user
    // still gets most of its bit.
    let cfg = SearchConfig::new(
        SearchMode::Grid { resolution: 4 },
        7,
        Objective::MaxR2GivenR1 { min_r1: 0.75 },
        aux,
    )?;
    if let OptimizeOutcome::Found(fp) = optimize_region(&ch, Scheme::Binning, &cfg)? {
        println!(
            "r2 = {:.6} with r1 = {:.6} held at >= 0.75",
            fp.point.r2, fp.point.r1
        );
    }
    Ok(())
}
