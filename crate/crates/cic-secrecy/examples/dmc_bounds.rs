//! Finite-alphabet bounds on a small state-dependent channel.
//!
//! Builds a binary channel whose first receiver is noisy and whose second
//! receiver sees the cognitive input cleanly, assembles a binning-scheme
//! input, and evaluates the inner bound against the input-only outer bound
//! at the induced plain input: the sandwich every inner point must satisfy.

use cic_secrecy::dmc::eval::{eval_binning_inner, eval_binning_raw, eval_outer, OuterBoundKind};
use cic_secrecy::dmc::search::binning_corner;
use cic_secrecy::dmc::{binning_input, BinningDesign, DmcChannel, StatePrior};
use cic_secrecy::Result;

fn main() -> Result<()> {
    // y1 = x1 through a BSC(0.1) shifted by s1; y2 = x2 cleanly.
    let ch = DmcChannel::from_fn(
        [2, 2, 2, 1, 2, 2],
        StatePrior::Independent {
            s1: vec![0.7, 0.3],
            s2: vec![1.0],
        },
        |x1, x2, s1, _, y1, y2| {
            let clean = x1 ^ s1;
            let p1 = if y1 == clean { 0.9 } else { 0.1 };
            if y2 == x2 {
                p1
            } else {
                0.0
            }
        },
    )?;

    // Uniform split message on x1, constant common layer, v carried
    // directly on x2.
    let input = binning_input(
        &ch,
        &BinningDesign {
            x1a: 2,
            x1b: 1,
            u: 1,
            v: 2,
            p_x1a: &|_| 0.5,
            p_x1b: &|_, _| 1.0,
            x1_map: &|a, _| a,
            p_u: &|_, _, _, _| 1.0,
            p_v: &|_, _, _, _, _| 0.5,
            x2_map: &|_, v, _, _| v,
        },
    )?;

    let inner = eval_binning_inner(&ch, &input)?;
    println!("binning inner bound (feasible: {}):", inner.feasible);
    for b in &inner.bounds {
        println!("  {:<6} <= {:.6}", b.label, b.value);
    }

    println!("\nraw split-rate constraints:");
    for (label, value) in eval_binning_raw(&ch, &input)? {
        println!("  {label:<24} <= {value:.6}");
    }

    let corner = binning_corner(&ch, &input)?;
    println!(
        "\nachievable corner: r1 = {:.6}, r2 = {:.6}, re2 = {:.6}",
        corner.r1, corner.r2, corner.re2
    );

    let plain = input.induced_plain(&ch)?;
    let outer = eval_outer(&ch, &plain, OuterBoundKind::Outer2, None)?;
    println!("\ninput-only outer bound at the induced p(x1, x2):");
    for b in &outer.bounds {
        println!("  {:<6} <= {:.6}", b.label, b.value);
    }
    println!(
        "corner inside outer region: {}",
        outer.satisfied_by(corner.r1, corner.r2, corner.re2, 1e-9)
    );
    Ok(())
}
