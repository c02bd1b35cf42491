//! State-dependent secrecy: the symmetric-state reduction and the
//! rate-limited state-forwarding link.
//!
//! First, a channel where both receivers face the same state: the
//! cognitive user dirty-papers the state away for receiver 2 while the
//! state itself masks the message from receiver 1. Second, the helper
//! bound for a point-to-point link whose receiver learns the state over a
//! side channel of rate r_s: decode-the-state-first versus binning.

use cic_secrecy::dmc::eval::{eval_point_to_point, eval_symmetric_secrecy};
use cic_secrecy::dmc::{binning_input, BinningDesign, DmcChannel, StatePrior};
use cic_secrecy::{FiniteDist, Result};

fn main() -> Result<()> {
    // Shared binary state added on both links: y1 = x1 xor s, y2 = x2 xor
    // s. The state prior is a degenerate diagonal joint, as the symmetric
    // reduction requires.
    let ch = DmcChannel::from_fn(
        [2, 2, 2, 2, 2, 2],
        StatePrior::symmetric(&[0.5, 0.5]),
        |x1, x2, _, s2, y1, y2| {
            if y1 == x1 ^ s2 && y2 == x2 ^ s2 {
                1.0
            } else {
                0.0
            }
        },
    )?;
    // v is the pre-state symbol; the encoder sends x2 = v xor s1 so that
    // receiver 2 sees y2 = v.
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
            x2_map: &|_, v, _, s1| v ^ s1,
        },
    )?;
    let secrecy = eval_symmetric_secrecy(&ch, &input)?;
    println!("symmetric-state secrecy rate: {secrecy:.6} bits/use");

    // Point-to-point helper: x = u xor s with everything uniform binary
    // and a clean output. The state description shares the channel, so
    // every bit spent conveying s costs a bit of message; binning earns
    // nothing here because u is independent of both s and y.
    let d = FiniteDist::from_fn(vec![("u", 2), ("s", 2), ("x", 2), ("y", 2)], |idx| {
        let [u, s, x, y] = [idx[0], idx[1], idx[2], idx[3]];
        if x == u ^ s && y == x {
            0.25
        } else {
            0.0
        }
    })?;
    println!("\nstate-forwarding link, x = u xor s:");
    for r_s in [0.0, 0.25, 0.5, 1.0, 2.0] {
        println!(
            "  r_s = {r_s:<5} rate = {:.6}",
            eval_point_to_point(r_s, &d)?
        );
    }
    Ok(())
}
