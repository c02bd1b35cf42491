//! Cross-gain threshold between the two Gaussian coding strategies.
//!
//! Below `a_dagger` the superposition scheme gives the primary user the
//! better rate; above it dirty-paper coding wins. The threshold is
//! undefined when the quotient under the root degenerates, which happens
//! on a measure-zero set that parameter sweeps still routinely hit.

use cic_secrecy::{classify_interference, crossover_a_dagger, Crossover, GaussianChannel, Result};

fn main() -> Result<()> {
    // The reference operating point: unit cross gains would make both
    // receivers statistically identical.
    let ch = GaussianChannel::new(4.0, 4.0, 1.0, 1.0, 0.5, 1.0)?;
    match crossover_a_dagger(&ch) {
        Crossover::Defined { a_dagger } => println!("a_dagger = {a_dagger:.12}"),
        Crossover::Undefined {
            numerator,
            denominator,
        } => {
            println!("undefined (numerator {numerator}, denominator {denominator})")
        }
    }

    // The threshold moves with the eavesdropping channel quality k2.
    println!("\nk2 sweep at p1 = p2 = 4, k1 = 1, a = 0.5:");
    for k2 in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let ch = GaussianChannel::new(4.0, 4.0, 1.0, k2, 0.5, 1.0)?;
        let side = classify_interference(&ch);
        match crossover_a_dagger(&ch) {
            Crossover::Defined { a_dagger } => {
                println!("  k2 = {k2:<5} a_dagger = {a_dagger:.6}  ({side:?} at a = 0.5)")
            }
            Crossover::Undefined { .. } => println!("  k2 = {k2:<5} a_dagger undefined"),
        }
    }
    Ok(())
}
