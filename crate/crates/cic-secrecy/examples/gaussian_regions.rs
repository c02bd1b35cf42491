//! Closed-form Gaussian rate and equivocation bounds.
//!
//! Evaluates the dirty-paper (GPC) and superposition (SPC) inner bounds
//! plus the strong-interference outer bound at a fixed channel, and shows
//! how the secrecy bound reacts to the correlation parameter rho.

use cic_secrecy::{
    eval_gpc, eval_outer_strong, eval_spc, eval_spc_perfect, GaussianChannel, GpcParams, Result,
    SpcParams,
};

fn print_bounds(title: &str, bounds: &cic_secrecy::RegionConstraints) {
    println!("{title} (feasible: {})", bounds.feasible);
    for b in &bounds.bounds {
        println!("  {:<8} <= {:.6}", b.label, b.value);
    }
}

fn main() -> Result<()> {
    let weak = GaussianChannel::new(4.0, 4.0, 1.0, 1.0, 0.1, 1.0)?;

    // Dirty-paper coding: rho trades cognitive power between boosting the
    // primary link and carrying the secret message.
    print_bounds("GPC at rho = 0", &eval_gpc(&weak, &GpcParams::new(0.0)?)?);
    print_bounds("GPC at rho = 0.5", &eval_gpc(&weak, &GpcParams::new(0.5)?)?);

    // Superposition coding, and its perfect-secrecy corner.
    print_bounds(
        "SPC at (0.1, 0.2, 0.3)",
        &eval_spc(&weak, &SpcParams::new(0.1, 0.2, 0.3)?)?,
    );
    print_bounds(
        "SPC perfect secrecy",
        &eval_spc(&weak, &SpcParams::perfect_secrecy())?,
    );
    print_bounds("SPC perfect-secrecy corollary", &eval_spc_perfect(&weak)?);

    // Under strong interference the primary receiver decodes everything the
    // cognitive user sends, so its secrecy bound collapses to zero.
    let strong = GaussianChannel::new(4.0, 4.0, 1.0, 1.0, 2.0, 1.0)?;
    print_bounds("\nouter bound at a = 2", &eval_outer_strong(&strong, 0.0)?);
    Ok(())
}
