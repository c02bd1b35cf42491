//! Layered (superposition) inner bound and the auxiliary-variable outer
//! bounds on a finite channel.
//!
//! The same three-layer factorization p(t) p(u|t) p(v|t,u) feeds both the
//! superposition inner bound and the layered outer bound; the
//! auxiliary-variable outer bound uses its own (v1, v2, u) factorization.
//! On this clean channel the layers line up and the bounds agree.

use cic_secrecy::dmc::eval::{eval_outer, eval_superposition_inner, OuterBoundKind};
use cic_secrecy::dmc::{
    layered_input, outer1_input, DmcChannel, LayeredDesign, Outer1Design, Scheme, StatePrior,
};
use cic_secrecy::Result;

fn print_bounds(title: &str, bounds: &cic_secrecy::RegionConstraints) {
    println!("{title} (feasible: {})", bounds.feasible);
    for b in &bounds.bounds {
        println!("  {:<10} <= {:.6}", b.label, b.value);
    }
}

fn main() -> Result<()> {
    let ch = DmcChannel::from_fn(
        [2, 2, 1, 1, 2, 2],
        StatePrior::Independent {
            s1: vec![1.0],
            s2: vec![1.0],
        },
        |x1, x2, _, _, y1, y2| if y1 == x1 && y2 == x2 { 1.0 } else { 0.0 },
    )?;

    // Constant common layers, the private layer v carried on x2.
    let layered = LayeredDesign {
        t: 1,
        u: 1,
        v: 2,
        p_x1: &|_| 0.5,
        p_t: &|_, _, _| 1.0,
        p_u: &|_, _, _, _| 1.0,
        p_v: &|_, _, _, _, _| 0.5,
        p_x2: &|_, _, v, _, _, x2| if x2 == v { 1.0 } else { 0.0 },
    };
    let inner_input = layered_input(&ch, Scheme::Superposition, &layered)?;
    print_bounds(
        "superposition inner",
        &eval_superposition_inner(&ch, &inner_input)?,
    );

    let outer3_input = layered_input(&ch, Scheme::Outer3, &layered)?;
    print_bounds(
        "\nlayered outer",
        &eval_outer(&ch, &outer3_input, OuterBoundKind::Outer3, None)?,
    );

    // v1 carries x1, v2 carries x2.
    let outer1_in = outer1_input(
        &ch,
        &Outer1Design {
            v1: 2,
            v2: 2,
            u: 1,
            p_v1: &|_| 0.5,
            p_v2: &|_| 0.5,
            p_u: &|_, _, _| 1.0,
            p_x1: &|v1, x1| if x1 == v1 { 1.0 } else { 0.0 },
            p_x2: &|_, _, v2, _, x2| if x2 == v2 { 1.0 } else { 0.0 },
        },
    )?;
    print_bounds(
        "\nauxiliary-variable outer",
        &eval_outer(&ch, &outer1_in, OuterBoundKind::Outer1, None)?,
    );
    Ok(())
}
