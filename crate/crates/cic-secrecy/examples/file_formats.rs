//! The JSON and CSV document formats used by the `cic` command.
//!
//! Every artifact is a JSON object tagged by a `kind` field, and region
//! data additionally round-trips through CSV with 12 significant digits
//! and a `#`-prefixed reproducibility header. This example writes each
//! kind, reads it back, and checks the round trip.

use cic_secrecy::dmc::{plain_input, DmcChannel, StatePrior};
use cic_secrecy::io::{
    channel_from_json, channel_to_json, input_from_json, input_to_json, region_from_csv,
    region_from_json, region_to_csv, region_to_json,
};
use cic_secrecy::{pareto_frontier, RatePoint, Result};
use serde_json::json;

fn main() -> Result<()> {
    // Channel document: alphabet sizes, state prior, and the law tensor.
    let ch = DmcChannel::from_fn(
        [2, 2, 2, 1, 2, 2],
        StatePrior::Independent {
            s1: vec![0.7, 0.3],
            s2: vec![1.0],
        },
        |x1, x2, s1, _, y1, y2| {
            let p1 = if y1 == x1 ^ s1 { 0.9 } else { 0.1 };
            let p2 = if y2 == x2 { 0.8 } else { 0.2 };
            p1 * p2
        },
    )?;
    let text = channel_to_json(&ch)?;
    println!("channel document ({} bytes):", text.len());
    println!("{}", &text[..text.len().min(200)]);
    let back = channel_from_json(&text)?;
    assert_eq!(back.x1, ch.x1);

    // Distribution document: scheme tag, named variables, probabilities.
    let input = plain_input(&ch, &[0.25; 4])?;
    let text = input_to_json(&input)?;
    let back = input_from_json(&ch, &text)?;
    assert_eq!(back.joint.probs(), input.joint.probs());
    println!("\ndistribution document round-trips ({} bytes)", text.len());

    // Region document, as JSON and as CSV. The CSV keeps the Pareto
    // frontier implicit: it is recomputed on load.
    let region = pareto_frontier(vec![
        RatePoint::with_provenance(0.9, 0.1, 0.1, json!({"rho": 0.0}))?,
        RatePoint::with_provenance(0.5, 0.5, 0.4, json!({"rho": 0.5}))?,
        RatePoint::with_provenance(0.4, 0.4, 0.3, json!({"rho": 0.7}))?,
    ])?;
    let header = json!({"command": "example", "seed": 7});
    let as_json = region_to_json(&region, &header)?;
    let as_csv = region_to_csv(&region, &header)?;
    println!("\nregion CSV:\n{as_csv}");
    let from_json = region_from_json(&as_json)?;
    let from_csv = region_from_csv(&as_csv)?;
    assert_eq!(from_json.frontier, region.frontier);
    assert_eq!(from_csv.frontier, region.frontier);
    println!("region round-trips through both formats");
    Ok(())
}
