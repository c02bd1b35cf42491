//! File formats: JSON schemas for channels, input distributions, regions,
//! and simulation results, plus CSV region and trace export.
//!
//! Every JSON document is an object tagged with a `"kind"` field. Tensors
//! are flattened row-major with the last variable fastest, matching the
//! in-memory layout. CSV numeric payloads use 12 significant digits; JSON
//! numbers keep full precision.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dmc::{DmcChannel, FactoredInput, Scheme, StatePrior};
use crate::error::{Error, Result};
use crate::info::FiniteDist;
use crate::region::{RatePoint, Region};
use crate::sim::{TrialResult, TrialTrace};

/// `"kind": "channel"` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDoc {
    pub kind: String,
    /// Alphabet sizes in order (x1, x2, s1, s2, y1, y2).
    pub sizes: [usize; 6],
    pub states: StatePrior,
    /// `P(y1, y2 | x1, x2, s1, s2)`, row-major over (x1, x2, s1, s2, y1, y2).
    pub law: Vec<f64>,
}

/// `"kind": "distribution"` document: a scheme-tagged joint over named
/// variables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionDoc {
    pub kind: String,
    pub scheme: Scheme,
    /// Variable table, outermost axis first.
    pub variables: Vec<(String, usize)>,
    /// Row-major probabilities, last variable fastest.
    pub probs: Vec<f64>,
}

pub fn channel_to_json(ch: &DmcChannel) -> Result<String> {
    let doc = ChannelDoc {
        kind: "channel".into(),
        sizes: [ch.x1, ch.x2, ch.s1, ch.s2, ch.y1, ch.y2],
        states: ch.states.clone(),
        law: ch.law.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parse and fully re-validate a channel document.
pub fn channel_from_json(text: &str) -> Result<DmcChannel> {
    let doc: ChannelDoc = serde_json::from_str(text)?;
    if doc.kind != "channel" {
        return Err(Error::Invalid(format!(
            "expected kind \"channel\", got \"{}\"",
            doc.kind
        )));
    }
    DmcChannel::new(doc.sizes, doc.law, doc.states)
}

pub fn input_to_json(input: &FactoredInput) -> Result<String> {
    let doc = DistributionDoc {
        kind: "distribution".into(),
        scheme: input.scheme,
        variables: input
            .joint
            .variables()
            .iter()
            .map(|v| (v.name.clone(), v.size))
            .collect(),
        probs: input.joint.probs().to_vec(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parse a distribution document and re-validate it against the channel it
/// will be evaluated on.
pub fn input_from_json(ch: &DmcChannel, text: &str) -> Result<FactoredInput> {
    let doc: DistributionDoc = serde_json::from_str(text)?;
    if doc.kind != "distribution" {
        return Err(Error::Invalid(format!(
            "expected kind \"distribution\", got \"{}\"",
            doc.kind
        )));
    }
    let joint = FiniteDist::new(doc.variables, doc.probs)?;
    FactoredInput::from_joint(ch, doc.scheme, joint)
}

/// `"kind": "region"` document: the region plus an arbitrary header object
/// (configuration, seed, version) echoed for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionDoc {
    pub kind: String,
    pub header: Value,
    pub region: Region,
}

pub fn region_to_json(region: &Region, header: &Value) -> Result<String> {
    let doc = RegionDoc {
        kind: "region".into(),
        header: header.clone(),
        region: region.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn region_from_json(text: &str) -> Result<Region> {
    let doc: RegionDoc = serde_json::from_str(text)?;
    if doc.kind != "region" {
        return Err(Error::Invalid(format!(
            "expected kind \"region\", got \"{}\"",
            doc.kind
        )));
    }
    Ok(doc.region)
}

/// 12 significant digits, locale-free.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000e0".into();
    }
    format!("{x:.11e}")
}

fn csv_quote(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

/// CSV export: `#`-prefixed header lines carrying the reproducibility
/// header, then `r1,r2,re2,provenance` rows over the region's point list.
pub fn region_to_csv(region: &Region, header: &Value) -> Result<String> {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(&serde_json::to_string(header)?);
    out.push('\n');
    out.push_str("r1,r2,re2,provenance\n");
    for p in &region.points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig12(p.r1),
            fmt_sig12(p.r2),
            fmt_sig12(p.re2),
            csv_quote(&serde_json::to_string(&p.provenance)?)
        ));
    }
    Ok(out)
}

fn csv_fields(line: &str) -> Result<Vec<String>> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    if quoted {
        return Err(Error::Invalid("unterminated quoted CSV field".into()));
    }
    fields.push(cur);
    Ok(fields)
}

/// Parse a region CSV back into its point list; the Pareto frontier and
/// hull are recomputed.
pub fn region_from_csv(text: &str) -> Result<Region> {
    let mut points = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("r1,") {
            continue;
        }
        let fields = csv_fields(line)?;
        if fields.len() != 4 {
            return Err(Error::Invalid(format!(
                "expected 4 CSV fields, got {}",
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Invalid(format!("bad number `{s}`: {e}")))
        };
        let provenance: Value = serde_json::from_str(&fields[3])?;
        points.push(RatePoint::with_provenance(
            num(&fields[0])?,
            num(&fields[1])?,
            num(&fields[2])?,
            provenance,
        )?);
    }
    crate::region::pareto_frontier(points)
}

/// `"kind": "simulation"` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub kind: String,
    pub header: Value,
    pub result: TrialResult,
}

pub fn trial_result_to_json(result: &TrialResult, header: &Value) -> Result<String> {
    let doc = SimulationDoc {
        kind: "simulation".into(),
        header: header.clone(),
        result: result.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn trial_result_from_json(text: &str) -> Result<TrialResult> {
    let doc: SimulationDoc = serde_json::from_str(text)?;
    if doc.kind != "simulation" {
        return Err(Error::Invalid(format!(
            "expected kind \"simulation\", got \"{}\"",
            doc.kind
        )));
    }
    Ok(doc.result)
}

/// Per-trial CSV trace.
pub fn traces_to_csv(traces: &[TrialTrace], header: &Value) -> Result<String> {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(&serde_json::to_string(header)?);
    out.push('\n');
    out.push_str("trial,w1a,w1b,a,c,w2b,b2b,b2a,ok1,ok2\n");
    for t in traces {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            t.trial, t.w1a, t.w1b, t.a, t.c, t.w2b, t.b2b, t.b2a, t.ok1, t.ok2
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::plain_input;
    use crate::dmc::tests::clean_parallel;
    use serde_json::json;

    #[test]
    fn channel_round_trip() {
        let ch = clean_parallel();
        let text = channel_to_json(&ch).unwrap();
        let back = channel_from_json(&text).unwrap();
        assert_eq!(ch, back);
    }

    #[test]
    fn channel_rejects_wrong_kind() {
        let ch = clean_parallel();
        let text = channel_to_json(&ch).unwrap().replace("channel", "chan");
        assert!(channel_from_json(&text).is_err());
    }

    #[test]
    fn input_round_trip() {
        let ch = clean_parallel();
        let input = plain_input(&ch, &[0.25; 4]).unwrap();
        let text = input_to_json(&input).unwrap();
        let back = input_from_json(&ch, &text).unwrap();
        assert_eq!(input, back);
    }

    #[test]
    fn region_json_round_trip() {
        let points = vec![
            RatePoint::with_provenance(1.0, 0.0, 0.0, json!({"rho": 0.0})).unwrap(),
            RatePoint::new(0.0, 1.0, 0.5).unwrap(),
        ];
        let region = crate::region::pareto_frontier(points).unwrap();
        let header = json!({"seed": 7, "command": "test"});
        let text = region_to_json(&region, &header).unwrap();
        let back = region_from_json(&text).unwrap();
        assert_eq!(region, back);
    }

    #[test]
    fn region_csv_round_trip_preserves_values() {
        let points = vec![
            RatePoint::with_provenance(0.5, 0.25, 0.125, json!({"note": "a,b \"quoted\""}))
                .unwrap(),
            RatePoint::new(1.0 / 3.0, 2.0 / 3.0, 0.1).unwrap(),
        ];
        let region = crate::region::pareto_frontier(points).unwrap();
        let text = region_to_csv(&region, &json!({"seed": 1})).unwrap();
        let back = region_from_csv(&text).unwrap();
        assert_eq!(back.points.len(), region.points.len());
        for (a, b) in region.points.iter().zip(&back.points) {
            assert!((a.r1 - b.r1).abs() < 1e-10);
            assert!((a.r2 - b.r2).abs() < 1e-10);
            assert!((a.re2 - b.re2).abs() < 1e-10);
            assert_eq!(a.provenance, b.provenance);
        }
    }

    #[test]
    fn sig12_format() {
        assert_eq!(fmt_sig12(0.5), "5.00000000000e-1");
        assert_eq!(fmt_sig12(0.0), "0.00000000000e0");
        let x: f64 = fmt_sig12(1.0 / 3.0).parse().unwrap();
        assert!((x - 1.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn trace_csv_shape() {
        let traces = vec![TrialTrace {
            trial: 0,
            w1a: 1,
            w1b: 0,
            a: 2,
            c: 0,
            w2b: 0,
            b2b: 3,
            b2a: 1,
            ok1: true,
            ok2: false,
        }];
        let text = traces_to_csv(&traces, &json!({})).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "0,1,0,2,0,0,3,1,true,false");
    }
}
