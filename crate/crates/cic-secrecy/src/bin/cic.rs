//! Batch interface over the library: evaluate Gaussian and finite-alphabet
//! bounds, search input families, simulate the binning code, and emit
//! plot-ready trade-off curves.
//!
//! Every artifact starts with a reproducibility header (the full resolved
//! configuration, seed, and crate version; no timestamps), so identical
//! invocations produce byte-identical files. Failures exit nonzero with a
//! machine-readable JSON error record on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cic_secrecy::dmc::eval::{
    eval_binning_inner, eval_binning_raw, eval_outer, eval_superposition_inner,
    eval_symmetric_secrecy, OuterBoundKind, OutputCoupling,
};
use cic_secrecy::dmc::search::{
    optimize_region, AuxSizes, Objective, OptimizeOutcome, SearchConfig, SearchMode,
};
use cic_secrecy::dmc::Scheme;
use cic_secrecy::io;
use cic_secrecy::{
    crossover_a_dagger, eval_gpc, eval_outer_strong, eval_spc, eval_spc_perfect, run_experiment,
    sweep_tradeoff, Error, GaussianChannel, GpcParams, RatePoint, Region, Result, SimConfig,
    SimDesign, SimRates, SpcParams, SweepScheme,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "cic",
    version,
    about = "Equivocation-rate regions for the cognitive interference channel with partial state"
)]
struct Cli {
    /// Worker threads for parallel search (default: CIC_WORKERS env var,
    /// then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct GaussianArgs {
    #[arg(long)]
    p1: f64,
    #[arg(long)]
    p2: f64,
    #[arg(long)]
    k1: f64,
    #[arg(long)]
    k2: f64,
    /// Cross gain from the cognitive transmitter into receiver 1.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Cross gain from the primary transmitter into receiver 2.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
}

impl GaussianArgs {
    fn channel(&self) -> Result<GaussianChannel> {
        GaussianChannel::new(self.p1, self.p2, self.k1, self.k2, self.a, self.b)
    }

    fn header(&self) -> Value {
        json!({
            "p1": self.p1, "p2": self.p2, "k1": self.k1, "k2": self.k2,
            "a": self.a, "b": self.b,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GaussScheme {
    Gpc,
    Spc,
    SpcPerfect,
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DmcEval {
    Binning,
    BinningRaw,
    Superposition,
    SymmetricSecrecy,
    Outer1,
    Outer2,
    Outer3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Binning,
    Superposition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Grid,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    MaxRe2,
    MaxR2GivenR1,
    WeightedSum,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one closed-form Gaussian bound at fixed parameters.
    Gaussian {
        #[command(flatten)]
        ch: GaussianArgs,
        #[arg(long, value_enum)]
        scheme: GaussScheme,
        /// State-cancellation correlation (gpc, outer).
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        /// Primary split correlation (spc).
        #[arg(long, default_value_t = 0.0)]
        rho1: f64,
        /// Cognitive split correlation (spc).
        #[arg(long, default_value_t = 0.0)]
        rho2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-gain threshold where dirty-paper and superposition coding
    /// trade places.
    Crossover {
        #[command(flatten)]
        ch: GaussianArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a finite-alphabet bound at a channel + input file pair.
    Dmc {
        /// Channel JSON file.
        #[arg(long)]
        channel: PathBuf,
        /// Input distribution JSON file (scheme-tagged).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        eval: DmcEval,
        /// Optional output-coupling JSON file for the input-only outer
        /// bound: {"probs": [...]} row-major over (x1, x2, s1, s2, y2, y1p).
        #[arg(long)]
        coupling: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search an input family for the best achievable corner point.
    Optimize {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "grid")]
        mode: ModeArg,
        /// Lattice levels per coordinate (grid mode).
        #[arg(long, default_value_t = 3)]
        resolution: usize,
        /// Candidate count (random mode).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "max-re2")]
        objective: ObjectiveArg,
        /// Threshold for max-r2-given-r1.
        #[arg(long, default_value_t = 0.0)]
        min_r1: f64,
        /// Comma list w1,w2,we for weighted-sum.
        #[arg(long, default_value = "0,0,1")]
        weights: String,
        /// Auxiliary sizes as a comma list x1a,x1b,t,u,v (default sized to
        /// the channel).
        #[arg(long)]
        aux: Option<String>,
        #[arg(long, default_value_t = 2_000_000)]
        max_candidates: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo simulation of the two-stage binning code.
    Simulate {
        #[arg(long)]
        channel: PathBuf,
        /// Binning-scheme input distribution JSON file.
        #[arg(long)]
        input: PathBuf,
        /// Comma list over (x1a, x1b) row-major.
        #[arg(long)]
        x1_map: String,
        /// Comma list over (u, v, x1, s1) row-major.
        #[arg(long)]
        x2_map: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        epsilon: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        r1a: f64,
        #[arg(long, default_value_t = 0.0)]
        r1b: f64,
        #[arg(long, default_value_t = 0.0)]
        r2a: f64,
        #[arg(long, default_value_t = 0.0)]
        r2b: f64,
        /// Derive bin rates from the design distribution with this margin.
        #[arg(long, conflicts_with_all = ["r2a_bin", "r2b_bin", "l1", "l2"])]
        delta: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        r2a_bin: f64,
        #[arg(long, default_value_t = 0.0)]
        r2b_bin: f64,
        #[arg(long, default_value_t = 0.0)]
        l1: f64,
        #[arg(long, default_value_t = 0.0)]
        l2: f64,
        /// Skip the enumerative exact-equivocation computation.
        #[arg(long)]
        no_equivocation: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional per-trial CSV trace file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Trade-off curves between the primary rate and the secret cognitive
    /// rate for a weak-interference Gaussian channel.
    Tradeoff {
        #[command(flatten)]
        ch: GaussianArgs,
        /// Cross gains to sweep: comma list or start:stop:step.
        #[arg(long = "a-values", alias = "avals", default_value = "0.1,0.9")]
        a_values: String,
        /// Schemes to sweep (comma list of gpc, spc-perfect, spc).
        #[arg(long, default_value = "gpc,spc-perfect")]
        schemes: String,
        /// Grid points per sweep parameter.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Comma list (`0.1,0.9`) or inclusive `start:stop:step` range.
fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let bad = |s: &str| Error::Invalid(format!("bad number `{s}` in sweep spec"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Invalid(format!(
                "range spec must be start:stop:step, got `{text}`"
            )));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad(parts[0]))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad(parts[1]))?;
        let step: f64 = parts[2].parse().map_err(|_| bad(parts[2]))?;
        if !(step > 0.0) || stop < start {
            return Err(Error::Invalid(format!("empty range `{text}`")));
        }
        let mut out = Vec::new();
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        for k in 0..=count {
            out.push(start + k as f64 * step);
        }
        Ok(out)
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(s)))
            .collect()
    }
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Invalid(format!("bad integer `{s}` in list")))
        })
        .collect()
}

fn write_artifact(out: &Option<PathBuf>, payload: &str) -> Result<()> {
    match out {
        Some(path) => Ok(std::fs::write(path, payload)?),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn bounds_doc(header: Value, bounds: &impl serde::Serialize) -> Result<String> {
    let doc = json!({ "kind": "bounds", "header": header, "bounds": bounds });
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn base_header(command: &str, extra: Value) -> Value {
    let mut h = json!({ "command": command, "version": VERSION });
    if let (Some(obj), Some(add)) = (h.as_object_mut(), extra.as_object()) {
        for (k, v) in add {
            obj.insert(k.clone(), v.clone());
        }
    }
    h
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::UnknownVariable(_) => "unknown_variable",
        Error::DuplicateVariable(_) => "duplicate_variable",
        Error::OverlappingVariables(_) => "overlapping_variables",
        Error::NegativeProbability(_) => "negative_probability",
        Error::NotNormalized(_) => "not_normalized",
        Error::EmptyAlphabet(_) => "empty_alphabet",
        Error::ShapeMismatch { .. } => "shape_mismatch",
        Error::CapacityExceeded { .. } => "capacity_exceeded",
        Error::Domain(_) => "domain",
        Error::WeakInterferenceRequired(_) => "weak_interference_precondition",
        Error::StrongInterferenceRequired(_) => "strong_interference_precondition",
        Error::StateSingularity => "state_singularity",
        Error::PowerSplit(_) => "power_split",
        Error::SchemeMismatch { .. } => "scheme_mismatch",
        Error::CouplingMismatch(_) => "coupling_mismatch",
        Error::AsymmetricStates(_) => "asymmetric_states",
        Error::Invalid(_) => "invalid_input",
        Error::SearchSpaceTooLarge(_, _) => "search_space_too_large",
        Error::CodebookTooLarge(_, _) => "codebook_too_large",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

fn run(cli: Cli) -> Result<()> {
    let workers = cli.workers.or_else(|| {
        std::env::var("CIC_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::Invalid(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Gaussian {
            ch,
            scheme,
            rho,
            rho1,
            rho2,
            out,
        } => {
            let gch = ch.channel()?;
            let (name, rc) = match scheme {
                GaussScheme::Gpc => ("gpc", eval_gpc(&gch, &GpcParams::new(rho)?)?),
                GaussScheme::Spc => ("spc", eval_spc(&gch, &SpcParams::new(rho, rho1, rho2)?)?),
                GaussScheme::SpcPerfect => ("spc_perfect", eval_spc_perfect(&gch)?),
                GaussScheme::Outer => ("outer", eval_outer_strong(&gch, rho)?),
            };
            let header = base_header(
                "gaussian",
                json!({
                    "scheme": name, "rho": rho, "rho1": rho1, "rho2": rho2,
                    "channel": ch.header(),
                }),
            );
            write_artifact(&out, &bounds_doc(header, &rc)?)
        }
        Command::Crossover { ch, out } => {
            let gch = ch.channel()?;
            let result = crossover_a_dagger(&gch);
            match result.value() {
                Some(v) => println!("a_dagger {v:.12}"),
                None => println!("a_dagger undefined"),
            }
            if out.is_some() {
                let header = base_header("crossover", json!({ "channel": ch.header() }));
                let doc = json!({ "kind": "crossover", "header": header, "result": result });
                write_artifact(&out, &serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(())
        }
        Command::Dmc {
            channel,
            input,
            eval,
            coupling,
            out,
        } => {
            let ch = io::channel_from_json(&std::fs::read_to_string(&channel)?)?;
            let f = io::input_from_json(&ch, &std::fs::read_to_string(&input)?)?;
            let coupling = match &coupling {
                Some(path) => {
                    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    let probs = v
                        .get("probs")
                        .and_then(|p| p.as_array())
                        .ok_or_else(|| {
                            Error::Invalid("coupling file needs a \"probs\" array".into())
                        })?
                        .iter()
                        .map(|x| {
                            x.as_f64()
                                .ok_or_else(|| Error::Invalid("non-numeric coupling entry".into()))
                        })
                        .collect::<Result<Vec<f64>>>()?;
                    Some(OutputCoupling { probs })
                }
                None => None,
            };
            let bounds: Value = match eval {
                DmcEval::Binning => serde_json::to_value(eval_binning_inner(&ch, &f)?)?,
                DmcEval::BinningRaw => serde_json::to_value(eval_binning_raw(&ch, &f)?)?,
                DmcEval::Superposition => serde_json::to_value(eval_superposition_inner(&ch, &f)?)?,
                DmcEval::SymmetricSecrecy => json!({ "Re2": eval_symmetric_secrecy(&ch, &f)? }),
                DmcEval::Outer1 => {
                    serde_json::to_value(eval_outer(&ch, &f, OuterBoundKind::Outer1, None)?)?
                }
                DmcEval::Outer2 => serde_json::to_value(eval_outer(
                    &ch,
                    &f,
                    OuterBoundKind::Outer2,
                    coupling.as_ref(),
                )?)?,
                DmcEval::Outer3 => {
                    serde_json::to_value(eval_outer(&ch, &f, OuterBoundKind::Outer3, None)?)?
                }
            };
            let header = base_header(
                "dmc",
                json!({
                    "channel": channel.display().to_string(),
                    "input": input.display().to_string(),
                    "eval": format!("{eval:?}"),
                }),
            );
            write_artifact(&out, &bounds_doc(header, &bounds)?)
        }
        Command::Optimize {
            channel,
            scheme,
            mode,
            resolution,
            samples,
            seed,
            objective,
            min_r1,
            weights,
            aux,
            max_candidates,
            out,
        } => {
            let ch = io::channel_from_json(&std::fs::read_to_string(&channel)?)?;
            let mode = match mode {
                ModeArg::Grid => SearchMode::Grid { resolution },
                ModeArg::Random => SearchMode::Random { samples },
            };
            let objective = match objective {
                ObjectiveArg::MaxRe2 => Objective::MaxRe2,
                ObjectiveArg::MaxR2GivenR1 => Objective::MaxR2GivenR1 { min_r1 },
                ObjectiveArg::WeightedSum => {
                    let w = parse_sweep(&weights)?;
                    if w.len() != 3 {
                        return Err(Error::Invalid("weights must be three numbers".into()));
                    }
                    Objective::WeightedSum {
                        weights: [w[0], w[1], w[2]],
                    }
                }
            };
            let aux = match &aux {
                Some(text) => {
                    let v = parse_usize_list(text)?;
                    if v.len() != 5 {
                        return Err(Error::Invalid(
                            "aux must be five integers x1a,x1b,t,u,v".into(),
                        ));
                    }
                    AuxSizes {
                        x1a: v[0],
                        x1b: v[1],
                        t: v[2],
                        u: v[3],
                        v: v[4],
                    }
                }
                None => AuxSizes::for_channel(&ch),
            };
            let cfg =
                SearchConfig::new(mode, seed, objective, aux)?.with_max_candidates(max_candidates);
            let scheme = match scheme {
                SchemeArg::Binning => Scheme::Binning,
                SchemeArg::Superposition => Scheme::Superposition,
            };
            let outcome = optimize_region(&ch, scheme, &cfg)?;
            let header = base_header(
                "optimize",
                json!({
                    "channel": channel.display().to_string(),
                    "scheme": scheme,
                    "config": cfg,
                    "note": "auxiliary cardinalities are uncapped; the optimized region is a lower bound on the inner bound",
                }),
            );
            let doc = match outcome {
                OptimizeOutcome::Found(fp) => json!({
                    "kind": "optimize",
                    "header": header,
                    "found": true,
                    "point": fp.point,
                    "constraints": fp.constraints,
                    "objective": fp.objective,
                    "candidates": fp.candidates,
                    "candidate_index": fp.candidate_index,
                    "input": serde_json::from_str::<Value>(&io::input_to_json(&fp.input)?)?,
                }),
                OptimizeOutcome::NoFeasiblePoint { candidates } => json!({
                    "kind": "optimize",
                    "header": header,
                    "found": false,
                    "candidates": candidates,
                }),
            };
            write_artifact(&out, &serde_json::to_string_pretty(&doc)?)
        }
        Command::Simulate {
            channel,
            input,
            x1_map,
            x2_map,
            n,
            epsilon,
            trials,
            seed,
            r1a,
            r1b,
            r2a,
            r2b,
            delta,
            r2a_bin,
            r2b_bin,
            l1,
            l2,
            no_equivocation,
            out,
            trace,
        } => {
            let ch = io::channel_from_json(&std::fs::read_to_string(&channel)?)?;
            let f = io::input_from_json(&ch, &std::fs::read_to_string(&input)?)?;
            let design = SimDesign::new(
                ch,
                f,
                parse_usize_list(&x1_map)?,
                parse_usize_list(&x2_map)?,
            )?;
            let rates = match delta {
                Some(d) => cic_secrecy::compute_bin_rates(&design, [r1a, r1b, r2a, r2b], d)?,
                None => SimRates::new(r1a, r1b, r2a, r2b, r2a_bin, r2b_bin, l1, l2)?,
            };
            let mut cfg = SimConfig::new(n, epsilon, trials, seed)?;
            if no_equivocation {
                cfg = cfg.without_equivocation();
            }
            let result = run_experiment(&design, &cfg, &rates)?;
            let header = base_header(
                "simulate",
                json!({
                    "channel": channel.display().to_string(),
                    "input": input.display().to_string(),
                    "rates": rates,
                    "sim": cfg,
                }),
            );
            if let Some(path) = &trace {
                std::fs::write(path, io::traces_to_csv(&result.traces, &header)?)?;
            }
            write_artifact(&out, &io::trial_result_to_json(&result, &header)?)
        }
        Command::Tradeoff {
            ch,
            a_values,
            schemes,
            grid,
            format,
            out,
        } => {
            let a_list = parse_sweep(&a_values)?;
            let scheme_list: Vec<SweepScheme> = schemes
                .split(',')
                .map(|s| match s.trim() {
                    "gpc" => Ok(SweepScheme::Gpc),
                    "spc-perfect" | "spc_perfect" => Ok(SweepScheme::SpcPerfect),
                    "spc" => Ok(SweepScheme::Spc),
                    other => Err(Error::Invalid(format!("unknown scheme `{other}`"))),
                })
                .collect::<Result<_>>()?;
            let mut points: Vec<RatePoint> = Vec::new();
            for &a in &a_list {
                let gch = GaussianChannel::new(ch.p1, ch.p2, ch.k1, ch.k2, a, ch.b)?;
                for &scheme in &scheme_list {
                    let curve = format!("{scheme:?} a={a}");
                    let region = sweep_tradeoff(&gch, scheme, grid)?;
                    for p in region.points {
                        let mut prov = p.provenance.clone();
                        if let Some(obj) = prov.as_object_mut() {
                            obj.insert("curve".into(), json!(curve));
                            obj.insert("a".into(), json!(a));
                        }
                        points.push(RatePoint::with_provenance(p.r1, p.r2, p.re2, prov)?);
                    }
                }
            }
            // Curves are kept verbatim: no cross-curve Pareto pruning.
            let region = Region {
                points,
                frontier: Vec::new(),
                convexified: false,
            };
            let header = base_header(
                "tradeoff",
                json!({
                    "channel": ch.header(),
                    "a_values": a_list,
                    "schemes": schemes,
                    "grid": grid,
                }),
            );
            let payload = match format {
                OutFormat::Csv => io::region_to_csv(&region, &header)?,
                OutFormat::Json => io::region_to_json(&region, &header)?,
            };
            write_artifact(&out, &payload)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = json!({
                "error": { "kind": error_kind(&e), "message": e.to_string() }
            });
            eprintln!("{record}");
            ExitCode::FAILURE
        }
    }
}
