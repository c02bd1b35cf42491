//! Equivocation-rate regions and capacity bounds for the cognitive
//! interference channel with partial channel state information.
//!
//! The crate has three layers:
//!
//! * closed-form Gaussian evaluators and the finite-alphabet (brute-force)
//!   evaluators in [`gaussian`] and [`dmc`],
//! * region geometry (Pareto frontiers, time sharing, trade-off sweeps)
//!   in [`region`],
//! * a desk-scale simulator of the random-binning code construction in
//!   [`sim`].
//!
//! All rates are in bits per channel use; logs are base 2.

pub mod bounds;
pub mod dmc;
pub mod error;
pub mod gaussian;
pub mod info;
pub mod io;
pub mod region;
pub mod sim;

pub use bounds::{RateBound, RegionConstraints};
pub use error::{Error, Result};
pub use gaussian::{
    classify_interference, crossover_a_dagger, eval_gpc, eval_outer_strong, eval_spc,
    eval_spc_perfect, Crossover, GaussianChannel, GpcParams, Interference, SpcParams,
};
pub use info::{gaussian_capacity, FiniteDist, VarSet, Variable};
pub use region::{
    contains, pareto_frontier, sweep_tradeoff, time_share_hull, RatePoint, Region, SweepScheme,
};
pub use sim::{
    build_codebooks, compute_bin_rates, decode1, decode2, encode, run_experiment, CodeSizes,
    Codebook, Message2, SimConfig, SimDesign, SimRates, TrialResult,
};
