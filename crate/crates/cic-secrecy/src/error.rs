use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("variable sets overlap on `{0}`")]
    OverlappingVariables(String),

    #[error("probabilities must be non-negative, found {0}")]
    NegativeProbability(f64),

    #[error("probabilities sum to {0}, expected 1 within 1e-12")]
    NotNormalized(f64),

    #[error("alphabet size must be >= 1 for variable `{0}`")]
    EmptyAlphabet(String),

    #[error("tensor has {got} entries but the variable table implies {want}")]
    ShapeMismatch { got: usize, want: usize },

    #[error("joint alphabet of {cells} cells exceeds the cap of {cap}")]
    CapacityExceeded { cells: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("weak-interference precondition violated: cross gain a = {0} > 1; use the strong-interference outer bound instead")]
    WeakInterferenceRequired(f64),

    #[error("strong-interference precondition violated: cross gain a = {0} <= 1")]
    StrongInterferenceRequired(f64),

    #[error("state variance K1 = 0 makes the rate expression diverge")]
    StateSingularity,

    #[error("infeasible power split: {0}")]
    PowerSplit(String),

    #[error("factored input has scheme {got:?}, expected {want:?}")]
    SchemeMismatch { got: String, want: String },

    #[error("coupling marginal deviates from the channel law by {0} (tolerance 1e-9)")]
    CouplingMismatch(f64),

    #[error("symmetric-state precondition violated: {0}")]
    AsymmetricStates(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("grid search would enumerate {0} candidates, above the configured cap {1}; use random mode or raise the cap")]
    SearchSpaceTooLarge(u128, u64),

    #[error("codebook memory of {0} symbols exceeds the cap of {1}")]
    CodebookTooLarge(u64, u64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
