//! Named linear rate constraints shared by the Gaussian and finite-alphabet
//! region evaluators.

use serde::{Deserialize, Serialize};

/// One linear upper bound `c . (R1, R2, Re2) <= value` in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub label: String,
    /// Coefficients over (R1, R2, Re2).
    pub coeffs: [f64; 3],
    /// Upper-bound value in bits per channel use.
    pub value: f64,
}

impl RateBound {
    pub fn new(label: impl Into<String>, coeffs: [f64; 3], value: f64) -> Self {
        RateBound {
            label: label.into(),
            coeffs,
            value,
        }
    }
}

/// A set of named rate constraints produced by a theorem evaluator.
///
/// `feasible` is false whenever any right-hand side is negative; negative
/// values are reported as-is rather than clamped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionConstraints {
    pub bounds: Vec<RateBound>,
    pub feasible: bool,
}

impl RegionConstraints {
    pub fn new(bounds: Vec<RateBound>) -> Self {
        debug_assert!(
            {
                let mut labels: Vec<&str> = bounds.iter().map(|b| b.label.as_str()).collect();
                labels.sort_unstable();
                labels.windows(2).all(|w| w[0] != w[1])
            },
            "bound labels must be unique"
        );
        let feasible = bounds.iter().all(|b| b.value >= 0.0);
        RegionConstraints { bounds, feasible }
    }

    pub fn get(&self, label: &str) -> Option<&RateBound> {
        self.bounds.iter().find(|b| b.label == label)
    }

    /// Upper-bound value for the given label; panics if absent.
    pub fn value(&self, label: &str) -> f64 {
        self.get(label)
            .unwrap_or_else(|| panic!("no bound labeled `{label}`"))
            .value
    }

    /// The largest `r` such that `(r, 0, 0)` satisfies every constraint with a
    /// positive R1 coefficient.
    pub fn max_r1(&self) -> f64 {
        self.axis_max(0)
    }

    /// The largest `r` such that `(0, r, r)`-style points satisfy every
    /// constraint with a positive R2 coefficient (Re2 rows excluded).
    pub fn max_r2(&self) -> f64 {
        self.axis_max(1)
    }

    fn axis_max(&self, axis: usize) -> f64 {
        self.bounds
            .iter()
            .filter(|b| b.coeffs[axis] > 0.0)
            .map(|b| b.value / b.coeffs[axis])
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }

    /// True if the rate triple satisfies every constraint within `tol`.
    pub fn satisfied_by(&self, r1: f64, r2: f64, re2: f64, tol: f64) -> bool {
        self.bounds
            .iter()
            .all(|b| b.coeffs[0] * r1 + b.coeffs[1] * r2 + b.coeffs[2] * re2 <= b.value + tol)
    }
}
