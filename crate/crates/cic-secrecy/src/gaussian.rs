//! Closed-form rate regions for the Gaussian channel model
//!
//! ```text
//! Y1 = X1 + a*X2 + S1 + S2 + Z1
//! Y2 = b*X1 + X2 + S1 + S2 + Z2
//! ```
//!
//! with unit-variance noise, state variances K1 and K2, and average power
//! constraints P1 and P2. Covers the dirty-paper (binning) inner bound, the
//! strong-interference outer bound, the superposition inner bound, its
//! perfect-secrecy corollary, and the cross-gain threshold at which the two
//! inner bounds exchange dominance in R1.

use serde::{Deserialize, Serialize};

use crate::bounds::{RateBound, RegionConstraints};
use crate::error::{Error, Result};
use crate::info::gaussian_capacity;

/// The six scalars of the additive Gaussian model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianChannel {
    /// Transmit power of the primary user (linear).
    pub p1: f64,
    /// Transmit power of the cognitive user (linear).
    pub p2: f64,
    /// Variance of the state known at the cognitive transmitter.
    pub k1: f64,
    /// Variance of the state known at the cognitive receiver.
    pub k2: f64,
    /// Cross gain into receiver 1.
    pub a: f64,
    /// Cross gain into receiver 2.
    pub b: f64,
}

impl GaussianChannel {
    pub fn new(p1: f64, p2: f64, k1: f64, k2: f64, a: f64, b: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("k1", k1), ("k2", k2)] {
            if !(v >= 0.0) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain("cross gains must be finite".into()));
        }
        Ok(GaussianChannel {
            p1,
            p2,
            k1,
            k2,
            a,
            b,
        })
    }
}

/// Interference regime, decided by the cross gain into receiver 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interference {
    Weak,
    Strong,
}

/// `Weak` iff `a <= 1`; the boundary belongs to the weak regime.
pub fn classify_interference(ch: &GaussianChannel) -> Interference {
    if ch.a <= 1.0 {
        Interference::Weak
    } else {
        Interference::Strong
    }
}

/// Correlation coefficient of the dirty-paper inner bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpcParams {
    pub rho: f64,
}

impl GpcParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Domain(format!("rho must be in [0, 1], got {rho}")));
        }
        Ok(GpcParams { rho })
    }
}

/// Power-split parameters of the superposition inner bound.
///
/// `rho` is the fraction of P2 spent on the cognitive message
/// (P2'' = rho * P2), `rho1` the cooperation coefficient and `rho2` the
/// state-cooperation coefficient. The residual dirty-paper power
/// P2' = (1 - rho1^2 - rho2^2 - rho) * P2 must be non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpcParams {
    pub rho: f64,
    pub rho1: f64,
    pub rho2: f64,
}

impl SpcParams {
    pub fn new(rho: f64, rho1: f64, rho2: f64) -> Result<Self> {
        for (name, v) in [("rho", rho), ("rho1", rho1), ("rho2", rho2)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        let used = rho1 * rho1 + rho2 * rho2;
        if used > 1.0 + 1e-12 {
            return Err(Error::PowerSplit(format!(
                "rho1^2 + rho2^2 = {used} exceeds 1"
            )));
        }
        if rho > 1.0 - used + 1e-12 {
            return Err(Error::PowerSplit(format!(
                "rho = {rho} exceeds 1 - rho1^2 - rho2^2 = {}",
                1.0 - used
            )));
        }
        Ok(SpcParams { rho, rho1, rho2 })
    }

    /// All power on the cognitive message, no cooperation.
    pub fn perfect_secrecy() -> Self {
        SpcParams {
            rho: 1.0,
            rho1: 0.0,
            rho2: 0.0,
        }
    }
}

fn cap(x: f64) -> f64 {
    // All arguments below are sums/products of non-negative terms.
    gaussian_capacity(x).expect("non-negative capacity argument")
}

/// Dirty-paper (binning) inner bound for weak interference.
pub fn eval_gpc(ch: &GaussianChannel, p: &GpcParams) -> Result<RegionConstraints> {
    if ch.a > 1.0 {
        return Err(Error::WeakInterferenceRequired(ch.a));
    }
    let shrink = 1.0 - p.rho * p.rho;
    let r1 = cap(ch.p1 / (ch.k2 + 1.0));
    let r2 = cap(shrink * ch.p2);
    let re2 = r2 - cap(shrink * ch.a * ch.a * ch.p2);
    Ok(RegionConstraints::new(vec![
        RateBound::new("R1", [1.0, 0.0, 0.0], r1),
        RateBound::new("R2", [0.0, 1.0, 0.0], r2),
        RateBound::new("Re2", [0.0, 0.0, 1.0], re2),
    ]))
}

/// Capacity outer bound for strong interference (`a > 1`), where no secrecy
/// is possible: the Re2 constraint is exactly 0.
pub fn eval_outer_strong(ch: &GaussianChannel, rho: f64) -> Result<RegionConstraints> {
    if ch.a <= 1.0 {
        return Err(Error::StrongInterferenceRequired(ch.a));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must be in [0, 1], got {rho}")));
    }
    let shrink = 1.0 - rho * rho;
    let cross = 2.0 * rho * (ch.p1 * ch.p2).sqrt();
    let r2 = cap(shrink * ch.p2);
    let sum_a = cap(ch.p1 + ch.a * ch.a * ch.p2 + ch.a * cross);
    let sum_b = cap(ch.b * ch.b * ch.p1 + ch.p2 + ch.b * cross);
    Ok(RegionConstraints::new(vec![
        RateBound::new("R2", [0.0, 1.0, 0.0], r2),
        RateBound::new("R1+R2 (rx1)", [1.0, 1.0, 0.0], sum_a),
        RateBound::new("R1+R2 (rx2)", [1.0, 1.0, 0.0], sum_b),
        RateBound::new("Re2", [0.0, 0.0, 1.0], 0.0),
    ]))
}

/// Superposition inner bound for weak interference.
pub fn eval_spc(ch: &GaussianChannel, p: &SpcParams) -> Result<RegionConstraints> {
    if ch.a > 1.0 {
        return Err(Error::WeakInterferenceRequired(ch.a));
    }
    if ch.k1 <= 0.0 {
        return Err(Error::StateSingularity);
    }
    let p2s = p.rho * ch.p2; // P2'' = rho * P2
    let a2 = ch.a * ch.a;
    let coop = 2.0 * ch.a * p.rho1 * (ch.p1 * ch.p2).sqrt();
    let state_coop = 2.0 * ch.a * p.rho2 * (ch.p2 * ch.k1).sqrt();
    let r1 = cap(
        (ch.p1 + a2 * ch.p2 + ch.k1 + ch.k2 + 1.0 + coop + state_coop)
            / (ch.k1 * (a2 * p2s + ch.k2 + 1.0)),
    );
    let r2 = cap(p2s);
    let sum = cap(ch.b * ch.b * ch.p1
        + ch.p2
        + ch.k1
        + 2.0 * ch.b * p.rho1 * (ch.p1 * ch.p2).sqrt()
        + 2.0 * p.rho2 * (ch.p2 * ch.k1).sqrt())
        - 0.5 * ch.k1.log2();
    let re2 = r2 - cap(a2 * p2s / (ch.k2 + 1.0));
    Ok(RegionConstraints::new(vec![
        RateBound::new("R1", [1.0, 0.0, 0.0], r1),
        RateBound::new("R2", [0.0, 1.0, 0.0], r2),
        RateBound::new("R1+R2", [1.0, 1.0, 0.0], sum),
        RateBound::new("Re2", [0.0, 0.0, 1.0], re2),
    ]))
}

/// Perfect-secrecy corollary of the superposition bound: all cognitive power
/// on the confidential message. The R2 bound already is the secrecy rate.
pub fn eval_spc_perfect(ch: &GaussianChannel) -> Result<RegionConstraints> {
    if ch.a > 1.0 {
        return Err(Error::WeakInterferenceRequired(ch.a));
    }
    if ch.k1 <= 0.0 {
        return Err(Error::StateSingularity);
    }
    let a2 = ch.a * ch.a;
    let r1 = cap((ch.p1 + a2 * ch.p2 + ch.k1 + ch.k2 + 1.0) / (ch.k1 * (a2 * ch.p2 + ch.k2 + 1.0)));
    let r2 = cap(ch.p2) - cap(a2 * ch.p2 / (ch.k2 + 1.0));
    let sum = cap(ch.b * ch.b * ch.p1 + ch.p2 + ch.k1) - 0.5 * ch.k1.log2();
    Ok(RegionConstraints::new(vec![
        RateBound::new("R1", [1.0, 0.0, 0.0], r1),
        RateBound::new("R2", [0.0, 1.0, 0.0], r2),
        RateBound::new("R1+R2", [1.0, 1.0, 0.0], sum),
    ]))
}

/// Outcome of the cross-gain threshold computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Crossover {
    Defined {
        a_dagger: f64,
    },
    /// The quotient under the square root is not strictly positive and
    /// finite; the signs of numerator and denominator are reported.
    Undefined {
        numerator: f64,
        denominator: f64,
    },
}

impl Crossover {
    pub fn value(&self) -> Option<f64> {
        match self {
            Crossover::Defined { a_dagger } => Some(*a_dagger),
            Crossover::Undefined { .. } => None,
        }
    }
}

/// Cross gain at which the superposition and dirty-paper inner bounds give
/// the same primary rate. Below it superposition wins, above it dirty-paper
/// coding wins. Degenerate channels yield a diagnosed `Undefined` instead of
/// an error because parameter sweeps routinely cross the singular set.
pub fn crossover_a_dagger(ch: &GaussianChannel) -> Crossover {
    let numerator = (ch.k2 + 1.0) * (ch.p1 + ch.k1 + ch.k2 + 1.0) - ch.p1 * ch.k1 * (ch.k2 + 1.0);
    let denominator = ch.p1 * ch.p2 * ch.k1 - ch.p2 * (ch.k2 + 1.0);
    let quotient = numerator / denominator;
    if quotient.is_finite() && quotient > 0.0 {
        Crossover::Defined {
            a_dagger: quotient.sqrt(),
        }
    } else {
        Crossover::Undefined {
            numerator,
            denominator,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3_channel(a: f64) -> GaussianChannel {
        GaussianChannel::new(4.0, 4.0, 1.0, 1.0, a, 0.3).unwrap()
    }

    // Frozen from an independent high-precision evaluation of the closed
    // forms (mpmath, 30 digits).
    const C2: f64 = 0.792481250360578;
    const C4: f64 = 1.160964047443681;
    const GPC_RE2_A01: f64 = 1.132672283260497; // C(4) - C(0.04)
    const SPC_R1_A01: f64 = 1.077061572659710; // C(7.04/2.04)
    const SPC_SUM: f64 = 1.334513382754815; // C(5.36)
    const SPC_R2_A01: f64 = 1.146679471345296; // C(4) - C(0.02)
    const SPC_R1_A09: f64 = 0.781383377303480; // C(10.24/5.24)

    #[test]
    fn gpc_fig3_values() {
        let rc = eval_gpc(&fig3_channel(0.1), &GpcParams::new(0.0).unwrap()).unwrap();
        assert!((rc.value("R1") - C2).abs() < 1e-12);
        assert!((rc.value("R2") - C4).abs() < 1e-12);
        assert!((rc.value("Re2") - GPC_RE2_A01).abs() < 1e-12);
        assert!(rc.feasible);
    }

    #[test]
    fn gpc_full_correlation_zeroes_cognitive_rates() {
        let rc = eval_gpc(&fig3_channel(0.1), &GpcParams::new(1.0).unwrap()).unwrap();
        assert_eq!(rc.value("R2"), 0.0);
        assert_eq!(rc.value("Re2"), 0.0);
    }

    #[test]
    fn gpc_no_cross_link_means_full_secrecy() {
        for rho in [0.0, 0.3, 0.9] {
            let rc = eval_gpc(&fig3_channel(0.0), &GpcParams::new(rho).unwrap()).unwrap();
            assert!((rc.value("Re2") - rc.value("R2")).abs() < 1e-15);
        }
    }

    #[test]
    fn gpc_rejects_strong_interference() {
        let err = eval_gpc(&fig3_channel(1.5), &GpcParams::new(0.0).unwrap());
        assert!(matches!(err, Err(Error::WeakInterferenceRequired(_))));
    }

    #[test]
    fn outer_strong_values() {
        let ch = GaussianChannel::new(4.0, 4.0, 1.0, 1.0, 2.0, 1.0).unwrap();
        let rc = eval_outer_strong(&ch, 0.0).unwrap();
        assert!((rc.value("R2") - C4).abs() < 1e-12);
        // C(P1 + a^2 P2) = C(20), C(b^2 P1 + P2) = C(8).
        assert!((rc.value("R1+R2 (rx1)") - 2.196158711389380).abs() < 1e-12);
        assert!((rc.value("R1+R2 (rx2)") - 1.584962500721156).abs() < 1e-12);
        assert_eq!(rc.value("Re2"), 0.0);
    }

    #[test]
    fn outer_strong_symmetric_sum_bounds_coincide() {
        let ch = GaussianChannel::new(3.0, 3.0, 0.5, 0.5, 2.0, 2.0).unwrap();
        let rc = eval_outer_strong(&ch, 1.0).unwrap();
        let expected = gaussian_capacity((1.0 + 2.0) * (1.0 + 2.0) * 3.0).unwrap();
        assert!((rc.value("R1+R2 (rx1)") - expected).abs() < 1e-12);
        assert!((rc.value("R1+R2 (rx2)") - expected).abs() < 1e-12);
    }

    #[test]
    fn outer_strong_requires_strong() {
        let ch = fig3_channel(0.5);
        assert!(matches!(
            eval_outer_strong(&ch, 0.0),
            Err(Error::StrongInterferenceRequired(_))
        ));
    }

    #[test]
    fn spc_fig3_values() {
        let p = SpcParams::new(1.0, 0.0, 0.0).unwrap();
        let rc = eval_spc(&fig3_channel(0.1), &p).unwrap();
        assert!((rc.value("R1") - SPC_R1_A01).abs() < 1e-12);
        assert!((rc.value("R2") - C4).abs() < 1e-12);
        assert!((rc.value("R1+R2") - SPC_SUM).abs() < 1e-12);
        assert!((rc.value("Re2") - SPC_R2_A01).abs() < 1e-12);
    }

    #[test]
    fn spc_zero_message_power() {
        let p = SpcParams::new(0.0, 0.0, 0.0).unwrap();
        let rc = eval_spc(&fig3_channel(0.1), &p).unwrap();
        assert_eq!(rc.value("R2"), 0.0);
        assert_eq!(rc.value("Re2"), 0.0);
    }

    #[test]
    fn spc_no_cross_link_full_secrecy() {
        let p = SpcParams::new(1.0, 0.0, 0.0).unwrap();
        let rc = eval_spc(&fig3_channel(0.0), &p).unwrap();
        assert!((rc.value("Re2") - rc.value("R2")).abs() < 1e-15);
    }

    #[test]
    fn spc_rejects_zero_k1() {
        let ch = GaussianChannel::new(4.0, 4.0, 0.0, 1.0, 0.1, 0.3).unwrap();
        let p = SpcParams::new(1.0, 0.0, 0.0).unwrap();
        assert!(matches!(eval_spc(&ch, &p), Err(Error::StateSingularity)));
    }

    #[test]
    fn spc_rejects_infeasible_split() {
        assert!(SpcParams::new(0.5, 0.8, 0.5).is_err()); // rho1^2+rho2^2 = 0.89, rho > 0.11
        assert!(SpcParams::new(0.05, 0.8, 0.5).is_ok());
    }

    #[test]
    fn spc_perfect_matches_spc_at_corner() {
        let ch = fig3_channel(0.1);
        let corner = eval_spc(&ch, &SpcParams::perfect_secrecy()).unwrap();
        let perfect = eval_spc_perfect(&ch).unwrap();
        assert!((perfect.value("R1") - corner.value("R1")).abs() < 1e-12);
        assert!((perfect.value("R2") - corner.value("Re2")).abs() < 1e-12);
        assert!((perfect.value("R1+R2") - corner.value("R1+R2")).abs() < 1e-12);
    }

    #[test]
    fn spc_perfect_a09_r1_below_gpc() {
        let rc = eval_spc_perfect(&fig3_channel(0.9)).unwrap();
        assert!((rc.value("R1") - SPC_R1_A09).abs() < 1e-12);
        assert!(rc.value("R1") < C2);
    }

    #[test]
    fn spc_perfect_no_cross_link() {
        let rc = eval_spc_perfect(&fig3_channel(0.0)).unwrap();
        assert!((rc.value("R2") - C4).abs() < 1e-12);
    }

    #[test]
    fn crossover_fig3() {
        let ch = fig3_channel(0.0);
        match crossover_a_dagger(&ch) {
            Crossover::Defined { a_dagger } => {
                assert!((a_dagger - 0.866).abs() < 1e-3);
                assert!((a_dagger - 0.75f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("expected defined crossover, got {other:?}"),
        }
    }

    #[test]
    fn crossover_unit_quotient() {
        // Pick parameters where numerator == denominator != 0:
        // P1=2, K1=2, K2=0 gives numerator = 1*(2+2+0+1) - 2*2*1 = 1,
        // denominator = 2*P2*2 - P2*1 = 3 P2; choose P2 = 1/3.
        let ch = GaussianChannel::new(2.0, 1.0 / 3.0, 2.0, 0.0, 0.5, 0.3).unwrap();
        match crossover_a_dagger(&ch) {
            Crossover::Defined { a_dagger } => assert!((a_dagger - 1.0).abs() < 1e-12),
            other => panic!("expected defined crossover, got {other:?}"),
        }
    }

    #[test]
    fn crossover_degenerate_denominator() {
        // P1*K1 = K2 + 1 makes the denominator vanish for any P2.
        let ch = GaussianChannel::new(2.0, 4.0, 1.0, 1.0, 0.5, 0.3).unwrap();
        match crossover_a_dagger(&ch) {
            Crossover::Undefined { denominator, .. } => {
                assert!(denominator.abs() < 1e-12);
            }
            other => panic!("expected undefined crossover, got {other:?}"),
        }
    }

    #[test]
    fn interference_classification() {
        assert_eq!(
            classify_interference(&fig3_channel(0.5)),
            Interference::Weak
        );
        assert_eq!(
            classify_interference(&fig3_channel(1.0)),
            Interference::Weak
        );
        assert_eq!(
            classify_interference(&fig3_channel(1.5)),
            Interference::Strong
        );
    }
}
