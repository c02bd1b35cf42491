//! Finite-alphabet channel model and factorized input distributions.
//!
//! A [`DmcChannel`] is the memoryless law `P(Y1, Y2 | X1, X2, S1, S2)`
//! together with the state priors. Inputs are supplied as a
//! [`FactoredInput`]: an assembled joint distribution over the channel
//! inputs and the auxiliary variables of one coding scheme, built by the
//! scheme-specific constructors in this module. Evaluators in [`eval`] join
//! an input with the channel law and compute every bound by exact
//! mutual-information sums.
//!
//! Variable names used throughout: `x1a, x1b, u, v, t, v1, v2, x1, x2,
//! s1, s2` for inputs and auxiliaries, `y1, y2` for outputs.

pub mod eval;
pub mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{flatten, unflatten, FiniteDist, VarSet, NORM_TOL};

/// Prior over the channel state pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatePrior {
    /// Independent marginals `p(s1) p(s2)`.
    Independent { s1: Vec<f64>, s2: Vec<f64> },
    /// A full joint over (s1, s2), row-major with s2 fastest. Needed for the
    /// symmetric case where both sides see the same state.
    Joint {
        probs: Vec<f64>,
        s1_size: usize,
        s2_size: usize,
    },
}

impl StatePrior {
    /// Degenerate joint with `S1 = S2 = S` distributed as `p`.
    pub fn symmetric(p: &[f64]) -> Self {
        let k = p.len();
        let mut probs = vec![0.0; k * k];
        for (s, &mass) in p.iter().enumerate() {
            probs[s * k + s] = mass;
        }
        StatePrior::Joint {
            probs,
            s1_size: k,
            s2_size: k,
        }
    }

    pub fn sizes(&self) -> (usize, usize) {
        match self {
            StatePrior::Independent { s1, s2 } => (s1.len(), s2.len()),
            StatePrior::Joint {
                s1_size, s2_size, ..
            } => (*s1_size, *s2_size),
        }
    }

    pub fn prob(&self, s1: usize, s2: usize) -> f64 {
        match self {
            StatePrior::Independent { s1: p1, s2: p2 } => p1[s1] * p2[s2],
            StatePrior::Joint { probs, s2_size, .. } => probs[s1 * s2_size + s2],
        }
    }

    fn validate(&self) -> Result<()> {
        let check = |probs: &[f64]| -> Result<()> {
            if probs.is_empty() {
                return Err(Error::Invalid("empty state prior".into()));
            }
            let mut sum = 0.0;
            for &p in probs {
                if p < 0.0 {
                    return Err(Error::NegativeProbability(p));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(sum));
            }
            Ok(())
        };
        match self {
            StatePrior::Independent { s1, s2 } => {
                check(s1)?;
                check(s2)
            }
            StatePrior::Joint {
                probs,
                s1_size,
                s2_size,
            } => {
                if probs.len() != s1_size * s2_size {
                    return Err(Error::ShapeMismatch {
                        got: probs.len(),
                        want: s1_size * s2_size,
                    });
                }
                check(probs)
            }
        }
    }

    /// True iff the two states are the same variable: equal alphabets and
    /// zero mass off the diagonal.
    pub fn is_symmetric(&self) -> bool {
        match self {
            StatePrior::Independent { s1, s2 } => s1.len() == 1 && s2.len() == 1,
            StatePrior::Joint {
                probs,
                s1_size,
                s2_size,
            } => {
                s1_size == s2_size
                    && probs
                        .iter()
                        .enumerate()
                        .all(|(i, &p)| i / s2_size == i % s2_size || p == 0.0)
            }
        }
    }
}

/// Memoryless channel law with state priors and all alphabet sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcChannel {
    pub x1: usize,
    pub x2: usize,
    pub s1: usize,
    pub s2: usize,
    pub y1: usize,
    pub y2: usize,
    /// `P(y1, y2 | x1, x2, s1, s2)`, row-major over (x1, x2, s1, s2, y1, y2).
    pub law: Vec<f64>,
    pub states: StatePrior,
}

impl DmcChannel {
    pub fn new(sizes: [usize; 6], law: Vec<f64>, states: StatePrior) -> Result<Self> {
        let [x1, x2, s1, s2, y1, y2] = sizes;
        for (name, k) in [
            ("x1", x1),
            ("x2", x2),
            ("s1", s1),
            ("s2", s2),
            ("y1", y1),
            ("y2", y2),
        ] {
            if k < 1 {
                return Err(Error::EmptyAlphabet(name.into()));
            }
        }
        let want = x1 * x2 * s1 * s2 * y1 * y2;
        if law.len() != want {
            return Err(Error::ShapeMismatch {
                got: law.len(),
                want,
            });
        }
        let slice = y1 * y2;
        for (i, chunk) in law.chunks(slice).enumerate() {
            let mut sum = 0.0;
            for &p in chunk {
                if p < 0.0 {
                    return Err(Error::NegativeProbability(p));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > NORM_TOL {
                return Err(Error::Invalid(format!(
                    "conditional slice {i} of the channel law sums to {sum}"
                )));
            }
        }
        states.validate()?;
        let (ps1, ps2) = states.sizes();
        if (ps1, ps2) != (s1, s2) {
            return Err(Error::ShapeMismatch {
                got: ps1 * ps2,
                want: s1 * s2,
            });
        }
        Ok(DmcChannel {
            x1,
            x2,
            s1,
            s2,
            y1,
            y2,
            law,
            states,
        })
    }

    /// Build the law from a function `(x1, x2, s1, s2, y1, y2) -> prob`.
    pub fn from_fn(
        sizes: [usize; 6],
        states: StatePrior,
        f: impl Fn(usize, usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let [x1, x2, s1, s2, y1, y2] = sizes;
        let mut law = Vec::with_capacity(x1 * x2 * s1 * s2 * y1 * y2);
        for a in 0..x1 {
            for b in 0..x2 {
                for c in 0..s1 {
                    for d in 0..s2 {
                        for e in 0..y1 {
                            for g in 0..y2 {
                                law.push(f(a, b, c, d, e, g));
                            }
                        }
                    }
                }
            }
        }
        DmcChannel::new(sizes, law, states)
    }

    pub fn law_prob(
        &self,
        x1: usize,
        x2: usize,
        s1: usize,
        s2: usize,
        y1: usize,
        y2: usize,
    ) -> f64 {
        let idx = flatten(
            &[x1, x2, s1, s2, y1, y2],
            &[self.x1, self.x2, self.s1, self.s2, self.y1, self.y2],
        );
        self.law[idx]
    }

    /// Join an input distribution (which must contain x1, x2, s1, s2) with
    /// the channel law, producing the full joint including y1 and y2.
    pub fn extend(&self, input: &FiniteDist) -> Result<FiniteDist> {
        for name in ["x1", "x2", "s1", "s2"] {
            input.var_index(name)?;
        }
        for (name, want) in [
            ("x1", self.x1),
            ("x2", self.x2),
            ("s1", self.s1),
            ("s2", self.s2),
        ] {
            let i = input.var_index(name)?;
            let got = input.variables()[i].size;
            if got != want {
                return Err(Error::ShapeMismatch { got, want });
            }
        }
        let in_sizes: Vec<usize> = input.variables().iter().map(|v| v.size).collect();
        let pos: Vec<usize> = ["x1", "x2", "s1", "s2"]
            .iter()
            .map(|n| input.var_index(n).unwrap())
            .collect();
        let mut vars: Vec<(String, usize)> = input
            .variables()
            .iter()
            .map(|v| (v.name.clone(), v.size))
            .collect();
        vars.push(("y1".into(), self.y1));
        vars.push(("y2".into(), self.y2));
        let n_in = in_sizes.len();
        FiniteDist::from_fn(vars, |idx| {
            let p_in = input.probs()[flatten(&idx[..n_in], &in_sizes)];
            if p_in == 0.0 {
                return 0.0;
            }
            p_in * self.law_prob(
                idx[pos[0]],
                idx[pos[1]],
                idx[pos[2]],
                idx[pos[3]],
                idx[n_in],
                idx[n_in + 1],
            )
        })
    }

    /// Check that a joint's (s1, s2) marginal equals the channel priors.
    fn check_state_marginal(&self, joint: &FiniteDist) -> Result<()> {
        let m = joint.marginalize(&VarSet::of(["s1", "s2"]))?;
        let i1 = m.var_index("s1")?;
        let sizes: Vec<usize> = m.variables().iter().map(|v| v.size).collect();
        let mut idx = vec![0usize; sizes.len()];
        for (flat, &p) in m.probs().iter().enumerate() {
            unflatten(flat, &sizes, &mut idx);
            let (a, b) = if i1 == 0 {
                (idx[0], idx[1])
            } else {
                (idx[1], idx[0])
            };
            if (p - self.states.prob(a, b)).abs() > 1e-9 {
                return Err(Error::Invalid(format!(
                    "input marginal on (s1={a}, s2={b}) is {p}, channel prior is {}",
                    self.states.prob(a, b)
                )));
            }
        }
        Ok(())
    }
}

/// The coding-scheme factorization an input distribution follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Two-layer binning against the primary codewords and the state:
    /// variables (x1a, x1b, u, v, x1, x2, s1, s2).
    Binning,
    /// Auxiliary-variable outer bound: variables (v1, v2, u, x1, x2, s1, s2).
    Outer1,
    /// Layered superposition: variables (t, u, v, x1, x2, s1, s2).
    Superposition,
    /// Layered outer bound: same variable set as `Superposition`.
    Outer3,
    /// Symmetric-state reduction: variables (u, x1, x2, s1, s2) with a
    /// degenerate state pair.
    Symmetric,
    /// Plain input `p(x1, x2, s1, s2)` with no auxiliaries, for the
    /// input-only outer bound.
    Plain,
}

/// An input distribution assembled under one scheme's factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredInput {
    pub scheme: Scheme,
    /// Joint over the scheme's input and auxiliary variables (no outputs).
    pub joint: FiniteDist,
}

impl FactoredInput {
    /// Wrap a pre-assembled joint after validating its variable set and the
    /// state marginal against the channel.
    pub fn from_joint(ch: &DmcChannel, scheme: Scheme, joint: FiniteDist) -> Result<Self> {
        for name in scheme_vars(scheme) {
            joint.var_index(name)?;
        }
        ch.check_state_marginal(&joint)?;
        Ok(FactoredInput { scheme, joint })
    }

    pub fn expect_scheme(&self, want: Scheme) -> Result<()> {
        if self.scheme != want {
            return Err(Error::SchemeMismatch {
                got: format!("{:?}", self.scheme),
                want: format!("{want:?}"),
            });
        }
        Ok(())
    }

    /// Marginalize this input down to (x1, x2, s1, s2), preserving any
    /// input-state correlation, for use with the input-only outer bound.
    pub fn induced_plain(&self, ch: &DmcChannel) -> Result<FactoredInput> {
        let joint = self
            .joint
            .marginalize(&VarSet::of(["x1", "x2", "s1", "s2"]))?;
        FactoredInput::from_joint(ch, Scheme::Plain, joint)
    }
}

fn scheme_vars(scheme: Scheme) -> &'static [&'static str] {
    match scheme {
        Scheme::Binning => &["x1a", "x1b", "u", "v", "x1", "x2", "s1", "s2"],
        Scheme::Outer1 => &["v1", "v2", "u", "x1", "x2", "s1", "s2"],
        Scheme::Superposition | Scheme::Outer3 => &["t", "u", "v", "x1", "x2", "s1", "s2"],
        Scheme::Symmetric => &["u", "x1", "x2", "s1", "s2"],
        Scheme::Plain => &["x1", "x2", "s1", "s2"],
    }
}

fn check_slice_norm(label: &str, sum: f64) -> Result<()> {
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!(
            "conditional `{label}` sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Design for the binning-scheme input factorization
/// `p(x1a) p(x1b|x1a) [x1 = f(x1a,x1b)] p(u|x1a,x1b,s1) p(v|u,x1a,x1b,s1)
/// [x2 = g(u,v,x1,s1)]`.
pub struct BinningDesign<'a> {
    pub x1a: usize,
    pub x1b: usize,
    pub u: usize,
    pub v: usize,
    pub p_x1a: &'a dyn Fn(usize) -> f64,
    /// `(x1a, x1b) -> prob`.
    pub p_x1b: &'a dyn Fn(usize, usize) -> f64,
    /// `(x1a, x1b) -> x1`.
    pub x1_map: &'a dyn Fn(usize, usize) -> usize,
    /// `(x1a, x1b, s1, u) -> prob`.
    pub p_u: &'a dyn Fn(usize, usize, usize, usize) -> f64,
    /// `(u, x1a, x1b, s1, v) -> prob`.
    pub p_v: &'a dyn Fn(usize, usize, usize, usize, usize) -> f64,
    /// `(u, v, x1, s1) -> x2`.
    pub x2_map: &'a dyn Fn(usize, usize, usize, usize) -> usize,
}

/// Assemble a binning-scheme input over (x1a, x1b, u, v, x1, x2, s1, s2).
pub fn binning_input(ch: &DmcChannel, d: &BinningDesign) -> Result<FactoredInput> {
    let mut sum = 0.0;
    for a in 0..d.x1a {
        sum += (d.p_x1a)(a);
    }
    check_slice_norm("p(x1a)", sum)?;
    for a in 0..d.x1a {
        let mut sum = 0.0;
        for b in 0..d.x1b {
            sum += (d.p_x1b)(a, b);
            let x1 = (d.x1_map)(a, b);
            if x1 >= ch.x1 {
                return Err(Error::Invalid(format!("x1 map value {x1} out of range")));
            }
        }
        check_slice_norm("p(x1b|x1a)", sum)?;
        for b in 0..d.x1b {
            for s in 0..ch.s1 {
                let mut su = 0.0;
                for u in 0..d.u {
                    su += (d.p_u)(a, b, s, u);
                    let mut sv = 0.0;
                    for v in 0..d.v {
                        sv += (d.p_v)(u, a, b, s, v);
                        let x2 = (d.x2_map)(u, v, (d.x1_map)(a, b), s);
                        if x2 >= ch.x2 {
                            return Err(Error::Invalid(format!("x2 map value {x2} out of range")));
                        }
                    }
                    check_slice_norm("p(v|u,x1a,x1b,s1)", sv)?;
                }
                check_slice_norm("p(u|x1a,x1b,s1)", su)?;
            }
        }
    }
    let vars: Vec<(&str, usize)> = vec![
        ("x1a", d.x1a),
        ("x1b", d.x1b),
        ("u", d.u),
        ("v", d.v),
        ("x1", ch.x1),
        ("x2", ch.x2),
        ("s1", ch.s1),
        ("s2", ch.s2),
    ];
    let joint = FiniteDist::from_fn(vars, |idx| {
        let [a, b, u, v, x1, x2, s1, s2] = [
            idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], idx[6], idx[7],
        ];
        if x1 != (d.x1_map)(a, b) || x2 != (d.x2_map)(u, v, x1, s1) {
            return 0.0;
        }
        ch.states.prob(s1, s2)
            * (d.p_x1a)(a)
            * (d.p_x1b)(a, b)
            * (d.p_u)(a, b, s1, u)
            * (d.p_v)(u, a, b, s1, v)
    })?;
    FactoredInput::from_joint(ch, Scheme::Binning, joint)
}

/// Design for the layered factorization
/// `p(x1) p(t|x1,s1) p(u|t,x1,s1) p(v|t,u,x1,s1) p(x2|t,u,v,x1,s1)`,
/// shared by the superposition inner bound and the layered outer bound.
pub struct LayeredDesign<'a> {
    pub t: usize,
    pub u: usize,
    pub v: usize,
    pub p_x1: &'a dyn Fn(usize) -> f64,
    /// `(x1, s1, t) -> prob`.
    pub p_t: &'a dyn Fn(usize, usize, usize) -> f64,
    /// `(t, x1, s1, u) -> prob`.
    pub p_u: &'a dyn Fn(usize, usize, usize, usize) -> f64,
    /// `(t, u, x1, s1, v) -> prob`.
    pub p_v: &'a dyn Fn(usize, usize, usize, usize, usize) -> f64,
    /// `(t, u, v, x1, s1, x2) -> prob`.
    pub p_x2: &'a dyn Fn(usize, usize, usize, usize, usize, usize) -> f64,
}

/// Assemble a layered input over (t, u, v, x1, x2, s1, s2). The scheme tag
/// selects how it will be evaluated; only `Superposition` and `Outer3` are
/// accepted. Requires independent state priors.
pub fn layered_input(ch: &DmcChannel, scheme: Scheme, d: &LayeredDesign) -> Result<FactoredInput> {
    if !matches!(scheme, Scheme::Superposition | Scheme::Outer3) {
        return Err(Error::SchemeMismatch {
            got: format!("{scheme:?}"),
            want: "Superposition or Outer3".into(),
        });
    }
    let mut sum = 0.0;
    for x1 in 0..ch.x1 {
        sum += (d.p_x1)(x1);
    }
    check_slice_norm("p(x1)", sum)?;
    for x1 in 0..ch.x1 {
        for s in 0..ch.s1 {
            let mut st = 0.0;
            for t in 0..d.t {
                st += (d.p_t)(x1, s, t);
                let mut su = 0.0;
                for u in 0..d.u {
                    su += (d.p_u)(t, x1, s, u);
                    let mut sv = 0.0;
                    for v in 0..d.v {
                        sv += (d.p_v)(t, u, x1, s, v);
                        let mut sx = 0.0;
                        for x2 in 0..ch.x2 {
                            sx += (d.p_x2)(t, u, v, x1, s, x2);
                        }
                        check_slice_norm("p(x2|t,u,v,x1,s1)", sx)?;
                    }
                    check_slice_norm("p(v|t,u,x1,s1)", sv)?;
                }
                check_slice_norm("p(u|t,x1,s1)", su)?;
            }
            check_slice_norm("p(t|x1,s1)", st)?;
        }
    }
    let vars: Vec<(&str, usize)> = vec![
        ("t", d.t),
        ("u", d.u),
        ("v", d.v),
        ("x1", ch.x1),
        ("x2", ch.x2),
        ("s1", ch.s1),
        ("s2", ch.s2),
    ];
    let joint = FiniteDist::from_fn(vars, |idx| {
        let [t, u, v, x1, x2, s1, s2] = [idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], idx[6]];
        ch.states.prob(s1, s2)
            * (d.p_x1)(x1)
            * (d.p_t)(x1, s1, t)
            * (d.p_u)(t, x1, s1, u)
            * (d.p_v)(t, u, x1, s1, v)
            * (d.p_x2)(t, u, v, x1, s1, x2)
    })?;
    FactoredInput::from_joint(ch, scheme, joint)
}

/// Design for the auxiliary-variable outer-bound factorization
/// `p(v1) p(v2) p(u|v1,v2) p(x1|v1) p(x2|u,v1,v2,s1)`.
pub struct Outer1Design<'a> {
    pub v1: usize,
    pub v2: usize,
    pub u: usize,
    pub p_v1: &'a dyn Fn(usize) -> f64,
    pub p_v2: &'a dyn Fn(usize) -> f64,
    /// `(v1, v2, u) -> prob`.
    pub p_u: &'a dyn Fn(usize, usize, usize) -> f64,
    /// `(v1, x1) -> prob`.
    pub p_x1: &'a dyn Fn(usize, usize) -> f64,
    /// `(u, v1, v2, s1, x2) -> prob`.
    pub p_x2: &'a dyn Fn(usize, usize, usize, usize, usize) -> f64,
}

/// Assemble an input over (v1, v2, u, x1, x2, s1, s2) for the
/// auxiliary-variable outer bound. Requires independent state priors.
pub fn outer1_input(ch: &DmcChannel, d: &Outer1Design) -> Result<FactoredInput> {
    if !matches!(ch.states, StatePrior::Independent { .. }) {
        return Err(Error::Invalid(
            "the auxiliary-variable outer bound requires independent state priors".into(),
        ));
    }
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for v1 in 0..d.v1 {
        s1 += (d.p_v1)(v1);
    }
    for v2 in 0..d.v2 {
        s2 += (d.p_v2)(v2);
    }
    check_slice_norm("p(v1)", s1)?;
    check_slice_norm("p(v2)", s2)?;
    for v1 in 0..d.v1 {
        let mut sx = 0.0;
        for x1 in 0..ch.x1 {
            sx += (d.p_x1)(v1, x1);
        }
        check_slice_norm("p(x1|v1)", sx)?;
        for v2 in 0..d.v2 {
            let mut su = 0.0;
            for u in 0..d.u {
                su += (d.p_u)(v1, v2, u);
                for s in 0..ch.s1 {
                    let mut sx2 = 0.0;
                    for x2 in 0..ch.x2 {
                        sx2 += (d.p_x2)(u, v1, v2, s, x2);
                    }
                    check_slice_norm("p(x2|u,v1,v2,s1)", sx2)?;
                }
            }
            check_slice_norm("p(u|v1,v2)", su)?;
        }
    }
    let vars: Vec<(&str, usize)> = vec![
        ("v1", d.v1),
        ("v2", d.v2),
        ("u", d.u),
        ("x1", ch.x1),
        ("x2", ch.x2),
        ("s1", ch.s1),
        ("s2", ch.s2),
    ];
    let joint = FiniteDist::from_fn(vars, |idx| {
        let [v1, v2, u, x1, x2, s1, s2] = [idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], idx[6]];
        ch.states.prob(s1, s2)
            * (d.p_v1)(v1)
            * (d.p_v2)(v2)
            * (d.p_u)(v1, v2, u)
            * (d.p_x1)(v1, x1)
            * (d.p_x2)(u, v1, v2, s1, x2)
    })?;
    FactoredInput::from_joint(ch, Scheme::Outer1, joint)
}

/// Design for the symmetric-state factorization
/// `p(s) p(x1) p(u|x1,s) p(x2|u,x1,s)` with `S1 = S2 = S`.
pub struct SymmetricDesign<'a> {
    pub u: usize,
    pub p_x1: &'a dyn Fn(usize) -> f64,
    /// `(x1, s, u) -> prob`.
    pub p_u: &'a dyn Fn(usize, usize, usize) -> f64,
    /// `(u, x1, s, x2) -> prob`.
    pub p_x2: &'a dyn Fn(usize, usize, usize, usize) -> f64,
}

/// Assemble a symmetric-state input over (u, x1, x2, s1, s2). The channel
/// must carry a degenerate (diagonal) joint state prior.
pub fn symmetric_input(ch: &DmcChannel, d: &SymmetricDesign) -> Result<FactoredInput> {
    if !ch.states.is_symmetric() || ch.s1 != ch.s2 {
        return Err(Error::AsymmetricStates(
            "the state prior is not a degenerate diagonal joint".into(),
        ));
    }
    let mut sx = 0.0;
    for x1 in 0..ch.x1 {
        sx += (d.p_x1)(x1);
    }
    check_slice_norm("p(x1)", sx)?;
    for x1 in 0..ch.x1 {
        for s in 0..ch.s1 {
            let mut su = 0.0;
            for u in 0..d.u {
                su += (d.p_u)(x1, s, u);
                let mut sx2 = 0.0;
                for x2 in 0..ch.x2 {
                    sx2 += (d.p_x2)(u, x1, s, x2);
                }
                check_slice_norm("p(x2|u,x1,s)", sx2)?;
            }
            check_slice_norm("p(u|x1,s)", su)?;
        }
    }
    let vars: Vec<(&str, usize)> = vec![
        ("u", d.u),
        ("x1", ch.x1),
        ("x2", ch.x2),
        ("s1", ch.s1),
        ("s2", ch.s2),
    ];
    let joint = FiniteDist::from_fn(vars, |idx| {
        let [u, x1, x2, s1, s2] = [idx[0], idx[1], idx[2], idx[3], idx[4]];
        ch.states.prob(s1, s2) * (d.p_x1)(x1) * (d.p_u)(x1, s1, u) * (d.p_x2)(u, x1, s1, x2)
    })?;
    FactoredInput::from_joint(ch, Scheme::Symmetric, joint)
}

/// Assemble a plain input `p(x1, x2) p(s1, s2)` (inputs independent of the
/// states) for the input-only outer bound. `p_x1x2` is row-major with x2
/// fastest.
pub fn plain_input(ch: &DmcChannel, p_x1x2: &[f64]) -> Result<FactoredInput> {
    if p_x1x2.len() != ch.x1 * ch.x2 {
        return Err(Error::ShapeMismatch {
            got: p_x1x2.len(),
            want: ch.x1 * ch.x2,
        });
    }
    let vars: Vec<(&str, usize)> = vec![("x1", ch.x1), ("x2", ch.x2), ("s1", ch.s1), ("s2", ch.s2)];
    let joint = FiniteDist::from_fn(vars, |idx| {
        p_x1x2[idx[0] * ch.x2 + idx[1]] * ch.states.prob(idx[2], idx[3])
    })?;
    FactoredInput::from_joint(ch, Scheme::Plain, joint)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two clean parallel binary channels, no state: Y1 = X1, Y2 = X2.
    pub(crate) fn clean_parallel() -> DmcChannel {
        DmcChannel::from_fn(
            [2, 2, 1, 1, 2, 2],
            StatePrior::Independent {
                s1: vec![1.0],
                s2: vec![1.0],
            },
            |x1, x2, _, _, y1, y2| if y1 == x1 && y2 == x2 { 1.0 } else { 0.0 },
        )
        .unwrap()
    }

    pub(crate) fn uniform2(_: usize) -> f64 {
        0.5
    }

    #[test]
    fn channel_rejects_unnormalized_slice() {
        let r = DmcChannel::from_fn(
            [2, 1, 1, 1, 2, 1],
            StatePrior::Independent {
                s1: vec![1.0],
                s2: vec![1.0],
            },
            |_, _, _, _, _, _| 0.4,
        );
        assert!(r.is_err());
    }

    #[test]
    fn symmetric_prior_detection() {
        let p = StatePrior::symmetric(&[0.5, 0.5]);
        assert!(p.is_symmetric());
        let q = StatePrior::Independent {
            s1: vec![0.5, 0.5],
            s2: vec![0.5, 0.5],
        };
        assert!(!q.is_symmetric());
        let trivial = StatePrior::Independent {
            s1: vec![1.0],
            s2: vec![1.0],
        };
        assert!(trivial.is_symmetric());
    }

    #[test]
    fn binning_input_assembles_and_marginals_match() {
        let ch = clean_parallel();
        let f = binning_input(
            &ch,
            &BinningDesign {
                x1a: 2,
                x1b: 1,
                u: 1,
                v: 2,
                p_x1a: &uniform2,
                p_x1b: &|_, _| 1.0,
                x1_map: &|a, _| a,
                p_u: &|_, _, _, _| 1.0,
                p_v: &|_, _, _, _, _| 0.5,
                x2_map: &|_, v, _, _| v,
            },
        )
        .unwrap();
        let m = f.joint.marginalize(&VarSet::of(["x1", "x2"])).unwrap();
        for &p in m.probs() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn binning_input_rejects_bad_slice() {
        let ch = clean_parallel();
        let r = binning_input(
            &ch,
            &BinningDesign {
                x1a: 2,
                x1b: 1,
                u: 1,
                v: 2,
                p_x1a: &|_| 0.7,
                p_x1b: &|_, _| 1.0,
                x1_map: &|a, _| a,
                p_u: &|_, _, _, _| 1.0,
                p_v: &|_, _, _, _, _| 0.5,
                x2_map: &|_, v, _, _| v,
            },
        );
        assert!(r.is_err());
    }

    #[test]
    fn extend_produces_channel_outputs() {
        let ch = clean_parallel();
        let f = plain_input(&ch, &[0.25; 4]).unwrap();
        let w = ch.extend(&f.joint).unwrap();
        assert!((w.mi(&["x1"], &["y1"], &[]).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.mi(&["x2"], &["y2"], &[]).unwrap() - 1.0).abs() < 1e-12);
        assert!(w.mi(&["x2"], &["y1"], &[]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn induced_plain_keeps_state_correlation() {
        // Channel with a binary state seen by x2's encoder.
        let ch = DmcChannel::from_fn(
            [2, 2, 2, 1, 2, 2],
            StatePrior::Independent {
                s1: vec![0.5, 0.5],
                s2: vec![1.0],
            },
            |x1, x2, s1, _, y1, y2| {
                if y1 == x1 && y2 == (x2 + s1) % 2 {
                    1.0
                } else {
                    0.0
                }
            },
        )
        .unwrap();
        let f = binning_input(
            &ch,
            &BinningDesign {
                x1a: 2,
                x1b: 1,
                u: 1,
                v: 2,
                p_x1a: &uniform2,
                p_x1b: &|_, _| 1.0,
                x1_map: &|a, _| a,
                p_u: &|_, _, _, _| 1.0,
                p_v: &|_, _, _, _, _| 0.5,
                // x2 pre-cancels the state, so x2 correlates with s1.
                x2_map: &|_, v, _, s| (v + s) % 2,
            },
        )
        .unwrap();
        let plain = f.induced_plain(&ch).unwrap();
        assert_eq!(plain.scheme, Scheme::Plain);
        let mi = plain.joint.mi(&["x2"], &["s1"], &[]).unwrap();
        assert!(mi.abs() < 1e-12); // v uniform keeps x2 marginally uniform
        let w = ch.extend(&plain.joint).unwrap();
        assert!((w.mi(&["x2"], &["y2"], &["s1"]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scheme_mismatch_detected() {
        let ch = clean_parallel();
        let f = plain_input(&ch, &[0.25; 4]).unwrap();
        assert!(f.expect_scheme(Scheme::Binning).is_err());
        assert!(f.expect_scheme(Scheme::Plain).is_ok());
    }

    #[test]
    fn symmetric_input_requires_symmetric_prior() {
        let ch = clean_parallel(); // trivial states count as symmetric
        let d = SymmetricDesign {
            u: 1,
            p_x1: &uniform2,
            p_u: &|_, _, _| 1.0,
            p_x2: &|_, _, _, x2| if x2 == 0 { 1.0 } else { 0.0 },
        };
        assert!(symmetric_input(&ch, &d).is_ok());
        let asym = DmcChannel::from_fn(
            [2, 2, 2, 1, 2, 2],
            StatePrior::Independent {
                s1: vec![0.5, 0.5],
                s2: vec![1.0],
            },
            |x1, x2, _, _, y1, y2| if y1 == x1 && y2 == x2 { 1.0 } else { 0.0 },
        )
        .unwrap();
        assert!(matches!(
            symmetric_input(&asym, &d),
            Err(Error::AsymmetricStates(_))
        ));
    }
}
