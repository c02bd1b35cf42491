//! Exact entropy and mutual information over joint distributions on finite
//! alphabets, plus the scalar Gaussian capacity function.
//!
//! All rates are in bits (base-2 logarithms). Probabilities below
//! [`PROB_FLOOR`] are treated as exact zeros in entropy sums, implementing the
//! `0 log 0 = 0` convention.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities below this are treated as exact zero in entropy sums.
pub const PROB_FLOOR: f64 = 1e-15;

/// Normalization tolerance for probability tensors.
pub const NORM_TOL: f64 = 1e-12;

/// Default cap on the number of cells in a joint tensor.
pub const DEFAULT_CELL_CAP: usize = 1 << 24;

/// A set of variable names, resolved against a [`FiniteDist`] on use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarSet(BTreeSet<String>);

impl VarSet {
    pub fn empty() -> Self {
        VarSet(BTreeSet::new())
    }

    pub fn of<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VarSet(names.into_iter().map(Into::into).collect())
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    fn disjoint_with(&self, other: &VarSet) -> Result<()> {
        if let Some(name) = self.0.intersection(&other.0).next() {
            return Err(Error::OverlappingVariables(name.clone()));
        }
        Ok(())
    }
}

impl<const N: usize> From<[&str; N]> for VarSet {
    fn from(names: [&str; N]) -> Self {
        VarSet::of(names)
    }
}

/// A named variable with a finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub size: usize,
}

/// A joint probability distribution over named finite-alphabet variables,
/// stored as a dense row-major tensor (last variable fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDist {
    vars: Vec<Variable>,
    probs: Vec<f64>,
}

impl FiniteDist {
    /// Build a distribution, validating non-negativity, normalization,
    /// alphabet sizes, name uniqueness, and the cell cap.
    pub fn new<S: Into<String>>(vars: Vec<(S, usize)>, probs: Vec<f64>) -> Result<Self> {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, size)| Variable {
                name: name.into(),
                size,
            })
            .collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if v.size < 1 {
                return Err(Error::EmptyAlphabet(v.name.clone()));
            }
            if !seen.insert(v.name.clone()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        let mut cells: usize = 1;
        for v in &vars {
            cells = cells
                .checked_mul(v.size)
                .filter(|&c| c <= DEFAULT_CELL_CAP)
                .ok_or(Error::CapacityExceeded {
                    cells: usize::MAX,
                    cap: DEFAULT_CELL_CAP,
                })?;
        }
        if probs.len() != cells {
            return Err(Error::ShapeMismatch {
                got: probs.len(),
                want: cells,
            });
        }
        let mut sum = 0.0;
        for &p in &probs {
            if p < 0.0 {
                return Err(Error::NegativeProbability(p));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(FiniteDist { vars, probs })
    }

    /// Uniform distribution over the product alphabet.
    pub fn uniform<S: Into<String>>(vars: Vec<(S, usize)>) -> Result<Self> {
        let vars: Vec<(String, usize)> = vars.into_iter().map(|(n, s)| (n.into(), s)).collect();
        let cells: usize = vars.iter().map(|(_, s)| *s).product();
        let p = 1.0 / cells as f64;
        FiniteDist::new(vars, vec![p; cells])
    }

    /// Build from a function of the index tuple. The function must return a
    /// valid (normalized, non-negative) probability mass.
    pub fn from_fn<S: Into<String>>(
        vars: Vec<(S, usize)>,
        f: impl Fn(&[usize]) -> f64,
    ) -> Result<Self> {
        let vars: Vec<(String, usize)> = vars.into_iter().map(|(n, s)| (n.into(), s)).collect();
        let sizes: Vec<usize> = vars.iter().map(|(_, s)| *s).collect();
        let cells: usize = sizes.iter().product();
        let mut probs = vec![0.0; cells];
        let mut idx = vec![0usize; sizes.len()];
        for (flat, slot) in probs.iter_mut().enumerate() {
            unflatten(flat, &sizes, &mut idx);
            *slot = f(&idx);
        }
        FiniteDist::new(vars, probs)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cells(&self) -> usize {
        self.probs.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.size).collect()
    }

    fn resolve(&self, set: &VarSet) -> Result<Vec<usize>> {
        set.iter().map(|n| self.var_index(n)).collect()
    }

    /// Sum out all variables not in `keep`, preserving the original variable
    /// order among the kept axes.
    pub fn marginalize(&self, keep: &VarSet) -> Result<FiniteDist> {
        self.resolve(keep)?; // name-resolution check
        let kept: Vec<usize> = (0..self.vars.len())
            .filter(|&i| keep.contains(&self.vars[i].name))
            .collect();
        if kept.len() == self.vars.len() {
            return Ok(self.clone());
        }
        let sizes = self.sizes();
        let out_vars: Vec<Variable> = kept.iter().map(|&i| self.vars[i].clone()).collect();
        let out_cells: usize = out_vars.iter().map(|v| v.size).product();
        let mut out = vec![0.0; out_cells];
        let mut idx = vec![0usize; sizes.len()];
        for (flat, &p) in self.probs.iter().enumerate() {
            unflatten(flat, &sizes, &mut idx);
            let mut o = 0usize;
            for &k in &kept {
                o = o * sizes[k] + idx[k];
            }
            out[o] += p;
        }
        Ok(FiniteDist {
            vars: out_vars,
            probs: out,
        })
    }

    /// Shannon entropy of the whole joint, in bits.
    fn joint_entropy(&self) -> f64 {
        let mut h = 0.0;
        for &p in &self.probs {
            if p > PROB_FLOOR {
                h -= p * p.log2();
            }
        }
        h.max(0.0)
    }

    /// Conditional entropy `H(vars | given)` in bits.
    pub fn entropy(&self, vars: &VarSet, given: &VarSet) -> Result<f64> {
        vars.disjoint_with(given)?;
        self.resolve(vars)?;
        self.resolve(given)?;
        let joint = self.marginalize(&vars.union(given))?.joint_entropy();
        let cond = if given.is_empty() {
            0.0
        } else {
            self.marginalize(given)?.joint_entropy()
        };
        Ok((joint - cond).max(0.0))
    }

    /// Conditional mutual information `I(a; b | given)` in bits, clamped to 0
    /// when a tiny negative value arises from rounding.
    pub fn mutual_info(&self, a: &VarSet, b: &VarSet, given: &VarSet) -> Result<f64> {
        a.disjoint_with(b)?;
        a.disjoint_with(given)?;
        b.disjoint_with(given)?;
        let h_a = self.entropy(a, given)?;
        let h_a_given_b = self.entropy(a, &b.union(given))?;
        let i = h_a - h_a_given_b;
        if i < 0.0 && i > -1e-9 {
            return Ok(0.0);
        }
        Ok(i)
    }

    /// Convenience wrapper over [`Self::mutual_info`] taking name slices.
    pub fn mi(&self, a: &[&str], b: &[&str], given: &[&str]) -> Result<f64> {
        self.mutual_info(
            &VarSet::of(a.iter().copied()),
            &VarSet::of(b.iter().copied()),
            &VarSet::of(given.iter().copied()),
        )
    }

    /// Convenience wrapper over [`Self::entropy`] taking name slices.
    pub fn h(&self, vars: &[&str], given: &[&str]) -> Result<f64> {
        self.entropy(
            &VarSet::of(vars.iter().copied()),
            &VarSet::of(given.iter().copied()),
        )
    }

    /// Rename a variable in place.
    pub fn rename(&mut self, from: &str, to: &str) -> Result<()> {
        if self.vars.iter().any(|v| v.name == to) {
            return Err(Error::DuplicateVariable(to.to_string()));
        }
        let i = self.var_index(from)?;
        self.vars[i].name = to.to_string();
        Ok(())
    }
}

/// Decode a flat row-major index into per-axis indices.
pub(crate) fn unflatten(mut flat: usize, sizes: &[usize], out: &mut [usize]) {
    for i in (0..sizes.len()).rev() {
        out[i] = flat % sizes[i];
        flat /= sizes[i];
    }
}

/// Encode per-axis indices into a flat row-major index.
pub(crate) fn flatten(idx: &[usize], sizes: &[usize]) -> usize {
    let mut flat = 0usize;
    for (i, &x) in idx.iter().enumerate() {
        flat = flat * sizes[i] + x;
    }
    flat
}

/// The scalar Gaussian capacity `C(x) = 1/2 log2(1 + x)` for an SNR-like
/// argument `x >= 0`.
pub fn gaussian_capacity(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "gaussian_capacity requires x >= 0, got {x}"
        )));
    }
    Ok(0.5 * (1.0 + x).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_pair(p00: f64, p01: f64, p10: f64, p11: f64) -> FiniteDist {
        FiniteDist::new(vec![("X", 2), ("Y", 2)], vec![p00, p01, p10, p11]).unwrap()
    }

    #[test]
    fn marginalize_uniform_keeps_uniform() {
        let d = FiniteDist::uniform(vec![("X", 2), ("Y", 2)]).unwrap();
        let m = d.marginalize(&VarSet::of(["X"])).unwrap();
        assert_eq!(m.variables().len(), 1);
        assert!((m.probs()[0] - 0.5).abs() < 1e-15);
        assert!((m.probs()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marginalize_keep_all_is_identity() {
        let d = binary_pair(0.1, 0.2, 0.3, 0.4);
        let m = d.marginalize(&VarSet::of(["X", "Y"])).unwrap();
        assert_eq!(m, d);
    }

    #[test]
    fn marginalize_correlated_pair() {
        let d = binary_pair(0.5, 0.0, 0.0, 0.5);
        let m = d.marginalize(&VarSet::of(["Y"])).unwrap();
        assert!((m.probs()[0] - 0.5).abs() < 1e-15);
        assert!((m.probs()[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marginalize_unknown_name_errors() {
        let d = binary_pair(0.25, 0.25, 0.25, 0.25);
        assert!(matches!(
            d.marginalize(&VarSet::of(["Z"])),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn entropy_uniform_binary_is_one_bit() {
        let d = FiniteDist::uniform(vec![("X", 2)]).unwrap();
        let h = d.h(&["X"], &[]).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_point_mass_is_zero() {
        let d = FiniteDist::new(vec![("X", 2)], vec![1.0, 0.0]).unwrap();
        assert_eq!(d.h(&["X"], &[]).unwrap(), 0.0);
    }

    #[test]
    fn entropy_functional_dependence_is_zero() {
        let d = binary_pair(0.5, 0.0, 0.0, 0.5);
        let h = d.h(&["X"], &["Y"]).unwrap();
        assert!(h.abs() < 1e-12);
    }

    #[test]
    fn entropy_overlap_errors() {
        let d = binary_pair(0.25, 0.25, 0.25, 0.25);
        assert!(matches!(
            d.h(&["X"], &["X"]),
            Err(Error::OverlappingVariables(_))
        ));
    }

    #[test]
    fn mi_independent_is_zero() {
        let d = FiniteDist::uniform(vec![("X", 2), ("Y", 2)]).unwrap();
        assert!(d.mi(&["X"], &["Y"], &[]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn mi_perfect_correlation_is_one_bit() {
        let d = binary_pair(0.5, 0.0, 0.0, 0.5);
        assert!((d.mi(&["X"], &["Y"], &[]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mi_binary_symmetric_channel_matches_direct_sum() {
        // Uniform input through a BSC with flip probability 0.11.
        let f = 0.11;
        let d = binary_pair(0.5 * (1.0 - f), 0.5 * f, 0.5 * f, 0.5 * (1.0 - f));
        // Independent oracle: direct double sum of p(x,y) log p(x,y)/(p(x)p(y))
        // over the four outcomes.
        let px = [0.5, 0.5];
        let py = [0.5, 0.5];
        let pj = [[0.5 * (1.0 - f), 0.5 * f], [0.5 * f, 0.5 * (1.0 - f)]];
        let mut oracle = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                oracle += pj[x][y] * (pj[x][y] / (px[x] * py[y])).log2();
            }
        }
        let got = d.mi(&["X"], &["Y"], &[]).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        // 1 - h(0.11), binary entropy h.
        let h2 = -f * f.log2() - (1.0 - f) * (1.0 - f).log2();
        assert!((got - (1.0 - h2)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_capacity_values() {
        assert_eq!(gaussian_capacity(0.0).unwrap(), 0.0);
        assert!((gaussian_capacity(1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((gaussian_capacity(3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(gaussian_capacity(-0.5).is_err());
    }

    #[test]
    fn invalid_tensors_rejected() {
        assert!(FiniteDist::new(vec![("X", 2)], vec![0.6, 0.6]).is_err());
        assert!(FiniteDist::new(vec![("X", 2)], vec![1.2, -0.2]).is_err());
        assert!(FiniteDist::new(vec![("X", 0)], vec![]).is_err());
        assert!(FiniteDist::new(vec![("X", 2), ("X", 2)], vec![0.25; 4]).is_err());
        assert!(FiniteDist::new(vec![("X", 2)], vec![1.0]).is_err());
    }
}
