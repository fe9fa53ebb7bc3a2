//! Monotone norms and the outer aggregate functions built on top of them.
//!
//! Every evaluation treats `0 * inf` as `0`, so an unused coordinate with an
//! infinite load never poisons a weighted sum.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Relative slack used by every feasibility comparison in the crate.
pub const FEAS_TOL: f64 = 1e-9;

/// `value <= budget` up to [`FEAS_TOL`].
pub fn fits(value: f64, budget: f64) -> bool {
    if value.is_infinite() {
        return budget.is_infinite() && value <= budget;
    }
    value <= budget + FEAS_TOL * budget.abs().max(1e-300) + 1e-12
}

#[inline]
pub(crate) fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub indices: Vec<usize>,
    pub norm: NormSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NormSpec {
    LInf,
    Lp {
        p: f64,
    },
    TopK {
        k: usize,
    },
    WeightedL1 {
        weights: Vec<f64>,
    },
    /// Ordered weighted sum: `sum_t w_t x_(t)` over the decreasing rearrangement.
    /// Entries past the end of `weights` get weight zero.
    OrderedSym {
        weights: Vec<f64>,
    },
    Nested {
        outer: Box<NormSpec>,
        blocks: Vec<Block>,
    },
    /// `activation * max_t x_t + sum_t weights[t] x_t`.
    ActivationAssignment {
        activation: f64,
        weights: Vec<f64>,
    },
}

fn check_weights(w: &[f64], what: &str) -> Result<()> {
    if w.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return invalid(format!("{what} weights must be finite and nonnegative"));
    }
    Ok(())
}

impl NormSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            NormSpec::LInf => "LInf",
            NormSpec::Lp { .. } => "Lp",
            NormSpec::TopK { .. } => "TopK",
            NormSpec::WeightedL1 { .. } => "WeightedL1",
            NormSpec::OrderedSym { .. } => "OrderedSym",
            NormSpec::Nested { .. } => "Nested",
            NormSpec::ActivationAssignment { .. } => "ActivationAssignment",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NormSpec::LInf => Ok(()),
            NormSpec::Lp { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return invalid(format!("Lp needs finite p >= 1, got {p}"));
                }
                Ok(())
            }
            NormSpec::TopK { k } => {
                if *k == 0 {
                    return invalid("TopK needs k >= 1");
                }
                Ok(())
            }
            NormSpec::WeightedL1 { weights } => {
                check_weights(weights, "WeightedL1")?;
                if weights.is_empty() {
                    return invalid("WeightedL1 needs at least one weight");
                }
                Ok(())
            }
            NormSpec::OrderedSym { weights } => {
                check_weights(weights, "OrderedSym")?;
                if weights.first().map_or(true, |w| *w <= 0.0) {
                    return invalid("OrderedSym needs w[0] > 0");
                }
                if weights.windows(2).any(|p| p[1] > p[0]) {
                    return invalid("OrderedSym weights must be nonincreasing");
                }
                Ok(())
            }
            NormSpec::ActivationAssignment { activation, weights } => {
                check_weights(weights, "ActivationAssignment")?;
                if !(activation.is_finite() && *activation >= 0.0) {
                    return invalid("activation cost must be finite and nonnegative");
                }
                if weights.is_empty() {
                    return invalid("ActivationAssignment needs at least one weight");
                }
                Ok(())
            }
            NormSpec::Nested { outer, blocks } => {
                outer.validate()?;
                if blocks.is_empty() {
                    return invalid("Nested needs at least one block");
                }
                if let Some(d) = outer.dim() {
                    if d != blocks.len() {
                        return invalid("outer norm dimension must equal the block count");
                    }
                }
                let total: usize = blocks.iter().map(|b| b.indices.len()).sum();
                let mut seen = vec![false; total];
                for b in blocks {
                    b.norm.validate()?;
                    if b.indices.is_empty() {
                        return invalid("empty block");
                    }
                    if let Some(d) = b.norm.dim() {
                        if d != b.indices.len() {
                            return invalid("block norm dimension must equal block size");
                        }
                    }
                    for &ix in &b.indices {
                        if ix >= total || seen[ix] {
                            return invalid("blocks must partition 0..D");
                        }
                        seen[ix] = true;
                    }
                }
                Ok(())
            }
        }
    }

    /// Fixed dimension, if the norm has one. Dimension-free norms are symmetric.
    pub fn dim(&self) -> Option<usize> {
        match self {
            NormSpec::WeightedL1 { weights } => Some(weights.len()),
            NormSpec::ActivationAssignment { weights, .. } => Some(weights.len()),
            NormSpec::Nested { blocks, .. } => Some(blocks.iter().map(|b| b.indices.len()).sum()),
            _ => None,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            NormSpec::LInf | NormSpec::Lp { .. } | NormSpec::TopK { .. } | NormSpec::OrderedSym { .. } => {
                true
            }
            NormSpec::WeightedL1 { weights } => weights.windows(2).all(|p| p[0] == p[1]),
            _ => false,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormSpec::Lp { p } => {
                let top = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if top == 0.0 || top.is_infinite() {
                    return top;
                }
                let s: f64 = x.iter().map(|v| (v.abs() / top).powf(*p)).sum();
                top * s.powf(1.0 / p)
            }
            NormSpec::TopK { k } => {
                let mut v: Vec<f64> = x.iter().map(|a| a.abs()).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                v.iter().take(*k).sum()
            }
            NormSpec::WeightedL1 { weights } => {
                weights.iter().zip(x).map(|(w, v)| mul0(*w, v.abs())).sum()
            }
            NormSpec::OrderedSym { weights } => {
                let mut v: Vec<f64> = x.iter().map(|a| a.abs()).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                weights.iter().zip(&v).map(|(w, a)| mul0(*w, *a)).sum()
            }
            NormSpec::ActivationAssignment { activation, weights } => {
                let top = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                mul0(*activation, top) + weights.iter().zip(x).map(|(w, v)| mul0(*w, v.abs())).sum::<f64>()
            }
            NormSpec::Nested { outer, blocks } => {
                let vals: Vec<f64> = blocks
                    .iter()
                    .map(|b| {
                        let sub: Vec<f64> = b.indices.iter().map(|&i| x[i]).collect();
                        b.norm.eval_unchecked(&sub)
                    })
                    .collect();
                outer.eval_unchecked(&vals)
            }
        }
    }

    /// Evaluate on a vector given by `(coordinate, value)` pairs; missing coordinates are zero.
    pub fn eval_sparse(&self, entries: &[(usize, f64)]) -> Result<f64> {
        match self.dim() {
            Some(d) => {
                let mut x = vec![0.0; d];
                for &(c, v) in entries {
                    if c >= d {
                        return Err(Error::DimensionMismatch { expected: d, got: c + 1 });
                    }
                    x[c] += v;
                }
                Ok(self.eval_unchecked(&x))
            }
            None => {
                let x: Vec<f64> = entries.iter().map(|e| e.1).collect();
                Ok(self.eval_unchecked(&x))
            }
        }
    }

    /// Norm of the vector with `h` unit entries (symmetric norms only).
    pub fn ones_norm(&self, h: usize) -> f64 {
        self.eval_unchecked(&vec![1.0; h])
    }
}

/// Result of `unit_cap`: the largest single-coordinate load within budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnitCap {
    Finite(f64),
    /// The coordinate does not contribute to the aggregate at all.
    Unbounded,
}

impl UnitCap {
    pub fn finite(self) -> Option<f64> {
        match self {
            UnitCap::Finite(v) => Some(v),
            UnitCap::Unbounded => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AggregateSpec {
    NormAgg {
        norm: NormSpec,
    },
    SumPowers {
        p: f64,
        weights: Vec<f64>,
    },
    PNormPower {
        p: f64,
    },
    /// `base` applied to the per-group sums; `groups[c]` is the group of coordinate `c`.
    Grouped {
        base: Box<AggregateSpec>,
        groups: Vec<usize>,
    },
}

impl AggregateSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            AggregateSpec::NormAgg { norm } => norm.validate(),
            AggregateSpec::SumPowers { p, weights } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return invalid(format!("SumPowers needs finite p >= 1, got {p}"));
                }
                check_weights(weights, "SumPowers")
            }
            AggregateSpec::PNormPower { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return invalid(format!("PNormPower needs finite p >= 1, got {p}"));
                }
                Ok(())
            }
            AggregateSpec::Grouped { base, groups } => {
                base.validate()?;
                if let Some(d) = base.dim() {
                    if groups.iter().any(|&g| g >= d) {
                        return invalid("group index out of range");
                    }
                }
                Ok(())
            }
        }
    }

    /// Homogeneity degree.
    pub fn p(&self) -> f64 {
        match self {
            AggregateSpec::NormAgg { .. } => 1.0,
            AggregateSpec::SumPowers { p, .. } | AggregateSpec::PNormPower { p } => *p,
            AggregateSpec::Grouped { base, .. } => base.p(),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            AggregateSpec::NormAgg { norm } => norm.dim(),
            AggregateSpec::SumPowers { weights, .. } => Some(weights.len()),
            AggregateSpec::PNormPower { .. } => None,
            AggregateSpec::Grouped { groups, .. } => Some(groups.len()),
        }
    }

    /// Whether `marginal` is nondecreasing in the activation vector.
    pub fn has_monotone_marginals(&self) -> bool {
        match self {
            AggregateSpec::NormAgg { norm } => matches!(norm, NormSpec::WeightedL1 { .. }),
            AggregateSpec::SumPowers { .. } | AggregateSpec::PNormPower { .. } => true,
            AggregateSpec::Grouped { base, .. } => base.has_monotone_marginals(),
        }
    }

    pub fn eval(&self, loads: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != loads.len() {
                return Err(Error::DimensionMismatch { expected: d, got: loads.len() });
            }
        }
        Ok(match self {
            AggregateSpec::NormAgg { norm } => norm.eval_unchecked(loads),
            AggregateSpec::SumPowers { p, weights } => {
                weights.iter().zip(loads).map(|(w, l)| mul0(*w, l.abs().powf(*p))).sum()
            }
            AggregateSpec::PNormPower { p } => loads.iter().map(|l| l.abs().powf(*p)).sum(),
            AggregateSpec::Grouped { base, groups } => {
                let n = match base.dim() {
                    Some(d) => d,
                    None => groups.iter().map(|g| g + 1).max().unwrap_or(0),
                };
                let mut sums = vec![0.0; n];
                for (c, &g) in groups.iter().enumerate() {
                    sums[g] += loads[c];
                }
                base.eval(&sums)?
            }
        })
    }

    /// `f(b o y)`.
    pub fn eval_activation(&self, b: &[f64], y: &[bool]) -> Result<f64> {
        if b.len() != y.len() {
            return Err(Error::DimensionMismatch { expected: b.len(), got: y.len() });
        }
        let v: Vec<f64> = b.iter().zip(y).map(|(bi, yi)| if *yi { *bi } else { 0.0 }).collect();
        self.eval(&v)
    }

    /// `f(b o y + b_i e_i) - f(b o y)`; coordinate `i` must be inactive.
    pub fn marginal(&self, b: &[f64], y: &[bool], i: usize) -> Result<f64> {
        if i >= y.len() {
            return Err(Error::InvalidArgument(format!("machine {i} out of range")));
        }
        if y[i] {
            return Err(Error::InvalidArgument(format!("machine {i} is already active")));
        }
        let base = self.eval_activation(b, y)?;
        let mut y2 = y.to_vec();
        y2[i] = true;
        Ok(self.eval_activation(b, &y2)? - base)
    }

    /// `sup { b : f(b e_i) <= budget }` over an `m`-coordinate domain, closed form.
    pub fn unit_cap(&self, i: usize, m: usize, budget: f64) -> Result<UnitCap> {
        if !(budget >= 0.0) {
            return Err(Error::InvalidArgument("budget must be nonnegative".into()));
        }
        if i >= m {
            return Err(Error::InvalidArgument(format!("machine {i} out of range")));
        }
        let (scale, p) = self.unit_scale(i, m)?;
        if scale == 0.0 {
            return Ok(UnitCap::Unbounded);
        }
        Ok(UnitCap::Finite((budget / scale).powf(1.0 / p)))
    }

    /// `f(e_i)` and the homogeneity degree.
    fn unit_scale(&self, i: usize, m: usize) -> Result<(f64, f64)> {
        let mut e = vec![0.0; self.dim().unwrap_or(m)];
        if i >= e.len() {
            return Err(Error::DimensionMismatch { expected: e.len(), got: i + 1 });
        }
        e[i] = 1.0;
        Ok((self.eval(&e)?, self.p()))
    }

    /// Same quantity as `unit_cap`, found by bisection on `f(b e_i) <= budget`.
    pub fn unit_cap_search(&self, i: usize, m: usize, budget: f64) -> Result<UnitCap> {
        let mut e = vec![0.0; self.dim().unwrap_or(m)];
        if i >= e.len() {
            return Err(Error::DimensionMismatch { expected: e.len(), got: i + 1 });
        }
        let mut at = |b: f64| -> Result<f64> {
            e[i] = b;
            self.eval(&e)
        };
        let mut hi = 1.0;
        while at(hi)? <= budget {
            hi *= 2.0;
            if hi > 1e300 {
                return Ok(UnitCap::Unbounded);
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-12 * hi.max(1e-300) {
            let mid = 0.5 * (lo + hi);
            if at(mid)? <= budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(UnitCap::Finite(lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topk_example() {
        let n = NormSpec::TopK { k: 2 };
        assert_eq!(n.eval(&[3.0, 1.0, 2.0]).unwrap(), 5.0);
    }

    #[test]
    fn lp_example() {
        let n = NormSpec::Lp { p: 2.0 };
        assert!((n.eval(&[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_times_inf() {
        let n = NormSpec::WeightedL1 { weights: vec![0.0, 1.0] };
        assert_eq!(n.eval(&[f64::INFINITY, 2.0]).unwrap(), 2.0);
        let o = NormSpec::OrderedSym { weights: vec![1.0] };
        assert_eq!(o.eval(&[f64::INFINITY, f64::INFINITY]).unwrap(), f64::INFINITY);
        let o = NormSpec::OrderedSym { weights: vec![1.0, 0.0] };
        assert_eq!(o.eval(&[3.0, f64::INFINITY]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn ordered_sym_rejects_increasing() {
        let o = NormSpec::OrderedSym { weights: vec![1.0, 2.0] };
        assert!(o.validate().is_err());
    }

    #[test]
    fn nested_partition_checked() {
        let bad = NormSpec::Nested {
            outer: Box::new(NormSpec::LInf),
            blocks: vec![
                Block { indices: vec![0, 1], norm: NormSpec::LInf },
                Block { indices: vec![1], norm: NormSpec::LInf },
            ],
        };
        assert!(bad.validate().is_err());
        let good = NormSpec::Nested {
            outer: Box::new(NormSpec::Lp { p: 1.0 }),
            blocks: vec![
                Block { indices: vec![0, 2], norm: NormSpec::LInf },
                Block { indices: vec![1], norm: NormSpec::LInf },
            ],
        };
        good.validate().unwrap();
        assert_eq!(good.eval(&[1.0, 5.0, 3.0]).unwrap(), 8.0);
    }

    #[test]
    fn dim_mismatch() {
        let n = NormSpec::WeightedL1 { weights: vec![1.0, 1.0] };
        assert!(matches!(n.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn marginal_example() {
        let f = AggregateSpec::SumPowers { p: 2.0, weights: vec![1.0, 1.0] };
        let m = f.marginal(&[2.0, 3.0], &[true, false], 1).unwrap();
        assert!((m - 9.0).abs() < 1e-12);
        assert!(f.marginal(&[2.0, 3.0], &[true, false], 0).is_err());
    }

    #[test]
    fn unit_cap_examples() {
        let l1 = AggregateSpec::NormAgg { norm: NormSpec::Lp { p: 1.0 } };
        assert_eq!(l1.unit_cap(0, 3, 4.0).unwrap(), UnitCap::Finite(4.0));
        let sp = AggregateSpec::SumPowers { p: 2.0, weights: vec![4.0, 0.0] };
        assert_eq!(sp.unit_cap(0, 2, 16.0).unwrap(), UnitCap::Finite(2.0));
        assert_eq!(sp.unit_cap(1, 2, 16.0).unwrap(), UnitCap::Unbounded);
        assert_eq!(sp.unit_cap_search(1, 2, 16.0).unwrap(), UnitCap::Unbounded);
    }

    #[test]
    fn grouped_sums_copies() {
        let f = AggregateSpec::Grouped {
            base: Box::new(AggregateSpec::SumPowers { p: 2.0, weights: vec![1.0, 1.0] }),
            groups: vec![0, 0, 1],
        };
        assert_eq!(f.eval(&[1.0, 2.0, 1.0]).unwrap(), 10.0);
        // convex in the group sum, so marginals grow
        let b = [1.0, 2.0, 1.0];
        let lo = f.marginal(&b, &[false, false, false], 1).unwrap();
        let hi = f.marginal(&b, &[true, false, false], 1).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn serde_tag_is_kind() {
        let s = serde_json::to_string(&NormSpec::TopK { k: 2 }).unwrap();
        assert_eq!(s, r#"{"kind":"TopK","k":2}"#);
        let back: NormSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, NormSpec::TopK { k: 2 });
    }
}
