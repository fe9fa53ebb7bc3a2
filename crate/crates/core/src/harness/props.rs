//! Randomized property checks for norms and aggregates.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::norm::{AggregateSpec, Block, NormSpec};
use crate::rng::Seed;

pub const TOL: f64 = 1e-9;

fn le(a: f64, b: f64) -> bool {
    a <= b + TOL * (1.0 + a.abs().max(b.abs()))
}

fn close(a: f64, b: f64) -> bool {
    le(a, b) && le(b, a)
}

fn vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..10.0) }).collect()
}

fn weights(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(0.0..3.0)).collect()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> NormSpec {
    match rng.gen_range(0..4) {
        0 => NormSpec::LInf,
        1 => NormSpec::Lp { p: rng.gen_range(1.0..4.0) },
        2 => NormSpec::TopK { k: rng.gen_range(1..=d.max(1)) },
        _ => {
            let mut w = weights(rng, d);
            w.sort_by(|a, b| b.total_cmp(a));
            NormSpec::OrderedSym { weights: w }
        }
    }
}

/// Any supported norm on `d` coordinates.
pub fn random_norm(rng: &mut ChaCha8Rng, d: usize) -> NormSpec {
    match rng.gen_range(0..7) {
        0..=3 => random_symmetric(rng, d),
        4 => NormSpec::WeightedL1 { weights: weights(rng, d) },
        5 => NormSpec::ActivationAssignment { activation: rng.gen_range(0.0..5.0), weights: weights(rng, d) },
        _ => {
            let mut idx: Vec<usize> = (0..d).collect();
            idx.shuffle(rng);
            let cut = rng.gen_range(1..=d.max(1)).min(d);
            let mut parts = vec![idx[..cut].to_vec()];
            if cut < d {
                parts.push(idx[cut..].to_vec());
            }
            let blocks: Vec<Block> = parts
                .into_iter()
                .map(|indices| {
                    let k = indices.len();
                    Block { indices, norm: random_symmetric(rng, k) }
                })
                .collect();
            let nb = blocks.len();
            NormSpec::Nested { outer: Box::new(random_symmetric(rng, nb)), blocks }
        }
    }
}

pub fn random_aggregate(rng: &mut ChaCha8Rng, m: usize) -> AggregateSpec {
    match rng.gen_range(0..3) {
        0 => AggregateSpec::NormAgg { norm: random_norm(rng, m) },
        1 => AggregateSpec::SumPowers { p: rng.gen_range(1.0..3.0), weights: weights(rng, m) },
        _ => AggregateSpec::PNormPower { p: rng.gen_range(1.0..3.0) },
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PropReport {
    pub cases: usize,
    pub violations: BTreeMap<String, usize>,
    pub examples: Vec<String>,
}

impl PropReport {
    pub fn total_violations(&self) -> usize {
        self.violations.values().sum()
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.violations.entry(name.to_string()).or_insert(0);
        if !ok {
            *e += 1;
            if self.examples.len() < 10 {
                self.examples.push(format!("{name}: {}", detail()));
            }
        }
    }
}

/// `cases` random norms and aggregates, each checked on one random draw.
pub fn property_suite(cases: usize, seed: Seed) -> Result<PropReport> {
    let mut rng = seed.rng();
    let mut rep = PropReport { cases, ..Default::default() };
    for _ in 0..cases {
        let d = rng.gen_range(1..=6);
        let n = random_norm(&mut rng, d);
        let x = vector(&mut rng, d);
        let y = vector(&mut rng, d);
        let (nx, ny) = (n.eval(&x)?, n.eval(&y)?);
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let nsum = n.eval(&sum)?;
        rep.check("triangle", le(nsum, nx + ny), || format!("{n:?} {x:?} {y:?}"));
        let lam = rng.gen_range(0.0..5.0);
        let scaled: Vec<f64> = x.iter().map(|v| lam * v).collect();
        rep.check("homogeneity", close(n.eval(&scaled)?, lam * nx), || format!("{n:?} {x:?} {lam}"));
        let bigger: Vec<f64> = x.iter().map(|v| v + rng.gen_range(0.0..2.0)).collect();
        rep.check("monotone", le(nx, n.eval(&bigger)?), || format!("{n:?} {x:?}"));
        if n.is_symmetric() {
            let mut perm = x.clone();
            perm.shuffle(&mut rng);
            rep.check("symmetric", close(nx, n.eval(&perm)?), || format!("{n:?} {x:?}"));
        }

        let m = rng.gen_range(1..=5);
        let f = random_aggregate(&mut rng, m);
        let p = f.p();
        let a = vector(&mut rng, m);
        let b = vector(&mut rng, m);
        let ab: Vec<f64> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
        let root = |v: f64| v.max(0.0).powf(1.0 / p);
        let (fa, fb, fab) = (f.eval(&a)?, f.eval(&b)?, f.eval(&ab)?);
        rep.check("p_subadditive", le(root(fab), root(fa) + root(fb)), || format!("{f:?} {a:?} {b:?}"));
        if f.has_monotone_marginals() {
            let i = rng.gen_range(0..m);
            let small: Vec<bool> = (0..m).map(|t| t != i && rng.gen_bool(0.4)).collect();
            let large: Vec<bool> = (0..m).map(|t| t != i && (small[t] || rng.gen_bool(0.4))).collect();
            let (ms, ml) = (f.marginal(&a, &small, i)?, f.marginal(&a, &large, i)?);
            rep.check("marginal_monotone", le(ms, ml), || format!("{f:?} {a:?} {small:?} {large:?}"));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_clean() {
        let r = property_suite(500, Seed(5)).unwrap();
        assert_eq!(r.total_violations(), 0, "{:?}", r.examples);
    }
}
