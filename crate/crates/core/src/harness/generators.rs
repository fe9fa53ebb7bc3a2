//! Seeded instance generators for the experiment scenarios.

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, Job, SetCoverInstance};
use crate::norm::{AggregateSpec, Block, NormSpec};
use crate::rng::Seed;

fn check_range(lo: f64, hi: f64, what: &str) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::InvalidArgument(format!("bad {what} range [{lo}, {hi}]")));
    }
    Ok(())
}

fn draw(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Every element joins each set with probability `density`, and one random
/// set when it would otherwise be uncovered.
pub fn generate_set_cover(n: usize, m: usize, density: f64, cost: (f64, f64), seed: Seed) -> Result<SetCoverInstance> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density must lie in (0, 1], got {density}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one set".into()));
    }
    check_range(cost.0, cost.1, "cost")?;
    let mut rng = seed.rng();
    let costs = (0..m).map(|_| draw(&mut rng, cost.0, cost.1)).collect();
    let elements = (0..n)
        .map(|_| {
            let mut e: Vec<usize> = (0..m).filter(|_| rng.gen_bool(density)).collect();
            if e.is_empty() {
                e.push(rng.gen_range(0..m));
            }
            e
        })
        .collect();
    Ok(SetCoverInstance { costs, elements })
}

/// Unrelated machines with `r` ways per machine.
pub fn generate_load_balancing(
    n: usize,
    m: usize,
    r: usize,
    load: (f64, f64),
    inner: NormSpec,
    aggregate: AggregateSpec,
    seed: Seed,
) -> Result<Instance> {
    check_range(load.0, load.1, "load")?;
    let mut rng = seed.rng();
    let jobs = (0..n).map(|_| Job::new((0..m * r).map(|_| draw(&mut rng, load.0, load.1)).collect())).collect();
    let inst = Instance { m, r, inner_norms: vec![inner; m], aggregate, budget: 0.0, jobs };
    inst.validate()?;
    Ok(inst)
}

/// Facilities as machines: opening cost times max plus summed distances,
/// with every client load equal to one.
pub fn generate_facility_location(
    n: usize,
    m: usize,
    open: (f64, f64),
    dist: (f64, f64),
    seed: Seed,
) -> Result<Instance> {
    check_range(open.0, open.1, "opening cost")?;
    check_range(dist.0, dist.1, "distance")?;
    let mut rng = seed.rng();
    let inner_norms = (0..m)
        .map(|_| NormSpec::ActivationAssignment {
            activation: draw(&mut rng, open.0, open.1),
            weights: (0..n).map(|_| draw(&mut rng, dist.0, dist.1)).collect(),
        })
        .collect();
    let inst = Instance {
        m,
        r: 1,
        inner_norms,
        aggregate: AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: vec![1.0; m] } },
        budget: 0.0,
        jobs: (0..n).map(|_| Job::new(vec![1.0; m])).collect(),
    };
    inst.validate()?;
    Ok(inst)
}

/// `blocks` groups of `per_block` machines; makespan inside a block, summed
/// over blocks.
pub fn generate_nested(n: usize, blocks: usize, per_block: usize, load: (f64, f64), seed: Seed) -> Result<Instance> {
    check_range(load.0, load.1, "load")?;
    if blocks == 0 || per_block == 0 {
        return Err(Error::InvalidArgument("need at least one block of one machine".into()));
    }
    let m = blocks * per_block;
    let mut rng = seed.rng();
    let norm = NormSpec::Nested {
        outer: Box::new(NormSpec::WeightedL1 { weights: vec![1.0; blocks] }),
        blocks: (0..blocks)
            .map(|b| Block { indices: (b * per_block..(b + 1) * per_block).collect(), norm: NormSpec::LInf })
            .collect(),
    };
    let jobs = (0..n).map(|_| Job::new((0..m).map(|_| draw(&mut rng, load.0, load.1)).collect())).collect();
    let inst = Instance {
        m,
        r: 1,
        inner_norms: vec![NormSpec::LInf; m],
        aggregate: AggregateSpec::NormAgg { norm },
        budget: 0.0,
        jobs,
    };
    inst.validate()?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_density_fills_every_set() {
        let sc = generate_set_cover(5, 3, 1.0, (1.0, 2.0), Seed(1)).unwrap();
        assert!(sc.elements.iter().all(|e| e == &vec![0, 1, 2]));
    }

    #[test]
    fn one_set_covers_all() {
        let sc = generate_set_cover(6, 1, 0.1, (1.0, 1.0), Seed(2)).unwrap();
        assert!(sc.elements.iter().all(|e| e == &vec![0]));
    }

    #[test]
    fn seeded_regeneration() {
        let a = generate_set_cover(10, 4, 0.3, (1.0, 4.0), Seed(9)).unwrap();
        let b = generate_set_cover(10, 4, 0.3, (1.0, 4.0), Seed(9)).unwrap();
        assert_eq!(a, b);
        let f = generate_facility_location(4, 2, (1.0, 2.0), (0.0, 1.0), Seed(3)).unwrap();
        assert_eq!(f, generate_facility_location(4, 2, (1.0, 2.0), (0.0, 1.0), Seed(3)).unwrap());
    }

    #[test]
    fn bad_density() {
        assert!(generate_set_cover(3, 2, 0.0, (1.0, 2.0), Seed(0)).is_err());
    }
}
