mod common;

use common::*;
use ogs_core::budgeted::threshold_support;
use ogs_core::harness::props::{random_aggregate, random_norm};
use ogs_core::instance::{BudgetedInstance, Instance, Job, SetCoverInstance};
use ogs_core::model::{Item, PackProblem};
use ogs_core::norm::{AggregateSpec, NormSpec, UnitCap};
use ogs_core::oracle::{
    opt_budgeted_sched_pack, opt_gen_sched, opt_norm_pack, opt_obcm, opt_osc, opt_sched_pack, OracleLimit,
    PrefixTracker,
};
use ogs_core::rng::Seed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const LIM: OracleLimit = OracleLimit(1 << 24);

fn random_load(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..6) {
        0 => f64::INFINITY,
        1 => 0.0,
        _ => rng.gen_range(1..=6) as f64 / 2.0,
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(0..=4);
    let m = rng.gen_range(1..=3);
    let r = rng.gen_range(1..=2);
    let jobs = (0..n).map(|_| Job::new((0..m * r).map(|_| random_load(rng)).collect())).collect();
    let inner_norms = (0..m).map(|_| random_norm(rng, n * r)).collect();
    Instance { m, r, inner_norms, aggregate: random_aggregate(rng, m), budget: rng.gen_range(0.0..8.0), jobs }
}

#[test]
fn sched_pack_matches_enumeration() {
    let mut rng = Seed(11).rng();
    for _ in 0..400 {
        let inst = random_instance(&mut rng);
        assert_eq!(opt_sched_pack(&inst, LIM).unwrap().count, brute_sched_pack(&inst), "{inst:?}");
    }
}

#[test]
fn gen_sched_matches_enumeration() {
    let mut rng = Seed(12).rng();
    for _ in 0..400 {
        let inst = random_instance(&mut rng);
        let want = brute_gen_sched(&inst);
        match opt_gen_sched(&inst, LIM) {
            Ok(got) => {
                assert!(le(got.cost, want) && le(want, got.cost), "{} vs {want}: {inst:?}", got.cost)
            }
            Err(_) => assert!(want.is_infinite(), "{inst:?}"),
        }
    }
}

#[test]
fn norm_pack_matches_enumeration() {
    let mut rng = Seed(13).rng();
    for _ in 0..600 {
        let n = rng.gen_range(0..=5);
        let r = rng.gen_range(1..=2);
        let norm = random_norm(&mut rng, n * r);
        let jobs: Vec<Vec<f64>> = (0..n).map(|_| (0..r).map(|_| random_load(&mut rng)).collect()).collect();
        let items: Vec<Item> = jobs.iter().enumerate().map(|(j, l)| Item { job: j, loads: l.clone() }).collect();
        let b = rng.gen_range(0.0..8.0);
        let got = opt_norm_pack(&norm, r, &items, b, LIM).unwrap().count;
        assert_eq!(got, brute_norm_pack(&norm, r, &jobs, b), "{norm:?} {jobs:?} {b}");
    }
}

#[test]
fn budgeted_matches_enumeration() {
    let mut rng = Seed(14).rng();
    for _ in 0..400 {
        let inst = random_instance(&mut rng);
        let budgets: Vec<f64> = (0..inst.m).map(|_| rng.gen_range(0..=8) as f64 / 2.0).collect();
        let ok = aggregate_ok(&inst.aggregate, &budgets, inst.budget);
        let want = brute_budgeted(&inst, &budgets, &ok);
        let binst = BudgetedInstance { instance: inst.clone(), machine_budgets: budgets.clone() };
        assert_eq!(opt_budgeted_sched_pack(&binst, LIM).unwrap(), want, "{inst:?} {budgets:?}");
    }
}

fn random_cover(rng: &mut ChaCha8Rng, n: usize, m: usize) -> SetCoverInstance {
    let costs = (0..m).map(|_| rng.gen_range(1..=8) as f64 / 2.0).collect();
    let elements = (0..n)
        .map(|_| {
            let mut e: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.35)).collect();
            if e.is_empty() {
                e.push(rng.gen_range(0..m));
            }
            e
        })
        .collect();
    SetCoverInstance { costs, elements }
}

#[test]
fn cover_oracles_match_enumeration() {
    let mut rng = Seed(15).rng();
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=6);
        let sc = random_cover(&mut rng, n, m);
        let osc = opt_osc(&sc, LIM).unwrap();
        assert!((osc - brute_osc(&sc)).abs() < 1e-9, "{sc:?}");
        let b = rng.gen_range(0.0..10.0);
        assert_eq!(opt_obcm(&sc, b, LIM).unwrap(), brute_obcm(&sc, b), "{sc:?} {b}");
    }
}

#[test]
fn prefix_tracker_steps() {
    let mut rng = Seed(16).rng();
    for _ in 0..100 {
        let inst = random_instance(&mut rng);
        let mut t = PrefixTracker::new(PackProblem::from_instance(&inst), LIM);
        let mut prev = 0;
        for j in 0..inst.n() {
            let v = t.observe(inst.jobs[j].loads.clone()).unwrap();
            assert!(v == prev || v == prev + 1);
            let mut pre = inst.clone();
            pre.jobs.truncate(j + 1);
            // Fixed-dimension inner norms are sized for the whole stream.
            if pre.inner_norms.iter().all(|n| n.dim().is_none()) {
                assert_eq!(v, brute_sched_pack(&pre));
            }
            prev = v;
        }
        assert_eq!(prev, brute_sched_pack(&inst));
    }
}

fn bisect_cap(f: &AggregateSpec, i: usize, m: usize, budget: f64) -> Option<f64> {
    let at = |b: f64| {
        let mut e = vec![0.0; m];
        e[i] = b;
        f.eval(&e).unwrap()
    };
    let mut hi = 1.0;
    while at(hi) <= budget {
        hi *= 2.0;
        if hi > 1e200 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

#[test]
fn unit_cap_against_bisection() {
    let mut rng = Seed(17).rng();
    for _ in 0..2000 {
        let m = rng.gen_range(1..=5);
        let f = random_aggregate(&mut rng, m);
        let i = rng.gen_range(0..m);
        let b = rng.gen_range(0.1..50.0);
        match (f.unit_cap(i, m, b).unwrap(), bisect_cap(&f, i, m, b)) {
            (UnitCap::Finite(c), Some(want)) => {
                assert!((c - want).abs() <= 1e-8 * want.max(1.0), "{f:?} {i} {b}: {c} vs {want}");
                let mut e = vec![0.0; m];
                e[i] = c;
                let v = f.eval(&e).unwrap();
                assert!((v - b).abs() <= 1e-8 * b, "{f:?} f(cap e_i) = {v}, B = {b}");
            }
            (UnitCap::Unbounded, None) => {}
            (got, want) => panic!("{f:?} {i}: {got:?} vs {want:?}"),
        }
    }
}

// Worked values.

#[test]
fn worked_norm_values() {
    assert_eq!(NormSpec::TopK { k: 2 }.eval(&[3.0, 1.0, 2.0]).unwrap(), 5.0);
    assert_eq!(NormSpec::OrderedSym { weights: vec![1.0, 0.5] }.eval(&[2.0, 4.0]).unwrap(), 5.0);
    assert_eq!(NormSpec::LInf.eval(&[0.0; 3]).unwrap(), 0.0);
    let sp = AggregateSpec::SumPowers { p: 2.0, weights: vec![1.0, 1.0] };
    assert_eq!(sp.eval(&[3.0, 4.0]).unwrap(), 25.0);
    assert_eq!(sp.marginal(&[2.0, 3.0], &[true, false], 1).unwrap(), 9.0);
    assert_eq!(AggregateSpec::PNormPower { p: 3.0 }.eval(&[1.0, 1.0]).unwrap(), 2.0);
    let linf = AggregateSpec::NormAgg { norm: NormSpec::LInf };
    assert_eq!(linf.eval(&[5.0, 2.0]).unwrap(), 5.0);
    assert_eq!(linf.marginal(&[2.0, 3.0], &[true, false], 1).unwrap(), 1.0);
    let cap = |f: AggregateSpec, b: f64| f.unit_cap(0, 1, b).unwrap().finite().unwrap();
    assert!((cap(AggregateSpec::NormAgg { norm: NormSpec::Lp { p: 2.0 } }, 10.0) - 10.0).abs() < 1e-12);
    assert!((cap(AggregateSpec::SumPowers { p: 2.0, weights: vec![4.0] }, 100.0) - 5.0).abs() < 1e-12);
    assert!((cap(AggregateSpec::PNormPower { p: 2.0 }, 9.0) - 3.0).abs() < 1e-12);
}

#[test]
fn worked_oracle_values() {
    let l1 = NormSpec::Lp { p: 1.0 };
    let items = |ls: &[f64]| -> Vec<Item> { ls.iter().enumerate().map(|(j, &l)| Item { job: j, loads: vec![l] }).collect() };
    assert_eq!(opt_norm_pack(&l1, 1, &items(&[1.0, 2.0, 3.0]), 4.0, LIM).unwrap().count, 2);
    assert_eq!(brute_norm_pack(&l1, 1, &[vec![1.0], vec![2.0], vec![3.0]], 4.0), 2);
    assert_eq!(opt_norm_pack(&NormSpec::LInf, 1, &items(&[1.0, 9.0, 2.0]), 5.0, LIM).unwrap().count, 2);

    let two = Instance {
        m: 2,
        r: 1,
        inner_norms: vec![NormSpec::LInf; 2],
        aggregate: AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: vec![1.0, 1.0] } },
        budget: 1.0,
        jobs: vec![Job::new(vec![1.0, 1.0]); 2],
    };
    assert_eq!(opt_sched_pack(&two, LIM).unwrap().count, 2);
    assert_eq!(brute_sched_pack(&two), 2);

    let sc = SetCoverInstance { costs: vec![3.0, 1.0, 1.0], elements: vec![vec![0, 1], vec![0, 2]] };
    assert_eq!(opt_osc(&sc, LIM).unwrap(), 2.0);
    assert_eq!(brute_osc(&sc), 2.0);

    let top1 = BudgetedInstance {
        instance: Instance {
            m: 2,
            r: 1,
            inner_norms: vec![NormSpec::LInf; 2],
            aggregate: AggregateSpec::NormAgg { norm: NormSpec::TopK { k: 1 } },
            budget: 2.0,
            jobs: vec![Job::new(vec![1.0, 1.0]); 2],
        },
        machine_budgets: vec![2.0, 2.0],
    };
    assert_eq!(opt_budgeted_sched_pack(&top1, LIM).unwrap(), 2);
}

#[test]
fn threshold_masses_k4() {
    let s = threshold_support(4);
    let want = [(1.0, 0.5), (0.75, 0.25), (0.5, 0.125), (0.25, 0.0625), (0.0, 0.0625)];
    assert_eq!(s, want.to_vec());
    assert!((s.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-15);
}
