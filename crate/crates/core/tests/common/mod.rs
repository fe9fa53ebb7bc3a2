//! Exhaustive reference solvers used to check the library oracles.
//! Deliberately naive: plain enumeration, no pruning.
#![allow(dead_code)]

use ogs_core::instance::{Instance, SetCoverInstance};
use ogs_core::norm::{AggregateSpec, NormSpec};

pub const EPS: f64 = 1e-9;

pub fn le(a: f64, b: f64) -> bool {
    a <= b + EPS * (1.0 + a.abs().max(b.abs()))
}

/// Load of one machine holding `(coord, load)` entries.
pub fn machine_value(norm: &NormSpec, dim: usize, entries: &[(usize, f64)]) -> f64 {
    let mut x = vec![0.0; dim.max(norm.dim().unwrap_or(0))];
    for &(c, l) in entries {
        x[c] = l;
    }
    norm.eval(&x).unwrap()
}

/// Every choice of `None` or `Some((machine, way))` per job with a finite load.
pub fn for_each_assignment(
    n: usize,
    m: usize,
    r: usize,
    load: &dyn Fn(usize, usize, usize) -> f64,
    f: &mut dyn FnMut(&[Option<(usize, usize)>]),
    allow_none: bool,
) {
    fn go(
        j: usize,
        n: usize,
        m: usize,
        r: usize,
        load: &dyn Fn(usize, usize, usize) -> f64,
        cur: &mut Vec<Option<(usize, usize)>>,
        f: &mut dyn FnMut(&[Option<(usize, usize)>]),
        allow_none: bool,
    ) {
        if j == n {
            f(cur);
            return;
        }
        if allow_none {
            cur.push(None);
            go(j + 1, n, m, r, load, cur, f, allow_none);
            cur.pop();
        }
        for i in 0..m {
            for k in 0..r {
                if load(j, i, k).is_finite() {
                    cur.push(Some((i, k)));
                    go(j + 1, n, m, r, load, cur, f, allow_none);
                    cur.pop();
                }
            }
        }
    }
    go(0, n, m, r, load, &mut Vec::new(), f, allow_none);
}

pub fn loads_of(inst: &Instance, a: &[Option<(usize, usize)>]) -> Vec<f64> {
    let dim = inst.n() * inst.r;
    (0..inst.m)
        .map(|i| {
            let entries: Vec<(usize, f64)> = a
                .iter()
                .enumerate()
                .filter_map(|(j, p)| match p {
                    Some((ii, k)) if *ii == i => Some((j * inst.r + k, inst.load(j, i, *k))),
                    _ => None,
                })
                .collect();
            machine_value(&inst.inner_norms[i], dim, &entries)
        })
        .collect()
}

/// Most jobs placeable with aggregate at most `inst.budget`.
pub fn brute_sched_pack(inst: &Instance) -> usize {
    let mut best = 0;
    let load = |j: usize, i: usize, k: usize| inst.load(j, i, k);
    for_each_assignment(
        inst.n(),
        inst.m,
        inst.r,
        &load,
        &mut |a| {
            let c = a.iter().flatten().count();
            if c > best && le(inst.aggregate.eval(&loads_of(inst, a)).unwrap(), inst.budget) {
                best = c;
            }
        },
        true,
    );
    best
}

/// Cheapest complete assignment, `inf` when some job cannot be placed.
pub fn brute_gen_sched(inst: &Instance) -> f64 {
    let mut best = f64::INFINITY;
    let load = |j: usize, i: usize, k: usize| inst.load(j, i, k);
    for_each_assignment(
        inst.n(),
        inst.m,
        inst.r,
        &load,
        &mut |a| {
            best = best.min(inst.aggregate.eval(&loads_of(inst, a)).unwrap());
        },
        false,
    );
    if inst.n() == 0 {
        return inst.aggregate.eval(&vec![0.0; inst.m]).unwrap();
    }
    best
}

/// Budgeted packing: a machine counts as active iff it receives a job, its
/// load must stay within its own budget, and `outer_ok` judges the active set.
pub fn brute_budgeted(inst: &Instance, budgets: &[f64], outer_ok: &dyn Fn(&[bool]) -> bool) -> usize {
    let mut best = 0;
    let load = |j: usize, i: usize, k: usize| inst.load(j, i, k);
    for_each_assignment(
        inst.n(),
        inst.m,
        inst.r,
        &load,
        &mut |a| {
            let c = a.iter().flatten().count();
            if c <= best {
                return;
            }
            let mut y = vec![false; inst.m];
            for p in a.iter().flatten() {
                y[p.0] = true;
            }
            let loads = loads_of(inst, a);
            if (0..inst.m).all(|i| !y[i] || le(loads[i], budgets[i])) && outer_ok(&y) {
                best = c;
            }
        },
        true,
    );
    best
}

/// Outer test of a budgeted instance: `f(b o y) <= B`.
pub fn aggregate_ok<'a>(agg: &'a AggregateSpec, budgets: &'a [f64], budget: f64) -> impl Fn(&[bool]) -> bool + 'a {
    move |y: &[bool]| {
        let v: Vec<f64> = budgets.iter().zip(y).map(|(b, on)| if *on { *b } else { 0.0 }).collect();
        le(agg.eval(&v).unwrap(), budget)
    }
}

/// Largest number of jobs a single machine can take within `budget`.
pub fn brute_norm_pack(norm: &NormSpec, r: usize, jobs: &[Vec<f64>], budget: f64) -> usize {
    let n = jobs.len();
    let mut best = 0;
    let load = |j: usize, _i: usize, k: usize| jobs[j][k];
    for_each_assignment(
        n,
        1,
        r,
        &load,
        &mut |a| {
            let c = a.iter().flatten().count();
            if c <= best {
                return;
            }
            let entries: Vec<(usize, f64)> =
                a.iter().enumerate().filter_map(|(j, p)| p.map(|(_, k)| (j * r + k, jobs[j][k]))).collect();
            if le(machine_value(norm, n * r, &entries), budget) {
                best = c;
            }
        },
        true,
    );
    best
}

/// Cheapest family of sets covering every element.
pub fn brute_osc(sc: &SetCoverInstance) -> f64 {
    let m = sc.m();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        if sc.elements.iter().all(|e| e.iter().any(|&s| mask >> s & 1 == 1)) {
            let c: f64 = (0..m).filter(|s| mask >> s & 1 == 1).map(|s| sc.costs[s]).sum();
            best = best.min(c);
        }
    }
    best
}

/// Most elements covered by sets of total cost at most `budget`.
pub fn brute_obcm(sc: &SetCoverInstance, budget: f64) -> usize {
    let m = sc.m();
    let mut best = 0;
    for mask in 0u32..(1 << m) {
        let c: f64 = (0..m).filter(|s| mask >> s & 1 == 1).map(|s| sc.costs[s]).sum();
        if le(c, budget) {
            let cov = sc.elements.iter().filter(|e| e.iter().any(|&s| mask >> s & 1 == 1)).count();
            best = best.max(cov);
        }
    }
    best
}

/// Largest subset of `items` (job id, loads per way) that fits one machine,
/// with job `j` way `k` on coordinate `j*r + k` of a `dim`-vector.
pub fn brute_pack_items(norm: &NormSpec, r: usize, dim: usize, items: &[(usize, Vec<f64>)], budget: f64) -> usize {
    let mut best = 0;
    let load = |t: usize, _i: usize, k: usize| items[t].1[k];
    for_each_assignment(
        items.len(),
        1,
        r,
        &load,
        &mut |a| {
            let c = a.iter().flatten().count();
            if c <= best {
                return;
            }
            let entries: Vec<(usize, f64)> = a
                .iter()
                .enumerate()
                .filter_map(|(t, p)| p.map(|(_, k)| (items[t].0 * r + k, items[t].1[k])))
                .collect();
            if le(machine_value(norm, dim, &entries), budget) {
                best = c;
            }
        },
        true,
    );
    best
}

/// Elements covered on arrival by `sets`, given when each set became active.
pub fn covered_on_arrival(sc: &SetCoverInstance, sets: &[usize], activated_at: &[Option<usize>]) -> usize {
    sc.elements
        .iter()
        .enumerate()
        .filter(|(j, e)| e.iter().any(|s| sets.contains(s) && activated_at[*s].is_some_and(|t| t <= *j)))
        .count()
}
