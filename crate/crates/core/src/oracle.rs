//! Exact offline optima by enumeration, with fast paths where the structure
//! allows. Enumeration is bounded by an [`OracleLimit`]; running past it is an
//! error, never a silent approximation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{osc_to_gensched, BudgetedInstance, Instance, SetCoverInstance};
use crate::model::{FlatMachine, Item, MachineModel, PackProblem, Placed};
use crate::norm::{fits, NormSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OracleLimit(pub u64);

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit(1 << 22)
    }
}

struct Nodes {
    used: u64,
    limit: u64,
}

impl Nodes {
    fn new(limit: OracleLimit) -> Self {
        Nodes { used: 0, limit: limit.0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::OracleLimit { limit: self.limit });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormPackOpt {
    pub count: usize,
    /// Chosen way per item, `None` if left out.
    pub ways: Vec<Option<usize>>,
}

fn min_way(loads: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &l) in loads.iter().enumerate() {
        if l.is_finite() && best.map_or(true, |b| l < b.1) {
            best = Some((k, l));
        }
    }
    best
}

/// Maximum number of items packable on one machine with `norm <= budget`.
pub fn opt_norm_pack(
    norm: &NormSpec,
    r: usize,
    items: &[Item],
    budget: f64,
    limit: OracleLimit,
) -> Result<NormPackOpt> {
    match norm {
        NormSpec::LInf => {
            let ways: Vec<Option<usize>> =
                items.iter().map(|it| it.loads.iter().position(|&l| fits(l, budget))).collect();
            Ok(NormPackOpt { count: ways.iter().flatten().count(), ways })
        }
        n if n.is_symmetric() => {
            // Smallest loads first is optimal for a monotone symmetric norm.
            let mut order: Vec<(usize, usize, f64)> = items
                .iter()
                .enumerate()
                .filter_map(|(t, it)| min_way(&it.loads).map(|(k, l)| (t, k, l)))
                .collect();
            order.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
            let mut entries = Vec::new();
            let mut ways = vec![None; items.len()];
            let mut count = 0;
            for (t, k, l) in order {
                entries.push((items[t].job * r + k, l));
                if !fits(n.eval_sparse(&entries)?, budget) {
                    break;
                }
                ways[t] = Some(k);
                count += 1;
            }
            Ok(NormPackOpt { count, ways })
        }
        _ => opt_norm_pack_brute(norm, r, items, budget, limit),
    }
}

/// Enumeration without fast paths.
pub fn opt_norm_pack_brute(
    norm: &NormSpec,
    r: usize,
    items: &[Item],
    budget: f64,
    limit: OracleLimit,
) -> Result<NormPackOpt> {
    let machine = FlatMachine { norm: norm.clone(), r };
    brute_pack_machine(&machine, items, budget, limit)
}

pub fn brute_pack_machine(
    machine: &dyn MachineModel,
    items: &[Item],
    budget: f64,
    limit: OracleLimit,
) -> Result<NormPackOpt> {
    struct S<'a> {
        machine: &'a dyn MachineModel,
        items: &'a [Item],
        budget: f64,
        nodes: Nodes,
        placed: Vec<Placed>,
        cur: Vec<Option<usize>>,
        best: usize,
        best_ways: Vec<Option<usize>>,
    }
    impl S<'_> {
        fn go(&mut self, t: usize) -> Result<()> {
            self.nodes.tick()?;
            let n = self.items.len();
            if self.placed.len() + (n - t) <= self.best {
                return Ok(());
            }
            if t == n {
                self.best = self.placed.len();
                self.best_ways = self.cur.clone();
                return Ok(());
            }
            let it = &self.items[t];
            for (k, &l) in it.loads.iter().enumerate() {
                if !l.is_finite() {
                    continue;
                }
                self.placed.push(Placed { job: it.job, way: k, load: l });
                if fits(self.machine.load(&self.placed)?, self.budget) {
                    self.cur[t] = Some(k);
                    self.go(t + 1)?;
                    self.cur[t] = None;
                }
                self.placed.pop();
                if self.best == n {
                    return Ok(());
                }
            }
            self.go(t + 1)
        }
    }
    let mut s = S {
        machine,
        items,
        budget,
        nodes: Nodes::new(limit),
        placed: Vec::new(),
        cur: vec![None; items.len()],
        best: 0,
        best_ways: vec![None; items.len()],
    };
    s.go(0)?;
    Ok(NormPackOpt { count: s.best, ways: s.best_ways })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchedOpt {
    pub count: usize,
    pub placements: Vec<Option<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenOpt {
    pub cost: f64,
    pub placements: Vec<(usize, usize)>,
}

fn machine_way(offsets: &[usize], flat: usize) -> (usize, usize) {
    let i = offsets.partition_point(|&o| o <= flat) - 1;
    (i, flat - offsets[i])
}

/// Distinct finite loads per machine, with 0 first.
fn linf_levels(prob: &PackProblem, jobs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let off = prob.offsets();
    (0..prob.m())
        .map(|i| {
            let mut v: Vec<f64> = jobs
                .iter()
                .flat_map(|j| j[off[i]..off[i + 1]].iter().copied())
                .filter(|l| l.is_finite())
                .collect();
            v.push(0.0);
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect()
}

fn linf_cover(prob: &PackProblem, jobs: &[Vec<f64>], caps: &[f64]) -> Vec<Option<(usize, usize)>> {
    let off = prob.offsets();
    jobs.iter()
        .map(|j| {
            (0..prob.m()).find_map(|i| {
                j[off[i]..off[i + 1]].iter().position(|&l| l.is_finite() && l <= caps[i]).map(|k| (i, k))
            })
        })
        .collect()
}

/// With max-norm machines only, a schedule is determined up to relabelling by
/// the load level of each machine, so enumerate level vectors instead.
fn linf_level_search(
    prob: &PackProblem,
    jobs: &[Vec<f64>],
    limit: OracleLimit,
    minimize: bool,
) -> Result<Option<(f64, usize, Vec<f64>)>> {
    let levels = linf_levels(prob, jobs);
    let mut nodes = Nodes::new(limit);
    let mut caps = vec![0.0; prob.m()];
    // (cost, count, caps)
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    fn go(
        i: usize,
        prob: &PackProblem,
        jobs: &[Vec<f64>],
        levels: &[Vec<f64>],
        caps: &mut Vec<f64>,
        nodes: &mut Nodes,
        minimize: bool,
        best: &mut Option<(f64, usize, Vec<f64>)>,
    ) -> Result<()> {
        nodes.tick()?;
        let cost = prob.aggregate.eval(caps)?;
        if minimize {
            if best.as_ref().map_or(false, |b| cost >= b.0) {
                return Ok(());
            }
        } else if !fits(cost, prob.budget) {
            return Ok(());
        }
        if i == prob.m() {
            let cover = linf_cover(prob, jobs, caps);
            let count = cover.iter().flatten().count();
            if minimize {
                if count == jobs.len() {
                    *best = Some((cost, count, caps.clone()));
                }
            } else if best.as_ref().map_or(true, |b| count > b.1) {
                *best = Some((cost, count, caps.clone()));
            }
            return Ok(());
        }
        for &lv in levels[i].iter().rev() {
            caps[i] = lv;
            go(i + 1, prob, jobs, levels, caps, nodes, minimize, best)?;
            if !minimize && best.as_ref().map_or(false, |b| b.1 == jobs.len()) {
                break;
            }
        }
        caps[i] = 0.0;
        Ok(())
    }
    go(0, prob, jobs, &levels, &mut caps, &mut nodes, minimize, &mut best)?;
    Ok(best)
}

struct MultiPack<'a> {
    machines: &'a [Arc<dyn MachineModel>],
    offsets: Vec<usize>,
    jobs: &'a [Vec<f64>],
    ids: Vec<usize>,
    allowed: Vec<bool>,
    nodes: &'a mut Nodes,
    placed: Vec<Vec<Placed>>,
    loads: Vec<f64>,
    cur: Vec<Option<(usize, usize)>>,
    count: usize,
    best: usize,
    best_pl: Vec<Option<(usize, usize)>>,
}

impl<'a> MultiPack<'a> {
    fn new(
        machines: &'a [Arc<dyn MachineModel>],
        jobs: &'a [Vec<f64>],
        allowed: Vec<bool>,
        nodes: &'a mut Nodes,
    ) -> Self {
        let mut offsets = vec![0];
        for m in machines {
            offsets.push(offsets.last().unwrap() + m.ways());
        }
        MultiPack {
            machines,
            offsets,
            jobs,
            ids: (0..jobs.len()).collect(),
            allowed,
            nodes,
            placed: vec![Vec::new(); machines.len()],
            loads: vec![0.0; machines.len()],
            cur: vec![None; jobs.len()],
            count: 0,
            best: 0,
            best_pl: vec![None; jobs.len()],
        }
    }

    fn go(&mut self, t: usize, ok: &dyn Fn(&[f64], usize) -> Result<bool>) -> Result<()> {
        self.nodes.tick()?;
        let n = self.jobs.len();
        if self.count + (n - t) <= self.best {
            return Ok(());
        }
        if t == n {
            self.best = self.count;
            self.best_pl = self.cur.clone();
            return Ok(());
        }
        for i in 0..self.machines.len() {
            if !self.allowed[i] {
                continue;
            }
            for k in 0..self.machines[i].ways() {
                let l = self.jobs[t][self.offsets[i] + k];
                if !l.is_finite() {
                    continue;
                }
                self.placed[i].push(Placed { job: self.ids[t], way: k, load: l });
                let old = self.loads[i];
                self.loads[i] = self.machines[i].load(&self.placed[i])?;
                if ok(&self.loads, i)? {
                    self.cur[t] = Some((i, k));
                    self.count += 1;
                    self.go(t + 1, ok)?;
                    self.count -= 1;
                    self.cur[t] = None;
                }
                self.loads[i] = old;
                self.placed[i].pop();
                if self.best == n {
                    return Ok(());
                }
            }
        }
        self.go(t + 1, ok)
    }
}

/// Maximum number of jobs schedulable with aggregate cost within the budget.
pub fn opt_sched_pack_problem(prob: &PackProblem, jobs: &[Vec<f64>], limit: OracleLimit) -> Result<SchedOpt> {
    if prob.all_linf() {
        let (_, count, caps) = linf_level_search(prob, jobs, limit, false)?.expect("zero caps are feasible");
        let placements = linf_cover(prob, jobs, &caps);
        debug_assert_eq!(placements.iter().flatten().count(), count);
        return Ok(SchedOpt { count, placements });
    }
    opt_sched_pack_brute(prob, jobs, limit)
}

pub fn opt_sched_pack_brute(prob: &PackProblem, jobs: &[Vec<f64>], limit: OracleLimit) -> Result<SchedOpt> {
    let ids: Vec<usize> = (0..jobs.len()).collect();
    brute_ids(prob, jobs, ids, limit)
}

/// Same as [`opt_sched_pack_problem`] for jobs carrying their own indices.
pub fn opt_sched_pack_items(prob: &PackProblem, items: &[Item], limit: OracleLimit) -> Result<usize> {
    let jobs: Vec<Vec<f64>> = items.iter().map(|it| it.loads.clone()).collect();
    if prob.all_linf() {
        return Ok(opt_sched_pack_problem(prob, &jobs, limit)?.count);
    }
    Ok(brute_ids(prob, &jobs, items.iter().map(|it| it.job).collect(), limit)?.count)
}

fn brute_ids(prob: &PackProblem, jobs: &[Vec<f64>], ids: Vec<usize>, limit: OracleLimit) -> Result<SchedOpt> {
    let mut nodes = Nodes::new(limit);
    let mut s = MultiPack::new(&prob.machines, jobs, vec![true; prob.m()], &mut nodes);
    s.ids = ids;
    let ok = |loads: &[f64], _: usize| Ok(fits(prob.aggregate.eval(loads)?, prob.budget));
    s.go(0, &ok)?;
    Ok(SchedOpt { count: s.best, placements: s.best_pl })
}

pub fn opt_sched_pack(inst: &Instance, limit: OracleLimit) -> Result<SchedOpt> {
    let jobs: Vec<Vec<f64>> = inst.jobs.iter().map(|j| j.loads.clone()).collect();
    opt_sched_pack_problem(&PackProblem::from_instance(inst), &jobs, limit)
}

/// Minimum aggregate cost of a complete schedule.
pub fn opt_gen_sched_problem(prob: &PackProblem, jobs: &[Vec<f64>], limit: OracleLimit) -> Result<GenOpt> {
    for (j, loads) in jobs.iter().enumerate() {
        if loads.iter().all(|l| l.is_infinite()) {
            return Err(Error::Infeasible(format!("job {j} has no finite placement")));
        }
    }
    if prob.all_linf() {
        let (cost, _, caps) = linf_level_search(prob, jobs, limit, true)?
            .ok_or_else(|| Error::Infeasible("no complete schedule".into()))?;
        let placements = linf_cover(prob, jobs, &caps).into_iter().map(|p| p.unwrap()).collect();
        return Ok(GenOpt { cost, placements });
    }
    opt_gen_sched_brute(prob, jobs, limit)
}

pub fn opt_gen_sched_brute(prob: &PackProblem, jobs: &[Vec<f64>], limit: OracleLimit) -> Result<GenOpt> {
    struct S<'a> {
        prob: &'a PackProblem,
        offsets: Vec<usize>,
        jobs: &'a [Vec<f64>],
        nodes: Nodes,
        placed: Vec<Vec<Placed>>,
        loads: Vec<f64>,
        cur: Vec<(usize, usize)>,
        best: f64,
        best_pl: Vec<(usize, usize)>,
    }
    impl S<'_> {
        fn go(&mut self, t: usize) -> Result<()> {
            self.nodes.tick()?;
            if t == self.jobs.len() {
                let c = self.prob.aggregate.eval(&self.loads)?;
                if c < self.best {
                    self.best = c;
                    self.best_pl = self.cur.clone();
                }
                return Ok(());
            }
            // Cheapest continuation first so the incumbent tightens early.
            let mut opts = Vec::new();
            for (flat, &l) in self.jobs[t].iter().enumerate() {
                if !l.is_finite() {
                    continue;
                }
                let (i, k) = machine_way(&self.offsets, flat);
                self.placed[i].push(Placed { job: t, way: k, load: l });
                let li = self.prob.machines[i].load(&self.placed[i])?;
                self.placed[i].pop();
                let old = self.loads[i];
                self.loads[i] = li;
                let c = self.prob.aggregate.eval(&self.loads)?;
                self.loads[i] = old;
                opts.push((c, i, k, l, li));
            }
            opts.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (c, i, k, l, li) in opts {
                if c >= self.best {
                    break;
                }
                self.placed[i].push(Placed { job: t, way: k, load: l });
                let old = self.loads[i];
                self.loads[i] = li;
                self.cur.push((i, k));
                self.go(t + 1)?;
                self.cur.pop();
                self.loads[i] = old;
                self.placed[i].pop();
            }
            Ok(())
        }
    }
    let mut s = S {
        prob,
        offsets: prob.offsets(),
        jobs,
        nodes: Nodes::new(limit),
        placed: vec![Vec::new(); prob.m()],
        loads: vec![0.0; prob.m()],
        cur: Vec::new(),
        best: f64::INFINITY,
        best_pl: Vec::new(),
    };
    s.go(0)?;
    if s.best.is_infinite() {
        return Err(Error::Infeasible("no finite-cost schedule".into()));
    }
    Ok(GenOpt { cost: s.best, placements: s.best_pl })
}

pub fn opt_gen_sched(inst: &Instance, limit: OracleLimit) -> Result<GenOpt> {
    let jobs: Vec<Vec<f64>> = inst.jobs.iter().map(|j| j.loads.clone()).collect();
    opt_gen_sched_problem(&PackProblem::from_instance(inst), &jobs, limit)
}

/// Optimum of the budgeted problem: choose an activation set accepted by
/// `feasible` (monotone), then pack jobs with each active machine within its
/// own budget.
pub fn opt_budgeted_problem(
    machines: &[Arc<dyn MachineModel>],
    budgets: &[f64],
    feasible: &dyn Fn(&[bool]) -> Result<bool>,
    jobs: &[Vec<f64>],
    limit: OracleLimit,
) -> Result<usize> {
    let m = machines.len();
    if m > 40 {
        return Err(Error::OracleLimit { limit: limit.0 });
    }
    let mut nodes = Nodes::new(limit);
    let all_linf = machines.iter().all(|mm| matches!(mm.flat_norm(), Some(NormSpec::LInf)));
    let mut best = 0;
    for mask in 0u64..(1u64 << m) {
        nodes.tick()?;
        let y: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
        if !feasible(&y)? {
            continue;
        }
        // Only maximal activation sets matter.
        let mut maximal = true;
        for i in 0..m {
            if !y[i] {
                let mut y2 = y.clone();
                y2[i] = true;
                if feasible(&y2)? {
                    maximal = false;
                    break;
                }
            }
        }
        if !maximal {
            continue;
        }
        let count = if all_linf {
            let mut off = 0;
            let offs: Vec<usize> = machines
                .iter()
                .map(|mm| {
                    let o = off;
                    off += mm.ways();
                    o
                })
                .collect();
            jobs.iter()
                .filter(|j| {
                    (0..m).any(|i| {
                        y[i] && j[offs[i]..offs[i] + machines[i].ways()].iter().any(|&l| fits(l, budgets[i]))
                    })
                })
                .count()
        } else {
            let mut s = MultiPack::new(machines, jobs, y.clone(), &mut nodes);
            let ok = |loads: &[f64], i: usize| Ok(fits(loads[i], budgets[i]));
            s.go(0, &ok)?;
            s.best
        };
        best = best.max(count);
        if best == jobs.len() {
            break;
        }
    }
    Ok(best)
}

pub fn opt_budgeted_sched_pack(binst: &BudgetedInstance, limit: OracleLimit) -> Result<usize> {
    let inst = &binst.instance;
    let prob = PackProblem::from_instance(inst);
    let jobs: Vec<Vec<f64>> = inst.jobs.iter().map(|j| j.loads.clone()).collect();
    let feasible =
        |y: &[bool]| Ok(fits(inst.aggregate.eval_activation(&binst.machine_budgets, y)?, inst.budget));
    opt_budgeted_problem(&prob.machines, &binst.machine_budgets, &feasible, &jobs, limit)
}

/// Minimum total cost of a cover of all elements.
pub fn opt_osc(sc: &SetCoverInstance, limit: OracleLimit) -> Result<f64> {
    Ok(opt_gen_sched(&osc_to_gensched(sc), limit)?.cost)
}

/// Maximum number of elements coverable with total set cost at most `budget`.
pub fn opt_obcm(sc: &SetCoverInstance, budget: f64, limit: OracleLimit) -> Result<usize> {
    let mut inst = osc_to_gensched(sc);
    inst.budget = budget;
    Ok(opt_sched_pack(&inst, limit)?.count)
}

/// Hindsight packing optimum of the arrived prefix. Adding a job raises it by
/// zero or one; anything else is reported as an invariant violation.
pub struct PrefixTracker {
    prob: PackProblem,
    jobs: Vec<Vec<f64>>,
    limit: OracleLimit,
    last: usize,
}

impl PrefixTracker {
    pub fn new(prob: PackProblem, limit: OracleLimit) -> Self {
        PrefixTracker { prob, jobs: Vec::new(), limit, last: 0 }
    }

    pub fn observe(&mut self, loads: Vec<f64>) -> Result<usize> {
        self.jobs.push(loads);
        let v = opt_sched_pack_problem(&self.prob, &self.jobs, self.limit)?.count;
        if v < self.last || v > self.last + 1 {
            return Err(Error::Invariant(format!("prefix optimum moved from {} to {v}", self.last)));
        }
        self.last = v;
        Ok(v)
    }

    pub fn value(&self) -> usize {
        self.last
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Job;
    use crate::norm::AggregateSpec;

    fn items(loads: &[&[f64]]) -> Vec<Item> {
        loads.iter().enumerate().map(|(j, l)| Item { job: j, loads: l.to_vec() }).collect()
    }

    #[test]
    fn l1_pack_example() {
        let it = items(&[&[1.0], &[2.0], &[3.0]]);
        let fast = opt_norm_pack(&NormSpec::Lp { p: 1.0 }, 1, &it, 4.0, OracleLimit::default()).unwrap();
        // subsets of {1,2,3} with sum <= 4: {1,2},{1,3}
        assert_eq!(fast.count, 2);
    }

    #[test]
    fn linf_pack_counts_fitting_jobs() {
        let it = items(&[&[5.0, 1.0], &[7.0, f64::INFINITY], &[2.0, 2.0]]);
        let r = opt_norm_pack(&NormSpec::LInf, 2, &it, 2.0, OracleLimit::default()).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.ways, vec![Some(1), None, Some(0)]);
    }

    #[test]
    fn sched_pack_example() {
        let inst = Instance {
            m: 2,
            r: 1,
            inner_norms: vec![NormSpec::LInf; 2],
            aggregate: AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: vec![1.0, 1.0] } },
            budget: 1.0,
            jobs: vec![Job::new(vec![1.0, 1.0]), Job::new(vec![1.0, 1.0])],
        };
        assert_eq!(opt_sched_pack(&inst, OracleLimit::default()).unwrap().count, 2);
        let jobs: Vec<Vec<f64>> = inst.jobs.iter().map(|j| j.loads.clone()).collect();
        let b = opt_sched_pack_brute(&PackProblem::from_instance(&inst), &jobs, OracleLimit::default()).unwrap();
        assert_eq!(b.count, 2);
    }

    #[test]
    fn osc_example() {
        let sc = SetCoverInstance { costs: vec![3.0, 1.0, 1.0], elements: vec![vec![0, 1], vec![0, 2]] };
        assert_eq!(opt_osc(&sc, OracleLimit::default()).unwrap(), 2.0);
        let inst = osc_to_gensched(&sc);
        let jobs: Vec<Vec<f64>> = inst.jobs.iter().map(|j| j.loads.clone()).collect();
        let b = opt_gen_sched_brute(&PackProblem::from_instance(&inst), &jobs, OracleLimit::default()).unwrap();
        assert_eq!(b.cost, 2.0);
    }

    #[test]
    fn budgeted_example() {
        let binst = BudgetedInstance {
            instance: Instance {
                m: 2,
                r: 1,
                inner_norms: vec![NormSpec::LInf; 2],
                aggregate: AggregateSpec::NormAgg { norm: NormSpec::TopK { k: 1 } },
                budget: 2.0,
                jobs: vec![Job::new(vec![1.0, 1.0]), Job::new(vec![2.0, 2.0])],
            },
            machine_budgets: vec![2.0, 2.0],
        };
        assert_eq!(opt_budgeted_sched_pack(&binst, OracleLimit::default()).unwrap(), 2);
    }

    #[test]
    fn limit_is_an_error() {
        let it = items(&[&[1.0, 1.0][..]; 12]);
        let w = NormSpec::WeightedL1 { weights: (0..24).map(|i| 1.0 + i as f64).collect() };
        let r = opt_norm_pack(&w, 2, &it, 1e9, OracleLimit(10));
        assert!(matches!(r, Err(Error::OracleLimit { limit: 10 })));
    }

    #[test]
    fn prefix_tracker_steps() {
        let inst = Instance {
            m: 1,
            r: 1,
            inner_norms: vec![NormSpec::Lp { p: 1.0 }],
            aggregate: AggregateSpec::NormAgg { norm: NormSpec::LInf },
            budget: 3.0,
            jobs: vec![],
        };
        let mut t = PrefixTracker::new(PackProblem::from_instance(&inst), OracleLimit::default());
        assert_eq!(t.observe(vec![2.0]).unwrap(), 1);
        assert_eq!(t.observe(vec![2.0]).unwrap(), 1);
        assert_eq!(t.observe(vec![1.0]).unwrap(), 2);
    }
}
