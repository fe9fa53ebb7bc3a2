//! From packing with an outer aggregate to the budgeted engines.
//!
//! Every packer here is online: it sees each job once, answers with a final
//! decision, and can itself be used as the inner packer of a cluster machine.

use std::sync::Arc;

use crate::budgeted::{
    default_k_sched, ActivationTest, BudgetedProblem, CostRule, Draws, Engine, EngineConfig, GuessRule, WrapMode,
};
use crate::error::{Error, Result};
use crate::instance::{Assignment, BudgetedInstance, Instance, Job, OnlineStream};
use crate::model::{Item, MachineModel, OnlinePacker, PackProblem, Placed};
use crate::norm::{AggregateSpec, NormSpec, UnitCap};
use crate::oracle::{opt_sched_pack_items, OracleLimit};
use crate::rng::{tag, Seed};

#[derive(Clone, Debug)]
pub struct PackConfig {
    pub limit: OracleLimit,
    /// Replaces an infinite single-machine cap.
    pub inf_cap: f64,
    /// Forces a wrap mode instead of flipping the coin.
    pub wrap: Option<WrapMode>,
    /// Forces the guess rule of weighted-sum engines.
    pub guess: GuessRule,
}

impl Default for PackConfig {
    fn default() -> Self {
        PackConfig { limit: OracleLimit::default(), inf_cap: 1e12, wrap: None, guess: GuessRule::TwoPart }
    }
}

/// `max(1, ceil(log2 m))`.
pub fn budget_levels(m: usize) -> usize {
    ((m.max(1) as f64).log2().ceil() as usize).max(1)
}

/// Copies per machine: budget levels `b_max / 2^l` for `l = 0..=budget_levels(m)`.
pub fn copy_count(m: usize) -> usize {
    budget_levels(m) + 1
}

/// Copy `c` stands for machine `origin[c]` with budget `budgets[c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CopyMap {
    pub copies: usize,
    pub origin: Vec<usize>,
    pub budgets: Vec<f64>,
}

impl CopyMap {
    /// Merge a copy-level assignment back onto the original machines.
    pub fn map_back(&self, placements: &[Option<(usize, usize)>], m: usize) -> Assignment {
        let mut a = Assignment::empty(placements.len(), m);
        for (j, p) in placements.iter().enumerate() {
            if let Some((c, k)) = p {
                let i = self.origin[*c];
                a.placements[j] = Some((i, *k));
                a.active[i] = true;
            }
        }
        a
    }
}

fn unit_caps(agg: &AggregateSpec, m: usize, budget: f64, inf_cap: f64) -> Result<Vec<f64>> {
    (0..m)
        .map(|i| {
            Ok(match agg.unit_cap(i, m, budget)? {
                UnitCap::Finite(b) => b,
                UnitCap::Unbounded => {
                    log::warn!("machine {i} has no cap under the aggregate; clamping to {inf_cap}");
                    inf_cap
                }
            })
        })
        .collect()
}

fn copy_map(caps: &[f64]) -> CopyMap {
    let l = copy_count(caps.len());
    let mut origin = Vec::new();
    let mut budgets = Vec::new();
    for (i, &b) in caps.iter().enumerate() {
        for ell in 0..l {
            origin.push(i);
            budgets.push(b / 2f64.powi(ell as i32));
        }
    }
    CopyMap { copies: l, origin, budgets }
}

/// Budgeted instance with [`copy_count`] copies per machine at budgets
/// `b_max / 2^l`, the aggregate applied to per-machine sums, and budget `3^p B`.
pub fn reduce_to_copies(inst: &Instance, inf_cap: f64) -> Result<(BudgetedInstance, CopyMap)> {
    inst.validate()?;
    let caps = unit_caps(&inst.aggregate, inst.m, inst.budget, inf_cap)?;
    let map = copy_map(&caps);
    let jobs = inst
        .jobs
        .iter()
        .map(|job| {
            let mut loads = Vec::with_capacity(map.origin.len() * inst.r);
            for &i in &map.origin {
                loads.extend_from_slice(&job.loads[i * inst.r..(i + 1) * inst.r]);
            }
            Job::new(loads)
        })
        .collect();
    let reduced = Instance {
        m: map.origin.len(),
        r: inst.r,
        inner_norms: map.origin.iter().map(|&i| inst.inner_norms[i].clone()).collect(),
        aggregate: AggregateSpec::Grouped { base: Box::new(inst.aggregate.clone()), groups: map.origin.clone() },
        budget: 3f64.powf(inst.aggregate.p()) * inst.budget,
        jobs,
    };
    Ok((BudgetedInstance { instance: reduced, machine_budgets: map.budgets.clone() }, map))
}

/// Weighted-sum relaxation of the copies instance for an `l_p` outer norm:
/// weights `b^(p-1)`, budget `(3B)^p`.
pub fn relax_lp(copies: &BudgetedInstance, p: f64, budget: f64) -> BudgetedInstance {
    let mut out = copies.clone();
    let w = copies.machine_budgets.iter().map(|b| b.powf(p - 1.0)).collect();
    out.instance.aggregate = AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: w } };
    out.instance.budget = (3.0 * budget).powf(p);
    out
}

/// Weighted-sum relaxation for a Top-k outer norm: weight one on copies with
/// budget above `3B/k`, zero elsewhere, budget `3B`.
pub fn relax_topk(copies: &BudgetedInstance, k: usize, budget: f64) -> BudgetedInstance {
    let mut out = copies.clone();
    let w = topk_weights(&copies.machine_budgets, k, budget);
    out.instance.aggregate = AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: w } };
    out.instance.budget = 3.0 * budget;
    out
}

fn topk_weights(budgets: &[f64], k: usize, budget: f64) -> Vec<f64> {
    budgets.iter().map(|&b| if b > 3.0 * budget / k as f64 { 1.0 } else { 0.0 }).collect()
}

/// Values around an activation `y` of geometric copies `b_max/2^l`:
/// `(sum y b^p, sum_i (sum_l y b)^p, 2^p sum y b^p)`.
pub fn lp_sandwich(b_max: &[f64], y: &[bool], p: f64) -> (f64, f64, f64) {
    let map = copy_map(b_max);
    let mut lo = 0.0;
    let mut sums = vec![0.0; b_max.len()];
    for (c, &on) in y.iter().enumerate() {
        if on {
            lo += map.budgets[c].powf(p);
            sums[map.origin[c]] += map.budgets[c];
        }
    }
    let mid = sums.iter().map(|s| s.powf(p)).sum();
    (lo, mid, 2f64.powf(p) * lo)
}

/// `(min(sum_big y b, 3B), TopK(sum_l y b), sum_big y b + 6B)` with "big"
/// meaning copy budget above `3B/k`.
pub fn topk_sandwich(b_max: &[f64], y: &[bool], k: usize, budget: f64) -> (f64, f64, f64) {
    let map = copy_map(b_max);
    let w = topk_weights(&map.budgets, k, budget);
    let mut big = 0.0;
    let mut sums = vec![0.0; b_max.len()];
    for (c, &on) in y.iter().enumerate() {
        if on {
            big += w[c] * map.budgets[c];
            sums[map.origin[c]] += map.budgets[c];
        }
    }
    let mid = NormSpec::TopK { k }.eval(&sums).expect("dimension free");
    (big.min(3.0 * budget), mid, big + 6.0 * budget)
}

/// Rejects everything.
pub struct EmptyPacker;

impl OnlinePacker for EmptyPacker {
    fn offer(&mut self, _job: usize, _loads: &[f64]) -> Result<Option<usize>> {
        Ok(None)
    }
    fn violation(&self) -> f64 {
        1.0
    }
    fn accepted(&self) -> usize {
        0
    }
}

/// Runs an engine over machine copies and translates placements back.
pub struct CopyPacker {
    engine: Engine,
    origin: Vec<usize>,
    offsets: Vec<usize>,
    declared: f64,
    accepted: usize,
}

impl CopyPacker {
    fn new(prob: &PackProblem, origin: Vec<usize>, engine: Engine, declared: f64) -> Self {
        CopyPacker { engine, origin, offsets: prob.offsets(), declared, accepted: 0 }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }
}

impl OnlinePacker for CopyPacker {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        let mut expanded = Vec::with_capacity(self.engine.total_ways());
        for &i in &self.origin {
            expanded.extend_from_slice(&loads[self.offsets[i]..self.offsets[i + 1]]);
        }
        let got = self.engine.offer_reported(job, &expanded)?;
        Ok(got.map(|(c, k)| {
            self.accepted += 1;
            self.offsets[self.origin[c]] + k
        }))
    }

    fn violation(&self) -> f64 {
        self.declared
    }

    fn accepted(&self) -> usize {
        self.accepted
    }
}

fn wrap_mode(cfg: &PackConfig, seed: Seed) -> WrapMode {
    cfg.wrap.unwrap_or_else(|| WrapMode::from_coin(seed.child(tag::COIN).coin()))
}

fn inner_c(prob: &PackProblem) -> f64 {
    prob.machines.iter().map(|m| m.violation_hint()).fold(1.0, f64::max)
}

fn build_engine(
    machines: Vec<Arc<dyn MachineModel>>,
    budgets: Vec<f64>,
    rule: CostRule,
    budget: f64,
    guess: f64,
    guess_rule: GuessRule,
    seed: Seed,
    cfg: &PackConfig,
) -> Result<Engine> {
    let m = machines.len();
    let k = default_k_sched(m);
    let bp = BudgetedProblem { machines, budgets, rule, budget };
    let ecfg = EngineConfig {
        opt_guess: guess,
        k,
        test: ActivationTest::Oracle,
        guess: guess_rule,
        limit: cfg.limit,
        mode: wrap_mode(cfg, seed),
    };
    let mut draws = Draws::sample(seed, m, k);
    draws.keep_prefix = ecfg.mode == WrapMode::Prefix;
    Engine::new(bp, ecfg, draws, seed)
}

fn copies_of(prob: &PackProblem, map: &CopyMap) -> Vec<Arc<dyn MachineModel>> {
    map.origin.iter().map(|&i| prob.machines[i].clone()).collect()
}

/// p-bounded aggregate: copies, then the marginal-cost engine with `s = p`.
pub fn pbounded_packer(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<CopyPacker> {
    let agg = &prob.aggregate;
    if !agg.has_monotone_marginals() {
        return Err(Error::InvalidSpec("p-bounded path needs monotone marginals".into()));
    }
    let p = agg.p();
    let caps = unit_caps(agg, prob.m(), prob.budget, cfg.inf_cap)?;
    let map = copy_map(&caps);
    let rule = CostRule::Marginal {
        aggregate: AggregateSpec::Grouped { base: Box::new(agg.clone()), groups: map.origin.clone() },
        s: p,
    };
    let c = inner_c(prob);
    let engine = build_engine(
        copies_of(prob, &map),
        map.budgets.clone(),
        rule,
        3f64.powf(p) * prob.budget,
        guess,
        GuessRule::Dyadic,
        seed,
        cfg,
    )?;
    Ok(CopyPacker::new(prob, map.origin, engine, (3.0 * p * c).powf(p)))
}

/// Symmetric outer norm: one random budget level for every machine and a
/// cardinality budget.
pub fn symmetric_packer(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Box<dyn OnlinePacker>> {
    let norm = match &prob.aggregate {
        AggregateSpec::NormAgg { norm } if norm.is_symmetric() => norm,
        other => return Err(Error::InvalidSpec(format!("not a symmetric norm aggregate: {other:?}"))),
    };
    let m = prob.m();
    let mut e1 = vec![0.0; norm.dim().unwrap_or(m)];
    e1[0] = 1.0;
    let b_tilde = prob.budget / norm.eval(&e1)?;
    let levels = budget_levels(m);
    let ell = ((seed.child(tag::LEVEL).unit() * levels as f64) as usize).min(levels - 1);
    let b_bar = b_tilde / 2f64.powi(ell as i32);
    let kappa = max_copies_within(norm, m, b_bar, 2.0 * prob.budget)?;
    if kappa == 0 {
        return Ok(Box::new(EmptyPacker));
    }
    let c = inner_c(prob);
    let engine = build_engine(
        prob.machines.clone(),
        vec![b_bar; m],
        CostRule::Linear { costs: vec![1.0; m] },
        kappa as f64,
        guess,
        cfg.guess,
        seed,
        cfg,
    )?;
    Ok(Box::new(CopyPacker::new(prob, (0..m).collect(), engine, 2.0 * c)))
}

/// Largest `k <= m` with `||(b, .., b, 0, ..)|| <= limit` (k copies of `b`).
pub fn max_copies_within(norm: &NormSpec, m: usize, b: f64, limit: f64) -> Result<usize> {
    let dim = norm.dim().unwrap_or(m);
    let val = |k: usize| -> Result<f64> {
        let mut v = vec![0.0; dim];
        v[..k].iter_mut().for_each(|x| *x = b);
        norm.eval(&v)
    };
    let (mut lo, mut hi) = (0usize, m);
    if crate::norm::fits(val(m)?, limit) {
        return Ok(m);
    }
    // val(lo) fits, val(hi) does not
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if crate::norm::fits(val(mid)?, limit) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// `l_p` outer norm: copies, then weights `b^(p-1)` and budget `(3B)^p`.
pub fn lp_packer(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<CopyPacker> {
    let p = match &prob.aggregate {
        AggregateSpec::NormAgg { norm: NormSpec::Lp { p } } => *p,
        other => return Err(Error::InvalidSpec(format!("not an l_p aggregate: {other:?}"))),
    };
    let caps = unit_caps(&prob.aggregate, prob.m(), prob.budget, cfg.inf_cap)?;
    let map = copy_map(&caps);
    let costs = map.budgets.iter().map(|b| b.powf(p)).collect();
    let c = inner_c(prob);
    let engine = build_engine(
        copies_of(prob, &map),
        map.budgets.clone(),
        CostRule::Linear { costs },
        (3.0 * prob.budget).powf(p),
        guess,
        cfg.guess,
        seed,
        cfg,
    )?;
    Ok(CopyPacker::new(prob, map.origin, engine, 9.0 * c))
}

/// Top-k outer norm: copies, unit weight on copies above `3B/k`, budget `3B`.
pub fn topk_packer(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<CopyPacker> {
    let k = match &prob.aggregate {
        AggregateSpec::NormAgg { norm: NormSpec::TopK { k } } => *k,
        other => return Err(Error::InvalidSpec(format!("not a Top-k aggregate: {other:?}"))),
    };
    let caps = unit_caps(&prob.aggregate, prob.m(), prob.budget, cfg.inf_cap)?;
    let map = copy_map(&caps);
    let w = topk_weights(&map.budgets, k, prob.budget);
    let costs = w.iter().zip(&map.budgets).map(|(w, b)| w * b).collect();
    let c = inner_c(prob);
    let engine = build_engine(
        copies_of(prob, &map),
        map.budgets.clone(),
        CostRule::Linear { costs },
        3.0 * prob.budget,
        guess,
        cfg.guess,
        seed,
        cfg,
    )?;
    Ok(CopyPacker::new(prob, map.origin, engine, 9.0 * c))
}

/// A block of machines seen as one machine whose norm is the block norm of
/// the member loads.
#[derive(Debug)]
pub struct ClusterMachine {
    pub members: Vec<Arc<dyn MachineModel>>,
    pub block_norm: NormSpec,
    pub cfg: PackConfig,
    offsets: Vec<usize>,
}

impl ClusterMachine {
    pub fn new(members: Vec<Arc<dyn MachineModel>>, block_norm: NormSpec, cfg: PackConfig) -> Self {
        let mut offsets = vec![0];
        for m in &members {
            offsets.push(offsets.last().unwrap() + m.ways());
        }
        ClusterMachine { members, block_norm, cfg, offsets }
    }

    fn sub_problem(&self, budget: f64) -> PackProblem {
        PackProblem {
            machines: self.members.clone(),
            aggregate: AggregateSpec::NormAgg { norm: self.block_norm.clone() },
            budget,
        }
    }

    fn split(&self, way: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= way) - 1;
        (i, way - self.offsets[i])
    }
}

impl MachineModel for ClusterMachine {
    fn ways(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn load(&self, placed: &[Placed]) -> Result<f64> {
        let mut per: Vec<Vec<Placed>> = vec![Vec::new(); self.members.len()];
        for p in placed {
            let (i, k) = self.split(p.way);
            per[i].push(Placed { job: p.job, way: k, load: p.load });
        }
        let loads: Vec<f64> =
            per.iter().zip(&self.members).map(|(pl, m)| m.load(pl)).collect::<Result<_>>()?;
        self.block_norm.eval(&loads)
    }

    fn opt_pack(&self, items: &[Item], budget: f64, limit: OracleLimit) -> Result<usize> {
        opt_sched_pack_items(&self.sub_problem(budget), items, limit)
    }

    fn solver(&self, budget: f64, guess: f64, seed: Seed) -> Result<Box<dyn OnlinePacker>> {
        sched_pack_solver(&self.sub_problem(budget), guess, seed, &self.cfg)
    }

    fn violation_hint(&self) -> f64 {
        declared_violation(&self.sub_problem(1.0))
    }
}

/// Nested outer norm: each block becomes one cluster machine solved recursively.
pub struct NestedPacker {
    outer: Box<dyn OnlinePacker>,
    clusters: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    cluster_offsets: Vec<Vec<usize>>,
    accepted: usize,
}

pub fn nested_packer(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<NestedPacker> {
    let (outer, blocks) = match &prob.aggregate {
        AggregateSpec::NormAgg { norm: NormSpec::Nested { outer, blocks } } => (outer, blocks),
        other => return Err(Error::InvalidSpec(format!("not a nested aggregate: {other:?}"))),
    };
    let clusters: Vec<Vec<usize>> = blocks.iter().map(|b| b.indices.clone()).collect();
    let machines: Vec<Arc<dyn MachineModel>> = blocks
        .iter()
        .map(|b| {
            let members = b.indices.iter().map(|&i| prob.machines[i].clone()).collect();
            Arc::new(ClusterMachine::new(members, b.norm.clone(), cfg.clone())) as Arc<dyn MachineModel>
        })
        .collect();
    let top = PackProblem { machines, aggregate: AggregateSpec::NormAgg { norm: (**outer).clone() }, budget: prob.budget };
    let outer_packer = sched_pack_solver(&top, guess, seed.child(tag::INNER), cfg)?;
    let offsets = prob.offsets();
    let cluster_offsets = clusters
        .iter()
        .map(|c| {
            let mut o = vec![0];
            for &i in c {
                o.push(o.last().unwrap() + prob.machines[i].ways());
            }
            o
        })
        .collect();
    Ok(NestedPacker { outer: outer_packer, clusters, offsets, cluster_offsets, accepted: 0 })
}

impl OnlinePacker for NestedPacker {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        let mut gathered = Vec::new();
        let mut starts = Vec::new();
        for c in &self.clusters {
            starts.push(gathered.len());
            for &i in c {
                gathered.extend_from_slice(&loads[self.offsets[i]..self.offsets[i + 1]]);
            }
        }
        let got = match self.outer.offer(job, &gathered)? {
            None => return Ok(None),
            Some(flat) => flat,
        };
        let l = starts.partition_point(|&s| s <= got) - 1;
        let w = got - starts[l];
        let co = &self.cluster_offsets[l];
        let t = co.partition_point(|&o| o <= w) - 1;
        let i = self.clusters[l][t];
        self.accepted += 1;
        Ok(Some(self.offsets[i] + (w - co[t])))
    }

    fn violation(&self) -> f64 {
        self.outer.violation()
    }

    fn accepted(&self) -> usize {
        self.accepted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackPath {
    PBounded,
    Symmetric,
    Lp,
    TopK,
    Nested,
}

pub fn pack_path(agg: &AggregateSpec) -> Result<PackPath> {
    Ok(match agg {
        AggregateSpec::NormAgg { norm } => match norm {
            NormSpec::Lp { .. } => PackPath::Lp,
            NormSpec::TopK { .. } => PackPath::TopK,
            NormSpec::Nested { .. } => PackPath::Nested,
            n if n.is_symmetric() => PackPath::Symmetric,
            NormSpec::WeightedL1 { .. } => PackPath::PBounded,
            other => return Err(Error::NoSolver(other.kind().into())),
        },
        AggregateSpec::SumPowers { .. } | AggregateSpec::PNormPower { .. } | AggregateSpec::Grouped { .. } => {
            PackPath::PBounded
        }
    })
}

/// Factor by which a packer for `prob` may exceed the outer budget.
pub fn declared_violation(prob: &PackProblem) -> f64 {
    let c = inner_c(prob);
    match pack_path(&prob.aggregate) {
        Ok(PackPath::PBounded) => {
            let p = prob.aggregate.p();
            (3.0 * p * c).powf(p)
        }
        Ok(PackPath::Symmetric) => 2.0 * c,
        Ok(PackPath::Lp) | Ok(PackPath::TopK) => 9.0 * c,
        Ok(PackPath::Nested) => match &prob.aggregate {
            AggregateSpec::NormAgg { norm: NormSpec::Nested { outer, blocks } } => {
                let machines: Vec<Arc<dyn MachineModel>> = blocks
                    .iter()
                    .map(|b| {
                        let members = b.indices.iter().map(|&i| prob.machines[i].clone()).collect();
                        Arc::new(ClusterMachine::new(members, b.norm.clone(), PackConfig::default()))
                            as Arc<dyn MachineModel>
                    })
                    .collect();
                declared_violation(&PackProblem {
                    machines,
                    aggregate: AggregateSpec::NormAgg { norm: (**outer).clone() },
                    budget: 1.0,
                })
            }
            _ => unreachable!(),
        },
        Err(_) => f64::INFINITY,
    }
}

/// Online packer for `prob` with lower-bound guess `guess`.
pub fn sched_pack_solver(prob: &PackProblem, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Box<dyn OnlinePacker>> {
    if !(prob.budget > 0.0) {
        return Ok(Box::new(EmptyPacker));
    }
    Ok(match pack_path(&prob.aggregate)? {
        PackPath::PBounded => Box::new(pbounded_packer(prob, guess, seed, cfg)?),
        PackPath::Symmetric => symmetric_packer(prob, guess, seed, cfg)?,
        PackPath::Lp => Box::new(lp_packer(prob, guess, seed, cfg)?),
        PackPath::TopK => Box::new(topk_packer(prob, guess, seed, cfg)?),
        PackPath::Nested => Box::new(nested_packer(prob, guess, seed, cfg)?),
    })
}

/// Feed `inst` through `packer` online and collect the assignment.
pub fn drive_packer(inst: &Instance, packer: &mut dyn OnlinePacker) -> Result<Assignment> {
    let mut stream = OnlineStream::new(inst);
    while let Some((j, job)) = stream.next_job()? {
        let got = packer.offer(j, &job.loads)?;
        stream.place(j, got.map(|flat| (flat / inst.r, flat % inst.r)))?;
    }
    Ok(stream.finish())
}

pub fn solve_sched_pack(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    inst.validate()?;
    let prob = PackProblem::from_instance(inst);
    let mut p = sched_pack_solver(&prob, guess, seed, cfg)?;
    drive_packer(inst, p.as_mut())
}

pub fn solve_sched_pack_pbounded(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    let mut p = pbounded_packer(&PackProblem::from_instance(inst), guess, seed, cfg)?;
    drive_packer(inst, &mut p)
}

pub fn solve_sched_pack_symmetric(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    let mut p = symmetric_packer(&PackProblem::from_instance(inst), guess, seed, cfg)?;
    drive_packer(inst, p.as_mut())
}

pub fn solve_sched_pack_lp(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    let mut p = lp_packer(&PackProblem::from_instance(inst), guess, seed, cfg)?;
    drive_packer(inst, &mut p)
}

pub fn solve_sched_pack_topk(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    let mut p = topk_packer(&PackProblem::from_instance(inst), guess, seed, cfg)?;
    drive_packer(inst, &mut p)
}

pub fn solve_sched_pack_nested(inst: &Instance, guess: f64, seed: Seed, cfg: &PackConfig) -> Result<Assignment> {
    let mut p = nested_packer(&PackProblem::from_instance(inst), guess, seed, cfg)?;
    drive_packer(inst, &mut p)
}
