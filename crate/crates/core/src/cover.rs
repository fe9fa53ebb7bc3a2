//! Covering (every job must be placed) from packing agents.
//!
//! A guess of the optimum is doubled whenever the hindsight optimum of the
//! prefix passes it. Inside a phase, jobs flow through a cascade of packing
//! agents and each job goes to the first agent that takes it.

use serde::Serialize;

use crate::budgeted::{default_k_cover, log_m, Draws, ObcmAgent, ObcmConfig};
use crate::error::{Error, Result};
use crate::instance::{osc_to_gensched, Assignment, Instance, OnlineStream, SetCoverInstance};
use crate::model::{OnlinePacker, PackProblem, Placed};
use crate::norm::fits;
use crate::oracle::{opt_gen_sched_problem, OracleLimit, PrefixTracker};
use crate::reductions::{declared_violation, sched_pack_solver, PackConfig};
use crate::rng::{tag, Seed};
use crate::single_machine::solver_guarantee;

/// Builds a packing agent from `(budget, guess, seed)`.
pub type AgentFactory<'a> = dyn Fn(f64, f64, Seed) -> Result<Box<dyn OnlinePacker>> + 'a;

#[derive(Clone, Debug)]
pub struct CoverConfig {
    pub pack: PackConfig,
    pub limit: OracleLimit,
    /// Hard stop on partial schedulers per phase.
    pub max_partial: usize,
    /// Skip the doubling and run one phase at this budget.
    pub known_budget: Option<f64>,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig { pack: PackConfig::default(), limit: OracleLimit::default(), max_partial: 10_000, known_budget: None }
    }
}

/// Agents per group and number of groups of one partial scheduler.
pub fn partial_shape(n: usize, alpha: f64) -> (usize, usize) {
    let ln = log_m(n);
    let per = ((10.0 * (2.0 * ln).ln() + 2.0) / alpha).ceil().max(1.0) as usize;
    let groups = ((n.max(1) as f64).log2().ceil() as usize) + 1;
    (per, groups)
}

#[derive(Clone, Debug, Serialize)]
pub struct AgentRecord {
    pub budget: f64,
    pub declared: f64,
    pub placements: Vec<(usize, usize)>,
}

/// Groups of agents with decreasing guesses `n / 2^k`, all at one budget.
pub struct PartialScheduler<'f> {
    n: usize,
    per_group: usize,
    groups: usize,
    budget: f64,
    seed: Seed,
    factory: &'f AgentFactory<'f>,
    agents: Vec<Box<dyn OnlinePacker>>,
    pub records: Vec<AgentRecord>,
}

impl<'f> PartialScheduler<'f> {
    pub fn new(n: usize, alpha: f64, budget: f64, seed: Seed, factory: &'f AgentFactory<'f>) -> Self {
        let (per_group, groups) = partial_shape(n, alpha);
        PartialScheduler { n, per_group, groups, budget, seed, factory, agents: Vec::new(), records: Vec::new() }
    }

    pub fn capacity(&self) -> usize {
        self.per_group * self.groups
    }

    /// First agent to accept wins; `None` if all of them reject.
    pub fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        for a in 0..self.capacity() {
            if a == self.agents.len() {
                let k = a / self.per_group + 1;
                let guess = self.n as f64 / 2f64.powi(k as i32);
                let agent = (self.factory)(self.budget, guess, self.seed.at(tag::AGENT, a as u64))?;
                self.records.push(AgentRecord { budget: self.budget, declared: agent.violation(), placements: vec![] });
                self.agents.push(agent);
            }
            if let Some(flat) = self.agents[a].offer(job, loads)? {
                self.records[a].placements.push((job, flat));
                return Ok(Some(flat));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseInfo {
    pub budget: f64,
    pub first_job: usize,
    /// Partial schedulers (or layers) that received at least one job.
    pub tau: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenSchedRun {
    pub assignment: Assignment,
    pub cost: f64,
    pub phases: Vec<PhaseInfo>,
    pub tau: usize,
    pub stragglers: usize,
    pub agents: Vec<AgentRecord>,
    /// Layer inputs of the last phase (layered runs only).
    pub layer_inputs: Vec<Vec<usize>>,
    pub layer_budget: f64,
    /// Hindsight optimum and guess at every arrival.
    pub guesses: Vec<(f64, f64)>,
}

fn first_job_cost(prob: &PackProblem, loads: &[f64]) -> Result<f64> {
    let off = prob.offsets();
    let mut best = f64::INFINITY;
    for i in 0..prob.m() {
        for k in 0..prob.machines[i].ways() {
            let l = loads[off[i] + k];
            if !l.is_finite() {
                continue;
            }
            let li = prob.machines[i].load(&[Placed { job: 0, way: k, load: l }])?;
            let mut v = vec![0.0; prob.m()];
            v[i] = li;
            best = best.min(prob.aggregate.eval(&v)?);
        }
    }
    Ok(best)
}

/// Greedy: the placement with the smallest increase of the aggregate.
fn greedy_place(
    prob: &PackProblem,
    placed: &mut [Vec<Placed>],
    job: usize,
    loads: &[f64],
) -> Result<Option<usize>> {
    let off = prob.offsets();
    let cur: Vec<f64> = placed.iter().zip(&prob.machines).map(|(p, m)| m.load(p)).collect::<Result<_>>()?;
    let base = prob.aggregate.eval(&cur)?;
    let mut best: Option<(f64, usize)> = None;
    for i in 0..prob.m() {
        for k in 0..prob.machines[i].ways() {
            let l = loads[off[i] + k];
            if !l.is_finite() {
                continue;
            }
            placed[i].push(Placed { job, way: k, load: l });
            let li = prob.machines[i].load(&placed[i])?;
            placed[i].pop();
            let mut v = cur.clone();
            v[i] = li;
            let d = prob.aggregate.eval(&v)? - base;
            if best.map_or(true, |b| d < b.0) {
                best = Some((d, off[i] + k));
            }
        }
    }
    Ok(best.map(|b| b.1))
}

fn flat_to_mk(prob: &PackProblem, flat: usize) -> (usize, usize) {
    let off = prob.offsets();
    let i = off.partition_point(|&o| o <= flat) - 1;
    (i, flat - off[i])
}

trait Phase {
    fn offer(&mut self, job: usize, loads: &[f64], live: bool) -> Result<Option<usize>>;
    fn tau(&self) -> usize;
    fn take_records(&mut self) -> Vec<AgentRecord>;
    fn layer_inputs(&self) -> Vec<Vec<usize>> {
        Vec::new()
    }
}

struct CascadePhase<'f> {
    n: usize,
    alpha: f64,
    budget: f64,
    seed: Seed,
    factory: &'f AgentFactory<'f>,
    max_partial: usize,
    partials: Vec<PartialScheduler<'f>>,
    used: usize,
}

impl<'f> Phase for CascadePhase<'f> {
    fn offer(&mut self, job: usize, loads: &[f64], _live: bool) -> Result<Option<usize>> {
        let mut t = 0;
        loop {
            if t >= self.max_partial {
                return Err(Error::CascadeExhausted(t));
            }
            if t == self.partials.len() {
                self.partials.push(PartialScheduler::new(
                    self.n,
                    self.alpha,
                    self.budget,
                    self.seed.at(tag::AGENT, t as u64),
                    self.factory,
                ));
            }
            self.used = self.used.max(t + 1);
            if let Some(flat) = self.partials[t].offer(job, loads)? {
                return Ok(Some(flat));
            }
            t += 1;
        }
    }

    fn tau(&self) -> usize {
        self.used
    }

    fn take_records(&mut self) -> Vec<AgentRecord> {
        self.partials.iter_mut().flat_map(|p| std::mem::take(&mut p.records)).collect()
    }
}

struct Layer<'f> {
    guess: f64,
    tracker: PrefixTracker,
    sub: usize,
    agent: Option<Box<dyn OnlinePacker>>,
    record: usize,
    input: Vec<usize>,
    _f: std::marker::PhantomData<&'f ()>,
}

struct LayeredPhase<'f> {
    prob: PackProblem,
    n: usize,
    alpha: f64,
    budget: f64,
    layers_max: usize,
    seed: Seed,
    factory: &'f AgentFactory<'f>,
    limit: OracleLimit,
    layers: Vec<Layer<'f>>,
    records: Vec<AgentRecord>,
}

/// Number of layers minus one: least `N` with `n (1 - alpha/4)^(N+1) <= 2`.
pub fn layer_count(n: usize, alpha: f64) -> usize {
    let q = 1.0 - alpha / 4.0;
    let mut big_n = 0usize;
    while (n as f64) * q.powi(big_n as i32 + 1) > 2.0 {
        big_n += 1;
    }
    big_n
}

impl<'f> LayeredPhase<'f> {
    fn layer_size(&self, k: usize) -> f64 {
        self.n as f64 * (1.0 - self.alpha / 4.0).powi(k as i32)
    }
}

impl<'f> Phase for LayeredPhase<'f> {
    fn offer(&mut self, job: usize, loads: &[f64], _live: bool) -> Result<Option<usize>> {
        for k in 0..=self.layers_max {
            if k == self.layers.len() {
                let guess = (self.layer_size(k) / 2.0).floor().max(1.0);
                let mut pb = self.prob.clone();
                pb.budget = self.budget;
                self.layers.push(Layer {
                    guess,
                    tracker: PrefixTracker::new(pb, self.limit),
                    sub: 1,
                    agent: None,
                    record: 0,
                    input: Vec::new(),
                    _f: std::marker::PhantomData,
                });
            }
            let seed = self.seed.at(tag::AGENT, k as u64);
            let layer = &mut self.layers[k];
            layer.input.push(job);
            if layer.agent.is_none() {
                let a = (self.factory)(self.budget, layer.guess, seed.child(layer.sub as u64))?;
                self.records.push(AgentRecord { budget: self.budget, declared: a.violation(), placements: vec![] });
                layer.record = self.records.len() - 1;
                layer.agent = Some(a);
            }
            let got = layer.agent.as_mut().unwrap().offer(job, loads)?;
            if let Some(flat) = got {
                self.records[layer.record].placements.push((job, flat));
            }
            let opt = layer.tracker.observe(loads.to_vec())?;
            if opt as f64 >= layer.sub as f64 * layer.guess {
                layer.sub += 1;
                layer.agent = None;
            }
            if got.is_some() {
                return Ok(got);
            }
        }
        Ok(None)
    }

    fn tau(&self) -> usize {
        self.layers.len()
    }

    fn take_records(&mut self) -> Vec<AgentRecord> {
        std::mem::take(&mut self.records)
    }

    fn layer_inputs(&self) -> Vec<Vec<usize>> {
        self.layers.iter().map(|l| l.input.clone()).collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Cascade,
    Layered,
}

fn run_phases(
    inst: &Instance,
    prob: &PackProblem,
    factory: &AgentFactory<'_>,
    alpha: f64,
    cfg: &CoverConfig,
    seed: Seed,
    shape: Shape,
) -> Result<GenSchedRun> {
    inst.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let p = prob.aggregate.p();
    let n = inst.n();
    let mut stream = OnlineStream::new(inst);
    let mut placed: Vec<Vec<Placed>> = vec![Vec::new(); prob.m()];
    let mut seen: Vec<Vec<f64>> = Vec::new();
    let mut guess = cfg.known_budget.unwrap_or(0.0);
    let mut phases: Vec<PhaseInfo> = Vec::new();
    let mut agents = Vec::new();
    let mut stragglers = 0;
    let mut guesses = Vec::new();
    let mut phase: Option<Box<dyn Phase + '_>> = None;
    let mut layer_inputs = Vec::new();

    let new_phase = |budget: f64, idx: usize| -> Box<dyn Phase + '_> {
        let s = seed.at(tag::PHASE, idx as u64);
        match shape {
            Shape::Cascade => Box::new(CascadePhase {
                n,
                alpha,
                budget,
                seed: s,
                factory,
                max_partial: cfg.max_partial,
                partials: Vec::new(),
                used: 0,
            }),
            Shape::Layered => Box::new(LayeredPhase {
                prob: prob.clone(),
                n,
                alpha,
                budget,
                layers_max: layer_count(n, alpha),
                seed: s,
                factory,
                limit: cfg.limit,
                layers: Vec::new(),
                records: Vec::new(),
            }),
        }
    };

    while let Some((j, job)) = stream.next_job()? {
        seen.push(job.loads.clone());
        let opt = if cfg.known_budget.is_some() {
            guess
        } else {
            opt_gen_sched_problem(prob, &seen, cfg.limit)?.cost
        };
        if phase.is_none() || !fits(opt, guess) {
            if cfg.known_budget.is_none() {
                if phase.is_none() {
                    guess = first_job_cost(prob, &job.loads)?;
                }
                if guess > 0.0 {
                    while !fits(opt, guess) {
                        guess *= 2f64.powf(p);
                    }
                } else {
                    guess = opt;
                }
            }
            if let Some(mut old) = phase.take() {
                agents.extend(old.take_records());
                phases.last_mut().unwrap().tau = old.tau();
            }
            let mut ph = new_phase(guess, phases.len());
            for (t, loads) in seen[..j].iter().enumerate() {
                ph.offer(t, loads, false)?;
            }
            phases.push(PhaseInfo { budget: guess, first_job: j, tau: 0 });
            phase = Some(ph);
        }
        guesses.push((opt, guess));
        let got = if guess > 0.0 { phase.as_mut().unwrap().offer(j, &job.loads, true)? } else { None };
        let flat = match got {
            Some(f) => f,
            None => {
                stragglers += 1;
                greedy_place(prob, &mut placed, j, &job.loads)?
                    .ok_or_else(|| Error::Infeasible(format!("job {j} has no finite placement")))?
            }
        };
        let (i, k) = flat_to_mk(prob, flat);
        placed[i].push(Placed { job: j, way: k, load: job.loads[flat] });
        stream.place(j, Some((i, k)))?;
    }
    if let Some(mut ph) = phase.take() {
        agents.extend(ph.take_records());
        if let Some(last) = phases.last_mut() {
            last.tau = ph.tau();
        }
        layer_inputs = ph.layer_inputs();
    }
    let assignment = stream.finish();
    let cost = crate::instance::assignment_cost(inst, &assignment)?;
    let tau = phases.iter().map(|p| p.tau).max().unwrap_or(0);
    Ok(GenSchedRun {
        assignment,
        cost,
        tau,
        layer_budget: phases.last().map_or(0.0, |p| p.budget),
        phases,
        stragglers,
        agents,
        layer_inputs,
        guesses,
    })
}

/// Default `alpha` for the scheduling packers of `prob`.
pub fn default_alpha(prob: &PackProblem) -> f64 {
    let inner = prob
        .machines
        .iter()
        .map(|m| m.flat_norm().and_then(solver_guarantee).map_or(1.0 / 3.0, |g| g.0))
        .fold(1.0, f64::min);
    (inner / log_m(prob.m()).powi(2)).min(1.0)
}

/// `alpha` of the set-cover engine: `1 / (17 log2 m)`, at most one.
pub fn obcm_alpha(m: usize) -> f64 {
    (1.0 / (17.0 * (m.max(1) as f64).log2())).min(1.0)
}

/// Complete schedule via doubling and cascades of partial schedulers.
pub fn run_gen_sched(
    inst: &Instance,
    factory: &AgentFactory<'_>,
    alpha: f64,
    cfg: &CoverConfig,
    seed: Seed,
) -> Result<GenSchedRun> {
    run_phases(inst, &PackProblem::from_instance(inst), factory, alpha, cfg, seed, Shape::Cascade)
}

/// Complete schedule for norm aggregates via layers of packing agents.
pub fn run_gen_sched_norm(
    inst: &Instance,
    factory: &AgentFactory<'_>,
    alpha: f64,
    cfg: &CoverConfig,
    seed: Seed,
) -> Result<GenSchedRun> {
    if inst.aggregate.p() != 1.0 {
        return Err(Error::InvalidSpec("layered reduction needs a degree-one aggregate".into()));
    }
    run_phases(inst, &PackProblem::from_instance(inst), factory, alpha, cfg, seed, Shape::Layered)
}

/// Packing agents for `inst` built by the reductions module.
pub fn sched_pack_factory<'a>(inst: &'a Instance, cfg: &'a PackConfig) -> impl Fn(f64, f64, Seed) -> Result<Box<dyn OnlinePacker>> + 'a {
    let prob = PackProblem::from_instance(inst);
    move |budget, guess, seed| {
        let mut pb = prob.clone();
        pb.budget = budget;
        sched_pack_solver(&pb, guess, seed, cfg)
    }
}

/// Set-cover agents over the scheduling encoding.
pub fn obcm_factory(sc: &SetCoverInstance) -> impl Fn(f64, f64, Seed) -> Result<Box<dyn OnlinePacker>> + '_ {
    move |budget, guess, seed| {
        let m = sc.m();
        let k = default_k_cover(m);
        let cfg = ObcmConfig { budget, opt_guess: guess, k };
        let draws = Draws::sample(seed, m, k);
        Ok(Box::new(ObcmAgent::new(sc.costs.clone(), &cfg, &draws)?) as Box<dyn OnlinePacker>)
    }
}

/// Cascade run with packers chosen from the aggregate.
pub fn run_gen_sched_auto(inst: &Instance, cfg: &CoverConfig, seed: Seed) -> Result<GenSchedRun> {
    let f = sched_pack_factory(inst, &cfg.pack);
    let alpha = default_alpha(&PackProblem::from_instance(inst));
    run_gen_sched(inst, &f, alpha, cfg, seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct OscRun {
    pub chosen: Vec<usize>,
    pub cost: f64,
    pub run: GenSchedRun,
}

/// Online set cover: layered reduction over set-cover agents.
pub fn run_osc(sc: &SetCoverInstance, cfg: &CoverConfig, seed: Seed) -> Result<OscRun> {
    sc.validate()?;
    let inst = osc_to_gensched(sc);
    let f = obcm_factory(sc);
    let run = run_gen_sched_norm(&inst, &f, obcm_alpha(sc.m()), cfg, seed)?;
    let mut chosen: Vec<usize> = run.assignment.placements.iter().flatten().map(|p| p.0).collect();
    chosen.sort_unstable();
    chosen.dedup();
    let cost = chosen.iter().map(|&s| sc.costs[s]).sum();
    Ok(OscRun { chosen, cost, run })
}

/// Realized cost of every agent against its declared bound.
pub fn check_agent_budgets(inst: &Instance, run: &GenSchedRun) -> Result<()> {
    let prob = PackProblem::from_instance(inst);
    for (t, rec) in run.agents.iter().enumerate() {
        let mut placed: Vec<Vec<Placed>> = vec![Vec::new(); prob.m()];
        for &(j, flat) in &rec.placements {
            let (i, k) = flat_to_mk(&prob, flat);
            placed[i].push(Placed { job: j, way: k, load: inst.jobs[j].loads[flat] });
        }
        let loads: Vec<f64> = placed.iter().zip(&prob.machines).map(|(p, m)| m.load(p)).collect::<Result<_>>()?;
        let cost = prob.aggregate.eval(&loads)?;
        if !fits(cost, rec.declared * rec.budget) {
            return Err(Error::Invariant(format!(
                "agent {t} cost {cost} exceeds {} x {}",
                rec.declared, rec.budget
            )));
        }
    }
    Ok(())
}

/// Declared violation of the packers [`sched_pack_factory`] builds.
pub fn factory_violation(inst: &Instance) -> f64 {
    declared_violation(&PackProblem::from_instance(inst))
}

#[derive(Clone, Debug, Serialize)]
pub struct TailVerdict {
    pub frequency: f64,
    pub bound: f64,
    pub std_err: f64,
    pub pass: bool,
}

/// Empirical check of `Pr(sum Y <= beta and sum E >= beta + lambda) <= exp(-3 lambda / 14)`
/// over sample paths of `(conditional mean E_t, outcome Y_t)` pairs.
pub fn martingale_tail_check(paths: &[Vec<(f64, f64)>], beta: f64, lambda: f64) -> Result<TailVerdict> {
    if lambda < beta + 1.0 {
        return Err(Error::InvalidArgument(format!("need lambda >= beta + 1, got beta={beta} lambda={lambda}")));
    }
    if paths.is_empty() {
        return Err(Error::InvalidArgument("no sample paths".into()));
    }
    let hits = paths
        .iter()
        .filter(|path| {
            let ys: f64 = path.iter().map(|p| p.1).sum();
            let es: f64 = path.iter().map(|p| p.0).sum();
            ys <= beta && es >= beta + lambda
        })
        .count();
    let n = paths.len() as f64;
    let freq = hits as f64 / n;
    let bound = (-3.0 * lambda / 14.0).exp();
    let se = (bound * (1.0 - bound) / n).sqrt();
    Ok(TailVerdict { frequency: freq, bound, std_err: se, pass: freq <= bound + 3.0 * se })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_count_is_least() {
        for &(n, a) in &[(10usize, 0.5f64), (100, 0.1), (3, 1.0), (2, 0.3)] {
            let big = layer_count(n, a);
            let q = 1.0 - a / 4.0;
            assert!(n as f64 * q.powi(big as i32 + 1) <= 2.0);
            if big > 0 {
                assert!(n as f64 * q.powi(big as i32) > 2.0);
            }
        }
    }

    #[test]
    fn tail_check_rejects_small_lambda() {
        assert!(martingale_tail_check(&[vec![(1.0, 1.0)]], 3.0, 3.5).is_err());
    }

    #[test]
    fn osc_covers_everything() {
        let sc = SetCoverInstance {
            costs: vec![1.0, 2.0, 3.0],
            elements: vec![vec![0], vec![1, 2], vec![2], vec![0, 1], vec![2]],
        };
        for s in 0..10 {
            let r = run_osc(&sc, &CoverConfig::default(), Seed(s)).unwrap();
            assert!(r.run.assignment.is_complete());
        }
    }
}
