//! Online budgeted packing with random activation thresholds.
//!
//! Machines (or sets) collect offered jobs while inactive and switch on once
//! what they have seen is worth a random fraction of their activation cost.
//! The outer budget may be overshot by the last activation only; the wrapper
//! then keeps either everything before it or that activation alone.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{BudgetedInstance, SetCoverInstance};
use crate::model::{FlatMachine, Item, MachineModel, OnlinePacker, Placed};
use crate::norm::{fits, AggregateSpec, NormSpec};
use crate::oracle::OracleLimit;
use crate::rng::{tag, Seed};

/// `log2 m`, clamped below at 1.
pub fn log_m(m: usize) -> f64 {
    (m.max(1) as f64).log2().max(1.0)
}

/// Threshold depth for the set-cover engine.
pub fn default_k_cover(m: usize) -> usize {
    ((2.0 * log_m(m)).ceil() as usize).max(1)
}

/// Threshold depth for the scheduling engines.
pub fn default_k_sched(m: usize) -> usize {
    ((3.0 * log_m(m)).ceil() as usize).max(1)
}

fn tau_of(k: usize, k_max: usize) -> f64 {
    if k >= k_max {
        0.0
    } else {
        1.0 - k as f64 / k_max as f64
    }
}

/// Draw `(1 - k/K)^+` with `k` geometric, `Pr[k] = 2^-(k+1)`.
pub fn sample_threshold(k_max: usize, seed: Seed) -> f64 {
    let u: u64 = seed.rng().gen();
    tau_of(u.trailing_zeros() as usize, k_max)
}

/// Exact distribution of [`sample_threshold`] as `(value, probability)`.
pub fn threshold_support(k_max: usize) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = (0..k_max).map(|k| (tau_of(k, k_max), 0.5f64.powi(k as i32 + 1))).collect();
    v.push((0.0, 0.5f64.powi(k_max as i32)));
    v
}

/// Per-machine random inputs, each from its own stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Draws {
    pub tau_bar: Vec<f64>,
    pub guess_u: Vec<f64>,
    /// `true` keeps the activations before the violating one.
    pub keep_prefix: bool,
}

impl Draws {
    pub fn sample(seed: Seed, m: usize, k_max: usize) -> Self {
        Draws {
            tau_bar: (0..m).map(|i| sample_threshold(k_max, seed.at(tag::TAU, i as u64))).collect(),
            guess_u: (0..m).map(|i| seed.at(tag::GUESS, i as u64).unit()).collect(),
            keep_prefix: seed.child(tag::COIN).coin(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TraceEvent {
    Offer { job: usize, machine: usize, post: bool },
    Activate { job: usize, machine: usize },
    Accept { job: usize, machine: usize, way: usize },
    Reject { job: usize, machine: usize },
    GuardStop { job: usize, machine: usize },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Offer { job, machine, post } => {
                write!(f, "offer job={job} machine={machine} phase={}", if *post { "post" } else { "pre" })
            }
            TraceEvent::Activate { job, machine } => write!(f, "activate job={job} machine={machine}"),
            TraceEvent::Accept { job, machine, way } => write!(f, "accept job={job} machine={machine} way={way}"),
            TraceEvent::Reject { job, machine } => write!(f, "reject job={job} machine={machine}"),
            TraceEvent::GuardStop { job, machine } => write!(f, "guard-stop job={job} machine={machine}"),
        }
    }
}

/// How decisions of a possibly over-budget run are exposed online.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WrapMode {
    /// Everything the simulation does.
    Full,
    /// Only machines activated before the violating activation.
    Prefix,
    /// Only the violating machine; nothing at all if no violation happens.
    Violator,
}

impl WrapMode {
    pub fn from_coin(keep_prefix: bool) -> Self {
        if keep_prefix {
            WrapMode::Prefix
        } else {
            WrapMode::Violator
        }
    }

    fn keeps(self, machine: usize, violator: Option<usize>) -> bool {
        match self {
            WrapMode::Full => true,
            WrapMode::Prefix => Some(machine) != violator,
            WrapMode::Violator => Some(machine) == violator,
        }
    }
}

// ---------------------------------------------------------------------------
// Online budgeted set cover

#[derive(Clone, Debug, PartialEq)]
pub struct ObcmConfig {
    pub budget: f64,
    pub opt_guess: f64,
    pub k: usize,
}

/// Online budgeted maximum coverage. Sets costing more than the budget are
/// never activated.
#[derive(Clone, Debug)]
pub struct Obcm {
    costs: Vec<f64>,
    budget: f64,
    tau: Vec<f64>,
    mode: WrapMode,
    spent: f64,
    active: Vec<bool>,
    pub activation_order: Vec<usize>,
    pub activated_at: Vec<Option<usize>>,
    pub offered: Vec<Vec<usize>>,
    /// Set credited with each element in the simulation (`C_i` membership).
    pub covered_by: Vec<Option<usize>>,
    pub violator: Option<usize>,
    pub trace: Vec<TraceEvent>,
}

impl Obcm {
    pub fn new(costs: Vec<f64>, cfg: &ObcmConfig, tau_bar: &[f64], mode: WrapMode) -> Result<Self> {
        if tau_bar.len() != costs.len() {
            return Err(Error::DimensionMismatch { expected: costs.len(), got: tau_bar.len() });
        }
        if !(cfg.budget > 0.0) || !(cfg.opt_guess >= 0.0) {
            return Err(Error::InvalidArgument("budget must be positive and the guess nonnegative".into()));
        }
        let tau = costs
            .iter()
            .zip(tau_bar)
            .map(|(c, t)| t * c / (2.0 * cfg.budget) * cfg.opt_guess)
            .collect();
        let m = costs.len();
        Ok(Obcm {
            costs,
            budget: cfg.budget,
            tau,
            mode,
            spent: 0.0,
            active: vec![false; m],
            activation_order: Vec::new(),
            activated_at: vec![None; m],
            offered: vec![Vec::new(); m],
            covered_by: Vec::new(),
            violator: None,
            trace: Vec::new(),
        })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.tau
    }

    /// Process element `j` contained in `sets`; returns the covering set as
    /// exposed under the wrap mode.
    pub fn element(&mut self, j: usize, sets: &[usize]) -> Result<Option<usize>> {
        if j != self.covered_by.len() {
            return Err(Error::Irrevocable(format!("element {j} out of order")));
        }
        let mut by = self.activation_order.iter().copied().find(|s| sets.contains(s));
        if by.is_none() {
            let mut cand: Vec<usize> = sets.iter().copied().filter(|&s| !self.active[s]).collect();
            cand.sort_unstable();
            cand.dedup();
            for s in cand {
                if self.costs[s] > self.budget {
                    continue;
                }
                self.offered[s].push(j);
                self.trace.push(TraceEvent::Offer { job: j, machine: s, post: false });
                if self.offered[s].len() as f64 >= self.tau[s] {
                    if !fits(self.spent, self.budget) {
                        self.trace.push(TraceEvent::GuardStop { job: j, machine: s });
                        continue;
                    }
                    self.active[s] = true;
                    self.spent += self.costs[s];
                    self.activation_order.push(s);
                    self.activated_at[s] = Some(j);
                    self.trace.push(TraceEvent::Activate { job: j, machine: s });
                    if !fits(self.spent, self.budget) {
                        self.violator = Some(s);
                    }
                    by = Some(s);
                    break;
                }
            }
        }
        self.covered_by.push(by);
        if let Some(s) = by {
            self.trace.push(TraceEvent::Accept { job: j, machine: s, way: 0 });
        }
        Ok(match self.mode {
            WrapMode::Full => by,
            _ => self.activation_order.iter().copied().find(|&s| sets.contains(&s) && self.mode.keeps(s, self.violator)),
        })
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObcmRun {
    pub activation_order: Vec<usize>,
    pub activated_at: Vec<Option<usize>>,
    pub offered: Vec<Vec<usize>>,
    pub covered_by: Vec<Option<usize>>,
    pub violator: Option<usize>,
    pub cost: f64,
    pub trace: Vec<TraceEvent>,
}

impl ObcmRun {
    pub fn covered(&self) -> usize {
        self.covered_by.iter().flatten().count()
    }
}

pub fn run_obcm(sc: &SetCoverInstance, cfg: &ObcmConfig, tau_bar: &[f64]) -> Result<ObcmRun> {
    sc.validate()?;
    let mut o = Obcm::new(sc.costs.clone(), cfg, tau_bar, WrapMode::Full)?;
    for (j, sets) in sc.elements.iter().enumerate() {
        o.element(j, sets)?;
    }
    Ok(ObcmRun {
        cost: o.spent,
        activation_order: o.activation_order,
        activated_at: o.activated_at,
        offered: o.offered,
        covered_by: o.covered_by,
        violator: o.violator,
        trace: o.trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WrappedCover {
    pub kept: Vec<usize>,
    pub covered_by: Vec<Option<usize>>,
    pub cost: f64,
}

impl WrappedCover {
    pub fn covered(&self) -> usize {
        self.covered_by.iter().flatten().count()
    }
}

/// Keep either the sets activated before the violation or only the violating
/// set, and recount which elements were covered on arrival.
pub fn budget_wrapper_cover(sc: &SetCoverInstance, run: &ObcmRun, keep_prefix: bool) -> WrappedCover {
    let kept: Vec<usize> = match run.violator {
        None => run.activation_order.clone(),
        Some(v) if keep_prefix => run.activation_order.iter().copied().filter(|&s| s != v).collect(),
        Some(v) => vec![v],
    };
    let covered_by = sc
        .elements
        .iter()
        .enumerate()
        .map(|(j, sets)| {
            kept.iter().copied().find(|&s| sets.contains(&s) && run.activated_at[s].map_or(false, |a| a <= j))
        })
        .collect();
    let cost = kept.iter().map(|&s| sc.costs[s]).sum();
    WrappedCover { kept, covered_by, cost }
}

/// Set-cover engine behind the scheduling interface: one machine per set,
/// `r = 1`, loads equal the set cost or `inf`.
pub struct ObcmAgent {
    inner: Obcm,
    next: usize,
    accepted: usize,
}

impl ObcmAgent {
    pub fn new(costs: Vec<f64>, cfg: &ObcmConfig, draws: &Draws) -> Result<Self> {
        let mode = WrapMode::from_coin(draws.keep_prefix);
        Ok(ObcmAgent { inner: Obcm::new(costs, cfg, &draws.tau_bar, mode)?, next: 0, accepted: 0 })
    }
}

impl OnlinePacker for ObcmAgent {
    fn offer(&mut self, _job: usize, loads: &[f64]) -> Result<Option<usize>> {
        let sets: Vec<usize> = (0..loads.len()).filter(|&i| loads[i].is_finite()).collect();
        let j = self.next;
        self.next += 1;
        let got = self.inner.element(j, &sets)?;
        if got.is_some() {
            self.accepted += 1;
        }
        Ok(got)
    }

    fn violation(&self) -> f64 {
        1.0
    }

    fn accepted(&self) -> usize {
        self.accepted
    }
}

// ---------------------------------------------------------------------------
// Scheduling engines

/// How activation costs and the outer guard are computed.
#[derive(Clone, Debug, PartialEq)]
pub enum CostRule {
    /// Marginal increase of `f(b o y)`; guard `f(b o y) < s^p B`.
    Marginal { aggregate: AggregateSpec, s: f64 },
    /// Fixed costs `a_i`; guard `sum a_i y_i < B`.
    Linear { costs: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActivationTest {
    /// Offline optimum of the offered jobs against the threshold.
    Oracle,
    /// Number of offered jobs against the threshold.
    OfferCount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GuessRule {
    /// `OPT / 2^t`, `t` uniform in `1..=floor(2 log m)`.
    Dyadic,
    /// With probability 1/2 `OPT a_i / (60 B log m)`, otherwise dyadic.
    TwoPart,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub opt_guess: f64,
    pub k: usize,
    pub test: ActivationTest,
    pub guess: GuessRule,
    pub limit: OracleLimit,
    pub mode: WrapMode,
}

#[derive(Clone, Debug)]
pub struct BudgetedProblem {
    pub machines: Vec<Arc<dyn MachineModel>>,
    pub budgets: Vec<f64>,
    pub rule: CostRule,
    pub budget: f64,
}

impl BudgetedProblem {
    pub fn from_instance(binst: &BudgetedInstance, rule: CostRule) -> Result<Self> {
        binst.validate()?;
        let inst = &binst.instance;
        Ok(BudgetedProblem {
            machines: inst
                .inner_norms
                .iter()
                .map(|n| Arc::new(FlatMachine { norm: n.clone(), r: inst.r }) as Arc<dyn MachineModel>)
                .collect(),
            budgets: binst.machine_budgets.clone(),
            rule,
            budget: inst.budget,
        })
    }

    pub fn m(&self) -> usize {
        self.machines.len()
    }

    fn total(&self, y: &[bool]) -> Result<f64> {
        match &self.rule {
            CostRule::Marginal { aggregate, .. } => aggregate.eval_activation(&self.budgets, y),
            CostRule::Linear { costs } => Ok(costs.iter().zip(y).filter(|p| *p.1).map(|p| *p.0).sum()),
        }
    }

    fn cost_now(&self, y: &[bool], i: usize) -> Result<f64> {
        match &self.rule {
            CostRule::Marginal { aggregate, .. } => aggregate.marginal(&self.budgets, y, i),
            CostRule::Linear { costs } => Ok(costs[i]),
        }
    }

    fn guard_limit(&self) -> f64 {
        match &self.rule {
            CostRule::Marginal { aggregate, s } => s.powf(aggregate.p()) * self.budget,
            CostRule::Linear { .. } => self.budget,
        }
    }

    fn denominator(&self) -> f64 {
        match &self.rule {
            CostRule::Marginal { aggregate, s } => 10.0 * (s + 1.0).powf(aggregate.p()),
            CostRule::Linear { .. } => 20.0,
        }
    }

    /// Budget ceiling on the activation value; `s^p B` or `B`.
    pub fn outer_limit(&self) -> f64 {
        self.guard_limit()
    }

    pub fn activation_value(&self, y: &[bool]) -> Result<f64> {
        self.total(y)
    }
}

#[derive(Default)]
pub struct MachineState {
    pub eligible: bool,
    pub active: bool,
    /// Jobs offered while inactive (`O_i`).
    pub pre: Vec<Item>,
    /// Jobs offered after activation (`O_i^post`).
    pub post: Vec<Item>,
    pub act_cost: f64,
    pub guess: f64,
    pub activated_by: Option<usize>,
    pub accepted: Vec<Placed>,
    pub declared_c: f64,
    solver: Option<Box<dyn OnlinePacker>>,
}

impl fmt::Debug for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MachineState")
            .field("active", &self.active)
            .field("pre", &self.pre.len())
            .field("post", &self.post.len())
            .field("accepted", &self.accepted.len())
            .finish()
    }
}

pub struct Engine {
    prob: BudgetedProblem,
    cfg: EngineConfig,
    draws: Draws,
    seed: Seed,
    offsets: Vec<usize>,
    y: Vec<bool>,
    pub states: Vec<MachineState>,
    pub order: Vec<usize>,
    pub violator: Option<usize>,
    /// Simulated placements `(job, machine, way)`.
    pub placements: Vec<(usize, usize, usize)>,
    pub trace: Vec<TraceEvent>,
    reported: usize,
}

impl Engine {
    pub fn new(prob: BudgetedProblem, cfg: EngineConfig, draws: Draws, seed: Seed) -> Result<Self> {
        let m = prob.m();
        if draws.tau_bar.len() != m || draws.guess_u.len() != m || prob.budgets.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: draws.tau_bar.len() });
        }
        if !(prob.budget > 0.0) {
            return Err(Error::InvalidArgument("outer budget must be positive".into()));
        }
        if !(cfg.opt_guess > 0.0) {
            return Err(Error::InvalidArgument("opt guess must be positive".into()));
        }
        if let CostRule::Marginal { aggregate, s } = &prob.rule {
            if !aggregate.has_monotone_marginals() {
                return Err(Error::InvalidSpec("aggregate lacks monotone marginals".into()));
            }
            if !(*s >= 1.0) {
                return Err(Error::InvalidArgument("s must be at least 1".into()));
            }
        }
        if let CostRule::Linear { costs } = &prob.rule {
            if costs.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: costs.len() });
            }
        }
        let mut states: Vec<MachineState> = (0..m).map(|_| MachineState::default()).collect();
        let zero = vec![false; m];
        for (i, st) in states.iter_mut().enumerate() {
            st.eligible = fits(prob.cost_now(&zero, i)?, prob.budget);
        }
        let mut offsets = vec![0];
        for mm in &prob.machines {
            offsets.push(offsets.last().unwrap() + mm.ways());
        }
        Ok(Engine {
            prob,
            cfg,
            draws,
            seed,
            offsets,
            y: zero,
            states,
            order: Vec::new(),
            violator: None,
            placements: Vec::new(),
            trace: Vec::new(),
            reported: 0,
        })
    }

    pub fn problem(&self) -> &BudgetedProblem {
        &self.prob
    }

    pub fn total_ways(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn threshold(&self, i: usize) -> Result<f64> {
        let c = self.prob.cost_now(&self.y, i)?;
        Ok(self.draws.tau_bar[i] * self.cfg.opt_guess * c / (self.prob.denominator() * self.prob.budget))
    }

    fn draw_guess(&self, i: usize, act_cost: f64) -> f64 {
        let lm = log_m(self.prob.m());
        let count = (2.0 * lm).floor().max(1.0) as usize;
        let dyadic = |u: f64| {
            let t = 1 + ((u * count as f64) as usize).min(count - 1);
            self.cfg.opt_guess / 2f64.powi(t as i32)
        };
        let u = self.draws.guess_u[i];
        let g = match self.cfg.guess {
            GuessRule::Dyadic => dyadic(u),
            GuessRule::TwoPart => {
                if u < 0.5 {
                    self.cfg.opt_guess * act_cost / (60.0 * self.prob.budget * lm)
                } else {
                    dyadic((u - 0.5) * 2.0)
                }
            }
        };
        g.max(1.0)
    }

    fn crossed(&self, i: usize, tau: f64) -> Result<bool> {
        let st = &self.states[i];
        let v = match self.cfg.test {
            ActivationTest::OfferCount => st.pre.len() as f64,
            ActivationTest::Oracle => {
                self.prob.machines[i].opt_pack(&st.pre, self.prob.budgets[i], self.cfg.limit)? as f64
            }
        };
        Ok(v >= tau * (1.0 - 1e-12))
    }

    fn try_place(&mut self, i: usize, job: usize, row: &[f64]) -> Result<Option<usize>> {
        let st = &mut self.states[i];
        let got = st.solver.as_mut().expect("active machine has a solver").offer(job, row)?;
        match got {
            Some(k) => {
                st.accepted.push(Placed { job, way: k, load: row[k] });
                self.placements.push((job, i, k));
                self.trace.push(TraceEvent::Accept { job, machine: i, way: k });
            }
            None => self.trace.push(TraceEvent::Reject { job, machine: i }),
        }
        Ok(got)
    }

    /// Simulated decision for `job`; see [`Engine::offer_reported`] for the wrapped one.
    pub fn offer_sim(&mut self, job: usize, loads: &[f64]) -> Result<Option<(usize, usize)>> {
        if loads.len() != self.total_ways() {
            return Err(Error::DimensionMismatch { expected: self.total_ways(), got: loads.len() });
        }
        let offsets = self.offsets.clone();
        let row = |i: usize| &loads[offsets[i]..offsets[i + 1]];
        for idx in 0..self.order.len() {
            let i = self.order[idx];
            let r = row(i).to_vec();
            if r.iter().all(|l| l.is_infinite()) {
                continue;
            }
            self.states[i].post.push(Item { job, loads: r.clone() });
            self.trace.push(TraceEvent::Offer { job, machine: i, post: true });
            if let Some(k) = self.try_place(i, job, &r)? {
                return Ok(Some((i, k)));
            }
        }
        for i in 0..self.prob.m() {
            if self.states[i].active || !self.states[i].eligible {
                continue;
            }
            let r = row(i).to_vec();
            if r.iter().all(|l| l.is_infinite()) {
                continue;
            }
            self.states[i].pre.push(Item { job, loads: r.clone() });
            self.trace.push(TraceEvent::Offer { job, machine: i, post: false });
            let tau = self.threshold(i)?;
            if !self.crossed(i, tau)? {
                continue;
            }
            if !(self.prob.total(&self.y)? < self.prob.guard_limit()) {
                self.trace.push(TraceEvent::GuardStop { job, machine: i });
                continue;
            }
            let a = self.prob.cost_now(&self.y, i)?;
            self.y[i] = true;
            if !fits(self.prob.total(&self.y)?, self.prob.guard_limit()) {
                self.violator = Some(i);
            }
            let guess = self.draw_guess(i, a);
            let solver = self.prob.machines[i].solver(
                self.prob.budgets[i],
                guess,
                self.seed.at(tag::INNER, i as u64),
            )?;
            let st = &mut self.states[i];
            st.active = true;
            st.act_cost = a;
            st.guess = guess;
            st.activated_by = Some(job);
            st.declared_c = solver.violation();
            st.solver = Some(solver);
            self.order.push(i);
            self.trace.push(TraceEvent::Activate { job, machine: i });
            if let Some(k) = self.try_place(i, job, &r)? {
                return Ok(Some((i, k)));
            }
        }
        Ok(None)
    }

    /// Decision filtered through the configured [`WrapMode`].
    pub fn offer_reported(&mut self, job: usize, loads: &[f64]) -> Result<Option<(usize, usize)>> {
        let got = self.offer_sim(job, loads)?;
        Ok(got.filter(|&(i, _)| self.cfg.mode.keeps(i, self.violator)))
    }

    pub fn finish(self) -> EngineRun {
        EngineRun {
            order: self.order,
            violator: self.violator,
            placements: self.placements,
            trace: self.trace,
            states: self.states,
            y: self.y,
        }
    }
}

impl OnlinePacker for Engine {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        let got = self.offer_reported(job, loads)?;
        if got.is_some() {
            self.reported += 1;
        }
        Ok(got.map(|(i, k)| self.offsets[i] + k))
    }

    fn violation(&self) -> f64 {
        let c = self.states.iter().map(|s| s.declared_c).fold(1.0, f64::max);
        c
    }

    fn accepted(&self) -> usize {
        self.reported
    }
}

#[derive(Debug)]
pub struct EngineRun {
    pub order: Vec<usize>,
    pub violator: Option<usize>,
    pub placements: Vec<(usize, usize, usize)>,
    pub trace: Vec<TraceEvent>,
    pub states: Vec<MachineState>,
    pub y: Vec<bool>,
}

impl EngineRun {
    pub fn scheduled(&self) -> usize {
        self.placements.len()
    }

    pub fn trace_lines(&self) -> Vec<String> {
        self.trace.iter().map(|e| e.to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wrapped {
    pub kept: Vec<bool>,
    pub placements: Vec<(usize, usize, usize)>,
}

/// Post-hoc wrapper over a finished run; identity when nothing was violated.
pub fn budget_wrapper(run: &EngineRun, keep_prefix: bool) -> Wrapped {
    let m = run.y.len();
    let kept: Vec<bool> = match run.violator {
        None => run.y.clone(),
        Some(v) if keep_prefix => (0..m).map(|i| run.y[i] && i != v).collect(),
        Some(v) => (0..m).map(|i| i == v).collect(),
    };
    let placements = run.placements.iter().copied().filter(|p| kept[p.1]).collect();
    Wrapped { kept, placements }
}

/// Checks every active machine against `declared_c * b_i`; returns the worst ratio.
pub fn check_machine_loads(prob: &BudgetedProblem, run: &EngineRun) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, st) in run.states.iter().enumerate() {
        if !st.active || st.accepted.is_empty() {
            continue;
        }
        let load = prob.machines[i].load(&st.accepted)?;
        let cap = st.declared_c * prob.budgets[i];
        if !fits(load, cap) {
            return Err(Error::Invariant(format!("machine {i} load {load} exceeds {cap}")));
        }
        if prob.budgets[i] > 0.0 {
            worst = worst.max(load / prob.budgets[i]);
        }
    }
    Ok(worst)
}

/// Both sides of the per-run upper bound on the offline optimum:
/// `0.9 OPT` and `|Alg| + sum_{i active} max(OPT a_i / (s^p B), OPT_i(T_i))`.
pub fn opt_upper_bound_sides(prob: &BudgetedProblem, run: &EngineRun, opt: f64, limit: OracleLimit) -> Result<(f64, f64)> {
    let denom = prob.guard_limit();
    let mut rhs = run.scheduled() as f64;
    for &i in &run.order {
        let st = &run.states[i];
        let mut t: Vec<Item> = st.pre.clone();
        t.extend(st.post.iter().cloned());
        let inner = prob.machines[i].opt_pack(&t, prob.budgets[i], limit)? as f64;
        rhs += (opt * st.act_cost / denom).max(inner);
    }
    Ok((0.9 * opt, rhs))
}

fn engine_config(opt_guess: f64, k: usize, guess: GuessRule, mode: WrapMode) -> EngineConfig {
    EngineConfig { opt_guess, k, test: ActivationTest::Oracle, guess, limit: OracleLimit::default(), mode }
}

/// p-bounded outer aggregate with guard `s^p B` (simulation, no wrapping).
pub fn run_budgeted_pbounded(
    binst: &BudgetedInstance,
    s: f64,
    opt_guess: f64,
    draws: &Draws,
    seed: Seed,
) -> Result<EngineRun> {
    let rule = CostRule::Marginal { aggregate: binst.instance.aggregate.clone(), s };
    let prob = BudgetedProblem::from_instance(binst, rule)?;
    let k = default_k_sched(prob.m());
    let mut e = Engine::new(prob, engine_config(opt_guess, k, GuessRule::Dyadic, WrapMode::Full), draws.clone(), seed)?;
    drive(&mut e, binst)?;
    Ok(e.finish())
}

/// Activation costs `a_i = w_i b_i` of a weighted-sum aggregate.
pub fn linear_costs(binst: &BudgetedInstance) -> Result<Vec<f64>> {
    let b = &binst.machine_budgets;
    match &binst.instance.aggregate {
        AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights } } => {
            Ok(weights.iter().zip(b).map(|(w, bi)| crate::norm::mul0(*w, *bi)).collect())
        }
        AggregateSpec::SumPowers { p, weights } if *p == 1.0 => {
            Ok(weights.iter().zip(b).map(|(w, bi)| crate::norm::mul0(*w, *bi)).collect())
        }
        other => Err(Error::InvalidSpec(format!("not a weighted sum aggregate: {other:?}"))),
    }
}

/// Weighted-sum outer aggregate (simulation, no wrapping).
pub fn run_budgeted_wl1(
    binst: &BudgetedInstance,
    opt_guess: f64,
    guess: GuessRule,
    draws: &Draws,
    seed: Seed,
) -> Result<EngineRun> {
    let rule = CostRule::Linear { costs: linear_costs(binst)? };
    let prob = BudgetedProblem::from_instance(binst, rule)?;
    let k = default_k_sched(prob.m());
    let mut e = Engine::new(prob, engine_config(opt_guess, k, guess, WrapMode::Full), draws.clone(), seed)?;
    drive(&mut e, binst)?;
    Ok(e.finish())
}

fn drive(e: &mut Engine, binst: &BudgetedInstance) -> Result<()> {
    for (j, job) in binst.instance.jobs.iter().enumerate() {
        e.offer_sim(j, &job.loads)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, Job};

    #[test]
    fn support_k4() {
        let s = threshold_support(4);
        let vals: Vec<f64> = s.iter().map(|p| p.0).collect();
        assert_eq!(vals, vec![1.0, 0.75, 0.5, 0.25, 0.0]);
        let probs: Vec<f64> = s.iter().map(|p| p.1).collect();
        assert_eq!(probs, vec![0.5, 0.25, 0.125, 0.0625, 0.0625]);
    }

    #[test]
    fn guess_two_part_example() {
        // a_i = B, OPT = 120, log m = 2 -> 120 / (60 * 2) = 1
        let binst = BudgetedInstance {
            instance: Instance {
                m: 4,
                r: 1,
                inner_norms: vec![NormSpec::LInf; 4],
                aggregate: AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: vec![1.0; 4] } },
                budget: 5.0,
                jobs: vec![],
            },
            machine_budgets: vec![5.0; 4],
        };
        let prob = BudgetedProblem::from_instance(&binst, CostRule::Linear { costs: vec![5.0; 4] }).unwrap();
        let draws = Draws { tau_bar: vec![0.0; 4], guess_u: vec![0.1; 4], keep_prefix: true };
        let e = Engine::new(prob, engine_config(120.0, 6, GuessRule::TwoPart, WrapMode::Full), draws, Seed(0))
            .unwrap();
        assert!((e.draw_guess(0, 5.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn obcm_single_set() {
        let n = 6;
        let sc = SetCoverInstance { costs: vec![2.0], elements: vec![vec![0]; n] };
        for (tau_bar, _) in threshold_support(4) {
            let cfg = ObcmConfig { budget: 2.0, opt_guess: n as f64, k: 4 };
            let run = run_obcm(&sc, &cfg, &[tau_bar]).unwrap();
            let tau = tau_bar * n as f64 / 2.0;
            let first = (tau.ceil() as usize).max(1);
            assert_eq!(run.covered(), n - first + 1);
        }
    }

    #[test]
    fn wrapper_identity_without_violation() {
        let binst = BudgetedInstance {
            instance: Instance {
                m: 1,
                r: 1,
                inner_norms: vec![NormSpec::LInf],
                aggregate: AggregateSpec::SumPowers { p: 1.0, weights: vec![1.0] },
                budget: 2.0,
                jobs: vec![Job::new(vec![1.0]), Job::new(vec![1.0])],
            },
            machine_budgets: vec![1.0],
        };
        let draws = Draws { tau_bar: vec![0.0], guess_u: vec![0.0], keep_prefix: false };
        let run = run_budgeted_wl1(&binst, 2.0, GuessRule::Dyadic, &draws, Seed(1)).unwrap();
        assert!(run.violator.is_none());
        let w = budget_wrapper(&run, false);
        assert_eq!(w.placements, run.placements);
    }
}
