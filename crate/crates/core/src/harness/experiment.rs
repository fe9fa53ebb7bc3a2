//! Seeded Monte-Carlo runs with per-trial assertions and reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{generate_facility_location, generate_load_balancing, generate_nested, generate_set_cover};
use crate::budgeted::{
    budget_wrapper, budget_wrapper_cover, default_k_cover, default_k_sched, opt_upper_bound_sides, run_budgeted_pbounded,
    run_obcm, BudgetedProblem, CostRule, Draws, ObcmConfig,
};
use crate::cover::{check_agent_budgets, run_gen_sched_auto, run_osc, CoverConfig, GenSchedRun};
use crate::error::{Error, Result};
use crate::instance::{osc_to_gensched, BudgetedInstance, Instance, SetCoverInstance};
use crate::model::PackProblem;
use crate::norm::{fits, AggregateSpec, NormSpec};
use crate::oracle::{opt_budgeted_sched_pack, opt_gen_sched, opt_obcm, opt_osc, opt_sched_pack_problem, OracleLimit};
use crate::rng::{tag, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SetCover,
    LoadBalancing,
    FacilityLocation,
    NestedNorm,
    CustomFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AssertLevel {
    /// Completeness only.
    Off,
    /// Plus oracle optimum, per-agent budgets and the doubling invariant.
    Basic,
    /// Plus the budgeted-engine claims on a companion instance.
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    /// Blocks of the nested scenario; machines are split evenly.
    pub blocks: usize,
    pub density: f64,
    pub trials: usize,
    pub seed: u64,
    pub oracle_limit: u64,
    pub assert_level: AssertLevel,
    pub input: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Small defaults the exact oracles handle quickly.
    pub fn desk(scenario: Scenario) -> Self {
        let (n, m, r, blocks) = match scenario {
            Scenario::SetCover => (12, 6, 1, 1),
            Scenario::LoadBalancing => (8, 3, 2, 1),
            Scenario::FacilityLocation => (8, 3, 1, 1),
            Scenario::NestedNorm => (8, 4, 1, 2),
            Scenario::CustomFile => (0, 0, 1, 1),
        };
        ExperimentConfig {
            scenario,
            n,
            m,
            r,
            blocks,
            density: 0.3,
            trials: 100,
            seed: 0,
            oracle_limit: OracleLimit::default().0,
            assert_level: AssertLevel::Full,
            input: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.scenario == Scenario::CustomFile {
            if self.input.is_none() {
                return Err(Error::InvalidArgument("custom-file needs an input path".into()));
            }
            return Ok(());
        }
        if self.n == 0 || self.m == 0 || self.r == 0 {
            return Err(Error::InvalidArgument("n, m and r must be positive".into()));
        }
        if self.assert_level > AssertLevel::Off && self.n * self.m * self.r > 256 {
            return Err(Error::InvalidArgument(format!(
                "n*m*r = {} is too large for the exact oracles; use --assert-level off",
                self.n * self.m * self.r
            )));
        }
        if self.scenario == Scenario::NestedNorm && (self.blocks == 0 || self.m % self.blocks != 0) {
            return Err(Error::InvalidArgument("m must be a positive multiple of blocks".into()));
        }
        Ok(())
    }

    fn limit(&self) -> OracleLimit {
        OracleLimit(self.oracle_limit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Problem {
    Cover(SetCoverInstance),
    Sched(Instance),
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem> {
        let text = std::fs::read_to_string(path)?;
        let v: serde_json::Value = serde_json::from_str(&text)?;
        if v.get("costs").is_some() {
            let sc: SetCoverInstance = serde_json::from_value(v)?;
            sc.validate()?;
            Ok(Problem::Cover(sc))
        } else {
            let inst: Instance = serde_json::from_value(v)?;
            inst.validate()?;
            Ok(Problem::Sched(inst))
        }
    }
}

/// Instance of one trial, drawn from `seed`.
pub fn generate(cfg: &ExperimentConfig, seed: Seed) -> Result<Problem> {
    let s = seed.child(tag::GEN);
    Ok(match cfg.scenario {
        Scenario::SetCover => Problem::Cover(generate_set_cover(cfg.n, cfg.m, cfg.density, (1.0, 4.0), s)?),
        Scenario::LoadBalancing => Problem::Sched(generate_load_balancing(
            cfg.n,
            cfg.m,
            cfg.r,
            (1.0, 10.0),
            NormSpec::LInf,
            AggregateSpec::SumPowers { p: 2.0, weights: vec![1.0; cfg.m] },
            s,
        )?),
        Scenario::FacilityLocation => {
            Problem::Sched(generate_facility_location(cfg.n, cfg.m, (1.0, 5.0), (0.0, 3.0), s)?)
        }
        Scenario::NestedNorm => Problem::Sched(generate_nested(cfg.n, cfg.blocks, cfg.m / cfg.blocks, (1.0, 10.0), s)?),
        Scenario::CustomFile => {
            let path = cfg.input.as_ref().ok_or_else(|| Error::InvalidArgument("missing input".into()))?;
            Problem::load(path)?
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub scheduled: usize,
    pub cost: f64,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub tau: usize,
    pub phases: usize,
    pub stragglers: usize,
    /// Sched-Pack optimum of each layer input of the last phase.
    pub residuals: Vec<usize>,
    pub assertions: BTreeMap<String, bool>,
}

fn doubling_ok(run: &GenSchedRun) -> bool {
    run.guesses.iter().all(|&(opt, guess)| fits(opt, guess))
}

fn cover_trial(cfg: &ExperimentConfig, sc: &SetCoverInstance, trial: usize, seed: Seed) -> Result<TrialRecord> {
    let limit = cfg.limit();
    let ccfg = CoverConfig { limit, ..CoverConfig::default() };
    let out = run_osc(sc, &ccfg, seed.child(1))?;
    let run = &out.run;
    let mut a = BTreeMap::new();
    a.insert("complete".to_string(), run.assignment.is_complete());
    let mut opt = None;
    let mut residuals = Vec::new();
    if cfg.assert_level >= AssertLevel::Basic {
        let o = opt_osc(sc, limit)?;
        opt = Some(o);
        a.insert("agent_budget".into(), check_agent_budgets(&osc_to_gensched(sc), run).is_ok());
        a.insert("doubling".into(), doubling_ok(run));
    }
    if cfg.assert_level >= AssertLevel::Full {
        let o = opt.unwrap_or(0.0);
        let k = default_k_cover(sc.m());
        let draws = Draws::sample(seed.child(2), sc.m(), k);
        let best = opt_obcm(sc, o, limit)?;
        let ocfg = ObcmConfig { budget: o, opt_guess: best as f64, k };
        let ob = run_obcm(sc, &ocfg, &draws.tau_bar)?;
        let half_ok = !(ob.cost < o) || 2 * ob.covered() >= best;
        a.insert("obcm_half".into(), half_ok);
        let w = budget_wrapper_cover(sc, &ob, draws.keep_prefix);
        a.insert("wrapper_budget".into(), fits(w.cost, o));

        let inst = osc_to_gensched(sc);
        let mut prob = PackProblem::from_instance(&inst);
        prob.budget = run.layer_budget;
        for input in &run.layer_inputs {
            let jobs: Vec<Vec<f64>> = input.iter().map(|&j| inst.jobs[j].loads.clone()).collect();
            residuals.push(opt_sched_pack_problem(&prob, &jobs, limit)?.count);
        }
    }
    Ok(TrialRecord {
        trial,
        seed: seed.0,
        n: sc.n(),
        scheduled: run.assignment.scheduled(),
        cost: out.cost,
        ratio: opt.filter(|&o| o > 0.0).map(|o| out.cost / o),
        opt,
        tau: run.tau,
        phases: run.phases.len(),
        stragglers: run.stragglers,
        residuals,
        assertions: a,
    })
}

/// Companion budgeted instance: machine budgets at 1.5 times the mean finite
/// load, outer budget at half of activating everything.
fn companion(inst: &Instance) -> Result<BudgetedInstance> {
    let r = inst.r;
    let budgets: Vec<f64> = (0..inst.m)
        .map(|i| {
            let v: Vec<f64> = inst
                .jobs
                .iter()
                .flat_map(|j| j.loads[i * r..(i + 1) * r].iter().copied())
                .filter(|l| l.is_finite())
                .collect();
            if v.is_empty() {
                1.0
            } else {
                1.5 * v.iter().sum::<f64>() / v.len() as f64
            }
        })
        .collect();
    let mut b = inst.clone();
    b.budget = inst.aggregate.eval(&budgets)? / 2.0;
    Ok(BudgetedInstance { instance: b, machine_budgets: budgets })
}

fn sched_trial(cfg: &ExperimentConfig, inst: &Instance, trial: usize, seed: Seed) -> Result<TrialRecord> {
    let limit = cfg.limit();
    let ccfg = CoverConfig { limit, ..CoverConfig::default() };
    let run = run_gen_sched_auto(inst, &ccfg, seed.child(1))?;
    let mut a = BTreeMap::new();
    a.insert("complete".to_string(), run.assignment.is_complete());
    let mut opt = None;
    if cfg.assert_level >= AssertLevel::Basic {
        opt = Some(opt_gen_sched(inst, limit)?.cost);
        a.insert("agent_budget".into(), check_agent_budgets(inst, &run).is_ok());
        a.insert("doubling".into(), doubling_ok(&run));
    }
    if cfg.assert_level >= AssertLevel::Full && inst.aggregate.has_monotone_marginals() {
        let binst = companion(inst)?;
        let best = opt_budgeted_sched_pack(&binst, limit)?;
        if best > 0 && binst.instance.budget > 0.0 {
            let s = inst.aggregate.p();
            let m = inst.m;
            let draws = Draws::sample(seed.child(2), m, default_k_sched(m));
            let er = run_budgeted_pbounded(&binst, s, best as f64, &draws, seed.child(3))?;
            let prob = BudgetedProblem::from_instance(
                &binst,
                CostRule::Marginal { aggregate: inst.aggregate.clone(), s },
            )?;
            let (lhs, rhs) = opt_upper_bound_sides(&prob, &er, best as f64, limit)?;
            a.insert("opt_upper_bound".into(), lhs <= rhs + 1e-9);
            let w = budget_wrapper(&er, draws.keep_prefix);
            a.insert("wrapper_budget".into(), fits(prob.activation_value(&w.kept)?, prob.outer_limit()));
        }
    }
    Ok(TrialRecord {
        trial,
        seed: seed.0,
        n: inst.n(),
        scheduled: run.assignment.scheduled(),
        cost: run.cost,
        ratio: opt.filter(|&o| o > 0.0).map(|o| run.cost / o),
        opt,
        tau: run.tau,
        phases: run.phases.len(),
        stragglers: run.stragglers,
        residuals: Vec::new(),
        assertions: a,
    })
}

/// Seed of trial `t` under master seed `seed`.
pub fn trial_seed(seed: u64, t: usize) -> Seed {
    Seed(seed).at(tag::TRIAL, t as u64)
}

/// One trial from its own seed; `fixed` overrides the generator.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize, seed: Seed, fixed: Option<&Problem>) -> Result<TrialRecord> {
    let owned;
    let problem = match fixed {
        Some(p) => p,
        None => {
            owned = generate(cfg, seed)?;
            &owned
        }
    };
    match problem {
        Problem::Cover(sc) => cover_trial(cfg, sc, trial, seed),
        Problem::Sched(inst) => sched_trial(cfg, inst, trial, seed),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub std_err: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Stats {
        if xs.is_empty() {
            return Stats::default();
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        let std = var.sqrt();
        Stats {
            count: xs.len(),
            mean,
            std,
            std_err: std / n.sqrt(),
            min: xs.iter().copied().fold(f64::INFINITY, f64::min),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub assertion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scheduled: Stats,
    pub ratio: Stats,
    pub tau: Stats,
    pub failures: Vec<Failure>,
}

impl Summary {
    pub fn of(trials: &[TrialRecord]) -> Summary {
        let col = |f: &dyn Fn(&TrialRecord) -> Option<f64>| Stats::of(&trials.iter().filter_map(f).collect::<Vec<_>>());
        let failures = trials
            .iter()
            .flat_map(|t| {
                t.assertions.iter().filter(|(_, ok)| !**ok).map(move |(name, _)| Failure {
                    trial: t.trial,
                    seed: t.seed,
                    assertion: name.clone(),
                })
            })
            .collect();
        Summary {
            scheduled: col(&|t| Some(t.scheduled as f64)),
            ratio: col(&|t| t.ratio),
            tau: col(&|t| Some(t.tau as f64)),
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub summary: Summary,
}

impl RunReport {
    /// First failed assertion as an error carrying the replay seed.
    pub fn first_failure(&self) -> Option<Error> {
        self.summary.failures.first().map(|f| Error::Assertion { what: f.assertion.clone(), trial: f.trial, seed: f.seed })
    }
}

/// All trials in parallel; records come back in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let fixed = match cfg.scenario {
        Scenario::CustomFile => Some(generate(cfg, Seed(cfg.seed))?),
        _ => None,
    };
    let trials: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, trial_seed(cfg.seed, t), fixed.as_ref()))
        .collect::<Result<_>>()?;
    let summary = Summary::of(&trials);
    Ok(RunReport { config: cfg.clone(), trials, summary })
}

pub fn report_json(report: &RunReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn report_csv(report: &RunReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["trial", "seed", "n", "scheduled", "cost", "opt", "ratio", "tau", "phases", "stragglers", "assertions"])
        .map_err(io)?;
    for t in &report.trials {
        let opt_s = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let asserts: Vec<String> = t.assertions.iter().map(|(k, v)| format!("{k}={}", if *v { "ok" } else { "FAIL" })).collect();
        w.write_record([
            t.trial.to_string(),
            t.seed.to_string(),
            t.n.to_string(),
            t.scheduled.to_string(),
            t.cost.to_string(),
            opt_s(t.opt),
            opt_s(t.ratio),
            t.tau.to_string(),
            t.phases.to_string(),
            t.stragglers.to_string(),
            asserts.join(";"),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
}

#[derive(Serialize)]
struct Meta {
    wall_time_ms: u128,
    threads: usize,
}

/// Writes `out` (JSON), the CSV mirror next to it, and a `.meta.json`
/// sidecar holding the timing that is kept out of the report itself.
pub fn write_report(report: &RunReport, out: &Path, wall_ms: u128) -> Result<()> {
    std::fs::write(out, report_json(report)?)?;
    std::fs::write(out.with_extension("csv"), report_csv(report)?)?;
    let meta = Meta { wall_time_ms: wall_ms, threads: rayon::current_num_threads() };
    std::fs::write(out.with_extension("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}
