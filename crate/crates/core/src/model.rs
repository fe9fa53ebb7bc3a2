//! Machine models shared by the oracles, the engines and the reductions.
//!
//! A machine has some number of ways, turns a set of placed jobs into a load,
//! can be packed optimally offline and can spawn an online packer. Plain
//! machines are backed by a [`NormSpec`]; clusters of machines used by the
//! nested composition implement the same trait.

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::Result;
use crate::instance::Instance;
use crate::norm::{AggregateSpec, NormSpec};
use crate::oracle::{opt_norm_pack, OracleLimit};
use crate::rng::Seed;
use crate::single_machine::{default_solver, solver_guarantee};

/// A job offered to a machine: its loads on that machine's ways.
#[derive(Clone, Debug, PartialEq)]
pub struct Item {
    pub job: usize,
    pub loads: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Placed {
    pub job: usize,
    pub way: usize,
    pub load: f64,
}

/// Online packing agent. `offer` returns the chosen way, if any, and is final.
pub trait OnlinePacker: Send {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>>;
    /// Declared factor by which the realized cost may exceed the budget.
    fn violation(&self) -> f64;
    fn accepted(&self) -> usize;
}

pub trait MachineModel: Send + Sync + Debug {
    fn ways(&self) -> usize;
    fn load(&self, placed: &[Placed]) -> Result<f64>;
    fn opt_pack(&self, items: &[Item], budget: f64, limit: OracleLimit) -> Result<usize>;
    fn solver(&self, budget: f64, guess: f64, seed: Seed) -> Result<Box<dyn OnlinePacker>>;
    fn flat_norm(&self) -> Option<&NormSpec> {
        None
    }
    /// Violation factor of the packers returned by `solver`.
    fn violation_hint(&self) -> f64;
}

/// A single machine with `r` ways; job `j` on way `k` uses coordinate `j*r + k`.
#[derive(Clone, Debug)]
pub struct FlatMachine {
    pub norm: NormSpec,
    pub r: usize,
}

impl MachineModel for FlatMachine {
    fn ways(&self) -> usize {
        self.r
    }

    fn load(&self, placed: &[Placed]) -> Result<f64> {
        let e: Vec<(usize, f64)> = placed.iter().map(|p| (p.job * self.r + p.way, p.load)).collect();
        self.norm.eval_sparse(&e)
    }

    fn opt_pack(&self, items: &[Item], budget: f64, limit: OracleLimit) -> Result<usize> {
        Ok(opt_norm_pack(&self.norm, self.r, items, budget, limit)?.count)
    }

    fn solver(&self, budget: f64, guess: f64, _seed: Seed) -> Result<Box<dyn OnlinePacker>> {
        default_solver(&self.norm, self.r, budget, guess)
    }

    fn flat_norm(&self) -> Option<&NormSpec> {
        Some(&self.norm)
    }

    fn violation_hint(&self) -> f64 {
        solver_guarantee(&self.norm).map_or(1.0, |g| g.1)
    }
}

/// Machines plus an outer aggregate and budget. Jobs are flat load vectors laid
/// out machine after machine.
#[derive(Clone, Debug)]
pub struct PackProblem {
    pub machines: Vec<Arc<dyn MachineModel>>,
    pub aggregate: AggregateSpec,
    pub budget: f64,
}

impl PackProblem {
    pub fn from_instance(inst: &Instance) -> Self {
        PackProblem {
            machines: inst
                .inner_norms
                .iter()
                .map(|n| Arc::new(FlatMachine { norm: n.clone(), r: inst.r }) as Arc<dyn MachineModel>)
                .collect(),
            aggregate: inst.aggregate.clone(),
            budget: inst.budget,
        }
    }

    pub fn m(&self) -> usize {
        self.machines.len()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.m() + 1);
        let mut acc = 0;
        for mm in &self.machines {
            off.push(acc);
            acc += mm.ways();
        }
        off.push(acc);
        off
    }

    pub fn total_ways(&self) -> usize {
        self.machines.iter().map(|m| m.ways()).sum()
    }

    /// All machines are plain max-norm machines.
    pub fn all_linf(&self) -> bool {
        self.machines.iter().all(|m| matches!(m.flat_norm(), Some(NormSpec::LInf)))
    }
}
