//! Online packers for a single machine.
//!
//! Each packer is told a load budget `B` and a guess `M` of how many jobs an
//! offline packing could take, and accepts a job on at most one way.

use crate::error::{Error, Result};
use crate::model::OnlinePacker;
use crate::norm::{fits, NormSpec};

fn check_guess(guess: f64, budget: f64) -> Result<()> {
    if !(guess > 0.0) || guess.is_nan() {
        return Err(Error::InvalidArgument(format!("guess must be positive, got {guess}")));
    }
    if !(budget >= 0.0) {
        return Err(Error::InvalidArgument(format!("budget must be nonnegative, got {budget}")));
    }
    Ok(())
}

/// Max norm: any way with load within budget is safe.
#[derive(Debug)]
pub struct LinfSolver {
    budget: f64,
    accepted: usize,
}

impl LinfSolver {
    pub fn new(budget: f64) -> Self {
        LinfSolver { budget, accepted: 0 }
    }
}

impl OnlinePacker for LinfSolver {
    fn offer(&mut self, _job: usize, loads: &[f64]) -> Result<Option<usize>> {
        let k = loads.iter().position(|&l| fits(l, self.budget));
        if k.is_some() {
            self.accepted += 1;
        }
        Ok(k)
    }

    fn violation(&self) -> f64 {
        1.0
    }

    fn accepted(&self) -> usize {
        self.accepted
    }
}

/// Symmetric norms: accept jobs that have a way no larger than
/// `p* = B / ||1_h||` with `h = floor(ceil(M)/2)`, as long as the running norm
/// stays within budget. Tiny guesses fall back to taking one feasible job.
#[derive(Debug)]
pub struct SymmetricSolver {
    norm: NormSpec,
    r: usize,
    budget: f64,
    one_job: bool,
    p_star: f64,
    entries: Vec<(usize, f64)>,
}

impl SymmetricSolver {
    pub fn new(norm: NormSpec, r: usize, budget: f64, guess: f64) -> Result<Self> {
        check_guess(guess, budget)?;
        if !norm.is_symmetric() {
            return Err(Error::NoSolver(norm.kind().into()));
        }
        let mc = guess.ceil() as usize;
        let one_job = mc <= 2;
        let p_star = if one_job { f64::NAN } else { budget / norm.ones_norm(mc / 2) };
        Ok(SymmetricSolver { norm, r, budget, one_job, p_star, entries: Vec::new() })
    }

    pub fn threshold(&self) -> Option<f64> {
        (!self.one_job).then_some(self.p_star)
    }

    fn fits_with(&mut self, coord: usize, load: f64) -> Result<bool> {
        self.entries.push((coord, load));
        let ok = fits(self.norm.eval_sparse(&self.entries)?, self.budget);
        self.entries.pop();
        Ok(ok)
    }
}

impl OnlinePacker for SymmetricSolver {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        if self.one_job && !self.entries.is_empty() {
            return Ok(None);
        }
        for (k, &l) in loads.iter().enumerate() {
            if !l.is_finite() || (!self.one_job && !fits(l, self.p_star)) {
                continue;
            }
            if self.fits_with(job * self.r + k, l)? {
                self.entries.push((job * self.r + k, l));
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn violation(&self) -> f64 {
        1.0
    }

    fn accepted(&self) -> usize {
        self.entries.len()
    }
}

/// `c * max + sum w x` norms, with per-coordinate weights revealed at offer
/// time. Accepts a way with `c p <= B` and `w p <= 2B/M` while the assignment
/// part stays within `B`, so the total is at most `2B`.
#[derive(Debug)]
pub struct ActivationSolver {
    activation: f64,
    weights: Vec<f64>,
    r: usize,
    budget: f64,
    one_job: bool,
    per_job: f64,
    assign_sum: f64,
    accepted: usize,
}

impl ActivationSolver {
    pub fn new(activation: f64, weights: Vec<f64>, r: usize, budget: f64, guess: f64) -> Result<Self> {
        check_guess(guess, budget)?;
        let one_job = guess.ceil() <= 2.0;
        Ok(ActivationSolver {
            activation,
            weights,
            r,
            budget,
            one_job,
            per_job: 2.0 * budget / guess,
            assign_sum: 0.0,
            accepted: 0,
        })
    }
}

impl OnlinePacker for ActivationSolver {
    fn offer(&mut self, job: usize, loads: &[f64]) -> Result<Option<usize>> {
        if self.one_job && self.accepted > 0 {
            return Ok(None);
        }
        for (k, &l) in loads.iter().enumerate() {
            if !l.is_finite() {
                continue;
            }
            let c = job * self.r + k;
            let w = *self.weights.get(c).ok_or(Error::DimensionMismatch { expected: self.weights.len(), got: c + 1 })?;
            let wl = crate::norm::mul0(w, l);
            if !fits(crate::norm::mul0(self.activation, l), self.budget) {
                continue;
            }
            let ok = if self.one_job {
                fits(wl, self.budget)
            } else {
                fits(wl, self.per_job) && fits(self.assign_sum + wl, self.budget)
            };
            if ok {
                self.assign_sum += wl;
                self.accepted += 1;
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    fn violation(&self) -> f64 {
        2.0
    }

    fn accepted(&self) -> usize {
        self.accepted
    }
}

/// Declared `(alpha, c)` of the solver picked for `norm`.
pub fn solver_guarantee(norm: &NormSpec) -> Option<(f64, f64)> {
    match norm {
        NormSpec::LInf => Some((1.0, 1.0)),
        n if n.is_symmetric() => Some((1.0 / 3.0, 1.0)),
        NormSpec::WeightedL1 { .. } | NormSpec::ActivationAssignment { .. } => Some((1.0 / 3.0, 2.0)),
        _ => None,
    }
}

pub fn default_solver(norm: &NormSpec, r: usize, budget: f64, guess: f64) -> Result<Box<dyn OnlinePacker>> {
    Ok(match norm {
        NormSpec::LInf => {
            check_guess(guess, budget)?;
            Box::new(LinfSolver::new(budget))
        }
        n if n.is_symmetric() => Box::new(SymmetricSolver::new(n.clone(), r, budget, guess)?),
        NormSpec::WeightedL1 { weights } => Box::new(ActivationSolver::new(0.0, weights.clone(), r, budget, guess)?),
        NormSpec::ActivationAssignment { activation, weights } => {
            Box::new(ActivationSolver::new(*activation, weights.clone(), r, budget, guess)?)
        }
        other => return Err(Error::NoSolver(other.kind().into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linf_lowest_feasible_way() {
        let mut s = LinfSolver::new(5.0);
        assert_eq!(s.offer(0, &[3.0, 7.0]).unwrap(), Some(0));
        assert_eq!(s.offer(1, &[6.0, 5.0]).unwrap(), Some(1));
        assert_eq!(s.offer(2, &[6.0, 9.0]).unwrap(), None);
    }

    #[test]
    fn top2_three_equal_loads() {
        // p* = 6 / ||(1,1)||_top2 = 3, and Top-2 of (3,3,3) is still 6.
        let mut s = SymmetricSolver::new(NormSpec::TopK { k: 2 }, 1, 6.0, 4.0).unwrap();
        assert_eq!(s.threshold(), Some(3.0));
        let got: Vec<_> = (0..3).map(|j| s.offer(j, &[3.0]).unwrap()).collect();
        assert_eq!(got, vec![Some(0), Some(0), Some(0)]);
        assert!(s.offer(3, &[3.5]).unwrap().is_none());
    }

    #[test]
    fn small_guess_takes_one_job() {
        let mut s = SymmetricSolver::new(NormSpec::Lp { p: 2.0 }, 1, 4.0, 1.5).unwrap();
        assert!(s.offer(0, &[5.0]).unwrap().is_none());
        assert_eq!(s.offer(1, &[4.0]).unwrap(), Some(0));
        assert!(s.offer(2, &[0.1]).unwrap().is_none());
    }

    #[test]
    fn nonpositive_guess_rejected() {
        assert!(SymmetricSolver::new(NormSpec::LInf, 1, 1.0, 0.0).is_err());
        assert!(default_solver(&NormSpec::LInf, 1, 1.0, -1.0).is_err());
    }

    #[test]
    fn activation_rule() {
        // B = 4, M = 4: c p <= 4 and w p <= 2
        let w = vec![1.0, 3.0, 0.5, 2.0];
        let mut s = ActivationSolver::new(2.0, w, 1, 4.0, 4.0).unwrap();
        assert_eq!(s.offer(0, &[2.0]).unwrap(), Some(0));
        assert_eq!(s.offer(1, &[1.0]).unwrap(), None);
        assert_eq!(s.offer(2, &[3.0]).unwrap(), None);
        assert_eq!(s.offer(3, &[1.0]).unwrap(), Some(0));
    }
}
