//! Instances, assignments and the irrevocable online stream.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::norm::{AggregateSpec, NormSpec};

mod loads_serde {
    use super::*;
    use serde::de::Error as _;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        F(f64),
        S(String),
    }

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            if x.is_infinite() {
                seq.serialize_element("inf")?;
            } else {
                seq.serialize_element(x)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
        let raw: Vec<Num> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|n| match n {
                Num::F(f) => Ok(f),
                Num::S(s) => match s.to_ascii_lowercase().as_str() {
                    "inf" | "infinity" => Ok(f64::INFINITY),
                    _ => Err(D::Error::custom(format!("bad load {s:?}"))),
                },
            })
            .collect()
    }
}

/// One job: its loads on every (machine, way), row-major `m x r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Job {
    #[serde(with = "loads_serde")]
    pub loads: Vec<f64>,
}

impl Job {
    pub fn new(loads: Vec<f64>) -> Self {
        Job { loads }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub m: usize,
    pub r: usize,
    pub inner_norms: Vec<NormSpec>,
    pub aggregate: AggregateSpec,
    /// Outer budget for the packing variants; unused when minimizing cost.
    #[serde(default)]
    pub budget: f64,
    pub jobs: Vec<Job>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.r == 0 {
            return invalid("m and r must be positive");
        }
        if self.inner_norms.len() != self.m {
            return invalid(format!("expected {} inner norms, got {}", self.m, self.inner_norms.len()));
        }
        for nrm in &self.inner_norms {
            nrm.validate()?;
            if let Some(d) = nrm.dim() {
                if d < self.n() * self.r {
                    return invalid("inner norm dimension smaller than n*r");
                }
            }
        }
        self.aggregate.validate()?;
        if let Some(d) = self.aggregate.dim() {
            if d != self.m {
                return invalid(format!("aggregate dimension {d} != m = {}", self.m));
            }
        }
        if !(self.budget >= 0.0 && self.budget.is_finite()) {
            return invalid("budget must be finite and nonnegative");
        }
        for (j, job) in self.jobs.iter().enumerate() {
            if job.loads.len() != self.m * self.r {
                return invalid(format!("job {j} has {} loads, expected {}", job.loads.len(), self.m * self.r));
            }
            if job.loads.iter().any(|l| l.is_nan() || *l < 0.0) {
                return invalid(format!("job {j} has a negative or NaN load"));
            }
        }
        Ok(())
    }

    pub fn load(&self, j: usize, i: usize, k: usize) -> f64 {
        self.jobs[j].loads[i * self.r + k]
    }

    pub fn row(&self, j: usize, i: usize) -> &[f64] {
        &self.jobs[j].loads[i * self.r..(i + 1) * self.r]
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s)?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Budgeted variant: each machine has its own load budget and must be activated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetedInstance {
    #[serde(flatten)]
    pub instance: Instance,
    pub machine_budgets: Vec<f64>,
}

impl BudgetedInstance {
    pub fn validate(&self) -> Result<()> {
        self.instance.validate()?;
        if self.machine_budgets.len() != self.instance.m {
            return invalid("one machine budget per machine");
        }
        if self.machine_budgets.iter().any(|b| !(*b >= 0.0) || b.is_nan()) {
            return invalid("machine budgets must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// `(machine, way)` per job, `None` if unassigned.
    pub placements: Vec<Option<(usize, usize)>>,
    /// Activation flags; only meaningful for budgeted runs.
    pub active: Vec<bool>,
}

impl Assignment {
    pub fn empty(n: usize, m: usize) -> Self {
        Assignment { placements: vec![None; n], active: vec![false; m] }
    }

    pub fn scheduled(&self) -> usize {
        self.placements.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.placements.iter().all(|p| p.is_some())
    }
}

pub fn machine_load(inst: &Instance, a: &Assignment, i: usize) -> Result<f64> {
    let entries: Vec<(usize, f64)> = a
        .placements
        .iter()
        .enumerate()
        .filter_map(|(j, p)| match p {
            Some((mi, k)) if *mi == i => Some((j * inst.r + k, inst.load(j, i, *k))),
            _ => None,
        })
        .collect();
    inst.inner_norms[i].eval_sparse(&entries)
}

pub fn machine_loads(inst: &Instance, a: &Assignment) -> Result<Vec<f64>> {
    (0..inst.m).map(|i| machine_load(inst, a, i)).collect()
}

pub fn assignment_cost(inst: &Instance, a: &Assignment) -> Result<f64> {
    inst.aggregate.eval(&machine_loads(inst, a)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetCoverInstance {
    pub costs: Vec<f64>,
    /// For each element (in arrival order) the sets containing it.
    pub elements: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn m(&self) -> usize {
        self.costs.len()
    }

    pub fn n(&self) -> usize {
        self.elements.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.costs.is_empty() {
            return invalid("need at least one set");
        }
        if self.costs.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return invalid("set costs must be finite and positive");
        }
        for (j, e) in self.elements.iter().enumerate() {
            if e.iter().any(|&s| s >= self.m()) {
                return invalid(format!("element {j} references a missing set"));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sc: SetCoverInstance = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }

    /// Members of each set.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m()];
        for (j, e) in self.elements.iter().enumerate() {
            for &s in e {
                out[s].push(j);
            }
        }
        out
    }
}

/// Set cover as scheduling: one machine per set, `p_ij = c_i` if `j` is in
/// set `i` and `inf` otherwise, max inner norms, unit-weight sum outside.
pub fn osc_to_gensched(sc: &SetCoverInstance) -> Instance {
    let m = sc.m();
    let jobs = sc
        .elements
        .iter()
        .map(|e| {
            let mut loads = vec![f64::INFINITY; m];
            for &s in e {
                loads[s] = sc.costs[s];
            }
            Job::new(loads)
        })
        .collect();
    Instance {
        m,
        r: 1,
        inner_norms: vec![NormSpec::LInf; m],
        aggregate: AggregateSpec::NormAgg { norm: NormSpec::WeightedL1 { weights: vec![1.0; m] } },
        budget: 0.0,
        jobs,
    }
}

/// Reveals jobs one at a time; each must be decided before the next arrives
/// and decisions cannot be revisited.
pub struct OnlineStream<'a> {
    inst: &'a Instance,
    next: usize,
    pending: Option<usize>,
    assignment: Assignment,
}

impl<'a> OnlineStream<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        OnlineStream { inst, next: 0, pending: None, assignment: Assignment::empty(inst.n(), inst.m) }
    }

    pub fn next_job(&mut self) -> Result<Option<(usize, &'a Job)>> {
        if let Some(j) = self.pending {
            return Err(Error::Irrevocable(format!("job {j} has not been decided")));
        }
        if self.next >= self.inst.n() {
            return Ok(None);
        }
        let j = self.next;
        self.next += 1;
        self.pending = Some(j);
        Ok(Some((j, &self.inst.jobs[j])))
    }

    pub fn place(&mut self, j: usize, at: Option<(usize, usize)>) -> Result<()> {
        if self.pending != Some(j) {
            return Err(Error::Irrevocable(if j < self.next {
                format!("job {j} was already decided")
            } else {
                format!("job {j} has not arrived")
            }));
        }
        if let Some((i, k)) = at {
            if i >= self.inst.m || k >= self.inst.r {
                return Err(Error::InvalidArgument(format!("placement ({i},{k}) out of range")));
            }
            if self.inst.load(j, i, k).is_infinite() {
                return Err(Error::InvalidArgument(format!("job {j} cannot run on ({i},{k})")));
            }
            self.assignment.active[i] = true;
        }
        self.assignment.placements[j] = at;
        self.pending = None;
        Ok(())
    }

    pub fn finish(self) -> Assignment {
        self.assignment
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Instance {
        Instance {
            m: 2,
            r: 1,
            inner_norms: vec![NormSpec::LInf, NormSpec::Lp { p: 1.0 }],
            aggregate: AggregateSpec::NormAgg { norm: NormSpec::LInf },
            budget: 3.0,
            jobs: vec![Job::new(vec![1.0, f64::INFINITY]), Job::new(vec![2.0, 2.0])],
        }
    }

    #[test]
    fn json_inf_roundtrip() {
        let inst = tiny();
        let s = serde_json::to_string(&inst).unwrap();
        assert!(s.contains("\"inf\""));
        let back = Instance::from_json(&s).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn cost_and_loads() {
        let inst = tiny();
        let a = Assignment { placements: vec![Some((0, 0)), Some((1, 0))], active: vec![true, true] };
        assert_eq!(machine_loads(&inst, &a).unwrap(), vec![1.0, 2.0]);
        assert_eq!(assignment_cost(&inst, &a).unwrap(), 2.0);
    }

    #[test]
    fn osc_encoding() {
        let sc = SetCoverInstance { costs: vec![3.0, 1.0], elements: vec![vec![0, 1], vec![0]] };
        let inst = osc_to_gensched(&sc);
        inst.validate().unwrap();
        assert_eq!(inst.jobs[1].loads, vec![3.0, f64::INFINITY]);
        let a = Assignment { placements: vec![Some((0, 0)), Some((0, 0))], active: vec![true, false] };
        assert_eq!(assignment_cost(&inst, &a).unwrap(), 3.0);
    }

    #[test]
    fn stream_is_irrevocable() {
        let inst = tiny();
        let mut s = OnlineStream::new(&inst);
        let (j, _) = s.next_job().unwrap().unwrap();
        assert!(s.next_job().is_err());
        s.place(j, Some((0, 0))).unwrap();
        assert!(matches!(s.place(j, None), Err(Error::Irrevocable(_))));
        let (j2, _) = s.next_job().unwrap().unwrap();
        assert!(s.place(j2, Some((0, 5))).is_err());
        s.place(j2, None).unwrap();
        assert!(s.next_job().unwrap().is_none());
        assert_eq!(s.finish().scheduled(), 1);
    }

    #[test]
    fn bad_row_length_rejected() {
        let mut inst = tiny();
        inst.jobs[0].loads.pop();
        assert!(inst.validate().is_err());
    }
}
