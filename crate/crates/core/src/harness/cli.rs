//! Command line front end of the `ogs` binary.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use super::experiment::{
    generate, report_json, run_experiment, run_trial, trial_seed, write_report, AssertLevel, ExperimentConfig, RunReport,
    Scenario, Summary,
};
use super::props::property_suite;
use crate::error::Error;
use crate::oracle::OracleLimit;
use crate::rng::Seed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ogs", version, about = "Online generalized scheduling experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct ScenarioArgs {
    #[arg(long, value_enum, default_value = "set-cover")]
    scenario: Scenario,
    /// Jobs (or elements).
    #[arg(long)]
    n: Option<usize>,
    /// Machines (or sets).
    #[arg(long)]
    m: Option<usize>,
    /// Ways per machine.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    /// Set-cover membership probability.
    #[arg(long)]
    density: Option<f64>,
    /// Instance file for the custom-file scenario.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, env = "OGS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = OracleLimit::default().0)]
    oracle_limit: u64,
    #[arg(long, value_enum, default_value = "full")]
    assert_level: AssertLevel,
}

impl ScenarioArgs {
    fn config(&self, trials: usize) -> ExperimentConfig {
        let mut c = ExperimentConfig::desk(self.scenario);
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.m {
            c.m = v;
        }
        if let Some(v) = self.r {
            c.r = v;
        }
        if let Some(v) = self.blocks {
            c.blocks = v;
        }
        if let Some(v) = self.density {
            c.density = v;
        }
        c.input = self.input.clone();
        c.seed = self.seed;
        c.oracle_limit = self.oracle_limit;
        c.assert_level = self.assert_level;
        c.trials = trials;
        c
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write one generated instance as JSON.
    Gen {
        #[command(flatten)]
        s: ScenarioArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded trials and write JSON and CSV reports.
    Run {
        #[command(flatten)]
        s: ScenarioArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Re-run a single trial from the seed printed by a failed run.
    Replay {
        #[command(flatten)]
        s: ScenarioArgs,
    },
    /// Randomized norm and aggregate property checks.
    Check {
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        #[arg(long, env = "OGS_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the summary of an existing report.
    Report {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleLimit { .. } => EXIT_ORACLE,
        Error::Assertion { .. } | Error::Invariant(_) | Error::CascadeExhausted(_) => EXIT_ASSERTION,
        _ => EXIT_USAGE,
    }
}

fn execute(cmd: Cmd) -> Result<i32, Error> {
    match cmd {
        Cmd::Gen { s, out } => {
            let cfg = s.config(1);
            cfg.validate()?;
            let p = generate(&cfg, trial_seed(cfg.seed, 0))?;
            let text = serde_json::to_string_pretty(&p)? + "\n";
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Cmd::Run { s, trials, out } => {
            let cfg = s.config(trials);
            let t0 = Instant::now();
            let report = run_experiment(&cfg)?;
            write_report(&report, &out, t0.elapsed().as_millis())?;
            let sm = &report.summary;
            println!(
                "{} trials: scheduled mean {:.3}, cost/opt mean {:.4} (max {:.4}), tau mean {:.3}, {} failed assertions",
                report.trials.len(),
                sm.scheduled.mean,
                sm.ratio.mean,
                sm.ratio.max,
                sm.tau.mean,
                sm.failures.len()
            );
            println!("report written to {}", out.display());
            if let Some(e) = report.first_failure() {
                eprintln!("{e}");
                eprintln!("ogs replay --scenario {:?} --seed {} ...", cfg.scenario, report.summary.failures[0].seed);
                return Ok(EXIT_ASSERTION);
            }
            Ok(EXIT_OK)
        }
        Cmd::Replay { s } => {
            let cfg = s.config(1);
            cfg.validate()?;
            let rec = run_trial(&cfg, 0, Seed(cfg.seed), None)?;
            println!("{}", serde_json::to_string_pretty(&rec)?);
            Ok(if rec.assertions.values().all(|ok| *ok) { EXIT_OK } else { EXIT_ASSERTION })
        }
        Cmd::Check { cases, seed } => {
            let rep = property_suite(cases, Seed(seed))?;
            for (name, v) in &rep.violations {
                println!("{name}: {v} violations");
            }
            for ex in &rep.examples {
                println!("  {ex}");
            }
            Ok(if rep.total_violations() == 0 { EXIT_OK } else { EXIT_ASSERTION })
        }
        Cmd::Report { path, out } => {
            let mut report: RunReport = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
            report.summary = Summary::of(&report.trials);
            let text = report_json(&report)?;
            match out {
                Some(p) => std::fs::write(p, &text)?,
                None => println!("{}", serde_json::to_string_pretty(&report.summary)?),
            }
            Ok(if report.summary.failures.is_empty() { EXIT_OK } else { EXIT_ASSERTION })
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
