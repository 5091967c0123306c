//! Checking a network against a function: exact comparison on a grid,
//! random execution orders, and a monotonicity scan of the network's values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::network::exec::bulk_eval_from;
use crate::network::{run, Network, RunOptions, Schedule};
use crate::zilep::ZilepFunction;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Inclusive upper bounds per coordinate; `None` uses `[0, 2(r_i + λ_i)]`.
    pub bounds: Option<Vec<u64>>,
    pub schedules: usize,
    pub seed: u64,
    /// Step budget per execution is this times `(1 + letters) · nodes`.
    pub budget_multiplier: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            bounds: None,
            schedules: 100,
            seed: DEFAULT_SEED,
            budget_multiplier: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Grid,
    Schedule,
    Monotonicity,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub input: Vec<u64>,
    pub expected: Vec<u64>,
    pub got: Vec<u64>,
    /// Seed of the random schedule, for schedule failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub bounds: Vec<u64>,
    pub grid_points: usize,
    pub schedules: usize,
    pub seed: u64,
    pub failure: Option<Failure>,
}

fn budget(net: &Network, x: &[u64], multiplier: u64) -> u64 {
    let letters: u64 = x.iter().sum();
    multiplier
        .saturating_mul(1 + letters)
        .saturating_mul(net.nodes().len().max(1) as u64)
}

/// Evaluates the network at `x` with bulk firing.
fn value(net: &Network, x: &[u64], multiplier: u64) -> Result<Vec<u64>> {
    Ok(bulk_eval_from(net, net.initial_states(), x, Some(budget(net, x, multiplier)))?.output)
}

pub fn verify(f: &ZilepFunction, net: &Network, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if net.inputs().len() != f.arity() || net.outputs().len() != f.output_count() {
        return Err(Error::Network(format!(
            "network has {} inputs and {} outputs, function has {} and {}",
            net.inputs().len(),
            net.outputs().len(),
            f.arity(),
            f.output_count()
        )));
    }
    if cfg.schedules == 0 {
        return Err(Error::Function("schedule fuzz count must be at least 1".into()));
    }
    let bounds = cfg.bounds.clone().unwrap_or_else(|| f.verification_bounds());
    if bounds.len() != f.arity() {
        return Err(Error::Function(format!(
            "{} grid bounds given for a function of {} variables",
            bounds.len(),
            f.arity()
        )));
    }
    let points: Vec<Vec<u64>> = grid::inclusive(&bounds).collect();
    let mut report = VerifyReport {
        passed: false,
        bounds: bounds.clone(),
        grid_points: points.len(),
        schedules: cfg.schedules,
        seed: cfg.seed,
        failure: None,
    };

    // grid comparison; points are in lexicographic order so the first failure is the least
    let values: Vec<std::result::Result<Vec<u64>, Failure>> = points
        .par_iter()
        .map(|x| {
            let want = f.eval(x);
            match value(net, x, cfg.budget_multiplier) {
                Ok(got) if got == want => Ok(got),
                Ok(got) => Err(Failure {
                    kind: FailureKind::Grid,
                    input: x.clone(),
                    expected: want,
                    got,
                    schedule_seed: None,
                }),
                Err(Error::BudgetExceeded { .. }) => Err(Failure {
                    kind: FailureKind::Budget,
                    input: x.clone(),
                    expected: want,
                    got: Vec::new(),
                    schedule_seed: None,
                }),
                Err(e) => panic!("evaluation failed unexpectedly: {e}"),
            }
        })
        .collect();
    if let Some(fail) = values.iter().find_map(|v| v.as_ref().err()) {
        report.failure = Some(fail.clone());
        return Ok(report);
    }
    let values: Vec<Vec<u64>> = values.into_iter().map(|v| v.expect("checked")).collect();

    // monotonicity of the network's own values along each axis
    let dims: Vec<u64> = bounds.iter().map(|b| b + 1).collect();
    let g = Grid::new(&dims);
    for (idx, x) in points.iter().enumerate() {
        for c in 0..x.len() {
            if x[c] < bounds[c] {
                let up = &values[idx + g.stride(c)];
                if up.iter().zip(&values[idx]).any(|(a, b)| a < b) {
                    let mut y = x.clone();
                    y[c] += 1;
                    report.failure = Some(Failure {
                        kind: FailureKind::Monotonicity,
                        input: y,
                        expected: values[idx].clone(),
                        got: up.clone(),
                        schedule_seed: None,
                    });
                    return Ok(report);
                }
            }
        }
    }

    // random execution orders at random grid points
    let mut picker = ChaCha8Rng::seed_from_u64(cfg.seed);
    let jobs: Vec<(u64, usize)> = (0..cfg.schedules)
        .map(|_| (picker.gen(), picker.gen_range(0..points.len())))
        .collect();
    let fuzz: Vec<Option<Failure>> = jobs
        .par_iter()
        .map(|&(seed, at)| {
            let x = &points[at];
            let opts = RunOptions {
                schedule: Schedule::SeededRandom(seed),
                budget: Some(budget(net, x, cfg.budget_multiplier)),
                trace: false,
            };
            match run(net, x, &opts) {
                Ok(out) if out.output == values[at] => None,
                Ok(out) => Some(Failure {
                    kind: FailureKind::Schedule,
                    input: x.clone(),
                    expected: values[at].clone(),
                    got: out.output,
                    schedule_seed: Some(seed),
                }),
                Err(_) => Some(Failure {
                    kind: FailureKind::Budget,
                    input: x.clone(),
                    expected: values[at].clone(),
                    got: Vec::new(),
                    schedule_seed: Some(seed),
                }),
            }
        })
        .collect();
    report.failure = fuzz.into_iter().flatten().next();
    report.passed = report.failure.is_none();
    Ok(report)
}
