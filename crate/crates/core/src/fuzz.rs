//! Seeded end-to-end trials: random admissible targets, random model
//! assignment, solve, verify.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Assignment, DEFAULT_BOUND};
use crate::diamond::ResidueTargets;
use crate::planner::solve_full;
use crate::verify::verify;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub assignment_seed: u64,
    pub targets: String,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub n: usize,
    pub m: u64,
    pub seed: u64,
    pub passed: usize,
    pub trials: Vec<TrialOutcome>,
}

impl FuzzSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials.len()
    }
}

/// Generator for trial `index`; independent of how trials are scheduled.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn run_trial(n: usize, m: u64, seed: u64, index: usize) -> TrialOutcome {
    let mut rng = trial_rng(seed, index);
    let targets = ResidueTargets::random_full(n, m, &mut rng);
    let assignment_seed: u64 = rng.gen();
    let sigma = Assignment::random(assignment_seed, DEFAULT_BOUND);
    let result = solve_full(&targets, &sigma)
        .map_err(|e| e.to_string())
        .and_then(|plan| verify(&plan, &targets, &sigma).map_err(|e| e.to_string()));
    let (pass, error) = match result {
        Ok(report) => (report.pass, None),
        Err(e) => (false, Some(e)),
    };
    TrialOutcome { index, assignment_seed, targets: targets.to_value().to_string(), pass, error }
}

/// Runs `trials` trials in parallel; outcomes are ordered by index.
pub fn fuzz(n: usize, m: u64, trials: usize, seed: u64) -> FuzzSummary {
    let trials: Vec<TrialOutcome> = (0..trials).into_par_iter().map(|i| run_trial(n, m, seed, i)).collect();
    let passed = trials.iter().filter(|t| t.pass).count();
    FuzzSummary { n, m, seed, passed, trials }
}
