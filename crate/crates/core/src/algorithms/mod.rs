//! Optimizers: WSA-IC and the WSA, FERPSO and LIPS baselines.

mod archive;
mod ferpso;
mod lips;
mod moments;
mod wsa;
mod wsa_ic;

use serde::{Deserialize, Serialize};

pub use archive::{Archive, JudgeOutcome};
pub use ferpso::{ferpso_neighbor, Ferpso, FerpsoParams};
pub use lips::{lips_nsize, Lips, LipsParams};
pub use moments::{sample_moments, MomentEstimates};
pub use wsa::{Wsa, WsaParams};
pub use wsa_ic::{check_counter, wsa_move, CounterOutcome, IterationReport, WsaIc, WsaIcParams, WsaIcState};

use crate::error::{Error, Result};
use crate::functions::Problem;
use crate::rng::RngStream;
use crate::space::Position;

/// Settings shared by every optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub population: usize,
    /// Maximum number of objective evaluations.
    pub budget: u64,
    /// Evaluations between trace samples. Zero picks `budget / 1000`.
    pub trace_stride: u64,
}

impl RunSettings {
    pub fn new(population: usize, budget: u64) -> Self {
        RunSettings {
            population,
            budget,
            trace_stride: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("population must be at least 2"));
        }
        if self.budget < self.population as u64 {
            return Err(Error::config(format!(
                "budget {} cannot cover the initial population of {}",
                self.budget, self.population
            )));
        }
        Ok(())
    }

    pub fn effective_stride(&self) -> u64 {
        if self.trace_stride > 0 {
            self.trace_stride
        } else {
            (self.budget / 1000).max(1)
        }
    }
}

/// One sample of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluations: u64,
    pub best_fitness: f64,
}

/// Where the evaluations of a run went.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationBreakdown {
    pub initial: u64,
    pub moves: u64,
    pub reinitializations: u64,
}

impl EvaluationBreakdown {
    pub fn total(&self) -> u64 {
        self.initial + self.moves + self.reinitializations
    }
}

/// Raw result of a single run, before it is scored against the known optima.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub algorithm: &'static str,
    pub seed: u64,
    /// Reported solutions: the archive for WSA-IC, the final swarm or personal
    /// bests for the baselines.
    pub solutions: Vec<(Position, f64)>,
    pub best_fitness: f64,
    pub evaluations_used: u64,
    pub breakdown: EvaluationBreakdown,
    pub trace: Vec<TracePoint>,
}

/// Budget-limited objective with best-so-far tracking.
#[derive(Debug)]
pub struct Evaluator<'a> {
    problem: &'a Problem,
    budget: u64,
    used: u64,
    best: f64,
    stride: u64,
    next_sample: u64,
    trace: Vec<TracePoint>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a Problem, settings: &RunSettings) -> Self {
        let stride = settings.effective_stride();
        Evaluator {
            problem,
            budget: settings.budget,
            used: 0,
            best: f64::INFINITY,
            stride,
            next_sample: stride,
            trace: Vec::new(),
        }
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    pub fn best(&self) -> f64 {
        self.best
    }

    /// Evaluates `x`, or returns `None` once the budget is spent.
    #[inline]
    pub fn evaluate(&mut self, x: &[f64]) -> Option<f64> {
        if self.used >= self.budget {
            return None;
        }
        let f = self.problem.value(x);
        self.used += 1;
        if f < self.best {
            self.best = f;
        }
        if self.used >= self.next_sample {
            self.trace.push(TracePoint {
                evaluations: self.used,
                best_fitness: self.best,
            });
            self.next_sample += self.stride;
        }
        Some(f)
    }

    pub(crate) fn into_trace(mut self) -> Vec<TracePoint> {
        if self.trace.last().map(|t| t.evaluations) != Some(self.used) && self.used > 0 {
            self.trace.push(TracePoint {
                evaluations: self.used,
                best_fitness: self.best,
            });
        }
        self.trace
    }
}

pub(crate) fn random_position(problem: &Problem, rng: &mut RngStream) -> Position {
    let b = problem.bounds();
    Position::new(
        b.lower()
            .iter()
            .zip(b.upper())
            .map(|(lo, hi)| rng.uniform(*lo, *hi))
            .collect(),
    )
}

/// A black-box optimizer running against a budget.
pub trait Optimizer {
    fn name(&self) -> &'static str;

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome>;
}

/// The algorithms the harness knows about, with their parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Algorithm {
    WsaIc(WsaIcParams),
    Wsa(WsaParams),
    Ferpso(FerpsoParams),
    Lips(LipsParams),
}

impl Algorithm {
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::WsaIc(_) => "wsa-ic",
            Algorithm::Wsa(_) => "wsa",
            Algorithm::Ferpso(_) => "ferpso",
            Algorithm::Lips(_) => "lips",
        }
    }
}

impl Optimizer for Algorithm {
    fn name(&self) -> &'static str {
        self.id()
    }

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
        match self {
            Algorithm::WsaIc(p) => WsaIc(p.clone()).run(problem, settings, seed),
            Algorithm::Wsa(p) => Wsa(p.clone()).run(problem, settings, seed),
            Algorithm::Ferpso(p) => Ferpso(p.clone()).run(problem, settings, seed),
            Algorithm::Lips(p) => Lips(p.clone()).run(problem, settings, seed),
        }
    }
}

/// Runs `optimizer` on `problem` with a fresh stream seeded by `seed`.
pub fn run(
    optimizer: &dyn Optimizer,
    problem: &Problem,
    settings: &RunSettings,
    seed: u64,
) -> Result<RunOutcome> {
    optimizer.run(problem, settings, seed)
}
