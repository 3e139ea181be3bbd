//! Whale swarm with iterative counters.
//!
//! Each whale sends a moved copy toward its better-and-nearest whale and keeps
//! it only if it is strictly better. A whale that has not improved for
//! `stability_threshold` iterations has located an extreme point: it is offered
//! to the archive and re-drawn uniformly in the search box.

use serde::{Deserialize, Serialize};

use super::archive::Archive;
use super::{random_position, EvaluationBreakdown, Evaluator, Optimizer, RunOutcome, RunSettings};
use crate::error::{Error, Result};
use crate::functions::Problem;
use crate::rng::RngStream;
use crate::space::{squared_distance, Bounds, Position};
use crate::whale::{better_nearest_unchecked, Whale};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WsaIcParams {
    /// Intensity of the guidance signal.
    pub rho0: f64,
    /// Attenuation of the guidance with distance.
    pub eta: f64,
    /// Iterations without improvement before a whale counts as settled.
    /// Defaults to `100 * n`.
    pub stability_threshold: Option<u32>,
    /// Fitness tolerance relative to the best archived optimum. Defaults to the
    /// problem's accuracy level.
    pub fitness_threshold: Option<f64>,
    /// Archive dedup radius. Defaults to `1e-4 * diagonal / sqrt(n)`.
    pub dedup_radius: Option<f64>,
}

impl Default for WsaIcParams {
    fn default() -> Self {
        WsaIcParams {
            rho0: 2.0,
            eta: 0.0,
            stability_threshold: None,
            fitness_threshold: None,
            dedup_radius: None,
        }
    }
}

impl WsaIcParams {
    pub fn stability_threshold_for(&self, problem: &Problem) -> u32 {
        self.stability_threshold
            .unwrap_or_else(|| 100 * problem.dim() as u32)
    }

    pub fn fitness_threshold_for(&self, problem: &Problem) -> f64 {
        self.fitness_threshold.unwrap_or(problem.epsilon_f())
    }

    pub fn dedup_radius_for(&self, problem: &Problem) -> f64 {
        self.dedup_radius.unwrap_or_else(|| {
            1e-4 * problem.bounds().diagonal() / (problem.dim() as f64).sqrt()
        })
    }

    fn validate(&self, problem: &Problem) -> Result<()> {
        if !(self.rho0 > 0.0 && self.rho0.is_finite()) {
            return Err(Error::config("rho0 must be positive"));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::config("eta must be non-negative"));
        }
        if self.stability_threshold_for(problem) == 0 {
            return Err(Error::config("stability threshold must be positive"));
        }
        if !(self.fitness_threshold_for(problem) > 0.0) {
            return Err(Error::config("fitness threshold must be positive"));
        }
        if !(self.dedup_radius_for(problem) >= 0.0) {
            return Err(Error::config("dedup radius must be non-negative"));
        }
        Ok(())
    }
}

/// Moves `x` toward `y`: coordinate i becomes `x_i + u_i (y_i - x_i)` with a fresh
/// `u_i` uniform on `[0, rho0 * exp(-eta * |x - y|))`, then clamped to `bounds`.
pub fn wsa_move(
    x: &Position,
    y: &Position,
    rho0: f64,
    eta: f64,
    rng: &mut RngStream,
    bounds: &Bounds,
) -> Position {
    let mut out = x.clone();
    move_toward(out.coords_mut(), y, rho0, eta, rng);
    bounds.clamp_in_place(out.coords_mut());
    out
}

#[inline]
pub(crate) fn move_toward(x: &mut [f64], y: &[f64], rho0: f64, eta: f64, rng: &mut RngStream) {
    let upper = if eta == 0.0 {
        rho0
    } else {
        rho0 * (-eta * squared_distance(x, y).sqrt()).exp()
    };
    for (xi, yi) in x.iter_mut().zip(y) {
        let u = rng.uniform(0.0, upper);
        *xi += u * (yi - *xi);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterOutcome {
    Incremented,
    /// Judged against the archive and re-drawn.
    Reinitialized,
    /// Judged, but no budget was left to re-draw it.
    Exhausted,
}

/// Counter check for a whale that did not improve this iteration.
pub fn check_counter(
    whale: &mut Whale,
    archive: &mut Archive,
    stability_threshold: u32,
    eval: &mut Evaluator<'_>,
    rng: &mut RngStream,
) -> CounterOutcome {
    if whale.counter < stability_threshold {
        whale.counter += 1;
        return CounterOutcome::Incremented;
    }
    archive.judge(&whale.position, whale.fitness);
    let fresh = random_position(eval.problem(), rng);
    match eval.evaluate(&fresh) {
        Some(f) => {
            whale.position = fresh;
            whale.fitness = f;
            whale.counter = 0;
            CounterOutcome::Reinitialized
        }
        None => CounterOutcome::Exhausted,
    }
}

/// What happened during one pass over the swarm.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IterationReport {
    /// Indices of whales that moved to a better position.
    pub improved: Vec<usize>,
    /// Indices of whales that were re-drawn.
    pub reinitialized: Vec<usize>,
    /// Whales visited before the budget ran out (the swarm size when it did not).
    pub visited: usize,
}

/// A WSA-IC run in progress, advanced one iteration at a time.
#[derive(Debug)]
pub struct WsaIcState<'a> {
    swarm: Vec<Whale>,
    archive: Archive,
    rng: RngStream,
    eval: Evaluator<'a>,
    breakdown: EvaluationBreakdown,
    rho0: f64,
    eta: f64,
    stability_threshold: u32,
    scratch: Vec<f64>,
    /// Smallest fitness in the swarm; a whale at this value has no guide.
    swarm_min: f64,
}

impl<'a> WsaIcState<'a> {
    pub fn new(
        problem: &'a Problem,
        params: &WsaIcParams,
        settings: &RunSettings,
        seed: u64,
    ) -> Result<Self> {
        settings.validate()?;
        params.validate(problem)?;
        let mut rng = RngStream::new(seed);
        let mut eval = Evaluator::new(problem, settings);
        let mut swarm = Vec::with_capacity(settings.population);
        for _ in 0..settings.population {
            let x = random_position(problem, &mut rng);
            let f = eval.evaluate(&x).expect("budget covers the population");
            swarm.push(Whale::new(x, f));
        }
        let swarm_min = swarm.iter().map(|w| w.fitness).fold(f64::INFINITY, f64::min);
        Ok(WsaIcState {
            swarm,
            archive: Archive::new(
                params.fitness_threshold_for(problem),
                params.dedup_radius_for(problem),
            ),
            rng,
            eval,
            breakdown: EvaluationBreakdown {
                initial: settings.population as u64,
                ..Default::default()
            },
            rho0: params.rho0,
            eta: params.eta,
            stability_threshold: params.stability_threshold_for(problem),
            scratch: vec![0.0; problem.dim()],
            swarm_min,
        })
    }

    pub fn swarm(&self) -> &[Whale] {
        &self.swarm
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn evaluations(&self) -> u64 {
        self.eval.used()
    }

    pub fn breakdown(&self) -> EvaluationBreakdown {
        self.breakdown
    }

    pub fn stability_threshold(&self) -> u32 {
        self.stability_threshold
    }

    pub fn is_exhausted(&self) -> bool {
        self.eval.exhausted()
    }

    /// One pass over the swarm in index order against the live swarm.
    pub fn iterate(&mut self) -> IterationReport {
        let mut report = IterationReport::default();
        let bounds = self.eval.problem().bounds();
        for i in 0..self.swarm.len() {
            if self.eval.exhausted() {
                return report;
            }
            report.visited += 1;
            let guide = if self.swarm[i].fitness > self.swarm_min {
                better_nearest_unchecked(&self.swarm, i)
            } else {
                None
            };
            if let Some(j) = guide {
                self.scratch.copy_from_slice(&self.swarm[i].position);
                move_toward(
                    &mut self.scratch,
                    &self.swarm[j].position,
                    self.rho0,
                    self.eta,
                    &mut self.rng,
                );
                bounds.clamp_in_place(&mut self.scratch);
                let Some(f) = self.eval.evaluate(&self.scratch) else {
                    return report;
                };
                self.breakdown.moves += 1;
                let whale = &mut self.swarm[i];
                if f < whale.fitness {
                    whale.position.coords_mut().copy_from_slice(&self.scratch);
                    whale.fitness = f;
                    whale.counter = 0;
                    self.swarm_min = self.swarm_min.min(f);
                    report.improved.push(i);
                    continue;
                }
            }
            let old = self.swarm[i].fitness;
            match check_counter(
                &mut self.swarm[i],
                &mut self.archive,
                self.stability_threshold,
                &mut self.eval,
                &mut self.rng,
            ) {
                CounterOutcome::Reinitialized => {
                    self.breakdown.reinitializations += 1;
                    report.reinitialized.push(i);
                    self.swarm_min = if old == self.swarm_min {
                        self.swarm.iter().map(|w| w.fitness).fold(f64::INFINITY, f64::min)
                    } else {
                        self.swarm_min.min(self.swarm[i].fitness)
                    };
                }
                CounterOutcome::Incremented | CounterOutcome::Exhausted => {}
            }
        }
        report
    }

    /// Judges every whale of the last generation and returns the run result.
    pub fn finish(mut self, seed: u64) -> RunOutcome {
        for w in &self.swarm {
            self.archive.judge(&w.position, w.fitness);
        }
        let best_fitness = self.archive.f_gbest().min(self.eval.best());
        let evaluations_used = self.eval.used();
        RunOutcome {
            algorithm: "wsa-ic",
            seed,
            solutions: self.archive.into_solutions(),
            best_fitness,
            evaluations_used,
            breakdown: self.breakdown,
            trace: self.eval.into_trace(),
        }
    }
}

/// WSA-IC as an [`Optimizer`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WsaIc(pub WsaIcParams);

impl Optimizer for WsaIc {
    fn name(&self) -> &'static str {
        "wsa-ic"
    }

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
        let mut state = WsaIcState::new(problem, &self.0, settings, seed)?;
        while !state.is_exhausted() {
            state.iterate();
        }
        Ok(state.finish(seed))
    }
}
