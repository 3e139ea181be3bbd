//! Fitness-Euclidean distance ratio PSO.

use serde::{Deserialize, Serialize};

use super::{random_position, EvaluationBreakdown, Evaluator, Optimizer, RunOutcome, RunSettings};
use crate::error::{Error, Result};
use crate::functions::Problem;
use crate::rng::RngStream;
use crate::space::{squared_distance, Position};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FerpsoParams {
    /// Constriction coefficient.
    pub chi: f64,
    pub phi_max: f64,
}

impl Default for FerpsoParams {
    fn default() -> Self {
        FerpsoParams {
            chi: 0.729844,
            phi_max: 4.1,
        }
    }
}

/// Index of the personal best that maximizes the fitness-distance ratio with
/// respect to particle `i`, for minimization.
///
/// The ratio of `j` is `alpha * (f_i - f_j) / |P_j - P_i|` with
/// `alpha = diagonal / (f_worst - f_best)`. When every personal best has the same
/// fitness the ratio is undefined and the global best (lowest index) is returned.
/// Personal bests at zero distance are skipped. Ties go to the lowest index.
pub fn ferpso_neighbor(pbests: &[Position], fitness: &[f64], i: usize, diagonal: f64) -> usize {
    let (mut best, mut worst) = (0, 0);
    for (k, f) in fitness.iter().enumerate() {
        if *f < fitness[best] {
            best = k;
        }
        if *f > fitness[worst] {
            worst = k;
        }
    }
    let span = fitness[worst] - fitness[best];
    if !(span > 0.0) {
        return best;
    }
    let alpha = diagonal / span;
    let mut arg = None;
    let mut max = f64::NEG_INFINITY;
    for j in 0..pbests.len() {
        if j == i {
            continue;
        }
        let d2 = squared_distance(&pbests[j], &pbests[i]);
        if d2 == 0.0 {
            continue;
        }
        let fer = alpha * (fitness[i] - fitness[j]) / d2.sqrt();
        if fer > max {
            max = fer;
            arg = Some(j);
        }
    }
    arg.unwrap_or(best)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ferpso(pub FerpsoParams);

impl Optimizer for Ferpso {
    fn name(&self) -> &'static str {
        "ferpso"
    }

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
        settings.validate()?;
        let FerpsoParams { chi, phi_max } = self.0;
        if !(chi > 0.0 && phi_max > 0.0) {
            return Err(Error::config("ferpso needs chi > 0 and phi_max > 0"));
        }
        let p = settings.population;
        let n = problem.dim();
        let bounds = problem.bounds();
        let diagonal = bounds.diagonal();
        let mut rng = RngStream::new(seed);
        let mut eval = Evaluator::new(problem, settings);

        let mut x: Vec<Position> = (0..p).map(|_| random_position(problem, &mut rng)).collect();
        let mut v = vec![vec![0.0; n]; p];
        let mut pbest = x.clone();
        let mut pbest_f: Vec<f64> = x
            .iter()
            .map(|xi| eval.evaluate(xi).expect("budget covers the population"))
            .collect();
        let mut neighbor = vec![0; p];

        'outer: loop {
            for (i, nb) in neighbor.iter_mut().enumerate() {
                *nb = ferpso_neighbor(&pbest, &pbest_f, i, diagonal);
            }
            for i in 0..p {
                let pn = &pbest[neighbor[i]];
                let xi = x[i].coords_mut();
                for d in 0..n {
                    let r1 = rng.uniform(0.0, phi_max / 2.0);
                    let r2 = rng.uniform(0.0, phi_max / 2.0);
                    v[i][d] = chi * (v[i][d] + r1 * (pbest[i][d] - xi[d]) + r2 * (pn[d] - xi[d]));
                    xi[d] += v[i][d];
                }
                bounds.clamp_in_place(xi);
                let Some(f) = eval.evaluate(&x[i]) else {
                    break 'outer;
                };
                if f < pbest_f[i] {
                    pbest[i].coords_mut().copy_from_slice(&x[i]);
                    pbest_f[i] = f;
                }
            }
        }

        let evaluations_used = eval.used();
        let best_fitness = eval.best();
        Ok(RunOutcome {
            algorithm: "ferpso",
            seed,
            solutions: pbest.into_iter().zip(pbest_f).collect(),
            best_fitness,
            evaluations_used,
            breakdown: EvaluationBreakdown {
                initial: p as u64,
                moves: evaluations_used - p as u64,
                reinitializations: 0,
            },
            trace: eval.into_trace(),
        })
    }
}
