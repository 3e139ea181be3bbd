//! Locally informed PSO.

use serde::{Deserialize, Serialize};

use super::{random_position, EvaluationBreakdown, Evaluator, Optimizer, RunOutcome, RunSettings};
use crate::error::{Error, Result};
use crate::functions::Problem;
use crate::rng::RngStream;
use crate::space::{squared_distance, Position};

pub const NSIZE_MIN: usize = 2;
pub const NSIZE_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LipsParams {
    /// Inertia weight.
    pub omega: f64,
    pub phi_max: f64,
}

impl Default for LipsParams {
    fn default() -> Self {
        LipsParams {
            omega: 0.729844,
            phi_max: 4.1,
        }
    }
}

/// Neighborhood size after `used` of `budget` evaluations: 2 at the start, growing
/// linearly and reaching 5 when the budget is spent.
pub fn lips_nsize(used: u64, budget: u64) -> usize {
    if budget == 0 {
        return NSIZE_MAX;
    }
    let span = (NSIZE_MAX - NSIZE_MIN) as u128;
    let step = (span * used.min(budget) as u128 / budget as u128) as usize;
    NSIZE_MIN + step
}

/// Indices of the `k` personal bests closest to `pbest[i]`, excluding `i`.
fn nearest(pbest: &[Position], i: usize, k: usize, buf: &mut Vec<(f64, usize)>) {
    buf.clear();
    buf.extend(
        pbest
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(j, p)| (squared_distance(p, &pbest[i]), j)),
    );
    buf.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    buf.truncate(k);
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lips(pub LipsParams);

impl Optimizer for Lips {
    fn name(&self) -> &'static str {
        "lips"
    }

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
        settings.validate()?;
        let p = settings.population;
        if p < NSIZE_MAX + 1 {
            return Err(Error::config(format!(
                "lips needs a population of at least {}, got {p}",
                NSIZE_MAX + 1
            )));
        }
        let LipsParams { omega, phi_max } = self.0;
        if !(omega > 0.0 && phi_max > 0.0) {
            return Err(Error::config("lips needs omega > 0 and phi_max > 0"));
        }
        let n = problem.dim();
        let bounds = problem.bounds();
        let mut rng = RngStream::new(seed);
        let mut eval = Evaluator::new(problem, settings);

        let mut x: Vec<Position> = (0..p).map(|_| random_position(problem, &mut rng)).collect();
        let mut v = vec![vec![0.0; n]; p];
        let mut pbest = x.clone();
        let mut pbest_f: Vec<f64> = x
            .iter()
            .map(|xi| eval.evaluate(xi).expect("budget covers the population"))
            .collect();
        let mut buf = Vec::with_capacity(p);
        let mut attractor = vec![0.0; n];

        'outer: loop {
            for i in 0..p {
                let nsize = lips_nsize(eval.used(), eval.budget());
                nearest(&pbest, i, nsize, &mut buf);
                attractor.iter_mut().for_each(|a| *a = 0.0);
                let mut phi = 0.0;
                for &(_, j) in buf.iter() {
                    let phi_j = rng.uniform(0.0, phi_max / nsize as f64);
                    phi += phi_j;
                    for (a, c) in attractor.iter_mut().zip(pbest[j].iter()) {
                        *a += phi_j * c;
                    }
                }
                let xi = x[i].coords_mut();
                if phi > 0.0 {
                    attractor.iter_mut().for_each(|a| *a /= phi);
                } else {
                    attractor.copy_from_slice(xi);
                }
                for d in 0..n {
                    v[i][d] = omega * (v[i][d] + phi * (attractor[d] - xi[d]));
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
            algorithm: "lips",
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionId;

    #[test]
    fn nsize_schedule() {
        assert_eq!(lips_nsize(0, 1000), 2);
        assert_eq!(lips_nsize(333, 1000), 2);
        assert_eq!(lips_nsize(334, 1000), 3);
        assert_eq!(lips_nsize(667, 1000), 4);
        assert_eq!(lips_nsize(999, 1000), 4);
        assert_eq!(lips_nsize(1000, 1000), 5);
        let mut last = 2;
        for u in 0..=10_000 {
            let s = lips_nsize(u, 10_000);
            assert!(s >= last && s <= 5);
            last = s;
        }
    }

    #[test]
    fn small_swarm_is_a_config_error() {
        let p = FunctionId::F6.problem().unwrap();
        let err = Lips::default().run(&p, &RunSettings::new(5, 1000), 0);
        assert!(matches!(err, Err(Error::Config(_))));
        assert!(Lips::default().run(&p, &RunSettings::new(6, 1000), 0).is_ok());
    }

    #[test]
    fn nearest_excludes_self() {
        let pb: Vec<Position> = [0.0, 1.0, 3.0, 0.5, 10.0]
            .iter()
            .map(|x| Position::new(vec![*x]))
            .collect();
        let mut buf = Vec::new();
        nearest(&pb, 0, 2, &mut buf);
        let mut idx: Vec<usize> = buf.iter().map(|b| b.1).collect();
        idx.sort();
        assert_eq!(idx, vec![1, 3]);
    }

    #[test]
    fn neighbors_at_own_pbest_freeze_motion() {
        // every neighbor sits on the particle: attractor = pbest = x, velocity
        // decays geometrically from zero and stays zero
        let pb = vec![Position::new(vec![2.0, 2.0]); 6];
        let mut buf = Vec::new();
        nearest(&pb, 3, 5, &mut buf);
        assert!(buf.iter().all(|(d, _)| *d == 0.0));
    }

    #[test]
    fn run_is_in_bounds_and_exact() {
        let p = FunctionId::F5.problem().unwrap();
        let out = Lips::default().run(&p, &RunSettings::new(20, 4_321), 7).unwrap();
        assert_eq!(out.evaluations_used, 4_321);
        for (x, f) in &out.solutions {
            assert!(p.bounds().contains(x));
            assert_eq!(*f, p.evaluate(x).unwrap());
        }
    }
}
