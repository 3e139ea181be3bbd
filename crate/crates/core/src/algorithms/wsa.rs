//! The original whale swarm algorithm: every guided whale moves, better or not.

use serde::{Deserialize, Serialize};

use super::wsa_ic::move_toward;
use super::{random_position, EvaluationBreakdown, Evaluator, Optimizer, RunOutcome, RunSettings};
use crate::error::{Error, Result};
use crate::functions::Problem;
use crate::rng::RngStream;
use crate::whale::{better_nearest_unchecked, Whale};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WsaParams {
    pub rho0: f64,
    /// Attenuation coefficient. Defaults to the per-function reference value;
    /// required for problems built outside the benchmark table.
    pub eta: Option<f64>,
}

impl Default for WsaParams {
    fn default() -> Self {
        WsaParams {
            rho0: 2.0,
            eta: None,
        }
    }
}

impl WsaParams {
    pub fn eta_for(&self, problem: &Problem) -> Result<f64> {
        match (self.eta, problem.id()) {
            (Some(eta), _) => Ok(eta),
            (None, Some(id)) => Ok(id.defaults().wsa_eta),
            (None, None) => Err(Error::config(
                "wsa needs an explicit eta for a custom problem",
            )),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Wsa(pub WsaParams);

impl Wsa {
    /// One pass in index order. Returns false once the budget ran out.
    fn iterate(
        swarm: &mut [Whale],
        rho0: f64,
        eta: f64,
        eval: &mut Evaluator<'_>,
        rng: &mut RngStream,
        scratch: &mut [f64],
    ) -> bool {
        let bounds = eval.problem().bounds();
        for i in 0..swarm.len() {
            let Some(j) = better_nearest_unchecked(swarm, i) else {
                continue;
            };
            scratch.copy_from_slice(&swarm[i].position);
            move_toward(scratch, &swarm[j].position, rho0, eta, rng);
            bounds.clamp_in_place(scratch);
            let Some(f) = eval.evaluate(scratch) else {
                return false;
            };
            let w = &mut swarm[i];
            w.position.coords_mut().copy_from_slice(scratch);
            w.fitness = f;
        }
        !eval.exhausted()
    }
}

impl Optimizer for Wsa {
    fn name(&self) -> &'static str {
        "wsa"
    }

    fn run(&self, problem: &Problem, settings: &RunSettings, seed: u64) -> Result<RunOutcome> {
        settings.validate()?;
        let eta = self.0.eta_for(problem)?;
        if !(self.0.rho0 > 0.0 && eta >= 0.0) {
            return Err(Error::config("wsa needs rho0 > 0 and eta >= 0"));
        }
        let mut rng = RngStream::new(seed);
        let mut eval = Evaluator::new(problem, settings);
        let mut swarm: Vec<Whale> = (0..settings.population)
            .map(|_| {
                let x = random_position(problem, &mut rng);
                let f = eval.evaluate(&x).expect("budget covers the population");
                Whale::new(x, f)
            })
            .collect();
        let mut scratch = vec![0.0; problem.dim()];
        let mut moves = 0;
        loop {
            let before = eval.used();
            let go_on = Self::iterate(&mut swarm, self.0.rho0, eta, &mut eval, &mut rng, &mut scratch);
            moves += eval.used() - before;
            // a swarm whose whales all share one fitness has no guides left
            if !go_on || eval.used() == before {
                break;
            }
        }
        let evaluations_used = eval.used();
        let best_fitness = eval.best();
        Ok(RunOutcome {
            algorithm: "wsa",
            seed,
            solutions: swarm.into_iter().map(|w| (w.position, w.fitness)).collect(),
            best_fitness,
            evaluations_used,
            breakdown: EvaluationBreakdown {
                initial: settings.population as u64,
                moves,
                reinitializations: 0,
            },
            trace: eval.into_trace(),
        })
    }
}
