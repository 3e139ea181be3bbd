//! Whales and the "better and nearest" neighbor search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::Position;

/// A candidate solution. `fitness` caches the objective at `position`;
/// `counter` tracks consecutive iterations without improvement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Whale {
    pub position: Position,
    pub fitness: f64,
    pub counter: u32,
}

impl Whale {
    pub fn new(position: Position, fitness: f64) -> Self {
        Whale {
            position,
            fitness,
            counter: 0,
        }
    }
}

/// Finds the whale closest to `swarm[i]` among those with strictly smaller fitness.
///
/// Returns `Ok(None)` when no whale is strictly better. Equal distances resolve to
/// the lowest index.
pub fn find_better_nearest(swarm: &[Whale], i: usize) -> Result<Option<usize>> {
    if swarm.is_empty() {
        return Err(Error::EmptySwarm);
    }
    if i >= swarm.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: swarm.len(),
        });
    }
    Ok(better_nearest_unchecked(swarm, i))
}

#[inline]
pub(crate) fn better_nearest_unchecked(swarm: &[Whale], i: usize) -> Option<usize> {
    let me = &swarm[i];
    let x = me.position.as_slice();
    let mut best: Option<usize> = None;
    let mut best_d2 = f64::INFINITY;
    for (j, other) in swarm.iter().enumerate() {
        // NaN fitness never compares as better
        if !(other.fitness < me.fitness) {
            continue;
        }
        let mut d2 = 0.0;
        let mut pruned = false;
        for (a, b) in x.iter().zip(other.position.as_slice()) {
            let d = a - b;
            d2 += d * d;
            if d2 > best_d2 {
                pruned = true;
                break;
            }
        }
        if !pruned && d2 < best_d2 {
            best_d2 = d2;
            best = Some(j);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::euclidean_distance;
    use proptest::prelude::*;

    fn swarm_1d(fit: &[f64], pos: &[f64]) -> Vec<Whale> {
        fit.iter()
            .zip(pos)
            .map(|(f, x)| Whale::new(Position::new(vec![*x]), *f))
            .collect()
    }

    #[test]
    fn closer_better_whale_wins() {
        let s = swarm_1d(&[5.0, 3.0, 1.0], &[0.0, 10.0, 1.0]);
        assert_eq!(find_better_nearest(&s, 0).unwrap(), Some(2));
    }

    #[test]
    fn unique_best_has_no_guide() {
        let s = swarm_1d(&[5.0, 3.0, 1.0], &[0.0, 10.0, 1.0]);
        assert_eq!(find_better_nearest(&s, 2).unwrap(), None);
    }

    #[test]
    fn equal_distance_prefers_lower_index() {
        let s = swarm_1d(&[5.0, 1.0, 2.0], &[0.0, -3.0, 3.0]);
        assert_eq!(find_better_nearest(&s, 0).unwrap(), Some(1));
        let s = swarm_1d(&[5.0, 2.0, 1.0], &[0.0, 3.0, -3.0]);
        assert_eq!(find_better_nearest(&s, 0).unwrap(), Some(1));
    }

    #[test]
    fn equal_fitness_is_not_better() {
        let s = swarm_1d(&[1.0, 1.0], &[0.0, 1.0]);
        assert_eq!(find_better_nearest(&s, 0).unwrap(), None);
        assert_eq!(find_better_nearest(&s, 1).unwrap(), None);
    }

    #[test]
    fn empty_and_out_of_range() {
        assert!(matches!(find_better_nearest(&[], 0), Err(Error::EmptySwarm)));
        let s = swarm_1d(&[1.0], &[0.0]);
        assert!(matches!(
            find_better_nearest(&s, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    fn arb_swarm() -> impl Strategy<Value = Vec<Whale>> {
        (1usize..=20, 1usize..=4).prop_flat_map(|(p, n)| {
            prop::collection::vec(
                // small integer grids force fitness and distance ties
                (prop::collection::vec(-3i32..=3, n), 0i32..5),
                p,
            )
            .prop_map(|v| {
                v.into_iter()
                    .map(|(x, f)| {
                        Whale::new(
                            Position::new(x.into_iter().map(f64::from).collect()),
                            f64::from(f),
                        )
                    })
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn matches_exhaustive_comparison(swarm in arb_swarm()) {
            for i in 0..swarm.len() {
                let got = find_better_nearest(&swarm, i).unwrap();
                let better: Vec<usize> = (0..swarm.len())
                    .filter(|&k| k != i && swarm[k].fitness < swarm[i].fitness)
                    .collect();
                match got {
                    None => prop_assert!(better.is_empty()),
                    Some(j) => {
                        prop_assert!(swarm[j].fitness < swarm[i].fitness);
                        let dj = euclidean_distance(&swarm[i].position, &swarm[j].position).unwrap();
                        for &k in &better {
                            let dk = euclidean_distance(&swarm[i].position, &swarm[k].position).unwrap();
                            prop_assert!(dk >= dj);
                            if dk == dj {
                                prop_assert!(j <= k);
                            }
                        }
                    }
                }
            }
        }
    }
}
