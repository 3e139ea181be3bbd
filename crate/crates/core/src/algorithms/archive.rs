use crate::space::{squared_distance, Position};

/// Set of current global optima with the fitness of the best one.
///
/// Every stored fitness stays within `fitness_threshold` of the best stored
/// fitness, and no two stored positions are closer than `dedup_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct Archive {
    solutions: Vec<(Position, f64)>,
    f_gbest: f64,
    fitness_threshold: f64,
    dedup_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgeOutcome {
    /// New best; older entries that fell out of range were dropped.
    NewBest { purged: usize },
    /// Within the fitness threshold of the best and stored.
    Added,
    /// Replaced one or more worse entries within the dedup radius.
    Replaced { removed: usize },
    /// A stored entry within the dedup radius is at least as good.
    Duplicate,
    /// Too far above the best fitness.
    Rejected,
}

impl Archive {
    pub fn new(fitness_threshold: f64, dedup_radius: f64) -> Self {
        Archive {
            solutions: Vec::new(),
            f_gbest: f64::INFINITY,
            fitness_threshold,
            dedup_radius,
        }
    }

    pub fn solutions(&self) -> &[(Position, f64)] {
        &self.solutions
    }

    pub fn into_solutions(self) -> Vec<(Position, f64)> {
        self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Fitness of the best stored solution; infinite while empty.
    pub fn f_gbest(&self) -> f64 {
        self.f_gbest
    }

    pub fn fitness_threshold(&self) -> f64 {
        self.fitness_threshold
    }

    pub fn dedup_radius(&self) -> f64 {
        self.dedup_radius
    }

    /// Decides whether `(position, fitness)` is a current global optimum and
    /// updates the archive accordingly.
    pub fn judge(&mut self, position: &Position, fitness: f64) -> JudgeOutcome {
        if fitness.is_nan() {
            return JudgeOutcome::Rejected;
        }
        if fitness < self.f_gbest {
            let before = self.solutions.len();
            if self.f_gbest - fitness > self.fitness_threshold {
                self.solutions.clear();
            } else {
                let limit = fitness + self.fitness_threshold;
                self.solutions.retain(|(_, f)| *f <= limit);
            }
            let purged = before - self.solutions.len();
            let inserted = self.insert(position, fitness);
            debug_assert!(inserted.is_some());
            self.f_gbest = fitness;
            JudgeOutcome::NewBest { purged }
        } else if fitness - self.f_gbest <= self.fitness_threshold {
            match self.insert(position, fitness) {
                None => JudgeOutcome::Duplicate,
                Some(0) => JudgeOutcome::Added,
                Some(removed) => JudgeOutcome::Replaced { removed },
            }
        } else {
            JudgeOutcome::Rejected
        }
    }

    /// Stores the solution unless a neighbor within the dedup radius is at least
    /// as good. Returns how many worse neighbors were displaced.
    fn insert(&mut self, position: &Position, fitness: f64) -> Option<usize> {
        let r2 = self.dedup_radius * self.dedup_radius;
        let mut neighbors = Vec::new();
        for (k, (p, f)) in self.solutions.iter().enumerate() {
            if squared_distance(p, position) <= r2 {
                if *f <= fitness {
                    return None;
                }
                neighbors.push(k);
            }
        }
        for k in neighbors.iter().rev() {
            self.solutions.swap_remove(*k);
        }
        self.solutions.push((position.clone(), fitness));
        Some(neighbors.len())
    }

    /// `max f - min f` over the stored solutions.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .solutions
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, f)| (lo.min(*f), hi.max(*f)));
        if self.solutions.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64) -> Position {
        Position::new(vec![x])
    }

    #[test]
    fn first_entry_sets_gbest() {
        let mut a = Archive::new(1e-6, 1e-3);
        assert!(matches!(a.judge(&p(0.0), 5.0), JudgeOutcome::NewBest { purged: 0 }));
        assert_eq!(a.f_gbest(), 5.0);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn much_better_solution_clears() {
        let tf = 1e-6;
        let mut a = Archive::new(tf, 1e-3);
        a.judge(&p(0.0), 1.0);
        a.judge(&p(1.0), 1.0 + tf / 2.0);
        assert_eq!(a.len(), 2);
        let out = a.judge(&p(2.0), 1.0 - 10.0 * tf);
        assert_eq!(out, JudgeOutcome::NewBest { purged: 2 });
        assert_eq!(a.len(), 1);
        assert_eq!(a.f_gbest(), 1.0 - 10.0 * tf);
    }

    #[test]
    fn near_best_solution_is_appended() {
        let tf = 1e-6;
        let mut a = Archive::new(tf, 1e-3);
        a.judge(&p(0.0), 1.0);
        assert_eq!(a.judge(&p(5.0), 1.0 + tf / 2.0), JudgeOutcome::Added);
        assert_eq!(a.f_gbest(), 1.0);
        assert_eq!(a.len(), 2);
        assert_eq!(a.judge(&p(9.0), 1.0 + 2.0 * tf), JudgeOutcome::Rejected);
    }

    #[test]
    fn slightly_better_best_purges_only_out_of_range_entries() {
        let tf = 1.0;
        let mut a = Archive::new(tf, 1e-3);
        a.judge(&p(0.0), 10.0);
        a.judge(&p(1.0), 10.9);
        a.judge(&p(2.0), 10.4);
        assert_eq!(a.judge(&p(3.0), 9.5), JudgeOutcome::NewBest { purged: 1 });
        assert_eq!(a.len(), 3);
        assert!(a.spread() <= tf);
    }

    #[test]
    fn dedup_keeps_the_better_neighbor() {
        let mut a = Archive::new(1.0, 0.1);
        a.judge(&p(0.0), 0.5);
        assert_eq!(a.judge(&p(0.05), 0.6), JudgeOutcome::Duplicate);
        assert_eq!(a.judge(&p(0.05), 0.5), JudgeOutcome::Duplicate);
        a.judge(&p(1.0), 0.7);
        assert_eq!(a.judge(&p(1.05), 0.6), JudgeOutcome::Replaced { removed: 1 });
        assert_eq!(a.len(), 2);
        assert!(a.solutions().iter().any(|(q, f)| q[0] == 1.05 && *f == 0.6));
    }

    proptest! {
        #[test]
        fn invariants_hold_after_every_judgement(
            seq in prop::collection::vec((-5.0f64..5.0, 0.0f64..3.0), 1..200),
            tf in 0.01f64..1.0,
        ) {
            let mut a = Archive::new(tf, 0.05);
            for (x, f) in seq {
                a.judge(&p(x), f);
                let min = a.solutions().iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
                prop_assert_eq!(a.f_gbest(), min);
                prop_assert!(a.spread() <= tf);
                for (i, s) in a.solutions().iter().enumerate() {
                    for t in &a.solutions()[i + 1..] {
                        prop_assert!(squared_distance(&s.0, &t.0).sqrt() > 0.05);
                    }
                }
            }
        }
    }
}
