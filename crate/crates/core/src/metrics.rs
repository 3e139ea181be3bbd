//! Optima counting against a registry, run statistics and the two-sample z-test.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algorithms::{RunOutcome, TracePoint};
use crate::error::{Error, Result};
use crate::functions::{OptimaRegistry, Problem};
use crate::space::{squared_distance, Bounds, Position};

/// Fraction of the per-coordinate range used as the default niche radius.
pub const NICHE_FRACTION: f64 = 0.01;

/// Minimum sample size for the z-test.
pub const MIN_Z_SAMPLES: usize = 30;

/// `NICHE_FRACTION` of the narrowest coordinate range (2.0 on `[-100, 100]`).
pub fn default_niche_radius(bounds: &Bounds) -> f64 {
    bounds
        .lower()
        .iter()
        .zip(bounds.upper())
        .map(|(l, u)| u - l)
        .fold(f64::INFINITY, f64::min)
        * NICHE_FRACTION
}

/// The radius actually used for counting: `radius`, shrunk below half the
/// smallest distance between two known optima so no solution can sit in two
/// niches.
pub fn effective_niche_radius(registry: &OptimaRegistry, radius: f64) -> f64 {
    radius.min(0.49 * registry.min_separation())
}

/// Number of known optima claimed by `solutions`.
///
/// A solution qualifies for an optimum when its fitness is within `epsilon_f` of
/// the known minimum and it lies within the effective niche radius. Each solution
/// claims at most one optimum; pairs are assigned greedily by increasing distance.
pub fn count_matched_optima(
    solutions: &[(Position, f64)],
    registry: &OptimaRegistry,
    epsilon_f: f64,
    niche_radius: f64,
) -> Result<u64> {
    let r = effective_niche_radius(registry, niche_radius);
    let r2 = r * r;
    let limit = registry.minimum_value() + epsilon_f;
    let good = solutions.iter().filter(|(_, f)| *f <= limit).map(|(x, _)| x);

    if !registry.representatives().is_empty() {
        let reps = registry.representatives();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (a, x) in good.enumerate() {
            for (o, rep) in reps.iter().enumerate() {
                let d2 = squared_distance(x, rep);
                if d2 <= r2 {
                    pairs.push((d2, a, o));
                }
            }
        }
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
        let mut used_a = HashSet::new();
        let mut used_o = HashSet::new();
        for (_, a, o) in pairs {
            if !used_a.contains(&a) && !used_o.contains(&o) {
                used_a.insert(a);
                used_o.insert(o);
            }
        }
        return Ok(used_o.len() as u64);
    }

    if let Some(decoder) = registry.decoder() {
        let mut claimed = HashSet::new();
        for x in good {
            let (key, d2) = decoder.nearest(x);
            if d2 <= r2 {
                claimed.insert(key);
            }
        }
        return Ok(claimed.len() as u64);
    }

    Err(Error::UnsupportedMetric(format!(
        "registry of {} optima has no representatives and no decoder",
        registry.count()
    )))
}

/// Scored result of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub matched_optima: u64,
    pub best_fitness: f64,
    pub evaluations_used: u64,
    /// Reported solutions with their fitness.
    pub archive: Vec<(Position, f64)>,
    pub trace: Vec<TracePoint>,
}

impl RunRecord {
    pub fn from_outcome(outcome: RunOutcome, problem: &Problem, niche_radius: f64) -> Result<Self> {
        let matched_optima = count_matched_optima(
            &outcome.solutions,
            problem.registry(),
            problem.epsilon_f(),
            niche_radius,
        )?;
        Ok(RunRecord {
            seed: outcome.seed,
            matched_optima,
            best_fitness: outcome.best_fitness,
            evaluations_used: outcome.evaluations_used,
            archive: outcome.solutions,
            trace: outcome.trace,
        })
    }
}

/// Mean and standard deviation with divisor N.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

fn require(records: &[RunRecord]) -> Result<()> {
    if records.is_empty() {
        Err(Error::NoData("no run records".into()))
    } else {
        Ok(())
    }
}

/// Fraction of runs that found every known optimum.
pub fn success_rate(records: &[RunRecord], optima_count: u64) -> Result<f64> {
    require(records)?;
    let full = records.iter().filter(|r| r.matched_optima == optima_count).count();
    Ok(full as f64 / records.len() as f64)
}

/// Average number of optima found: mean and standard deviation (divisor N).
pub fn anof(records: &[RunRecord]) -> Result<(f64, f64)> {
    require(records)?;
    let v: Vec<f64> = records.iter().map(|r| r.matched_optima as f64).collect();
    Ok(mean_std(&v).expect("non-empty"))
}

/// Mean and standard deviation of all reported fitness values pooled across runs.
pub fn quality_stats(records: &[RunRecord]) -> Result<(f64, f64)> {
    let pooled: Vec<f64> = records
        .iter()
        .flat_map(|r| r.archive.iter().map(|(_, f)| *f))
        .collect();
    mean_std(&pooled).ok_or_else(|| Error::NoData("every archive is empty".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// The first sample is significantly better.
    Better,
    Equal,
    Worse,
}

impl Verdict {
    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Better => "+",
            Verdict::Equal => "=",
            Verdict::Worse => "-",
        }
    }

    pub fn flipped(self) -> Verdict {
        match self {
            Verdict::Better => Verdict::Worse,
            Verdict::Equal => Verdict::Equal,
            Verdict::Worse => Verdict::Better,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub verdict: Verdict,
    pub z: f64,
    pub critical: f64,
    pub mean_a: f64,
    pub std_a: f64,
    pub mean_b: f64,
    pub std_b: f64,
}

/// Two-sided critical value of the standard normal at level `alpha`.
pub fn critical_value(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::config("alpha must lie in (0, 1)"));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - alpha / 2.0))
}

/// Two independent-samples z-test of `a` against `b`.
///
/// `|z| <= critical` gives [`Verdict::Equal`]. With zero variance in both samples
/// the means are compared directly.
pub fn z_test(a: &[f64], b: &[f64], direction: Direction, alpha: f64) -> Result<ComparisonVerdict> {
    for s in [a, b] {
        if s.len() < MIN_Z_SAMPLES {
            return Err(Error::InsufficientSamples {
                needed: MIN_Z_SAMPLES,
                found: s.len(),
            });
        }
    }
    let critical = critical_value(alpha)?;
    let (mean_a, std_a) = mean_std(a).expect("non-empty");
    let (mean_b, std_b) = mean_std(b).expect("non-empty");
    let se = (std_a * std_a / a.len() as f64 + std_b * std_b / b.len() as f64).sqrt();
    let diff = mean_a - mean_b;
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    let verdict = if z.abs() <= critical {
        Verdict::Equal
    } else {
        let a_higher = z > 0.0;
        match (direction, a_higher) {
            (Direction::HigherIsBetter, true) | (Direction::LowerIsBetter, false) => Verdict::Better,
            _ => Verdict::Worse,
        }
    };
    Ok(ComparisonVerdict {
        verdict,
        z,
        critical,
        mean_a,
        std_a,
        mean_b,
        std_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::FunctionId;

    fn record(matched: u64, fitness: &[f64]) -> RunRecord {
        RunRecord {
            seed: 0,
            matched_optima: matched,
            best_fitness: 0.0,
            evaluations_used: 0,
            archive: fitness.iter().map(|f| (Position::new(vec![0.0]), *f)).collect(),
            trace: Vec::new(),
        }
    }

    #[test]
    fn default_radius_on_the_standard_box() {
        assert_eq!(default_niche_radius(&Bounds::uniform(4, -100.0, 100.0).unwrap()), 2.0);
    }

    #[test]
    fn empty_archive_matches_nothing() {
        let p = FunctionId::F6.problem().unwrap();
        assert_eq!(count_matched_optima(&[], p.registry(), 1e-8, 2.0).unwrap(), 0);
    }

    #[test]
    fn exact_copies_match_everything() {
        let p = FunctionId::F6.problem().unwrap();
        let sol: Vec<_> = p.registry().representatives().iter().map(|r| (r.clone(), 0.0)).collect();
        assert_eq!(sol.len(), 16);
        assert_eq!(count_matched_optima(&sol, p.registry(), 1e-8, 2.0).unwrap(), 16);
    }

    #[test]
    fn duplicates_claim_one_optimum() {
        let p = FunctionId::F6.problem().unwrap();
        let r = p.registry().representatives()[3].clone();
        let mut near = r.clone();
        near.coords_mut()[0] += 0.1;
        let sol = vec![(r, 0.0), (near, 0.0)];
        assert_eq!(count_matched_optima(&sol, p.registry(), 1e-8, 2.0).unwrap(), 1);
    }

    #[test]
    fn fitness_and_radius_both_required() {
        let p = FunctionId::F6.problem().unwrap();
        let r = p.registry().representatives()[0].clone();
        let mut far = r.clone();
        far.coords_mut()[1] += 2.5;
        let sol = vec![(r.clone(), 1e-6), (far, 0.0)];
        assert_eq!(count_matched_optima(&sol, p.registry(), 1e-8, 2.0).unwrap(), 0);
        assert_eq!(count_matched_optima(&[(r, 1e-9)], p.registry(), 1e-8, 2.0).unwrap(), 1);
    }

    #[test]
    fn decoder_and_enumeration_agree() {
        let p = FunctionId::F2.problem().unwrap();
        let reg = p.registry();
        let mut rng = crate::rng::RngStream::new(3);
        let sol: Vec<(Position, f64)> = (0..200)
            .map(|k| {
                let mut x = reg.representatives()[rng.index(32)].clone();
                for c in x.coords_mut() {
                    *c += rng.uniform(-3.0, 3.0);
                }
                (x, if k % 5 == 0 { 1.0 } else { 0.0 })
            })
            .collect();
        let enumerated = count_matched_optima(&sol, reg, 1e-8, 2.0).unwrap();
        let mut claimed = HashSet::new();
        for (x, f) in &sol {
            let (key, d2) = reg.decoder().unwrap().nearest(x);
            if *f <= 1e-8 && d2 <= 4.0 {
                claimed.insert(key);
            }
        }
        assert_eq!(enumerated, claimed.len() as u64);
    }

    #[test]
    fn radius_shrinks_for_dense_registries() {
        let reg = OptimaRegistry::from_points(
            vec![Position::new(vec![0.0]), Position::new(vec![1.0])],
            0.0,
        );
        assert!((effective_niche_radius(&reg, 2.0) - 0.49).abs() < 1e-15);
    }

    #[test]
    fn rotated_many_optima_is_unsupported() {
        let p = FunctionId::F3.problem().unwrap();
        // 5^8 optima at n = 8 exceed the enumeration limit; a rotation drops the decoder
        let p8 = Problem::new(p.base(), 8, Bounds::uniform(8, -100.0, 100.0).unwrap(), 1e-8)
            .unwrap()
            .with_rotation(crate::functions::make_rotation(3, 8))
            .unwrap();
        assert!(matches!(
            count_matched_optima(&[], p8.registry(), 1e-8, 2.0),
            Err(Error::UnsupportedMetric(_))
        ));
    }

    #[test]
    fn success_and_anof() {
        let full: Vec<_> = (0..51).map(|_| record(16, &[0.0])).collect();
        assert_eq!(success_rate(&full, 16).unwrap(), 1.0);
        assert_eq!(anof(&full).unwrap(), (16.0, 0.0));
        let none: Vec<_> = (0..3).map(|_| record(3, &[0.0])).collect();
        assert_eq!(success_rate(&none, 16).unwrap(), 0.0);
        assert_eq!(anof(&[record(0, &[]), record(1, &[])]).unwrap(), (0.5, 0.5));
        assert!(matches!(anof(&[]), Err(Error::NoData(_))));
    }

    #[test]
    fn quality() {
        assert_eq!(quality_stats(&[record(1, &[0.0, 0.0]), record(1, &[0.0])]).unwrap(), (0.0, 0.0));
        assert_eq!(quality_stats(&[record(1, &[1.0]), record(1, &[3.0])]).unwrap(), (2.0, 1.0));
        assert!(matches!(quality_stats(&[record(0, &[])]), Err(Error::NoData(_))));
    }

    #[test]
    fn critical_value_at_five_percent() {
        assert!((critical_value(0.05).unwrap() - 1.959964).abs() < 1e-6);
    }

    #[test]
    fn identical_samples_are_equal() {
        let a: Vec<f64> = (0..40).map(|k| (k % 7) as f64).collect();
        let v = z_test(&a, &a, Direction::HigherIsBetter, 0.05).unwrap();
        assert_eq!(v.verdict, Verdict::Equal);
        assert_eq!(v.z, 0.0);
    }

    #[test]
    fn zero_variance_compares_directly() {
        let a = vec![32.0; 51];
        let b = vec![0.0; 51];
        assert_eq!(z_test(&a, &b, Direction::HigherIsBetter, 0.05).unwrap().verdict, Verdict::Better);
        assert_eq!(z_test(&a, &b, Direction::LowerIsBetter, 0.05).unwrap().verdict, Verdict::Worse);
        assert_eq!(z_test(&a, &a, Direction::LowerIsBetter, 0.05).unwrap().verdict, Verdict::Equal);
    }

    #[test]
    fn unit_shift_with_unit_spread() {
        // two-point samples ±1 around the mean have std exactly 1 (divisor N):
        // z = 1 / sqrt(2/51) = 5.0498
        let a: Vec<f64> = (0..51).map(|k| if k % 2 == 0 { 2.0 } else { 0.0 }).collect();
        let b: Vec<f64> = a.iter().map(|v| v - 1.0).collect();
        let (m, s) = mean_std(&a).unwrap();
        let expected = (m - (m - 1.0)) / (2.0 * s * s / 51.0).sqrt();
        let v = z_test(&a, &b, Direction::HigherIsBetter, 0.05).unwrap();
        assert!((v.z - expected).abs() < 1e-12);
        assert_eq!(v.verdict, Verdict::Better);
        let ideal = 1.0 / (2.0f64 / 51.0).sqrt();
        assert!((ideal - 5.0498).abs() < 1e-4);
    }

    #[test]
    fn straddles_the_boundary() {
        // b is constant, a is ±s around its mean: z = (mean_a - mean_b) * sqrt(n) / s
        let n = 36;
        let a_std = |m: f64| -> Vec<f64> { (0..n).map(|k| if k % 2 == 0 { m + 1.0 } else { m - 1.0 }).collect() };
        let b = vec![0.0; n];
        let at = |z: f64| z_test(&a_std(z / 6.0), &b, Direction::HigherIsBetter, 0.05).unwrap();
        assert!((at(1.96).z - 1.96).abs() < 1e-12);
        assert_eq!(at(1.96).verdict, Verdict::Better);
        assert_eq!(at(1.9599).verdict, Verdict::Equal);
    }

    #[test]
    fn small_samples_rejected() {
        let a = vec![1.0; 29];
        let b = vec![1.0; 40];
        assert!(matches!(
            z_test(&a, &b, Direction::HigherIsBetter, 0.05),
            Err(Error::InsufficientSamples { needed: 30, found: 29 })
        ));
    }

    proptest::proptest! {
        #[test]
        fn antisymmetric(
            a in proptest::collection::vec(-50.0f64..50.0, 30..60),
            b in proptest::collection::vec(-50.0f64..50.0, 30..60),
            higher in proptest::bool::ANY,
        ) {
            let dir = if higher { Direction::HigherIsBetter } else { Direction::LowerIsBetter };
            let ab = z_test(&a, &b, dir, 0.05).unwrap();
            let ba = z_test(&b, &a, dir, 0.05).unwrap();
            proptest::prop_assert_eq!(ab.verdict, ba.verdict.flipped());
            proptest::prop_assert!((ab.z + ba.z).abs() <= 1e-9 * ab.z.abs().max(1.0));
        }
    }
}
