//! Base landscapes in their native coordinates, all oriented for minimization with
//! a global minimum value of zero.

use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

/// The base functions the suite is built from.
///
/// The first eight are evaluated on consecutive non-overlapping blocks of size
/// [`arity`](BaseFunction::arity) and summed. The remaining five read the whole
/// vector at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseFunction {
    TwoPeakTrap,
    FiveUnevenPeakTrap,
    EqualMinima,
    DecreasingMinima,
    UnevenMinima,
    Himmelblau,
    SixHumpCamel,
    Vincent,
    Griewank,
    Ackley,
    Rosenbrock,
    Rastrigin,
    ScafferF6,
}

/// f64 closest to the six-hump camel back minimum, -1.03162845348987735...
const CAMEL_MIN: f64 = -1.0316284534898774;

impl BaseFunction {
    pub const ALL: [BaseFunction; 13] = [
        BaseFunction::TwoPeakTrap,
        BaseFunction::FiveUnevenPeakTrap,
        BaseFunction::EqualMinima,
        BaseFunction::DecreasingMinima,
        BaseFunction::UnevenMinima,
        BaseFunction::Himmelblau,
        BaseFunction::SixHumpCamel,
        BaseFunction::Vincent,
        BaseFunction::Griewank,
        BaseFunction::Ackley,
        BaseFunction::Rosenbrock,
        BaseFunction::Rastrigin,
        BaseFunction::ScafferF6,
    ];

    /// Bases whose global optima can be enumerated block by block.
    pub const EXPANDED: [BaseFunction; 8] = [
        BaseFunction::TwoPeakTrap,
        BaseFunction::FiveUnevenPeakTrap,
        BaseFunction::EqualMinima,
        BaseFunction::DecreasingMinima,
        BaseFunction::UnevenMinima,
        BaseFunction::Himmelblau,
        BaseFunction::SixHumpCamel,
        BaseFunction::Vincent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::TwoPeakTrap => "two_peak_trap",
            BaseFunction::FiveUnevenPeakTrap => "five_uneven_peak_trap",
            BaseFunction::EqualMinima => "equal_minima",
            BaseFunction::DecreasingMinima => "decreasing_minima",
            BaseFunction::UnevenMinima => "uneven_minima",
            BaseFunction::Himmelblau => "himmelblau",
            BaseFunction::SixHumpCamel => "six_hump_camel",
            BaseFunction::Vincent => "vincent",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::ScafferF6 => "scaffer_f6",
        }
    }

    /// Size of the coordinate block the base consumes.
    pub fn arity(self) -> usize {
        match self {
            BaseFunction::Himmelblau | BaseFunction::SixHumpCamel => 2,
            _ => 1,
        }
    }

    /// Whether the problem value is a plain sum of independent block values.
    pub fn is_expanded(self) -> bool {
        !matches!(
            self,
            BaseFunction::Griewank
                | BaseFunction::Ackley
                | BaseFunction::Rosenbrock
                | BaseFunction::Rastrigin
                | BaseFunction::ScafferF6
        )
    }

    /// Native interval of each coordinate in a block.
    pub fn native_domain(self) -> &'static [(f64, f64)] {
        match self {
            BaseFunction::TwoPeakTrap => &[(0.0, 20.0)],
            BaseFunction::FiveUnevenPeakTrap => &[(0.0, 30.0)],
            BaseFunction::EqualMinima
            | BaseFunction::DecreasingMinima
            | BaseFunction::UnevenMinima => &[(0.0, 1.0)],
            BaseFunction::Himmelblau => &[(-6.0, 6.0), (-6.0, 6.0)],
            BaseFunction::SixHumpCamel => &[(-1.9, 1.9), (-1.1, 1.1)],
            BaseFunction::Vincent => &[(0.25, 10.0)],
            BaseFunction::Griewank => &[(-600.0, 600.0)],
            BaseFunction::Ackley => &[(-32.768, 32.768)],
            BaseFunction::Rosenbrock => &[(-2.048, 2.048)],
            BaseFunction::Rastrigin => &[(-5.12, 5.12)],
            BaseFunction::ScafferF6 => &[(-100.0, 100.0)],
        }
    }

    /// Global minimizers of one block in native coordinates. For the whole-vector
    /// bases this is the per-coordinate minimizer (the origin).
    pub fn block_optima(self) -> Vec<Vec<f64>> {
        match self {
            BaseFunction::TwoPeakTrap => vec![vec![20.0]],
            BaseFunction::FiveUnevenPeakTrap => vec![vec![0.0], vec![30.0]],
            BaseFunction::EqualMinima => (0..5).map(|k| vec![0.1 + 0.2 * k as f64]).collect(),
            BaseFunction::DecreasingMinima => vec![vec![0.1]],
            BaseFunction::UnevenMinima => (0..5)
                .map(|k| vec![(0.15 + 0.2 * k as f64).powf(4.0 / 3.0)])
                .collect(),
            BaseFunction::Himmelblau => vec![
                vec![3.0, 2.0],
                vec![-2.805118086952745, 3.131312518250573],
                vec![-3.779310253377747, -3.2831859912861696],
                vec![3.5844283403304917, -1.8481265269644036],
            ],
            BaseFunction::SixHumpCamel => vec![
                vec![0.08984201310031806, -0.7126564030207396],
                vec![-0.08984201310031806, 0.7126564030207396],
            ],
            BaseFunction::Vincent => (-2..=3)
                .map(|k| vec![((PI / 2.0 + 2.0 * PI * k as f64) / 10.0).exp()])
                .collect(),
            _ => vec![vec![0.0]],
        }
    }

    /// Value of one block in native coordinates. Only meaningful for expanded bases.
    #[inline]
    pub fn eval_block(self, z: &[f64]) -> f64 {
        match self {
            BaseFunction::TwoPeakTrap => 200.0 - two_peak_trap(z[0]),
            BaseFunction::FiveUnevenPeakTrap => 200.0 - five_uneven_peak_trap(z[0]),
            BaseFunction::EqualMinima => 1.0 - (5.0 * PI * z[0]).sin().powi(6),
            BaseFunction::DecreasingMinima => {
                let x = z[0];
                let envelope = (-2.0 * LN_2 * ((x - 0.1) / 0.8).powi(2)).exp();
                1.0 - envelope * (5.0 * PI * x).sin().powi(6)
            }
            BaseFunction::UnevenMinima => {
                let x = z[0].max(0.0);
                1.0 - (5.0 * PI * (x.powf(0.75) - 0.05)).sin().powi(6)
            }
            BaseFunction::Himmelblau => {
                let (x, y) = (z[0], z[1]);
                (x * x + y - 11.0).powi(2) + (x + y * y - 7.0).powi(2)
            }
            BaseFunction::SixHumpCamel => {
                let (x, y) = (z[0], z[1]);
                let x2 = x * x;
                let y2 = y * y;
                (4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + x * y + (-4.0 + 4.0 * y2) * y2 - CAMEL_MIN
            }
            BaseFunction::Vincent => 1.0 - (10.0 * z[0].ln()).sin(),
            _ => self.eval_whole(z),
        }
    }

    /// Value of a whole vector in native coordinates.
    pub fn eval_whole(self, z: &[f64]) -> f64 {
        match self {
            BaseFunction::Griewank => {
                let sum: f64 = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            BaseFunction::Ackley => {
                let n = z.len() as f64;
                let sq = z.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            BaseFunction::Rosenbrock => z
                .windows(2)
                .map(|w| {
                    let (a, b) = (w[0] + 1.0, w[1] + 1.0);
                    100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
                })
                .sum(),
            BaseFunction::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BaseFunction::ScafferF6 => {
                let n = z.len();
                if n == 1 {
                    return scaffer_pair(z[0], z[0]);
                }
                (0..n).map(|i| scaffer_pair(z[i], z[(i + 1) % n])).sum()
            }
            _ => z
                .chunks_exact(self.arity())
                .map(|b| self.eval_block(b))
                .sum(),
        }
    }
}

/// Two-peak trap, maximization form: local peak 160 at 0, global peak 200 at 20.
fn two_peak_trap(x: f64) -> f64 {
    if x < 15.0 {
        160.0 / 15.0 * (15.0 - x)
    } else {
        200.0 / 5.0 * (x - 15.0)
    }
}

/// Five-uneven-peak trap, maximization form: global peaks 200 at 0 and 30.
fn five_uneven_peak_trap(x: f64) -> f64 {
    if x < 2.5 {
        80.0 * (2.5 - x)
    } else if x < 5.0 {
        64.0 * (x - 2.5)
    } else if x < 7.5 {
        64.0 * (7.5 - x)
    } else if x < 12.5 {
        28.0 * (x - 7.5)
    } else if x < 17.5 {
        28.0 * (17.5 - x)
    } else if x < 22.5 {
        32.0 * (x - 17.5)
    } else if x < 27.5 {
        32.0 * (27.5 - x)
    } else {
        80.0 * (x - 27.5)
    }
}

fn scaffer_pair(x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    let s = r2.sqrt().sin();
    0.5 + (s * s - 0.5) / (1.0 + 0.001 * r2).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registered_block_optima_hit_zero() {
        for base in BaseFunction::ALL {
            for opt in base.block_optima() {
                let v = if base.is_expanded() {
                    base.eval_block(&opt)
                } else {
                    base.eval_whole(&[opt[0], opt[0], opt[0]])
                };
                assert!(v.abs() < 1e-12, "{}: {opt:?} -> {v}", base.name());
            }
        }
    }

    #[test]
    fn himmelblau_at_three_two() {
        assert_eq!(BaseFunction::Himmelblau.eval_block(&[3.0, 2.0]), 0.0);
    }

    #[test]
    fn trap_local_peaks_are_worse() {
        assert_eq!(BaseFunction::TwoPeakTrap.eval_block(&[0.0]), 40.0);
        assert_eq!(BaseFunction::FiveUnevenPeakTrap.eval_block(&[5.0]), 40.0);
        assert_eq!(BaseFunction::FiveUnevenPeakTrap.eval_block(&[12.5]), 60.0);
        assert_eq!(BaseFunction::FiveUnevenPeakTrap.eval_block(&[22.5]), 40.0);
    }

    #[test]
    fn finite_on_native_domain() {
        for base in BaseFunction::ALL {
            let dom = base.native_domain();
            for step in 0..=100 {
                let t = step as f64 / 100.0;
                let z: Vec<f64> = (0..base.arity().max(2))
                    .map(|k| {
                        let (lo, hi) = dom[k % dom.len()];
                        lo + t * (hi - lo)
                    })
                    .collect();
                let v = if base.is_expanded() {
                    base.eval_block(&z[..base.arity()])
                } else {
                    base.eval_whole(&z)
                };
                assert!(v.is_finite(), "{} not finite at {z:?}", base.name());
                assert!(v >= -1e-12, "{} below zero at {z:?}", base.name());
            }
        }
    }
}
