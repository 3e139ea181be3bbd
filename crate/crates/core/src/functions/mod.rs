//! Benchmark problems: base landscapes embedded in a common search box, optional
//! shift and rotation, and the registry of known global optima.

mod base;
mod registry;
mod transform;
pub mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use base::BaseFunction;
pub use registry::{registry_lookup, BlockDecoder, OptimaRegistry, ENUMERATION_LIMIT};
pub use transform::{
    load_rotation, load_shift, load_transform_files, make_rotation, Rotation, FILE_TOLERANCE,
    GENERATED_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::space::{Bounds, Position};

/// Benchmark identifiers. Composition functions F9-F15 are not provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F16,
    F17,
    F18,
    F19,
    F20,
}

/// Reference settings attached to a benchmark id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionDefaults {
    pub base: BaseFunction,
    pub name: &'static str,
    pub dimension: usize,
    pub epsilon_f: f64,
    pub population: usize,
    pub budget: u64,
    /// Attenuation coefficient used by the original whale swarm baseline.
    pub wsa_eta: f64,
}

impl FunctionId {
    pub const ALL: [FunctionId; 13] = [
        FunctionId::F1,
        FunctionId::F2,
        FunctionId::F3,
        FunctionId::F4,
        FunctionId::F5,
        FunctionId::F6,
        FunctionId::F7,
        FunctionId::F8,
        FunctionId::F16,
        FunctionId::F17,
        FunctionId::F18,
        FunctionId::F19,
        FunctionId::F20,
    ];

    pub fn defaults(self) -> FunctionDefaults {
        use BaseFunction::*;
        let (base, name, dimension, epsilon_f, population, budget, wsa_eta) = match self {
            FunctionId::F1 => (TwoPeakTrap, "Expanded Two-Peak Trap", 5, 1e-8, 50, 6_000_000, 0.0001),
            FunctionId::F2 => (FiveUnevenPeakTrap, "Expanded Five-Uneven-Peak Trap", 5, 1e-8, 50, 180_000_000, 0.1),
            FunctionId::F3 => (EqualMinima, "Expanded Equal Minima", 4, 1e-8, 50, 1_500_000_000, 0.14),
            FunctionId::F4 => (DecreasingMinima, "Expanded Decreasing Minima", 5, 1e-8, 50, 150_000_000, 0.00005),
            FunctionId::F5 => (UnevenMinima, "Expanded Uneven Minima", 3, 1e-8, 50, 90_000_000, 0.16),
            FunctionId::F6 => (Himmelblau, "Expanded Himmelblau", 4, 1e-8, 50, 30_000_000, 0.16),
            FunctionId::F7 => (SixHumpCamel, "Expanded Six-Hump Camel Back", 6, 1e-6, 50, 30_000_000, 0.001),
            FunctionId::F8 => (Vincent, "Modified Vincent", 3, 1e-4, 50, 1_500_000_000, 0.3),
            FunctionId::F16 => (Griewank, "Griewank", 50, 1e-8, 100, 20_000_000, 0.005),
            FunctionId::F17 => (Ackley, "Ackley", 100, 1e-8, 100, 20_000_000, 0.01),
            FunctionId::F18 => (Rosenbrock, "Rosenbrock", 100, 1e-8, 100, 150_000_000, 0.014),
            FunctionId::F19 => (Rastrigin, "Rastrigin", 100, 1e-8, 100, 150_000_000, 0.005),
            FunctionId::F20 => (ScafferF6, "Expanded Scaffer F6", 100, 1e-8, 100, 60_000_000, 0.01),
        };
        FunctionDefaults {
            base,
            name,
            dimension,
            epsilon_f,
            population,
            budget,
            wsa_eta,
        }
    }

    /// Problem with the reference dimension, `[-100, 100]^n`, no shift and no rotation.
    pub fn problem(self) -> Result<Problem> {
        let d = self.defaults();
        let mut p = Problem::new(d.base, d.dimension, Bounds::uniform(d.dimension, -100.0, 100.0)?, d.epsilon_f)?;
        p.id = Some(self);
        Ok(p)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                let n: Option<u32> = s.trim().trim_start_matches(['F', 'f']).parse().ok();
                match n {
                    Some(9..=15) => Error::config(format!(
                        "{s} is a composition function and is not provided"
                    )),
                    _ => Error::config(format!("unknown function id '{s}'")),
                }
            })
    }
}

/// An objective instance: base landscape, dimension, search box, transform and
/// accuracy level.
///
/// Evaluation computes `z = R (x - shift)`, clamps `z` into the search box, maps each
/// coordinate affinely onto the base's native interval and sums the base over blocks.
#[derive(Debug, Clone)]
pub struct Problem {
    id: Option<FunctionId>,
    base: BaseFunction,
    dim: usize,
    bounds: Bounds,
    shift: Option<Position>,
    rotation: Option<Rotation>,
    epsilon_f: f64,
    plain_registry: OptimaRegistry,
    registry: OptimaRegistry,
    native_lo: Vec<f64>,
    native_scale: Vec<f64>,
}

impl Problem {
    pub fn new(base: BaseFunction, dim: usize, bounds: Bounds, epsilon_f: f64) -> Result<Self> {
        if bounds.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bounds.dim(),
            });
        }
        if !(epsilon_f > 0.0) {
            return Err(Error::config("epsilon_f must be positive"));
        }
        let registry = OptimaRegistry::new(base, &bounds)?;
        let dom = base.native_domain();
        let mut native_lo = Vec::with_capacity(dim);
        let mut native_scale = Vec::with_capacity(dim);
        for k in 0..dim {
            let (lo, hi) = dom[k % dom.len()];
            native_lo.push(lo);
            native_scale.push((hi - lo) / (bounds.upper()[k] - bounds.lower()[k]));
        }
        Ok(Problem {
            id: None,
            base,
            dim,
            bounds,
            shift: None,
            rotation: None,
            epsilon_f,
            plain_registry: registry.clone(),
            registry,
            native_lo,
            native_scale,
        })
    }

    pub fn with_shift(mut self, shift: Position) -> Result<Self> {
        if shift.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: shift.dim(),
            });
        }
        self.shift = if shift.iter().all(|v| *v == 0.0) { None } else { Some(shift) };
        self.refresh_registry();
        Ok(self)
    }

    pub fn with_rotation(mut self, rotation: Rotation) -> Result<Self> {
        if rotation.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rotation.dim(),
            });
        }
        let dev = rotation.orthogonality_error();
        if !(dev < GENERATED_TOLERANCE.max(FILE_TOLERANCE)) {
            return Err(Error::NonOrthogonal { max_deviation: dev });
        }
        self.rotation = if rotation.is_identity() { None } else { Some(rotation) };
        self.refresh_registry();
        Ok(self)
    }

    pub fn with_epsilon_f(mut self, epsilon_f: f64) -> Result<Self> {
        if !(epsilon_f > 0.0) {
            return Err(Error::config("epsilon_f must be positive"));
        }
        self.epsilon_f = epsilon_f;
        Ok(self)
    }

    fn refresh_registry(&mut self) {
        self.registry = self
            .plain_registry
            .transformed(self.shift.as_ref(), self.rotation.as_ref(), &self.bounds);
    }

    pub(crate) fn set_id(&mut self, id: FunctionId) {
        self.id = Some(id);
    }

    pub fn id(&self) -> Option<FunctionId> {
        self.id
    }

    pub fn base(&self) -> BaseFunction {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn shift(&self) -> Option<&Position> {
        self.shift.as_ref()
    }

    pub fn rotation(&self) -> Option<&Rotation> {
        self.rotation.as_ref()
    }

    pub fn epsilon_f(&self) -> f64 {
        self.epsilon_f
    }

    /// Known optima in this problem's coordinates.
    pub fn registry(&self) -> &OptimaRegistry {
        &self.registry
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.value(x))
    }

    /// Objective value without the length check.
    #[inline]
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        if self.shift.is_none() && self.rotation.is_none() {
            return self.value_native(x);
        }
        let mut z: Vec<f64> = match &self.shift {
            Some(s) => x.iter().zip(s.iter()).map(|(a, b)| a - b).collect(),
            None => x.to_vec(),
        };
        if let Some(r) = &self.rotation {
            let v = z.clone();
            r.apply(&v, &mut z);
        }
        self.bounds.clamp_in_place(&mut z);
        self.value_native(&z)
    }

    #[inline]
    fn to_native(&self, k: usize, u: f64) -> f64 {
        let u = u.clamp(self.bounds.lower()[k], self.bounds.upper()[k]);
        self.native_lo[k] + (u - self.bounds.lower()[k]) * self.native_scale[k]
    }

    fn value_native(&self, z: &[f64]) -> f64 {
        let arity = self.base.arity();
        if self.base.is_expanded() {
            let mut buf = [0.0; 2];
            let mut total = 0.0;
            for (b, chunk) in z.chunks_exact(arity).enumerate() {
                for (c, u) in chunk.iter().enumerate() {
                    buf[c] = self.to_native(b * arity + c, *u);
                }
                total += self.base.eval_block(&buf[..arity]);
            }
            total
        } else {
            let native: Vec<f64> = z.iter().enumerate().map(|(k, u)| self.to_native(k, *u)).collect();
            self.base.eval_whole(&native)
        }
    }
}
