//! Known global optima of the expanded and classical problems.

use crate::error::{Error, Result};
use crate::space::{squared_distance, Bounds, Position};

use super::base::BaseFunction;
use super::transform::Rotation;

/// Above this many optima the representatives are not materialized.
pub const ENUMERATION_LIMIT: u64 = 100_000;

/// Decodes the nearest global optimum of a separable (unrotated) expanded problem
/// block by block, without enumerating the product set.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecoder {
    arity: usize,
    /// Block optima in native coordinates.
    points: Vec<Vec<f64>>,
    /// Search coordinate k is `offset[k] + scale[k] * native`.
    offset: Vec<f64>,
    scale: Vec<f64>,
}

impl BlockDecoder {
    #[inline]
    fn coord(&self, k: usize, native: f64) -> f64 {
        self.offset[k] + self.scale[k] * native
    }

    /// Index of the nearest optimum (one digit per block) and its squared distance.
    pub fn nearest(&self, x: &[f64]) -> (Vec<usize>, f64) {
        let mut key = Vec::with_capacity(x.len() / self.arity);
        let mut total = 0.0;
        for (b, chunk) in x.chunks_exact(self.arity).enumerate() {
            let mut best = (0, f64::INFINITY);
            for (idx, p) in self.points.iter().enumerate() {
                let d2: f64 = chunk
                    .iter()
                    .zip(p)
                    .enumerate()
                    .map(|(c, (v, q))| (v - self.coord(b * self.arity + c, *q)).powi(2))
                    .sum();
                if d2 < best.1 {
                    best = (idx, d2);
                }
            }
            key.push(best.0);
            total += best.1;
        }
        (key, total)
    }

    /// Position of the optimum identified by `key`.
    pub fn position(&self, key: &[usize]) -> Position {
        let mut v = Vec::with_capacity(key.len() * self.arity);
        for (b, &idx) in key.iter().enumerate() {
            for (c, q) in self.points[idx].iter().enumerate() {
                v.push(self.coord(b * self.arity + c, *q));
            }
        }
        Position::new(v)
    }

    /// Smallest distance between two distinct optima of the product set.
    fn min_separation(&self) -> f64 {
        let blocks = self.offset.len() / self.arity;
        let mut best = f64::INFINITY;
        for b in 0..blocks {
            for (i, p) in self.points.iter().enumerate() {
                for q in &self.points[i + 1..] {
                    let d2: f64 = p
                        .iter()
                        .zip(q)
                        .enumerate()
                        .map(|(c, (a, bq))| {
                            let k = b * self.arity + c;
                            (self.scale[k] * (a - bq)).powi(2)
                        })
                        .sum();
                    best = best.min(d2);
                }
            }
        }
        best.sqrt()
    }
}

/// Count, value and locations of a problem's global optima.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimaRegistry {
    count: u64,
    minimum_value: f64,
    representatives: Vec<Position>,
    decoder: Option<BlockDecoder>,
    min_separation: f64,
}

impl OptimaRegistry {
    /// Registry of `base` embedded in `bounds`, before any shift or rotation.
    pub fn new(base: BaseFunction, bounds: &Bounds) -> Result<Self> {
        let n = bounds.dim();
        let arity = base.arity();
        if n == 0 || n % arity != 0 {
            return Err(Error::config(format!(
                "{} needs a dimension that is a positive multiple of {arity}, got {n}",
                base.name()
            )));
        }
        let dom = base.native_domain();
        let to_search = |k: usize, native: f64| {
            let (lo, hi) = dom[k % dom.len()];
            let (l, u) = (bounds.lower()[k], bounds.upper()[k]);
            l + (native - lo) * ((u - l) / (hi - lo))
        };

        if !base.is_expanded() {
            let origin: Vec<f64> = (0..n).map(|k| to_search(k, 0.0)).collect();
            return Ok(OptimaRegistry {
                count: 1,
                minimum_value: 0.0,
                representatives: vec![Position::new(origin)],
                decoder: None,
                min_separation: f64::INFINITY,
            });
        }

        let blocks = n / arity;
        let native = base.block_optima();
        let per_block = native.len() as u64;
        let count = u32::try_from(blocks)
            .ok()
            .and_then(|b| per_block.checked_pow(b))
            .ok_or_else(|| {
                Error::config(format!(
                    "{} at dimension {n} has too many optima to count",
                    base.name()
                ))
            })?;

        let mut offset = vec![0.0; n];
        let mut scale = vec![0.0; n];
        for k in 0..n {
            let (lo, hi) = dom[k % dom.len()];
            scale[k] = (bounds.upper()[k] - bounds.lower()[k]) / (hi - lo);
            offset[k] = bounds.lower()[k] - lo * scale[k];
        }
        let decoder = BlockDecoder {
            arity,
            points: native.clone(),
            offset,
            scale,
        };
        let min_separation = decoder.min_separation();

        let representatives = if count <= ENUMERATION_LIMIT {
            enumerate_keys(blocks, native.len())
                .map(|key| decoder.position(&key))
                .collect()
        } else {
            Vec::new()
        };

        Ok(OptimaRegistry {
            count,
            minimum_value: 0.0,
            representatives,
            decoder: Some(decoder),
            min_separation,
        })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn minimum_value(&self) -> f64 {
        self.minimum_value
    }

    pub fn representatives(&self) -> &[Position] {
        &self.representatives
    }

    pub fn decoder(&self) -> Option<&BlockDecoder> {
        self.decoder.as_ref()
    }

    /// Smallest distance between two distinct global optima (infinite for one).
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    /// Registry for explicit optima, used for hand-built problems and tests.
    pub fn from_points(points: Vec<Position>, minimum_value: f64) -> Self {
        let mut min_separation = f64::INFINITY;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                min_separation = min_separation.min(squared_distance(a, b).sqrt());
            }
        }
        OptimaRegistry {
            count: points.len() as u64,
            minimum_value,
            representatives: points,
            decoder: None,
            min_separation,
        }
    }

    /// Moves the optima into the coordinates of a shifted and rotated problem,
    /// where the objective reads `z = R (x - shift)`.
    /// Optima pushed outside `bounds` cannot be reached and are dropped.
    pub(crate) fn transformed(
        &self,
        shift: Option<&Position>,
        rotation: Option<&Rotation>,
        bounds: &Bounds,
    ) -> Self {
        if shift.is_none() && rotation.is_none() {
            return self.clone();
        }
        let n = shift
            .map(|s| s.dim())
            .or_else(|| rotation.map(|r| r.dim()))
            .unwrap_or(0);
        let map = |z: &[f64]| -> Position {
            let mut x = vec![0.0; z.len()];
            match rotation {
                Some(r) => r.apply_transpose(z, &mut x),
                None => x.copy_from_slice(z),
            }
            if let Some(s) = shift {
                x.iter_mut().zip(s.iter()).for_each(|(v, o)| *v += o);
            }
            Position::new(x)
        };
        let representatives: Vec<Position> = self
            .representatives
            .iter()
            .map(|p| map(p))
            .filter(|x| bounds.contains(x))
            .collect();
        let count = if self.representatives.is_empty() {
            self.count
        } else {
            representatives.len() as u64
        };
        let decoder = match (rotation, &self.decoder) {
            (None, Some(d)) => {
                let mut d = d.clone();
                if let Some(s) = shift {
                    debug_assert_eq!(s.dim(), n);
                    d.offset.iter_mut().zip(s.iter()).for_each(|(o, v)| *o += v);
                }
                Some(d)
            }
            _ => None,
        };
        OptimaRegistry {
            count,
            minimum_value: self.minimum_value,
            representatives,
            decoder,
            min_separation: self.min_separation,
        }
    }
}

fn enumerate_keys(blocks: usize, base: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(blocks as u32);
    (0..total).map(move |mut idx| {
        let mut key = vec![0; blocks];
        for slot in key.iter_mut().rev() {
            *slot = idx % base;
            idx /= base;
        }
        key
    })
}

/// Registry of `base` at dimension `n` on the default `[-100, 100]^n` range.
pub fn registry_lookup(base: BaseFunction, n: usize) -> Result<OptimaRegistry> {
    if n == 0 {
        return Err(Error::config("dimension must be positive"));
    }
    OptimaRegistry::new(base, &Bounds::uniform(n, -100.0, 100.0)?)
}
