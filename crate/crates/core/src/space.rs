//! Decision-space primitives: positions, box bounds, distances.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the decision space. The length is fixed at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<f64>);

impl Position {
    pub fn new(coords: Vec<f64>) -> Self {
        Position(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Position(vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Mutable access to the coordinates. The length cannot change through it.
    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Position {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Position {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Position {
    fn from(v: Vec<f64>) -> Self {
        Position(v)
    }
}

/// Axis-aligned box `[lower[k], upper[k]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::config("bounds must have at least one dimension"));
        }
        for (k, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "bounds for coordinate {k} are invalid: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The same interval on every coordinate.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Bounds::new(vec![lower; n], vec![upper; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Length of the box diagonal, `sqrt(sum (upper - lower)^2)`.
    pub fn diagonal(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn clamp_in_place(&self, x: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Euclidean distance between two positions of equal dimension.
pub fn euclidean_distance(a: &Position, b: &Position) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Projects every coordinate onto its interval. In-bounds points come back unchanged.
pub fn clamp_to_bounds(p: &Position, bounds: &Bounds) -> Result<Position> {
    if p.dim() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            found: p.dim(),
        });
    }
    let mut out = p.clone();
    bounds.clamp_in_place(out.coords_mut());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pos(v: &[f64]) -> Position {
        Position::new(v.to_vec())
    }

    #[test]
    fn distance_examples() {
        assert_eq!(euclidean_distance(&pos(&[0.0, 0.0]), &pos(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&pos(&[0.0, 0.0]), &pos(&[3.0, 4.0])).unwrap(), 5.0);
        let d = euclidean_distance(&pos(&[1.0, 1.0, 1.0]), &pos(&[2.0, 2.0, 2.0])).unwrap();
        assert!((d - 1.7320508).abs() < 1e-7);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let err = euclidean_distance(&pos(&[0.0]), &pos(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn clamp_examples() {
        let b = Bounds::uniform(2, -100.0, 100.0).unwrap();
        assert_eq!(clamp_to_bounds(&pos(&[150.0, -150.0]), &b).unwrap(), pos(&[100.0, -100.0]));
        assert_eq!(clamp_to_bounds(&pos(&[0.0, 50.0]), &b).unwrap(), pos(&[0.0, 50.0]));
        assert_eq!(clamp_to_bounds(&pos(&[-100.0000001, 0.0]), &b).unwrap(), pos(&[-100.0, 0.0]));
        assert!(clamp_to_bounds(&pos(&[0.0]), &b).is_err());
    }

    #[test]
    fn bounds_reject_inverted_interval() {
        assert!(Bounds::new(vec![1.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn diagonal_of_hundred_dim_box() {
        let b = Bounds::uniform(100, -100.0, 100.0).unwrap();
        assert!((b.diagonal() - 2000.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn triangle_inequality(
            a in prop::collection::vec(-1e3f64..1e3, 5),
            b in prop::collection::vec(-1e3f64..1e3, 5),
            c in prop::collection::vec(-1e3f64..1e3, 5),
        ) {
            let (a, b, c) = (pos(&a), pos(&b), pos(&c));
            let ab = euclidean_distance(&a, &b).unwrap();
            let bc = euclidean_distance(&b, &c).unwrap();
            let ac = euclidean_distance(&a, &c).unwrap();
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-12) + 1e-12);
            prop_assert_eq!(ab, euclidean_distance(&b, &a).unwrap());
            prop_assert!(ab >= 0.0);
        }

        #[test]
        fn clamp_lands_in_bounds(v in prop::collection::vec(-1e4f64..1e4, 3)) {
            let b = Bounds::uniform(3, -100.0, 100.0).unwrap();
            let c = clamp_to_bounds(&pos(&v), &b).unwrap();
            prop_assert!(b.contains(&c));
            for (orig, got) in v.iter().zip(c.iter()) {
                if orig.abs() <= 100.0 {
                    prop_assert_eq!(orig, got);
                }
            }
        }
    }
}
