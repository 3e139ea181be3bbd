//! Search-space shift and rotation.

use std::fs;
use std::path::Path;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::space::Position;

/// Orthogonality tolerance for generated rotations.
pub const GENERATED_TOLERANCE: f64 = 1e-10;
/// Orthogonality tolerance for rotations read from disk.
pub const FILE_TOLERANCE: f64 = 1e-6;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    n: usize,
    data: Vec<f64>,
}

impl Rotation {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Rotation { n, data }
    }

    /// Wraps row-major data after checking it is orthogonal within `tolerance`.
    pub fn from_rows(n: usize, data: Vec<f64>, tolerance: f64) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let r = Rotation { n, data };
        let dev = r.orthogonality_error();
        if !(dev < tolerance) {
            return Err(Error::NonOrthogonal { max_deviation: dev });
        }
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }

    /// `max |(RᵀR - I)_ij|`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `out = R v`
    pub(crate) fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    /// `out = Rᵀ v`
    pub(crate) fn apply_transpose(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, vi) in v.iter().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * vi;
            }
        }
    }
}

/// Deterministic orthogonal matrix from a seed. Seed 0 gives the identity.
///
/// Draws a Gaussian matrix and orthonormalizes its columns with two passes of
/// modified Gram-Schmidt.
pub fn make_rotation(seed: u64, n: usize) -> Rotation {
    if seed == 0 || n == 0 {
        return Rotation::identity(n);
    }
    let mut rng = RngStream::new(seed);
    loop {
        let mut cols: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| StandardNormal.sample(rng.inner_mut()))
                    .collect()
            })
            .collect();
        if !orthonormalize(&mut cols) {
            continue;
        }
        let mut data = vec![0.0; n * n];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * n + j] = *v;
            }
        }
        let r = Rotation { n, data };
        if r.orthogonality_error() < GENERATED_TOLERANCE {
            return r;
        }
    }
}

fn orthonormalize(cols: &mut [Vec<f64>]) -> bool {
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let c = &mut rest[0];
                let proj: f64 = q.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                c.iter_mut().zip(q).for_each(|(ci, qi)| *ci -= proj * qi);
            }
        }
        let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return false;
        }
        cols[j].iter_mut().for_each(|v| *v /= norm);
    }
    true
}

fn read_reals(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("line {}: '{tok}' is not a number", lineno + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Reads a shift vector of exactly `n` whitespace-separated reals.
pub fn load_shift(path: &Path, n: usize) -> Result<Position> {
    let values: Vec<f64> = read_reals(path)?.into_iter().flatten().collect();
    if values.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: values.len(),
        });
    }
    Ok(Position::new(values))
}

/// Reads an `n × n` row-major matrix, one row per line.
pub fn load_rotation(path: &Path, n: usize) -> Result<Rotation> {
    let rows = read_reals(path)?;
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Rotation::from_rows(n, rows.into_iter().flatten().collect(), FILE_TOLERANCE)
}

pub fn load_transform_files(
    shift_path: &Path,
    rotation_path: &Path,
    n: usize,
) -> Result<(Position, Rotation)> {
    Ok((load_shift(shift_path, n)?, load_rotation(rotation_path, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn seed_zero_is_identity() {
        assert!(make_rotation(0, 10).is_identity());
    }

    #[test]
    fn one_dimensional_is_plus_minus_one() {
        for seed in 1..20 {
            let r = make_rotation(seed, 1);
            assert_eq!(r.get(0, 0).abs(), 1.0);
        }
    }

    #[test]
    fn generated_rotations_are_orthogonal() {
        for (seed, n) in [(1, 2), (7, 5), (99, 20), (12345, 100)] {
            let r = make_rotation(seed, n);
            assert!(r.orthogonality_error() < GENERATED_TOLERANCE, "seed {seed} n {n}");
            assert_eq!(r, make_rotation(seed, n));
        }
        assert_ne!(make_rotation(1, 4), make_rotation(2, 4));
    }

    #[test]
    fn transpose_inverts() {
        let r = make_rotation(5, 6);
        let v = [1.0, -2.0, 3.0, 0.5, 0.0, 9.0];
        let mut rv = [0.0; 6];
        let mut back = [0.0; 6];
        r.apply(&v, &mut rv);
        r.apply_transpose(&rv, &mut back);
        for (a, b) in v.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = write(&dir, "shift.txt", "1.5 -2\n  3e1\n");
        let m = write(&dir, "rot.txt", "1 0 0\n0 1 0\n0 0 1\n");
        let (shift, rot) = load_transform_files(&s, &m, 3).unwrap();
        assert_eq!(shift.as_slice(), &[1.5, -2.0, 30.0]);
        assert!(rot.is_identity());
    }

    #[test]
    fn file_errors_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let bad = write(&dir, "bad.txt", "1 two 3\n");
        assert!(matches!(load_shift(&bad, 3), Err(Error::Parse { .. })));
        let short = write(&dir, "short.txt", "1 2\n");
        assert!(matches!(load_shift(&short, 3), Err(Error::DimensionMismatch { .. })));
        let skew = write(&dir, "skew.txt", "1 1\n0 1\n");
        assert!(matches!(load_rotation(&skew, 2), Err(Error::NonOrthogonal { .. })));
        let ragged = write(&dir, "ragged.txt", "1 0\n0\n");
        assert!(matches!(load_rotation(&ragged, 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            load_shift(&dir.path().join("missing"), 1),
            Err(Error::Io { .. })
        ));
    }
}
