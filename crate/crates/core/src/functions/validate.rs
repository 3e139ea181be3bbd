//! Brute-force check of the per-block optima counts: grid scan of the native
//! domain, local refinement of every grid minimum, and a count of the refined
//! points that reach the global minimum value.

use super::base::BaseFunction;

/// Default grid resolution for one-dimensional bases.
pub const GRID_1D: usize = 1_000_000;
/// Default grid resolution per axis for two-dimensional bases.
pub const GRID_2D: usize = 2000;
/// Refined points within this distance of the minimum value count as global optima.
pub const VALUE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockValidation {
    pub base: BaseFunction,
    pub registered: usize,
    /// Distinct global minimizers found by the scan, in native coordinates.
    pub found: Vec<Vec<f64>>,
    /// Largest objective value among `found`.
    pub worst_value: f64,
    /// Every scanned optimum lies next to a registered one and vice versa.
    pub locations_agree: bool,
}

impl BlockValidation {
    pub fn passed(&self) -> bool {
        self.found.len() == self.registered && self.locations_agree && self.worst_value <= VALUE_TOLERANCE
    }
}

/// Validates one expanded base at the given grid resolution.
pub fn validate_base(base: BaseFunction, grid_1d: usize, grid_2d: usize) -> BlockValidation {
    let dom = base.native_domain();
    let candidates = match base.arity() {
        1 => scan_1d(base, dom[0], grid_1d),
        _ => scan_2d(base, dom[0], dom[1], grid_2d),
    };
    let span: f64 = dom.iter().map(|(lo, hi)| (hi - lo).powi(2)).sum::<f64>().sqrt();
    let merge_radius = 1e-6 * span;

    let mut found: Vec<Vec<f64>> = Vec::new();
    for c in candidates {
        if base.eval_block(&c) > VALUE_TOLERANCE {
            continue;
        }
        if !found.iter().any(|f| dist(f, &c) < merge_radius) {
            found.push(c);
        }
    }
    let worst_value = found
        .iter()
        .map(|f| base.eval_block(f))
        .fold(0.0_f64, f64::max);
    let registered = base.block_optima();
    let near = |a: &Vec<f64>, set: &[Vec<f64>]| set.iter().any(|b| dist(a, b) < 1e-4 * span);
    let locations_agree = found.iter().all(|f| near(f, &registered))
        && registered.iter().all(|r| near(r, &found));
    BlockValidation {
        base,
        registered: registered.len(),
        found,
        worst_value,
        locations_agree,
    }
}

/// Validates all eight expanded bases at the default resolutions.
pub fn validate_all() -> Vec<BlockValidation> {
    BaseFunction::EXPANDED
        .iter()
        .map(|b| validate_base(*b, GRID_1D, GRID_2D))
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn scan_1d(base: BaseFunction, (lo, hi): (f64, f64), points: usize) -> Vec<Vec<f64>> {
    let h = (hi - lo) / (points - 1) as f64;
    let x = |i: usize| if i == points - 1 { hi } else { lo + i as f64 * h };
    let vals: Vec<f64> = (0..points).map(|i| base.eval_block(&[x(i)])).collect();
    let mut out = Vec::new();
    for i in 0..points {
        let left = if i > 0 { vals[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < points { vals[i + 1] } else { f64::INFINITY };
        if vals[i] <= left && vals[i] <= right {
            let a = x(i.saturating_sub(1));
            let b = x((i + 1).min(points - 1));
            out.push(vec![golden_section(|t| base.eval_block(&[t]), a, b, x(i))]);
        }
    }
    out
}

/// Golden-section search on `[a, b]`, returning the best of the bracket result and
/// the starting grid point.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, start: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    [start, a, b, (a + b) / 2.0]
        .into_iter()
        .min_by(|p, q| f(*p).total_cmp(&f(*q)))
        .unwrap()
}

fn scan_2d(
    base: BaseFunction,
    (xlo, xhi): (f64, f64),
    (ylo, yhi): (f64, f64),
    points: usize,
) -> Vec<Vec<f64>> {
    let hx = (xhi - xlo) / (points - 1) as f64;
    let hy = (yhi - ylo) / (points - 1) as f64;
    let gx = |i: usize| xlo + i as f64 * hx;
    let gy = |j: usize| ylo + j as f64 * hy;
    let mut vals = vec![0.0; points * points];
    for i in 0..points {
        for j in 0..points {
            vals[i * points + j] = base.eval_block(&[gx(i), gy(j)]);
        }
    }
    let mut out = Vec::new();
    for i in 0..points {
        for j in 0..points {
            let v = vals[i * points + j];
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= points as i64 || nj >= points as i64 {
                        continue;
                    }
                    if vals[ni as usize * points + nj as usize] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                out.push(pattern_search(
                    |p| base.eval_block(p),
                    [gx(i), gy(j)],
                    [hx, hy],
                    [(xlo, xhi), (ylo, yhi)],
                ));
            }
        }
    }
    out
}

/// Compass search with step halving, confined to the box.
fn pattern_search(
    f: impl Fn(&[f64]) -> f64,
    mut p: [f64; 2],
    mut step: [f64; 2],
    dom: [(f64, f64); 2],
) -> Vec<f64> {
    let mut fp = f(&p);
    while step[0] > 1e-14 || step[1] > 1e-14 {
        let mut moved = false;
        for axis in 0..2 {
            for sign in [-1.0, 1.0] {
                let mut q = p;
                q[axis] = (q[axis] + sign * step[axis]).clamp(dom[axis].0, dom[axis].1);
                let fq = f(&q);
                if fq < fp {
                    p = q;
                    fp = fq;
                    moved = true;
                }
            }
        }
        if !moved {
            step[0] *= 0.5;
            step[1] *= 0.5;
        }
    }
    p.to_vec()
}
