//! Z-test tables between two sets of result bundles.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::bundle::{fmt_f64, read_bundle, Bundle};
use crate::error::{Error, Result};
use crate::functions::FunctionId;
use crate::metrics::{z_test, ComparisonVerdict, Direction, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareMetric {
    /// Optima found per run; higher is better.
    Anof,
    /// Best fitness per run; lower is better.
    BestFitness,
}

impl CompareMetric {
    pub fn direction(self) -> Direction {
        match self {
            CompareMetric::Anof => Direction::HigherIsBetter,
            CompareMetric::BestFitness => Direction::LowerIsBetter,
        }
    }

    fn sample(self, b: &Bundle) -> Vec<f64> {
        b.runs
            .iter()
            .map(|r| match self {
                CompareMetric::Anof => r.matched_optima as f64,
                CompareMetric::BestFitness => r.best_fitness,
            })
            .collect()
    }
}

impl FromStr for CompareMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anof" => Ok(CompareMetric::Anof),
            "fitness" => Ok(CompareMetric::BestFitness),
            _ => Err(Error::config(format!("unknown metric '{s}' (anof|fitness)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub function: FunctionId,
    pub algorithm_a: String,
    pub algorithm_b: String,
    pub result: ComparisonVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    /// Counts of `+`, `=` and `-`.
    pub fn tally(&self) -> (usize, usize, usize) {
        let count = |v: Verdict| self.rows.iter().filter(|r| r.result.verdict == v).count();
        (count(Verdict::Better), count(Verdict::Equal), count(Verdict::Worse))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("function,algorithm_a,algorithm_b,mean_a,std_a,mean_b,std_b,z,verdict\n");
        for r in &self.rows {
            let v = &r.result;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.function,
                r.algorithm_a,
                r.algorithm_b,
                fmt_f64(v.mean_a),
                fmt_f64(v.std_a),
                fmt_f64(v.mean_b),
                fmt_f64(v.std_b),
                fmt_f64(v.z),
                v.verdict
            ));
        }
        let (p, e, m) = self.tally();
        out.push_str(&format!("tally,+,{p},=,{e},-,{m},,\n"));
        out
    }
}

impl fmt::Display for ComparisonTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<5} {:>24} {:>24} {:>10}  ", "fn", "a (mean±std)", "b (mean±std)", "z")?;
        for r in &self.rows {
            let v = &r.result;
            writeln!(
                f,
                "{:<5} {:>24} {:>24} {:>10.3}  {}",
                r.function.to_string(),
                format!("{:.4e}±{:.2e}", v.mean_a, v.std_a),
                format!("{:.4e}±{:.2e}", v.mean_b, v.std_b),
                v.z,
                v.verdict
            )?;
        }
        let (p, e, m) = self.tally();
        write!(f, "+/=/-: {p}/{e}/{m}")
    }
}

/// Compares bundles pairwise by function. `a` being better gives `+`.
pub fn compare_bundles(a: &[Bundle], b: &[Bundle], metric: CompareMetric, alpha: f64) -> Result<ComparisonTable> {
    let index = |set: &[Bundle]| -> Result<BTreeMap<FunctionId, usize>> {
        let mut m = BTreeMap::new();
        for (i, bundle) in set.iter().enumerate() {
            if m.insert(bundle.summary.function, i).is_some() {
                return Err(Error::config(format!(
                    "more than one bundle for {} under one side",
                    bundle.summary.function
                )));
            }
        }
        Ok(m)
    };
    let (ia, ib) = (index(a)?, index(b)?);
    let mut rows = Vec::new();
    for (func, &i) in &ia {
        let Some(&j) = ib.get(func) else { continue };
        let (ba, bb) = (&a[i], &b[j]);
        if ba.runs.len() != bb.runs.len() {
            return Err(Error::config(format!(
                "{func}: run counts differ ({} vs {})",
                ba.runs.len(),
                bb.runs.len()
            )));
        }
        let result = z_test(&metric.sample(ba), &metric.sample(bb), metric.direction(), alpha)?;
        rows.push(ComparisonRow {
            function: *func,
            algorithm_a: ba.summary.algorithm.clone(),
            algorithm_b: bb.summary.algorithm.clone(),
            result,
        });
    }
    if rows.is_empty() {
        return Err(Error::NoData("the two sides share no function".into()));
    }
    Ok(ComparisonTable { rows })
}

/// Bundles at `root`: the directory itself if it holds a summary, otherwise its
/// immediate subdirectories that do.
pub fn find_bundles(root: &Path) -> Result<Vec<Bundle>> {
    if root.join("summary.csv").exists() {
        return Ok(vec![read_bundle(root)?]);
    }
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("summary.csv").exists())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(Error::NoData(format!("no result bundle under {}", root.display())));
    }
    dirs.iter().map(|d| read_bundle(d)).collect()
}

/// Reads both sides from disk and compares them at the 0.05 level.
pub fn compare(root_a: &Path, root_b: &Path, metric: CompareMetric) -> Result<ComparisonTable> {
    compare_bundles(&find_bundles(root_a)?, &find_bundles(root_b)?, metric, 0.05)
}
