//! On-disk result bundles.
//!
//! ```text
//! <bundle>/summary.csv          one row of aggregate metrics
//! <bundle>/runs.csv             seed, matched_optima, best_fitness, evaluations_used
//! <bundle>/traces/run_<seed>.csv    evaluations, best_fitness
//! <bundle>/archives/run_<seed>.csv  fitness, x1 .. xn
//! ```
//!
//! Floats are written with 17 significant digits so they read back exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Experiment;
use crate::error::{Error, Result};
use crate::functions::FunctionId;
use crate::metrics::{anof, mean_std, quality_stats, success_rate, RunRecord};

const NA: &str = "NA";

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| NA.to_string())
}

/// Aggregate metrics of one bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub function: FunctionId,
    pub algorithm: String,
    pub dimension: usize,
    pub population: usize,
    pub budget: u64,
    pub epsilon_f: f64,
    pub niche_radius: f64,
    pub runs: usize,
    pub optima: u64,
    pub success_rate: f64,
    pub anof_mean: f64,
    pub anof_std: f64,
    /// `None` when every archive is empty.
    pub quality: Option<(f64, f64)>,
}

impl Summary {
    pub fn from_records(exp: &Experiment, records: &[RunRecord]) -> Result<Self> {
        let optima = exp.problem.registry().count();
        let (anof_mean, anof_std) = anof(records)?;
        let quality = match quality_stats(records) {
            Ok(q) => Some(q),
            Err(Error::NoData(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Summary {
            function: exp.function(),
            algorithm: exp.algorithm.id().to_string(),
            dimension: exp.problem.dim(),
            population: exp.settings.population,
            budget: exp.settings.budget,
            epsilon_f: exp.problem.epsilon_f(),
            niche_radius: exp.niche_radius,
            runs: records.len(),
            optima,
            success_rate: success_rate(records, optima)?,
            anof_mean,
            anof_std,
            quality,
        })
    }

    const HEADER: [&'static str; 14] = [
        "function",
        "algorithm",
        "dimension",
        "population",
        "budget",
        "epsilon_f",
        "niche_radius",
        "runs",
        "optima",
        "success_rate",
        "anof_mean",
        "anof_std",
        "quality_mean",
        "quality_std",
    ];

    fn row(&self) -> Vec<String> {
        vec![
            self.function.to_string(),
            self.algorithm.clone(),
            self.dimension.to_string(),
            self.population.to_string(),
            self.budget.to_string(),
            fmt_f64(self.epsilon_f),
            fmt_f64(self.niche_radius),
            self.runs.to_string(),
            self.optima.to_string(),
            fmt_f64(self.success_rate),
            fmt_f64(self.anof_mean),
            fmt_f64(self.anof_std),
            fmt_opt(self.quality.map(|q| q.0)),
            fmt_opt(self.quality.map(|q| q.1)),
        ]
    }

    fn from_row(path: &Path, r: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| Error::Parse {
            path: path.to_path_buf(),
            message: format!("bad {what}"),
        };
        if r.len() != Self::HEADER.len() {
            return Err(bad("column count"));
        }
        let f = |i: usize| r[i].parse::<f64>().map_err(|_| bad(Self::HEADER[i]));
        let u = |i: usize| r[i].parse::<u64>().map_err(|_| bad(Self::HEADER[i]));
        let quality = if &r[12] == NA {
            None
        } else {
            Some((f(12)?, f(13)?))
        };
        Ok(Summary {
            function: r[0].parse()?,
            algorithm: r[1].to_string(),
            dimension: u(2)? as usize,
            population: u(3)? as usize,
            budget: u(4)?,
            epsilon_f: f(5)?,
            niche_radius: f(6)?,
            runs: u(7)? as usize,
            optima: u(8)?,
            success_rate: f(9)?,
            anof_mean: f(10)?,
            anof_std: f(11)?,
            quality,
        })
    }
}

/// One row of `runs.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub seed: u64,
    pub matched_optima: u64,
    pub best_fitness: f64,
    pub evaluations_used: u64,
}

/// A bundle read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub path: PathBuf,
    pub summary: Summary,
    pub runs: Vec<RunRow>,
    /// Archived fitness values per run, in run order.
    pub archive_fitness: Vec<Vec<f64>>,
}

impl Bundle {
    /// Summary statistics recomputed from the per-run files.
    pub fn recomputed(&self) -> Result<Summary> {
        let matched: Vec<f64> = self.runs.iter().map(|r| r.matched_optima as f64).collect();
        let (anof_mean, anof_std) =
            mean_std(&matched).ok_or_else(|| Error::NoData("bundle has no runs".into()))?;
        let full = self.runs.iter().filter(|r| r.matched_optima == self.summary.optima).count();
        let pooled: Vec<f64> = self.archive_fitness.iter().flatten().copied().collect();
        Ok(Summary {
            runs: self.runs.len(),
            success_rate: full as f64 / self.runs.len() as f64,
            anof_mean,
            anof_std,
            quality: mean_std(&pooled),
            ..self.summary.clone()
        })
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `rows` to a temporary sibling and renames it into place.
fn write_csv_atomic(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    write_csv(&tmp, header, rows)?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn run_file(dir: &Path, sub: &str, seed: u64) -> PathBuf {
    dir.join(sub).join(format!("run_{seed}.csv"))
}

/// Writes a bundle. The summary goes last, so an interrupted write never leaves
/// a summary behind.
pub fn write_bundle(dir: &Path, exp: &Experiment, records: &[RunRecord]) -> Result<()> {
    let summary = Summary::from_records(exp, records)?;
    create_dir(dir)?;
    let summary_path = dir.join("summary.csv");
    if summary_path.exists() {
        fs::remove_file(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
    }
    create_dir(&dir.join("traces"))?;
    create_dir(&dir.join("archives"))?;

    let n = exp.problem.dim();
    let mut archive_header = vec!["fitness".to_string()];
    archive_header.extend((1..=n).map(|k| format!("x{k}")));
    let archive_header: Vec<&str> = archive_header.iter().map(String::as_str).collect();

    for r in records {
        write_csv(
            &run_file(dir, "traces", r.seed),
            &["evaluations", "best_fitness"],
            r.trace
                .iter()
                .map(|t| vec![t.evaluations.to_string(), fmt_f64(t.best_fitness)]),
        )?;
        write_csv(
            &run_file(dir, "archives", r.seed),
            &archive_header,
            r.archive.iter().map(|(x, f)| {
                std::iter::once(fmt_f64(*f))
                    .chain(x.iter().map(|v| fmt_f64(*v)))
                    .collect()
            }),
        )?;
    }
    write_csv_atomic(
        &dir.join("runs.csv"),
        &["seed", "matched_optima", "best_fitness", "evaluations_used"],
        records.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.matched_optima.to_string(),
                fmt_f64(r.best_fitness),
                r.evaluations_used.to_string(),
            ]
        }),
    )?;
    write_csv_atomic(&summary_path, &Summary::HEADER, [summary.row()])
}

/// Reads a bundle written by [`write_bundle`].
pub fn read_bundle(dir: &Path) -> Result<Bundle> {
    let summary_path = dir.join("summary.csv");
    if !summary_path.exists() {
        return Err(Error::NoData(format!("{} has no summary.csv", dir.display())));
    }
    let mut rd = csv::Reader::from_path(&summary_path)?;
    let rec = rd.records().next().ok_or_else(|| Error::Parse {
        path: summary_path.clone(),
        message: "empty summary".into(),
    })??;
    let summary = Summary::from_row(&summary_path, &rec)?;

    let runs: Vec<RunRow> = csv::Reader::from_path(dir.join("runs.csv"))?
        .deserialize()
        .collect::<std::result::Result<_, _>>()?;
    let mut archive_fitness = Vec::with_capacity(runs.len());
    for r in &runs {
        let path = run_file(dir, "archives", r.seed);
        let mut rd = csv::Reader::from_path(&path)?;
        let mut fit = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            fit.push(rec[0].parse::<f64>().map_err(|_| Error::Parse {
                path: path.clone(),
                message: "bad fitness".into(),
            })?);
        }
        archive_fitness.push(fit);
    }
    Ok(Bundle {
        path: dir.to_path_buf(),
        summary,
        runs,
        archive_fitness,
    })
}
