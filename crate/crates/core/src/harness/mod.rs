//! Experiment configs, seeded batches, result bundles and comparisons.

mod bundle;
mod compare;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bundle::{read_bundle, write_bundle, Bundle, RunRow, Summary};
pub use compare::{compare, compare_bundles, find_bundles, CompareMetric, ComparisonRow, ComparisonTable};

use crate::algorithms::{Algorithm, Optimizer, RunSettings};
use crate::error::{Error, Result};
use crate::functions::{load_rotation, load_shift, make_rotation, FunctionId, Problem};
use crate::metrics::{default_niche_radius, RunRecord};
use crate::rng::RngStream;
use crate::space::{Bounds, Position};

pub const DEFAULT_RUNS: usize = 51;
pub const DESK_RUNS: usize = 25;
pub const DESK_BUDGET_DIVISOR: u64 = 10;
/// Accuracy level floor under the desk preset.
pub const DESK_EPSILON_F: f64 = 1e-6;
/// Half-width of the seeded shift, as a fraction of the half-range.
const SEEDED_SHIFT_FRACTION: f64 = 0.2;

/// Scale at which an experiment runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Reference budgets and run counts.
    #[default]
    Paper,
    /// Budget divided by 10, 25 runs unless set explicitly, accuracy level
    /// relaxed to at least 1e-6.
    Desk,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Preset::Paper),
            "desk" => Ok(Preset::Desk),
            _ => Err(Error::config(format!("unknown preset '{s}' (paper|desk)"))),
        }
    }
}

/// One benchmark id or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSelection {
    One(FunctionId),
    Many(Vec<FunctionId>),
}

impl FunctionSelection {
    pub fn ids(&self) -> Vec<FunctionId> {
        match self {
            FunctionSelection::One(id) => vec![*id],
            FunctionSelection::Many(ids) => ids.clone(),
        }
    }
}

/// Where the shift and rotation come from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TransformSource {
    /// Zero shift, identity rotation.
    #[default]
    None,
    /// Seeded rotation (expanded functions only) and a seeded shift.
    Seed { seed: u64 },
    /// Whitespace-separated text files; paths are relative to the config file.
    Files {
        shift: Option<PathBuf>,
        rotation: Option<PathBuf>,
    },
}

/// An experiment as written in a TOML file. Unset fields take the per-function
/// reference values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub function: FunctionSelection,
    pub dimension: Option<usize>,
    /// Lower and upper bound, shared by every coordinate.
    pub bounds: Option<[f64; 2]>,
    pub epsilon_f: Option<f64>,
    pub population: Option<usize>,
    pub budget: Option<u64>,
    /// Defaults to 51, or 25 under the desk preset.
    pub runs: Option<usize>,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub transform: TransformSource,
    pub trace_stride: Option<u64>,
    pub niche_radius: Option<f64>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub preset: Preset,
    pub algorithm: Algorithm,
    /// Directory the config was read from; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line style overrides applied on top of a config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub base_seed: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from("<config>"),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = o.preset {
            self.preset = p;
        }
        if let Some(s) = o.base_seed {
            self.base_seed = s;
        }
        if let Some(w) = o.workers {
            self.workers = Some(w);
        }
        if let Some(out) = &o.output {
            self.output = Some(out.clone());
        }
    }

    /// Seed of run `i`.
    pub fn seed(&self, i: usize) -> u64 {
        self.base_seed.wrapping_add(i as u64)
    }

    pub fn run_count(&self) -> usize {
        self.runs.unwrap_or(match self.preset {
            Preset::Paper => DEFAULT_RUNS,
            Preset::Desk => DESK_RUNS,
        })
    }

    pub fn output_dir(&self) -> Result<PathBuf> {
        let out = self
            .output
            .as_ref()
            .ok_or_else(|| Error::config("no output directory given"))?;
        Ok(if out.is_absolute() {
            out.clone()
        } else {
            self.base_dir.join(out)
        })
    }

    /// Builds every experiment of the config, checking everything that can be
    /// checked before a single evaluation.
    pub fn resolve(&self) -> Result<Vec<Experiment>> {
        let ids = self.function.ids();
        if ids.is_empty() {
            return Err(Error::config("no function selected"));
        }
        if self.run_count() == 0 {
            return Err(Error::config("runs must be positive"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers must be positive"));
        }
        ids.into_iter().map(|id| self.resolve_one(id)).collect()
    }

    fn resolve_one(&self, id: FunctionId) -> Result<Experiment> {
        let d = id.defaults();
        let n = self.dimension.unwrap_or(d.dimension);
        let [lo, hi] = self.bounds.unwrap_or([-100.0, 100.0]);
        let bounds = Bounds::uniform(n, lo, hi)?;
        let mut epsilon_f = self.epsilon_f.unwrap_or(d.epsilon_f);
        let mut budget = self.budget.unwrap_or(d.budget);
        if self.preset == Preset::Desk {
            budget /= DESK_BUDGET_DIVISOR;
            epsilon_f = epsilon_f.max(DESK_EPSILON_F);
        }
        let mut problem = Problem::new(d.base, n, bounds.clone(), epsilon_f)?;
        problem.set_id(id);
        problem = match &self.transform {
            TransformSource::None => problem,
            TransformSource::Seed { seed } => {
                let mut rng = RngStream::new(*seed);
                let shift = Position::new(
                    bounds
                        .lower()
                        .iter()
                        .zip(bounds.upper())
                        .map(|(l, u)| {
                            let (mid, half) = ((l + u) / 2.0, (u - l) / 2.0);
                            let w = SEEDED_SHIFT_FRACTION * half;
                            rng.uniform(mid - w, mid + w)
                        })
                        .collect(),
                );
                let problem = problem.with_shift(shift)?;
                if d.base.is_expanded() {
                    problem.with_rotation(make_rotation(*seed, n))?
                } else {
                    problem
                }
            }
            TransformSource::Files { shift, rotation } => {
                let mut p = problem;
                if let Some(s) = shift {
                    p = p.with_shift(load_shift(&self.base_dir.join(s), n)?)?;
                }
                if let Some(r) = rotation {
                    p = p.with_rotation(load_rotation(&self.base_dir.join(r), n)?)?;
                }
                p
            }
        };
        let settings = RunSettings {
            population: self.population.unwrap_or(d.population),
            budget,
            trace_stride: self.trace_stride.unwrap_or(0),
        };
        settings.validate()?;
        let niche_radius = self.niche_radius.unwrap_or_else(|| default_niche_radius(&bounds));
        if !(niche_radius > 0.0) {
            return Err(Error::config("niche radius must be positive"));
        }
        // surfaces algorithm parameter errors now rather than inside a worker
        self.algorithm
            .run(&problem, &RunSettings::new(settings.population, settings.population as u64), 0)?;
        let seeds = (0..self.run_count()).map(|i| self.seed(i)).collect();
        Ok(Experiment {
            problem,
            settings,
            algorithm: self.algorithm.clone(),
            niche_radius,
            seeds,
        })
    }
}

/// A fully resolved experiment on one function.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub problem: Problem,
    pub settings: RunSettings,
    pub algorithm: Algorithm,
    pub niche_radius: f64,
    pub seeds: Vec<u64>,
}

impl Experiment {
    pub fn function(&self) -> FunctionId {
        self.problem.id().expect("harness problems carry an id")
    }

    /// Directory name of this experiment's bundle.
    pub fn bundle_name(&self) -> String {
        format!("{}-{}", self.function(), self.algorithm.id())
    }

    pub fn run_one(&self, seed: u64) -> Result<RunRecord> {
        let outcome = self.algorithm.run(&self.problem, &self.settings, seed)?;
        RunRecord::from_outcome(outcome, &self.problem, self.niche_radius)
    }

    /// Runs every seed on `workers` threads; records come back in seed order.
    pub fn run_all(&self, workers: usize) -> Result<Vec<RunRecord>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| self.seeds.par_iter().map(|s| self.run_one(*s)).collect())
    }
}

/// Default worker count: the number of available cores.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Runs every experiment of `config` and writes one bundle per function under
/// the output directory. Returns the bundle paths.
pub fn run_batch(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let experiments = config.resolve()?;
    let root = config.output_dir()?;
    preflight_output(&root)?;
    let workers = config.workers.unwrap_or_else(default_workers);
    let mut paths = Vec::new();
    for exp in &experiments {
        let records = exp.run_all(workers)?;
        let dir = root.join(exp.bundle_name());
        write_bundle(&dir, exp, &records)?;
        paths.push(dir);
    }
    Ok(paths)
}

fn preflight_output(root: &Path) -> Result<()> {
    fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
    let probe = root.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}
