//! Single runs and the 11 x 2 reference grid.

use std::fs;
use std::io::BufWriter;
use std::path::Path;
use std::thread;

use mapsim_core::analysis::{self, PcaResult};
use mapsim_core::dynamics::{self, Trajectory};
use mapsim_core::linalg::Matrix;
use mapsim_core::metrics::{self, Evaluation, MetricsRecord};
use mapsim_core::topology::{self, ArchKind};

use crate::config::{blame, invalid, ArchSelection, PaperConfig, RunConfig, SuiteConfig};
use crate::{formats, HarnessError};

/// Builds, simulates, solves and measures a single architecture.
pub fn run_single(config: &RunConfig) -> Result<Evaluation, HarnessError> {
    config.validate()?;
    let ArchSelection::One(kind) = config.arch else {
        return Err(invalid("--arch", "a single architecture is required, not ALL"));
    };
    metrics::evaluate(config.spec(kind)?, config.params(), config.steps, config.threshold).map_err(blame)
}

/// Simulates a single architecture without measuring it. The transition
/// time is attached when the horizon is long enough to contain it.
pub fn trajectory_only(config: &RunConfig) -> Result<(Trajectory, Option<usize>), HarnessError> {
    config.validate()?;
    let ArchSelection::One(kind) = config.arch else {
        return Err(invalid("--arch", "a single architecture is required, not ALL"));
    };
    let system = topology::build_architecture(config.spec(kind)?, config.params()).map_err(blame)?;
    let trajectory = dynamics::simulate(&system, config.steps);
    let tau = dynamics::equilibrium(&system)
        .ok()
        .and_then(|eq| metrics::transition_time(&trajectory, &eq.x_eq, config.threshold).ok());
    Ok((trajectory, tau))
}

/// Runs every selected architecture at the configured fractions.
pub fn run_selection(config: &RunConfig) -> Result<Vec<Evaluation>, HarnessError> {
    config
        .arch
        .kinds()
        .into_iter()
        .map(|kind| {
            run_single(&RunConfig {
                arch: ArchSelection::One(kind),
                ..config.clone()
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub arch: ArchKind,
    pub config: PaperConfig,
    pub evaluation: Evaluation,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    /// Configuration A first, each in catalog order.
    pub runs: Vec<SuiteRun>,
    pub pca: PcaResult<(ArchKind, PaperConfig)>,
}

impl SuiteReport {
    pub fn records(&self) -> Vec<MetricsRecord> {
        self.runs.iter().map(|r| r.evaluation.record.clone()).collect()
    }

    pub fn run(&self, arch: ArchKind, config: PaperConfig) -> Option<&SuiteRun> {
        self.runs.iter().find(|r| r.arch == arch && r.config == config)
    }
}

/// Metric table fed to the PCA: `W_T, sigma_x, tau` per run.
pub fn metric_table(runs: &[SuiteRun]) -> Result<Matrix, HarnessError> {
    let rows: Vec<[f64; 3]> = runs
        .iter()
        .map(|r| {
            let m = &r.evaluation.record;
            [m.total_work, m.dispersion, m.transition_time as f64]
        })
        .collect();
    Ok(Matrix::from_rows(&rows)?)
}

/// Evaluates all 22 pairs concurrently and runs the PCA over them.
pub fn compute_paper_suite(config: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    config.validate()?;
    let pairs: Vec<(PaperConfig, ArchKind)> = PaperConfig::ALL
        .iter()
        .flat_map(|&c| ArchKind::ALL.iter().map(move |&k| (c, k)))
        .collect();

    let results: Vec<Result<SuiteRun, HarnessError>> = thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .iter()
            .map(|&(cfg, kind)| {
                scope.spawn(move || {
                    let run = config.run_config(kind, cfg);
                    let spec = run.spec(kind)?;
                    metrics::evaluate(spec, run.params(), run.steps, run.threshold)
                        .map(|evaluation| SuiteRun {
                            arch: kind,
                            config: cfg,
                            evaluation,
                        })
                        .map_err(|source| HarnessError::Run {
                            arch: kind,
                            config: cfg,
                            source,
                        })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite worker panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let table = metric_table(&runs)?;
    let labels = runs.iter().map(|r| (r.arch, r.config)).collect();
    let pca = analysis::pca(&table, labels)?;
    Ok(SuiteReport { runs, pca })
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, HarnessError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::io(path, e))
}

/// Writes `metrics.csv`, `pca.csv` and `traj_<arch>_<cfg>.csv` files.
pub fn write_suite(report: &SuiteReport, dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    formats::write_metrics(create(&dir.join("metrics.csv"))?, &report.records())?;
    formats::write_pca(create(&dir.join("pca.csv"))?, &report.pca)?;
    for run in &report.runs {
        let name = format!("traj_{}_{}.csv", run.arch.code(), run.config.label());
        formats::write_trajectory(create(&dir.join(name))?, &run.evaluation.trajectory)?;
    }
    Ok(())
}

pub fn run_paper_suite(config: &SuiteConfig, dir: &Path) -> Result<SuiteReport, HarnessError> {
    let report = compute_paper_suite(config)?;
    write_suite(&report, dir)?;
    Ok(report)
}
