//! Experiment harness: configs in, sorted CSV tables and SVG plots out.
//!
//! | subcommand     | rows                                                        |
//! |----------------|-------------------------------------------------------------|
//! | `random-dmera` | `random-dmera`, one per (seed, M, side)                     |
//! | `lrtim`        | `lrtim/energy` per h, `lrtim/entropy` per (h, M, side)      |
//! | `noisy-lrtim`  | `noisy-lrtim/{mitigated,raw}` per seed, `noiseless` per h   |
//! | `cone-report`  | separate `cone_report.csv` with structural cone sizes       |

pub mod config;
pub mod error;
pub mod experiments;
pub mod plot;
pub mod results;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::HarnessError;
pub use results::ResultRow;

use results::PartialWriter;

/// What a run wrote.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub files: Vec<PathBuf>,
    /// Printed summary for the cone report.
    pub report: Option<String>,
}

pub fn csv_name(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::RandomDmera => "random_dmera.csv",
        ExperimentKind::LrtimSweep => "lrtim.csv",
        ExperimentKind::NoisyLrtim => "noisy_lrtim.csv",
        ExperimentKind::ConeReport => "cone_report.csv",
    }
}

fn write(path: PathBuf, text: &str, files: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
    std::fs::write(&path, text).map_err(|e| HarnessError::io(&path, e))?;
    files.push(path);
    Ok(())
}

/// Runs one experiment with `workers` threads and writes its artifacts to `out`.
pub fn run(cfg: &ExperimentConfig, out: &Path, workers: usize) -> Result<RunOutput, HarnessError> {
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(|e| HarnessError::io(out, e))?;
    let mut files = Vec::new();
    let csv_path = out.join(csv_name(cfg.experiment));

    if cfg.experiment == ExperimentKind::ConeReport {
        let rows = experiments::run_cone_report(cfg)?;
        write(csv_path, &experiments::cone_report_csv(&rows), &mut files)?;
        return Ok(RunOutput { rows: Vec::new(), files, report: Some(experiments::cone_report_table(&rows)) });
    }

    let pool = experiments::worker_pool(workers)?;
    let partial = PartialWriter::create(&csv_path)?;
    let rows = match cfg.experiment {
        ExperimentKind::RandomDmera => experiments::run_random_dmera(cfg, &pool, Some(&partial))?,
        ExperimentKind::LrtimSweep => {
            let dir = out.join("checkpoints");
            std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
            experiments::run_lrtim_sweep(cfg, &pool, Some(&partial), Some(&dir))?
        }
        ExperimentKind::NoisyLrtim => experiments::run_noisy_lrtim(cfg, &pool, Some(&partial))?,
        ExperimentKind::ConeReport => unreachable!("handled above"),
    };
    partial.finish(&csv_path, &rows)?;
    files.push(csv_path);
    if cfg.plots {
        for (name, svg) in plot::plots_for(&rows) {
            write(out.join(name), &svg, &mut files)?;
        }
    }
    Ok(RunOutput { rows, files, report: None })
}
