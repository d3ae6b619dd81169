use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{StudyConfig, StudyKind};
use super::emit::{emit_table, sci, write_series, write_trajectory};
use crate::harness::{
    energy_drift_study, long_time_study, long_time_table, oscillatory_table, spatial_convergence,
    temporal_convergence, ConvergenceTable,
};
use crate::integrators::{evolve, SchemeSpec};
use crate::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Study(#[from] Error),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Files written by a study.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
}

/// Runs the study described by `config`, writes its outputs under `out_dir`
/// and prints one summary line per table row to `summary`.
pub fn run_study(
    config: &StudyConfig,
    out_dir: &Path,
    summary: &mut dyn Write,
) -> Result<RunReport, RunError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut report = RunReport::default();

    let effective = out_dir.join("effective-config.toml");
    fs::write(&effective, config.to_toml()).map_err(io_err(&effective))?;
    report.files.push(effective);

    let setup = config.setup();
    let meta = base_metadata(config);
    let table = match config.study {
        StudyKind::Run => {
            let params = setup.params(config.epsilons[0])?;
            let initial = setup.initial(config.modes[0])?;
            let spec = SchemeSpec::new(config.scheme, config.steps[0], setup.final_time(config.epsilons[0]))?;
            let trajectory = evolve(&initial, &spec, &params, config.stride)?;
            let path = out_dir.join("run.csv");
            let mut buf = Vec::new();
            write_trajectory(&trajectory, &meta, &mut buf).map_err(io_err(&path))?;
            fs::write(&path, buf).map_err(io_err(&path))?;
            report.files.push(path);
            let last = trajectory.checkpoints.last().expect("initial checkpoint");
            let first = &trajectory.checkpoints[0];
            let _ = writeln!(
                summary,
                "run eps={} steps={} t={} mass_drift={} energy_drift={}",
                sci(config.epsilons[0]),
                spec.step_count,
                sci(last.time),
                sci((last.mass - first.mass).abs() / first.mass.max(f64::MIN_POSITIVE)),
                sci((last.energy - first.energy).abs()),
            );
            return Ok(report);
        }
        StudyKind::Temporal => temporal_convergence(&setup, &config.epsilons, &config.steps)?,
        StudyKind::OscillatoryTable => oscillatory_table(&setup, &config.epsilons, &config.steps)?,
        StudyKind::Spatial => {
            spatial_convergence(&setup, &config.epsilons, &config.modes, config.steps[0])?
        }
        StudyKind::EnergyDrift => {
            energy_drift_study(&setup, &config.epsilons, &config.steps, config.stride)?
        }
        StudyKind::LongTime => {
            let series = long_time_study(&setup, &config.epsilons, config.steps[0], config.stride)?;
            for s in &series {
                let path = out_dir.join(format!("long-time_eps={}.csv", sci(s.epsilon)));
                let mut buf = Vec::new();
                write_series(s, &meta, &mut buf).map_err(io_err(&path))?;
                fs::write(&path, buf).map_err(io_err(&path))?;
                report.files.push(path);
            }
            long_time_table(&setup, &series)
        }
    };

    print_rows(&table, summary);
    let path = out_dir.join(format!("{}.csv", config.study.name()));
    emit_table(&table, &path).map_err(io_err(&path))?;
    report.files.push(path);
    Ok(report)
}

fn base_metadata(config: &StudyConfig) -> Vec<(String, String)> {
    let setup = config.setup();
    let mut meta = vec![
        ("data".to_string(), config.data.key().to_string()),
        ("domain".to_string(), format!("{:?}", config.domain)),
        ("M".to_string(), format!("{:?}", config.modes)),
        ("regime".to_string(), format!("{:?}", config.regime)),
        ("scheme".to_string(), config.scheme.to_string()),
        ("lambda1".to_string(), config.lambda1.to_string()),
        ("lambda2".to_string(), config.lambda2.to_string()),
        ("T".to_string(), config.horizon.to_string()),
        ("M_ref".to_string(), config.reference_modes.to_string()),
    ];
    meta.push((
        "tau_ref".to_string(),
        setup
            .reference_step
            .map(sci)
            .unwrap_or_else(|| "auto".to_string()),
    ));
    meta
}

fn print_rows(table: &ConvergenceTable, out: &mut dyn Write) {
    for row in &table.rows {
        let cells: Vec<String> = row.errors.iter().map(|e| sci(*e)).collect();
        let orders: Vec<String> = row
            .orders
            .iter()
            .skip(1)
            .map(|o| o.map_or_else(|| "-".to_string(), |v| format!("{v:.2}")))
            .collect();
        let _ = writeln!(
            out,
            "{} eps={} errors=[{}] orders=[{}]{}",
            table.study,
            sci(row.epsilon),
            cells.join(" "),
            orders.join(" "),
            if row.reference_limited.iter().any(|&b| b) {
                " (reference-limited cells)"
            } else {
                ""
            }
        );
    }
}
