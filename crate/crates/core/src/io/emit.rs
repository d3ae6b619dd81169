//! CSV output with a `#`-prefixed metadata block.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::harness::{ConvergenceTable, LongTimeSeries};
use crate::integrators::Trajectory;

pub const ARTIFACT_VERSION: &str = concat!("nlde-core ", env!("CARGO_PKG_VERSION"));

pub const SERIES_COLUMNS: [&str; 7] = [
    "step",
    "time",
    "l2_error",
    "h1_error",
    "e_max",
    "mass_drift",
    "energy_drift",
];

/// Scientific notation with six significant digits, e.g. `1.26047e-2`.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

fn header(w: &mut impl Write, kind: &str, meta: &[(String, String)]) -> io::Result<()> {
    writeln!(w, "# version: {ARTIFACT_VERSION}")?;
    writeln!(w, "# generated_unix: {}", timestamp())?;
    writeln!(w, "# study: {kind}")?;
    for (k, v) in meta {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

/// Writes `table`: one `error` row per epsilon (descending) followed by its
/// `order` row when there is more than one column. Absent orders are empty.
pub fn write_table(table: &ConvergenceTable, w: &mut impl Write) -> io::Result<()> {
    header(w, &table.study, &table.metadata)?;
    let eps: Vec<String> = table.rows.iter().map(|r| sci(r.epsilon)).collect();
    writeln!(w, "# eps: {}", eps.join(" "))?;
    for row in &table.rows {
        let tag = sci(row.epsilon);
        let times: Vec<String> = row.realized_final_times.iter().map(|t| sci(*t)).collect();
        writeln!(w, "# realized_final_time[eps={tag}]: {}", times.join(" "))?;
        if let Some(s) = row.reference_step {
            writeln!(w, "# reference_step[eps={tag}]: {}", sci(s))?;
        }
        if let Some(e) = row.reference_error {
            writeln!(w, "# reference_error[eps={tag}]: {}", sci(e))?;
        }
        if row.reference_limited.iter().any(|&b| b) {
            let flags: Vec<&str> = row
                .reference_limited
                .iter()
                .map(|&b| if b { "limited" } else { "ok" })
                .collect();
            writeln!(w, "# reference_limited[eps={tag}]: {}", flags.join(" "))?;
        }
    }

    let label = table.axis.label();
    let mut head = vec!["row".to_string(), "eps".to_string()];
    head.extend(table.columns.iter().map(|c| format!("{label}={}", sci(*c))));
    writeln!(w, "{}", head.join(","))?;
    for row in &table.rows {
        let mut line = vec!["error".to_string(), sci(row.epsilon)];
        line.extend(row.errors.iter().map(|e| sci(*e)));
        writeln!(w, "{}", line.join(","))?;
        if table.columns.len() > 1 {
            let mut line = vec!["order".to_string(), sci(row.epsilon)];
            line.extend(row.orders.iter().map(|o| o.map(sci).unwrap_or_default()));
            writeln!(w, "{}", line.join(","))?;
        }
    }
    Ok(())
}

pub fn emit_table(table: &ConvergenceTable, path: &Path) -> io::Result<()> {
    let mut buf = Vec::new();
    write_table(table, &mut buf)?;
    fs::write(path, buf)
}

pub fn write_series(
    series: &LongTimeSeries,
    meta: &[(String, String)],
    w: &mut impl Write,
) -> io::Result<()> {
    header(w, "long-time", meta)?;
    writeln!(w, "# eps: {}", sci(series.epsilon))?;
    writeln!(w, "# tau: {}", sci(series.step))?;
    writeln!(w, "# stride: {}", series.stride)?;
    writeln!(w, "# realized_final_time: {}", sci(series.final_time))?;
    writeln!(w, "# reference_step: {}", sci(series.reference_step))?;
    if let Some(e) = series.reference_error {
        writeln!(w, "# reference_error: {}", sci(e))?;
    }
    writeln!(w, "{}", SERIES_COLUMNS.join(","))?;
    for r in &series.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.step,
            sci(r.time),
            sci(r.l2_error),
            sci(r.h1_error),
            sci(r.e_max),
            sci(r.mass_drift),
            sci(r.energy_drift)
        )?;
    }
    Ok(())
}

pub fn write_trajectory(
    trajectory: &Trajectory,
    meta: &[(String, String)],
    w: &mut impl Write,
) -> io::Result<()> {
    header(w, "run", meta)?;
    writeln!(w, "# stride: {}", trajectory.stride)?;
    if let Some(last) = trajectory.checkpoints.last() {
        writeln!(w, "# realized_final_time: {}", sci(last.time))?;
    }
    writeln!(w, "step,time,mass,energy,mass_drift,energy_drift")?;
    let Some(first) = trajectory.checkpoints.first() else {
        return Ok(());
    };
    for c in &trajectory.checkpoints {
        let mass_drift = if first.mass > 0.0 {
            (c.mass - first.mass).abs() / first.mass
        } else {
            0.0
        };
        writeln!(
            w,
            "{},{},{},{},{},{}",
            c.step,
            sci(c.time),
            sci(c.mass),
            sci(c.energy),
            sci(mass_drift),
            sci((c.energy - first.energy).abs())
        )?;
    }
    Ok(())
}
