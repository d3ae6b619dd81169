use std::fs;
use std::path::Path;

use nlde_core::io::{parse_config, run_study, ConfigError, RunError, SERIES_COLUMNS};

fn run(text: &str, dir: &Path) -> Result<String, RunError> {
    let config = parse_config(text).unwrap();
    let mut summary = Vec::new();
    run_study(&config, dir, &mut summary)?;
    Ok(String::from_utf8(summary).unwrap())
}

fn body(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn minimal_long_time_config_gets_defaults() {
    let c = parse_config(
        "study = \"long-time\"\ndata = \"accuracy-1d\"\nM = 64\ntau = 0.01\neps = [0.5, 0.25]\nT = 1.0\n",
    )
    .unwrap();
    assert_eq!((c.lambda1, c.lambda2), (0.0, 1.0));
    assert_eq!(c.scheme.to_string(), "strang");
    let echoed = c.to_toml();
    assert!(echoed.contains("lambda2 = 1.0"), "{echoed}");
    assert_eq!(parse_config(&echoed).unwrap(), c);
}

#[test]
fn config_errors_name_the_key() {
    let e = parse_config("study = \"long-time\"\nM = 64\ntau = 0.01\neps = [1.5]\n").unwrap_err();
    assert!(e.to_string().contains("eps") && e.to_string().contains("out of (0,1]"), "{e}");

    let e = parse_config("study = \"run\"\ntau = 0.01\ntau = 0.02\neps = 0.5\n").unwrap_err();
    assert!(matches!(e, ConfigError::Syntax(_)));
    assert!(e.to_string().contains("tau"), "{e}");

    let e = parse_config("study = \"run\"\ntua = 0.01\neps = 0.5\n").unwrap_err();
    assert!(e.to_string().contains("tua"), "{e}");
}

#[test]
fn zero_horizon_run_writes_initial_observables_only() {
    let dir = tempfile::tempdir().unwrap();
    let summary = run("study = \"run\"\nM = 32\ntau = 0.01\neps = 0.5\nT = 0.0\n", dir.path()).unwrap();
    assert!(summary.contains("steps=0"), "{summary}");
    let rows = body(&dir.path().join("run.csv"));
    assert_eq!(rows.len(), 2, "{rows:?}");
    assert!(rows[1].starts_with("0,0.00000e0,"));
    assert!(dir.path().join("effective-config.toml").exists());
}

#[test]
fn reference_divisibility_is_reported_with_both_grids() {
    let e = parse_config("study = \"temporal\"\nM = 64\nM_ref = 96\ntau = [0.02, 0.01]\neps = 1.0\n").unwrap_err();
    let msg = e.to_string();
    assert!(msg.contains("M = 64") && msg.contains("M_ref = 96"), "{msg}");
}

#[test]
fn long_time_series_have_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let text = "study = \"long-time\"\nM = 16\ntau = 0.05\neps = [1.0, 0.5]\nT = 0.5\nstride = 2\n";
    let summary = run(text, dir.path()).unwrap();
    assert_eq!(summary.lines().count(), 2, "{summary}");
    let series = body(&dir.path().join("long-time_eps=5.00000e-1.csv"));
    assert_eq!(series[0], SERIES_COLUMNS.join(","));
    // 40 steps to t = 2, every second step plus the initial state
    assert_eq!(series.len(), 1 + 21);
    let table = body(&dir.path().join("long-time.csv"));
    assert_eq!(table.len(), 3);
}

#[test]
fn reruns_differ_only_in_the_timestamp() {
    let text = "study = \"temporal\"\nM = 16\ntau = [0.1, 0.05]\neps = [1.0, 0.5]\nT = 0.5\n";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(text, a.path()).unwrap();
    run(text, b.path()).unwrap();
    let strip = |p: &Path| -> Vec<String> {
        fs::read_to_string(p.join("temporal.csv"))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# generated_unix"))
            .map(String::from)
            .collect()
    };
    assert_eq!(strip(a.path()), strip(b.path()));
    let rows = body(&a.path().join("temporal.csv"));
    assert_eq!(rows[0], "row,eps,tau=1.00000e-1,tau=5.00000e-2");
    assert_eq!(rows.len(), 1 + 4);
}

#[test]
fn oscillatory_table_layout() {
    let dir = tempfile::tempdir().unwrap();
    run("study = \"oscillatory-table\"\nM = 16\n", dir.path()).unwrap();
    let path = dir.path().join("oscillatory-table.csv");
    let text = fs::read_to_string(&path).unwrap();
    for key in ["# scheme: strang", "# lambda1: -1", "# lambda2: 0", "# T: 1", "# version:"] {
        assert!(text.contains(key), "missing {key}");
    }
    let rows = body(&path);
    assert_eq!(rows.len(), 1 + 10);
    let kinds: Vec<&str> = rows[1..].iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(kinds, ["error", "order"].repeat(5));
    assert!(rows[1].starts_with("error,1.00000e0,1.2"), "{}", rows[1]);
    assert!(rows[2].starts_with("order,1.00000e0,,2."), "{}", rows[2]);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let config = parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(parse_config(&config.to_toml()).unwrap(), config);
        seen += 1;
    }
    assert!(seen >= 6);
}
