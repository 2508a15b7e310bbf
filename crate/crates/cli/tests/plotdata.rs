use relaysel_cli::{emit_plotdata, parse_config, read_csv, run_experiment, write_csv, CliError};

fn table(dir: &std::path::Path, text: &str) -> std::path::PathBuf {
    let rows = run_experiment(&parse_config(text).unwrap()).unwrap();
    let path = dir.join("table.csv");
    write_csv(&rows, std::fs::File::create(&path).unwrap()).unwrap();
    path
}

#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let text = "mode=both\npolicy=min-power,sor\nK=2\nL=2,4\nsnr=0:10:20\nslots=3000";
    let rows = run_experiment(&parse_config(text).unwrap()).unwrap();
    let path = table(dir.path(), text);
    assert_eq!(read_csv(&path).unwrap(), rows);
}

#[test]
fn outage_figure_has_log_column_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = table(dir.path(), "mode=both\npolicy=min-power,max-link\nK=2\nL=2\nsnr=0:10:20\nslots=3000");
    let out = dir.path().join("plots");
    let files = emit_plotdata(&read_csv(&path).unwrap(), "outage", &out).unwrap();
    assert_eq!(files.len(), 3);
    for f in &files {
        assert_eq!(f.points, 3);
        let body = std::fs::read_to_string(&f.path).unwrap();
        for line in body.lines().filter(|l| !l.starts_with('#')) {
            let cols: Vec<f64> = line.split(' ').map(|c| c.parse().unwrap()).collect();
            assert_eq!(cols.len(), 3);
            assert!((cols[2] - cols[1].log10()).abs() < 1e-12 || cols[1] == 0.0);
        }
    }
    let manifest = std::fs::read_to_string(out.join("outage_manifest.txt")).unwrap();
    assert_eq!(manifest.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert!(manifest.contains("min-power K=2 L=2 [analytic]"));
}

#[test]
fn power_figure_is_two_columns_without_analytic_curves() {
    let dir = tempfile::tempdir().unwrap();
    let path = table(dir.path(), "mode=both\nK=2,3,4\nL=8\nsnr=10:10:20\nslots=3000");
    let files = emit_plotdata(&read_csv(&path).unwrap(), "relay-power", dir.path()).unwrap();
    assert_eq!(files.len(), 3);
    let body = std::fs::read_to_string(&files[0].path).unwrap();
    assert!(body.lines().filter(|l| !l.starts_with('#')).all(|l| l.split(' ').count() == 2));
}

#[test]
fn missing_series_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let path = table(dir.path(), "policy=min-power,sor\nK=2\nL=2\nsnr=10\nslots=3000");
    let err = emit_plotdata(&read_csv(&path).unwrap(), "policy-outage", dir.path()).unwrap_err();
    let CliError::MissingSeries(missing) = &err else { panic!("{err:?}") };
    assert_eq!(missing.len(), 4, "{missing:?}");
    assert!(missing.iter().any(|m| m == "min-power K=2 L=2 [analytic]"));
    assert!(missing.iter().any(|m| m.starts_with("max-min K=2 L=2")));
    assert_eq!(err.exit_code(), 1);
    assert!(matches!(emit_plotdata(&[], "nonsense", dir.path()), Err(CliError::UnknownFigure(..))));
}
