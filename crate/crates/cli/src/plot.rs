//! Per-curve data files for plotting tools.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use relaysel::{Capacity, Policy};

use crate::error::{CliError, Result};
use crate::runner::{ResultRow, RowMode, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Throughput,
    PowerGain,
}

impl Metric {
    fn column(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Throughput => "throughput_bpcu",
            Metric::PowerGain => "power_gain_db",
        }
    }

    fn value(self, row: &ResultRow) -> Option<f64> {
        match self {
            Metric::Outage => Some(row.outage),
            Metric::Throughput => Some(row.throughput),
            Metric::PowerGain => row.power_gain_db,
        }
    }
}

/// A curve: every row sharing policy, K, L and mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeriesKey {
    pub policy: Policy,
    pub relays: usize,
    pub capacity: u64,
    pub mode: RowMode,
}

impl SeriesKey {
    fn new(policy: Policy, relays: usize, capacity: Capacity, mode: RowMode) -> Self {
        let capacity = match capacity {
            Capacity::Finite(l) => l as u64,
            Capacity::Unbounded => u64::MAX,
        };
        Self { policy, relays, capacity, mode }
    }

    fn of(row: &ResultRow) -> Self {
        Self::new(row.policy, row.relays, row.capacity, row.mode)
    }

    fn capacity_label(&self) -> String {
        if self.capacity == u64::MAX { "inf".into() } else { self.capacity.to_string() }
    }

    pub fn label(&self) -> String {
        format!("{} K={} L={} [{}]", self.policy, self.relays, self.capacity_label(), self.mode.name())
    }

    fn stem(&self) -> String {
        format!("{}_K{}_L{}_{}", self.policy, self.relays, self.capacity_label(), self.mode.name())
    }
}

/// Which metric to plot and which curves must be present. An empty
/// requirement list plots every curve in the table.
pub struct Figure {
    pub id: &'static str,
    pub metric: Metric,
    pub required: Vec<SeriesKey>,
}

pub const FIGURES: [&str; 6] = ["outage", "throughput", "power", "policy-outage", "relay-outage", "relay-power"];

pub fn figure(id: &str) -> Result<Figure> {
    let mc = RowMode::MonteCarlo;
    let by_relays = |l: u32, metric: Metric, id: &'static str| Figure {
        id,
        metric,
        required: (2..=4).map(|k| SeriesKey::new(Policy::MinPower, k, Capacity::Finite(l), mc)).collect(),
    };
    Ok(match id {
        "outage" => Figure { id: "outage", metric: Metric::Outage, required: vec![] },
        "throughput" => Figure { id: "throughput", metric: Metric::Throughput, required: vec![] },
        "power" => Figure { id: "power", metric: Metric::PowerGain, required: vec![] },
        "policy-outage" => {
            let mut required: Vec<SeriesKey> =
                [Policy::Sor, Policy::MaxMin, Policy::MaxMax, Policy::MaxLink, Policy::MinPower]
                    .into_iter()
                    .map(|p| SeriesKey::new(p, 2, Capacity::Finite(2), mc))
                    .collect();
            required.push(SeriesKey::new(Policy::MinPower, 2, Capacity::Finite(2), RowMode::Analytic));
            Figure { id: "policy-outage", metric: Metric::Outage, required }
        }
        "relay-outage" => by_relays(4, Metric::Outage, "relay-outage"),
        "relay-power" => by_relays(8, Metric::PowerGain, "relay-power"),
        _ => return Err(CliError::UnknownFigure(id.to_string(), FIGURES.join(", "))),
    })
}

fn field<T: std::str::FromStr>(path: &Path, line: u64, column: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        CliError::config(Some(line as usize), column, format!("{}: bad value `{value}`", path.display()))
    })
}

fn optional<T: std::str::FromStr>(path: &Path, line: u64, column: &str, value: &str) -> Result<Option<T>> {
    if value.is_empty() { Ok(None) } else { field(path, line, column, value).map(Some) }
}

/// Reads a results table written by [`crate::runner::write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let csv_err = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::config(Some(1), "header", format!("{}: unexpected columns", path.display())));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let r = record.map_err(csv_err)?;
        let line = r.position().map_or(0, |p| p.line());
        let mode = match &r[4] {
            "analytic" => RowMode::Analytic,
            "montecarlo" => RowMode::MonteCarlo,
            other => return Err(CliError::config(Some(line as usize), "mode", format!("bad value `{other}`"))),
        };
        let capacity = match &r[2] {
            "inf" => Capacity::Unbounded,
            v => Capacity::Finite(field(path, line, "L", v)?),
        };
        rows.push(ResultRow {
            policy: field(path, line, "policy", &r[0])?,
            relays: field(path, line, "K", &r[1])?,
            capacity,
            snr_db: field(path, line, "snr_db", &r[3])?,
            mode,
            outage: field(path, line, "outage", &r[5])?,
            outage_stderr: optional(path, line, "outage_stderr", &r[6])?,
            throughput: field(path, line, "throughput_bpcu", &r[7])?,
            power_gain_db: optional(path, line, "power_gain_db", &r[8])?,
            slots: optional(path, line, "slots", &r[9])?,
            seed: optional(path, line, "seed", &r[10])?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotFile {
    pub path: PathBuf,
    pub label: String,
    pub points: usize,
}

/// Writes one data file per curve plus `<figure>_manifest.txt` into `dir`.
/// Outage curves get a third `log10` column.
pub fn emit_plotdata(rows: &[ResultRow], figure_id: &str, dir: &Path) -> Result<Vec<PlotFile>> {
    let fig = figure(figure_id)?;
    let mut curves: BTreeMap<SeriesKey, Vec<(f64, f64)>> = BTreeMap::new();
    for row in rows {
        let key = SeriesKey::of(row);
        if !fig.required.is_empty() && !fig.required.contains(&key) {
            continue;
        }
        if let Some(y) = fig.metric.value(row) {
            curves.entry(key).or_default().push((row.snr_db, y));
        }
    }
    let missing: Vec<String> = if fig.required.is_empty() {
        if curves.is_empty() { vec![format!("any {} data", fig.metric.column())] } else { vec![] }
    } else {
        fig.required.iter().filter(|k| !curves.contains_key(k)).map(SeriesKey::label).collect()
    };
    if !missing.is_empty() {
        return Err(CliError::MissingSeries(missing));
    }

    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let log = fig.metric == Metric::Outage;
    let column = fig.metric.column();
    let columns = if log { format!("snr_db {column} log10_{column}") } else { format!("snr_db {column}") };
    let mut manifest = format!("# figure {}\n# file\tlabel\tcolumns\n", fig.id);
    let mut files = Vec::new();
    for (key, mut points) in curves {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut body = format!("# {}\n# {columns}\n", key.label());
        for &(x, y) in &points {
            if log {
                let _ = writeln!(body, "{x} {y} {}", y.log10());
            } else {
                let _ = writeln!(body, "{x} {y}");
            }
        }
        let name = format!("{}_{}.dat", fig.id, key.stem());
        let path = dir.join(&name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        let _ = writeln!(manifest, "{name}\t{}\t{columns}", key.label());
        files.push(PlotFile { path, label: key.label(), points: points.len() });
    }
    let path = dir.join(format!("{}_manifest.txt", fig.id));
    std::fs::write(&path, manifest).map_err(|e| CliError::io(&path, e))?;
    Ok(files)
}
