//! Check records, CSV and plot-data artifacts, atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentKind;
use crate::error::{Error, Result};
use crate::filling::FillingEstimate;
use crate::groups::DistortionProfile;
use crate::growth::{GrowthSeries, PropagationSeries};

/// Tag for records about the tooling itself rather than a mathematical claim.
pub const PLUMBING: &str = "plumbing";

/// Every tag a record may carry.
pub fn registered_tags() -> Vec<&'static str> {
    let mut tags = vec![PLUMBING];
    for group in [
        crate::growth::TAGS,
        crate::action::TAGS,
        crate::filling::TAGS,
        crate::groups::TAGS,
        crate::zoo::appendix::TAGS,
    ] {
        tags.extend_from_slice(group);
    }
    tags
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub tag: String,
    pub values: serde_json::Value,
    /// Human-readable target the values are compared against.
    pub bound: String,
    pub passed: bool,
    pub runtime_ms: f64,
}

/// Series kept for CSV and plot output; not part of the JSON report.
#[derive(Clone, Debug, Default)]
pub struct SeriesData {
    pub growth: Vec<(GrowthSeries, Option<PropagationSeries>)>,
    pub filling: Vec<(String, FillingEstimate)>,
    pub distortion: Option<DistortionProfile>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub seed: u64,
    pub experiment: ExperimentKind,
    pub parallel: bool,
    pub records: Vec<CheckRecord>,
    #[serde(skip)]
    pub series: SeriesData,
}

impl Report {
    pub fn new(seed: u64, experiment: ExperimentKind, parallel: bool) -> Self {
        Report { seed, experiment, parallel, records: Vec::new(), series: SeriesData::default() }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Columns `n, gamma_n, error_bar[, dn]`.
pub fn growth_csv(series: &GrowthSeries, propagation: Option<&PropagationSeries>) -> String {
    let mut header = vec!["n", "gamma_n", "error_bar"];
    if propagation.is_some() {
        header.push("dn");
    }
    let rows = (0..series.len()).map(|i| {
        let mut row = vec![(i + 1).to_string(), series.values[i].to_string(), series.error_bars[i].to_string()];
        if let Some(p) = propagation {
            row.push(p.values[i].to_string());
        }
        row
    });
    csv_string(&header, rows)
}

/// Columns `s, u_lo, u_hi, w_lo, w_hi`.
pub fn filling_csv(est: &FillingEstimate) -> String {
    let rows = (0..est.s_grid.len()).map(|i| {
        vec![
            est.s_grid[i].to_string(),
            est.u_lo[i].to_string(),
            est.u_hi[i].to_string(),
            est.w_lo(i).to_string(),
            est.w_hi(i).to_string(),
        ]
    });
    csv_string(&["s", "u_lo", "u_hi", "w_lo", "w_hi"], rows)
}

fn kind_name(kind: &crate::groups::LengthKind) -> &'static str {
    match kind {
        crate::groups::LengthKind::Exact => "exact",
        crate::groups::LengthKind::Bound => "bound",
    }
}

/// Columns `n, exact_or_bound, kind, witness_word`.
pub fn distortion_csv(profile: &DistortionProfile) -> String {
    let rows = profile.entries.iter().map(|e| {
        vec![e.n.to_string(), e.length.to_string(), kind_name(&e.kind).to_string(), e.witness.clone()]
    });
    csv_string(&["n", "exact_or_bound", "kind", "witness_word"], rows)
}

fn dat(header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Gnuplot-ready whitespace-separated files for every series in the report.
/// Returns `(file name, contents)` pairs.
pub fn plot_data(report: &Report) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for (g, _) in &report.series.growth {
        let header = vec![
            format!("map {}: largest derivative norm of the n-th iterate and its inverse", g.map_id),
            format!("grid resolution {}, {} points", g.resolution, g.grid_points),
            "columns: n gamma_n".to_string(),
        ];
        let rows = g.values.iter().enumerate().map(|(i, v)| vec![(i + 1).to_string(), v.to_string()]);
        files.push((format!("growth_{}.dat", g.map_id), dat(&header, rows)));
    }
    for (name, est) in &report.series.filling {
        let header = vec![
            format!("{name}: certified bounds on the filling function u(s) and on w(s) = s u(s)"),
            "columns: s u_lo u_hi w_lo w_hi".to_string(),
        ];
        let rows = (0..est.s_grid.len()).map(|i| {
            vec![
                est.s_grid[i].to_string(),
                est.u_lo[i].to_string(),
                est.u_hi[i].to_string(),
                est.w_lo(i).to_string(),
                est.w_hi(i).to_string(),
            ]
        });
        files.push((format!("filling_{name}.dat"), dat(&header, rows)));
    }
    if let Some(p) = &report.series.distortion {
        let header = vec![
            format!("{}: word length of a^n, logarithmic in n", p.presentation),
            "kind 0 = exact ball length, 1 = length of a constructed word".to_string(),
            "columns: n length kind".to_string(),
        ];
        let rows = p.entries.iter().map(|e| {
            let kind = if e.kind == crate::groups::LengthKind::Exact { "0" } else { "1" };
            vec![e.n.to_string(), e.length.to_string(), kind.to_string()]
        });
        files.push(("distortion.dat".to_string(), dat(&header, rows)));
    }
    files
}

/// `report.json`, the CSV series and the plot data, as `(file name, contents)`.
pub fn artifact_files(report: &Report) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = vec![("report.json".to_string(), report.to_json())];
    for (g, p) in &report.series.growth {
        files.push((format!("growth_{}.csv", g.map_id), growth_csv(g, p.as_ref())));
    }
    for (name, est) in &report.series.filling {
        files.push((format!("filling_{name}.csv"), filling_csv(est)));
    }
    if let Some(p) = &report.series.distortion {
        files.push(("distortion.csv".to_string(), distortion_csv(p)));
    }
    files.extend(plot_data(report));
    files
}

/// Writes [`artifact_files`] into `dir`.
pub fn write_artifacts(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    let files = artifact_files(report);
    let mut written = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> GrowthSeries {
        GrowthSeries {
            map_id: "demo".into(),
            resolution: 4,
            grid_points: 4,
            values: vec![1.0, 2.5],
            error_bars: vec![0.0, f64::INFINITY],
            max_norm_residual: 0.0,
        }
    }

    #[test]
    fn growth_columns() {
        let csv = growth_csv(&series(), None);
        assert_eq!(csv, "n,gamma_n,error_bar\n1,1,0\n2,2.5,inf\n");
    }

    #[test]
    fn plot_files_have_headers() {
        let mut r = Report::new(1, ExperimentKind::Growth, false);
        r.series.growth.push((series(), None));
        let files = plot_data(&r);
        assert_eq!(files.len(), 1);
        let body = &files[0].1;
        assert!(body.starts_with("# "));
        assert!(body.ends_with("1 1\n2 2.5\n"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
    }

    #[test]
    fn tags_are_unique() {
        let tags = registered_tags();
        let mut sorted = tags.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), tags.len());
    }
}
