//! CSV output for plotting.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use zk_core::propagator::DecayScanResult;

use crate::report::{RunReport, ScanRecord};

fn io_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn num(v: f64) -> String {
    // Shortest round-trip form.
    format!("{v:?}")
}

/// Two columns `(t, value)`, sorted by `t`.
pub fn write_samples(path: &Path, scan: &ScanRecord) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(["t", "value"]).map_err(io_err)?;
    let mut rows = scan.samples.clone();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (t, v) in rows {
        w.write_record([num(t), num(v)]).map_err(io_err)?;
    }
    w.flush()
}

/// `(t, measured, fit, target)`: the fitted power law and a line of the
/// target slope through it, at the sample times.
pub fn write_overlay(path: &Path, scan: &ScanRecord) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(["t", "measured", "fit", "target"]).map_err(io_err)?;
    let mut rows = scan.samples.clone();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (t, v) in rows {
        w.write_record([num(t), num(v), num(scan.fit_line(t)), num(scan.target_line(t))]).map_err(io_err)?;
    }
    w.flush()
}

/// Per-scan samples and fit overlays for every scan in the report, under
/// `dir/plots`.
pub fn emit_plot_data(report: &RunReport, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let plots = dir.join("plots");
    fs::create_dir_all(&plots)?;
    let mut out = Vec::new();
    for scan in &report.scans {
        let a = plots.join(format!("{}.csv", scan.name));
        write_samples(&a, scan)?;
        let b = plots.join(format!("{}_fit.csv", scan.name));
        write_overlay(&b, scan)?;
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// The full scan table: `t, norm, target_exponent, fitted_exponent,
/// wrap_time`, optionally `tail_estimate, empirical_constant`, and a footer
/// row labelled `fit` carrying the prefactor in the `norm` column.
pub fn write_scan_table(path: &Path, scan: &DecayScanResult, extended: bool) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    let mut header = vec!["t", "norm", "target_exponent", "fitted_exponent", "wrap_time"];
    if extended {
        header.extend(["tail_estimate", "empirical_constant"]);
    }
    w.write_record(&header).map_err(io_err)?;
    let opt = |v: Option<&f64>| v.map(|x| num(*x)).unwrap_or_default();
    for (i, &(t, v)) in scan.samples.iter().enumerate() {
        let mut row = vec![num(t), num(v), num(scan.target_exponent), num(scan.fitted_exponent), num(scan.wrap_time)];
        if extended {
            row.push(opt(scan.tail_estimates.get(i)));
            row.push(opt(scan.empirical_constants.get(i)));
        }
        w.write_record(&row).map_err(io_err)?;
    }
    let mut footer = vec![
        "fit".to_string(),
        num(scan.prefactor),
        num(scan.target_exponent),
        num(scan.fitted_exponent),
        num(scan.wrap_time),
    ];
    if extended {
        footer.extend([String::new(), String::new()]);
    }
    w.write_record(&footer).map_err(io_err)?;
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan(samples: Vec<(f64, f64)>) -> ScanRecord {
        ScanRecord {
            name: "s".into(),
            norm: "n".into(),
            samples,
            target_exponent: -1.0,
            fitted_exponent: -1.5,
            prefactor: 3.0,
            fit_window: (1.0, 8.0),
            wrap_time: 8.0,
            residual: 0.0,
        }
    }

    #[test]
    fn samples_are_sorted_and_empty_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_samples(&p, &scan(vec![(4.0, 0.2), (1.0, 1.0), (2.0, 0.5)])).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text, "t,value\n1.0,1.0\n2.0,0.5\n4.0,0.2\n");
        write_samples(&p, &scan(vec![])).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "t,value\n");
    }

    #[test]
    fn overlay_reproduces_the_fit() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.csv");
        let s = scan(vec![(1.0, 3.0), (4.0, 0.4)]);
        write_overlay(&p, &s).unwrap();
        let mut r = csv::Reader::from_path(&p).unwrap();
        for row in r.records() {
            let row = row.unwrap();
            let t: f64 = row[0].parse().unwrap();
            let fit: f64 = row[2].parse().unwrap();
            assert!((fit - 3.0 * t.powf(-1.5)).abs() <= 1e-15 * fit);
        }
    }
}
