//! CSV tables with `#` metadata headers, and JSON reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::run::RunReport;
use crate::spectrum::SpectrumRun;
use crate::sweep::SweepTable;

fn header(out: &mut String, kind: &str, entries: &[(&str, String)]) {
    let _ = writeln!(out, "# plasment {} {kind}", env!("CARGO_PKG_VERSION"));
    for (k, v) in entries {
        let _ = writeln!(out, "# {k}: {v}");
    }
}

fn run_header(out: &mut String, kind: &str, report: &RunReport) {
    header(
        out,
        kind,
        &[
            ("scenario", report.scenario.clone()),
            ("seed", report.seed.to_string()),
            ("grid", format!("{}-D, {} points, extent {:e} m", report.grid.dim, report.grid.points, report.grid.extent)),
        ],
    );
}

/// `fixed_deg, angle_deg, probability, fitted_value` for every fringe scan.
pub fn fringes_csv(report: &RunReport) -> String {
    let mut out = String::new();
    run_header(&mut out, "fringes", report);
    for f in &report.fringes {
        let _ = writeln!(
            out,
            "# P2 = {} deg: visibility {} (density {}), residual {:e}",
            f.fixed_deg, f.fringe.visibility, f.density_visibility, f.fringe.residual
        );
    }
    out.push_str("fixed_deg,angle_deg,probability,fitted_value\n");
    for f in &report.fringes {
        for ((a, p), fit) in f.fringe.angles.iter().zip(&f.fringe.values).zip(&f.fringe.fitted) {
            let _ = writeln!(out, "{},{},{},{}", f.fixed_deg, round_deg(a.to_degrees()), p, fit);
        }
    }
    out
}

fn round_deg(d: f64) -> f64 {
    (d * 1e9).round() / 1e9
}

/// Per-setting CHSH counts, correlations, `S` and `σ_S`.
pub fn chsh_csv(report: &RunReport) -> String {
    let mut out = String::new();
    run_header(&mut out, "chsh", report);
    let m = &report.config.measure;
    let _ = writeln!(out, "# runs: {} x {} s, source rate {} 1/s", m.runs, m.duration, m.source_rate);
    let _ = writeln!(out, "# S (expected): {}", report.s);
    if let Some(c) = &report.counts {
        let _ = writeln!(out, "# S (counts): {} +/- {}", c.s, c.sigma_s);
        let _ = writeln!(out, "# E (counts): {:?}", c.correlations);
    }
    let _ = writeln!(out, "# E (expected): {:?}", report.chsh.correlations);
    out.push_str("pair,alpha_deg,beta_deg,probability,counts\n");
    let [a, a2, b, b2] = m.chsh_angles_deg;
    let names = ["a,b", "a,b'", "a',b", "a',b'"];
    for (pair, (x, y)) in [(a, b), (a, b2), (a2, b), (a2, b2)].into_iter().enumerate() {
        let settings = [(x, y), (x + 90.0, y + 90.0), (x, y + 90.0), (x + 90.0, y)];
        for (k, (al, be)) in settings.into_iter().enumerate() {
            let counts = report.counts.as_ref().map(|c| c.counts[pair][k].to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "\"{}\",{},{},{},{}",
                names[pair], al, be, report.chsh.probabilities[pair][k], counts
            );
        }
    }
    out
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::new();
    let first = &table.rows[0].report;
    run_header(&mut out, "sweep", first);
    let mono = |m: crate::sweep::Monotonicity| format!("non-increasing {}, non-decreasing {}", m.non_increasing, m.non_decreasing);
    let _ = writeln!(out, "# parameter: {}", table.parameter);
    let _ = writeln!(out, "# visibility_0: {}", mono(table.visibility_0));
    let _ = writeln!(out, "# visibility_45: {}", mono(table.visibility_45));
    out.push_str("value,visibility_0,visibility_45,overlap,s,sigma_s,coincidence_rate\n");
    for row in &table.rows {
        let r = &row.report;
        let sigma = r.sigma_s.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.value, r.visibility_0, r.visibility_45, r.overlap, r.s, sigma, r.rates.expected.coincidence
        );
    }
    out
}

/// One transmission column per (polarization, angle), resonances as trailing comments.
pub fn spectrum_csv(run: &SpectrumRun) -> String {
    let mut out = String::new();
    header(&mut out, "spectrum", &[("name", run.config.name.clone())]);
    out.push_str("wavelength_nm");
    for c in &run.curves {
        let _ = write!(out, ",T_{}_{}deg", pol_name(c.polarization), c.angle_deg);
    }
    out.push('\n');
    for (k, w) in run.wavelengths.iter().enumerate() {
        let _ = write!(out, "{}", round_nm(w * 1e9));
        for c in &run.curves {
            let _ = write!(out, ",{}", c.points[k].transmission);
        }
        out.push('\n');
    }
    out.push_str("# resonances: polarization,angle_deg,order,interface,sp_nm,center_nm,coupling\n");
    for c in &run.curves {
        for l in &c.scan.lines {
            let _ = writeln!(
                out,
                "# {},{},({} {}),{:?},{:.4},{:.4},{:.4}",
                pol_name(c.polarization),
                c.angle_deg,
                l.order.0,
                l.order.1,
                l.interface,
                l.sp_wavelength * 1e9,
                l.center * 1e9,
                l.peak_amplitude
            );
        }
        for o in &c.scan.omitted {
            let _ = writeln!(
                out,
                "# {},{},({} {}),{:?},omitted: {}",
                pol_name(c.polarization),
                c.angle_deg,
                o.order.0,
                o.order.1,
                o.interface,
                o.reason
            );
        }
    }
    out
}

fn round_nm(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn pol_name(p: plasment_core::plasmon::Polarization) -> &'static str {
    match p {
        plasment_core::plasmon::Polarization::AlongTiltAxis => "along",
        plasment_core::plasmon::Polarization::Orthogonal => "orthogonal",
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.into(), source })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
    Ok(path)
}
