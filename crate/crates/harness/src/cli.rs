//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::load_scenario;
use crate::error::{HarnessError, Result};
use crate::output::{chsh_csv, fringes_csv, spectrum_csv, sweep_csv, to_json, write_file};
use crate::run::{run_scenario, Overrides};
use crate::spectrum::{load_spectrum, spectrum_command};
use crate::sweep::{calibrate, sweep};

#[derive(Debug, Parser)]
#[command(name = "plasment", version, about = "Entangled photon pairs through plasmonic hole arrays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for the count simulation (overrides the scenario).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Transverse dimensions per photon.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub grid_dim: Option<u8>,
    /// Grid points per transverse axis.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "plasment-out")]
    pub out: PathBuf,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            grid_dim: self.grid_dim.map(usize::from),
            grid_points: self.grid_points,
            runs: None,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one scenario.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run a scenario for each value of one parameter.
    Sweep {
        scenario: PathBuf,
        /// Dotted path of a scalar in the scenario file.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Transmission spectra of a hole array.
    Spectrum {
        params: PathBuf,
        #[arg(long, default_value = "plasment-out")]
        out: PathBuf,
    },
    /// Re-derive the scenario's calibrated knobs from their targets.
    Calibrate {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Simulated CHSH counting measurement.
    Chsh {
        scenario: PathBuf,
        /// Counting runs, a multiple of the 16 settings.
        #[arg(long, default_value_t = 16)]
        runs: usize,
        /// Seconds per run.
        #[arg(long, default_value_t = 100.0)]
        duration: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn file_label(path: &Path) -> String {
    path.display().to_string()
}

/// Executes a parsed command, returning the paths written.
pub fn execute(command: &Command) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    match command {
        Command::Run { scenario, common } => {
            let (mut s, _) = load_scenario(scenario)?;
            common.overrides().apply(&mut s)?;
            let report = run_scenario(&s)?;
            println!(
                "{}: V0 = {:.4}, V45 = {:.4}, O = {:.4} (±45°: {:.4}), S = {:.4}, R = {:.1} 1/s",
                report.scenario, report.visibility_0, report.visibility_45, report.overlap, report.overlap_45, report.s,
                report.rates.expected.coincidence
            );
            written.push(write_file(&common.out, "report.json", &to_json(&report))?);
            written.push(write_file(&common.out, "fringes.csv", &fringes_csv(&report))?);
            if report.counts.is_some() {
                written.push(write_file(&common.out, "chsh.csv", &chsh_csv(&report))?);
            }
        }
        Command::Sweep { scenario, param, values, common } => {
            let (_, value) = load_scenario(scenario)?;
            let table = sweep(&value, &file_label(scenario), param, values, &common.overrides())?;
            for row in &table.rows {
                println!(
                    "{} = {}: V0 = {:.4}, V45 = {:.4}",
                    param, row.value, row.report.visibility_0, row.report.visibility_45
                );
            }
            written.push(write_file(&common.out, "sweep.csv", &sweep_csv(&table))?);
            written.push(write_file(&common.out, "sweep.json", &to_json(&table))?);
        }
        Command::Spectrum { params, out } => {
            let (config, dir) = load_spectrum(params)?;
            let run = spectrum_command(&config, dir.as_deref())?;
            for c in &run.curves {
                println!("{:?} {} deg: peak at {:.1} nm", c.polarization, c.angle_deg, c.peak_wavelength() * 1e9);
            }
            written.push(write_file(out, "spectrum.csv", &spectrum_csv(&run))?);
        }
        Command::Calibrate { scenario, common } => {
            let (s, value) = load_scenario(scenario)?;
            if s.calibration.is_empty() {
                return Err(HarnessError::Config(format!("{} declares no calibration", file_label(scenario))));
            }
            let results = s
                .calibration
                .iter()
                .map(|cal| calibrate(&value, &file_label(scenario), cal, &common.overrides()))
                .collect::<Result<Vec<_>>>()?;
            for r in &results {
                println!(
                    "{} = {:.6e} gives {:?} = {:.5} (target {}, {} runs)",
                    r.knob, r.value, r.metric, r.achieved, r.target, r.evaluations
                );
            }
            written.push(write_file(&common.out, "calibration.json", &to_json(&results))?);
        }
        Command::Chsh { scenario, runs, duration, common } => {
            let (mut s, _) = load_scenario(scenario)?;
            s.measure.chsh = true;
            s.measure.duration = *duration;
            Overrides { runs: Some(*runs), ..common.overrides() }.apply(&mut s)?;
            let report = run_scenario(&s)?;
            if let Some(c) = &report.counts {
                println!("{}: S = {:.4} +/- {:.4} (expected {:.4})", report.scenario, c.s, c.sigma_s, report.s);
            }
            written.push(write_file(&common.out, "chsh.csv", &chsh_csv(&report))?);
            written.push(write_file(&common.out, "report.json", &to_json(&report))?);
        }
    }
    Ok(written)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
