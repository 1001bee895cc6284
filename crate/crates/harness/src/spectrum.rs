//! Transmission spectra of hole arrays for a set of incidence angles and
//! polarizations.

use std::path::Path;

use plasment_core::plasmon::{
    transmission_spectrum, LineConfig, Permittivity, PermittivityTable, Polarization, ResonanceScan, SpectrumPoint,
};
use serde::{Deserialize, Serialize};

use crate::config::read_file;
use crate::error::{HarnessError, Result};

pub const SPECTRUM_SCHEMA: &str = "plasment-spectrum/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub lattice_constant: f64,
    /// Normal-incidence peak transmission of the array.
    pub peak_transmission: f64,
    #[serde(default = "default_tilt")]
    pub tilt_azimuth_deg: f64,
    #[serde(default = "default_glass")]
    pub glass_eps: f64,
    #[serde(default = "default_air")]
    pub air_eps: f64,
    #[serde(default = "default_linewidth")]
    pub linewidth: f64,
    /// Offset of each transmission maximum from its plasmon wavelength;
    /// defaults to the value calibrated for the 700 nm array.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_redshift: Option<f64>,
    /// Three-column permittivity file (nm, Re ε, Im ε) relative to this
    /// file; the bundled gold table when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permittivity: Option<String>,
    /// Resonance search window `[min, max]`, metres.
    #[serde(default = "default_band")]
    pub band: [f64; 2],
    pub wavelengths: WavelengthRange,
    #[serde(default = "default_angles")]
    pub angles_deg: Vec<f64>,
    #[serde(default = "default_polarizations")]
    pub polarizations: Vec<Polarization>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavelengthRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl WavelengthRange {
    pub fn samples(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

fn default_tilt() -> f64 {
    45.0
}
fn default_glass() -> f64 {
    2.25
}
fn default_air() -> f64 {
    1.0
}
fn default_linewidth() -> f64 {
    25e-9
}
fn default_band() -> [f64; 2] {
    [400e-9, 1000e-9]
}
fn default_angles() -> Vec<f64> {
    vec![0.0]
}
fn default_polarizations() -> Vec<Polarization> {
    vec![Polarization::Orthogonal, Polarization::AlongTiltAxis]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve {
    pub polarization: Polarization,
    pub angle_deg: f64,
    pub points: Vec<SpectrumPoint<f64>>,
    pub scan: ResonanceScan<f64>,
}

impl SpectrumCurve {
    /// Wavelength of the highest sample.
    pub fn peak_wavelength(&self) -> f64 {
        self.points
            .iter()
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, p| if p.transmission > acc.1 { (p.wavelength, p.transmission) } else { acc })
            .0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRun {
    pub config: SpectrumConfig,
    pub wavelengths: Vec<f64>,
    pub curves: Vec<SpectrumCurve>,
}

pub fn parse_spectrum(text: &str, file: &str) -> Result<SpectrumConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| HarnessError::Parse { file: file.into(), message: e.to_string() })?;
    let config: SpectrumConfig = serde_path_to_error::deserialize(de).map_err(|e| HarnessError::Schema {
        file: file.into(),
        key: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if config.schema != SPECTRUM_SCHEMA {
        return Err(HarnessError::Config(format!(
            "schema `{}` is not supported (expected `{SPECTRUM_SCHEMA}`)",
            config.schema
        )));
    }
    let w = &config.wavelengths;
    if !(w.start > 0.0 && w.stop >= w.start && w.step > 0.0) {
        return Err(HarnessError::Config("wavelengths need 0 < start ≤ stop and step > 0".into()));
    }
    if !(config.peak_transmission > 0.0 && config.peak_transmission <= 1.0) {
        return Err(HarnessError::Config("peak_transmission must lie in (0, 1]".into()));
    }
    Ok(config)
}

pub fn load_spectrum(path: &Path) -> Result<(SpectrumConfig, Option<std::path::PathBuf>)> {
    let config = parse_spectrum(&read_file(path)?, &path.display().to_string())?;
    let dir = path.parent().map(Path::to_path_buf);
    Ok((config, dir))
}

fn metal(config: &SpectrumConfig, base_dir: Option<&Path>) -> Result<Permittivity<f64>> {
    Ok(match &config.permittivity {
        None => Permittivity::gold(),
        Some(file) => {
            let path = base_dir.map(|d| d.join(file)).unwrap_or_else(|| file.into());
            Permittivity::Table(PermittivityTable::from_file(&path)?)
        }
    })
}

/// Computes every requested (polarization, angle) curve.
pub fn spectrum_command(config: &SpectrumConfig, base_dir: Option<&Path>) -> Result<SpectrumRun> {
    let metal = metal(config, base_dir)?;
    let wavelengths = config.wavelengths.samples();
    let lo = wavelengths[0].min(config.band[0]);
    let hi = wavelengths[wavelengths.len() - 1].max(config.band[1]);
    if !metal.covers(lo, hi) {
        // report the first uncovered wavelength
        let missing = if metal.eval(lo).is_err() { lo } else { hi };
        metal.eval(missing)?;
    }
    let mut base = plasment_core::SpectrumParams::square(config.lattice_constant);
    base.metal = metal;
    base.glass_eps = config.glass_eps;
    base.air_eps = config.air_eps;
    base.tilt_azimuth = config.tilt_azimuth_deg.to_radians();
    base.linewidth = config.linewidth;
    base.band = (config.band[0], config.band[1]);
    base.peak_redshift =
        config.peak_redshift.unwrap_or_else(|| plasment_core::SpectrumParams::hole_array_700nm().peak_redshift);
    let lines = LineConfig::with_peak(config.peak_transmission);
    let mut curves = Vec::new();
    for &polarization in &config.polarizations {
        for &angle_deg in &config.angles_deg {
            let params = base.with_incidence(angle_deg.to_radians(), polarization);
            let (points, scan) = transmission_spectrum(&params, &lines, &wavelengths)?;
            curves.push(SpectrumCurve { polarization, angle_deg, points, scan });
        }
    }
    Ok(SpectrumRun { config: config.clone(), wavelengths, curves })
}
