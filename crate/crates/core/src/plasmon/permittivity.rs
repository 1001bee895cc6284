//! Metal permittivity: tabulated samples with linear interpolation, or a
//! Drude model.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

const GOLD_TABLE: &str = include_str!("../../data/gold_jc.txt");

/// Tabulated `ε(λ)` samples, sorted by wavelength (metres).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermittivityTable<T> {
    wavelengths: Vec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> PermittivityTable<T> {
    /// Parses three whitespace-separated columns: wavelength (nm), Re ε, Im ε.
    /// Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<(T, Complex<T>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::PermittivityParse {
                    line: i + 1,
                    reason: format!("expected 3 columns, found {}", fields.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::PermittivityParse { line: i + 1, reason: format!("`{s}`: {e}") })
            };
            let lambda = num(fields[0])?;
            if !(lambda > 0.0) {
                return Err(Error::PermittivityParse { line: i + 1, reason: "wavelength must be positive".into() });
            }
            rows.push((T::lit(lambda / 1e9), Complex::new(T::lit(num(fields[1])?), T::lit(num(fields[2])?))));
        }
        if rows.len() < 2 {
            return Err(Error::PermittivityParse { line: 0, reason: "need at least two samples".into() });
        }
        rows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite wavelengths"));
        if rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::PermittivityParse { line: 0, reason: "duplicate wavelength".into() });
        }
        Ok(Self { wavelengths: rows.iter().map(|r| r.0).collect(), values: rows.iter().map(|r| r.1).collect() })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::PermittivityParse { line: 0, reason: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    /// Bundled Johnson–Christy gold data (396–1216 nm).
    pub fn gold() -> Self {
        Self::parse(GOLD_TABLE).expect("bundled gold table parses")
    }

    /// Covered wavelength range in metres.
    pub fn range(&self) -> (T, T) {
        (self.wavelengths[0], *self.wavelengths.last().expect("non-empty"))
    }

    pub fn covers(&self, lo: T, hi: T) -> bool {
        let (a, b) = self.range();
        lo >= a && hi <= b
    }

    pub fn eval(&self, wavelength: T) -> Result<Complex<T>> {
        let (lo, hi) = self.range();
        if wavelength < lo || wavelength > hi || !wavelength.is_finite() {
            return Err(Error::PermittivityCoverage {
                wavelength_nm: wavelength.as_f64() * 1e9,
                min_nm: lo.as_f64() * 1e9,
                max_nm: hi.as_f64() * 1e9,
            });
        }
        let k = self.wavelengths.partition_point(|&w| w <= wavelength).clamp(1, self.wavelengths.len() - 1);
        let (x0, x1) = (self.wavelengths[k - 1], self.wavelengths[k]);
        let t = (wavelength - x0) / (x1 - x0);
        Ok(self.values[k - 1] * (T::one() - t) + self.values[k] * t)
    }
}

/// Free-electron permittivity `ε∞ − ωp² / (ω² + iγω)`, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drude<T> {
    pub eps_inf: T,
    pub plasma_ev: T,
    pub damping_ev: T,
}

impl<T: Real> Drude<T> {
    /// Common gold fit for the red/near-infrared.
    pub fn gold() -> Self {
        Self { eps_inf: T::lit(9.5), plasma_ev: T::lit(9.0), damping_ev: T::lit(0.067) }
    }

    pub fn eval(&self, wavelength: T) -> Complex<T> {
        let omega = T::lit(1239.841984e-9) / wavelength;
        let denom = Complex::new(omega * omega, self.damping_ev * omega);
        Complex::new(self.eps_inf, T::zero()) - Complex::new(self.plasma_ev * self.plasma_ev, T::zero()) / denom
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Permittivity<T> {
    Table(PermittivityTable<T>),
    Drude(Drude<T>),
    /// Table where covered, Drude outside it.
    TableWithDrude(PermittivityTable<T>, Drude<T>),
}

impl<T: Real> Permittivity<T> {
    pub fn gold() -> Self {
        Permittivity::Table(PermittivityTable::gold())
    }

    pub fn eval(&self, wavelength: T) -> Result<Complex<T>> {
        match self {
            Permittivity::Table(t) => t.eval(wavelength),
            Permittivity::Drude(d) => Ok(d.eval(wavelength)),
            Permittivity::TableWithDrude(t, d) => t.eval(wavelength).or_else(|_| Ok(d.eval(wavelength))),
        }
    }

    /// Whether `[lo, hi]` can be evaluated.
    pub fn covers(&self, lo: T, hi: T) -> bool {
        match self {
            Permittivity::Table(t) => t.covers(lo, hi),
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_near_810nm() {
        let eps = PermittivityTable::<f64>::gold().eval(810e-9).unwrap();
        assert!((eps.re + 24.9).abs() < 0.5, "{eps}");
        assert!((eps.im - 1.55).abs() < 0.2, "{eps}");
    }

    #[test]
    fn interpolation_hits_samples() {
        let t = PermittivityTable::<f64>::parse("# c\n500 -2 3\n600 -10 1\n").unwrap();
        assert_eq!(t.eval(500e-9).unwrap(), Complex::new(-2.0, 3.0));
        assert_eq!(t.eval(600e-9).unwrap(), Complex::new(-10.0, 1.0));
        let mid = t.eval(550e-9).unwrap();
        assert!((mid - Complex::new(-6.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let t = PermittivityTable::<f64>::gold();
        assert!(matches!(t.eval(1500e-9), Err(Error::PermittivityCoverage { .. })));
    }

    #[test]
    fn malformed_rows_report_line() {
        let err = PermittivityTable::<f64>::parse("500 -2\n").unwrap_err();
        assert!(matches!(err, Error::PermittivityParse { line: 1, .. }));
    }

    #[test]
    fn drude_roughly_matches_table_in_near_ir() {
        let table = PermittivityTable::<f64>::gold().eval(810e-9).unwrap();
        let drude = Drude::<f64>::gold().eval(810e-9);
        assert!((table.re - drude.re).abs() / table.re.abs() < 0.1);
    }
}
