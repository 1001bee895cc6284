//! Phenomenological transmission spectra: Lorentzian plasmon peaks on a
//! classical floor, cut by notches at the Wood–Rayleigh wavelengths.

use serde::{Deserialize, Serialize};

use super::resonance::{resonance_wavelengths, wood_anomaly, Interface, ResonanceScan, SpectrumParams};
use super::bethe_transmission;
use crate::error::Result;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineConfig<T> {
    /// Constant non-resonant transmission.
    pub floor: T,
    /// Peak height contributed by a glass-side line of unit coupling.
    pub sp_peak: T,
    /// Air-side line height relative to glass-side lines.
    pub air_fraction: T,
    /// Fractional depth each Wood notch cuts into the plasmon lines, in `[0, 1]`.
    pub wood_fraction: T,
    /// Wood notch full width, metres.
    pub wood_width: T,
}

impl<T: Real> LineConfig<T> {
    /// Lines whose degenerate normal-incidence (±1,±1) peak reaches
    /// `peak_transmission` on top of the classical floor of 100 nm-radius
    /// holes at 813 nm.
    pub fn with_peak(peak_transmission: T) -> Self {
        let floor = bethe_transmission(T::lit(100e-9), T::lit(813e-9), T::lit(700e-9));
        Self {
            floor,
            // four degenerate orders with total coupling 2 at normal incidence
            sp_peak: (peak_transmission - floor) / T::lit(2.0),
            air_fraction: T::lit(0.5),
            wood_fraction: T::lit(0.6),
            wood_width: T::lit(4e-9),
        }
    }

    /// Brighter of the two arrays (5% peak).
    pub fn array_1() -> Self {
        Self::with_peak(T::lit(0.05))
    }

    /// Dimmer of the two arrays (3% peak).
    pub fn array_2() -> Self {
        Self::with_peak(T::lit(0.03))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint<T> {
    pub wavelength: T,
    pub transmission: T,
}

fn lorentzian<T: Real>(x: T, center: T, width: T) -> T {
    let h = width / T::lit(2.0);
    h * h / ((x - center) * (x - center) + h * h)
}

/// Samples the synthetic transmission spectrum at the given wavelengths.
///
/// `T(λ) = floor + [Σ_lines h·w·L(λ)] · Π_orders (1 − d·L_wood(λ))`, clamped
/// to `[0, 1]`, with `w` each line's polarization coupling and `d` the notch
/// depth.
pub fn transmission_spectrum<T: Real>(
    params: &SpectrumParams<T>,
    config: &LineConfig<T>,
    wavelengths: &[T],
) -> Result<(Vec<SpectrumPoint<T>>, ResonanceScan<T>)> {
    let scan = resonance_wavelengths(params)?;
    let mut notches = Vec::new();
    for &order in &params.orders {
        for interface in [Interface::Glass, Interface::Air] {
            if let Some(w) = wood_anomaly(params, order, interface) {
                notches.push(w);
            }
        }
    }
    let points = wavelengths
        .iter()
        .map(|&lambda| {
            let mut t = T::zero();
            for line in &scan.lines {
                let height = match line.interface {
                    Interface::Glass => config.sp_peak,
                    Interface::Air => config.sp_peak * config.air_fraction,
                };
                t = t + height * line.peak_amplitude * lorentzian(lambda, line.center, line.linewidth);
            }
            for &w in &notches {
                t = t * (T::one() - config.wood_fraction * lorentzian(lambda, w, config.wood_width));
            }
            let t = config.floor + t;
            SpectrumPoint { wavelength: lambda, transmission: t.max(T::zero()).min(T::one()) }
        })
        .collect();
    Ok((points, scan))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_plasmon_amplitude_is_flat() {
        let params = SpectrumParams::<f64>::hole_array_700nm();
        let mut cfg = LineConfig::array_1();
        cfg.sp_peak = 0.0;
        let grid: Vec<f64> = (0..300).map(|k| 500e-9 + k as f64 * 1.5e-9).collect();
        let (pts, _) = transmission_spectrum(&params, &cfg, &grid).unwrap();
        assert!(pts.iter().all(|p| p.transmission == cfg.floor));
    }

    #[test]
    fn transmission_is_bounded() {
        let params = SpectrumParams::<f64>::hole_array_700nm();
        let mut cfg = LineConfig::array_1();
        cfg.sp_peak = 3.0;
        let grid: Vec<f64> = (0..600).map(|k| 400e-9 + k as f64 * 1e-9).collect();
        let (pts, _) = transmission_spectrum(&params, &cfg, &grid).unwrap();
        assert!(pts.iter().all(|p| (0.0..=1.0).contains(&p.transmission)));
    }
}
