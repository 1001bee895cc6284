//! Surface-plasmon dispersion, grating-coupled resonances, synthetic
//! transmission spectra and the quantities derived from them.

mod permittivity;
mod resonance;
mod spectrum;

pub use permittivity::{Drude, Permittivity, PermittivityTable};
pub use resonance::{
    resonance_wavelengths, wood_anomaly, Interface, Omitted, Polarization, ResonanceLine, ResonanceScan,
    SpectrumParams,
};
pub use spectrum::{transmission_spectrum, LineConfig, SpectrumPoint};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Flat-interface plasmon wavevector `k0·√(εm·εd/(εm+εd))`, rad/m.
///
/// Requires the bound-mode condition `Re εm < −εd`.
pub fn sp_wavevector<T: Real>(wavelength: T, eps_metal: Complex<T>, eps_dielectric: T) -> Result<Complex<T>> {
    if !(eps_dielectric > T::zero()) {
        return Err(Error::NotBound(format!("dielectric constant {eps_dielectric} must be positive")));
    }
    if !(eps_metal.re < -eps_dielectric) {
        return Err(Error::NotBound(format!(
            "Re(eps_metal) = {} is not below -eps_dielectric = {}",
            eps_metal.re, -eps_dielectric
        )));
    }
    let k0 = T::lit(2.0) * T::PI() / wavelength;
    let ratio = eps_metal * eps_dielectric / (eps_metal + Complex::new(eps_dielectric, T::zero()));
    let k = ratio.sqrt() * k0;
    Ok(if k.im < T::zero() { -k } else { k })
}

/// Real effective index `Re k_sp / k0`.
pub fn effective_index<T: Real>(wavelength: T, eps_metal: Complex<T>, eps_dielectric: T) -> Result<T> {
    let k0 = T::lit(2.0) * T::PI() / wavelength;
    Ok(sp_wavevector(wavelength, eps_metal, eps_dielectric)?.re / k0)
}

/// Classical small-hole transmission of a hole array: per-hole efficiency
/// `64 (k r)⁴ / (27 π²)` times the open-area fraction `π r² / a²`.
pub fn bethe_transmission<T: Real>(hole_radius: T, wavelength: T, lattice_constant: T) -> T {
    let kr = T::lit(2.0) * T::PI() * hole_radius / wavelength;
    let per_hole = T::lit(64.0) * kr.powi(4) / (T::lit(27.0) * T::PI() * T::PI());
    per_hole * T::PI() * hole_radius * hole_radius / (lattice_constant * lattice_constant)
}

/// Plasmon propagation length from a resonance linewidth:
/// `l = v/Δω ≈ λ0² / (2π·n_eff·Δλ)` with group velocity taken as phase velocity.
pub fn propagation_length<T: Real>(center: T, linewidth: T, effective_index: T) -> T {
    center * center / (T::lit(2.0) * T::PI() * effective_index * linewidth)
}

/// Absorption-limited linewidth of a plasmon on a smooth film: the `Δλ` for
/// which [`propagation_length`] equals the intensity decay length `1/(2 Im k_sp)`.
pub fn intrinsic_linewidth<T: Real>(wavelength: T, eps_metal: Complex<T>, eps_dielectric: T) -> Result<T> {
    let k = sp_wavevector(wavelength, eps_metal, eps_dielectric)?;
    let k0 = T::lit(2.0) * T::PI() / wavelength;
    let n_eff = k.re / k0;
    Ok(wavelength * wavelength * T::lit(2.0) * k.im / (T::lit(2.0) * T::PI() * n_eff))
}

/// Absorption-limited linewidth and effective index of a plasmon on a
/// smooth gold–air interface (bundled gold permittivity), for use with
/// [`propagation_length`].
pub fn smooth_gold_linewidth<T: Real>(wavelength: T) -> Result<(T, T)> {
    let eps = Permittivity::<T>::gold().eval(wavelength)?;
    let air = T::one();
    Ok((intrinsic_linewidth(wavelength, eps, air)?, effective_index(wavelength, eps, air)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_bound_regime_is_rejected() {
        let err = sp_wavevector(810e-9, Complex::new(-1.0, 0.1), 2.25).unwrap_err();
        assert!(matches!(err, Error::NotBound(_)));
        assert!(sp_wavevector(810e-9, Complex::new(-24.0, 1.5), -1.0).is_err());
    }

    #[test]
    fn bound_mode_lies_beyond_light_line() {
        let lambda = 810e-9;
        let k0 = 2.0 * std::f64::consts::PI / lambda;
        for eps in [Complex::new(-3.0, 0.2), Complex::new(-24.0, 1.5), Complex::new(-80.0, 5.0)] {
            let k = sp_wavevector(lambda, eps, 2.25).unwrap();
            assert!(k.re > k0 * 1.5);
            assert!(k.im >= 0.0);
        }
    }

    #[test]
    fn bethe_power_law() {
        let t1 = bethe_transmission(100e-9f64, 813e-9, 700e-9);
        let t2 = bethe_transmission(200e-9, 813e-9, 700e-9);
        assert!((t2 / t1 - 64.0).abs() < 1e-9);
        assert!(bethe_transmission(100e-9, 1.0, 700e-9) < 1e-20);
    }

    #[test]
    fn propagation_length_is_inverse_in_linewidth() {
        let a = propagation_length(810e-9f64, 25e-9, 1.57);
        let b = propagation_length(810e-9, 12.5e-9, 1.57);
        assert!((b / a - 2.0).abs() < 1e-12);
    }
}
