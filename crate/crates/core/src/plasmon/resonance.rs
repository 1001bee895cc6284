//! Momentum matching of grating-coupled surface plasmons.
//!
//! An order `(i, j)` of the reciprocal lattice launches a plasmon on an
//! interface when `|k_∥ + i·G1 + j·G2| = Re k_sp(λ)`, with `k_∥` the
//! in-plane wavevector of the tilted incident beam.

use serde::{Deserialize, Serialize};

use super::permittivity::Permittivity;
use super::sp_wavevector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Metal–dielectric boundary on which the plasmon lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interface {
    Glass,
    Air,
}

/// Incident polarization relative to the tilt axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    /// Electric field along the tilt axis (s-polarized).
    AlongTiltAxis,
    /// Electric field in the plane of incidence (p-polarized).
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumParams<T> {
    /// Reciprocal basis vectors, rad/m.
    pub reciprocal_basis: [[T; 2]; 2],
    pub metal: Permittivity<T>,
    pub glass_eps: T,
    pub air_eps: T,
    pub orders: Vec<(i32, i32)>,
    /// In-plane azimuth of the tilt axis, radians.
    pub tilt_azimuth: T,
    /// Angle of incidence, radians.
    pub incidence: T,
    pub polarization: Polarization,
    /// Wavelength window searched for resonances, metres.
    pub band: (T, T),
    /// Resonance full width used for every line, metres.
    pub linewidth: T,
    /// Offset of the transmission maximum from the momentum-matched
    /// plasmon wavelength, metres (hole-induced red shift; calibrated).
    pub peak_redshift: T,
}

impl<T: Real> SpectrumParams<T> {
    /// Reciprocal basis of a direct lattice `a1, a2`.
    pub fn reciprocal_of(a1: [T; 2], a2: [T; 2]) -> Result<[[T; 2]; 2]> {
        let cross = a1[0] * a2[1] - a1[1] * a2[0];
        if cross.abs() < T::lit(1e-30) {
            return Err(Error::InvalidParameter { name: "lattice", reason: "basis vectors are dependent".into() });
        }
        let s = T::lit(2.0) * T::PI() / cross;
        Ok([[a2[1] * s, -a2[0] * s], [-a1[1] * s, a1[0] * s]])
    }

    /// Square lattice on glass/air with gold, tilt about the diagonal, the
    /// eight first-order couplings `|i|, |j| ≤ 1`, no calibrated red shift.
    pub fn square(lattice_constant: T) -> Self {
        let g = T::lit(2.0) * T::PI() / lattice_constant;
        let mut orders = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if (i, j) != (0, 0) {
                    orders.push((i, j));
                }
            }
        }
        Self {
            reciprocal_basis: [[g, T::zero()], [T::zero(), g]],
            metal: Permittivity::gold(),
            glass_eps: T::lit(2.25),
            air_eps: T::one(),
            orders,
            tilt_azimuth: T::FRAC_PI_4(),
            incidence: T::zero(),
            polarization: Polarization::Orthogonal,
            band: (T::lit(400e-9), T::lit(1000e-9)),
            linewidth: T::lit(25e-9),
            peak_redshift: T::zero(),
        }
    }

    /// 700 nm square array with the red shift that places the
    /// normal-incidence glass-side (±1,±1) transmission maximum at 810 nm.
    pub fn hole_array_700nm() -> Self {
        Self { peak_redshift: T::lit(FIG1_PEAK_REDSHIFT), ..Self::square(T::lit(700e-9)) }
    }

    pub fn with_incidence(&self, incidence: T, polarization: Polarization) -> Self {
        Self { incidence, polarization, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let [g1, g2] = self.reciprocal_basis;
        let cross = g1[0] * g2[1] - g1[1] * g2[0];
        let scale = (g1[0] * g1[0] + g1[1] * g1[1]) * (g2[0] * g2[0] + g2[1] * g2[1]);
        if !(scale > T::zero()) || cross.abs() <= T::lit(1e-9) * scale.sqrt() {
            return Err(Error::InvalidParameter {
                name: "reciprocal_basis",
                reason: "vectors must be nonzero and independent".into(),
            });
        }
        if self.orders.is_empty() {
            return Err(Error::InvalidParameter { name: "orders", reason: "at least one order required".into() });
        }
        if !(self.band.0 > T::zero() && self.band.1 > self.band.0) {
            return Err(Error::InvalidParameter { name: "band", reason: "need 0 < min < max".into() });
        }
        if !(self.linewidth > T::zero()) {
            return Err(Error::InvalidParameter { name: "linewidth", reason: "must be positive".into() });
        }
        Ok(())
    }

    pub fn dielectric(&self, interface: Interface) -> T {
        match interface {
            Interface::Glass => self.glass_eps,
            Interface::Air => self.air_eps,
        }
    }

    /// Reciprocal vector of an order.
    pub fn order_vector(&self, order: (i32, i32)) -> [T; 2] {
        let [g1, g2] = self.reciprocal_basis;
        let (i, j) = (T::lit(order.0 as f64), T::lit(order.1 as f64));
        [i * g1[0] + j * g2[0], i * g1[1] + j * g2[1]]
    }

    /// Unit vector of the plane of incidence (perpendicular to the tilt axis).
    pub fn incidence_direction(&self) -> [T; 2] {
        [-self.tilt_azimuth.sin(), self.tilt_azimuth.cos()]
    }

    /// In-plane direction of the incident electric field.
    pub fn field_direction(&self) -> [T; 2] {
        match self.polarization {
            Polarization::AlongTiltAxis => [self.tilt_azimuth.cos(), self.tilt_azimuth.sin()],
            Polarization::Orthogonal => self.incidence_direction(),
        }
    }

    /// In-plane wavevector `k∥ + G` for an order at `wavelength`.
    pub fn coupled_wavevector(&self, order: (i32, i32), wavelength: T) -> [T; 2] {
        let k0 = T::lit(2.0) * T::PI() / wavelength;
        let p = self.incidence_direction();
        let kp = k0 * self.incidence.sin();
        let g = self.order_vector(order);
        [g[0] + kp * p[0], g[1] + kp * p[1]]
    }

    /// `|ê·(k∥+G)|² / |k∥+G|²`: how strongly the incident field drives a
    /// plasmon travelling along the order's direction.
    pub fn coupling(&self, order: (i32, i32), wavelength: T) -> T {
        let k = self.coupled_wavevector(order, wavelength);
        let e = self.field_direction();
        let norm2 = k[0] * k[0] + k[1] * k[1];
        if norm2 == T::zero() {
            return T::zero();
        }
        let dot = k[0] * e[0] + k[1] * e[1];
        dot * dot / norm2
    }

    fn mismatch(&self, order: (i32, i32), interface: Interface, wavelength: T) -> Option<T> {
        let eps = self.metal.eval(wavelength).ok()?;
        let k = sp_wavevector(wavelength, eps, self.dielectric(interface)).ok()?;
        let v = self.coupled_wavevector(order, wavelength);
        Some(k.re - (v[0] * v[0] + v[1] * v[1]).sqrt())
    }
}

/// Calibrated red shift of the 700 nm array's transmission maximum, metres.
const FIG1_PEAK_REDSHIFT: f64 = 27.9264e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceLine<T> {
    pub order: (i32, i32),
    pub interface: Interface,
    /// Momentum-matched plasmon wavelength, metres.
    pub sp_wavelength: T,
    /// Transmission-maximum wavelength (`sp_wavelength + peak_redshift`), metres.
    pub center: T,
    pub linewidth: T,
    /// Polarization coupling weight in `[0, 1]`.
    pub peak_amplitude: T,
}

/// An order/interface pair with no resonance in the search band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Omitted {
    pub order: (i32, i32),
    pub interface: Interface,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceScan<T> {
    pub lines: Vec<ResonanceLine<T>>,
    pub omitted: Vec<Omitted>,
}

impl<T: Real> ResonanceScan<T> {
    pub fn find(&self, order: (i32, i32), interface: Interface) -> Option<&ResonanceLine<T>> {
        self.lines.iter().find(|l| l.order == order && l.interface == interface)
    }
}

/// Bisection on a bracketed sign change, to `tol` in wavelength.
fn bisect<T: Real, F: Fn(T) -> Option<T>>(f: F, mut lo: T, mut hi: T, tol: T) -> Option<T> {
    let mut f_lo = f(lo)?;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        let f_mid = f(mid)?;
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) / T::lit(2.0))
}

/// Momentum-matched resonances for every order on both interfaces.
///
/// The band is scanned in 1 nm steps for sign changes of
/// `Re k_sp(λ) − |k∥ + G|`, and the reddest crossing is refined by bisection
/// to 1e-6 nm. Orders without a crossing are listed in `omitted`.
pub fn resonance_wavelengths<T: Real>(params: &SpectrumParams<T>) -> Result<ResonanceScan<T>> {
    params.validate()?;
    let step = T::lit(1e-9);
    let tol = T::lit(1e-15);
    let (lo, hi) = params.band;
    let samples = ((hi - lo) / step).ceil().to_usize().unwrap_or(0) + 1;
    let mut lines = Vec::new();
    let mut omitted = Vec::new();
    for &order in &params.orders {
        for interface in [Interface::Glass, Interface::Air] {
            let f = |lambda: T| params.mismatch(order, interface, lambda);
            let mut root = None;
            let mut prev: Option<(T, T)> = None;
            for k in 0..samples {
                let lambda = (lo + step * T::from_usize_lossy(k)).min(hi);
                let value = f(lambda);
                if let (Some((pl, pv)), Some(v)) = (prev, value) {
                    if (pv < T::zero()) != (v < T::zero()) {
                        root = bisect(f, pl, lambda, tol).or(root);
                    }
                }
                prev = value.map(|v| (lambda, v));
            }
            match root {
                Some(sp) => lines.push(ResonanceLine {
                    order,
                    interface,
                    sp_wavelength: sp,
                    center: sp + params.peak_redshift,
                    linewidth: params.linewidth,
                    peak_amplitude: params.coupling(order, sp),
                }),
                None => omitted.push(Omitted {
                    order,
                    interface,
                    reason: format!(
                        "no momentum-matched plasmon between {:.0} and {:.0} nm",
                        lo.as_f64() * 1e9,
                        hi.as_f64() * 1e9
                    ),
                }),
            }
        }
    }
    Ok(ResonanceScan { lines, omitted })
}

/// Wood–Rayleigh wavelength of an order: the diffracted wave `k∥ + G`
/// grazes the interface, `|k∥ + G| = k0·√εd`.
pub fn wood_anomaly<T: Real>(params: &SpectrumParams<T>, order: (i32, i32), interface: Interface) -> Option<T> {
    // with u = λ/2π: |G|² u² + 2 sinθ (p·G) u + sin²θ − εd = 0
    let g = params.order_vector(order);
    let p = params.incidence_direction();
    let s = params.incidence.sin();
    let a = g[0] * g[0] + g[1] * g[1];
    if a == T::zero() {
        return None;
    }
    let b = T::lit(2.0) * s * (p[0] * g[0] + p[1] * g[1]);
    let c = s * s - params.dielectric(interface);
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return None;
    }
    let u = (-b + disc.sqrt()) / (T::lit(2.0) * a);
    (u > T::zero()).then(|| u * T::lit(2.0) * T::PI())
}
