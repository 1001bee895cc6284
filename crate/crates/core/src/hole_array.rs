//! Spatially dispersive transfer function of a metal hole array.
//!
//! In the wavevector representation the array acts on each plane-wave
//! component `q` with
//!
//! ```text
//! T(q) = A · [ t0·I + t_sp · Σ_u L(q·u) · P(u) ]
//! ```
//!
//! where `P(u)` projects the polarization onto the surface-plasmon axis `u`
//! and `L(s) = 1 / (1 + s²l²)` is the Fourier transform of the two-sided
//! decay `exp(−|x|/l)` of a plasmon launched at a hole. In position space the
//! `t_sp` term spreads light into polarized lobes of extent `l` along each
//! axis, around the unpolarized spot left by the direct `t0` channel.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::elements::{ElementKind, ElementOp};
use crate::error::{Error, Result};
use crate::fourier::{transform_axis, AxisLayout};
use crate::grid::{Beam, Dimensionality, Representation, TransverseGrid};
use crate::jones::Jones;
use crate::plasmon::bethe_transmission;
use crate::scalar::{creal, czero, Real};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleArrayModel<T> {
    /// Lattice constant, metres.
    pub lattice_constant: T,
    /// Hole radius, metres (sets the classical transmission floor).
    pub hole_radius: T,
    /// Direct, polarization-isotropic amplitude `t0`.
    pub direct_amplitude: Complex<T>,
    /// Plasmon-mediated resonant amplitude `t_sp`.
    pub sp_amplitude: Complex<T>,
    /// In-plane propagation directions of the launched plasmons (unit vectors).
    pub sp_axes: Vec<[T; 2]>,
    /// Plasmon propagation length `l`, metres; `0` is the local limit.
    pub propagation_length: T,
    /// Per-polarization amplitude scalings applied after the array.
    pub anisotropy: [[T; 2]; 2],
    /// Linear retardance gradient between the polarizations along the first
    /// plasmon axis, rad/m, across the array (production non-uniformity).
    pub retardance_gradient: T,
    /// Transmission resonance center, metres.
    pub resonance_center: T,
    /// Transmission resonance full width, metres.
    pub resonance_width: T,
}

impl<T: Real> HoleArrayModel<T> {
    /// Square 700 nm array with 200 nm holes, resonant at 810 nm (25 nm wide),
    /// plasmons along both diagonals with `l = 4 µm`. The direct channel is
    /// fixed at the classical small-hole floor at 813 nm; the plasmon channel
    /// brings the normal-incidence peak to `peak_transmission`.
    pub fn square_diagonal(peak_transmission: T) -> Self {
        let lattice = T::lit(700e-9);
        let radius = T::lit(100e-9);
        let floor = bethe_transmission(radius, T::lit(813e-9), lattice).sqrt();
        let h = T::FRAC_1_SQRT_2();
        Self {
            lattice_constant: lattice,
            hole_radius: radius,
            direct_amplitude: creal(floor),
            sp_amplitude: creal(peak_transmission.sqrt() - floor),
            sp_axes: vec![[h, h], [h, -h]],
            propagation_length: T::lit(4e-6),
            anisotropy: [[T::one(), T::zero()], [T::zero(), T::one()]],
            retardance_gradient: T::zero(),
            resonance_center: T::lit(810e-9),
            resonance_width: T::lit(25e-9),
        }
    }

    /// Re-splits the amplitudes so that `t0 = ratio·t_sp` while the
    /// normal-incidence amplitude `t0 + t_sp` stays fixed. Negative ratios
    /// put the direct and plasmon channels in antiphase.
    pub fn with_amplitude_ratio(mut self, ratio: T) -> Result<Self> {
        let total = self.direct_amplitude + self.sp_amplitude;
        let denom = T::one() + ratio;
        if denom.abs() < T::lit(1e-12) {
            return Err(Error::InvalidParameter {
                name: "amplitude_ratio",
                reason: "ratio of -1 leaves no normal-incidence transmission".into(),
            });
        }
        self.sp_amplitude = total / denom;
        self.direct_amplitude = self.sp_amplitude * ratio;
        Ok(self)
    }

    /// Ratio `t0 / t_sp` (real part; both amplitudes are real in presets).
    pub fn amplitude_ratio(&self) -> T {
        (self.direct_amplitude / self.sp_amplitude).re
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.propagation_length >= T::zero()) || !self.propagation_length.is_finite() {
            return bad("propagation_length", format!("must be non-negative, got {}", self.propagation_length));
        }
        if !(self.lattice_constant > T::zero()) {
            return bad("lattice_constant", "must be positive".into());
        }
        if !(self.resonance_width > T::zero()) {
            return bad("resonance_width", "must be positive".into());
        }
        for u in &self.sp_axes {
            let n = (u[0] * u[0] + u[1] * u[1]).sqrt();
            if (n - T::one()).abs() > T::lit(1e-9) {
                return bad("sp_axes", format!("axis {:?} is not a unit vector", [u[0].as_f64(), u[1].as_f64()]));
            }
        }
        let peak = self.transfer([T::zero(), T::zero()]).operator_norm();
        if peak > T::one() + T::lit(1e-12) {
            return bad("sp_amplitude", format!("peak amplitude transmission {peak} exceeds 1"));
        }
        Ok(())
    }

    /// Plasmon lineshape `L(s) = 1/(1 + s²l²)`.
    pub fn lorentzian(&self, s: T) -> T {
        let x = s * self.propagation_length;
        T::one() / (T::one() + x * x)
    }

    /// Transfer matrix for transverse wavevector `q` (lab frame, rad/m).
    pub fn transfer(&self, q: [T; 2]) -> Jones<T> {
        let mut m = Jones::identity().scaled(self.direct_amplitude);
        for u in &self.sp_axes {
            let s = q[0] * u[0] + q[1] * u[1];
            let w = self.sp_amplitude * self.lorentzian(s);
            let p = Jones::from_real([[u[0] * u[0], u[0] * u[1]], [u[0] * u[1], u[1] * u[1]]]);
            for r in 0..2 {
                for c in 0..2 {
                    m.m[r][c] = m.m[r][c] + p.m[r][c] * w;
                }
            }
        }
        Jones::from_real(self.anisotropy) * m
    }

    /// Plasmon-only part of the transfer matrix (no direct channel, no anisotropy).
    pub fn sp_transfer(&self, q: [T; 2]) -> Jones<T> {
        let mut m = Jones::zero();
        for u in &self.sp_axes {
            let s = q[0] * u[0] + q[1] * u[1];
            let w = self.sp_amplitude * self.lorentzian(s);
            m.m[0][0] = m.m[0][0] + w * (u[0] * u[0]);
            m.m[0][1] = m.m[0][1] + w * (u[0] * u[1]);
            m.m[1][0] = m.m[1][0] + w * (u[0] * u[1]);
            m.m[1][1] = m.m[1][1] + w * (u[1] * u[1]);
        }
        m
    }

    /// Intensity transmission of a collimated, `H`-polarized beam.
    pub fn peak_transmission(&self) -> T {
        let t = self.transfer([T::zero(), T::zero()]);
        t.m[0][0].norm_sqr() + t.m[1][0].norm_sqr()
    }

    fn check_resonance(&self, wavelength: T) -> Result<()> {
        if (wavelength - self.resonance_center).abs() > self.resonance_width {
            return Err(Error::OffResonance {
                wavelength_nm: wavelength.as_f64() * 1e9,
                center_nm: self.resonance_center.as_f64() * 1e9,
                width_nm: self.resonance_width.as_f64() * 1e9,
            });
        }
        Ok(())
    }

    /// Position-representation retardance element, if the gradient is nonzero.
    pub fn retardance_op(&self, beam: Beam, grid: &TransverseGrid<T>) -> Result<Option<ElementOp<T>>> {
        if self.retardance_gradient == T::zero() {
            return Ok(None);
        }
        let u = self.sp_axes.first().copied().ok_or(Error::InvalidParameter {
            name: "sp_axes",
            reason: "a retardance gradient needs at least one plasmon axis".into(),
        })?;
        let axis = u[1].atan2(u[0]);
        let matrices = (0..grid.modes())
            .map(|m| {
                let x = grid.position(m);
                Jones::retarder(axis, self.retardance_gradient * (x[0] * u[0] + x[1] * u[1]))
            })
            .collect();
        ElementOp::sampled(beam, matrices, Representation::Position, *grid).map(Some)
    }

    /// Every element this array contributes to a beam, in order.
    pub fn element_ops(&self, beam: Beam, grid: &TransverseGrid<T>, wavelength: T) -> Result<Vec<ElementOp<T>>> {
        let mut ops = Vec::with_capacity(2);
        if let Some(op) = self.retardance_op(beam, grid)? {
            ops.push(op);
        }
        ops.push(hole_array(beam, self, grid, wavelength)?);
        Ok(ops)
    }

    /// Position-space plasmon kernel on a 2-D grid: the inverse transform of
    /// the `t_sp` term, one Jones matrix per position sample.
    pub fn near_field_kernel(&self, grid: &TransverseGrid<T>) -> Result<Vec<Jones<T>>> {
        if grid.dim() != Dimensionality::Two {
            return Err(Error::InvalidGrid("near-field kernel needs a 2-D grid".into()));
        }
        let n = grid.points();
        let modes = grid.modes();
        let mut fields = vec![vec![czero(); modes]; 4];
        for m in 0..modes {
            let t = self.sp_transfer(grid.wavevector(m));
            for (k, f) in fields.iter_mut().enumerate() {
                f[m] = t.m[k / 2][k % 2];
            }
        }
        for f in fields.iter_mut() {
            transform_axis(f, AxisLayout { outer: n, len: n, inner: 1 }, false);
            transform_axis(f, AxisLayout { outer: 1, len: n, inner: n }, false);
        }
        Ok((0..modes)
            .map(|m| Jones::new([[fields[0][m], fields[1][m]], [fields[2][m], fields[3][m]]]))
            .collect())
    }

    /// Near-field intensity behind the array for an unpolarized point source:
    /// the Frobenius norm² of the kernel at each position.
    pub fn point_source_intensity(&self, grid: &TransverseGrid<T>) -> Result<Vec<T>> {
        Ok(self
            .near_field_kernel(grid)?
            .iter()
            .map(|k| k.m.iter().flatten().fold(T::zero(), |acc, v| acc + v.norm_sqr()))
            .collect())
    }
}

/// The array as a mode-resolved element in the wavevector representation.
///
/// Rejects grids whose window is shorter than four propagation lengths and
/// wavelengths outside the array's transmission resonance.
pub fn hole_array<T: Real>(
    beam: Beam,
    model: &HoleArrayModel<T>,
    grid: &TransverseGrid<T>,
    wavelength: T,
) -> Result<ElementOp<T>> {
    model.validate()?;
    model.check_resonance(wavelength)?;
    let required = T::lit(4.0) * model.propagation_length;
    if grid.extent() < required {
        return Err(Error::KernelTruncation { window: grid.extent().as_f64(), required: required.as_f64() });
    }
    let matrices = (0..grid.modes()).map(|m| model.transfer(grid.wavevector(m))).collect();
    let op = ElementOp::sampled(beam, matrices, Representation::Wavevector, *grid)?;
    debug_assert!(matches!(op.kind, ElementKind::JonesSampled { .. }));
    Ok(op)
}
