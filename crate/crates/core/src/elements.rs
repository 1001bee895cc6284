//! Single-beam optical elements acting on a [`BiphotonState`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{Beam, Dimensionality, Representation, TransverseGrid};
use crate::jones::Jones;
use crate::scalar::{cis, cone, czero, Real};
use crate::state::BiphotonState;

/// Slack allowed on the passivity bound `‖J‖ ≤ 1`.
const PASSIVITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind<T> {
    /// Polarization matrix independent of the transverse mode.
    JonesUniform(Jones<T>),
    /// One polarization matrix per transverse mode, valid in `representation`
    /// on `grid`.
    JonesSampled {
        matrices: Vec<Jones<T>>,
        representation: Representation,
        grid: TransverseGrid<T>,
    },
    /// Fourier lens of the given focal length (front focal plane to back focal plane).
    LensTransform { focal_length: T },
    /// Hard-edged angular aperture; passes `|q| ≤ k0·half_angle`.
    Aperture { half_angle: T },
}

/// An element placed in one of the two beams.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementOp<T> {
    pub beam: Beam,
    pub kind: ElementKind<T>,
}

fn check_passive<T: Real>(j: &Jones<T>) -> Result<()> {
    let n = j.operator_norm();
    if n > T::one() + T::lit(PASSIVITY_SLACK) || !n.is_finite() {
        return Err(Error::InvalidParameter {
            name: "jones",
            reason: format!("operator norm {n} exceeds 1 (element would amplify)"),
        });
    }
    Ok(())
}

impl<T: Real> ElementOp<T> {
    /// Mode-independent element; rejects matrices that would amplify.
    pub fn jones(beam: Beam, matrix: Jones<T>) -> Result<Self> {
        check_passive(&matrix)?;
        Ok(Self { beam, kind: ElementKind::JonesUniform(matrix) })
    }

    /// Mode-resolved element; every matrix must be passive.
    pub fn sampled(
        beam: Beam,
        matrices: Vec<Jones<T>>,
        representation: Representation,
        grid: TransverseGrid<T>,
    ) -> Result<Self> {
        if matrices.len() != grid.modes() {
            return Err(Error::GridMismatch(format!(
                "{} matrices for a grid with {} modes",
                matrices.len(),
                grid.modes()
            )));
        }
        matrices.iter().try_for_each(check_passive)?;
        Ok(Self { beam, kind: ElementKind::JonesSampled { matrices, representation, grid } })
    }
}

/// Linear polarizer transmitting `(cos α, sin α)`.
pub fn polarizer<T: Real>(beam: Beam, angle: T) -> ElementOp<T> {
    ElementOp { beam, kind: ElementKind::JonesUniform(Jones::projector(angle)) }
}

/// Half-wave plate with its fast axis at `axis_angle`.
pub fn waveplate_half<T: Real>(beam: Beam, axis_angle: T) -> ElementOp<T> {
    let (s, c) = (T::lit(2.0) * axis_angle).sin_cos();
    ElementOp { beam, kind: ElementKind::JonesUniform(Jones::from_real([[c, s], [s, -c]])) }
}

/// Tilted compensator: phase `e^{iθ}` on the V component of one beam.
pub fn compensator_phase<T: Real>(beam: Beam, theta: T) -> ElementOp<T> {
    ElementOp {
        beam,
        kind: ElementKind::JonesUniform(Jones::new([[cone(), czero()], [czero(), cis(theta)]])),
    }
}

/// Pinhole selecting far-field angles up to `half_angle` (radians).
pub fn aperture<T: Real>(beam: Beam, half_angle: T) -> ElementOp<T> {
    ElementOp { beam, kind: ElementKind::Aperture { half_angle } }
}

/// Default pinhole: 5 mrad far-field diameter.
pub fn default_aperture<T: Real>(beam: Beam) -> ElementOp<T> {
    aperture(beam, T::lit(2.5e-3))
}

/// Fourier lens mapping `x' = q·f/k0`.
pub fn lens_transform<T: Real>(beam: Beam, focal_length: T) -> ElementOp<T> {
    ElementOp { beam, kind: ElementKind::LensTransform { focal_length } }
}

/// Applies `jones(mode)` to the polarization index of `beam` for every mode
/// of that beam.
pub(crate) fn apply_modewise<T: Real, F>(state: &mut BiphotonState<T>, beam: Beam, jones: F)
where
    F: Fn(usize) -> Jones<T>,
{
    let m1 = state.modes(Beam::One);
    let m2 = state.modes(Beam::Two);
    let pair = m1 * m2;
    let amps = state.amplitudes_mut();
    let own_modes = if beam == Beam::One { m1 } else { m2 };
    let matrices: Vec<Jones<T>> = (0..own_modes).map(jones).collect();
    for a in 0..m1 {
        for b in 0..m2 {
            let k = a * m2 + b;
            let j = &matrices[if beam == Beam::One { a } else { b }];
            for spectator in 0..2 {
                // channel index 2·p1 + p2
                let (c0, c1) = match beam {
                    Beam::One => (spectator, 2 + spectator),
                    Beam::Two => (2 * spectator, 2 * spectator + 1),
                };
                let v = j.apply([amps[c0 * pair + k], amps[c1 * pair + k]]);
                amps[c0 * pair + k] = v[0];
                amps[c1 * pair + k] = v[1];
            }
        }
    }
}

fn apply_mask<T: Real>(state: &mut BiphotonState<T>, beam: Beam, keep: &[bool]) {
    let m1 = state.modes(Beam::One);
    let m2 = state.modes(Beam::Two);
    let pair = m1 * m2;
    let amps = state.amplitudes_mut();
    for c in 0..4 {
        for a in 0..m1 {
            for b in 0..m2 {
                let own = if beam == Beam::One { a } else { b };
                if !keep[own] {
                    amps[c * pair + a * m2 + b] = Complex::new(T::zero(), T::zero());
                }
            }
        }
    }
}

/// Applies one element, converting the beam's representation when the
/// element requires it. The norm never increases.
pub fn apply_element<T: Real>(state: &BiphotonState<T>, op: &ElementOp<T>) -> Result<BiphotonState<T>> {
    let mut out = state.clone();
    apply_element_in_place(&mut out, op)?;
    Ok(out)
}

pub fn apply_element_in_place<T: Real>(state: &mut BiphotonState<T>, op: &ElementOp<T>) -> Result<()> {
    let beam = op.beam;
    match &op.kind {
        ElementKind::JonesUniform(j) => {
            let j = *j;
            apply_modewise(state, beam, |_| j);
        }
        ElementKind::JonesSampled { matrices, representation, grid } => {
            if !grid.same_sampling(state.grid(beam)) {
                return Err(Error::GridMismatch(format!(
                    "element sampled on {} points over {:.3e} m, beam has {} points over {:.3e} m",
                    grid.points(),
                    grid.extent().as_f64(),
                    state.grid(beam).points(),
                    state.grid(beam).extent().as_f64()
                )));
            }
            state.convert(beam, *representation);
            apply_modewise(state, beam, |m| matrices[m]);
        }
        ElementKind::Aperture { half_angle } => {
            if !(*half_angle >= T::zero()) {
                return Err(Error::InvalidParameter { name: "half_angle", reason: "must be non-negative".into() });
            }
            state.convert(beam, Representation::Wavevector);
            let q_max = state.k0() * *half_angle;
            let g = *state.grid(beam);
            let keep: Vec<bool> = (0..g.modes())
                .map(|m| {
                    let q = g.wavevector(m);
                    (q[0] * q[0] + q[1] * q[1]).sqrt() <= q_max
                })
                .collect();
            apply_mask(state, beam, &keep);
        }
        ElementKind::LensTransform { focal_length } => {
            if !(*focal_length > T::zero()) {
                return Err(Error::InvalidParameter { name: "focal_length", reason: "must be positive".into() });
            }
            state.convert(beam, Representation::Position);
            state.convert(beam, Representation::Wavevector);
            let g = *state.grid(beam);
            // back-focal-plane sampling: dx' = dq·f/k0, so extent' = n·λ·f / extent
            let n = T::from_usize_lossy(g.points());
            let extent = n * state.wavelength() * *focal_length / g.extent();
            let relabelled = match g.dim() {
                Dimensionality::One => TransverseGrid::with_axis(g.points(), extent, g.dim(), g.axis_azimuth())?,
                Dimensionality::Two => g.with_extent(extent)?,
            };
            state.set_grid(beam, relabelled, Representation::Position);
        }
    }
    Ok(())
}

/// Applies a chain of elements in order.
pub fn apply_chain<T: Real>(state: &BiphotonState<T>, ops: &[ElementOp<T>]) -> Result<BiphotonState<T>> {
    let mut out = state.clone();
    for op in ops {
        apply_element_in_place(&mut out, op)?;
    }
    Ok(out)
}
