//! Two-photon polarization-spatial amplitudes.
//!
//! A [`BiphotonState`] stores a complex amplitude for each polarization
//! channel (HH, HV, VH, VV) and each pair of transverse modes of the two
//! beams. Down-conversion populates only HV and VH; the other two channels
//! are carried because polarization-mixing elements feed them.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::density::PolarizationDensity;
use crate::error::{Error, Result};
use crate::fourier::{transform_axis, AxisLayout};
use crate::grid::{Beam, Dimensionality, Representation, TransverseGrid};
use crate::scalar::{cis, czero, Real};

/// Degenerate down-conversion wavelength used throughout (813 nm).
pub const DEGENERATE_WAVELENGTH: f64 = 813e-9;

/// Polarization channel `|p1 p2⟩`; the index is `2·p1 + p2` with H = 0, V = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    HH,
    HV,
    VH,
    VV,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::HH, Channel::HV, Channel::VH, Channel::VV];

    pub fn index(self) -> usize {
        match self {
            Channel::HH => 0,
            Channel::HV => 1,
            Channel::VH => 2,
            Channel::VV => 3,
        }
    }

    pub fn from_pols(p1: usize, p2: usize) -> Channel {
        Channel::ALL[2 * p1 + p2]
    }

    /// Polarization index (0 = H, 1 = V) carried by the given beam.
    pub fn pol(self, beam: Beam) -> usize {
        let i = self.index();
        match beam {
            Beam::One => i / 2,
            Beam::Two => i % 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::HH => "HH",
            Channel::HV => "HV",
            Channel::VH => "VH",
            Channel::VV => "VV",
        }
    }
}

/// Down-conversion source parameters at the plane where the state is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceParams<T> {
    /// Width of the sum-coordinate Gaussian (pump spot), metres.
    pub spot_size: T,
    /// Width of the difference-coordinate Gaussian (transverse coherence), metres.
    pub coherence_length: T,
    /// Relative phase θ of the VH channel, radians.
    pub phase: T,
    /// Magnitude ratio of the VH to the HV channel.
    pub imbalance: T,
}

impl<T: Real> SourceParams<T> {
    pub fn new(spot_size: T, coherence_length: T, phase: T) -> Self {
        Self { spot_size, coherence_length, phase, imbalance: T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: format!("must be positive and finite, got {v}") })
            }
        };
        positive("spot_size", self.spot_size)?;
        positive("coherence_length", self.coherence_length)?;
        positive("imbalance", self.imbalance)?;
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter { name: "phase", reason: "must be finite".into() });
        }
        Ok(())
    }
}

/// Complex amplitude tensor `[channel][mode of beam 1][mode of beam 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState<T> {
    grids: [TransverseGrid<T>; 2],
    reps: [Representation; 2],
    wavelength: T,
    amps: Vec<Complex<T>>,
}

impl<T: Real> BiphotonState<T> {
    /// Builds a state from raw amplitudes laid out as `[c][m1][m2]`.
    pub fn from_channels(
        grid1: TransverseGrid<T>,
        grid2: TransverseGrid<T>,
        reps: [Representation; 2],
        wavelength: T,
        amps: Vec<Complex<T>>,
    ) -> Result<Self> {
        let expected = 4 * grid1.modes() * grid2.modes();
        if amps.len() != expected {
            return Err(Error::GridMismatch(format!(
                "expected {expected} amplitudes for the grids, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter { name: "amplitudes", reason: "must be finite".into() });
        }
        if !(wavelength > T::zero()) {
            return Err(Error::InvalidParameter { name: "wavelength", reason: "must be positive".into() });
        }
        Ok(Self { grids: [grid1, grid2], reps, wavelength, amps })
    }

    pub fn grid(&self, beam: Beam) -> &TransverseGrid<T> {
        &self.grids[beam.index()]
    }

    pub fn representation(&self, beam: Beam) -> Representation {
        self.reps[beam.index()]
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn k0(&self) -> T {
        T::lit(2.0) * T::PI() / self.wavelength
    }

    pub fn modes(&self, beam: Beam) -> usize {
        self.grids[beam.index()].modes()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub(crate) fn set_grid(&mut self, beam: Beam, grid: TransverseGrid<T>, rep: Representation) {
        debug_assert_eq!(grid.modes(), self.grids[beam.index()].modes());
        self.grids[beam.index()] = grid;
        self.reps[beam.index()] = rep;
    }

    fn pair_modes(&self) -> usize {
        self.grids[0].modes() * self.grids[1].modes()
    }

    /// Amplitudes of one channel, indexed `m1 · M2 + m2`.
    pub fn channel(&self, c: Channel) -> &[Complex<T>] {
        let n = self.pair_modes();
        &self.amps[c.index() * n..(c.index() + 1) * n]
    }

    pub fn channel_mut(&mut self, c: Channel) -> &mut [Complex<T>] {
        let n = self.pair_modes();
        &mut self.amps[c.index() * n..(c.index() + 1) * n]
    }

    pub fn amplitude(&self, c: Channel, m1: usize, m2: usize) -> Complex<T> {
        self.channel(c)[m1 * self.grids[1].modes() + m2]
    }

    /// Total norm `N = Σ|A|²`; equals the pair throughput relative to a
    /// freshly constructed source.
    pub fn norm(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn channel_norm(&self, c: Channel) -> T {
        self.channel(c).iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(Error::ZeroNorm);
        }
        let s = T::one() / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a = *a * s);
        Ok(self)
    }

    fn axis_layouts(&self, beam: Beam) -> Vec<AxisLayout> {
        let m1 = self.grids[0].modes();
        let m2 = self.grids[1].modes();
        let g = &self.grids[beam.index()];
        let n = g.points();
        match (beam, g.dim()) {
            (Beam::One, Dimensionality::One) => vec![AxisLayout { outer: 4, len: n, inner: m2 }],
            (Beam::One, Dimensionality::Two) => vec![
                AxisLayout { outer: 4 * n, len: n, inner: m2 },
                AxisLayout { outer: 4, len: n, inner: n * m2 },
            ],
            (Beam::Two, Dimensionality::One) => vec![AxisLayout { outer: 4 * m1, len: n, inner: 1 }],
            (Beam::Two, Dimensionality::Two) => vec![
                AxisLayout { outer: 4 * m1 * n, len: n, inner: 1 },
                AxisLayout { outer: 4 * m1, len: n, inner: n },
            ],
        }
    }

    /// Switches one beam's representation in place (no-op if already there).
    pub fn convert(&mut self, beam: Beam, target: Representation) {
        if self.reps[beam.index()] == target {
            return;
        }
        let forward = target == Representation::Wavevector;
        for layout in self.axis_layouts(beam) {
            transform_axis(&mut self.amps, layout, forward);
        }
        self.reps[beam.index()] = target;
    }

    /// Copy of the state with one beam in the requested representation.
    pub fn to_representation(&self, beam: Beam, target: Representation) -> Self {
        let mut out = self.clone();
        out.convert(beam, target);
        out
    }

    /// Reduced polarization density matrix: the normalized Gram matrix of
    /// the four channel functions.
    pub fn reduce_polarization(&self) -> Result<PolarizationDensity<T>> {
        let norm = self.norm();
        if !(norm > T::zero()) {
            return Err(Error::ZeroNorm);
        }
        let mut rho = [[czero(); 4]; 4];
        for a in Channel::ALL {
            for b in Channel::ALL {
                if b.index() < a.index() {
                    continue;
                }
                let g = inner_product(self.channel(a), self.channel(b)) / norm;
                rho[a.index()][b.index()] = g;
                rho[b.index()][a.index()] = g.conj();
            }
        }
        Ok(PolarizationDensity::new(rho))
    }

    /// Normalized overlap `|⟨Φ_HV, Φ_VH⟩| / (‖Φ_HV‖·‖Φ_VH‖)` of the two
    /// cross-polarized channels.
    pub fn overlap_degree(&self) -> Result<T> {
        let hv = self.channel_norm(Channel::HV);
        let vh = self.channel_norm(Channel::VH);
        if !(hv > T::zero()) {
            return Err(Error::ZeroChannel("HV"));
        }
        if !(vh > T::zero()) {
            return Err(Error::ZeroChannel("VH"));
        }
        let o = inner_product(self.channel(Channel::HV), self.channel(Channel::VH)).norm() / (hv * vh).sqrt();
        Ok(o.min(T::one()))
    }
}

/// `Σ a_k · conj(b_k)` with a fixed summation order.
pub(crate) fn inner_product<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + *x * y.conj())
}

/// One-axis factor of the double-Gaussian two-photon amplitude.
fn double_gaussian<T: Real>(x1: T, x2: T, spot: T, coherence: T) -> T {
    let eight = T::lit(8.0);
    let s = x1 + x2;
    let d = x1 - x2;
    (-(s * s) / (eight * spot * spot) - (d * d) / (eight * coherence * coherence)).exp()
}

/// Down-converted pair state in the position representation.
///
/// `Φ_HV(x1, x2) ∝ exp(−(x1+x2)²/8w²)·exp(−(x1−x2)²/8σ_c²)` per transverse
/// axis, and `Φ_VH = imbalance·e^{iθ}·Φ_HV`. The result has unit norm.
pub fn make_spdc_state<T: Real>(
    grid1: TransverseGrid<T>,
    grid2: TransverseGrid<T>,
    source: &SourceParams<T>,
    wavelength: T,
) -> Result<BiphotonState<T>> {
    source.validate()?;
    if grid1.dim() != grid2.dim() {
        return Err(Error::GridMismatch("beams must share the same dimensionality".into()));
    }
    let limit = source.coherence_length / T::lit(2.0);
    for g in [&grid1, &grid2] {
        if g.spacing() > limit {
            return Err(Error::Resolution { spacing: g.spacing().as_f64(), limit: limit.as_f64() });
        }
    }

    let m1 = grid1.modes();
    let m2 = grid2.modes();
    let mut amps = vec![czero(); 4 * m1 * m2];
    let vh_factor = cis(source.phase) * source.imbalance;
    let (hv, vh) = (Channel::HV.index() * m1 * m2, Channel::VH.index() * m1 * m2);
    for a in 0..m1 {
        let (ax, ay) = grid1.axis_indices(a);
        for b in 0..m2 {
            let (bx, by) = grid2.axis_indices(b);
            let dx1 = grid1.centered(ax) * grid1.spacing();
            let dx2 = grid2.centered(bx) * grid2.spacing();
            let mut phi = double_gaussian(dx1, dx2, source.spot_size, source.coherence_length);
            if grid1.dim() == Dimensionality::Two {
                let dy1 = grid1.centered(ay) * grid1.spacing();
                let dy2 = grid2.centered(by) * grid2.spacing();
                phi = phi * double_gaussian(dy1, dy2, source.spot_size, source.coherence_length);
            }
            let k = a * m2 + b;
            amps[hv + k] = Complex::new(phi, T::zero());
            amps[vh + k] = vh_factor * phi;
        }
    }
    BiphotonState::from_channels(
        grid1,
        grid2,
        [Representation::Position, Representation::Position],
        wavelength,
        amps,
    )?
    .normalized()
}
