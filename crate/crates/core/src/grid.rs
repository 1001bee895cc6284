//! Transverse sampling grids for a single photon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Which of the two beams an element or measurement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Beam {
    One,
    Two,
}

impl Beam {
    pub fn index(self) -> usize {
        match self {
            Beam::One => 0,
            Beam::Two => 1,
        }
    }

    pub fn other(self) -> Beam {
        match self {
            Beam::One => Beam::Two,
            Beam::Two => Beam::One,
        }
    }
}

/// Representation a beam's amplitudes are currently stored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Position,
    Wavevector,
}

/// Number of transverse dimensions sampled per photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimensionality {
    One,
    Two,
}

impl Dimensionality {
    pub fn count(self) -> usize {
        match self {
            Dimensionality::One => 1,
            Dimensionality::Two => 2,
        }
    }

    pub fn from_count(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Dimensionality::One),
            2 => Ok(Dimensionality::Two),
            other => Err(Error::InvalidGrid(format!("dimensionality must be 1 or 2, got {other}"))),
        }
    }
}

/// Symmetric sampling of the transverse plane of one photon.
///
/// Positions are `x_j = (j - n/2)·dx` with `dx = extent / n`; the conjugate
/// wavevectors are `q_m = (m - n/2)·dq` with `dq = 2π / extent`. In the 1-D
/// mode the single sampled axis points along `axis_azimuth` in the transverse
/// plane, so that anisotropic elements still see a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransverseGrid<T> {
    points: usize,
    extent: T,
    dim: Dimensionality,
    axis_azimuth: T,
}

impl<T: Real> TransverseGrid<T> {
    pub fn new(points: usize, extent: T, dim: Dimensionality) -> Result<Self> {
        Self::with_axis(points, extent, dim, T::FRAC_PI_4())
    }

    /// Like [`TransverseGrid::new`] with an explicit azimuth of the 1-D axis.
    pub fn with_axis(points: usize, extent: T, dim: Dimensionality, axis_azimuth: T) -> Result<Self> {
        if points < 2 || points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 2, got {points}"
            )));
        }
        if !(extent > T::zero()) || !extent.is_finite() {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {extent}")));
        }
        if !axis_azimuth.is_finite() {
            return Err(Error::InvalidGrid("axis azimuth must be finite".into()));
        }
        Ok(Self { points, extent, dim, axis_azimuth })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn extent(&self) -> T {
        self.extent
    }

    pub fn dim(&self) -> Dimensionality {
        self.dim
    }

    pub fn axis_azimuth(&self) -> T {
        self.axis_azimuth
    }

    /// Total number of modes (`points` or `points²`).
    pub fn modes(&self) -> usize {
        self.points.pow(self.dim.count() as u32)
    }

    pub fn spacing(&self) -> T {
        self.extent / T::from_usize_lossy(self.points)
    }

    pub fn wavevector_spacing(&self) -> T {
        T::lit(2.0) * T::PI() / self.extent
    }

    /// Signed sample offset `j - n/2` along one axis.
    pub fn centered(&self, j: usize) -> T {
        T::from_usize_lossy(j) - T::from_usize_lossy(self.points / 2)
    }

    /// Per-axis indices of a mode: `(ix, iy)`; `iy` is 0 in 1-D.
    pub fn axis_indices(&self, mode: usize) -> (usize, usize) {
        match self.dim {
            Dimensionality::One => (mode, 0),
            Dimensionality::Two => (mode % self.points, mode / self.points),
        }
    }

    fn embed(&self, mode: usize, step: T) -> [T; 2] {
        let (ix, iy) = self.axis_indices(mode);
        match self.dim {
            Dimensionality::One => {
                let s = self.centered(ix) * step;
                [s * self.axis_azimuth.cos(), s * self.axis_azimuth.sin()]
            }
            Dimensionality::Two => [self.centered(ix) * step, self.centered(iy) * step],
        }
    }

    /// Transverse position of a mode as a 2-vector in the lab frame.
    pub fn position(&self, mode: usize) -> [T; 2] {
        self.embed(mode, self.spacing())
    }

    /// Transverse wavevector of a mode as a 2-vector in the lab frame.
    pub fn wavevector(&self, mode: usize) -> [T; 2] {
        self.embed(mode, self.wavevector_spacing())
    }

    /// Grid with the same sampling but a different window.
    pub fn with_extent(&self, extent: T) -> Result<Self> {
        Self::with_axis(self.points, extent, self.dim, self.axis_azimuth)
    }

    pub(crate) fn same_sampling(&self, other: &Self) -> bool {
        let tol = T::lit(1e-9) * self.extent.abs();
        self.points == other.points
            && self.dim == other.dim
            && (self.extent - other.extent).abs() <= tol
            && (self.dim == Dimensionality::Two || (self.axis_azimuth - other.axis_azimuth).abs() <= T::lit(1e-12))
    }
}
