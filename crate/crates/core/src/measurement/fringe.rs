use serde::{Deserialize, Serialize};

use super::CoincidenceSource;
use crate::density::PolarizationDensity;
use crate::error::{Error, Result};
use crate::grid::Beam;
use crate::scalar::Real;

/// One analyzer held fixed while the other rotates in equal steps from 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringePlan<T> {
    pub fixed_beam: Beam,
    pub fixed_angle: T,
    /// Rotation step of the scanned analyzer, radians.
    pub step: T,
    pub steps: usize,
    /// Largest accepted fit residual relative to the mean level.
    pub max_residual: T,
}

impl<T: Real> FringePlan<T> {
    /// P2 fixed, P1 scanned in 10° steps over half a turn.
    pub fn p2_fixed(angle: T) -> Self {
        Self {
            fixed_beam: Beam::Two,
            fixed_angle: angle,
            step: T::lit(10.0).to_radians(),
            steps: 18,
            max_residual: T::lit(0.1),
        }
    }

    pub fn angles(&self) -> Vec<T> {
        (0..self.steps).map(|k| self.step * T::from_usize_lossy(k)).collect()
    }

    fn validate(&self) -> Result<()> {
        let span = self.step * T::from_usize_lossy(self.steps);
        if self.steps < 8 || span < T::PI() - T::lit(1e-9) {
            return Err(Error::FringePlan { steps: self.steps, span_deg: span.to_degrees().as_f64() });
        }
        Ok(())
    }
}

/// A sampled fringe with its least-squares sinusoid `c0 + c1·cos2α + c2·sin2α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fringe<T> {
    pub angles: Vec<T>,
    pub values: Vec<T>,
    pub fitted: Vec<T>,
    pub mean: T,
    pub amplitude: T,
    /// Scanned-analyzer angle of the fitted maximum, radians.
    pub phase: T,
    pub visibility: T,
    /// RMS fit residual relative to the mean level.
    pub residual: T,
}

/// Fits `c0 + c1 cos 2α + c2 sin 2α` by linear least squares.
pub fn fit_fringe<T: Real>(angles: &[T], values: &[T], max_residual: T) -> Result<Fringe<T>> {
    // normal equations of the 3-parameter linear model
    let mut ata = [[T::zero(); 3]; 3];
    let mut atb = [T::zero(); 3];
    for (&a, &y) in angles.iter().zip(values) {
        let two = T::lit(2.0) * a;
        let row = [T::one(), two.cos(), two.sin()];
        for r in 0..3 {
            atb[r] = atb[r] + row[r] * y;
            for c in 0..3 {
                ata[r][c] = ata[r][c] + row[r] * row[c];
            }
        }
    }
    let coef = solve3(ata, atb).ok_or(Error::FringeFit { residual: f64::INFINITY, limit: max_residual.as_f64() })?;
    let model = |a: T| coef[0] + coef[1] * (T::lit(2.0) * a).cos() + coef[2] * (T::lit(2.0) * a).sin();
    let fitted: Vec<T> = angles.iter().map(|&a| model(a)).collect();
    let n = T::from_usize_lossy(angles.len());
    let sse = values.iter().zip(&fitted).fold(T::zero(), |acc, (y, f)| acc + (*y - *f) * (*y - *f));
    let mean = coef[0];
    let residual = if mean > T::zero() { (sse / n).sqrt() / mean } else { T::infinity() };
    if !(residual <= max_residual) {
        return Err(Error::FringeFit { residual: residual.as_f64(), limit: max_residual.as_f64() });
    }
    let amplitude = (coef[1] * coef[1] + coef[2] * coef[2]).sqrt();
    Ok(Fringe {
        angles: angles.to_vec(),
        values: values.to_vec(),
        fitted,
        mean,
        amplitude,
        phase: coef[2].atan2(coef[1]) / T::lit(2.0),
        visibility: (amplitude / mean).min(T::one()),
        residual,
    })
}

fn solve3<T: Real>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() <= T::epsilon() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Scans the free analyzer and extracts the fringe visibility by fitting.
pub fn fringe_scan<T: Real, S: CoincidenceSource<T> + ?Sized>(source: &S, plan: &FringePlan<T>) -> Result<Fringe<T>> {
    plan.validate()?;
    let angles = plan.angles();
    let values: Vec<T> = angles
        .iter()
        .map(|&a| match plan.fixed_beam {
            Beam::Two => source.coincidence(a, plan.fixed_angle),
            Beam::One => source.coincidence(plan.fixed_angle, a),
        })
        .collect();
    fit_fringe(&angles, &values, plan.max_residual)
}

/// Visibility predicted directly from the density matrix: the eigenvalue
/// contrast of the real part of the free beam's conditional polarization
/// matrix (linear analyzers only probe the real-symmetric part).
pub fn visibility_from_density<T: Real>(rho: &PolarizationDensity<T>, fixed_beam: Beam, fixed_angle: T) -> T {
    let c = rho.conditional(fixed_beam, fixed_angle);
    let (a, d, b) = (c[0][0].re, c[1][1].re, c[0][1].re);
    let trace = a + d;
    if !(trace > T::zero()) {
        return T::zero();
    }
    (((a - d) * (a - d) + T::lit(4.0) * b * b).sqrt() / trace).min(T::one())
}
