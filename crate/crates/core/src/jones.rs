//! 2×2 complex polarization matrices in the (H, V) basis.

use std::ops::Mul;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{cis, cone, creal, czero, Real};

/// A Jones matrix acting on the (H, V) polarization of one photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jones<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Jones<T> {
    pub fn new(m: [[Complex<T>; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn from_real(m: [[T; 2]; 2]) -> Self {
        Self::new([[creal(m[0][0]), creal(m[0][1])], [creal(m[1][0]), creal(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::new([[cone(), czero()], [czero(), cone()]])
    }

    pub fn zero() -> Self {
        Self::new([[czero(); 2]; 2])
    }

    pub fn scaled(self, s: Complex<T>) -> Self {
        let m = self.m;
        Self::new([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Projector onto the linear polarization `(cos α, sin α)`.
    pub fn projector(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_real([[c * c, c * s], [c * s, s * s]])
    }

    /// Rotation of the polarization frame by `angle`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_real([[c, -s], [s, c]])
    }

    /// Linear retarder with fast axis at `axis` and retardance `delta`
    /// (phases `±delta/2` on the fast/slow axes).
    pub fn retarder(axis: T, delta: T) -> Self {
        let half = delta / T::lit(2.0);
        let d = Self::new([[cis(-half), czero()], [czero(), cis(half)]]);
        Self::rotation(axis) * d * Self::rotation(-axis)
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> T {
        // eigenvalues of the Hermitian product M†M
        let g = self.adjoint() * *self;
        let a = g.m[0][0].re;
        let d = g.m[1][1].re;
        let b = g.m[0][1].norm();
        let mean = (a + d) / T::lit(2.0);
        let spread = (((a - d) / T::lit(2.0)).powi(2) + b * b).sqrt();
        (mean + spread).max(T::zero()).sqrt()
    }

    /// Maximum entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl<T: Real> Mul for Jones<T> {
    type Output = Jones<T>;

    fn mul(self, rhs: Jones<T>) -> Jones<T> {
        let (a, b) = (self.m, rhs.m);
        let mut out = [[czero(); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Jones::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn projector_is_idempotent_and_bounded() {
        let p = Jones::<f64>::projector(0.3);
        assert!((p * p).max_abs_diff(&p) < 1e-15);
        assert!((p.operator_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_unitary() {
        let r = Jones::<f64>::rotation(1.1);
        assert!((r.adjoint() * r).max_abs_diff(&Jones::identity()) < 1e-15);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let d = Jones::<f64>::from_real([[0.2, 0.0], [0.0, -0.7]]);
        assert!((d.operator_norm() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_retarder_squares_to_half_wave() {
        let q = Jones::<f64>::retarder(0.0, PI / 2.0);
        let h = Jones::<f64>::retarder(0.0, PI);
        assert!((q * q).max_abs_diff(&h) < 1e-15);
    }
}
