//! Reduced two-photon polarization density matrices.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::grid::Beam;
use crate::scalar::{creal, czero, Real};
use crate::state::Channel;

/// 4×4 density matrix over the channels `HH, HV, VH, VV`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationDensity<T> {
    m: [[Complex<T>; 4]; 4],
}

/// Analyzer amplitudes `(cos α, sin α)` for a linear polarizer at `α`.
pub fn analyzer<T: Real>(angle: T) -> [T; 2] {
    [angle.cos(), angle.sin()]
}

impl<T: Real> PolarizationDensity<T> {
    pub fn new(m: [[Complex<T>; 4]; 4]) -> Self {
        Self { m }
    }

    /// `|ψ⟩⟨ψ|` for a (normalized) channel vector.
    pub fn pure(psi: [Complex<T>; 4]) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = psi[r] * psi[c].conj();
            }
        }
        Self { m }
    }

    /// Pure state `(|HV⟩ + e^{iθ}|VH⟩)/√2`.
    pub fn bell(theta: T) -> Self {
        let h = T::FRAC_1_SQRT_2();
        let mut psi = [czero(); 4];
        psi[Channel::HV.index()] = creal(h);
        psi[Channel::VH.index()] = Complex::new(theta.cos(), theta.sin()) * h;
        Self::pure(psi)
    }

    pub fn maximally_mixed() -> Self {
        let mut m = [[czero(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = creal(T::lit(0.25));
        }
        Self { m }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.m[r][c]
    }

    pub fn entry(&self, r: Channel, c: Channel) -> Complex<T> {
        self.m[r.index()][c.index()]
    }

    pub fn matrix(&self) -> &[[Complex<T>; 4]; 4] {
        &self.m
    }

    pub fn trace(&self) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.m[i][i].re)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - self.m[c][r].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    /// `(1 − weight)·self + weight·other`.
    pub fn mixed_with(&self, other: &Self, weight: T) -> Self {
        let keep = T::one() - weight;
        let mut m = self.m;
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = *v * keep + other.m[r][c] * weight;
            }
        }
        Self { m }
    }

    /// Real linear combination `Σ w_i ρ_i` (not renormalized).
    pub fn linear_combination(terms: &[(T, &Self)]) -> Self {
        let mut m = [[czero(); 4]; 4];
        for (w, rho) in terms {
            for (r, row) in m.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = *v + rho.m[r][c] * *w;
                }
            }
        }
        Self { m }
    }

    /// Rescaled to unit trace; `None` for a vanishing trace.
    pub fn normalized(&self) -> Option<Self> {
        let t = self.trace();
        if !(t > T::zero()) {
            return None;
        }
        Some(Self { m: self.m.map(|row| row.map(|v| v / t)) })
    }

    /// Coincidence probability `⟨αβ|ρ|αβ⟩` behind linear analyzers at `alpha`
    /// (beam 1) and `beta` (beam 2).
    pub fn probability(&self, alpha: T, beta: T) -> T {
        let a = analyzer(alpha);
        let b = analyzer(beta);
        let v: [T; 4] = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
        let mut p = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                p = p + (self.m[r][c] * v[r] * v[c]).re;
            }
        }
        p.max(T::zero())
    }

    /// Unnormalized polarization density of the free beam when the analyzer
    /// on `fixed` is set to `angle`.
    pub fn conditional(&self, fixed: Beam, angle: T) -> [[Complex<T>; 2]; 2] {
        let e = analyzer(angle);
        let mut out = [[czero(); 2]; 2];
        for (p, row) in out.iter_mut().enumerate() {
            for (q, v) in row.iter_mut().enumerate() {
                let mut acc = czero();
                for f in 0..2 {
                    for g in 0..2 {
                        let (r, c) = match fixed {
                            Beam::One => (2 * f + p, 2 * g + q),
                            Beam::Two => (2 * p + f, 2 * q + g),
                        };
                        acc = acc + self.m[r][c] * (e[f] * e[g]);
                    }
                }
                *v = acc;
            }
        }
        out
    }

    /// Single-photon polarization density of one beam (partial trace over the other).
    pub fn marginal(&self, beam: Beam) -> [[Complex<T>; 2]; 2] {
        let mut out = [[czero(); 2]; 2];
        for (p, row) in out.iter_mut().enumerate() {
            for (q, v) in row.iter_mut().enumerate() {
                let mut acc = czero();
                for f in 0..2 {
                    let (r, c) = match beam {
                        Beam::One => (2 * p + f, 2 * q + f),
                        Beam::Two => (2 * f + p, 2 * f + q),
                    };
                    acc = acc + self.m[r][c];
                }
                *v = acc;
            }
        }
        out
    }

    /// Partially depolarizing channel on one beam:
    /// `ρ → (1 − f)·ρ + f·(Tr_beam ρ) ⊗ I/2`.
    pub fn depolarized(&self, beam: Beam, fraction: T) -> Self {
        let other = self.marginal(beam.other());
        let mut noise = [[czero(); 4]; 4];
        let half = T::lit(0.5);
        for p in 0..2 {
            for q in 0..2 {
                for f in 0..2 {
                    let (r, c) = match beam {
                        Beam::One => (2 * f + p, 2 * f + q),
                        Beam::Two => (2 * p + f, 2 * q + f),
                    };
                    noise[r][c] = other[p][q] * half;
                }
            }
        }
        self.mixed_with(&Self { m: noise }, fraction)
    }
}
