use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::chsh::{combine, correlation};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Source coincidence rate with no arrays, s⁻¹.
pub const SOURCE_COINCIDENCE_RATE: f64 = 3.2e4;
/// Coincidences as a fraction of the single-count rate.
pub const SINGLES_RATIO: f64 = 0.25;
/// Coincidence window, seconds.
pub const COINCIDENCE_WINDOW: f64 = 2e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBudget<T> {
    pub source_rate: T,
    pub transmissions: [T; 2],
    pub window: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectedRates<T> {
    pub coincidence: T,
    pub singles: [T; 2],
    /// Accidental coincidences `2τ·S1·S2`; reported only, never added.
    pub accidentals: T,
}

impl<T: Real> RateBudget<T> {
    pub fn new(source_rate: T, transmissions: [T; 2]) -> Result<Self> {
        if !(source_rate >= T::zero()) || !source_rate.is_finite() {
            return Err(Error::InvalidParameter { name: "source_rate", reason: format!("{source_rate} must be a finite rate ≥ 0") });
        }
        for t in transmissions {
            if !(t >= T::zero() && t <= T::one()) {
                return Err(Error::InvalidParameter { name: "transmission", reason: format!("{t} is outside [0, 1]") });
            }
        }
        Ok(Self { source_rate, transmissions, window: T::lit(COINCIDENCE_WINDOW) })
    }

    pub fn expected(&self) -> ExpectedRates<T> {
        let [t1, t2] = self.transmissions;
        let single = self.source_rate / T::lit(SINGLES_RATIO);
        let singles = [single * t1, single * t2];
        ExpectedRates {
            coincidence: self.source_rate * t1 * t2,
            singles,
            accidentals: T::lit(2.0) * self.window * singles[0] * singles[1],
        }
    }
}

/// Multiplicative budget `R = R0·T1·T2`, singles `R0/0.25·T_i`.
pub fn rate_budget<T: Real>(source_rate: T, transmissions: [T; 2]) -> Result<ExpectedRates<T>> {
    Ok(RateBudget::new(source_rate, transmissions)?.expected())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport<T> {
    /// Coincidence counts laid out as the CHSH settings.
    pub counts: [[u64; 4]; 4],
    pub correlations: [T; 4],
    pub s: T,
    pub sigma_s: T,
}

fn poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if !(mean > 0.0) {
        return 0;
    }
    // Poisson::new only fails for non-positive or non-finite means
    Poisson::new(mean).map(|d| d.sample(rng) as u64).unwrap_or(0)
}

/// Draws Poisson coincidence counts for the 16 CHSH settings.
///
/// Each setting is counted for `duration` seconds with mean
/// `2·R·P·duration`, so a setting at the ideal `P = ½` collects the budget
/// coincidence rate `R`. Setting `k` draws from stream `k` of a ChaCha8
/// generator seeded with `seed`, so results do not depend on evaluation
/// order. `σ_S` propagates `Var n = n` through the E-ratios.
pub fn simulate_counts<T: Real>(
    probabilities: &[[T; 4]; 4],
    budget: &RateBudget<T>,
    duration: T,
    seed: u64,
) -> Result<CountReport<T>> {
    if !(duration >= T::zero()) || !duration.is_finite() {
        return Err(Error::InvalidParameter { name: "duration", reason: format!("{duration} must be ≥ 0") });
    }
    let rate = budget.expected().coincidence.as_f64();
    let mut counts = [[0u64; 4]; 4];
    for (pair, row) in probabilities.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((pair * 4 + k) as u64);
            counts[pair][k] = poisson(2.0 * rate * p.as_f64() * duration.as_f64(), &mut rng);
        }
    }
    let mut correlations = [T::zero(); 4];
    let mut variance = 0.0;
    for (pair, n) in counts.iter().enumerate() {
        let nf = n.map(|c| c as f64);
        let e = correlation(&nf);
        correlations[pair] = T::lit(e);
        let total: f64 = nf.iter().sum();
        if total > 0.0 {
            let signs = [1.0, 1.0, -1.0, -1.0];
            variance += nf.iter().zip(signs).map(|(c, s)| (s - e) * (s - e) * c).sum::<f64>() / (total * total);
        }
    }
    Ok(CountReport { counts, correlations, s: combine(&correlations), sigma_s: T::lit(variance.sqrt()) })
}
