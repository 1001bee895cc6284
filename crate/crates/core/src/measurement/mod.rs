//! Coincidence observables: analyzer probabilities, biphoton fringes, CHSH
//! correlations and counting statistics.

mod chsh;
mod counts;
mod fringe;

pub use chsh::{chsh_s, correlation, ChshAngles, ChshResult};
pub use counts::{
    rate_budget, simulate_counts, CountReport, ExpectedRates, RateBudget, COINCIDENCE_WINDOW, SINGLES_RATIO,
    SOURCE_COINCIDENCE_RATE,
};
pub use fringe::{fit_fringe, fringe_scan, visibility_from_density, Fringe, FringePlan};

use serde::{Deserialize, Serialize};

use crate::density::{analyzer, PolarizationDensity};
use crate::grid::Beam;
use crate::scalar::Real;
use crate::state::BiphotonState;

/// Anything that yields bucket-detector coincidence probabilities behind two
/// linear analyzers, normalized to the pairs reaching the analyzers.
pub trait CoincidenceSource<T: Real> {
    fn coincidence(&self, alpha: T, beta: T) -> T;
}

impl<T: Real> CoincidenceSource<T> for PolarizationDensity<T> {
    fn coincidence(&self, alpha: T, beta: T) -> T {
        self.probability(alpha, beta)
    }
}

impl<T: Real> CoincidenceSource<T> for BiphotonState<T> {
    fn coincidence(&self, alpha: T, beta: T) -> T {
        coincidence_probability(self, alpha, beta)
    }
}

/// `P(α, β) = Σ_modes |Σ_c ⟨αβ|c⟩ A_c|² / N`: every surviving transverse
/// mode is summed incoherently, as by a bucket detector.
pub fn coincidence_probability<T: Real>(state: &BiphotonState<T>, alpha: T, beta: T) -> T {
    let norm = state.norm();
    if !(norm > T::zero()) {
        return T::zero();
    }
    let a = analyzer(alpha);
    let b = analyzer(beta);
    let weights = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]];
    let pair = state.modes(Beam::One) * state.modes(Beam::Two);
    let amps = state.amplitudes();
    let mut total = T::zero();
    for k in 0..pair {
        let mut amp = amps[k] * weights[0];
        for (c, w) in weights.iter().enumerate().skip(1) {
            amp = amp + amps[c * pair + k] * *w;
        }
        total = total + amp.norm_sqr();
    }
    (total / norm).max(T::zero()).min(T::one())
}

/// Summary of the observables of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementResult<T> {
    /// Fraction of source pairs surviving all elements.
    pub throughput: T,
    pub visibility_0: T,
    pub visibility_45: T,
    pub overlap: T,
    pub s: T,
    pub sigma_s: Option<T>,
    pub coincidence_rate: T,
    pub singles_rate: [T; 2],
}
