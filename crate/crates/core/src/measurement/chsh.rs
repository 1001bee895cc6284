use serde::{Deserialize, Serialize};

use super::CoincidenceSource;
use crate::scalar::Real;

/// Analyzer settings `a, a′` for P1 and `b, b′` for P2, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshAngles<T> {
    pub a: T,
    pub a2: T,
    pub b: T,
    pub b2: T,
}

impl<T: Real> Default for ChshAngles<T> {
    fn default() -> Self {
        Self {
            a: T::zero(),
            a2: T::lit(45.0).to_radians(),
            b: T::lit(22.5).to_radians(),
            b2: T::lit(67.5).to_radians(),
        }
    }
}

impl<T: Real> ChshAngles<T> {
    /// The four setting pairs in the order `(a,b), (a,b′), (a′,b), (a′,b′)`.
    pub fn pairs(&self) -> [(T, T); 4] {
        [(self.a, self.b), (self.a, self.b2), (self.a2, self.b), (self.a2, self.b2)]
    }

    /// The 16 analyzer settings: for each pair, `(α,β), (α⊥,β⊥), (α,β⊥), (α⊥,β)`.
    pub fn settings(&self) -> [[(T, T); 4]; 4] {
        let perp = T::FRAC_PI_2();
        self.pairs().map(|(x, y)| [(x, y), (x + perp, y + perp), (x, y + perp), (x + perp, y)])
    }
}

/// Signs of the four correlations in `S`.
pub(crate) const CHSH_SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshResult<T> {
    /// Coincidence probabilities laid out as [`ChshAngles::settings`].
    pub probabilities: [[T; 4]; 4],
    pub correlations: [T; 4],
    pub s: T,
}

/// `E = (P++ + P−− − P+− − P−+) / ΣP` for one setting pair; zero when no
/// coincidences are expected.
pub fn correlation<T: Real>(p: &[T; 4]) -> T {
    let total = p[0] + p[1] + p[2] + p[3];
    if !(total > T::zero()) {
        return T::zero();
    }
    (p[0] + p[1] - p[2] - p[3]) / total
}

pub(crate) fn combine<T: Real>(correlations: &[T; 4]) -> T {
    correlations.iter().zip(CHSH_SIGNS).fold(T::zero(), |acc, (&e, s)| acc + e * T::lit(s))
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`.
pub fn chsh_s<T: Real, S: CoincidenceSource<T> + ?Sized>(source: &S, angles: &ChshAngles<T>) -> ChshResult<T> {
    let probabilities = angles.settings().map(|pair| pair.map(|(x, y)| source.coincidence(x, y)));
    let correlations = probabilities.map(|p| correlation(&p));
    ChshResult { probabilities, correlations, s: combine(&correlations) }
}
