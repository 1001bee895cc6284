//! Polarization-entangled photon pairs through spatially dispersive metal
//! hole arrays.
//!
//! The crate models a down-converted biphoton as polarization-channel
//! amplitudes over discretized transverse modes, propagates it through
//! polarizers, wave plates, lenses, apertures and hole arrays, and reduces
//! the result to the coincidence observables of a two-analyzer experiment:
//! fringe visibilities, the overlap of the two amplitude pathways, and the
//! CHSH parameter. The [`plasmon`] module supplies the resonance spectra
//! and plasmon propagation lengths that parameterize the array model.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`.

mod error;
mod fourier;
mod scalar;

pub mod density;
pub mod elements;
pub mod grid;
pub mod hole_array;
pub mod jones;
pub mod measurement;
pub mod plasmon;
pub mod state;

pub use density::{analyzer, PolarizationDensity};
pub use elements::{
    aperture, apply_chain, apply_element, apply_element_in_place, compensator_phase, default_aperture, lens_transform,
    polarizer, waveplate_half, ElementKind, ElementOp,
};
pub use error::{Error, Result};
pub use grid::{Beam, Dimensionality, Representation, TransverseGrid};
pub use hole_array::{hole_array, HoleArrayModel};
pub use jones::Jones;
pub use measurement::{
    chsh_s, coincidence_probability, fringe_scan, rate_budget, simulate_counts, ChshAngles, CoincidenceSource,
    FringePlan, MeasurementResult, RateBudget,
};
pub use scalar::Real;
pub use state::{make_spdc_state, BiphotonState, Channel, SourceParams, DEGENERATE_WAVELENGTH};

pub type State = BiphotonState<f64>;
pub type Density = PolarizationDensity<f64>;
pub type Grid = TransverseGrid<f64>;
pub type Source = SourceParams<f64>;
pub type ArrayModel = HoleArrayModel<f64>;
pub type Element = ElementOp<f64>;
pub type SpectrumParams = plasmon::SpectrumParams<f64>;
