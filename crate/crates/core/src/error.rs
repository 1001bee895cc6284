use thiserror::Error;

/// Errors raised by the simulator core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: spacing {spacing:.3e} m exceeds half the coherence length ({limit:.3e} m)")]
    Resolution { spacing: f64, limit: f64 },

    #[error("grids are incompatible: {0}")]
    GridMismatch(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("channel {0} has zero norm")]
    ZeroChannel(&'static str),

    #[error("hole-array kernel truncated: window {window:.3e} m is smaller than 4 propagation lengths ({required:.3e} m)")]
    KernelTruncation { window: f64, required: f64 },

    #[error("working wavelength {wavelength_nm:.1} nm is off the array resonance ({center_nm:.1} ± {width_nm:.1} nm)")]
    OffResonance { wavelength_nm: f64, center_nm: f64, width_nm: f64 },

    #[error("no bound surface plasmon: {0}")]
    NotBound(String),

    #[error("permittivity table does not cover {wavelength_nm:.1} nm (table spans {min_nm:.1}-{max_nm:.1} nm)")]
    PermittivityCoverage { wavelength_nm: f64, min_nm: f64, max_nm: f64 },

    #[error("permittivity table line {line}: {reason}")]
    PermittivityParse { line: usize, reason: String },

    #[error("fringe fit failed: relative residual {residual:.3e} exceeds {limit:.3e}")]
    FringeFit { residual: f64, limit: f64 },

    #[error("fringe scan needs at least 8 steps spanning 180 degrees (got {steps} steps over {span_deg:.1} degrees)")]
    FringePlan { steps: usize, span_deg: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
