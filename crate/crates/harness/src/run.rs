//! Evaluates a scenario into a [`RunReport`].

use plasment_core::measurement::{visibility_from_density, ChshResult, CountReport, ExpectedRates, Fringe};
use plasment_core::{
    aperture, apply_element_in_place, chsh_s, compensator_phase, fringe_scan, lens_transform, make_spdc_state,
    polarizer, rate_budget, simulate_counts, waveplate_half, ArrayModel, Beam, Channel, ChshAngles, Density, Dimensionality,
    Element, FringePlan, Grid, RateBudget, Source, State,
};
use serde::{Deserialize, Serialize};

use crate::config::{ArrayConfig, ArrayPreset, ElementConfig, Metric, Scenario};
use crate::error::{HarnessError, Result};

pub const REPORT_SCHEMA: &str = "plasment-report/1";

/// Command-line settings that take precedence over the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_dim: Option<usize>,
    pub grid_points: Option<usize>,
    pub runs: Option<usize>,
}

impl Overrides {
    /// Folds the overrides into the scenario and revalidates it.
    pub fn apply(&self, scenario: &mut Scenario) -> Result<()> {
        if let Some(seed) = self.seed {
            scenario.seed = seed;
        }
        if let Some(dim) = self.grid_dim {
            scenario.grid.dim = dim;
        }
        if let Some(points) = self.grid_points {
            scenario.grid.points = points;
        }
        if let Some(runs) = self.runs {
            scenario.measure.runs = runs;
        }
        scenario.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub dim: usize,
    pub points: usize,
    pub extent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FringeReport {
    pub fixed_deg: f64,
    /// Visibility predicted directly from the density matrix.
    pub density_visibility: f64,
    pub fringe: Fringe<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    /// Intensity transmission of each beam line on its own.
    pub transmissions: [f64; 2],
    /// Fraction of pairs surviving both beam lines.
    pub pair_throughput: f64,
    pub expected: ExpectedRates<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub scenario: String,
    pub seed: u64,
    pub grid: GridReport,
    pub visibility_0: f64,
    pub visibility_45: f64,
    pub overlap: f64,
    /// Overlap of the DA and AD channels (both beams analysed at ±45°).
    pub overlap_45: f64,
    pub s: f64,
    pub sigma_s: Option<f64>,
    pub fringes: Vec<FringeReport>,
    pub chsh: ChshResult<f64>,
    pub counts: Option<CountReport<f64>>,
    pub rates: RateReport,
    /// The fully resolved scenario that produced this report.
    pub config: Scenario,
}

impl RunReport {
    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Visibility0 => self.visibility_0,
            Metric::Visibility45 => self.visibility_45,
            Metric::Overlap => self.overlap,
            Metric::AbsS => self.s.abs(),
            Metric::CoincidenceRate => self.rates.expected.coincidence,
        }
    }
}

/// Resolves an array entry into a model.
pub fn array_model(config: &ArrayConfig) -> Result<ArrayModel> {
    let peak = match (config.preset, config.peak_transmission) {
        (_, Some(p)) => p,
        (ArrayPreset::Array1, None) => 0.05,
        (ArrayPreset::Array2, None) => 0.03,
        (ArrayPreset::Custom, None) => {
            return Err(HarnessError::Config("custom arrays need peak_transmission".into()));
        }
    };
    if !(peak > 0.0 && peak <= 1.0) {
        return Err(HarnessError::Config(format!("peak_transmission = {peak} is outside (0, 1]")));
    }
    let mut model = ArrayModel::square_diagonal(peak);
    if let Some(l) = config.propagation_length {
        model.propagation_length = l;
    }
    if let Some(axes) = &config.sp_axes_deg {
        model.sp_axes = axes.iter().map(|d| [d.to_radians().cos(), d.to_radians().sin()]).collect();
    }
    if let Some(ratio) = config.amplitude_ratio {
        model = model.with_amplitude_ratio(ratio)?;
    }
    if let Some(g) = config.retardance_gradient {
        model.retardance_gradient = g;
    }
    if let Some([h, v]) = config.anisotropy {
        model.anisotropy = [[h, 0.0], [0.0, v]];
    }
    if let Some(c) = config.resonance_center {
        model.resonance_center = c;
    }
    if let Some(w) = config.resonance_width {
        model.resonance_width = w;
    }
    model.validate()?;
    Ok(model)
}

/// Window width: ±6 standard deviations of the single-photon spot, capped
/// so that the coherence length stays resolved, and never below four
/// propagation lengths of any array in the scenario.
pub fn grid_extent(scenario: &Scenario) -> Result<f64> {
    if let Some(extent) = scenario.grid.extent {
        return Ok(extent);
    }
    let src = &scenario.source;
    let n = scenario.grid.points as f64;
    let mut extent = (6.0 * 2f64.sqrt() * src.spot_size).min(n * src.coherence_length / 2.0);
    for array in scenario.arrays.values() {
        extent = extent.max(4.0 * array_model(array)?.propagation_length);
    }
    Ok(extent)
}

pub fn build_grid(scenario: &Scenario) -> Result<Grid> {
    let dim = Dimensionality::from_count(scenario.grid.dim)?;
    Ok(Grid::new(scenario.grid.points, grid_extent(scenario)?, dim)?)
}

pub fn build_source(scenario: &Scenario) -> Result<State> {
    let grid = build_grid(scenario)?;
    let src = &scenario.source;
    let params = Source {
        spot_size: src.spot_size,
        coherence_length: src.coherence_length,
        phase: src.phase_deg.to_radians(),
        imbalance: src.imbalance,
    };
    Ok(make_spdc_state(grid, grid, &params, src.wavelength)?)
}

fn element_ops(scenario: &Scenario, el: &ElementConfig, beam: Beam, state: &State) -> Result<Vec<Element>> {
    let grid = state.grid(beam);
    let array = |name: &String| -> Result<Vec<Element>> {
        let model = array_model(&scenario.arrays[name])?;
        Ok(model.element_ops(beam, grid, state.wavelength())?)
    };
    Ok(match el {
        ElementConfig::Polarizer { angle_deg } => vec![polarizer(beam, angle_deg.to_radians())],
        ElementConfig::HalfWave { axis_deg } => vec![waveplate_half(beam, axis_deg.to_radians())],
        ElementConfig::Compensator { phase_deg } => vec![compensator_phase(beam, phase_deg.to_radians())],
        ElementConfig::Aperture { half_angle } => vec![aperture(beam, *half_angle)],
        ElementConfig::Lens { focal_length } => vec![lens_transform(beam, *focal_length)],
        ElementConfig::Array { array: name } => array(name)?,
        // the entry lens is part of the source description at the focus
        ElementConfig::Telescope { focal_length, array: name } => {
            let mut ops = array(name)?;
            ops.push(lens_transform(beam, *focal_length));
            ops
        }
    })
}

/// Propagates `state` through the element chain of `beam`.
pub fn apply_beam_chain(scenario: &Scenario, beam: Beam, state: &mut State) -> Result<()> {
    let chain = match beam {
        Beam::One => &scenario.beam1,
        Beam::Two => &scenario.beam2,
    };
    for el in chain {
        // ops are built against the grid the beam has at this point
        for op in element_ops(scenario, el, beam, state)? {
            apply_element_in_place(state, &op)?;
        }
    }
    Ok(())
}

fn propagate(scenario: &Scenario, mut state: State) -> Result<State> {
    apply_beam_chain(scenario, Beam::One, &mut state)?;
    apply_beam_chain(scenario, Beam::Two, &mut state)?;
    Ok(state)
}

fn unnormalized(state: &State) -> Result<Density> {
    let rho = state.reduce_polarization()?;
    Ok(Density::linear_combination(&[(state.norm(), &rho)]))
}

/// Propagates the source and returns the output state together with the
/// detected polarization density.
///
/// A Gaussian jitter of θ with standard deviation σ scales the interference
/// between the HV- and VH-born parts of the output by `exp(−σ²/2)`; the
/// unpolarized background is mixed in last.
pub fn detected_density(scenario: &Scenario, source: &State) -> Result<(State, Density)> {
    let out = propagate(scenario, source.clone())?;
    let jitter = scenario.source.phase_jitter_deg.to_radians();
    let rho = if jitter > 0.0 {
        let part = |silenced: Channel| -> Result<Density> {
            let mut s = source.clone();
            s.channel_mut(silenced).iter_mut().for_each(|a| *a = Default::default());
            unnormalized(&propagate(scenario, s)?)
        };
        let (from_hv, from_vh) = (part(Channel::VH)?, part(Channel::HV)?);
        let k = (-jitter * jitter / 2.0).exp();
        Density::linear_combination(&[(1.0 - k, &from_hv), (1.0 - k, &from_vh), (k, &unnormalized(&out)?)])
            .normalized()
            .ok_or(plasment_core::Error::ZeroNorm)?
    } else {
        out.reduce_polarization()?
    };
    Ok((out, rho.mixed_with(&Density::maximally_mixed(), scenario.source.background)))
}

/// Overlap degree after half-wave plates at 22.5° map H/V onto ±45°.
pub fn overlap_45(state: &State) -> Result<f64> {
    let mut rotated = state.clone();
    for beam in [Beam::One, Beam::Two] {
        apply_element_in_place(&mut rotated, &waveplate_half(beam, 22.5f64.to_radians()))?;
    }
    Ok(rotated.overlap_degree()?)
}

pub fn chsh_angles(scenario: &Scenario) -> ChshAngles<f64> {
    let [a, a2, b, b2] = scenario.measure.chsh_angles_deg.map(f64::to_radians);
    ChshAngles { a, a2, b, b2 }
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunReport> {
    scenario.validate()?;
    let source = build_source(scenario)?;
    let grid = *source.grid(Beam::One);

    let mut transmissions = [1.0; 2];
    for beam in [Beam::One, Beam::Two] {
        let mut single = source.clone();
        apply_beam_chain(scenario, beam, &mut single)?;
        transmissions[beam.index()] = single.norm().min(1.0);
    }
    let (state, rho) = detected_density(scenario, &source)?;

    let m = &scenario.measure;
    let mut fringes = Vec::with_capacity(m.fringes_deg.len());
    for &fixed_deg in &m.fringes_deg {
        let plan = FringePlan {
            step: m.fringe_step_deg.to_radians(),
            steps: m.fringe_steps,
            ..FringePlan::p2_fixed(fixed_deg.to_radians())
        };
        fringes.push(FringeReport {
            fixed_deg,
            density_visibility: visibility_from_density(&rho, Beam::Two, fixed_deg.to_radians()),
            fringe: fringe_scan(&rho, &plan)?,
        });
    }
    // V_0 and V_45 always come from fitted scans, even if not requested
    let fitted = |deg: f64| -> Result<f64> {
        if let Some(f) = fringes.iter().find(|f| (f.fixed_deg - deg).abs() < 1e-9) {
            return Ok(f.fringe.visibility);
        }
        Ok(fringe_scan(&rho, &FringePlan::p2_fixed(deg.to_radians()))?.visibility)
    };
    let visibility_0 = fitted(0.0)?;
    let visibility_45 = fitted(45.0)?;

    let chsh = chsh_s(&rho, &chsh_angles(scenario));
    let expected = rate_budget(m.source_rate, transmissions)?;
    let counts = if m.chsh {
        let budget = RateBudget::new(m.source_rate, transmissions)?;
        let per_setting = m.duration * (m.runs / 16) as f64;
        Some(simulate_counts(&chsh.probabilities, &budget, per_setting, scenario.seed)?)
    } else {
        None
    };

    Ok(RunReport {
        schema: REPORT_SCHEMA.into(),
        scenario: scenario.name.clone(),
        seed: scenario.seed,
        grid: GridReport { dim: scenario.grid.dim, points: grid.points(), extent: grid.extent() },
        visibility_0,
        visibility_45,
        overlap: state.overlap_degree()?,
        overlap_45: overlap_45(&state)?,
        s: chsh.s,
        sigma_s: counts.as_ref().map(|c| c.sigma_s),
        fringes,
        chsh,
        counts,
        rates: RateReport { transmissions, pair_throughput: state.norm(), expected },
        config: scenario.clone(),
    })
}
