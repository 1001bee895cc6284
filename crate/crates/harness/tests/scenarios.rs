use std::path::{Path, PathBuf};

use plasment_core::measurement::visibility_from_density;
use plasment_core::Beam;
use plasment_harness::config::Metric;
use plasment_harness::output::to_json;
use plasment_harness::run::{build_source, detected_density};
use plasment_harness::{calibrate, load_scenario, run_scenario, set_path, sweep, HarnessError, Overrides, Scenario};

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn load(name: &str) -> (Scenario, toml::Value) {
    load_scenario(&scenario_path(name)).unwrap()
}

fn values(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn empty_chains_match_the_bare_source() {
    let (s, _) = load("no-arrays.toml");
    assert!(s.beam1.is_empty() && s.beam2.is_empty());
    let report = run_scenario(&s).unwrap();
    let source = build_source(&s).unwrap();
    let (_, rho) = detected_density(&s, &source).unwrap();
    assert_eq!(report.visibility_0, visibility_from_density(&rho, Beam::Two, 0.0));
    assert!((report.visibility_0 - report.fringes[0].density_visibility).abs() < 1e-9);
    assert_eq!(report.overlap, source.overlap_degree().unwrap());
    assert!(report.rates.transmissions.iter().all(|t| (t - 1.0).abs() < 1e-12));
    assert!((report.rates.expected.coincidence / s.measure.source_rate - 1.0).abs() < 1e-12);
}

#[test]
fn single_value_sweep_equals_run() {
    let (s, value) = load("both-arrays.toml");
    let table = sweep(&value, "both-arrays.toml", "arrays.a1.propagation_length", &values(&["4e-6"]), &Overrides::default()).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(to_json(&table.rows[0].report), to_json(&run_scenario(&s).unwrap()));
}

#[test]
fn pair_phase_only_moves_the_fringes() {
    let (_, value) = load("both-arrays.toml");
    let table = sweep(&value, "both-arrays.toml", "source.phase_deg", &values(&["0", "180"]), &Overrides::default()).unwrap();
    let (a, b) = (&table.rows[0].report, &table.rows[1].report);
    assert!((a.visibility_0 - b.visibility_0).abs() < 1e-6);
    assert!((a.visibility_45 - b.visibility_45).abs() < 1e-6);
    assert!((a.overlap - b.overlap).abs() < 1e-9);
    assert!((a.fringes[1].fringe.phase - b.fringes[1].fringe.phase).abs() > 0.5);
}

#[test]
fn sweep_paths_must_name_scalars() {
    let (_, mut value) = load("both-arrays.toml");
    for bad in ["arrays.a1", "source", "measure.fringes_deg", "source.nothing", "beam1.3.array"] {
        let err = set_path(&mut value, bad, "1").unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)), "{bad}: {err}");
    }
    set_path(&mut value, "measure.fringes_deg.1", "30").unwrap();
    set_path(&mut value, "beam1.0.array", "a2").unwrap();
    assert_eq!(value["measure"]["fringes_deg"][1].as_float(), Some(30.0));
    assert_eq!(value["beam1"][0]["array"].as_str(), Some("a2"));
}

#[test]
fn focusing_decoheres_monotonically_with_propagation_length() {
    let (_, value) = load("array-1-focused.toml");
    let ls = values(&["0", "1e-6", "2e-6", "4e-6", "8e-6"]);
    let table = sweep(&value, "array-1-focused.toml", "arrays.a1.propagation_length", &ls, &Overrides::default()).unwrap();
    let v0: Vec<f64> = table.rows.iter().map(|r| r.report.visibility_0).collect();
    let v45: Vec<f64> = table.rows.iter().map(|r| r.report.visibility_45).collect();
    for w in v0.windows(2).chain(v45.windows(2)) {
        assert!(w[1] <= w[0] + 1e-6, "{v0:?} {v45:?}");
    }
    assert!(table.visibility_0.non_increasing);
    assert!(v0[0] - v0[4] > 0.3, "{v0:?}");
    // without lobes the array is isotropic and the source purity is all that is left
    let (bare, _) = load("no-arrays.toml");
    let bare = run_scenario(&bare).unwrap();
    assert!((v0[0] - bare.visibility_0).abs() <= 1e-3 * bare.visibility_0);
    assert!((v45[0] - bare.visibility_45).abs() <= 1e-3 * bare.visibility_45);
}

/// Stored knob values reproduce their targets.
#[test]
fn presets_sit_on_their_calibration_targets() {
    for name in ["no-arrays.toml", "both-arrays.toml", "array-1-focused.toml"] {
        let (s, _) = load(name);
        let report = run_scenario(&s).unwrap();
        for cal in &s.calibration {
            let got = report.metric(cal.metric);
            assert!((got - cal.target).abs() < 1e-3, "{name} {}: {got} vs {}", cal.knob, cal.target);
        }
    }
}

#[test]
fn calibration_recovers_the_stored_background() {
    let (s, value) = load("no-arrays.toml");
    let cal = s.calibration.iter().find(|c| c.knob == "source.background").unwrap();
    assert_eq!(cal.metric, Metric::Visibility0);
    let r = calibrate(&value, "no-arrays.toml", cal, &Overrides::default()).unwrap();
    assert!((r.achieved - cal.target).abs() <= cal.tolerance);
    assert!((r.value - s.source.background).abs() < 1e-4, "{}", r.value);
}

#[test]
fn calibration_needs_a_bracketing_interval() {
    let (s, value) = load("no-arrays.toml");
    let mut cal = s.calibration[0].clone();
    cal.bracket = [0.2, 0.3];
    assert!(calibrate(&value, "no-arrays.toml", &cal, &Overrides::default()).is_err());
}
