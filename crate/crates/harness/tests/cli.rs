use std::fs;
use std::path::{Path, PathBuf};

use plasment_harness::cli::main_with_args;
use plasment_harness::config::parse_scenario;
use plasment_harness::spectrum::parse_spectrum;
use plasment_harness::{spectrum_command, HarnessError};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("plasment").chain(args.iter().copied()))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn successful_run_writes_artifacts() {
    let out = tempfile::tempdir().unwrap();
    let code = run(&["run", path(&scenario("no-arrays.toml")), "--grid-dim", "1", "--grid-points", "32", "--out", path(out.path())]);
    assert_eq!(code, 0);
    for f in ["report.json", "fringes.csv", "chsh.csv"] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
    let fringes = fs::read_to_string(out.path().join("fringes.csv")).unwrap();
    assert!(fringes.starts_with("# plasment"));
    assert!(fringes.lines().any(|l| l == "fixed_deg,angle_deg,probability,fitted_value"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "plasment-report/1");
    assert_eq!(report["config"]["name"], "no-arrays");
}

#[test]
fn configuration_problems_exit_with_one() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path();
    assert_eq!(run(&["run", path(&dir.join("missing.toml"))]), 1);
    assert_eq!(run(&["frobnicate"]), 1);
    assert_eq!(run(&["run", path(&scenario("no-arrays.toml")), "--grid-dim", "3"]), 1);

    let bad = dir.join("bad.toml");
    let text = fs::read_to_string(scenario("no-arrays.toml")).unwrap().replace("spot_size = 500e-6", "spot_size = \"wide\"");
    fs::write(&bad, text).unwrap();
    assert_eq!(run(&["run", path(&bad), "--out", path(dir)]), 1);

    assert_eq!(
        run(&["sweep", path(&scenario("no-arrays.toml")), "--param", "source", "--values", "1", "--out", path(dir)]),
        1
    );
}

#[test]
fn numerical_failures_exit_with_two() {
    let out = tempfile::tempdir().unwrap();
    // 4 points cannot resolve the 4 µm coherence length of the focused beam
    let code = run(&["run", path(&scenario("array-1-focused.toml")), "--grid-points", "4", "--out", path(out.path())]);
    assert_eq!(code, 2);
}

#[test]
fn schema_errors_name_the_offending_key() {
    let text = fs::read_to_string(scenario("both-arrays.toml")).unwrap();
    let bad = text.replace("propagation_length = 4e-6", "propagation_length = \"4 um\"");
    let err = parse_scenario(&bad, "both-arrays.toml").unwrap_err();
    assert!(matches!(&err, HarnessError::Schema { key, .. } if key.starts_with("arrays.a1.propagation_length")), "{err}");
    assert_eq!(err.exit_code(), 1);

    let unknown = text.replace("[grid]", "[grid]\nspacing = 1e-6");
    let err = parse_scenario(&unknown, "both-arrays.toml").unwrap_err();
    assert!(err.to_string().contains("grid"), "{err}");

    let undefined = text.replace("array = \"a2\"", "array = \"a9\"");
    let err = parse_scenario(&undefined, "both-arrays.toml").unwrap_err();
    assert!(err.to_string().contains("a9"), "{err}");
}

#[test]
fn same_seed_gives_byte_identical_output() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let code = run(&["run", path(&scenario("both-arrays.toml")), "--seed", "7", "--out", path(dir.path())]);
        assert_eq!(code, 0);
    }
    for f in ["report.json", "fringes.csv", "chsh.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let c = tempfile::tempdir().unwrap();
    assert_eq!(run(&["run", path(&scenario("both-arrays.toml")), "--seed", "8", "--out", path(c.path())]), 0);
    assert_ne!(fs::read(a.path().join("chsh.csv")).unwrap(), fs::read(c.path().join("chsh.csv")).unwrap());
}

#[test]
fn chsh_and_sweep_subcommands() {
    let out = tempfile::tempdir().unwrap();
    let code = run(&["chsh", path(&scenario("both-arrays.toml")), "--runs", "16", "--duration", "100", "--out", path(out.path())]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.path().join("chsh.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 17);
    assert_eq!(run(&["chsh", path(&scenario("both-arrays.toml")), "--runs", "10"]), 1);

    let code = run(&[
        "sweep",
        path(&scenario("no-arrays.toml")),
        "--param",
        "source.phase_deg",
        "--values",
        "0,180",
        "--grid-dim",
        "1",
        "--out",
        path(out.path()),
    ]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.path().join("sweep.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("value,visibility_0,visibility_45")));
}

#[test]
fn spectrum_subcommand_and_coverage_errors() {
    let out = tempfile::tempdir().unwrap();
    assert_eq!(run(&["spectrum", path(&scenario("array-1-spectrum.toml")), "--out", path(out.path())]), 0);
    let csv = fs::read_to_string(out.path().join("spectrum.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("wavelength_nm,")));

    // a table covering only 700–900 nm cannot serve a 500–1100 nm scan
    fs::write(out.path().join("narrow.txt"), "# nm re im\n700 -16.0 1.1\n900 -30.0 1.9\n").unwrap();
    let text = fs::read_to_string(scenario("array-1-spectrum.toml"))
        .unwrap()
        .replace("peak_redshift", "permittivity = \"narrow.txt\"\npeak_redshift");
    let cfg = parse_spectrum(&text, "narrow-spectrum.toml").unwrap();
    let err = spectrum_command(&cfg, Some(out.path())).unwrap_err();
    assert!(err.to_string().contains("nm"), "{err}");
    assert_eq!(err.exit_code(), 1);
    fs::write(out.path().join("narrow-spectrum.toml"), text).unwrap();
    assert_eq!(run(&["spectrum", path(&out.path().join("narrow-spectrum.toml")), "--out", path(out.path())]), 1);
}
