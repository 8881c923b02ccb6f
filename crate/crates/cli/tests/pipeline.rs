use std::path::Path;
use std::process::Command;

use num_bigint::BigInt;
use serde_json::Value;

use torific_cli::commands::{self, exit, CliError, Strategy, TorifyOptions};
use torific_cli::format::{FanFile, IdealFile};
use torific_cli::paper;
use torific_cli::trace::TraceStep;
use torific_core::cobordism::{CobordismError, CycleError};
use torific_core::fans::{fans_equal, Cone, Fan};
use torific_core::lattice::LatticeVector;
use torific_testkit::cobordism_suite;

const ORTHANT: &str = "rank 2\nray 1 0\nray 0 1\ncone 0 1\n";
const POINT: &str = "rank 2\nray 1 0\nray 0 1\nchart 0 1\ngen 1 0\ngen 0 1\n";
const A3_CHART: &str = "rank 3\nray 1 0 0\nray 0 1 0\nray 0 0 1\ncone 0 1 2\naction 2 3 -1\n";

fn v(x: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(x)
}

fn fan(rank: usize, cones: &[&[&[i64]]]) -> Fan {
    Fan::new(rank, cones.iter().map(|c| Cone::new(rank, c.iter().map(|r| v(r))).unwrap())).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

/// Runs the binary; returns the exit code and stdout parsed as JSON.
fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_torific")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::String(stdout));
    (out.status.code().unwrap(), value)
}

fn point_blowup_cobordism() -> torific_core::cobordism::CobordismFan {
    let outcome = commands::cobordize(
        &FanFile::parse(ORTHANT).unwrap(),
        &IdealFile::parse(POINT).unwrap(),
        None,
        None,
    )
    .unwrap();
    let file = FanFile::parse(outcome.artifact.as_deref().unwrap()).unwrap();
    commands::load_cobordism(&file).unwrap()
}

#[test]
fn point_blowup_factors_in_one_step() {
    let cob = point_blowup_cobordism();
    let b = cob.boundary().unwrap();
    let blowup = fan(2, &[&[&[1, 0], &[1, 1]], &[&[0, 1], &[1, 1]]]);
    assert!(fans_equal(&b.lower_quotient, &blowup));
    assert!(fans_equal(&b.upper_quotient, &fan(2, &[&[&[1, 0], &[0, 1]]])));

    let f = commands::factor_cobordism(&cob, &TorifyOptions::default()).unwrap();
    let moves: Vec<&TraceStep> = f.trace.moves().collect();
    assert_eq!(moves.len(), 1);
    match moves[0] {
        TraceStep::InverseStarSubdivision { ray, .. } => assert_eq!(ray, &v(&[1, 1])),
        other => panic!("unexpected step {other:?}"),
    }
    assert!(f.trace.replay().is_ok());
}

#[test]
fn cobordize_compares_expected_quotients() {
    let orthant = FanFile::parse(ORTHANT).unwrap();
    let ideals = IdealFile::parse(POINT).unwrap();
    let base = commands::load_fan(&orthant).unwrap();
    let right = commands::cobordize(&orthant, &ideals, None, Some(&base)).unwrap();
    assert_eq!(right.code, exit::OK);
    assert_eq!(right.report["expected_checks"]["upper"], Value::Bool(true));
    let wrong = commands::cobordize(&orthant, &ideals, Some(&base), None).unwrap();
    assert_eq!(wrong.code, exit::INVALID);
    assert_eq!(wrong.report["expected_checks"]["lower"], Value::Bool(false));
}

#[test]
fn principal_ideal_gives_trivial_report() {
    let ideal = IdealFile::parse("rank 2\nray 1 0\nray 0 1\nchart 0 1\ngen 1 0\n").unwrap();
    let outcome = commands::cobordize(&FanFile::parse(ORTHANT).unwrap(), &ideal, None, None).unwrap();
    assert_eq!(outcome.report["trivial"], Value::Bool(true));
    let cob = commands::load_cobordism(&FanFile::parse(outcome.artifact.as_deref().unwrap()).unwrap()).unwrap();
    let f = commands::factor_cobordism(&cob, &TorifyOptions::default()).unwrap();
    assert_eq!(f.trace.moves().count(), 0);
    assert!(f.trace.replay().is_ok());
}

#[test]
fn free_cobordism_has_empty_trace() {
    let file = FanFile::parse("rank 3\nray 1 0 0\nray 0 1 0\ncone 0 1\naction 0 0 1\n").unwrap();
    let cob = commands::load_cobordism(&file).unwrap();
    assert!(cob.dependent_cones().is_empty());
    let f = commands::factor_cobordism(&cob, &TorifyOptions::default()).unwrap();
    assert!(f.trace.steps.is_empty());
    assert!(f.pieces.is_empty());
    assert!(f.trace.replay().is_ok());
}

#[test]
fn piece_with_equal_quotients_adds_no_steps() {
    let file = FanFile::parse("rank 2\nray 1 0\nray 0 1\ncone 0 1\naction 1 -1\n").unwrap();
    let cob = commands::load_cobordism(&file).unwrap();
    let f = commands::factor_cobordism(&cob, &TorifyOptions::default()).unwrap();
    assert_eq!(f.pieces.len(), 1);
    assert_eq!(f.pieces[0]["method"], Value::String("trivial".into()));
    assert!(f.trace.steps.is_empty());
    assert!(f.trace.replay().is_ok());
}

#[test]
fn single_chart_reproduces_the_worked_example() {
    let cob = commands::load_cobordism(&FanFile::parse(A3_CHART).unwrap()).unwrap();
    let opts = TorifyOptions { balanced: false, characters: vec![BigInt::from(6)] };
    let f = commands::factor_cobordism(&cob, &opts).unwrap();
    assert_eq!(f.pieces.len(), 1);
    assert_eq!(f.runs.len(), 1);
    let run = &f.runs[0];
    let fixture = paper::parse_fixture(paper::PINNED_FIXTURE).unwrap();
    let facts = paper::facts(run);
    assert_eq!(facts.maximal_cones, fixture.maximal_cones);
    assert_eq!(facts.removed_rays, fixture.removed_rays);
    assert!(run.all_certified());
    assert!(f.trace.replay().is_ok());
}

#[test]
fn corrupted_fixture_yields_a_diff() {
    let mut fixture = paper::parse_fixture(paper::PINNED_FIXTURE).unwrap();
    fixture.ideals.get_mut("2").unwrap()[0] = vec![0, 1, 2];
    fixture.removed_rays.pop();
    let (_, mismatches) = paper::check(false, &fixture).unwrap();
    let paths: Vec<&str> = mismatches.iter().map(|m| m.path.as_str()).collect();
    assert!(paths.contains(&"/ideals/2/0/2"), "{paths:?}");
    assert!(paths.contains(&"/removed_rays"), "{paths:?}");

    let mut balanced = paper::parse_fixture(paper::PINNED_FIXTURE).unwrap();
    balanced.balanced.as_mut().unwrap().character = -9;
    assert!(paper::check(false, &balanced).unwrap().1.is_empty());
    assert_eq!(paper::check(true, &balanced).unwrap().1.len(), 1);
}

#[test]
fn cycle_errors_map_to_exit_three() {
    let c = Cone::new(1, [v(&[1])]).unwrap();
    let err: CliError = CobordismError::Cycle(CycleError { cycle: vec![c.clone(), c] }).into();
    assert_eq!(err.exit_code(), exit::CYCLE);
    assert!(err.to_string().contains("cycle"));
}

#[test]
fn suite_traces_replay() {
    let mut methods = std::collections::BTreeMap::new();
    for case in cobordism_suite(61, 40) {
        let cob = torific_core::cobordism::CobordismFan::new(case.fan.clone(), case.action.clone()).unwrap();
        let f = commands::factor_cobordism(&cob, &TorifyOptions::default())
            .unwrap_or_else(|e| panic!("seed {}: {e}", case.seed));
        if let Err(e) = f.trace.replay() {
            panic!("seed {}: {e}", case.seed);
        }
        for p in &f.pieces {
            *methods.entry(p["method"].as_str().unwrap().to_string()).or_insert(0) += 1;
        }
    }
    eprintln!("piece methods: {methods:?}");
    assert!(methods.contains_key("elementary"), "{methods:?}");
}

#[test]
fn suite_triangles_replay() {
    let mut methods = std::collections::BTreeMap::new();
    for case in cobordism_suite(62, 15) {
        let cob = torific_core::cobordism::CobordismFan::new(case.fan.clone(), case.action.clone()).unwrap();
        let f = commands::factor_cobordism_with(&cob, &TorifyOptions::default(), Strategy::Triangle)
            .unwrap_or_else(|e| panic!("seed {}: {e}", case.seed));
        if let Err(e) = f.trace.replay() {
            panic!("seed {}: {e}", case.seed);
        }
        for p in &f.pieces {
            *methods.entry(p["method"].as_str().unwrap().to_string()).or_insert(0) += 1;
        }
    }
    eprintln!("piece methods: {methods:?}");
    assert!(methods.contains_key("torific") && methods.contains_key("intersection"), "{methods:?}");
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let orthant = write(d, "orthant.fan", ORTHANT);
    let point = write(d, "point.ideal", POINT);
    let cob = d.join("point.cob").display().to_string();

    let (code, report) = run(&["check", &orthant]);
    assert_eq!(code, 0);
    assert_eq!(report["valid"], Value::Bool(true));
    assert_eq!(report["smooth"], Value::Bool(true));

    let overlapping = write(d, "bad.fan", "rank 2\nray 1 0\nray 0 1\nray 1 1\ncone 0 1\ncone 0 2\n");
    let (code, report) = run(&["check", &overlapping]);
    assert_eq!(code, 1);
    assert_eq!(report["incompatible"].as_array().unwrap().len(), 2);

    let garbled = write(d, "garbled.fan", "rank 2\nray 1 zero\n");
    assert_eq!(run(&["check", &garbled]).0, 2);
    assert_eq!(run(&["check", &d.join("missing.fan").display().to_string()]).0, 1);

    let (code, _) = run(&["cobordize", &orthant, &point, "--out", &cob]);
    assert_eq!(code, 0);
    let written = FanFile::parse(&std::fs::read_to_string(&cob).unwrap()).unwrap();
    assert_eq!(written.action, Some(v(&[0, 0, 1])));

    let (code, report) = run(&["factor", &cob]);
    assert_eq!(code, 0);
    assert_eq!(report["trace"]["steps"].as_array().unwrap().len(), 1);
    assert_eq!(report["trace"]["steps"][0]["ray"], serde_json::json!([1, 1]));
    assert_eq!(report["replay_ok"], Value::Bool(true));

    for cmd in ["boundary", "chi", "pieces", "torify"] {
        assert_eq!(run(&[cmd, &cob]).0, 0, "{cmd}");
    }
    assert_eq!(run(&["dual", &orthant]).0, 0);
    assert_eq!(run(&["boundary", &orthant]).0, 1, "no action line");

    let singular = write(d, "singular.fan", "rank 2\nray 1 0\nray 1 2\ncone 0 1\n");
    let singular_ideal = write(d, "singular.ideal", "rank 2\nray 1 0\nray 1 2\nchart 0 1\ngen 0 1\n");
    assert_eq!(run(&["cobordize", &singular, &singular_ideal]).0, 1);

    let a3 = write(d, "a3.cob", A3_CHART);
    let (code, report) = run(&["torify", &a3, "--characters", "6,-1", "--balanced"]);
    assert_eq!(code, 0);
    assert_eq!(report["runs"][0]["character_sum"], serde_json::json!(0));

    assert_eq!(run(&["paper-example"]).0, 0);
    assert_eq!(run(&["paper-example", "--balanced"]).0, 0);
    let corrupted = write(d, "fixture.json", &paper::PINNED_FIXTURE.replace("[1, -1, -1]", "[1, -1, 0]"));
    let (code, report) = run(&["paper-example", "--fixture", &corrupted]);
    assert_eq!(code, 1);
    assert_eq!(report["diff"][0]["path"], Value::String("/sigma1_witness/witness/2".into()));
    let broken = write(d, "broken.json", "{");
    assert_eq!(run(&["paper-example", "--fixture", &broken]).0, 2);

    let (code, text) = run(&["check", &orthant, "--text"]);
    assert_eq!(code, 0);
    assert!(text.as_str().unwrap().contains("valid: true"));
}
