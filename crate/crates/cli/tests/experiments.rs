use std::f64::consts::PI;

use qshutter::output::{read_csv_rows, read_json_records, write_record_file, write_records};
use qshutter::{
    compute, parse_values, run, sweep, CliError, Experiment, ExperimentConfig, Format, GateChoice, Params,
    SweepParam, ThetaSpec,
};

fn config(experiment: Experiment, params: Params) -> ExperimentConfig {
    ExperimentConfig::new(experiment, params)
}

fn scalar(record: &qshutter::ResultRecord, key: &str) -> f64 {
    *record.outputs.scalars.get(key).unwrap_or_else(|| panic!("missing scalar {key}"))
}

#[test]
fn interrogation_matches_closed_form() {
    let p = Params { theta: Some(ThetaSpec::PiOver(48.0)), cycles: Some(24), bomb: true, ..Params::default() };
    let r = compute(&config(Experiment::Interrogate, p)).unwrap();
    let expected = 1.0 - (PI / 48.0).cos().powi(48);
    assert!((scalar(&r, "explosion_probability") - expected).abs() < 1e-12);
    assert!((scalar(&r, "explosion_probability") - 0.0978).abs() < 1e-4);
    assert!((scalar(&r, "survival_probability") + expected - 1.0).abs() < 1e-12);
}

#[test]
fn interrogation_default_angle_is_tied_to_cycles() {
    let p = Params { cycles: Some(24), ..Params::default() };
    let r = compute(&config(Experiment::Interrogate, p)).unwrap();
    assert_eq!(r.parameters.theta, Some(PI / 48.0));
    assert!((scalar(&r, "p_v") - 1.0).abs() < 1e-12);
}

#[test]
fn empty_shutter_pass_is_a_reflection_with_small_leak() {
    let theta = PI / 24.0;
    let p = Params { theta: Some(ThetaSpec::PiOver(24.0)), cycles: Some(23), ..Params::default() };
    let r = compute(&config(Experiment::ShutterEvolve, p)).unwrap();
    let m = r.outputs.matrices.iter().find(|m| m.name == "evolution").unwrap();
    assert_eq!(m.basis, ["H1", "V1", "H2", "V2"]);
    let at = |i: usize, j: usize| m.data[4 * i + j];
    let mag = |z: [f64; 2]| z[0].hypot(z[1]);
    // columns are inputs: H1 mostly reflects, leaking into V1; V2 goes to V1
    assert!((mag(at(0, 0)) - theta.cos()).abs() < 1e-12);
    assert!((mag(at(1, 0)) - theta.sin()).abs() < 1e-12);
    assert!((mag(at(1, 3)) - theta.cos()).abs() < 1e-12);
    for (i, j) in [(2, 0), (3, 0), (0, 2), (1, 2), (0, 1), (1, 1)] {
        assert!(mag(at(i, j)) < 1e-12, "({i},{j}) = {:?}", at(i, j));
    }
    assert!((scalar(&r, "p_v1") - theta.sin().powi(2)).abs() < 1e-12);
    assert!((scalar(&r, "p_h1") - theta.cos().powi(2)).abs() < 1e-12);
}

#[test]
fn occupied_shutter_absorbs_by_cycle_count() {
    let theta = PI / 24.0;
    let p = Params { theta: Some(ThetaSpec::PiOver(24.0)), cycles: Some(23), particle: true, ..Params::default() };
    let r = compute(&config(Experiment::ShutterEvolve, p)).unwrap();
    let survive = theta.cos().powi(46);
    assert!((scalar(&r, "survival_probability") - survive).abs() < 1e-12);
    assert!((scalar(&r, "absorption_probability") + survive - 1.0).abs() < 1e-12);
}

#[test]
fn ideal_memory_round_trip_is_exact() {
    let p = Params { seed: Some(11), trials: Some(40), ..Params::default() };
    let r = compute(&config(Experiment::MemoryRoundtrip, p)).unwrap();
    assert!((scalar(&r, "min_fidelity") - 1.0).abs() < 1e-12);
    assert!((scalar(&r, "min_success_probability") - 1.0).abs() < 1e-12);
    assert_eq!(scalar(&r, "qubits"), 40.0);
}

#[test]
fn explicit_amplitudes_are_normalized() {
    let p = Params { alpha: Some((3.0, 0.0)), beta: Some((0.0, 4.0)), ..Params::default() };
    let r = compute(&config(Experiment::MemoryRoundtrip, p)).unwrap();
    assert!((scalar(&r, "min_fidelity") - 1.0).abs() < 1e-12);
    assert_eq!(scalar(&r, "qubits"), 1.0);
}

#[test]
fn realized_memory_gate_improves_with_cycles() {
    let fidelity = |n| {
        let p = Params { cycles: Some(n), gate: Some(GateChoice::Realized), trials: Some(10), ..Params::default() };
        scalar(&compute(&config(Experiment::MemoryRoundtrip, p)).unwrap(), "min_fidelity")
    };
    let (coarse, fine) = (fidelity(21), fidelity(401));
    assert!(coarse < fine && fine < 1.0, "{coarse} {fine}");
    assert!(fine > 0.999, "{fine}");
}

#[test]
fn cnot_is_exact_on_every_branch() {
    let p = Params { seed: Some(5), trials: Some(10), ..Params::default() };
    let r = compute(&config(Experiment::Cnot, p)).unwrap();
    assert!((scalar(&r, "min_fidelity") - 1.0).abs() < 1e-12);
    assert_eq!(scalar(&r, "inputs"), 14.0);
    assert_eq!(r.outputs.branches.len(), 16);
    for row in &r.outputs.branches {
        assert!((row.probability - 0.25).abs() < 1e-12);
    }
}

#[test]
fn even_cycles_is_a_precondition_failure() {
    let p = Params { cycles: Some(4), ..Params::default() };
    let err = compute(&config(Experiment::ShutterEvolve, p)).unwrap_err();
    assert!(matches!(err, CliError::Precondition(_)), "{err:?}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn foreign_and_bad_parameters_are_rejected() {
    let cases = [
        (Experiment::Cnot, Params { theta: Some(ThetaSpec::Radians(0.1)), ..Params::default() }),
        (Experiment::Interrogate, Params { particle: true, ..Params::default() }),
        (Experiment::ShutterConverge, Params { seed: Some(1), ..Params::default() }),
        (Experiment::Interrogate, Params { cycles: Some(0), ..Params::default() }),
        (Experiment::MemoryRoundtrip, Params { beta: Some((1.0, 0.0)), ..Params::default() }),
        (Experiment::MemoryRoundtrip, Params { gate: Some(GateChoice::Realized), ..Params::default() }),
        (Experiment::ShutterEvolve, Params { input: Some("P2".into()), ..Params::default() }),
    ];
    for (e, p) in cases {
        let err = compute(&config(e, p.clone())).unwrap_err();
        assert!(matches!(err, CliError::Usage { .. }), "{e} {p:?}: {err:?}");
    }
    assert!("0".parse::<ThetaSpec>().is_err());
    assert!("pi/0".parse::<ThetaSpec>().is_err());
    assert!("north".parse::<ThetaSpec>().is_err());
}

#[test]
fn runs_are_deterministic() {
    let configs = [
        config(Experiment::Cnot, Params { seed: Some(9), trials: Some(8), ..Params::default() }),
        config(Experiment::MemoryRoundtrip, Params { seed: Some(9), trials: Some(8), ..Params::default() }),
        config(Experiment::ShutterConverge, Params { cycles: Some(31), ..Params::default() }),
    ];
    for cfg in configs {
        let a = compute(&cfg).unwrap().payload();
        let b = compute(&cfg).unwrap().payload();
        assert_eq!(a, b);
        let mut ja = Vec::new();
        let mut jb = Vec::new();
        write_records(&[a], Format::Json, None, &mut ja).unwrap();
        write_records(&[b], Format::Json, None, &mut jb).unwrap();
        assert_eq!(ja, jb);
    }
    let other = config(Experiment::Cnot, Params { seed: Some(10), trials: Some(8), ..Params::default() });
    let first = config(Experiment::Cnot, Params { seed: Some(9), trials: Some(8), ..Params::default() });
    assert_ne!(compute(&other).unwrap().parameters, compute(&first).unwrap().parameters);
}

#[test]
fn json_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    for (e, p) in [
        (Experiment::ShutterEvolve, Params { cycles: Some(23), particle: true, ..Params::default() }),
        (Experiment::Interrogate, Params { bomb: true, ..Params::default() }),
        (Experiment::Cnot, Params { trials: Some(3), ..Params::default() }),
    ] {
        let mut cfg = config(e, p);
        let path = dir.path().join(format!("{e}.json"));
        cfg.output.path = Some(path.clone());
        let record = run(&cfg).unwrap();
        let back = read_json_records(&path).unwrap();
        assert_eq!(back, vec![record]);
    }
}

#[test]
fn csv_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("converge.csv");
    let cfg = config(Experiment::ShutterConverge, Params { cycles: Some(41), ..Params::default() });
    let record = compute(&cfg).unwrap();
    write_record_file(&record, Format::Csv, &path).unwrap();
    let rows = read_csv_rows(&path).unwrap();
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row["experiment"], "shutter-converge");
    assert_eq!(row["cycles"], "41");
    assert_eq!(row["theta"].parse::<f64>().unwrap(), record.parameters.theta.unwrap());
    for (k, v) in &record.outputs.scalars {
        let got: f64 = row[k].parse().unwrap();
        assert!((got - v).abs() <= 1e-15 * v.abs().max(1e-300), "{k}");
        assert_eq!(got.to_bits(), v.to_bits(), "{k}");
    }
}

#[test]
fn interrogation_sweep_decreases_with_cycles() {
    let base = config(Experiment::Interrogate, Params { bomb: true, ..Params::default() });
    let values = parse_values(SweepParam::Cycles, "1..=100").unwrap();
    let records = sweep(&base, SweepParam::Cycles, &values).unwrap();
    assert_eq!(records.len(), 100);
    let p: Vec<f64> = records.iter().map(|r| scalar(r, "explosion_probability")).collect();
    assert!((p[0] - 1.0).abs() < 1e-12);
    assert!(p.windows(2).all(|w| w[1] < w[0]));
    for (n, (r, &pn)) in records.iter().zip(&p).enumerate() {
        assert_eq!(r.parameters.cycles, Some(n as u32 + 1));
        let oracle = 1.0 - (PI / (2.0 * (n + 1) as f64)).cos().powi(2 * (n as i32 + 1));
        assert!((pn - oracle).abs() < 1e-12);
    }
}

#[test]
fn convergence_sweep_decreases_with_expected_rate() {
    let base = config(Experiment::ShutterConverge, Params::default());
    let values = parse_values(SweepParam::Cycles, "3..=201:2").unwrap();
    let records = sweep(&base, SweepParam::Cycles, &values).unwrap();
    for key in ["leakage", "empty_leakage", "operator_distance"] {
        let v: Vec<f64> = records.iter().map(|r| scalar(r, key)).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]), "{key}");
    }
    let (x, y): (Vec<f64>, Vec<f64>) = records
        .iter()
        .skip(records.len() / 2)
        .map(|r| ((r.parameters.cycles.unwrap() as f64).ln(), scalar(r, "empty_leakage").ln()))
        .unzip();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    assert!((slope + 2.0).abs() < 0.1, "{slope}");
}

#[test]
fn single_value_sweep_equals_run() {
    let base = config(Experiment::Interrogate, Params { bomb: true, ..Params::default() });
    let swept = sweep(&base, SweepParam::Cycles, &parse_values(SweepParam::Cycles, "17").unwrap()).unwrap();
    let direct = config(Experiment::Interrogate, Params { bomb: true, cycles: Some(17), ..Params::default() });
    assert_eq!(swept.len(), 1);
    assert_eq!(swept[0].payload(), compute(&direct).unwrap().payload());

    let theta_sweep = sweep(&base, SweepParam::Theta, &parse_values(SweepParam::Theta, "pi/10, 0.25").unwrap()).unwrap();
    assert_eq!(theta_sweep[0].parameters.theta, Some(PI / 10.0));
    assert_eq!(theta_sweep[1].parameters.theta, Some(0.25));
}

#[test]
fn sweep_rejects_empty_and_mismatched_values() {
    let base = config(Experiment::Interrogate, Params::default());
    assert!(matches!(sweep(&base, SweepParam::Cycles, &[]), Err(CliError::Usage { .. })));
    let angles = parse_values(SweepParam::Theta, "0.1").unwrap();
    assert!(sweep(&base, SweepParam::Cycles, &angles).is_err());
    let seeds = parse_values(SweepParam::Seed, "1,2").unwrap();
    assert!(matches!(sweep(&base, SweepParam::Seed, &seeds), Err(CliError::Usage { field: "seed", .. })));
}
