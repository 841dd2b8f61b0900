//! Dispatch from a validated configuration to the simulator.

use std::collections::BTreeMap;
use std::time::Instant;

use qshutter_core::interrogation::{interrogate, InterrogationConfig};
use qshutter_core::protocols::{
    cnot_target, derive_all_corrections_with, memory_roundtrip_with, memory_write_with, run_cnot, written_shutter,
    LogicalQubit, PairBranch, TwoQubitState,
};
use qshutter_core::shutter::{
    device_basis, evolve_empty_closed, evolve_with_particle, ideal_gate_table2, realized_gate,
    sin_power_survival_estimate, PairResponse, ShutterCycleConfig,
};
use qshutter_core::{PortLabel, PureState, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Experiment, ExperimentConfig, GateChoice};
use crate::error::{CliError, CliResult};
use crate::record::{BranchRow, MatrixRecord, Outputs, Parameters, ResultRecord, StateRecord, TOOL_VERSION};
use crate::theta::ThetaSpec;

const SUM_TOL: f64 = 1e-12;

fn labels(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_total(what: &str, total: f64, expected: f64) -> CliResult<()> {
    if (total - expected).abs() > SUM_TOL {
        return Err(CliError::Invariant(format!("{what} probabilities sum to {total}, expected {expected}")));
    }
    Ok(())
}

fn resolve_theta(spec: Option<ThetaSpec>, default: ThetaSpec, cycles: u32, p: &mut Parameters) -> f64 {
    let spec = spec.unwrap_or(default);
    let theta = spec.resolve(cycles);
    p.theta = Some(theta);
    p.theta_spec = Some(spec.to_string());
    theta
}

/// Compute the record for `config`. Writes it when an output path is set.
pub fn run(config: &ExperimentConfig) -> CliResult<ResultRecord> {
    let record = compute(config)?;
    if let Some(path) = &config.output.path {
        crate::output::write_record_file(&record, config.output.format, path)?;
    }
    Ok(record)
}

/// Compute the record for `config` without writing anything.
pub fn compute(config: &ExperimentConfig) -> CliResult<ResultRecord> {
    config.validate()?;
    let start = Instant::now();
    let (parameters, outputs) = match config.experiment {
        Experiment::Interrogate => run_interrogate(config)?,
        Experiment::ShutterEvolve => run_shutter_evolve(config)?,
        Experiment::ShutterConverge => run_shutter_converge(config)?,
        Experiment::MemoryRoundtrip => run_memory(config)?,
        Experiment::Cnot => run_cnot_experiment(config)?,
    };
    if let Some((k, v)) = outputs.scalars.iter().find(|(_, v)| !v.is_finite()) {
        return Err(CliError::Invariant(format!("output `{k}` is not finite ({v})")));
    }
    Ok(ResultRecord {
        experiment: config.experiment,
        tool_version: TOOL_VERSION.into(),
        parameters,
        outputs,
        duration_seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_interrogate(config: &ExperimentConfig) -> CliResult<(Parameters, Outputs)> {
    let p = &config.params;
    let cycles = p.cycles.unwrap_or(24);
    let mut params = Parameters { cycles: Some(cycles), bomb: Some(p.bomb), seed: p.seed.unwrap_or(0), ..Default::default() };
    let theta = resolve_theta(p.theta, ThetaSpec::PiOverTwiceCycles, cycles, &mut params);
    let r = interrogate(&InterrogationConfig::new(theta, cycles, p.bomb)?)?;
    check_total("interrogation", r.explosion_probability + r.survival_probability(), 1.0)?;

    let mut out = Outputs::default();
    out.scalars.insert("explosion_probability".into(), r.explosion_probability);
    out.scalars.insert("sin_power_estimate".into(), r.sin_power_estimate);
    out.scalars.insert("survival_probability".into(), r.survival_probability());
    out.scalars.insert("p_h".into(), r.output_probability(PortLabel::H));
    out.scalars.insert("p_v".into(), r.output_probability(PortLabel::V));
    for (k, b) in r.absorption_branches.iter().enumerate() {
        out.branches.push(BranchRow {
            labels: labels(&[("outcome", "absorb".into()), ("cycle", (k + 1).to_string())]),
            probability: b.probability,
            fidelity: None,
        });
    }
    for b in &r.surviving_branches {
        let outcome = b.record.label("outcome").unwrap_or("?").to_string();
        out.branches.push(BranchRow { labels: labels(&[("outcome", outcome)]), probability: b.probability, fidelity: None });
    }
    Ok((params, out))
}

fn port_scalars(out: &mut Outputs, state: &PureState, weight: f64) {
    for (k, name) in ["p_h1", "p_v1", "p_h2", "p_v2"].into_iter().enumerate() {
        out.scalars.insert(name.into(), state.probability(k) * weight);
    }
}

fn run_shutter_evolve(config: &ExperimentConfig) -> CliResult<(Parameters, Outputs)> {
    let p = &config.params;
    let cycles = p.cycles.unwrap_or(23);
    let input_label = p.input.clone().unwrap_or_else(|| "H1".into());
    let mut params = Parameters {
        cycles: Some(cycles),
        particle: Some(p.particle),
        input: Some(input_label.clone()),
        seed: p.seed.unwrap_or(0),
        ..Default::default()
    };
    let theta = resolve_theta(p.theta, ThetaSpec::PiOverCyclesPlusOne, cycles, &mut params);
    let label: PortLabel = input_label.parse().map_err(|_| CliError::usage("input", input_label.clone()))?;
    let basis = device_basis();
    let index = basis
        .index_of(&[label.into()])
        .ok_or_else(|| CliError::usage("input", format!("{input_label} is not a device port")))?;
    let input = PureState::basis_state(basis, index);

    let mut out = Outputs::default();
    if p.particle {
        let cfg = ShutterCycleConfig::new(theta, cycles, true)?;
        let branches = evolve_with_particle(&cfg, &input)?;
        let (absorbed, survived) = (&branches[0], &branches[1]);
        check_total("shutter", absorbed.probability + survived.probability, 1.0)?;
        out.scalars.insert("absorption_probability".into(), absorbed.probability);
        out.scalars.insert("survival_probability".into(), survived.probability);
        out.scalars.insert("sin_power_survival_estimate".into(), sin_power_survival_estimate(theta, cycles));
        match survived.pure_state() {
            Some(s) => {
                port_scalars(&mut out, s, survived.probability);
                out.states.push(StateRecord::from_state("survivor", s));
            }
            None => port_scalars(&mut out, &input, 0.0),
        }
        for (name, b) in [("absorb", absorbed), ("survive", survived)] {
            out.branches.push(BranchRow { labels: labels(&[("outcome", name.into())]), probability: b.probability, fidelity: None });
        }
    } else {
        let u = evolve_empty_closed(theta, cycles)?;
        let s = u.apply(&input)?;
        check_total("shutter", s.norm_sqr(), 1.0)?;
        port_scalars(&mut out, &s, 1.0);
        out.matrices.push(MatrixRecord::from_operator("evolution", &u));
        out.states.push(StateRecord::from_state("output", &s));
    }
    Ok((params, out))
}

fn run_shutter_converge(config: &ExperimentConfig) -> CliResult<(Parameters, Outputs)> {
    let p = &config.params;
    let cycles = p.cycles.unwrap_or(101);
    let mut params = Parameters { cycles: Some(cycles), seed: p.seed.unwrap_or(0), ..Default::default() };
    let theta = resolve_theta(p.theta, ThetaSpec::PiOverCyclesPlusOne, cycles, &mut params);
    let g = realized_gate(theta, cycles)?;
    let ideal = ideal_gate_table2();
    let distance = g.gate.operator().checked_sub(ideal.operator())?.spectral_norm();

    let mut out = Outputs::default();
    out.scalars.insert("leakage".into(), g.leakage);
    out.scalars.insert("empty_leakage".into(), g.empty_leakage);
    out.scalars.insert("absorption".into(), g.absorption);
    out.scalars.insert("operator_distance".into(), distance);
    out.scalars.insert("postselected_deviation".into(), g.postselected_deviation(&ideal));
    out.matrices.push(MatrixRecord::from_operator("gate", g.gate.operator()));
    let basis = g.gate.operator().basis().clone();
    for (k, leak) in g.input_leakage.iter().enumerate() {
        out.branches.push(BranchRow {
            labels: labels(&[("input", basis.label_string(k)), ("outcome", "leak".into())]),
            probability: *leak,
            fidelity: None,
        });
    }
    Ok((params, out))
}

fn random_amplitudes<const N: usize>(rng: &mut ChaCha8Rng) -> [C64; N] {
    loop {
        let v: [C64; N] = std::array::from_fn(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.map(|z| z / n);
        }
    }
}

fn run_memory(config: &ExperimentConfig) -> CliResult<(Parameters, Outputs)> {
    let p = &config.params;
    let gate = p.gate.unwrap_or_default();
    let seed = p.seed.unwrap_or(0);
    let mut params = Parameters { seed, gate: Some(gate), ..Default::default() };
    if gate == GateChoice::Ideal && (p.cycles.is_some() || p.theta.is_some()) {
        return Err(CliError::usage("cycles", "angle and cycles only apply to `--gate realized`"));
    }
    let response = match gate {
        GateChoice::Ideal => PairResponse::table2(),
        GateChoice::Realized => {
            let cycles = p.cycles.expect("validated");
            params.cycles = Some(cycles);
            let theta = resolve_theta(p.theta, ThetaSpec::PiOverCyclesPlusOne, cycles, &mut params);
            realized_gate(theta, cycles)?.response
        }
    };

    let qubits: Vec<LogicalQubit> = match (p.alpha, p.beta) {
        (Some(a), Some(b)) => {
            if p.trials.is_some() {
                return Err(CliError::usage("trials", "explicit amplitudes define a single trial"));
            }
            params.alpha = Some([a.0, a.1]);
            params.beta = Some([b.0, b.1]);
            vec![LogicalQubit::normalized(C64::new(a.0, a.1), C64::new(b.0, b.1))?]
        }
        _ => {
            let trials = p.trials.unwrap_or(100);
            params.trials = Some(trials);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials)
                .map(|_| {
                    let [a, b] = random_amplitudes::<2>(&mut rng);
                    LogicalQubit::normalized(a, b)
                })
                .collect::<Result<_, _>>()?
        }
    };

    let mut out = Outputs::default();
    let (mut min_f, mut sum_f, mut min_wf, mut min_success) = (f64::INFINITY, 0.0, f64::INFINITY, f64::INFINITY);
    let mut count = 0usize;
    for (trial, q) in qubits.iter().enumerate() {
        let branches = memory_roundtrip_with(q, &response)?;
        let success: f64 = branches.iter().map(|b| b.probability).sum();
        if gate == GateChoice::Ideal {
            check_total("memory round-trip", success, 1.0)?;
            for w in memory_write_with(q, &response)? {
                let a = w.record.bit("a").unwrap_or(0);
                min_wf = min_wf.min(written_shutter(q, a).fidelity(&w.final_state)?);
            }
        }
        min_success = min_success.min(success);
        for b in branches {
            min_f = min_f.min(b.fidelity);
            sum_f += b.fidelity;
            count += 1;
            let mut l = BTreeMap::new();
            l.insert("trial".into(), trial.to_string());
            for (k, v) in b.record.entries() {
                l.insert(k.clone(), v.to_string());
            }
            out.branches.push(BranchRow { labels: l, probability: b.probability, fidelity: Some(b.fidelity) });
        }
    }
    out.scalars.insert("min_fidelity".into(), min_f);
    out.scalars.insert("mean_fidelity".into(), sum_f / count.max(1) as f64);
    out.scalars.insert("min_success_probability".into(), min_success);
    if gate == GateChoice::Ideal {
        out.scalars.insert("min_write_fidelity".into(), min_wf);
    }
    out.scalars.insert("qubits".into(), qubits.len() as f64);
    Ok((params, out))
}

fn run_cnot_experiment(config: &ExperimentConfig) -> CliResult<(Parameters, Outputs)> {
    let p = &config.params;
    let seed = p.seed.unwrap_or(0);
    let trials = p.trials.unwrap_or(50);
    let params = Parameters { seed, trials: Some(trials), ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<TwoQubitState> = (0..4)
        .map(|k| Ok(TwoQubitState::basis_state(k)))
        .chain((0..trials).map(|_| TwoQubitState::normalized(random_amplitudes::<4>(&mut rng))))
        .collect::<Result<_, qshutter_core::Error>>()?;

    // (branch, a1, a2) → (probability sum, worst fidelity)
    let mut stats: BTreeMap<(PairBranch, u8, u8), (f64, f64)> = BTreeMap::new();
    let mut min_f = f64::INFINITY;
    for q in &inputs {
        let target = cnot_target(q);
        for a1 in 0..2u8 {
            for a2 in 0..2u8 {
                let branches = run_cnot(q, a1, a2)?;
                check_total("cnot", branches.iter().map(|b| b.probability).sum(), 1.0)?;
                for b in branches {
                    let f = b.corrected.fidelity(&target);
                    min_f = min_f.min(f);
                    let e = stats.entry((b.branch, a1, a2)).or_insert((0.0, f64::INFINITY));
                    e.0 += b.probability;
                    e.1 = e.1.min(f);
                }
            }
        }
    }

    let mut out = Outputs::default();
    out.scalars.insert("min_fidelity".into(), min_f);
    out.scalars.insert("inputs".into(), inputs.len() as f64);
    for a1 in 0..2u8 {
        for a2 in 0..2u8 {
            let corrections = derive_all_corrections_with(a1, a2, &PairResponse::table2())?;
            for (branch, c) in PairBranch::ALL.into_iter().zip(corrections) {
                let (psum, worst) = stats.get(&(branch, a1, a2)).copied().unwrap_or((0.0, f64::NAN));
                let signs: Vec<&str> = c.signs.iter().map(|&s| if s > 0 { "+" } else { "-" }).collect();
                out.branches.push(BranchRow {
                    labels: labels(&[
                        ("branch", branch.label().into()),
                        ("a1", a1.to_string()),
                        ("a2", a2.to_string()),
                        ("flip_control", c.flip_control.to_string()),
                        ("flip_target", c.flip_target.to_string()),
                        ("signs", signs.concat()),
                    ]),
                    probability: psum / inputs.len() as f64,
                    fidelity: Some(worst),
                });
            }
        }
    }
    Ok((params, out))
}
