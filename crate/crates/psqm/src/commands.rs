//! The four subcommands, each producing a [`Report`].

use std::collections::BTreeMap;

use psqm_core::bounds::{
    self, exact_smp_clique_sizes, is_non_degenerate, psqm_lower_bound, random_function_stats, BoundsError,
    FunctionStats, FunctionTable, InputDistribution, Rectangle, Summary,
};
use psqm_core::protocols::{DjProtocol, GeqProtocol, MessageState, Protocol, ProtocolError, Sum2Protocol};
use psqm_core::verify::{self, Coverage, Status, SweepConfig};
use psqm_core::Bits;
use serde_json::{json, Value};

use crate::cli::{BoundArgs, ProtocolArgs, ProtocolKind, RunArgs, StatsArgs, VerifyArgs};
use crate::report::{num, Check, CostRecord, Report};
use crate::table_io::{read_table, TableError};

/// Largest message state written out in full.
const MAX_LISTED_DIM: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Table(#[from] TableError),
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub enum Instance {
    Sum2(Sum2Protocol),
    Geq(GeqProtocol),
    Dj(DjProtocol),
}

impl Instance {
    pub fn protocol(&self) -> &dyn Protocol {
        match self {
            Instance::Sum2(p) => p,
            Instance::Geq(p) => p,
            Instance::Dj(p) => p,
        }
    }
}

pub fn build_protocol(args: &ProtocolArgs) -> Result<Instance, CliError> {
    let require =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| config_error(format!("--{flag} is required for this protocol")));
    let reject = |v: Option<usize>, flag: &str| match v {
        Some(_) => Err(config_error(format!("--{flag} does not apply to this protocol"))),
        None => Ok(()),
    };
    Ok(match args.protocol {
        ProtocolKind::Sum2 => {
            reject(args.l, "l")?;
            reject(args.n, "n")?;
            Instance::Sum2(Sum2Protocol::new(require(args.k, "k")?)?)
        }
        ProtocolKind::Geq => {
            reject(args.n, "n")?;
            Instance::Geq(GeqProtocol::new(require(args.k, "k")?, require(args.l, "l")?)?)
        }
        ProtocolKind::Dj => {
            reject(args.k, "k")?;
            reject(args.l, "l")?;
            Instance::Dj(DjProtocol::new(require(args.n, "n")?)?)
        }
    })
}

fn protocol_config(command: &str, args: &ProtocolArgs) -> BTreeMap<&'static str, Value> {
    let mut c = BTreeMap::new();
    c.insert("command", json!(command));
    c.insert("protocol", json!(format!("{:?}", args.protocol).to_lowercase()));
    for (key, v) in [("k", args.k), ("l", args.l), ("n", args.n)] {
        if let Some(v) = v {
            c.insert(key, json!(v));
        }
    }
    c
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(config_error(format!("--tol must be a finite non-negative number, got {tol}")));
    }
    Ok(())
}

fn bits_list(xs: &[Bits]) -> Value {
    Value::Array(xs.iter().map(|b| json!(b.to_string())).collect())
}

fn status_pass(s: &Status) -> Option<bool> {
    match s {
        Status::Pass => Some(true),
        Status::Fail => Some(false),
        Status::Skipped(_) => None,
    }
}

fn coverage_json(c: &Coverage, randomness: usize) -> Value {
    match c {
        Coverage::Exhaustive { inputs } => json!({"kind": "exhaustive", "inputs": inputs, "randomness": randomness}),
        Coverage::Sampled { inputs, per_class, seed } => json!({
            "kind": "sampled", "inputs": inputs, "per_class": per_class, "seed": seed, "randomness": randomness
        }),
    }
}

fn cost_record(p: &dyn Protocol) -> CostRecord {
    let cost = verify::communication_cost(p);
    CostRecord { value: cost.value, unit: cost.unit.to_string() }
}

fn distribution_json(p: &dyn Protocol, dist: &BTreeMap<u32, f64>) -> Value {
    Value::Object(dist.iter().map(|(y, w)| (p.format_output(*y), num(*w))).collect())
}

pub fn run(args: &RunArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let instance = build_protocol(&args.protocol)?;
    let p = instance.protocol();
    let mut config = protocol_config("run", &args.protocol);
    config.insert("tol", num(args.tol));
    let inputs: Vec<Vec<Bits>> = match &args.inputs {
        Some(list) => {
            config.insert("inputs", json!(list));
            let parsed = list
                .split(',')
                .map(|s| Bits::parse(s.trim()).map_err(|e| config_error(format!("bad input {s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            p.check_inputs(&parsed)?;
            vec![parsed]
        }
        None => {
            config.insert("budget", json!(args.budget));
            if p.input_domain_size() > args.budget {
                return Err(config_error(format!(
                    "{} inputs exceed --budget {}; pass --inputs or raise the budget",
                    p.input_domain_size(),
                    args.budget
                )));
            }
            p.inputs().collect()
        }
    };
    let mut transcripts = Vec::new();
    let mut min_mass: Option<f64> = None;
    for x in &inputs {
        let expected = p.reference(x)?;
        let mut runs = Vec::new();
        let mut average: BTreeMap<u32, f64> = BTreeMap::new();
        let weight = 1.0 / p.randomness_count() as f64;
        for r in 0..p.randomness_count() {
            let t = p.run(x, r)?;
            for (y, w) in &t.output_distribution {
                *average.entry(*y).or_insert(0.0) += weight * w;
            }
            if let Some(y) = expected {
                let m = t.probability_of(y);
                min_mass = Some(min_mass.map_or(m, |v| v.min(m)));
            }
            let outcomes: Vec<Value> = t
                .outcome_distribution
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 1e-15)
                .map(|(i, &w)| json!([i, num(w)]))
                .collect();
            runs.push(json!({
                "randomness": p.describe_randomness(r),
                "output_distribution": distribution_json(p, &t.output_distribution),
                "outcomes": outcomes,
            }));
        }
        transcripts.push(json!({
            "inputs": bits_list(x),
            "reference": expected.map(|y| p.format_output(y)),
            "output_distribution": distribution_json(p, &average),
            "runs": runs,
        }));
    }
    let mut report = Report::new(json!(config));
    let pass = min_mass.map(|m| m >= 1.0 - args.tol);
    let witnesses = match min_mass {
        Some(m) => json!({"min_mass": num(m), "inputs_run": inputs.len()}),
        None => json!({"skipped": "no input lies inside the promise", "inputs_run": inputs.len()}),
    };
    report.checks.push(Check::new("correctness", pass, witnesses));
    report.cost = Some(cost_record(p));
    report.transcripts = Some(Value::Array(transcripts));
    Ok(report)
}

fn state_json(state: &MessageState) -> Value {
    match state {
        MessageState::Quantum(rho) if rho.dim() <= MAX_LISTED_DIM => {
            let d = rho.dim();
            let real: Vec<Vec<Value>> = (0..d).map(|i| (0..d).map(|j| num(rho.get(i, j).re)).collect()).collect();
            let imag: Vec<Vec<Value>> = (0..d).map(|i| (0..d).map(|j| num(rho.get(i, j).im)).collect()).collect();
            json!({"kind": "density_matrix", "dim": d, "real": real, "imag": imag})
        }
        MessageState::Quantum(rho) => json!({"kind": "density_matrix", "dim": rho.dim()}),
        MessageState::Classical(p) => {
            let support: Vec<Value> =
                p.iter().enumerate().filter(|(_, &w)| w > 1e-15).map(|(i, &w)| json!([i, num(w)])).collect();
            json!({"kind": "distribution", "dim": p.len(), "support": support})
        }
    }
}

fn skipped(reason: &str) -> Value {
    json!({ "skipped": reason })
}

pub fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let instance = build_protocol(&args.protocol)?;
    let p = instance.protocol();
    let sampled = p.input_domain_size() > args.budget;
    if sampled && args.seed.is_none() {
        return Err(config_error(format!(
            "{} inputs exceed --budget {}; a --seed is required for the sampled sweep",
            p.input_domain_size(),
            args.budget
        )));
    }
    let cfg = SweepConfig { budget: args.budget, seed: args.seed.unwrap_or(0), tol: args.tol };
    let mut config = protocol_config("verify", &args.protocol);
    config.insert("tol", num(args.tol));
    config.insert("budget", json!(args.budget));
    if let Some(seed) = args.seed {
        config.insert("seed", json!(seed));
    }
    let mut report = Report::new(json!(config));
    let randomness = p.randomness_count();

    let c = verify::check_correctness(p, &cfg)?;
    let case_json = |case: &verify::CorrectnessCase| {
        json!({
            "inputs": bits_list(&case.inputs),
            "randomness": p.describe_randomness(case.randomness),
            "expected": p.format_output(case.expected),
            "mass": num(case.mass),
        })
    };
    report.checks.push(
        Check::new(
            "correctness",
            status_pass(&c.status),
            json!({
                "cases": c.cases,
                "min_mass": num(c.min_mass),
                "worst": c.worst.as_ref().map(case_json),
                "failure_count": c.failure_count,
                "failures": c.failures.iter().map(case_json).collect::<Vec<_>>(),
            }),
        )
        .with_coverage(coverage_json(&c.coverage, randomness)),
    );

    let privacy = verify::check_privacy(p, &cfg).map_err(|e| config_error(format!("privacy check: {e}")))?;
    let coverage = coverage_json(&privacy.coverage, randomness);
    let metric = match privacy.classes.first().map(|c| &c.representative) {
        Some(MessageState::Classical(_)) => "total_variation",
        _ => "frobenius",
    };
    let classes: Vec<Value> = privacy
        .classes
        .iter()
        .map(|cl| {
            json!({
                "output": cl.label,
                "inputs": cl.inputs,
                "max_distance": num(cl.max_distance),
                "pairwise_complete": cl.pairwise_complete,
                "worst_pair": cl.worst_pair.as_ref().map(|(a, b)| json!([bits_list(a), bits_list(b)])),
                "purity": num(cl.purity),
            })
        })
        .collect();
    report.checks.push(
        Check::new("privacy", status_pass(&privacy.status), json!({"metric": metric, "classes": classes}))
            .with_coverage(coverage.clone()),
    );
    let simulators: Vec<Value> = privacy
        .classes
        .iter()
        .map(|cl| json!({"output": cl.label, "distance": num(cl.simulator_distance), "state": state_json(&cl.representative)}))
        .collect();
    report.checks.push(
        Check::new(
            "simulator",
            status_pass(&privacy.simulator_status),
            json!({"metric": metric, "classes": simulators}),
        )
        .with_coverage(coverage.clone()),
    );
    report.checks.push(
        Check::new(
            "class_separation",
            status_pass(&privacy.separation_status),
            json!({"max_product_norm": num(privacy.cross_class_product)}),
        )
        .with_coverage(coverage),
    );
    if let Instance::Dj(dj) = &instance {
        let lit = verify::check_dj_literal_simulator(dj, args.tol)?;
        report.checks.push(Check::new(
            "literal_reject_simulator",
            None,
            json!({
                "skipped": "informational: compares the derived reject distribution with the reading that excludes the zero message",
                "discrepancy": lit.discrepancy,
                "tv_distance": lit.distance.map(num),
            }),
        ));
    }

    for party in 0..p.party_count() {
        let w = verify::check_weight_lemma(p, party, args.tol)?;
        let witnesses = match &w.status {
            Status::Skipped(reason) => skipped(reason),
            _ => json!({
                "variant": match w.variant {
                    verify::WeightVariant::ExcludingOwn => "excluding_own_input",
                    verify::WeightVariant::All => "all_inputs",
                },
                "sums_checked": w.sums_checked,
                "max_sum": num(w.max_sum),
                "worst": w.worst.map(|(x, r, rp)| json!({
                    "input": x.to_string(),
                    "randomness": p.describe_randomness(r),
                    "randomness_prime": p.describe_randomness(rp),
                })),
            }),
        };
        report.checks.push(Check::new(format!("weight_lemma_party_{}", party + 1), status_pass(&w.status), witnesses));
    }

    let (swept, coverage) = verify::sweep_inputs(p, &cfg);
    let weight = 1.0 / swept.len() as f64;
    let mu: verify::InputWeights = swept.into_iter().map(|x| (x, weight)).collect();
    let coverage = coverage_json(&coverage, randomness);
    let purity = verify::check_purity_bounds(p, &mu)?;
    report.checks.push(
        Check::new(
            "purity_bounds",
            status_pass(&purity.status),
            json!({"purity": num(purity.purity), "dim": purity.dim, "lower": num(purity.lower)}),
        )
        .with_coverage(coverage.clone()),
    );
    let claim = verify::check_claim31(p, &mu, args.tol)?;
    let witnesses = match &claim.status {
        Status::Skipped(reason) => skipped(reason),
        _ => json!({"lhs": num(claim.lhs), "rhs": claim.rhs.map(num), "beta": num(claim.beta)}),
    };
    report.checks.push(Check::new("purity_cross_terms", status_pass(&claim.status), witnesses).with_coverage(coverage));

    let cost = verify::communication_cost(p);
    report.checks.push(Check::new(
        "communication_cost",
        Some(true),
        json!({"value": cost.value, "unit": cost.unit.to_string(), "per_party": p.party_costs()}),
    ));
    report.cost = Some(cost_record(p));
    Ok(report)
}

fn rectangle_json(t: &FunctionTable, r: &Rectangle) -> Value {
    json!({
        "rows": r.rows.iter().map(|&i| t.row_labels()[i].clone()).collect::<Vec<_>>(),
        "cols": r.cols.iter().map(|&i| t.col_labels()[i].clone()).collect::<Vec<_>>(),
    })
}

pub fn bound(args: &BoundArgs) -> Result<Report, CliError> {
    let table = read_table(&args.table)?;
    let mu = InputDistribution::uniform_on_domain(&table)?;
    let config = json!({
        "command": "bound",
        "table": {"rows": table.n_rows(), "cols": table.n_cols(), "total": table.is_total()},
        "distribution": "uniform over defined entries",
    });
    let mut report = Report::new(config);

    let nd = is_non_degenerate(&table, &mu)?;
    report.checks.push(Check::new("non_degenerate", Some(nd), json!({ "value": nd })));

    let cap = table.n_rows().max(table.n_cols());
    match bounds::alpha(&table, &mu, cap) {
        Ok(a) => {
            let witness =
                a.witness.as_ref().map(|(r, rp)| json!([rectangle_json(&table, r), rectangle_json(&table, rp)]));
            report.checks.push(Check::new(
                "alpha",
                Some(true),
                json!({"value": num(a.value), "size_cap": cap, "witness": witness}),
            ));
        }
        Err(e @ BoundsError::TooLarge { .. }) => report.checks.push(Check::new("alpha", None, skipped(&e.to_string()))),
        Err(e) => return Err(e.into()),
    }
    let beta = bounds::beta(&table, &mu)?;
    report.checks.push(Check::new("beta", Some(true), json!({ "value": num(beta) })));
    report.checks.push(Check::new("min_entropy", Some(true), json!({ "value": num(bounds::min_entropy(&mu)) })));

    match psqm_lower_bound(&table, &mu) {
        Ok(lb) => report.checks.push(Check::new(
            "lower_bound",
            Some(true),
            json!({"value": num(lb.value), "alpha": num(lb.alpha.value), "beta": num(lb.beta), "min_entropy": num(lb.min_entropy)}),
        )),
        Err(e @ (BoundsError::Degenerate | BoundsError::BetaZero)) => {
            report.checks.push(Check::new("lower_bound", Some(false), json!({ "refused": e.to_string() })))
        }
        Err(e @ BoundsError::TooLarge { .. }) => report.checks.push(Check::new("lower_bound", None, skipped(&e.to_string()))),
        Err(e) => return Err(e.into()),
    }

    match exact_smp_clique_sizes(&table) {
        Ok(c) => report.checks.push(Check::new(
            "clique_sizes",
            Some(true),
            json!({
                "rows": c.rows,
                "cols": c.cols,
                "row_clique": c.row_clique.iter().map(|&i| table.row_labels()[i].clone()).collect::<Vec<_>>(),
                "col_clique": c.col_clique.iter().map(|&i| table.col_labels()[i].clone()).collect::<Vec<_>>(),
            }),
        )),
        Err(e @ BoundsError::TooLarge { .. }) => {
            report.checks.push(Check::new("clique_sizes", None, skipped(&e.to_string())))
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn summary_json(s: &Option<Summary>) -> Value {
    s.map_or(Value::Null, |s| json!({"min": num(s.min), "median": num(s.median), "max": num(s.max)}))
}

fn stats_json(s: &FunctionStats) -> Value {
    json!({
        "tables": s.tables,
        "non_degenerate": s.non_degenerate,
        "non_degenerate_fraction": s.non_degenerate_fraction.map(num),
        "beta_zero": s.beta_zero,
        "max_rectangle_size": s.max_rectangle_size,
        "rectangle_size": summary_json(&s.rectangle_size),
        "bound": summary_json(&s.bound),
        "size_threshold": num(s.size_threshold),
    })
}

pub fn stats(args: &StatsArgs) -> Result<Report, CliError> {
    let sampled = !args.exhaustive && args.trials > 0;
    if sampled && args.seed.is_none() {
        return Err(config_error("--seed is required for sampled tables (or pass --exhaustive)"));
    }
    if args.n == 0 || args.n > bounds::MAX_STATS_BITS {
        return Err(config_error(format!("--n must be in 1..={}", bounds::MAX_STATS_BITS)));
    }
    let seed = args.seed.unwrap_or(0);
    let s = random_function_stats(args.n, args.trials, seed, args.exhaustive)?;
    let mut config = BTreeMap::new();
    config.insert("command", json!("stats"));
    config.insert("n", json!(args.n));
    config.insert("exhaustive", json!(args.exhaustive));
    if !args.exhaustive {
        config.insert("trials", json!(args.trials));
    }
    if let Some(seed) = args.seed {
        config.insert("seed", json!(seed));
    }
    let mut report = Report::new(json!(config));
    let coverage = if args.exhaustive {
        json!({"kind": "exhaustive", "tables": s.tables})
    } else {
        json!({"kind": "sampled", "tables": s.tables, "seed": seed})
    };
    report.checks.push(Check::new("random_functions", Some(true), stats_json(&s)).with_coverage(coverage));
    Ok(report)
}
