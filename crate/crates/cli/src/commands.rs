//! Subcommand bodies. Every analysis prints one JSON object with
//! `"schema": 1`; graph and diagram exports print their own format.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use nuca_core::conservation::{charge_oracle, forbidden_nc_windows, is_distribution_nc, nc_sft, OracleMode, OracleOutcome};
use nuca_core::debruijn::{build_debruijn, build_product, word_name};
use nuca_core::dynamics::{classify, default_n_max, empirical_classify, Verdict, WallHit};
use nuca_core::injectivity::is_distribution_injective;
use nuca_core::parse::{parse_configuration, parse_distribution, parse_pattern, parse_rule_set};
use nuca_core::simulation::space_time;
use nuca_core::surjectivity::forbidden_pattern_dfa_capped;
use nuca_core::{Configuration, Distribution, Error, Execution, RuleSet};

use crate::{Cli, Command, ConsCmd, DiagramFormat, DistArgs, DynCmd, GraphArgs, GraphCmd, GraphFormat, InjCmd, RulesArg, RulesCmd, SimulateArgs, SurjCmd};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::CapExceeded { .. }) { 3 } else { 2 };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn load_rules(arg: &RulesArg) -> Result<Arc<RuleSet>, Failure> {
    let path = &arg.rules;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_rule_set(&text).map(Arc::new).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_dist(arg: &DistArgs) -> Result<Distribution, Failure> {
    let rules = load_rules(&arg.rules)?;
    parse_distribution(rules, &arg.dist).map_err(|e| usage(format!("--dist: {e}")))
}

/// Writes to standard output; a closed pipe is not an error worth reporting.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(mut value: Value) {
    if let Value::Object(map) = &mut value {
        map.insert("schema".into(), json!(1));
    }
    out(&(serde_json::to_string_pretty(&value).expect("JSON values always serialize") + "\n"));
}

fn verdict_code(holds: bool) -> u8 {
    if holds {
        0
    } else {
        1
    }
}

fn names(rules: &RuleSet, ids: &[usize]) -> Value {
    json!(rules.names(ids))
}

fn config_json(x: &Configuration) -> Value {
    let w = x.normalized();
    let w = w.word();
    json!({ "left": w.left(), "mid": w.middle(), "right": w.right(), "anchor": w.anchor() })
}

pub fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Rules(RulesCmd::Validate(arg)) => validate(&arg),
        Command::Graph(GraphCmd::Debruijn(arg)) => debruijn(&arg),
        Command::Graph(GraphCmd::Product(arg)) => product(&arg),
        Command::Surjectivity(SurjCmd::Pattern { rules, pattern, cap }) => surj_pattern(&rules, &pattern, cap),
        Command::Surjectivity(SurjCmd::Dist { dist, cap }) => surj_dist(&dist, cap),
        Command::Injectivity(InjCmd::Dist(dist)) => injectivity(&dist),
        Command::Conservation(ConsCmd::Check { dist, oracle_width, samples, seed }) => {
            conservation_check(&dist, oracle_width, samples, seed, exec)
        }
        Command::Conservation(ConsCmd::Sft { rules, dot }) => sft(&rules, dot.as_deref(), exec),
        Command::Conservation(ConsCmd::Forbidden(rules)) => forbidden(&rules, exec),
        Command::Dynamics(DynCmd::Classify { dist, nmax, empirical, trials, escape }) => {
            dynamics(&dist, nmax, empirical, trials, escape, exec)
        }
        Command::Simulate(args) => simulate(&args),
    }
}

fn validate(arg: &RulesArg) -> Outcome {
    let rules = load_rules(arg)?;
    let list: Vec<Value> = rules
        .ids()
        .map(|f| {
            let rule = rules.rule(f);
            json!({
                "name": rule.name(),
                "declared_radius": rules.original_radius(f),
                "linear": rule.is_linear(),
                "coefficients": rule.coefficients(),
            })
        })
        .collect();
    emit(json!({
        "valid": true,
        "alphabet": rules.alphabet().size(),
        "radius": rules.radius(),
        "rules": list,
    }));
    Ok(0)
}

fn debruijn(arg: &GraphArgs) -> Outcome {
    let g = build_debruijn(load_rules(&arg.rules)?)?;
    out(&match arg.format {
        GraphFormat::Dot => g.to_dot(),
        GraphFormat::Csv => g.to_csv(),
    });
    Ok(0)
}

fn product(arg: &GraphArgs) -> Outcome {
    let p = build_product(load_rules(&arg.rules)?)?;
    match arg.format {
        GraphFormat::Dot => out(&p.to_dot()),
        GraphFormat::Csv => {
            let base = p.base();
            let pair = |n: usize| {
                let (a, b) = p.pair(n);
                format!("{}/{}", word_name(&base.node_word(a)), word_name(&base.node_word(b)))
            };
            let mut csv = String::from("source,target,rule,letter\n");
            for &(u, v, f, a) in p.edges() {
                let _ = writeln!(csv, "{},{},{},{a}", pair(u), pair(v), base.rules().name(f));
            }
            out(&csv);
        }
    }
    Ok(0)
}

fn surj_pattern(arg: &RulesArg, pattern: &str, cap: usize) -> Outcome {
    let rules = load_rules(arg)?;
    let psi = parse_pattern(&rules, pattern).map_err(|e| usage(format!("--pattern: {e}")))?;
    let fp = forbidden_pattern_dfa_capped(rules.clone(), cap)?;
    let missing = fp.unreachable_word(&psi);
    let holds = missing.is_none();
    emit(json!({
        "verdict": if holds { "surjective" } else { "not-surjective" },
        "pattern": names(&rules, &psi),
        "unreachable_word": missing,
    }));
    Ok(verdict_code(holds))
}

fn surj_dist(arg: &DistArgs, cap: usize) -> Outcome {
    let theta = load_dist(arg)?;
    let report = forbidden_pattern_dfa_capped(theta.rules_arc().clone(), cap)?.check_distribution(&theta)?;
    let w = report.witness.as_ref();
    emit(json!({
        "verdict": if report.surjective { "surjective" } else { "not-surjective" },
        "witness_window": w.map(|w| [w.window.0, w.window.1]),
        "witness_pattern": w.map(|w| names(theta.rules(), &w.pattern)),
        "unreachable_word": w.map(|w| &w.unreachable),
    }));
    Ok(verdict_code(report.surjective))
}

fn injectivity(arg: &DistArgs) -> Outcome {
    let theta = load_dist(arg)?;
    let report = is_distribution_injective(&theta)?;
    emit(json!({
        "verdict": if report.injective { "injective" } else { "not-injective" },
        "witness": report.witness.as_ref().map(|(x, y)| json!({ "x": config_json(x), "y": config_json(y) })),
    }));
    Ok(verdict_code(report.injective))
}

fn oracle_json(outcome: &OracleOutcome, width: u32) -> Value {
    match outcome {
        OracleOutcome::Confirmed { checked } => json!({ "width": width, "result": "confirmed", "checked": checked }),
        OracleOutcome::ZeroNotFixed { position, rule } => {
            json!({ "width": width, "result": "zero-not-fixed", "position": position, "rule": rule })
        }
        OracleOutcome::Violation { x, before, after } => json!({
            "width": width,
            "result": "violation",
            "x": config_json(x),
            // i128 does not fit every JSON reader; charges go out as strings
            "charge_before": before.to_string(),
            "charge_after": after.to_string(),
        }),
    }
}

fn conservation_check(arg: &DistArgs, width: Option<u32>, samples: Option<u64>, seed: u64, exec: Execution) -> Outcome {
    let theta = load_dist(arg)?;
    let report = is_distribution_nc(&theta)?;
    let oracle = match width {
        Some(w) => {
            let mode = match samples {
                Some(samples) => OracleMode::Random { samples, seed },
                None => OracleMode::Exhaustive,
            };
            Some(oracle_json(&charge_oracle(&theta, w, mode, exec)?, w))
        }
        None => None,
    };
    let w = report.witness.as_ref();
    emit(json!({
        "verdict": if report.conserving { "number-conserving" } else { "not-number-conserving" },
        "witness_window": w.map(|(i, j, _)| [i, j]),
        "witness_pattern": w.map(|(_, _, v)| names(theta.rules(), &v.pattern)),
        "violating_word": w.map(|(_, _, v)| &v.word),
        "oracle": oracle,
    }));
    Ok(verdict_code(report.conserving))
}

fn sft(arg: &RulesArg, dot: Option<&Path>, exec: Execution) -> Outcome {
    let rules = load_rules(arg)?;
    let sft = nc_sft(&rules, exec)?;
    if let Some(path) = dot {
        fs::write(path, sft.to_dot()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let point = sft.periodic_point();
    emit(json!({
        "vertices": sft.vertices(),
        "edges": sft.edges().len(),
        "forbidden": sft.forbidden().len(),
        "empty": sft.is_empty(),
        "periodic_point": point.as_ref().map(|p| names(&rules, p)),
    }));
    Ok(verdict_code(!sft.is_empty()))
}

fn forbidden(arg: &RulesArg, exec: Execution) -> Outcome {
    let rules = load_rules(arg)?;
    let set = forbidden_nc_windows(&rules, exec)?;
    let windows: Vec<Value> =
        set.windows.iter().map(|v| json!({ "window": names(&rules, &v.pattern), "u": &v.word })).collect();
    emit(json!({ "radius": rules.radius(), "count": windows.len(), "windows": windows }));
    Ok(0)
}

fn hit_json(hit: &WallHit) -> Value {
    json!({
        "side": hit.side.as_str(),
        "phase": hit.phase,
        "length": hit.length,
        "start": hit.start,
        "orbits": hit.certificate.orbits.len(),
    })
}

fn dynamics(
    arg: &DistArgs,
    nmax: Option<usize>,
    empirical: Option<usize>,
    trials: usize,
    escape: Option<u64>,
    exec: Execution,
) -> Outcome {
    let theta = load_dist(arg)?;
    let n_max = nmax.unwrap_or_else(|| default_n_max(&theta));
    let report = classify(&theta, n_max, exec)?;
    let empirical = match empirical {
        Some(steps) => {
            let window = escape.unwrap_or(steps as u64 / 2);
            let e = empirical_classify(&theta, trials, steps, window, exec)?;
            let trials: Vec<Value> = e.trials.iter().map(|&(p, d)| json!({ "origin": p, "spread": d })).collect();
            Some(json!({ "steps": e.steps, "window": e.window, "escaped": e.escaped, "trials": trials }))
        }
        None => None,
    };
    let certificates: Vec<Value> = report.left.iter().chain(&report.right).map(hit_json).collect();
    let holds = report.verdict == Verdict::Equicontinuous;
    emit(json!({
        "verdict": if holds { "equicontinuous" } else { "sensitive-bounded-evidence" },
        "certificates": certificates,
        "bounded": report.bounded(),
        "n_max": report.n_max,
        "empirical": empirical,
    }));
    Ok(verdict_code(holds))
}

fn parse_window(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || usage(format!("--window: expected a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let (a, b): (i64, i64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(usage(format!("--window: {a} > {b}")));
    }
    Ok((a, b))
}

fn simulate(args: &SimulateArgs) -> Outcome {
    let theta = load_dist(&args.dist)?;
    let (a, b) = parse_window(&args.window)?;
    let x = parse_configuration(theta.rules().alphabet(), &args.config).map_err(|e| usage(format!("--config: {e}")))?;
    let diagram = space_time(&theta, &x, a, b, args.steps)?;
    let text = match args.format {
        DiagramFormat::Pgm => diagram.to_pgm(),
        DiagramFormat::Csv => diagram.to_csv(),
        DiagramFormat::Text => diagram.to_text(),
    };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => out(&text),
    }
    Ok(0)
}
