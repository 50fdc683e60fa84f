use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use pcmrank_core::axioms::Instance;
use pcmrank_core::registry::{self, CaseReport, Expectation};
use pcmrank_core::theorem::CHAIN_TOL;
use pcmrank_core::{
    aggregate, build_proof_chain, em_weights, equalize_pair, falsify, lemma_meta_check,
    method_rank, method_weights, verify_proof_identities, AxiomId, EmOptions, Pcm, Permutation,
    RankConfig, Ranking, RationalExponent, SearchConfig, Witness,
};
use serde::Serialize;
use serde_json::json;

use crate::{CheckArgs, Cli, Command, Format, MAX_N};

type CmdResult = Result<ExitCode, String>;

pub fn run(cli: &Cli) -> CmdResult {
    let cfg = rank_config(cli)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Weights { method, input } => {
            let a = load(input, cli)?;
            let w = method_weights(*method, &a, &cfg.em).map_err(|e| e.to_string())?;
            let lambda = match method {
                pcmrank_core::MethodId::Em => {
                    Some(em_weights(&a, &cfg.em).map_err(|e| e.to_string())?.1)
                }
                _ => None,
            };
            match fmt {
                Format::Json => emit_json(&json!({
                    "method": method,
                    "n": a.n(),
                    "weights": w,
                    "lambda_max": lambda,
                })),
                Format::Text => {
                    let mut out = format!("method {method}, n = {}\n", a.n());
                    for (i, v) in w.as_slice().iter().enumerate() {
                        writeln!(out, "{:>4}  {v:.10}", i + 1).unwrap();
                    }
                    if let Some(l) = lambda {
                        writeln!(out, "lambda_max = {l:.10}").unwrap();
                    }
                    print!("{out}");
                }
            }
        }
        Command::Rank { method, input } => {
            let a = load(input, cli)?;
            let r = method_rank(*method, &a, &cfg).map_err(|e| e.to_string())?;
            match fmt {
                Format::Json => emit_json(&json!({"method": method, "n": a.n(), "ranking": r})),
                Format::Text => println!("{}", order_text(&r)),
            }
        }
        Command::Aggregate { input, output } => {
            let ms = input
                .iter()
                .map(|p| load(p, cli))
                .collect::<Result<Vec<_>, _>>()?;
            let agg = aggregate(&ms).map_err(|e| e.to_string())?;
            match output {
                Some(path) => fs::write(path, agg.to_csv())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => match fmt {
                    Format::Json => emit_json(&json!({"n": agg.n(), "matrix": agg})),
                    Format::Text => print!("{}", agg.to_csv()),
                },
            }
        }
        Command::Check(args) => {
            let inst = build_instance(args, cli)?;
            let verdict = inst.check(args.method, &cfg).map_err(|e| e.to_string())?;
            match fmt {
                Format::Json => emit_json(&json!({
                    "axiom": args.axiom,
                    "method": args.method,
                    "holds": verdict.holds,
                    "witness": verdict.witness,
                })),
                Format::Text => match &verdict.witness {
                    None => println!("{} holds for {} on this instance", args.axiom, args.method),
                    Some(w) => println!(
                        "{} violated for {}: {}",
                        args.axiom, args.method, w.narrative
                    ),
                },
            }
        }
        Command::Falsify {
            method,
            axiom,
            trials,
            seed,
            n_min,
            n_max,
        } => {
            let search = SearchConfig {
                seed: *seed,
                trials: *trials,
                n_range: (*n_min, *n_max),
                ..SearchConfig::default()
            };
            check_n_range(&search)?;
            let found = falsify(*method, *axiom, &search, &cfg).map_err(|e| e.to_string())?;
            match fmt {
                Format::Json => emit_json(&found),
                Format::Text => match &found {
                    None => println!(
                        "no witness found ({method}, {axiom}, {trials} trials, seed {seed})"
                    ),
                    Some(w) => print!("{}", witness_text(w)),
                },
            }
        }
        Command::Lemmas {
            method,
            trials,
            seed,
        } => {
            let search = SearchConfig {
                seed: *seed,
                trials: *trials,
                ..SearchConfig::default()
            };
            let report = lemma_meta_check(*method, &search, &cfg).map_err(|e| e.to_string())?;
            match fmt {
                Format::Json => emit_json(&report),
                Format::Text => {
                    let mut out = format!("method {method}, {trials} trials, seed {seed}\n");
                    for (name, w) in [("ANO", &report.ano_witness), ("AI", &report.ai_witness)] {
                        match w {
                            None => writeln!(out, "{name}: no witness found").unwrap(),
                            Some(w) => writeln!(out, "{name}: violated. {}", w.narrative).unwrap(),
                        }
                    }
                    for imp in &report.implications {
                        writeln!(
                            out,
                            "ANO & AI => {}: {} (premises hold: {}, conclusion violated: {})",
                            imp.conclusion,
                            if imp.status == pcmrank_core::axioms::ImplicationStatus::Consistent {
                                "consistent"
                            } else {
                                "CONTRADICTED"
                            },
                            yes_no(imp.premises_hold),
                            yes_no(imp.conclusion_violated),
                        )
                        .unwrap();
                    }
                    print!("{out}");
                }
            }
        }
        Command::Repro { case, all: _ } => {
            let reports = match case {
                Some(id) => {
                    vec![registry::paper_counterexample(id, &cfg).map_err(|e| e.to_string())?]
                }
                None => registry::all_counterexamples(&cfg).map_err(|e| e.to_string())?,
            };
            match fmt {
                Format::Json => emit_json(&reports),
                Format::Text => print!("{}", repro_text(&reports)),
            }
            if reports.iter().any(|r| !r.reproduced) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::ProofChain { input, equalize } => {
            let mut a = load(input, cli)?;
            if a.n() < 3 {
                return Err(format!("proof chain needs n >= 3, got {}", a.n()));
            }
            if *equalize {
                a = equalize_pair(&a, 0, 1).map_err(|e| e.to_string())?;
            }
            let chain = build_proof_chain(&a).map_err(|e| match e {
                pcmrank_core::Error::UnequalRowProducts { .. } => {
                    format!("{e}; rerun with --equalize")
                }
                e => e.to_string(),
            })?;
            let ids = verify_proof_identities(&chain, CHAIN_TOL).map_err(|e| e.to_string())?;
            match fmt {
                Format::Json => emit_json(&json!({
                    "alpha": chain.alpha,
                    "B": chain.b,
                    "C": chain.c,
                    "D": chain.d,
                    "E": chain.e,
                    "identities": {
                        "inv_swap": ids.inv_swap.holds,
                        "swap_aggregation": ids.swap_aggregation.map(|c| c.holds),
                        "unit_row_means": ids.unit_row_means.holds,
                        "alpha": ids.alpha.holds,
                    },
                    "max_deviation": ids,
                })),
                Format::Text => {
                    let mut out = String::new();
                    for (name, m) in [
                        ("A", &chain.a),
                        ("B", &chain.b),
                        ("C", &chain.c),
                        ("D", &chain.d),
                        ("E", &chain.e),
                    ] {
                        writeln!(out, "{name} =\n{m}").unwrap();
                    }
                    writeln!(out, "alpha = sqrt(a_12) = {:.10}", chain.alpha).unwrap();
                    let line = |name: &str, c: pcmrank_core::theorem::IdentityCheck| {
                        format!(
                            "{name}: {} (max deviation {:.3e})\n",
                            pass_fail(c.holds),
                            c.max_deviation
                        )
                    };
                    out += &line("sigma_12(E) = opposite(E)", ids.inv_swap);
                    match ids.swap_aggregation {
                        Some(c) => {
                            out += &line("sigma_12(E)^(1/(n-2)) = aggregate of sigma_2m(E)", c)
                        }
                        None => out +=
                            "sigma_12(E)^(1/(n-2)) = aggregate of sigma_2m(E): vacuous for n = 3\n",
                    }
                    out += &line("row geometric means of E equal 1", ids.unit_row_means);
                    out += &line("e_12 = sqrt(a_12)", ids.alpha);
                    print!("{out}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn rank_config(cli: &Cli) -> Result<RankConfig, String> {
    for (name, v) in [
        ("--tie-tol", cli.tie_tol),
        ("--reciprocity-tol", cli.reciprocity_tol),
        ("--em-tol", cli.em_tol),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(format!("{name} must be positive, got {v}"));
        }
    }
    if cli.em_max_iterations == 0 {
        return Err("--em-max-iterations must be at least 1".into());
    }
    Ok(RankConfig {
        tie_tol: cli.tie_tol,
        em: EmOptions {
            max_iterations: cli.em_max_iterations,
            convergence_tol: cli.em_tol,
        },
    })
}

fn check_n_range(search: &SearchConfig) -> Result<(), String> {
    if search.n_range.1 > MAX_N {
        return Err(format!("--n-max is limited to {MAX_N}"));
    }
    Ok(())
}

fn load(path: &Path, cli: &Cli) -> Result<Pcm, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let a =
        Pcm::parse(&text, cli.reciprocity_tol).map_err(|e| format!("{}: {e}", path.display()))?;
    if a.n() > MAX_N {
        return Err(format!(
            "{}: n = {} exceeds the limit of {MAX_N}",
            path.display(),
            a.n()
        ));
    }
    Ok(a)
}

/// Parses a 1-based "i,j" into 0-based indices.
fn parse_pair(flag: &str, text: &str) -> Result<(usize, usize), String> {
    let bad = || format!("{flag} expects two 1-based indices like 1,2, got {text:?}");
    let (i, j) = text.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn required<T: Clone>(v: &Option<T>, flag: &str, axiom: AxiomId) -> Result<T, String> {
    v.clone()
        .ok_or_else(|| format!("{axiom} check requires {flag}"))
}

fn build_instance(args: &CheckArgs, cli: &Cli) -> Result<Instance, String> {
    let a = load(&args.input, cli)?;
    let ax = args.axiom;
    Ok(match ax {
        AxiomId::Ano => {
            let text = required(&args.perm, "--perm", ax)?;
            let sigma = Permutation::parse_one_based(&text).map_err(|e| e.to_string())?;
            Instance::Ano { a, sigma }
        }
        AxiomId::Ai => {
            if args.input2.is_empty() {
                return Err("AI check requires at least one --input2".into());
            }
            let mut matrices = vec![a];
            for p in &args.input2 {
                matrices.push(load(p, cli)?);
            }
            Instance::Ai { matrices }
        }
        AxiomId::Inv => Instance::Inv { a },
        AxiomId::Rsi => {
            let text = required(&args.kappa, "--kappa", ax)?;
            let kappa = RationalExponent::parse(&text).map_err(|e| e.to_string())?;
            Instance::Rsi { a, kappa }
        }
        AxiomId::Iic => Instance::Iic {
            a,
            cell: parse_pair("--cell", &required(&args.cell, "--cell", ax)?)?,
            value: required(&args.value, "--value", ax)?,
            pair: parse_pair("--pair", &required(&args.pair, "--pair", ax)?)?,
        },
        AxiomId::Res => Instance::Res {
            a,
            pair: parse_pair("--pair", &required(&args.pair, "--pair", ax)?)?,
            value: required(&args.increase, "--increase", ax)?,
        },
    })
}

fn emit_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

fn order_text(r: &Ranking) -> String {
    r.groups()
        .iter()
        .map(|g| {
            g.iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(" ∼ ")
        })
        .collect::<Vec<_>>()
        .join(" ≻ ")
}

fn witness_text(w: &Witness) -> String {
    let mut out = format!("{} violated by {}\n{}\n", w.axiom, w.method, w.narrative);
    for (k, m) in w.matrices.iter().enumerate() {
        writeln!(out, "matrix {}:", k + 1).unwrap();
        for row in m.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
    }
    out
}

fn repro_text(reports: &[CaseReport]) -> String {
    let mut out = String::new();
    for r in reports {
        writeln!(
            out,
            "{} {} ({}, {}): expected {}, observed {}",
            pass_fail(r.reproduced),
            r.id,
            r.method,
            r.axiom,
            expectation(r.expected),
            expectation(r.observed)
        )
        .unwrap();
        for d in &r.details {
            writeln!(out, "    {d}").unwrap();
        }
    }
    let ok = reports.iter().filter(|r| r.reproduced).count();
    writeln!(out, "{ok}/{} cases reproduced", reports.len()).unwrap();
    out
}

fn expectation(e: Expectation) -> &'static str {
    match e {
        Expectation::Holds => "holds",
        Expectation::Fails => "fails",
    }
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
