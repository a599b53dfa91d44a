use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use monoforge::formula::{validate_class, Clause, CnfFormula, Polarity, ProblemClass, Var};
use monoforge::gadgets::{
    build_core8, build_f2, build_f3, build_frak_m, build_frak_mbar, build_g, build_h, build_m,
    build_m_enforcer, build_mbar_enforcer, build_n, build_s, build_u, build_u_nae, build_y_core,
    build_z_core, q1mon, q3, FreshVarAllocator,
};
use monoforge::miner::{mine, mine_from, MinerConfig};
use monoforge::nae::{
    complete_component_check, is_nae_satisfied, nae_solve_e2, variable_graph, NaeError,
};
use monoforge::qbf::{
    qbf_truth, read_qdimacs, transform_1122, transform_2222, write_qdimacs, QbfError, QbfTruth,
};
use monoforge::reduction::{reduce_3sat22_to_mono22, reduce_star22_to_mono22, ReductionError};
use monoforge::sat::{
    count_models, solve_with, verify_rup, RupCheck, RupProof, SolveError, SolveResult, SolverConfig,
};
use monoforge::selftest::run_selftest;
use serde_json::json;

use crate::io::{
    parse_assignment, read_formula, read_text, render_assignment, render_formula, write_text,
};
use crate::{
    Command, Format, GadgetName, NaeAction, QbfAction, SourceArg, EXIT_INVALID, EXIT_NO, EXIT_OK,
};

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Gadget { name, format, out } => gadget(name, format, out.as_deref()),
        Command::Validate {
            class,
            input,
            format,
        } => validate(&class, &input, format),
        Command::Solve {
            input,
            format,
            proof,
            budget,
        } => solve(&input, format, proof.as_deref(), budget),
        Command::Count { input, format, cap } => count(&input, format, cap),
        Command::RupCheck {
            input,
            proof,
            format,
        } => rup_check(&input, &proof, format),
        Command::Reduce {
            from,
            input,
            out,
            provenance,
            format,
        } => reduce(from, &input, out.as_deref(), provenance.as_deref(), format),
        Command::Qbf { action, input, out } => qbf(action, &input, out.as_deref()),
        Command::Nae {
            action,
            input,
            format,
            assignment,
            complete,
        } => nae(action, &input, format, assignment.as_deref(), complete),
        Command::Mine {
            vars,
            clauses,
            template,
            seed,
            iters,
            sideways,
            stall,
            out,
            trace,
        } => {
            let opts = MineOptions {
                vars,
                clauses,
                template,
                seed,
                iters,
                sideways,
                stall,
                out,
                trace,
            };
            mine_cmd(opts)
        }
        Command::Selftest => selftest(),
    }
}

fn ports(n: u32) -> Vec<Var> {
    (1..=n).map(Var::new).collect()
}

fn gadget(name: GadgetName, format: Format, out: Option<&Path>) -> Result<u8> {
    let text = match name {
        GadgetName::Q3 | GadgetName::Q1mon => {
            if !matches!(format, Format::Qdimacs | Format::Dimacs | Format::Auto) {
                bail!("quantified gadgets are printed as qdimacs");
            }
            write_qdimacs(&if name == GadgetName::Q3 {
                q3()
            } else {
                q1mon()
            })
        }
        _ => render_formula(&gadget_formula(name)?, format)?,
    };
    write_text(out, &text)?;
    Ok(EXIT_OK)
}

fn gadget_formula(name: GadgetName) -> Result<CnfFormula> {
    let p = ports(3);
    let triple = |sign: i32| -> [Clause; 3] {
        [0, 3, 6].map(|o| Clause::from_dimacs(&[sign * (o + 1), -sign * (o + 2), -sign * (o + 3)]))
    };
    Ok(match name {
        GadgetName::M => build_m(),
        GadgetName::U => build_u(),
        GadgetName::Core8 => build_core8(),
        GadgetName::UNae => build_u_nae(),
        GadgetName::YCore => build_y_core(),
        GadgetName::ZCore => build_z_core(),
        GadgetName::F2 => build_f2(),
        GadgetName::F3 => build_f3(),
        GadgetName::G => build_g(),
        GadgetName::H => build_h(),
        GadgetName::MEnforcer => {
            build_m_enforcer(&mut FreshVarAllocator::after(3), 1, p[0], p[1], p[2])?.formula
        }
        GadgetName::MbarEnforcer => {
            build_mbar_enforcer(&mut FreshVarAllocator::after(3), 1, p[0], p[1], p[2])?.formula
        }
        GadgetName::N => build_n(&mut FreshVarAllocator::after(1), 1, p[0]).formula,
        GadgetName::S => {
            build_s(
                &mut FreshVarAllocator::after(3),
                [p[0], p[1], p[2]],
                Polarity::Positive,
            )
            .formula
        }
        GadgetName::Sbar => {
            build_s(
                &mut FreshVarAllocator::after(3),
                [p[0], p[1], p[2]],
                Polarity::Negative,
            )
            .formula
        }
        GadgetName::FrakM => build_frak_m(&mut FreshVarAllocator::after(9), 0, &triple(1))?.formula,
        GadgetName::FrakMbar => {
            build_frak_mbar(&mut FreshVarAllocator::after(9), 0, &triple(-1))?.formula
        }
        GadgetName::Q3 | GadgetName::Q1mon => {
            unreachable!("quantified gadgets are handled by the caller")
        }
    })
}

fn validate(class: &str, input: &Path, format: Format) -> Result<u8> {
    let class: ProblemClass = class.parse().map_err(anyhow::Error::msg)?;
    let f = read_formula(input, format)?;
    let report = validate_class(&f, class);
    if report.verdict() {
        println!("valid: {} variables, {} clauses", f.n_vars(), f.len());
        Ok(EXIT_OK)
    } else {
        println!("invalid: {} violations", report.violations.len());
        println!("{report}");
        Ok(EXIT_INVALID)
    }
}

fn solve(input: &Path, format: Format, proof: Option<&Path>, budget: u64) -> Result<u8> {
    let f = read_formula(input, format)?;
    let config = SolverConfig {
        conflict_budget: budget,
        trace: proof.is_some(),
    };
    match solve_with(&f, config) {
        Ok(SolveResult::Sat(model)) => {
            println!("s SATISFIABLE");
            println!("{}", render_assignment(&model));
            Ok(EXIT_OK)
        }
        Ok(SolveResult::Unsat(trace)) => {
            println!("s UNSATISFIABLE");
            if let (Some(path), Some(trace)) = (proof, trace) {
                write_text(Some(path), &trace.to_drup())?;
            }
            Ok(EXIT_NO)
        }
        Err(SolveError::Budget { budget }) => bail!("conflict budget of {budget} exhausted"),
    }
}

fn count(input: &Path, format: Format, cap: u64) -> Result<u8> {
    let f = read_formula(input, format)?;
    let m = count_models(&f, cap);
    if m.capped {
        println!("models >= {}", m.count);
    } else {
        println!("models {}", m.count);
    }
    Ok(if m.count == 0 { EXIT_NO } else { EXIT_OK })
}

fn rup_check(input: &Path, proof: &Path, format: Format) -> Result<u8> {
    let f = read_formula(input, format)?;
    let text = read_text(proof)?;
    let parsed = RupProof::parse(&text).map_err(|e| anyhow::anyhow!("{e:?}"))?;
    match verify_rup(&f, &parsed) {
        RupCheck::Verified => {
            println!("verified: {} steps", parsed.len());
            Ok(EXIT_OK)
        }
        RupCheck::Rejected { step, failure } => {
            println!("rejected at step {step}: {failure:?}");
            Ok(EXIT_INVALID)
        }
    }
}

fn reduce(
    from: SourceArg,
    input: &Path,
    out: Option<&Path>,
    provenance: Option<&Path>,
    format: Format,
) -> Result<u8> {
    let f = read_formula(input, format)?;
    let result = match from {
        SourceArg::Star22 => reduce_star22_to_mono22(&f),
        SourceArg::ThreeSat22 => reduce_3sat22_to_mono22(&f),
    };
    let output = match result {
        Ok(o) => o,
        Err(ReductionError::InvalidInput(report)) => {
            eprintln!("input rejected:\n{report}");
            return Ok(EXIT_INVALID);
        }
        Err(e) => return Err(e.into()),
    };
    let out_format = if format == Format::Auto {
        Format::Dimacs
    } else {
        format
    };
    write_text(out, &render_formula(&output.formula, out_format)?)?;
    if let Some(path) = provenance {
        let doc = json!({ "stats": output.stats, "clauses": output.provenance });
        write_text(Some(path), &serde_json::to_string_pretty(&doc)?)?;
    }
    eprintln!(
        "{} variables added, {} clauses added, {} enforcers",
        output.stats.vars_added, output.stats.clauses_added, output.stats.enforcers_used
    );
    Ok(EXIT_OK)
}

fn qbf(action: QbfAction, input: &Path, out: Option<&Path>) -> Result<u8> {
    let text = read_text(input)?;
    let q = read_qdimacs(&text).with_context(|| format!("parsing {}", input.display()))?;
    let transformed = match action {
        QbfAction::Check => {
            return match qbf_truth(&q)? {
                QbfTruth::Yes => {
                    println!("yes");
                    Ok(EXIT_OK)
                }
                QbfTruth::No { counterexample } => {
                    println!("no");
                    let lits: Vec<String> = q
                        .universals()
                        .iter()
                        .map(|&u| {
                            let id = u.id() as i64;
                            if counterexample.get(u) == Some(true) {
                                id
                            } else {
                                -id
                            }
                            .to_string()
                        })
                        .collect();
                    println!("u {} 0", lits.join(" "));
                    Ok(EXIT_NO)
                }
                QbfTruth::Budget => bail!("an inner SAT call exhausted its conflict budget"),
            };
        }
        QbfAction::Transform1122 => transform_1122(&q),
        QbfAction::Transform2222 => transform_2222(&q),
    };
    match transformed {
        Ok(t) => {
            write_text(out, &write_qdimacs(&t))?;
            Ok(EXIT_OK)
        }
        Err(QbfError::Unbalanced(report)) => {
            eprintln!("input rejected:\n{report}");
            Ok(EXIT_INVALID)
        }
        Err(e) => Err(e.into()),
    }
}

fn nae(
    action: NaeAction,
    input: &Path,
    format: Format,
    assignment: Option<&Path>,
    complete: Option<usize>,
) -> Result<u8> {
    let f = read_formula(input, format)?;
    match action {
        NaeAction::Solve => match nae_solve_e2(&f) {
            Ok(a) => {
                println!("{}", render_assignment(&a));
                Ok(EXIT_OK)
            }
            Err(NaeError::InvalidInput(report)) => {
                eprintln!("input rejected:\n{report}");
                Ok(EXIT_INVALID)
            }
            Err(e) => Err(e.into()),
        },
        NaeAction::Graph => {
            let g = variable_graph(&f);
            let mut text = format!("c vertices {} edges {}\n", g.vertex_count(), g.edge_count());
            if let Some(k) = complete {
                for comp in complete_component_check(&g, k) {
                    let ids: Vec<String> = comp.iter().map(|v| v.to_string()).collect();
                    text.push_str(&format!("c complete K{k}: {}\n", ids.join(" ")));
                }
            }
            text.push_str(&g.to_edge_list());
            write_text(None, &text)?;
            Ok(EXIT_OK)
        }
        NaeAction::Check => {
            let Some(path) = assignment else {
                let report = validate_class(&f, ProblemClass::MonoNaeE2);
                println!(
                    "{}",
                    if report.verdict() {
                        "valid".to_string()
                    } else {
                        report.to_string()
                    }
                );
                return Ok(if report.verdict() {
                    EXIT_OK
                } else {
                    EXIT_INVALID
                });
            };
            let a = parse_assignment(&read_text(path)?, f.n_vars())?;
            if is_nae_satisfied(&f, &a)? {
                println!("nae-satisfied");
                Ok(EXIT_OK)
            } else {
                println!("not nae-satisfied");
                Ok(EXIT_NO)
            }
        }
    }
}

struct MineOptions {
    vars: Option<u32>,
    clauses: Option<usize>,
    template: Option<PathBuf>,
    seed: u64,
    iters: usize,
    sideways: Option<f64>,
    stall: Option<usize>,
    out: Option<PathBuf>,
    trace: Option<PathBuf>,
}

fn mine_cmd(opts: MineOptions) -> Result<u8> {
    let start = opts
        .template
        .as_deref()
        .map(|p| read_formula(p, Format::Auto))
        .transpose()?;
    let mut cfg = match (&start, opts.vars, opts.clauses) {
        (Some(t), _, _) => MinerConfig::from_template(t)?,
        (None, Some(n), Some(m)) => MinerConfig::uniform(n, m)?,
        _ => bail!("give --vars and --clauses, or --template"),
    };
    cfg.seed = opts.seed;
    cfg.max_iters = opts.iters;
    if let Some(p) = opts.sideways {
        cfg.sideways_prob = p;
    }
    if let Some(s) = opts.stall {
        cfg.stall_window = s;
    }
    let trace = match start {
        Some(f) => mine_from(&cfg, f)?,
        None => mine(&cfg)?,
    };
    write_text(
        opts.out.as_deref(),
        &render_formula(&trace.best, Format::Dimacs)?,
    )?;
    if let Some(path) = opts.trace.as_deref() {
        let doc = json!({
            "seed": cfg.seed,
            "best_count": trace.best_count,
            "best": trace.best.to_dimacs(),
            "entries": trace.entries,
        });
        write_text(Some(path), &serde_json::to_string_pretty(&doc)?)?;
    }
    eprintln!(
        "best {} models after {} evaluations",
        trace.best_count,
        trace.entries.len()
    );
    Ok(EXIT_OK)
}

fn selftest() -> Result<u8> {
    let results = run_selftest();
    for r in &results {
        println!("{r}");
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} claims hold", results.len());
    Ok(if passed == results.len() {
        EXIT_OK
    } else {
        EXIT_INVALID
    })
}
