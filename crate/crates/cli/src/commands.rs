use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use elrepair_core::fixture;
use elrepair_core::normalize::normalize_tbox;
use elrepair_core::oracle::{load_oracle, DeclarativeOracle};
use elrepair_core::parse::{parse_axiom_list, parse_tbox, serialize_tbox, Warning};
use elrepair_core::report::{to_json, CheckDocument, CompareDocument, PermutationDocument, ReportDocument};
use elrepair_core::repair::{compare_ontologies, default_probe, run_strategy, RepairProblem, StrategySpec};
use elrepair_core::sweep::{
    check_bound, hasse_check as lattice_check, permutation_sweep, permutations, validity_check, Case, Execution,
};
use elrepair_core::corpus::{corpus, ProblemParams};
use elrepair_core::{Signature, TBox};
use elrepair_service::Store;

use crate::args::{
    CompareArgs, Fixture, HasseArgs, NormalizeArgs, PermuteArgs, ProblemArgs, RepairArgs, ServeArgs,
};
use crate::error::{CliError, Result};
use crate::output::{emit, read, write_atomic};

fn warn(source: &str, warnings: &[Warning]) {
    for w in warnings {
        eprintln!("warning: {source}:{}: {}", w.line, w.message);
    }
}

fn read_tbox(path: &Path) -> Result<TBox> {
    let parsed = parse_tbox(&read(path)?).map_err(|source| CliError::Input { path: path.into(), source })?;
    warn(&path.display().to_string(), &parsed.warnings);
    Ok(parsed.tbox)
}

fn read_oracle(path: &Path, sig: Option<&Signature>) -> Result<DeclarativeOracle> {
    let loaded = load_oracle(&read(path)?, sig).map_err(|source| CliError::Input { path: path.into(), source })?;
    warn(&path.display().to_string(), &loaded.warnings);
    Ok(loaded.oracle)
}

fn fixture_oracle(f: Fixture) -> DeclarativeOracle {
    match f {
        Fixture::MiniGalen => fixture::mini_galen_oracle(),
    }
}

/// The repair problem, its oracle and the strategy named by the flags.
fn load_problem(args: &ProblemArgs) -> Result<(RepairProblem, DeclarativeOracle, StrategySpec)> {
    let spec: StrategySpec = args.strategy.parse()?;
    let options = args.options.options();
    let problem = match (args.fixture, &args.ontology, &args.wrong) {
        (Some(Fixture::MiniGalen), _, _) => {
            let (p, warnings) = RepairProblem::from_text(fixture::MINI_GALEN_TBOX, fixture::MINI_GALEN_WRONG, options)?;
            warn("mini-galen", &warnings);
            p
        }
        (None, Some(ontology), Some(wrong)) => {
            let t = read_tbox(ontology)?;
            let w = parse_axiom_list(&read(wrong)?).map_err(|source| CliError::Input { path: wrong.into(), source })?;
            RepairProblem::new(t, w, options)?
        }
        _ => return Err(CliError::Usage("give --fixture, or both --ontology and --wrong".into())),
    };
    let oracle = match (&args.oracle, args.fixture) {
        (Some(path), _) => read_oracle(path, Some(problem.tbox().signature()))?,
        (None, Some(f)) => fixture_oracle(f),
        (None, None) => return Err(CliError::Usage("--oracle is required without --fixture".into())),
    };
    Ok((problem, oracle, spec))
}

/// `given` or a 1-based permutation, returned 0-based.
fn parse_order(text: &str) -> Result<Option<Vec<usize>>> {
    if text.trim() == "given" {
        return Ok(None);
    }
    text.split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(CliError::Usage(format!("cannot read order '{text}': positions are 1-based"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

pub fn repair(args: &RepairArgs) -> Result<ExitCode> {
    let (problem, mut oracle, spec) = load_problem(&args.problem)?;
    let order = parse_order(&args.order)?;
    let run = run_strategy(&problem, &spec, order.as_deref(), &mut oracle)?;
    let doc = ReportDocument::from_run(&run);
    if let Some(path) = &args.output {
        write_atomic(path, &serialize_tbox(&run.final_tbox))?;
    }
    emit(args.report.as_deref(), &doc.to_json())?;
    eprintln!(
        "{}: {} weakened, {} completed, {} added, {} distinct queries, repair {}",
        doc.strategy,
        doc.weakened.len(),
        doc.completed.len(),
        doc.added.len(),
        doc.queries_distinct,
        if doc.repair_valid { "valid" } else { "INVALID" }
    );
    Ok(if doc.repair_valid { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

pub fn permute(args: &PermuteArgs) -> Result<ExitCode> {
    let (problem, oracle, spec) = load_problem(&args.problem)?;
    let k = problem.wrong().len();
    check_bound(k, args.bound)?;
    let orders = if args.orders.is_empty() {
        permutations(k)
    } else {
        args.orders
            .iter()
            .map(|o| parse_order(o)?.ok_or_else(|| CliError::Usage("--order takes a permutation here".into())))
            .collect::<Result<Vec<_>>>()?
    };
    let runs = permutation_sweep(&problem, &spec, &oracle, &orders, execution(args.sequential))?;
    let doc = PermutationDocument { strategy: spec.to_string(), runs: runs.iter().map(ReportDocument::from_run).collect() };
    emit(args.report.as_deref(), &to_json(&doc))?;
    let valid = doc.runs.iter().all(|r| r.repair_valid);
    eprintln!("{}: {} orders, {}", doc.strategy, doc.runs.len(), if valid { "all valid" } else { "some INVALID" });
    Ok(if valid { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

pub fn hasse_check(args: &HasseArgs) -> Result<ExitCode> {
    let options = args.options.options();
    let exec = execution(args.sequential);
    let mut cases: Vec<Case> =
        corpus(args.seed, args.count, &ProblemParams::default(), options).into_iter().map(Case::from).collect();
    let mut fixtures = Vec::new();
    if let Some(Fixture::MiniGalen) = args.fixture {
        fixtures.push("mini-galen".to_string());
        cases.push(Case {
            label: "mini-galen".into(),
            problem: fixture::mini_galen(options),
            oracle: fixture::mini_galen_oracle(),
        });
    }
    let invalid_runs = validity_check(&cases, exec)?;
    let lattice = lattice_check(&cases, exec)?;
    let doc = CheckDocument {
        seed: args.seed,
        corpus: args.count,
        fixtures,
        cases: cases.len(),
        runs: cases.len() * StrategySpec::all_named().count(),
        invalid_runs,
        checks: lattice.checks,
        violations: lattice.violations,
    };
    emit(args.report.as_deref(), &to_json(&doc))?;
    eprintln!(
        "{} cases, {} runs, {} invalid, {} checks, {} violations",
        doc.cases,
        doc.runs,
        doc.invalid_runs.len(),
        doc.checks,
        doc.violations.len()
    );
    Ok(if doc.passed() { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

pub fn compare(args: &CompareArgs) -> Result<ExitCode> {
    let t1 = read_tbox(&args.first)?;
    let t2 = read_tbox(&args.second)?;
    let mut oracle = match (&args.oracle, args.fixture) {
        (Some(path), _) => read_oracle(path, Some(&t1.signature().union(t2.signature())))?,
        (None, Some(f)) => fixture_oracle(f),
        (None, None) => return Err(CliError::Usage("--oracle is required without --fixture".into())),
    };
    let (label, probe) = match &args.probe {
        Some(path) => (
            path.display().to_string(),
            parse_axiom_list(&read(path)?).map_err(|source| CliError::Input { path: path.into(), source })?,
        ),
        None => ("atomic".to_string(), default_probe(&t1, &t2)),
    };
    let c = compare_ontologies(&t1, &t2, &mut oracle, &probe)?;
    let doc = CompareDocument::new(label, probe.len(), c);
    emit(args.report.as_deref(), &to_json(&doc))?;
    Ok(ExitCode::SUCCESS)
}

pub fn normalize(args: &NormalizeArgs) -> Result<ExitCode> {
    let t = read_tbox(&args.input)?;
    emit(args.output.as_deref(), &serialize_tbox(&normalize_tbox(&t)))?;
    Ok(ExitCode::SUCCESS)
}

pub fn serve(args: &ServeArgs) -> Result<ExitCode> {
    let store = match &args.data {
        Some(dir) => Store::open(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?,
        None => Store::in_memory(),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Usage(format!("runtime: {e}")))?;
    runtime.block_on(async {
        let listener =
            tokio::net::TcpListener::bind(args.addr).await.map_err(|e| CliError::Usage(format!("{}: {e}", args.addr)))?;
        let addr = listener.local_addr().map_err(|e| CliError::Usage(e.to_string()))?;
        println!("listening on {addr}");
        elrepair_service::serve(listener, Arc::new(store)).await.map_err(|e| CliError::Usage(e.to_string()))
    })?;
    Ok(ExitCode::SUCCESS)
}
