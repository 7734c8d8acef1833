use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use qoinc::automata::text::{format_nfa, parse_cnf, parse_nfa, parse_ocn};
use qoinc::automata::{equivalence_counterexample, Nfa};
use qoinc::inclusion::{cfg_inc_antichain, cfg_inc_word, decide_nfa, nfa_in_ocn, Run};
use qoinc::quasiorder::{MyhillOrder, Side};
use qoinc::residual::{self, nl_learn};
use qoinc::slpsearch::{parse_regex, repair_compress, search_automaton, LineSearch, SearchStats, Slp};
use qoinc::{Limits, DEFAULT_ITERATION_CAP};
use serde_json::{json, Value};

use crate::{CfgAlgorithm, CheckArgs, Cli, Command, IncludeKind, Method, SideArg};

/// A mistake in how the tool was invoked rather than in an input file.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 2 for usage errors, 3 for malformed input, 4 when a resource cap is hit.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<qoinc::Error>() {
            return match err {
                qoinc::Error::Parse { .. } | qoinc::Error::Invalid(_) => 3,
                qoinc::Error::EmptyMatch => 2,
                qoinc::Error::IterationCap { .. } | qoinc::Error::OutputCap { .. } => 4,
            };
        }
        if let Some(io) = cause.downcast_ref::<std::io::Error>() {
            return if io.kind() == std::io::ErrorKind::InvalidData { 3 } else { 2 };
        }
    }
    2
}

fn limits() -> Result<Limits> {
    let cap = match std::env::var("TOOL_ITER_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Usage(format!("TOOL_ITER_CAP must be a positive integer, got {v:?}")))?,
        Err(_) => DEFAULT_ITERATION_CAP,
    };
    Ok(Limits { iteration_cap: cap })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}", path.display()))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> qoinc::Result<T>) -> Result<T> {
    let src = read_text(path)?;
    parse(&src).with_context(|| format!("{}", path.display()))
}

fn load_slp(path: &Path) -> Result<Slp> {
    let bytes = fs::read(path).with_context(|| format!("{}", path.display()))?;
    Slp::load(&bytes).with_context(|| format!("{}", path.display()))
}

fn show_word(w: &[u8]) -> String {
    if w.is_empty() {
        "\"\"".to_string()
    } else {
        w.escape_ascii().to_string()
    }
}

fn emit(cli: &Cli, value: Value, human: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if cli.json {
        writeln!(out, "{value}")?;
    } else {
        human(&mut out)?;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Include { kind } => include(cli, kind),
        Command::Search { pattern, report, files } => search(cli, pattern, *report, files),
        Command::Compress { input, output, text } => {
            let data = fs::read(input).with_context(|| format!("{}", input.display()))?;
            let slp = repair_compress(&data).map_err(|e| Usage(format!("{}: {e}", input.display())))?;
            let bytes = if *text { slp.to_text().into_bytes() } else { slp.to_bytes() };
            fs::write(output, bytes).with_context(|| format!("{}", output.display()))?;
            let value = json!({
                "command": "compress",
                "input_bytes": data.len(),
                "rules": slp.rule_count(),
                "size": slp.size(),
            });
            if cli.stats && !cli.json {
                eprintln!("stats: input_bytes={} rules={} size={}", data.len(), slp.rule_count(), slp.size());
            }
            emit(cli, value, |_| Ok(()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompress { input, output, cap } => {
            let slp = load_slp(input)?;
            let text = slp.decompress(*cap)?;
            match output {
                Some(path) => fs::write(path, &text).with_context(|| format!("{}", path.display()))?,
                None if cli.json => {}
                None => std::io::stdout().lock().write_all(&text)?,
            }
            if cli.json {
                println!("{}", json!({ "command": "decompress", "bytes": text.len(), "rules": slp.rule_count() }));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Residualize { input, method, side } => {
            let n = load(input, parse_nfa)?;
            let out = match (method, side) {
                (Method::Res, s) => residual::res(&n, side_of(*s)),
                (Method::Denis, SideArg::Right) => residual::denis_residualize(&n),
                (Method::Denis, SideArg::Left) => residual::denis_residualize(&n.reverse()).reverse(),
            };
            print_automaton(cli, "residualize", &n, &out)
        }
        Command::Canonical { input, side } => {
            let n = load(input, parse_nfa)?;
            print_automaton(cli, "canonical", &n, &residual::canonical(&n, side_of(*side)))
        }
        Command::DoubleReversal { input } => {
            let n = load(input, parse_nfa)?;
            print_automaton(cli, "double-reversal", &n, &residual::double_reversal_canonical(&n))
        }
        Command::CheckDr { input } => {
            let n = load(input, parse_nfa)?;
            let holds = residual::check_dr_condition(&n);
            emit(cli, json!({ "command": "check-dr", "holds": holds }), |out| {
                writeln!(out, "{}", if holds { "HOLDS" } else { "FAILS" })
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn { target } => learn(cli, target),
    }
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Right => Side::Right,
        SideArg::Left => Side::Left,
    }
}

fn print_automaton(cli: &Cli, command: &str, input: &Nfa, out: &Nfa) -> Result<ExitCode> {
    let text = format_nfa(out);
    if cli.stats && !cli.json {
        eprintln!(
            "stats: input_states={} states={} transitions={}",
            input.state_count(),
            out.state_count(),
            out.transition_count()
        );
    }
    let value = json!({
        "command": command,
        "input_states": input.state_count(),
        "states": out.state_count(),
        "transitions": out.transition_count(),
        "automaton": text,
    });
    emit(cli, value, |w| w.write_all(text.as_bytes()))?;
    Ok(ExitCode::SUCCESS)
}

fn verdict_exit(run: &Run, check: CheckArgs) -> ExitCode {
    if check.fail_on_miss && !run.verdict.included {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn include(cli: &Cli, kind: &IncludeKind) -> Result<ExitCode> {
    let limits = limits()?;
    let (command, algorithm, run, check) = match kind {
        IncludeKind::Nfa { left, right, algo, check } => {
            let (a, b) = (load(left, parse_nfa)?, load(right, parse_nfa)?);
            ("include-nfa", algo.name(), decide_nfa(&a, &b, *algo, &limits)?, *check)
        }
        IncludeKind::Cfg { grammar, right, algo, check } => {
            let (g, n) = (load(grammar, parse_cnf)?, load(right, parse_nfa)?);
            let run = match algo {
                CfgAlgorithm::Antichain => cfg_inc_antichain(&g, &n, &limits)?,
                CfgAlgorithm::WordMyhill => {
                    let extra: Vec<u8> = g.alphabet().into_iter().collect();
                    let qo = MyhillOrder::new(&n, &extra);
                    cfg_inc_word(&g, &qo, |w| n.accepts(w), &limits)?
                }
            };
            let name = match algo {
                CfgAlgorithm::Antichain => "antichain",
                CfgAlgorithm::WordMyhill => "word-myhill",
            };
            ("include-cfg", name, run, *check)
        }
        IncludeKind::Ocn { left, net, start_state, start_counter, check } => {
            let (a, o) = (load(left, parse_nfa)?, load(net, parse_ocn)?);
            if *start_state >= o.state_count() {
                return Err(Usage(format!("start state {start_state} is not a state of {}", net.display())).into());
            }
            ("include-ocn", "word-macro", nfa_in_ocn(&a, &o, (*start_state, *start_counter), &limits)?, *check)
        }
    };
    let witness = run.verdict.witness.as_deref();
    let value = json!({
        "command": command,
        "algorithm": algorithm,
        "verdict": if run.verdict.included { "included" } else { "not-included" },
        "included": run.verdict.included,
        "witness": witness.map(|w| String::from_utf8_lossy(w).into_owned()),
        "stats": { "iterations": run.iterations },
    });
    if cli.stats && !cli.json {
        eprintln!("stats: algorithm={algorithm} iterations={}", run.iterations);
    }
    emit(cli, value, |out| match (run.verdict.included, witness) {
        (true, _) => writeln!(out, "INCLUDED"),
        (false, Some(w)) => writeln!(out, "NOT INCLUDED witness={}", show_word(w)),
        (false, None) => writeln!(out, "NOT INCLUDED"),
    })?;
    Ok(verdict_exit(&run, check))
}

struct FileResult {
    count: u64,
    lines: Option<Vec<(u64, Vec<u8>)>>,
    stats: SearchStats,
    rules: usize,
}

fn search_one(path: &Path, pattern: &Nfa, report: bool) -> Result<FileResult> {
    let slp = load_slp(path)?;
    let search = LineSearch::new(&slp, pattern)?;
    Ok(FileResult {
        count: search.count(),
        lines: report.then(|| search.report()),
        stats: search.stats(),
        rules: slp.rule_count(),
    })
}

fn stats_json(s: &SearchStats, rules: usize, states: usize) -> Value {
    json!({
        "rules": rules,
        "states": states,
        "inner_steps": s.inner_steps,
        "stored_pairs": s.stored_pairs,
        "compositions": s.compositions,
    })
}

fn search(cli: &Cli, pattern: &str, report: bool, files: &[std::path::PathBuf]) -> Result<ExitCode> {
    let ast = parse_regex(pattern).map_err(|e| Usage(format!("pattern {pattern:?}: {e}")))?;
    let nfa = search_automaton(&ast).map_err(|e| Usage(format!("pattern {pattern:?}: {e}")))?;
    let results: Vec<Result<FileResult>> = if files.len() == 1 {
        vec![search_one(&files[0], &nfa, report)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = files.iter().map(|f| scope.spawn(|| search_one(f, &nfa, report))).collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        })
    };
    let results: Vec<FileResult> = results.into_iter().collect::<Result<_>>()?;
    let states = nfa.state_count();
    let total: u64 = results.iter().map(|r| r.count).sum();
    if cli.stats && !cli.json {
        for (f, r) in files.iter().zip(&results) {
            eprintln!(
                "stats: file={} rules={} states={states} inner_steps={} stored_pairs={} compositions={}",
                f.display(),
                r.rules,
                r.stats.inner_steps,
                r.stats.stored_pairs,
                r.stats.compositions
            );
        }
    }
    let per_file: Vec<Value> = files
        .iter()
        .zip(&results)
        .map(|(f, r)| {
            json!({
                "path": f.display().to_string(),
                "count": r.count,
                "lines": r.lines.as_ref().map(|ls| ls
                    .iter()
                    .map(|(n, t)| json!({ "line": n, "text": String::from_utf8_lossy(t) }))
                    .collect::<Vec<_>>()),
                "stats": stats_json(&r.stats, r.rules, states),
            })
        })
        .collect();
    let value = json!({ "command": "search", "pattern": pattern, "count": total, "files": per_file });
    emit(cli, value, |out| {
        let single = files.len() == 1;
        for (f, r) in files.iter().zip(&results) {
            let prefix = if single { String::new() } else { format!("{}:", f.display()) };
            writeln!(out, "{prefix}{}", r.count)?;
            for (n, text) in r.lines.iter().flatten() {
                write!(out, "{prefix}{n}:")?;
                out.write_all(text)?;
                writeln!(out)?;
            }
        }
        Ok(())
    })?;
    Ok(ExitCode::SUCCESS)
}

fn learn(cli: &Cli, target: &Path) -> Result<ExitCode> {
    let n = load(target, parse_nfa)?;
    let alphabet: Vec<u8> = n.alphabet().iter().copied().collect();
    let learned = nl_learn(&alphabet, |w| n.accepts(w), |h| equivalence_counterexample(h, &n), &limits()?)?;
    let a = &learned.automaton;
    if cli.stats && !cli.json {
        eprintln!(
            "stats: membership_queries={} equivalence_queries={} refinements={} prefixes={} suffixes={}",
            learned.table.queries(),
            learned.equivalence_queries,
            learned.refinements,
            learned.table.prefixes().len(),
            learned.table.suffixes().len()
        );
    }
    let text = format_nfa(a);
    let value = json!({
        "command": "learn",
        "states": a.state_count(),
        "transitions": a.transition_count(),
        "automaton": text,
        "stats": {
            "membership_queries": learned.table.queries(),
            "equivalence_queries": learned.equivalence_queries,
            "refinements": learned.refinements,
        },
    });
    emit(cli, value, |w| w.write_all(text.as_bytes()))?;
    Ok(ExitCode::SUCCESS)
}
