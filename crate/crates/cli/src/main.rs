//! `wordgraph` command-line tool.
//!
//! Exit codes: 0 success, 2 invalid input or usage, 3 database problem,
//! 4 analysis constraint violated (too few nouns, unsegmentable text).

mod args;

use std::collections::BTreeSet;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::Parser;
use serde_json::json;
use wordgraph::dynamics::{measure_correlation, GroupingFile};
use wordgraph::ideation::{suggest, Suggestions, DEFAULT_MEASURE};
use wordgraph::measures::{parse_measure_list, MeasureId};
use wordgraph::report::{
    analyze, nearest_entries, similarity_report, word_report, AnalysisReport, CorrelationReport, Document, Format,
    ReportHeader, RunConfig,
};
use wordgraph::wordnet::ReferenceConstants;
use wordgraph::{Error, ErrorKind, WordGraph};

use args::{AnalyzeArgs, Cli, Command, CorrelateArgs, DbCommand, ServeArgs, SuggestArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(&cli);
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            report_error(&cli, &e);
            exit_code(e.kind())
        }
    }
}

fn init_logging(cli: &Cli) {
    let default = match (&cli.command, cli.verbose) {
        (_, v) if v >= 2 => "debug",
        (Command::Serve(_), _) | (_, 1) => "info",
        _ => "warn",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(default));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .with_target(false)
        .without_time()
        .init();
}

fn exit_code(kind: ErrorKind) -> ExitCode {
    ExitCode::from(match kind {
        ErrorKind::Input => 2,
        ErrorKind::Database => 3,
        ErrorKind::Constraint => 4,
    })
}

fn report_error(cli: &Cli, e: &Error) {
    eprintln!("error: {e}");
    let missing = match e {
        Error::UnresolvedWords(ws) => ws.clone(),
        Error::UnknownWord(w) => vec![w.clone()],
        _ => return,
    };
    // Suggestions need the lexicon; skip them when it will not load.
    let Ok(g) = load_graph(cli) else { return };
    for (word, near) in nearest_entries(&g, &missing) {
        if near.is_empty() {
            eprintln!("  {word}: no close entries");
        } else {
            eprintln!("  {word}: did you mean {}?", near.join(", "));
        }
    }
}

/// Loads from the cache when it exists, otherwise parses the database (and
/// writes the cache if a path was given).
fn load_graph(cli: &Cli) -> wordgraph::Result<WordGraph> {
    match &cli.cache {
        Some(c) if c.exists() => WordGraph::load_cache(c),
        Some(c) => {
            let g = WordGraph::load(&cli.db)?;
            g.save_cache(c)?;
            tracing::info!("wrote cache {}", c.display());
            Ok(g)
        }
        None => WordGraph::load(&cli.db),
    }
}

fn mismatches(g: &WordGraph) -> Vec<String> {
    ReferenceConstants::WORDNET_3_1.check(g.constants()).into_iter().filter(|c| !c.ok).map(|c| c.name).collect()
}

/// Loads the graph and checks its constants: fatal under `--strict`, a
/// warning otherwise.
fn open(cli: &Cli) -> wordgraph::Result<WordGraph> {
    let g = load_graph(cli)?;
    let bad = mismatches(&g);
    if !bad.is_empty() {
        let what = bad.join(", ");
        if cli.strict {
            return Err(Error::ConstantsMismatch(what));
        }
        tracing::warn!("database constants differ from the WordNet 3.1 reference ({what}); see `wordgraph db verify`");
    }
    Ok(g)
}

fn run(cli: &Cli) -> wordgraph::Result<ExitCode> {
    match &cli.command {
        Command::Db { command } => db(cli, command),
        Command::Measures => {
            print_catalog(cli.format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sim { x, y, measures } => {
            let g = open(cli)?;
            let r = similarity_report(&g, x, y, &parse_measure_list(measures)?)?;
            emit(cli.format, || Ok(r.render_text()), || to_json(&r), || r.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Ic { word, measures } => {
            let g = open(cli)?;
            let measures = match measures {
                Some(m) => parse_measure_list(m)?,
                None => MeasureId::all().into_iter().filter(|m| !m.is_similarity()).collect(),
            };
            word_output(cli, &g, word, &measures)
        }
        Command::WordStats { word } => {
            let g = open(cli)?;
            word_output(cli, &g, word, &[])
        }
        Command::Analyze(a) => run_analyze(cli, a),
        Command::Suggest(a) => run_suggest(cli, a),
        Command::Correlate(a) => run_correlate(cli, a),
        Command::Serve(a) => run_serve(cli, a),
    }
}

fn db(cli: &Cli, command: &DbCommand) -> wordgraph::Result<ExitCode> {
    match command {
        DbCommand::Verify => {
            let started = std::time::Instant::now();
            let g = load_graph(cli)?;
            let elapsed = started.elapsed();
            let checks = ReferenceConstants::WORDNET_3_1.check(g.constants());
            let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name.as_str()).collect();
            let text = || {
                let mut out = format!("{:<16} {:>22} {:>32}\n", "constant", "reference", "computed");
                for c in &checks {
                    let mark = if c.ok { "ok" } else { "MISMATCH" };
                    out.push_str(&format!("{:<16} {:>22} {:>32}  {mark}\n", c.name, c.expected, c.actual));
                }
                out.push_str(&format!("loaded in {:.2}s\n", elapsed.as_secs_f64()));
                Ok(out)
            };
            let body = || to_json(&json!({ "checks": checks, "constants": g.constants(), "load_seconds": elapsed.as_secs_f64() }));
            let csv = || {
                let mut out = String::from("constant,reference,computed,ok\n");
                for c in &checks {
                    out.push_str(&format!("{},\"{}\",\"{}\",{}\n", c.name, c.expected, c.actual, c.ok));
                }
                Ok(out)
            };
            emit(cli.format, text, body, csv)?;
            if failed.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else if cli.strict {
                Err(Error::ConstantsMismatch(failed.join(", ")))
            } else {
                tracing::warn!("constants differ from the reference: {}", failed.join(", "));
                Ok(ExitCode::SUCCESS)
            }
        }
        DbCommand::Cache { out } => {
            let g = WordGraph::load(&cli.db)?;
            g.save_cache(out)?;
            println!("wrote {} ({} words, {} synsets)", out.display(), g.lexicon().len(), g.taxonomy().len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_catalog(format: Format) -> wordgraph::Result<()> {
    let cat = wordgraph::measures::catalog();
    let text = || {
        let mut out = String::new();
        for e in &cat {
            let norm = if e.normalized { "[0,1]" } else { "" };
            out.push_str(&format!("{:<22} {:<6} {:<6} {}\n", e.id.to_string(), e.arity, norm, e.note.unwrap_or("")));
        }
        Ok(out)
    };
    let csv = || {
        let mut out = String::from("id,arity,normalized,ic_formula\n");
        for e in &cat {
            out.push_str(&format!("{},{},{},{}\n", e.id, e.arity, e.normalized, e.ic_formula.unwrap_or("")));
        }
        Ok(out)
    };
    emit(format, text, || to_json(&cat), csv)
}

fn word_output(cli: &Cli, g: &WordGraph, word: &str, measures: &[MeasureId]) -> wordgraph::Result<ExitCode> {
    let r = word_report(g, word, measures)?;
    let csv = || {
        let s = &r.stats;
        let mut out = String::from("word,quantity,value\n");
        let rows = [
            ("polysemy", s.polysemy.to_string()),
            ("depth", s.depth.to_string()),
            ("subsumers", s.subsumers.to_string()),
            ("subvertices", s.subvertices.to_string()),
            ("leaves", s.leaves.to_string()),
            ("commonness", s.commonness.to_string()),
        ];
        for (k, v) in rows {
            out.push_str(&format!("{},{k},{v}\n", r.word));
        }
        for v in &r.values {
            out.push_str(&format!("{},{},{}\n", r.word, v.measure, v.value));
        }
        Ok(out)
    };
    emit(cli.format, || Ok(r.render_text()), || to_json(&r), csv)?;
    Ok(ExitCode::SUCCESS)
}

/// Builds the run configuration: the `--config` file if given, then any
/// flags set explicitly on the command line.
fn analyze_config(cli: &Cli, a: &AnalyzeArgs) -> wordgraph::Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(s) = a.scheme {
        cfg.scheme = s;
    }
    match a.t {
        Some(t) => cfg.t = t,
        // Marker schemes split T evenly around the marker.
        None if a.config.is_none() && cfg.scheme.is_marker() => cfg.t = 6,
        None => {}
    }
    if let Some(m) = &a.measures {
        cfg.measures = parse_measure_list(m)?;
    }
    if let Some(m) = a.mode {
        cfg.mode = m;
    }
    if let Some(w) = a.weighting {
        cfg.weighting = w;
    }
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    cfg.collocations |= a.collocations;
    cfg.strict |= cli.strict;
    cfg.seed = cli.seed;
    cfg.format = cli.format;
    cfg.db = Some(cli.db.clone());
    cfg.cache.clone_from(&cli.cache);
    Ok(cfg)
}

fn read_documents(files: &[PathBuf]) -> wordgraph::Result<Vec<Document>> {
    let mut seen = BTreeSet::new();
    files
        .iter()
        .map(|p| {
            let id = p
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Input(format!("{}: no usable file name", p.display())))?
                .to_string();
            if !seen.insert(id.clone()) {
                return Err(Error::Input(format!("two inputs share the conversation id `{id}`")));
            }
            let text = fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
            Ok(Document { id, text })
        })
        .collect()
}

fn run_analyze(cli: &Cli, a: &AnalyzeArgs) -> wordgraph::Result<ExitCode> {
    let cfg = analyze_config(cli, a)?;
    let docs = read_documents(&a.files)?;
    let grouping: Option<GroupingFile> = match &a.grouping {
        Some(p) => Some(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => None,
    };
    let g = open(cli)?;
    let report = analyze(&g, &docs, grouping.as_ref(), &cfg)?;
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        write_file(&dir.join("report.json"), &report.to_json()?)?;
        write_file(&dir.join("report.csv"), &report.to_csv()?)?;
    }
    emit(cli.format, || Ok(report.render_summary()), || report.to_json(), || report.to_csv())?;
    Ok(analysis_exit(&report))
}

/// Nonzero only when every conversation failed; the code follows the
/// failures' class.
fn analysis_exit(report: &AnalysisReport) -> ExitCode {
    if !report.all_failed() {
        return ExitCode::SUCCESS;
    }
    let constraint = !report.failures.is_empty()
        && report.failures.iter().all(|f| matches!(f.code, "too_few_nouns" | "segmentation"));
    exit_code(if constraint { ErrorKind::Constraint } else { ErrorKind::Input })
}

fn run_suggest(cli: &Cli, a: &SuggestArgs) -> wordgraph::Result<ExitCode> {
    let measure = match &a.measure {
        Some(m) => m.parse()?,
        None => DEFAULT_MEASURE,
    };
    let g = open(cli)?;
    let s = suggest(&g, &a.base, &a.candidates, measure, a.k, &g.ic_context())?;
    let csv = || {
        let mut out = String::from("rank,candidate,average,delta\n");
        for (i, p) in s.proposals.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", i + 1, p.candidate, p.average, p.delta));
        }
        Ok(out)
    };
    emit(cli.format, || Ok(render_suggestions(&s)), || to_json(&s), csv)?;
    Ok(ExitCode::SUCCESS)
}

fn render_suggestions(s: &Suggestions) -> String {
    let mut out = format!("base {} under {}: average {:.4}\n", s.base.join(", "), s.measure, s.base_average);
    for (i, p) in s.proposals.iter().enumerate() {
        out.push_str(&format!("{:>3}. {:<24} {:.4} ({:+.4})\n", i + 1, p.candidate, p.average, p.delta));
    }
    for r in &s.rejected {
        out.push_str(&format!("     {:<24} skipped: {}\n", r.candidate, r.reason));
    }
    out
}

fn run_correlate(cli: &Cli, a: &CorrelateArgs) -> wordgraph::Result<ExitCode> {
    let measures = parse_measure_list(&a.measures)?;
    if measures.len() < 2 {
        return Err(Error::Input("correlation needs at least two measures".into()));
    }
    let g = open(cli)?;
    let study = measure_correlation(&g, &measures, a.sample, cli.seed, &g.ic_context())?;
    let cfg = RunConfig { measures, seed: cli.seed, format: cli.format, db: Some(cli.db.clone()), cache: cli.cache.clone(), strict: cli.strict, ..RunConfig::default() };
    let report = CorrelationReport { header: ReportHeader::new(&g, &cfg), sample: a.sample, study };
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        write_file(&dir.join("matrix.csv"), &report.study.matrix.to_csv()?)?;
        write_file(&dir.join("dendrogram.json"), &to_json(&report)?)?;
        write_file(&dir.join("dendrogram.txt"), &report.study.dendrogram.render_text())?;
    }
    emit(cli.format, || Ok(report.study.dendrogram.render_text()), || to_json(&report), || report.study.matrix.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn run_serve(cli: &Cli, a: &ServeArgs) -> wordgraph::Result<ExitCode> {
    let g = open(cli)?;
    let mut state = wordgraph_service::AppState::new(Arc::new(g));
    state.db = Some(cli.db.clone());
    state.cache.clone_from(&cli.cache);
    if let Some(dir) = &a.persist {
        let (s, restored) = state.with_persistence(dir)?;
        tracing::info!("restored {restored} sessions from {}", dir.display());
        state = s;
    }
    let addr = std::net::SocketAddr::new(a.bind, a.port);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(wordgraph_service::serve(Arc::new(state), addr, a.cors_origin.as_deref()))?;
    Ok(ExitCode::SUCCESS)
}

fn to_json<T: serde::Serialize>(v: &T) -> wordgraph::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn write_file(path: &Path, contents: &str) -> wordgraph::Result<()> {
    fs::write(path, contents).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Prints the rendering matching `format`; only that one is computed.
fn emit(
    format: Format,
    text: impl FnOnce() -> wordgraph::Result<String>,
    json: impl FnOnce() -> wordgraph::Result<String>,
    csv: impl FnOnce() -> wordgraph::Result<String>,
) -> wordgraph::Result<()> {
    let out = match format {
        Format::Text => text()?,
        Format::Json => json()?,
        Format::Csv => csv()?,
    };
    let mut stdout = std::io::stdout().lock();
    // A closed pipe (`| head`) is not an error worth reporting.
    match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}
