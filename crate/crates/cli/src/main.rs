use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use edgecon::decomp::{expander_decompose, CertStatus};
use edgecon::generate;
use edgecon::io::{parse_graph, serialize, Format, ParsedGraph};
use edgecon::pipeline::{edge_connectivity_with, trim_and_shave, verify_cut, PipelineConfig};
use edgecon::verify::{
    lemma_suite, lemma_suite_known, oracle_equivalence, planted_dense_corpus, standard_corpus, Fault, Instance,
    LemmaSummary, EXHAUSTIVE_COMPARE_LIMIT,
};
use edgecon::{DecompConfig, OracleChoice, SimpleGraph, VertexSet};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "edgecon", version, about = "Deterministic edge connectivity for simple graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the edge connectivity of a graph file.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        #[arg(long, default_value = "flow")]
        oracle: OracleChoice,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Also print the vertices on one side of a minimum cut.
        #[arg(long, conflicts_with = "json")]
        side: bool,
        /// Largest part certified by enumeration during decomposition.
        #[arg(long, default_value_t = edgecon::decomp::DEFAULT_EXHAUSTIVE_LIMIT as u64, value_parser = clap::value_parser!(u64).range(0..=31))]
        certify_limit: u64,
        /// Reject duplicate edges and self-loops instead of dropping them.
        #[arg(long)]
        strict: bool,
    },
    /// Write a generated graph as an edge list.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Expander-decompose a graph and print the partition as JSON.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        phi: f64,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        #[arg(long, default_value = "none")]
        post: Post,
        #[arg(long)]
        strict: bool,
    },
    /// Cross-check the pipeline against reference oracles and run the lemma suite.
    Verify {
        /// Check a single graph instead of the generated corpus.
        file: Option<PathBuf>,
        #[arg(long, default_value = "edgelist")]
        format: Format,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 60)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Planted dense instances for lemma checks on multi-vertex parts.
        #[arg(long, default_value_t = 4)]
        dense: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Two K_q joined by t vertex-disjoint edges.
    CliquePair { q: usize, t: usize },
    Gnp {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Cycle { n: usize },
    Hypercube { d: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Post {
    None,
    Trim,
    #[value(name = "trim,shave")]
    TrimShave,
}

/// A result failed its own consistency check.
#[derive(Debug, thiserror::Error)]
#[error("internal invariant violated: {0}")]
struct InvariantViolation(String);

/// Unreadable or malformed input.
#[derive(Debug, thiserror::Error)]
#[error("{path}: {cause}")]
struct InputError {
    path: String,
    cause: anyhow::Error,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<InputError>() {
                ExitCode::from(2)
            } else if e.is::<InvariantViolation>() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("MINCUT_THREADS") else { return Ok(()) };
    let threads: usize = raw.trim().parse().with_context(|| format!("MINCUT_THREADS={raw:?} is not a thread count"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn dispatch(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Run { file, format, oracle, json, side, certify_limit, strict } => {
            let parsed = load(&file, format, strict)?;
            let decomp = DecompConfig { exhaustive_limit: certify_limit as usize, ..DecompConfig::default() };
            cmd_run(&parsed, PipelineConfig { oracle, decomp }, json, side)
        }
        Command::Generate { family, output } => cmd_generate(family, output.as_deref()),
        Command::Decompose { file, phi, format, post, strict } => cmd_decompose(&load(&file, format, strict)?, phi, post),
        Command::Verify { file, format, trials, max_n, seed, dense, inject_fault } => {
            let single = file.map(|f| load(&f, format, false).map(|p| (f, p))).transpose()?;
            let fault = if inject_fault { Fault::AnswerOffByOne } else { Fault::None };
            cmd_verify(single, trials, max_n, seed, dense, fault)
        }
    }
}

fn load(path: &Path, format: Format, strict: bool) -> anyhow::Result<ParsedGraph> {
    let input_error = |cause: anyhow::Error| InputError { path: path.display().to_string(), cause };
    let bytes = fs::read(path).map_err(|e| input_error(e.into()))?;
    let parsed = parse_graph(&bytes, format, strict).map_err(|e| input_error(e.into()))?;
    if parsed.report.duplicates + parsed.report.self_loops > 0 {
        eprintln!(
            "warning: dropped {} duplicate edges and {} self-loops",
            parsed.report.duplicates, parsed.report.self_loops
        );
    }
    Ok(parsed)
}

fn print_json(value: &impl Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn labels_of(parsed: &ParsedGraph, set: &VertexSet) -> Vec<u64> {
    set.ids().iter().map(|&v| parsed.label(v)).collect()
}

fn cmd_run(parsed: &ParsedGraph, cfg: PipelineConfig, json: bool, side: bool) -> anyhow::Result<ExitCode> {
    let g = &parsed.graph;
    let (cut, report) = edge_connectivity_with(g, &cfg)?;
    if !verify_cut(g, &cut) {
        bail!(InvariantViolation(format!("reported side does not cut exactly {} edges", cut.lambda)));
    }
    if report.answer != cut.lambda || report.answer != report.lambda_prime.min(report.delta as u64) {
        bail!(InvariantViolation(format!(
            "answer {} disagrees with min(lambda' = {}, delta = {})",
            report.answer, report.lambda_prime, report.delta
        )));
    }
    if json {
        print_json(&report)?;
    } else {
        println!("lambda={}", cut.lambda);
        if side {
            let ids = cut.side.as_ref().map(|s| labels_of(parsed, s)).unwrap_or_default();
            let text: Vec<String> = ids.iter().map(u64::to_string).collect();
            println!("side={}", text.join(" "));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(family: Family, output: Option<&Path>) -> anyhow::Result<ExitCode> {
    let g: SimpleGraph = match family {
        Family::CliquePair { q, t } => generate::clique_pair(q, t)?,
        Family::Gnp { n, p, seed } => generate::gnp(n, p, seed)?,
        Family::Cycle { n } => generate::cycle(n)?,
        Family::Hypercube { d } => generate::hypercube(d)?,
    };
    let text = serialize(&g, Format::EdgeList);
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DecomposeOutput {
    phi: f64,
    parts: Vec<Vec<u64>>,
    cert: Vec<CertStatus>,
    crossing_edges: u64,
    part_sizes: Vec<(usize, usize)>,
    fallback_count: usize,
    recursion_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trimmed: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shaved: Option<Vec<Vec<u64>>>,
}

fn cmd_decompose(parsed: &ParsedGraph, phi: f64, post: Post) -> anyhow::Result<ExitCode> {
    let (partition, report) = expander_decompose(&parsed.graph, phi)?;
    let relabel = |sets: &[VertexSet]| sets.iter().map(|s| labels_of(parsed, s)).collect::<Vec<_>>();
    let (trimmed, shaved) = match post {
        Post::None => (None, None),
        Post::Trim | Post::TrimShave => {
            let (t, s) = trim_and_shave(&parsed.graph, &partition);
            (Some(relabel(&t)), (post == Post::TrimShave).then(|| relabel(&s)))
        }
    };
    print_json(&DecomposeOutput {
        phi: report.phi,
        parts: relabel(partition.parts()),
        cert: partition.cert().to_vec(),
        crossing_edges: report.crossing_edges,
        part_sizes: report.part_sizes,
        fallback_count: report.fallback_count,
        recursion_depth: report.recursion_depth,
        trimmed,
        shaved,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    single: Option<(PathBuf, ParsedGraph)>,
    trials: usize,
    max_n: usize,
    seed: u64,
    dense: usize,
    fault: Fault,
) -> anyhow::Result<ExitCode> {
    let (corpus, small) = match single {
        Some((path, parsed)) => {
            let inst = Instance { name: path.display().to_string(), graph: parsed.graph };
            (vec![inst.clone()], vec![inst])
        }
        None => {
            if max_n < 4 {
                return Err(anyhow!("--max-n must be at least 4"));
            }
            let small_max = max_n.min(EXHAUSTIVE_COMPARE_LIMIT);
            (standard_corpus(trials, 4, max_n, seed), standard_corpus(trials, 4, small_max, seed ^ 0x5eed))
        }
    };
    let equivalence = oracle_equivalence(&corpus, &PipelineConfig::default(), fault);
    println!("{equivalence}");
    for failure in equivalence.failures.iter().take(20) {
        println!("  FAIL {failure}");
    }

    let cfg = DecompConfig::default();
    let mut lemma = LemmaSummary::default();
    lemma.merge(lemma_suite(&small, &cfg));
    println!("small graphs: {lemma}");
    if corpus.len() > 1 && dense > 0 {
        let planted = lemma_suite_known(&planted_dense_corpus(dense, seed), &cfg);
        println!("planted dense: {planted}");
        lemma.merge(planted);
    }
    for violation in lemma.violations.iter().take(20) {
        println!("  VIOLATION {violation}");
    }
    println!("{} non-vacuous lemma checks, {} violations", lemma.checks, lemma.violations.len());

    if equivalence.passed() && lemma.violations.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
