use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use lambdamu_core::harness::{
    enumerate_typed, read_corpus, run_suites, sample_typed, write_corpus, CorpusLine, GenConfig, SuiteName,
};
use lambdamu_core::reduction::{build_graph, format_trace, normalize, Strategy, DEFAULT_FUEL};
use lambdamu_core::syntax::{parse_decls, parse_term, parse_type, ParseError, Term, Type};
use lambdamu_core::typing::{infer, Contexts};

#[derive(Parser)]
#[command(name = "lambdamu", version, about = "Type checking and cut elimination for classical natural deduction proof terms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check corpus lines from a file, or a single term given with --term.
    Check {
        file: Option<PathBuf>,
        #[command(flatten)]
        input: TermInput,
        /// Expected type of --term.
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Reduce a term to normal form.
    Normalize {
        /// File holding a single term.
        file: Option<PathBuf>,
        #[command(flatten)]
        input: TermInput,
        #[arg(long, value_enum, default_value = "leftmost")]
        strategy: StrategyArg,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print each step before the normal form.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Longest reduction length and reduction graph statistics.
    Eta {
        file: Option<PathBuf>,
        #[command(flatten)]
        input: TermInput,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Run property suites over generated judgements.
    Suite {
        /// A suite name or `all`.
        #[arg(long, value_parser = parse_suites)]
        name: Suites,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        fuel: Option<usize>,
        /// Instances for the int and delta lemma suites.
        #[arg(long)]
        lemma_cases: Option<usize>,
        /// Sampled judgements added to the adequation suite.
        #[arg(long)]
        adequation_samples: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write generated judgements as a JSON-lines corpus.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TermInput {
    #[arg(long)]
    term: Option<String>,
    /// Comma-separated `name:Type` pairs.
    #[arg(long, default_value = "")]
    gamma: String,
    /// Comma-separated `name:Type` pairs for μ-names.
    #[arg(long, default_value = "")]
    delta: String,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    sample_max_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Random,
    Exhaustive,
}

#[derive(Clone)]
struct Suites(Vec<SuiteName>);

fn parse_suites(s: &str) -> Result<Suites, String> {
    if s == "all" {
        return Ok(Suites(SuiteName::ALL.to_vec()));
    }
    s.parse::<SuiteName>().map(|n| Suites(vec![n])).map_err(|e| e.to_string())
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{what}: {source}")]
    Parse { what: String, source: ParseError },
    #[error("{0}")]
    Io(#[from] io::Error),
}

fn parse_err(what: &str) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::Parse { what: what.to_string(), source }
}

impl TermInput {
    fn contexts(&self) -> Result<Contexts, CliError> {
        let gamma = parse_decls(&self.gamma).map_err(parse_err("--gamma"))?;
        let delta = parse_decls(&self.delta).map_err(parse_err("--delta"))?;
        Ok(Contexts { gamma: gamma.into_iter().collect(), delta: delta.into_iter().collect() })
    }

    /// The term from --term or from the whole of `file`.
    fn term(&self, file: Option<&Path>) -> Result<Term, CliError> {
        let src = match (&self.term, file) {
            (Some(t), None) => t.clone(),
            (None, Some(f)) => read_file(f)?,
            (Some(_), Some(_)) => return Err(CliError::Usage("give either a file or --term, not both".into())),
            (None, None) => return Err(CliError::Usage("a term is required (file or --term)".into())),
        };
        parse_term(src.trim()).map_err(parse_err("term"))
    }
}

fn read_file(f: &Path) -> Result<String, CliError> {
    let mut s = String::new();
    File::open(f)?.read_to_string(&mut s)?;
    Ok(s)
}

impl GenArgs {
    fn apply(&self, cfg: &mut GenConfig) {
        if let Some(n) = self.max_size {
            cfg.max_size = n;
        }
        if let Some(n) = self.samples {
            cfg.sample_count = n;
        }
        if let Some(n) = self.sample_max_size {
            cfg.sample_max_size = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Ok(true) on success, Ok(false) on a check or suite failure.
fn run(cmd: Cmd) -> Result<bool, CliError> {
    match cmd {
        Cmd::Check { file, input, ty } => match (file, &input.term) {
            (Some(f), None) => check_file(&f),
            (None, Some(_)) => check_term(&input, ty.as_deref()),
            (Some(_), Some(_)) => Err(CliError::Usage("give either a corpus file or --term, not both".into())),
            (None, None) => Err(CliError::Usage("nothing to check: give a corpus file or --term".into())),
        },
        Cmd::Normalize { file, input, strategy, seed, trace, fuel } => {
            let t = input.term(file.as_deref())?;
            let ctx = input.contexts()?;
            if let Err(e) = infer(&ctx, &t) {
                eprintln!("warning: term is not well-typed: {e}");
            }
            let strategy = match strategy {
                StrategyArg::Leftmost => Strategy::LeftmostOutermost,
                StrategyArg::Random => Strategy::Random(seed),
                StrategyArg::Exhaustive => Strategy::Exhaustive,
            };
            match normalize(&t, strategy, fuel) {
                Ok(n) => {
                    if trace {
                        print!("{}", format_trace(&n.trace));
                    }
                    println!("{}", n.term);
                    Ok(true)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(false)
                }
            }
        }
        Cmd::Eta { file, input, fuel } => {
            let t = input.term(file.as_deref())?;
            match build_graph(&t, fuel) {
                Ok(g) => {
                    let s = g.stats();
                    println!("eta: {}", s.eta);
                    println!("nodes: {}", s.nodes);
                    println!("edges: {}", s.edges);
                    println!("normal forms: {}", s.normal_forms);
                    Ok(true)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(false)
                }
            }
        }
        Cmd::Suite { name, gen, depth, fuel, lemma_cases, adequation_samples, out } => {
            let mut cfg = GenConfig::default();
            gen.apply(&mut cfg);
            if let Some(d) = depth {
                if d > lambdamu_core::harness::MAX_DEPTH {
                    return Err(CliError::Usage(format!("--depth must be at most {}", lambdamu_core::harness::MAX_DEPTH)));
                }
                cfg.depth = d;
            }
            cfg.fuel = fuel.unwrap_or(cfg.fuel);
            cfg.lemma_cases = lemma_cases.unwrap_or(cfg.lemma_cases);
            cfg.adequation_samples = adequation_samples.unwrap_or(cfg.adequation_samples);
            let report = match run_suites(&name.0, &cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(false);
                }
            };
            println!("corpus: {} exhaustive + {} sampled", report.corpus.exhaustive, report.corpus.sampled);
            for s in &report.suites {
                let verdict = if s.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} {} run={} skipped={} failures={} {}ms",
                    s.suite_name,
                    s.cases_run,
                    s.cases_skipped,
                    s.failures.len(),
                    s.runtime_millis
                );
                for f in s.failures.iter().take(5) {
                    println!("  [{}] {} minimized to {}: {}", f.check, f.judgement, f.minimized, f.detail);
                }
            }
            if let Some(p) = out {
                let mut w = output(Some(&p))?;
                serde_json::to_writer_pretty(&mut w, &report).map_err(io::Error::from)?;
                writeln!(w)?;
            }
            Ok(report.passed())
        }
        Cmd::Gen { gen, out } => {
            let mut cfg = GenConfig::default();
            gen.apply(&mut cfg);
            let mut js = enumerate_typed(&cfg);
            match sample_typed(&cfg) {
                Ok(s) => js.extend(s),
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(false);
                }
            }
            let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
            for j in &js {
                *hist.entry(j.term().size()).or_default() += 1;
            }
            eprintln!("size  count");
            for (size, n) in &hist {
                eprintln!("{size:>4}  {n}");
            }
            let lines: Vec<CorpusLine> = js.iter().map(CorpusLine::from_judgement).collect();
            let mut w = output(out.as_deref())?;
            write_corpus(&lines, &mut w)?;
            w.flush()?;
            Ok(true)
        }
    }
}

fn check_file(f: &Path) -> Result<bool, CliError> {
    let lines = read_corpus(BufReader::new(File::open(f)?)).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut mismatches = 0;
    for (i, line) in lines.iter().enumerate() {
        let ok = line.holds();
        if !ok {
            mismatches += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} line {}: {} : {} (expected {})", i + 1, line.term, line.ty, line.expect);
    }
    println!("{} lines, {} mismatches", lines.len(), mismatches);
    Ok(mismatches == 0)
}

fn check_term(input: &TermInput, ty: Option<&str>) -> Result<bool, CliError> {
    let t = input.term(None)?;
    let ctx = input.contexts()?;
    let expected: Option<Type> = ty.map(parse_type).transpose().map_err(parse_err("--type"))?;
    match (infer(&ctx, &t), expected) {
        (Ok(a), Some(b)) if a != b => {
            println!("FAIL {t} has type {a}, not {b}");
            Ok(false)
        }
        (Ok(a), _) => {
            println!("PASS {t} : {a}");
            Ok(true)
        }
        (Err(e), _) => {
            println!("FAIL {e}");
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
