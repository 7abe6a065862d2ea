//! Command-line driver: load recognizers from algebra files, run the
//! decision procedures, dump chain estimates and alternation graphs,
//! evaluate words, convert automata, and validate algebra axioms.
//!
//! Exit codes: 0 when a decision or report was produced with certified or
//! stabilized confidence, 2 when it was produced but is inconclusive or
//! rests on unstable estimates, 1 on errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use omegasep_core::decide::{
    membership_bsigma2, separability_sigma2, separability_sigma3, DecideConfig, Verdict,
};
use omegasep_core::ef::chains::ChainEngine;
use omegasep_core::format::{self, AlgebraDocument};
use omegasep_core::morphism::RecognizedLanguage;
use omegasep_core::pairing::alphabet_completion;
use omegasep_core::quotient::syntactic_quotient;
use omegasep_core::report;
use omegasep_core::sat::graph::build_alternation_graph;
use omegasep_core::words::parse_lasso;

#[derive(Parser)]
#[command(name = "omegasep", version, about = "separation and membership for omega-regular languages")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Attach wall-clock timing to reports (breaks byte-reproducibility).
    #[arg(long, global = true)]
    timing: bool,
    /// Seed recorded with the run configuration (sampling is test-side; the
    /// decision procedures themselves are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct CapArgs {
    /// Largest rank in the estimation schedule.
    #[arg(long, default_value_t = 3)]
    rank_cap: u8,
    /// Largest word length in the estimation schedule.
    #[arg(long, default_value_t = 8)]
    len_cap: usize,
    /// Consecutive identical schedule points required for stabilization.
    #[arg(long, default_value_t = 2)]
    window: usize,
    /// Alternation probe depth.
    #[arg(long, default_value_t = 3)]
    n_cap: usize,
}

impl CapArgs {
    fn config(&self, witness_rank: Option<u8>) -> DecideConfig {
        DecideConfig {
            rank_cap: self.rank_cap,
            len_cap: self.len_cap,
            window: self.window,
            n_cap: self.n_cap,
            witness_ranks: match witness_rank {
                Some(k) => vec![k],
                None => vec![1, 2, 3],
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide separability of two languages from one algebra file.
    Separate {
        #[arg(long, value_enum)]
        logic: SepLogic,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        /// Generate witnesses only at this rank (default: ranks 1..=3).
        #[arg(long)]
        witness_rank: Option<u8>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Decide membership of a language.
    Member {
        #[arg(long, value_enum)]
        logic: MemberLogic,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lang: String,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Dump the estimated finite-word chain set of a given length.
    Chains {
        #[arg(long)]
        level: u8,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Dump the estimated mixed chain triples.
    MixedChains {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Export the alternation graph of a language's membership pipeline.
    Graph {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lang: String,
        /// Output path for the DOT rendering.
        #[arg(long)]
        dot: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Evaluate a finite word or a lasso word under the file's morphism.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "lasso")]
        word: Option<String>,
        #[arg(long)]
        lasso: Option<String>,
    },
    /// Convert a Buchi automaton file to an algebra file.
    Convert {
        #[arg(long)]
        buchi: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the structural and axiomatic validity of an algebra file.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SepLogic {
    Sigma2,
    Sigma3,
}

#[derive(Clone, Copy, ValueEnum)]
enum MemberLogic {
    Bsigma2,
}

fn load_algebra(path: &Path) -> Result<AlgebraDocument> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    format::parse_algebra(&text).with_context(|| format!("parsing {}", path.display()))
}

fn language<'d>(doc: &'d AlgebraDocument, name: &str) -> Result<&'d RecognizedLanguage> {
    doc.language(name)
        .with_context(|| format!("no language named `{name}` in the input file"))
}

fn emit_verdict(cli_format: Format, timing: bool, started: Instant, verdict: &Verdict) -> i32 {
    let timing_ms = timing.then(|| started.elapsed().as_millis());
    let rendered = match cli_format {
        Format::Text => report::render_text(verdict, timing_ms),
        Format::Structured => report::render_structured(verdict, timing_ms),
    };
    print!("{rendered}");
    verdict.exit_code()
}

fn run(cli: Cli) -> Result<i32> {
    let started = Instant::now();
    match cli.command {
        Command::Separate {
            logic,
            input,
            l1,
            l2,
            witness_rank,
            caps,
        } => {
            let doc = load_algebra(&input)?;
            let lang1 = language(&doc, &l1)?;
            let lang2 = language(&doc, &l2)?;
            let config = caps.config(witness_rank);
            let verdict = match logic {
                SepLogic::Sigma2 => separability_sigma2(lang1, lang2, &config)?.verdict,
                SepLogic::Sigma3 => separability_sigma3(lang1, lang2, &config)?.verdict,
            };
            Ok(emit_verdict(cli.format, cli.timing, started, &verdict))
        }
        Command::Member {
            logic: MemberLogic::Bsigma2,
            input,
            lang,
            caps,
        } => {
            let doc = load_algebra(&input)?;
            let l = language(&doc, &lang)?;
            let config = caps.config(None);
            let out = membership_bsigma2(l, &config)?;
            Ok(emit_verdict(cli.format, cli.timing, started, &out.verdict))
        }
        Command::Chains {
            level,
            length,
            input,
            caps,
        } => {
            let doc = load_algebra(&input)?;
            let completed = alphabet_completion(&doc.morphism)?;
            let m = &completed.morphism;
            let config = caps.config(None);
            let mut engine = ChainEngine::new(m.alphabet().len(), config.oracle_caps());
            let schedule = config.schedule(m.alphabet().len());
            let chain = engine.estimate_chains(level, length, m, &schedule, config.window)?;
            println!(
                "chains level={} length={} status={:?} caps=({},{})",
                level, length, chain.status, chain.caps.0, chain.caps.1
            );
            let sg = m.algebra().splus();
            for tuple in &chain.tuples {
                let names: Vec<&str> = tuple.iter().map(|&e| sg.name(e)).collect();
                let witness: Vec<String> = chain.witnesses[tuple]
                    .iter()
                    .map(|w| m.alphabet().render(w))
                    .collect();
                println!("({})  realized by {}", names.join(", "), witness.join(" <= "));
            }
            Ok(if chain.status.is_stabilized() { 0 } else { 2 })
        }
        Command::MixedChains { input, caps } => {
            let doc = load_algebra(&input)?;
            let completed = alphabet_completion(&doc.morphism)?;
            let m = &completed.morphism;
            let config = caps.config(None);
            let mut engine = ChainEngine::new(m.alphabet().len(), config.oracle_caps());
            let schedule = config.schedule(m.alphabet().len());
            let mixed = engine.estimate_mixed_chains(m, &schedule, config.window)?;
            println!(
                "mixed chains status={:?} caps=({},{})",
                mixed.status, mixed.caps.0, mixed.caps.1
            );
            let sg = m.algebra().splus();
            for &(s1, s2, s3) in &mixed.triples {
                println!("({}, {}, {})", sg.name(s1), sg.name(s2), sg.name(s3));
            }
            Ok(if mixed.status.is_stabilized() { 0 } else { 2 })
        }
        Command::Graph {
            input,
            lang,
            dot,
            caps,
        } => {
            let doc = load_algebra(&input)?;
            let l = language(&doc, &lang)?;
            let quotient = syntactic_quotient(l)?;
            let qlang = RecognizedLanguage {
                name: l.name.clone(),
                morphism: std::sync::Arc::new(quotient.morphism.clone()),
                accept: omegasep_core::morphism::AcceptSet::Inf(quotient.accept.clone()),
            };
            let completed = alphabet_completion(&qlang.morphism)?;
            let m = &completed.morphism;
            let config = caps.config(None);
            let mut engine = ChainEngine::new(m.alphabet().len(), config.oracle_caps());
            let schedule = config.schedule(m.alphabet().len());
            let chain = engine.estimate_chains(2, 2, m, &schedule, config.window)?;
            let graph = build_alternation_graph(m, &chain);
            std::fs::write(&dot, graph.to_dot(m))
                .with_context(|| format!("writing {}", dot.display()))?;
            let recursive = graph.is_recursive();
            println!(
                "graph for {}: {} nodes, {}",
                lang,
                graph.nodes.len(),
                if recursive.is_recursive() {
                    "recursive"
                } else {
                    "not recursive"
                }
            );
            Ok(if chain.status.is_stabilized() { 0 } else { 2 })
        }
        Command::Eval { input, word, lasso } => {
            let doc = load_algebra(&input)?;
            let m = &doc.morphism;
            match (word, lasso) {
                (Some(wtext), None) => {
                    let w = m.alphabet().parse_word(&wtext)?;
                    let e = m.eval_word(&w)?;
                    println!("{}", m.algebra().splus().name(e));
                    Ok(0)
                }
                (None, Some(ltext)) => {
                    let w = parse_lasso(m.alphabet(), &ltext)?;
                    let q = m.eval_lasso(&w);
                    println!("{}", m.algebra().inf_name(q));
                    Ok(0)
                }
                _ => bail!("exactly one of --word or --lasso is required"),
            }
        }
        Command::Convert { buchi, out } => {
            let text = std::fs::read_to_string(&buchi)
                .with_context(|| format!("reading {}", buchi.display()))?;
            let aut = format::parse_automaton(&text)?;
            let (morphism, lang) = aut.to_algebra()?;
            let accept_ids: Vec<String> = lang
                .accept_inf()?
                .iter()
                .map(|&q| morphism.algebra().inf_name(q).to_string())
                .collect();
            let mut languages = BTreeMap::new();
            languages.insert(lang.name.clone(), accept_ids);
            let rendered = format::render_algebra(&morphism, &languages);
            std::fs::write(&out, rendered)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "converted {} states to an algebra with |S+|={} |Sinf|={}",
                aut.state_count(),
                morphism.algebra().splus().len(),
                morphism.algebra().inf_len()
            );
            Ok(0)
        }
        Command::Validate { input } => {
            let doc = load_algebra(&input)?;
            let reportv = doc.morphism.algebra().validate();
            if reportv.is_clean() {
                println!("ok: all axioms hold");
                Ok(0)
            } else {
                for v in &reportv.violations {
                    println!("violation: {v}");
                }
                bail!("{} axiom violations", reportv.violations.len());
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
