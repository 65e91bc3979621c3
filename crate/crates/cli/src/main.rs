//! `matbreak`: generate protocol instances, attack them, and run seeded
//! experiments.
//!
//! Exit status: 0 success, 1 attack failure or invalid file, 2 usage error,
//! 3 resource budget exhausted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matbreak::harness::{
    attack_instance, generate_instance, run_experiment, verify_transcript_file, AttackOptions, ExperimentConfig,
    ProtocolId, TrialSummary,
};
use matbreak::polysys::Budget;
use matbreak::protocols::doc::InstanceDoc;
use matbreak::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "matbreak", version, about = "Matrix key-establishment protocols and passive attacks on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one protocol instance as JSON.
    Gen {
        #[command(flatten)]
        params: Params,
        /// Keep the secrets in the document.
        #[arg(long)]
        truth: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attack the public fields of an instance file and write a report.
    Attack {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        prime_bits: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long)]
        budget_pairs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded trials and write the full report.
    Run {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Re-verify every Gröbner basis.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded trials and print per-stage timings.
    Bench {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Check an instance or report file.
    Verify { file: PathBuf },
}

#[derive(Args)]
struct Params {
    /// bcfrx, bcfrx_p, hks or ru
    #[arg(long)]
    protocol: String,
    #[arg(long, default_value_t = 32)]
    prime_bits: u64,
    #[arg(long, default_value_t = 12)]
    word_len: usize,
    /// Matrix size for hks and ru.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    /// Exponent bound for hks.
    #[arg(long, default_value_t = 5)]
    exp_n: usize,
    /// Secret polynomial degree (hks: defaults to dim; ru: 3).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    transcripts: usize,
    #[arg(long)]
    budget_pairs: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Params {
    fn config(&self, trials: usize) -> Result<ExperimentConfig, Error> {
        let cfg = ExperimentConfig {
            protocol: self.protocol.parse::<ProtocolId>()?,
            trials,
            dim: self.dim,
            exp_n: self.exp_n,
            degree: self.degree,
            prime_bits: self.prime_bits,
            word_len: self.word_len,
            samples: self.samples,
            seed: self.seed,
            transcripts: self.transcripts,
            budget: budget(self.budget_pairs),
            audit_bases: false,
            threads: self.threads,
            out: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn budget(pairs: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(p) = pairs {
        b.max_pairs = p;
    }
    b
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), ExitCode> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(EXIT_FAILURE)
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_summary(s: &TrialSummary) {
    println!(
        "{} trials={} success={}/{} ({:.1}%) honest={:.1}% elapsed={:.2}s",
        s.config.protocol,
        s.trials.len(),
        s.successes,
        s.trials.len(),
        100.0 * s.success_rate,
        100.0 * s.honest_rate,
        s.elapsed
    );
    if !s.eliminant_degrees.is_empty() {
        println!("eliminant degrees {:?}", s.eliminant_degrees);
        println!("cofactor degrees  {:?}", s.cofactor_degrees);
        println!("candidate counts  {:?}", s.candidate_counts);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { params, truth, out } => {
            let cfg = match params.config(1) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let doc = match generate_instance(&cfg, truth) {
                Ok(d) => d,
                Err(e) => return usage(e),
            };
            let text = serde_json::to_string_pretty(&doc).expect("documents serialize");
            match emit(&text, out.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => code,
            }
        }
        Command::Attack {
            file,
            prime_bits,
            seed,
            samples,
            budget_pairs,
            out,
        } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return usage(format!("cannot read {}: {e}", file.display())),
            };
            let doc: InstanceDoc = match serde_json::from_str(&text) {
                Ok(d) => d,
                Err(e) => return usage(format!("{}: {e}", file.display())),
            };
            let opts = AttackOptions {
                prime_bits,
                seed,
                samples,
                budget: budget(budget_pairs),
            };
            let report = match attack_instance(&doc, &opts) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            if let Err(code) = emit(&text, out.as_deref()) {
                return code;
            }
            if report.success {
                eprintln!("key recovered");
                ExitCode::SUCCESS
            } else if report.budget_exhausted {
                eprintln!("budget exhausted: {}", report.failure.unwrap_or_default());
                ExitCode::from(EXIT_BUDGET)
            } else {
                eprintln!("attack failed: {}", report.failure.unwrap_or_default());
                ExitCode::from(EXIT_FAILURE)
            }
        }
        Command::Run {
            params,
            trials,
            audit,
            out,
        } => {
            let mut cfg = match params.config(trials) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            cfg.audit_bases = audit;
            cfg.out = out;
            let summary = match run_experiment(&cfg) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print_summary(&summary);
            if summary.successes == summary.trials.len() {
                ExitCode::SUCCESS
            } else if summary.trials.iter().any(|t| t.budget_exhausted) {
                ExitCode::from(EXIT_BUDGET)
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
        Command::Bench { params, trials } => {
            let cfg = match params.config(trials) {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let summary = match run_experiment(&cfg) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            print_summary(&summary);
            let mut stages: std::collections::BTreeMap<&str, Vec<f64>> = Default::default();
            for t in &summary.trials {
                for (k, v) in &t.timings {
                    stages.entry(k.as_str()).or_default().push(*v);
                }
            }
            println!("{:<16} {:>10} {:>10} {:>10}", "stage", "mean s", "median s", "max s");
            for (stage, mut xs) in stages {
                xs.sort_by(f64::total_cmp);
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                println!(
                    "{:<16} {:>10.4} {:>10.4} {:>10.4}",
                    stage,
                    mean,
                    xs[xs.len() / 2],
                    xs[xs.len() - 1]
                );
            }
            ExitCode::SUCCESS
        }
        Command::Verify { file } => {
            let d = verify_transcript_file(&file);
            let kind = serde_json::to_string(&d.kind).expect("kind serializes");
            if d.is_valid() {
                println!("valid {}", kind.trim_matches('"'));
                ExitCode::SUCCESS
            } else {
                for e in &d.errors {
                    println!("error: {e}");
                }
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
