use std::fmt::Display;
use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use twep_core::bounds::{
    bounds_csv, bounds_table, greedy_step_bound, mi_csv, mi_sequence, rate_table, rates_csv,
};
use twep_core::engine::{summarize, verify_runs};
use twep_core::errorspace::DEFAULT_CAP;
use twep_core::protocols::{self, NamedProtocol};
use twep_core::synth::greedy_strategy_capped;
use twep_core::{simulate, Dim, Error, PauliVec, Strategy, Transcript, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "twep",
    version,
    about = "Verify, simulate and synthesize two-way entanglement purification protocols"
)]
struct Cli {
    /// Print timing and run metadata to stderr.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Worker threads for exhaustive verification.
    #[arg(long, env = "TWEP_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Largest error set that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check a protocol against every error of weight at most t.
    Verify {
        /// Registry key, or `hamming` together with --m.
        protocol: String,
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a protocol against one hidden error and print the transcript.
    Simulate {
        protocol: String,
        #[arg(long)]
        error: String,
        #[arg(long)]
        m: Option<u32>,
        /// Also show Alice's and Bob's raw measurement bits (qubits only).
        #[arg(long)]
        two_party: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Synthesize the greedy protocol for (n, t) and verify it.
    Greedy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Hamming, Singleton, Gilbert-Varshamov and greedy bounds on k.
    Bounds {
        /// A value or an inclusive range `a..b`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        t: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Asymptotic rate curves sampled over t/n in [0, 1/2].
    Rates {
        #[arg(long, default_value_t = 51)]
        points: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The sequence m_i bounding greedy survivor counts.
    Mi {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Failure {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::UnsupportedDimension(_)
            | Error::DimensionMismatch { .. }
            | Error::Syntax { .. }
            | Error::InvalidLetter { .. }
            | Error::OutOfRange { .. }
            | Error::SizeLimit(_)
            | Error::CapExceeded { .. }
            | Error::Precondition(_)
            | Error::RegisterOutOfRange { .. }
            | Error::WorkerPool(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match cli.command {
        Command::Verify {
            protocol,
            m,
            run,
            format,
        } => cmd_verify(&protocol, m, &run, format),
        Command::Simulate {
            protocol,
            error,
            m,
            two_party,
            format,
        } => cmd_simulate(&protocol, m, &error, two_party, format),
        Command::Greedy { n, t, run, format } => cmd_greedy(n, t, &run, format),
        Command::Bounds { n, t, format } => cmd_bounds(&n, &t, format),
        Command::Rates { points, format } => cmd_rates(points, format),
        Command::Mi { count, format } => cmd_mi(count, format),
    };
    if cli.verbose {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn json_only(format: Format, command: &str) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::usage(format!(
            "{command} only produces json output"
        ))),
    }
}

fn resolve(protocol: &str, m: Option<u32>) -> Result<NamedProtocol, Failure> {
    let key = match (protocol, m) {
        ("hamming", Some(m)) => {
            let strategy = protocols::hamming_family(m)?;
            return Ok(NamedProtocol {
                name: format!("hamming-m{m}"),
                description: "Hamming-search family",
                strategy: Box::new(strategy),
            });
        }
        ("hamming", None) => return Err(Failure::usage("protocol `hamming` needs --m")),
        (_, Some(_)) => return Err(Failure::usage("--m only applies to protocol `hamming`")),
        (key, None) => key,
    };
    protocols::lookup(key).ok_or_else(|| {
        Failure::usage(format!(
            "unknown protocol `{key}`; valid keys: {}, hamming --m <M>",
            protocols::NAMES.join(", ")
        ))
    })
}

fn options(run: &RunArgs) -> VerifyOptions {
    VerifyOptions {
        workers: run.workers.map(|w| w as usize),
        cap: run.cap,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn cmd_verify(protocol: &str, m: Option<u32>, run: &RunArgs, format: Format) -> Outcome {
    json_only(format, "verify")?;
    let p = resolve(protocol, m)?;
    let runs = verify_runs(p.strategy.as_ref(), &options(run))?;
    let report = summarize(p.strategy.params(), &runs);
    Ok((pretty(&report.to_json()), report.pass))
}

fn cmd_simulate(
    protocol: &str,
    m: Option<u32>,
    error: &str,
    two_party: bool,
    format: Format,
) -> Outcome {
    json_only(format, "simulate")?;
    let p = resolve(protocol, m)?;
    let params = p.strategy.params();
    let hidden = PauliVec::parse(error, params.dim)?;
    if hidden.n() != params.n {
        return Err(Failure::usage(format!(
            "error has {} registers but {} uses {}",
            hidden.n(),
            p.name,
            params.n
        )));
    }
    if hidden.weight() > params.t {
        return Err(Failure::usage(format!(
            "error {hidden} has weight {} but {} tolerates at most {}",
            hidden.weight(),
            p.name,
            params.t
        )));
    }
    let tr = simulate(p.strategy.as_ref(), &hidden)?;
    let mut out = tr.to_lines();
    if two_party {
        if params.dim != Dim::QUBIT {
            return Err(Failure::usage(
                "--two-party is only available for qubit protocols",
            ));
        }
        out.push_str(&two_party_lines(&tr));
    }
    Ok((out, true))
}

/// Raw bits each party would see: Alice's are uniformly random and Bob's
/// satisfy `a xor b = s xor e`, with `s` the Y-parity of the operator and `e`
/// the syndrome bit. The seed is fixed so output is reproducible.
fn two_party_lines(tr: &Transcript) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = String::new();
    for m in tr.history.measurements() {
        let s = (m.op.y_count() % 2) as u8;
        let a: u8 = rng.gen_range(0..2);
        let b = a ^ s ^ m.outcome;
        out.push_str(&format!(
            "{{\"op\": {}, \"alice\": {a}, \"bob\": {b}, \"y_parity\": {s}}}\n",
            Value::String(m.op.render())
        ));
    }
    out
}

fn cmd_greedy(n: usize, t: usize, run: &RunArgs, format: Format) -> Outcome {
    json_only(format, "greedy")?;
    let strategy = greedy_strategy_capped(n, t, run.cap)?;
    let runs = verify_runs(&strategy, &options(run))?;
    let report = summarize(strategy.params(), &runs);
    let max_steps = runs
        .iter()
        .filter_map(|r| r.result.as_ref().ok())
        .map(Transcript::chosen_count)
        .max()
        .unwrap_or(0);
    let step_bound = greedy_step_bound(n, t);
    let ok = report.pass && max_steps as u64 <= step_bound;
    let mut v = report.to_json();
    let obj = v.as_object_mut().expect("report is an object");
    obj.insert("n".into(), json!(n));
    obj.insert("t".into(), json!(t));
    obj.insert("k_claimed".into(), json!(strategy.params().k_claimed));
    obj.insert("max_steps".into(), json!(max_steps));
    obj.insert("step_bound".into(), json!(step_bound));
    Ok((pretty(&v), ok))
}

fn parse_range(text: &str, flag: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || {
        Failure::usage(format!(
            "--{flag}: expected a value or a range a..b, got `{text}`"
        ))
    };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let range = match text.split_once("..") {
        Some((a, b)) => num(a)?..=num(b)?,
        None => {
            let v = num(text)?;
            v..=v
        }
    };
    if range.is_empty() {
        return Err(Failure::usage(format!("--{flag}: range `{text}` is empty")));
    }
    Ok(range)
}

fn cmd_bounds(n: &str, t: &str, format: Format) -> Outcome {
    let ns = parse_range(n, "n")?;
    let ts = parse_range(t, "t")?;
    let rows = bounds_table(ns, ts);
    Ok(match format {
        Format::Csv => (bounds_csv(&rows), true),
        Format::Json => (pretty(&json!(rows)), true),
    })
}

fn cmd_rates(points: usize, format: Format) -> Outcome {
    let table = rate_table(points)?;
    Ok(match format {
        Format::Csv => (rates_csv(&table), true),
        Format::Json => (pretty(&json!(table)), true),
    })
}

fn cmd_mi(count: usize, format: Format) -> Outcome {
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    let seq = mi_sequence(count);
    Ok(match format {
        Format::Csv => (mi_csv(&seq), true),
        Format::Json => {
            let rows: Vec<Value> = seq
                .iter()
                .enumerate()
                .map(|(i, m)| json!({"i": i, "m_i": m}))
                .collect();
            (pretty(&Value::Array(rows)), true)
        }
    })
}
