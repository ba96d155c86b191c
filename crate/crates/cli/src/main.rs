//! `rankmod`: construct, verify, encode, decode and simulate limited-magnitude
//! rank-modulation Gray codes.
//!
//! Exit codes: 0 on success, 1 when a verification, decoding or search fails,
//! 2 on usage or parameter errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rankmod::aux::{search_parity_preserving, verify_aux, verify_aux_sequence, SearchConstraints};
use rankmod::complete::{factorial, CompleteCode};
use rankmod::decode::{decode_traced, decode_verified};
use rankmod::gray::check_sequence;
use rankmod::io::{
    aux_header, parse_perm, read_aux_certificate, read_words, write_aux_certificate, write_words,
    Header,
};
use rankmod::lmrm::{verify_words, DEFAULT_LIMIT};
use rankmod::rates::{rate_table, to_csv};
use rankmod::sim::{simulate, SimConfig};
use rankmod::snake::{build_snake, verify_snake};
use rankmod::{construct, AuxCatalog, CodeParams, Error, LmrmCode};

#[derive(Parser)]
#[command(
    name = "rankmod",
    version,
    about = "Error-correcting Gray codes for rank modulation"
)]
struct Cli {
    /// Refuse to materialize more codewords than this.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    limit: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Code length.
    #[arg(short = 'n')]
    n: usize,
    /// Minimum ℓ∞ distance.
    #[arg(short = 'd')]
    d: usize,
    /// Use auxiliary codes with closed-form ranking (flip family for even orders).
    #[arg(long)]
    rankable: bool,
    /// Move a class of odd size to the innermost position.
    #[arg(long)]
    odd_last: bool,
    /// Auxiliary-code certificate files enabling larger odd orders.
    #[arg(long = "certificate", value_name = "FILE")]
    certificates: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write its codewords.
    Construct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a code file (lmrm, aux, complete or ksnake).
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Distance to check; defaults to the header's `d`.
        #[arg(short = 'd')]
        d: Option<usize>,
    },
    /// Print the codeword of a given rank.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        rank: u128,
    },
    /// Print the rank of a codeword.
    Rankof {
        #[command(flatten)]
        code: CodeArgs,
        /// Space- or comma-separated permutation, e.g. "4 1 5 2 6 3".
        #[arg(long)]
        perm: String,
    },
    /// Decode a received permutation.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        perm: String,
        /// Fail unless the result is a codeword.
        #[arg(long)]
        verify: bool,
        /// Print the per-window decoding steps.
        #[arg(long)]
        trace: bool,
    },
    /// Monte-Carlo bounded-noise simulation.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Noise magnitude t′; defaults to the decoding radius.
        #[arg(long)]
        noise: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Emit the rate curves as CSV.
    RateTable {
        #[arg(long, default_value_t = 0.02)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an auxiliary code.
    Aux {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        rankable: bool,
        /// Search for a parity-preserving code of exactly this size (odd orders).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long = "certificate", value_name = "FILE")]
        certificates: Vec<PathBuf>,
        /// Write one transition index per line instead of codewords.
        #[arg(long)]
        transitions: bool,
        /// Verify the code and report on stderr.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a complete push-to-the-top Gray code.
    Complete {
        #[arg(long)]
        order: usize,
        #[arg(long, alias = "out", value_name = "FILE")]
        materialize: Option<PathBuf>,
    },
    /// Build a Kendall-τ snake of order 2m+2.
    Snake {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify the spread-2 property and report on stderr.
        #[arg(long)]
        verify: bool,
    },
}

enum Failure {
    /// Verification, decoding or search failed.
    Check(String),
    /// Bad input or parameters.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DecodeFailure(_) | Error::NotInCode(_) | Error::SearchFailure(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn catalog(files: &[PathBuf]) -> Result<AuxCatalog, Failure> {
    let mut cat = AuxCatalog::new();
    for f in files {
        let code = read_aux_certificate(BufReader::new(File::open(f)?))?;
        cat.add_certificate(code)?;
    }
    Ok(cat)
}

fn build(args: &CodeArgs) -> Result<LmrmCode, Failure> {
    let params = CodeParams::new(args.n, args.d)?
        .rankable(args.rankable)
        .odd_last(args.odd_last);
    Ok(construct(params, &catalog(&args.certificates)?)?)
}

fn run(cli: Cli) -> CliResult {
    let limit = cli.limit;
    match cli.command {
        Command::Construct { code, out } => {
            let c = build(&code)?;
            if c.size() > limit {
                return Err(Error::TooLarge {
                    size: c.size(),
                    limit,
                }
                .into());
            }
            let header = Header::new("lmrm")
                .with("n", code.n)
                .with("d", code.d)
                .with("M", c.size());
            let mut w = output(out.as_deref())?;
            write_words(&mut w, &header, c.iter())?;
            w.flush()?;
        }
        Command::Verify { input, d } => verify(&input, d, limit)?,
        Command::Encode { code, rank } => {
            println!("{}", build(&code)?.unrank(rank)?);
        }
        Command::Rankof { code, perm } => {
            let sigma = parse_perm(&perm)?;
            println!("{}", build(&code)?.rank(&sigma)?);
        }
        Command::Decode {
            code,
            perm,
            verify,
            trace,
        } => {
            let c = build(&code)?;
            let tau = parse_perm(&perm)?;
            let out = decode_traced(&c, &tau)?;
            if trace {
                for s in &out.steps {
                    println!("{s}");
                }
            }
            let word = if verify {
                decode_verified(&c, &tau)?
            } else {
                out.word
            };
            println!("{word}");
        }
        Command::Simulate {
            code,
            trials,
            noise,
            seed,
            threads,
        } => {
            let cat = catalog(&code.certificates)?;
            let params = CodeParams::new(code.n, code.d)?
                .rankable(code.rankable)
                .odd_last(code.odd_last);
            let cfg = SimConfig {
                params,
                trials,
                t_prime: noise.unwrap_or_else(|| params.radius()),
                seed,
                threads,
            };
            let report = simulate(&cfg, &cat)?;
            println!("{report}");
            eprintln!("wallclock {:.3} s", report.wallclock.as_secs_f64());
        }
        Command::RateTable {
            from,
            to,
            step,
            out,
        } => {
            let rows = rate_table(from, to, step)?;
            let mut w = output(out.as_deref())?;
            w.write_all(to_csv(&rows).as_bytes())?;
            w.flush()?;
        }
        Command::Aux {
            order,
            rankable,
            size,
            certificates,
            transitions,
            verify,
            out,
        } => {
            let code = match size {
                Some(target) => {
                    let c = SearchConstraints {
                        must_use: if order > 3 {
                            vec![order - 2]
                        } else {
                            Vec::new()
                        },
                        ..Default::default()
                    };
                    search_parity_preserving(order, target, &c)?
                }
                None => catalog(&certificates)?
                    .get(order, rankable)?
                    .as_ref()
                    .clone(),
            };
            if verify {
                let report = verify_aux(&code, limit)?;
                eprintln!("{report}");
                if !report.passed() {
                    return Err(Failure::Check(report.to_string()));
                }
            }
            let mut w = output(out.as_deref())?;
            if transitions {
                write_aux_certificate(&mut w, &code)?;
            } else {
                write_words(&mut w, &aux_header(&code), code.materialize(limit)?)?;
            }
            w.flush()?;
        }
        Command::Complete { order, materialize } => {
            let c = CompleteCode::new(order)?;
            let size = c.size()?;
            if size > limit {
                return Err(Error::TooLarge { size, limit }.into());
            }
            let header = Header::new("complete").with("n", order).with("size", size);
            let mut w = output(materialize.as_deref())?;
            write_words(&mut w, &header, c.iter()?)?;
            w.flush()?;
        }
        Command::Snake { m, out, verify } => {
            let snake = build_snake(m)?;
            if snake.size() as u128 > limit {
                return Err(Error::TooLarge {
                    size: snake.size() as u128,
                    limit,
                }
                .into());
            }
            let words = snake.materialize();
            if verify {
                let report = verify_snake(&words);
                eprintln!("{report}");
                if !report.passed() {
                    return Err(Failure::Check(report.to_string()));
                }
            }
            let header = Header::new("ksnake")
                .with("order", snake.order())
                .with("M", snake.size());
            let mut w = output(out.as_deref())?;
            write_words(&mut w, &header, words)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn verify(input: &Path, d: Option<usize>, limit: u128) -> CliResult {
    let (header, words) = read_words(BufReader::new(File::open(input)?))?;
    if words.len() as u128 > limit {
        return Err(Error::TooLarge {
            size: words.len() as u128,
            limit,
        }
        .into());
    }
    let (passed, text) = match header.kind.as_str() {
        "lmrm" => {
            let d = match d {
                Some(d) => d,
                None => header.number("d")?,
            };
            let r = verify_words(&words, d, true);
            (r.passed(), r.to_string())
        }
        "aux" => {
            let k = words.first().map_or(0, |w| w.len());
            let r = verify_aux_sequence(k, &words);
            (r.passed(), r.to_string())
        }
        "ksnake" => {
            let r = verify_snake(&words);
            (r.passed(), r.to_string())
        }
        "complete" => {
            let n = words.first().map_or(0, |w| w.len());
            let full = factorial(n)? == words.len() as u128;
            match check_sequence(&words) {
                Ok(()) if full => (true, format!("complete code n={n}: pass")),
                Ok(()) => (
                    false,
                    format!("complete code n={n}: FAIL; only {} codewords", words.len()),
                ),
                Err(e) => (false, format!("complete code n={n}: FAIL; {e}")),
            }
        }
        other => return Err(Failure::Usage(format!("unknown code kind `{other}`"))),
    };
    println!("{text}");
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(text))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("rankmod: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("rankmod: {msg}");
            ExitCode::from(2)
        }
    }
}
