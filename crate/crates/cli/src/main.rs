//! `gft`: kernels, operators, iteration, extremal functions, bound tables
//! and verification suites from the command line.
//!
//! Exit status: 0 on success (and all suites passing), 1 when a suite fails,
//! 2 on bad flags or input.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gft_core::classes::{bound_table, extremal_b_lower, extremal_b_upper, write_bound_table};
use gft_core::kernels::{extremal_iterate, tau_coeffs, tau_inv_coeffs};
use gft_core::operators::{
    bernardi, deiterate, differential_operator, integral_operator, iterate_closed, noor, ruscheweyh,
};
use gft_core::parse::{parse_int_list, parse_real_list};
use gft_core::verify::{default_lattice, lattice, run_suite, Suite, SuiteConfig};
use gft_core::{ClassSpec, Error, OperatorParams, SchlichtSeries, TruncatedSeries, DEFAULT_ORDER};

const ORDER_ENV: &str = "GFT_DEFAULT_ORDER";

#[derive(Parser)]
#[command(name = "gft", version, about = "Convolution operators and sharp bounds on the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of z/(1-z)^{σ-n+1}, or of its convolution inverse.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        inverse: bool,
    },
    /// Apply an operator to a normalized series read from a JSON file.
    Apply {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        n: i64,
        /// Bernardi parameter, c + 1 > 0.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n-fold integral iteration of a series (or its inverse with --inverse).
    Iterate {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extremal functions of the class or of the iterated family.
    Extremal {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value_t = Kind::Upper)]
        kind: Kind,
    },
    /// CSV table of distortion, growth and covering bounds.
    Bounds {
        /// Comma-separated list.
        #[arg(long, default_value = "1")]
        sigma: String,
        #[arg(long, default_value = "1")]
        n: String,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value = "0.5,0.9,0.99")]
        r: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        /// 1..12, salagean, or all.
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        order: Option<usize>,
        /// Lattice override; all three lists are required together.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    #[value(name = "L")]
    Differential,
    #[value(name = "l")]
    Integral,
    Ruscheweyh,
    Noor,
    Bernardi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// z + 2(1-β) Σ [σ]_{n/(k-1)} z^k
    Upper,
    /// The alternating version.
    Lower,
    /// L_{σ,n}(z)
    IteratePlus,
    /// L_{σ,n}(-z)
    IterateMinus,
}

enum Failure {
    Usage(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn order_or_default(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(order) = flag {
        return Ok(order);
    }
    match std::env::var(ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{ORDER_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_ORDER),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Kernel {
            sigma,
            n,
            order,
            inverse,
        } => {
            let params = OperatorParams::new(sigma, n)?;
            let order = order_or_default(order)?;
            let series = if inverse {
                tau_inv_coeffs(params, order)
            } else {
                tau_coeffs(params, order)
            };
            emit(&None, &series.to_json())
        }
        Command::Apply {
            op,
            sigma,
            n,
            c,
            input,
            out,
        } => {
            let f = SchlichtSeries::from_json(&read(&input)?)?;
            let need_sigma =
                || sigma.ok_or_else(|| Failure::Usage("--sigma is required for this operator".into()));
            let g = match op {
                Op::Differential => differential_operator(OperatorParams::new(need_sigma()?, n)?, &f),
                Op::Integral => integral_operator(OperatorParams::new(need_sigma()?, n)?, &f),
                Op::Ruscheweyh => ruscheweyh(need_sigma()?, &f)?,
                Op::Noor => noor(need_sigma()?, &f)?,
                Op::Bernardi => {
                    let c = c.ok_or_else(|| Failure::Usage("--c is required for bernardi".into()))?;
                    bernardi(c, &f)?
                }
            };
            emit(&out, &g.to_json())
        }
        Command::Iterate {
            sigma,
            n,
            input,
            inverse,
            out,
        } => {
            let params = OperatorParams::new(sigma, n)?;
            let p = TruncatedSeries::from_json(&read(&input)?)?;
            let q = if inverse {
                deiterate(params, &p)
            } else {
                iterate_closed(params, &p)
            };
            emit(&out, &q.to_json())
        }
        Command::Extremal {
            sigma,
            n,
            beta,
            order,
            kind,
        } => {
            let spec = ClassSpec::from_parts(sigma, n, beta)?;
            let order = order_or_default(order)?;
            let json = match kind {
                Kind::Upper => extremal_b_upper(spec, order).to_json(),
                Kind::Lower => extremal_b_lower(spec, order).to_json(),
                Kind::IteratePlus => extremal_iterate(spec.params(), order, 1.0).to_json(),
                Kind::IterateMinus => extremal_iterate(spec.params(), order, -1.0).to_json(),
            };
            emit(&None, &json)
        }
        Command::Bounds {
            sigma,
            n,
            beta,
            r,
            out,
        } => {
            let sigmas = parse_real_list(&sigma)?;
            let ns = parse_int_list(&n)?;
            let betas = parse_real_list(&beta)?;
            let radii = parse_real_list(&r)?;
            let mut specs = Vec::new();
            for &s in &sigmas {
                for &k in &ns {
                    for &b in &betas {
                        specs.push(ClassSpec::from_parts(s, k, b)?);
                    }
                }
            }
            let rows = bound_table(&specs, &radii)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    write_bound_table(&rows, file)?;
                }
                None => write_bound_table(&rows, io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Verify {
            theorem,
            seed,
            trials,
            order,
            sigma,
            n,
            beta,
            out,
        } => {
            let suites: Vec<Suite> = if theorem == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![theorem.parse()?]
            };
            let lattice = match (sigma, n, beta) {
                (None, None, None) => default_lattice(),
                (Some(s), Some(k), Some(b)) => {
                    let specs = lattice(&parse_real_list(&s)?, &parse_int_list(&k)?, &parse_real_list(&b)?);
                    if specs.is_empty() {
                        return Err(Failure::Usage("the lattice has no valid (sigma, n, beta)".into()));
                    }
                    specs
                }
                _ => {
                    return Err(Failure::Usage(
                        "--sigma, --n and --beta must be given together".into(),
                    ))
                }
            };
            let cfg = SuiteConfig {
                lattice,
                trials,
                seed,
                order: order_or_default(order)?,
                ..SuiteConfig::default()
            };
            let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &cfg)).collect();
            let all_passed = reports.iter().all(|r| r.passed());
            let json = if theorem == "all" {
                serde_json::to_string(&reports).expect("reports serialize")
            } else {
                reports[0].to_json()
            };
            emit(&out, &json)?;
            if all_passed {
                Ok(())
            } else {
                Err(Failure::Suite)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Suite) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `gft --help` for usage");
            ExitCode::from(2)
        }
    }
}
