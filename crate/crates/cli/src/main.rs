use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nodal_kstab::exactnum::{decimal_quad, decimal_rational, parse_quad, parse_rational, quad_text, rational_text, Rational};
use nodal_kstab::local_model::NodalCubicModel;
use nodal_kstab::nodal_catalog::{
    a_invariant, classify, construct_dn_up_to, invariants, s_exact, Breakpoints, DSequence, DEFAULT_MAX_CONSTRUCTED,
};
use nodal_kstab::par::Execution;
use nodal_kstab::scan::{self, ScanConfig, CACHE_ENV};
use nodal_kstab::{verify, Error};

#[derive(Parser, Debug)]
#[command(name = "nodal-kstab", version, about = "Exact stability invariants of plane valuations centred at the node of a nodal cubic")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached scan reports.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Evaluate grid rows on one thread.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exact,
    Sample,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// A, T, epsilon, S of the weighted valuation v_(a,b).
    Invariants {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Closed-form S(v_t); accepts quadratic irrationals like 4+sqrt5.
    SExact {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Finite generation / Fano verdict and degeneration for v_t.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Scan S over a grid of slopes.
    Scan {
        #[arg(long)]
        t_min: String,
        #[arg(long)]
        t_max: String,
        #[arg(long)]
        step: String,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Level for sample mode.
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// The sequence d_0..d_n with its breakpoints.
    Dseq {
        #[arg(long)]
        n: usize,
    },
    /// Equation of the curve D_n.
    Curve {
        #[arg(long)]
        n: usize,
        /// Attempt n beyond the default limit (slow).
        #[arg(long)]
        force: bool,
    },
    /// Upper bounds A/S for the stability threshold over a grid.
    Delta {
        #[arg(long)]
        t_min: String,
        #[arg(long)]
        t_max: String,
        #[arg(long)]
        step: String,
    },
    /// Run the built-in verification suite.
    VerifyAll {
        /// Only these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    /// Rows or checks that failed; nonzero exits with 2.
    failures: usize,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, failures: 0 }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("format {f:?} is not available for this command").to_lowercase()))
    }
}

fn grid(t_min: &str, t_max: &str, step: &str) -> Result<(Rational, Rational, Rational), Failure> {
    Ok((parse_rational(t_min)?, parse_rational(t_max)?, parse_rational(step)?))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let exec = if cli.serial { Execution::Serial } else { Execution::default() };
    const TEXT: &[Format] = &[Format::Csv, Format::Json];
    match &cli.command {
        Command::Invariants { a, b } => {
            let fmt = pick(cli.format, Format::Json, TEXT)?;
            let r = invariants(NodalCubicModel::shared(), *a, *b)?;
            Ok(match fmt {
                Format::Json => pretty(&serde_json::to_value(&r).expect("record")),
                _ => format!(
                    "a,b,t,A,T,epsilon,S,witness_degree,witness_ord,witness_self_int\n{},{},{},{},{},{},{},{},{},{}\n",
                    r.a,
                    r.b,
                    rational_text(&r.t),
                    rational_text(&r.a_inv),
                    rational_text(&r.t_inv),
                    rational_text(&r.epsilon),
                    rational_text(&r.s),
                    r.witness.degree,
                    r.witness.ord,
                    rational_text(&r.witness.self_intersection),
                ),
            }
            .into())
        }
        Command::SExact { t } => {
            let fmt = pick(cli.format, Format::Csv, TEXT)?;
            let t = parse_quad(t)?;
            let (s, a) = (s_exact(&t)?, a_invariant(&t)?);
            Ok(match fmt {
                Format::Json => pretty(&json!({
                    "t": quad_text(&t),
                    "A": quad_text(&a),
                    "S": quad_text(&s),
                    "S_decimal": decimal_quad(&s, 12),
                })),
                _ => format!("t,A,S,S_decimal\n{},{},{},{}\n", quad_text(&t), quad_text(&a), quad_text(&s), decimal_quad(&s, 12)),
            }
            .into())
        }
        Command::Classify { t } => {
            let fmt = pick(cli.format, Format::Json, TEXT)?;
            let v = classify(&parse_quad(t)?)?;
            Ok(match fmt {
                Format::Json => pretty(&serde_json::to_value(&v).expect("verdict")),
                _ => format!(
                    "t,fg,fano,piece,degeneration\n{},{},{},{},\"{}\"\n",
                    quad_text(&v.t),
                    v.fg,
                    v.fano,
                    v.piece.map(|n| n.to_string()).unwrap_or_default(),
                    v.degeneration.map(|d| d.to_string()).unwrap_or_default(),
                ),
            }
            .into())
        }
        Command::Scan { t_min, t_max, step, mode, m } => {
            let fmt = pick(cli.format, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?;
            let (lo, hi, h) = grid(t_min, t_max, step)?;
            let config = match mode {
                Mode::Exact => ScanConfig::exact(lo, hi, h),
                Mode::Sample => ScanConfig::sample(lo, hi, h, *m),
            };
            config.validate()?;
            let report = match &cli.cache_dir {
                Some(dir) => scan::cached_scan(&config, dir, exec)?,
                None => scan::scan_with(&config, exec)?,
            };
            let text = match fmt {
                Format::Csv => scan::to_csv(&report),
                Format::Json => scan::to_json(&report)?,
                Format::Svg => scan::to_svg(&report),
            };
            Ok(Output { text, failures: report.failed_rows() })
        }
        Command::Dseq { n } => {
            let fmt = pick(cli.format, Format::Csv, TEXT)?;
            let n = (*n).max(2);
            let seq = DSequence::new(n)?;
            let bp = Breakpoints::new(n)?;
            let rows: Vec<[String; 4]> = seq
                .values()
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    let t = (k >= 1 && k < n).then(|| rational_text(&bp.t(k))).unwrap_or_default();
                    let tp = (k < n).then(|| rational_text(&bp.t_prime(k))).unwrap_or_default();
                    [k.to_string(), d.to_string(), t, tp]
                })
                .collect();
            Ok(match fmt {
                Format::Json => pretty(&json!({
                    "d": seq.values().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "rows": rows.iter().map(|r| json!({"n": r[0], "d": r[1], "t": r[2], "t_prime": r[3]})).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut s = String::from("n,d,t,t_prime\n");
                    for r in &rows {
                        let _ = writeln!(s, "{}", r.join(","));
                    }
                    s
                }
            }
            .into())
        }
        Command::Curve { n, force } => {
            let fmt = pick(cli.format, Format::Csv, TEXT)?;
            let max = if *force { (*n).max(DEFAULT_MAX_CONSTRUCTED) } else { DEFAULT_MAX_CONSTRUCTED };
            let c = construct_dn_up_to(NodalCubicModel::shared(), *n, max)?;
            Ok(match fmt {
                Format::Json => pretty(&json!({
                    "n": c.n,
                    "degree": c.degree(),
                    "weights": [c.valuation.a(), c.valuation.b()],
                    "ord": c.ord,
                    "newton": c.newton,
                    "solution_dim": c.solution_dim,
                    "irreducibility": c.irreducibility,
                    "terms": c.form.terms().map(|((e1, e2), q)| json!({
                        "e0": c.degree() - e1 - e2, "e1": e1, "e2": e2, "coeff": rational_text(q),
                    })).collect::<Vec<_>>(),
                })),
                _ => c.to_csv(),
            }
            .into())
        }
        Command::Delta { t_min, t_max, step } => {
            let fmt = pick(cli.format, Format::Json, TEXT)?;
            let (lo, hi, h) = grid(t_min, t_max, step)?;
            let r = scan::delta_upper_bound(&ScanConfig::exact(lo, hi, h))?;
            Ok(match fmt {
                Format::Json => pretty(&serde_json::to_value(&r).expect("delta")),
                _ => format!(
                    "min,min_decimal,argmin,all_at_least_one\n{},{},{},{}\n",
                    rational_text(&r.min),
                    decimal_rational(&r.min, 12),
                    r.argmin.iter().map(rational_text).collect::<Vec<_>>().join("|"),
                    r.all_at_least_one,
                ),
            }
            .into())
        }
        Command::VerifyAll { only } => {
            let fmt = pick(cli.format, Format::Csv, TEXT)?;
            let known: Vec<u32> = verify::criteria().into_iter().map(|(i, _)| i).collect();
            if let Some(bad) = only.iter().find(|i| !known.contains(i)) {
                return Err(Failure::Usage(format!("no check with id {bad}")));
            }
            let outcomes = verify::run(only, exec);
            let failures = outcomes.iter().filter(|o| !o.passed).count();
            let text = match fmt {
                Format::Json => pretty(&serde_json::to_value(&outcomes).expect("outcomes")),
                _ => outcomes.iter().map(|o| format!("{o}\n")).collect(),
            };
            Ok(Output { text, failures })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = scan::write_output(path, &out.text) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            if out.failures > 0 {
                eprintln!("{} failed", out.failures);
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
