use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tracezeta::cm::CMCurve;
use tracezeta::pipeline::{cm_report, lefschetz_variety, plan_terms, run_zeta, trace_from_ap, trace_from_variety, verify_variety, Options, TraceAnalysis};
use tracezeta::variety::{count_series, CountMethod, CountOptions, Variety};
use tracezeta::weil::VerificationReport;
use tracezeta::Error;

#[derive(Parser, Debug)]
#[command(name = "tracezeta", version, about = "Exact point counts, zeta functions and trace-cohomology checks over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Enumeration cap in work units per extension degree
    #[arg(long, global = true, default_value_t = tracezeta::variety::DEFAULT_COUNT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Counts predicted rather than fitted
    #[arg(long, global = true, default_value_t = 2)]
    holdout: usize,
    /// Tolerance of the root-modulus probe
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_f64)]
    tol: f64,
    /// Counting threads
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..256))]
    workers: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Number of counts R (default: sum of the degree bounds plus holdout)
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Numerator and denominator degree bounds as `m,n`, for documents without Betti numbers
    #[arg(long, global = true, value_parser = degree_pair)]
    max_deg: Option<(usize, usize)>,
    #[arg(long, global = true, value_enum, default_value_t = Method::Fiber)]
    method: Method,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Point counts N_1..N_R
    Count { input: PathBuf },
    /// Reconstructed zeta function in factored form
    Zeta { input: PathBuf },
    /// Full verification report
    Verify { input: PathBuf },
    /// Frobenius data and trace-module analysis of a curve
    Trace {
        /// Curve document; omit when giving --ap and --q
        input: Option<PathBuf>,
        /// Frobenius trace of an elliptic curve
        #[arg(long, requires = "q", conflicts_with = "input", allow_hyphen_values = true)]
        ap: Option<i64>,
        #[arg(long, requires = "ap")]
        q: Option<u64>,
        /// Also test the lattice Z + Z sqrt(d)
        #[arg(long)]
        cm_d: Option<u64>,
    },
    /// Groessencharacter predictions for a table of CM curves
    Cm { input: PathBuf },
    /// Standard and Lefschetz zeta functions of a curve side by side
    Lefschetz { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Fiber,
    Pointwise,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn degree_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected m,n")?;
    Ok((a.trim().parse().map_err(|_| "bad m")?, b.trim().parse().map_err(|_| "bad n")?))
}

impl Common {
    fn options(&self) -> Options {
        let method = match self.method {
            Method::Fiber => CountMethod::Fiber,
            Method::Pointwise => CountMethod::Pointwise,
        };
        Options {
            count: CountOptions { budget: self.budget, workers: self.workers as usize, method },
            holdout: self.holdout,
            tol: self.tol,
            terms: self.terms,
            max_deg: self.max_deg,
        }
    }
}

/// Emitted text and whether every check passed.
struct Emit {
    body: String,
    ok: bool,
}

impl Emit {
    fn plain(body: String) -> Emit {
        Emit { body, ok: true }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_variety(path: &PathBuf) -> Result<Variety, Error> {
    Ok(Variety::parse(&read(path)?)?)
}

fn json<T: serde::Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("plain data serializes");
    s.push('\n');
    s
}

fn report_tsv(r: &VerificationReport) -> String {
    let mut s = String::from("check\tstatus\tdetail\n");
    for c in &r.checks {
        let _ = writeln!(s, "{}\t{}\t{}", c.name, c.status.as_str(), c.detail.replace(['\t', '\n'], " "));
    }
    s
}

fn emit_report(r: &VerificationReport, format: Format) -> Emit {
    let body = match format {
        Format::Text => r.to_text(),
        Format::Json => r.to_json() + "\n",
        Format::Tsv => report_tsv(r),
    };
    Emit { body, ok: r.all_pass() }
}

fn trace_text(a: &TraceAnalysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Frobenius over F_{}", a.q);
    for (i, w) in a.frobenius.omegas().iter().enumerate() {
        let _ = writeln!(s, "  omega_{i}: det(1 - t omega) = {}", w.det_poly());
    }
    if let Some(eigs) = &a.eigenvalues {
        let e: Vec<String> = eigs.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "  eigenvalues of omega_1: {}", e.join(", "));
    }
    if let Some(m) = &a.module {
        let g: Vec<String> = m.gens().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "  trace module: span [{}], rank {}", g.join(", "), m.rank());
    }
    let _ = writeln!(s, "  point count 1 + q - tr = {}", a.point_count);
    let _ = writeln!(s, "  Lefschetz number = {}", a.lefschetz_number);
    let _ = write!(s, "{}", a.lefschetz_zeta);
    s.push('\n');
    s + &a.report.to_text()
}

fn run(cli: &Cli) -> Result<Emit, Error> {
    let opts = cli.common.options();
    let format = cli.common.format;
    Ok(match &cli.command {
        Command::Count { input } => {
            let v = read_variety(input)?;
            let r = match opts.terms {
                Some(r) => r,
                None => plan_terms(&v, &opts)?.2,
            };
            let cs = count_series(&v, r as u32, &opts.count)?;
            Emit::plain(match format {
                Format::Json => json(&cs),
                Format::Text | Format::Tsv => cs.to_tsv(),
            })
        }
        Command::Zeta { input } => {
            let run = run_zeta(&read_variety(input)?, &opts)?;
            Emit::plain(match format {
                Format::Json => run.zeta.to_json() + "\n",
                Format::Text => format!("{}Z(t) = {}\n", run.zeta, run.zeta.to_rational_function()),
                Format::Tsv => {
                    let mut s = String::from("i\tP_i\n");
                    for (i, f) in run.zeta.factors().iter().enumerate() {
                        let _ = writeln!(s, "{i}\t{}", f.as_ref().map_or("-".to_string(), |p| p.to_string()));
                    }
                    s
                }
            })
        }
        Command::Verify { input } => {
            let (_, report) = verify_variety(&read_variety(input)?, &opts)?;
            emit_report(&report, format)
        }
        Command::Trace { input, ap, q, cm_d } => {
            let a = match (input, ap, q) {
                (Some(path), _, _) => trace_from_variety(&read_variety(path)?, &opts, *cm_d)?,
                (None, Some(ap), Some(q)) => trace_from_ap(*ap, *q, *cm_d)?,
                _ => return Err(Error::Input("trace needs a curve document or --ap with --q".into())),
            };
            match format {
                Format::Text => Emit { body: trace_text(&a), ok: a.report.all_pass() },
                Format::Json => Emit { body: json(&a), ok: a.report.all_pass() },
                Format::Tsv => emit_report(&a.report, format),
            }
        }
        Command::Cm { input } => {
            let curves = CMCurve::parse_table(&read(input)?)?;
            emit_report(&cm_report(&curves, &opts.count)?, format)
        }
        Command::Lefschetz { input } => {
            let a = lefschetz_variety(&read_variety(input)?, &opts)?;
            let body = match format {
                Format::Json => json(&a),
                Format::Text => format!(
                    "{}Z(t) = {}\n{}Z^L(t) = {}\nrelations: {}\n",
                    a.standard,
                    a.standard.to_rational_function(),
                    a.lefschetz,
                    a.lefschetz.to_rational_function(),
                    a.smale.detail
                ),
                Format::Tsv => {
                    let mut s = String::from("r\tN_r\tL_r\n");
                    for (i, (n, l)) in a.counts.counts.iter().zip(&a.lefschetz_numbers).enumerate() {
                        let _ = writeln!(s, "{}\t{n}\t{l}", i + 1);
                    }
                    s
                }
            };
            Emit::plain(body)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(emit) => {
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, &emit.body).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", emit.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: output: {e}");
                return ExitCode::from(2);
            }
            if emit.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: weil: at least one check failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
