//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when an invariant or assertion fails, 2 on a
//! usage error. All numbers are printed from exact values; nothing passes
//! through floating point.

mod verify;

use std::io::{BufRead, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::counts;
use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::fractal;
use crate::oracle;

pub use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mergecount",
    version,
    about = "Exact MergeSort comparison counts and the Blancmange function"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    fn sep(self) -> &'static str {
        match self {
            Format::Csv => ",",
            Format::Tsv => "\t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SortCase {
    Best,
    Worst,
    Random,
    File,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate n, B, W, F, 2B-W and A(n,2) over a range of n.
    Analyze {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Evaluate one function: b, w, bigF, takagi or breveF.
    Eval {
        function: String,
        args: Vec<String>,
        /// Number of series terms for takagi at a non-dyadic rational.
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Run an invariant sweep.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: u64,
        #[arg(long, default_value_t = 64)]
        max_m: u64,
    },
    /// Sample a function on an evenly spaced dyadic grid.
    Sample {
        /// bigF, takagi, breveF or partial:K
        #[arg(long)]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        from: Dyadic,
        #[arg(long, allow_hyphen_values = true)]
        to: Dyadic,
        #[arg(long)]
        points: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the instrumented MergeSort and report its comparison count.
    Sortcount {
        #[arg(long = "case", value_enum)]
        case: SortCase,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Outcome of a command that did not succeed.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonIntegral { .. } => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match config.command {
        Command::Analyze { from, to, format } => cmd_analyze(from, to, format, out),
        Command::Eval {
            function,
            args,
            precision,
        } => cmd_eval(&function, &args, precision, out),
        Command::Verify {
            suite,
            max_n,
            max_m,
        } => verify::cmd_verify(suite, max_n, max_m, out),
        Command::Sample {
            function,
            from,
            to,
            points,
            format,
        } => cmd_sample(&function, from, to, points, format, out),
        Command::Sortcount { case, n, seed } => cmd_sortcount(case, n, seed, input, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "check failed: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn cmd_analyze(from: u64, to: u64, format: Format, out: &mut dyn Write) -> CmdResult {
    if from == 0 {
        return Err(usage("--from must be at least 1"));
    }
    if from > to {
        return Err(usage(format!(
            "empty range: --from {from} exceeds --to {to}"
        )));
    }
    let sep = format.sep();
    writeln!(
        out,
        "{}",
        ["n", "B", "W", "F", "twoB_minus_W", "A2"].join(sep)
    )?;
    for n in from..=to {
        let row = counts::analyze(n)?;
        if !row.is_consistent() {
            return Err(Failure::Check(format!(
                "inconsistent row for n={n}: {row:?}"
            )));
        }
        writeln!(
            out,
            "{}",
            [
                row.n.to_string(),
                row.best.to_string(),
                row.worst.to_string(),
                row.fractal_at_n.to_string(),
                row.two_b_minus_w.to_string(),
                row.digit_sum.to_string(),
            ]
            .join(sep)
        )?;
    }
    Ok(EXIT_OK)
}

fn parse_positive(name: &str, s: &str) -> Result<u64, Failure> {
    match s.trim().parse::<u64>() {
        Ok(0) | Err(_) => Err(usage(format!(
            "{name}: expected a positive integer, got {s:?}"
        ))),
        Ok(v) => Ok(v),
    }
}

fn parse_dyadic(name: &str, s: &str) -> Result<Dyadic, Failure> {
    s.parse::<Dyadic>()
        .map_err(|e| usage(format!("{name}: {e}")))
}

/// `p/q` with an arbitrary positive `q`.
fn parse_rational(s: &str) -> Option<(i64, u64)> {
    let (p, q) = s.split_once('/')?;
    let p = p.trim().parse().ok()?;
    let q = q.trim().parse().ok()?;
    Some((p, q))
}

fn cmd_eval(
    function: &str,
    args: &[String],
    precision: Option<u32>,
    out: &mut dyn Write,
) -> CmdResult {
    let [arg] = args else {
        return Err(usage(format!(
            "eval {function}: expected exactly one argument, got {}",
            args.len()
        )));
    };
    if precision == Some(0) {
        return Err(usage("--precision must be at least 1"));
    }
    let text = match function {
        "b" => counts::b_recurrence(parse_positive("eval b", arg)?)?.to_string(),
        "w" => counts::w_closed(parse_positive("eval w", arg)?)?.to_string(),
        "bigF" => fractal::big_f(parse_dyadic("eval bigF", arg)?)?.to_string(),
        "breveF" => fractal::breve_f(parse_dyadic("eval breveF", arg)?)?.to_string(),
        "takagi" => match arg.parse::<Dyadic>() {
            Ok(x) => fractal::takagi_dyadic(x)?.to_string(),
            Err(_) => {
                let (p, q) = parse_rational(arg).ok_or_else(|| {
                    usage(format!(
                        "eval takagi: {arg:?} is neither a dyadic literal nor p/q"
                    ))
                })?;
                let k = precision.ok_or_else(|| {
                    usage(format!(
                        "eval takagi: {arg} is not dyadic; --precision K is required"
                    ))
                })?;
                let approx = fractal::takagi_approx(p, q, k)?;
                if approx.is_exact() {
                    approx.value.to_string()
                } else {
                    format!("{} error<=2^-{k}", approx.value)
                }
            }
        },
        other => {
            return Err(usage(format!(
                "unknown function {other:?}; expected one of b, w, bigF, takagi, breveF"
            )))
        }
    };
    writeln!(out, "{text}")?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy)]
enum SampleFn {
    BigF,
    Takagi,
    BreveF,
    Partial(u32),
}

impl SampleFn {
    fn parse(s: &str) -> Result<SampleFn, Failure> {
        match s {
            "bigF" => Ok(SampleFn::BigF),
            "takagi" => Ok(SampleFn::Takagi),
            "breveF" => Ok(SampleFn::BreveF),
            _ => match s.strip_prefix("partial:").map(str::parse::<u32>) {
                Some(Ok(k)) => Ok(SampleFn::Partial(k)),
                _ => Err(usage(format!(
                    "unknown function {s:?}; expected bigF, takagi, breveF or partial:K"
                ))),
            },
        }
    }

    fn eval(self, x: Dyadic) -> crate::Result<Dyadic> {
        match self {
            SampleFn::BigF => fractal::big_f(x),
            SampleFn::Takagi => fractal::takagi_dyadic(x),
            SampleFn::BreveF => fractal::breve_f(x),
            SampleFn::Partial(k) => fractal::f_tilde_partial(k, x),
        }
    }

    fn requires_at_least_one(self) -> bool {
        matches!(self, SampleFn::BigF | SampleFn::BreveF)
    }
}

/// `span / divisor` when it is dyadic.
fn exact_step(span: Dyadic, divisor: u64) -> Option<Dyadic> {
    let twos = divisor.trailing_zeros();
    let odd = i128::from(divisor >> twos);
    let num = span.numerator();
    (num % odd == 0)
        .then(|| Dyadic::try_new(num / odd, span.exponent()).ok())
        .flatten()
        .and_then(|d| d.div_pow2(twos).ok())
}

fn cmd_sample(
    function: &str,
    from: Dyadic,
    to: Dyadic,
    points: u64,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let f = SampleFn::parse(function)?;
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    if from > to {
        return Err(usage(format!(
            "empty range: --from {from} exceeds --to {to}"
        )));
    }
    if f.requires_at_least_one() && from < Dyadic::ONE {
        return Err(usage(format!(
            "{function} is defined only for x >= 1, got --from {from}"
        )));
    }
    let span = to.checked_sub(&from)?;
    let step = exact_step(span, points - 1).ok_or_else(|| {
        usage(format!(
            "grid step ({to} - {from})/{} is not a dyadic rational; choose --points so the step is exact",
            points - 1
        ))
    })?;
    let sep = format.sep();
    writeln!(out, "x{sep}y")?;
    for j in 0..points {
        let x = step.checked_mul_int(i128::from(j))?.checked_add(&from)?;
        let y = f.eval(x)?;
        writeln!(out, "{x}{sep}{y}")?;
    }
    Ok(EXIT_OK)
}

fn read_keys(input: &mut dyn BufRead) -> Result<Vec<i64>, Failure> {
    let mut keys = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let key = t.parse::<i64>().map_err(|_| {
            usage(format!(
                "line {}: not a signed 64-bit integer: {t:?}",
                lineno + 1
            ))
        })?;
        keys.push(key);
    }
    Ok(keys)
}

fn cmd_sortcount(
    case: SortCase,
    n: Option<usize>,
    seed: Option<u64>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> CmdResult {
    let keys = match case {
        SortCase::File => read_keys(input)?,
        _ => {
            let n = n.ok_or_else(|| usage("--n is required for generated cases"))?;
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            match case {
                SortCase::Best => oracle::best_case_input(n)?,
                SortCase::Worst => oracle::worst_case_input(n)?,
                _ => oracle::random_input(n, seed.unwrap_or(0))?,
            }
        }
    };
    if keys.is_empty() {
        return Err(usage("no keys to sort"));
    }
    let trace = oracle::merge_sort_count(&keys);
    let n = trace.n as u64;
    let best = counts::b_recurrence(n)?;
    let worst = counts::w_closed(n)?;
    let comps = u128::from(trace.comparisons);
    writeln!(out, "n={n} comps={comps} B={best} W={worst}")?;
    let ok = match case {
        SortCase::Best => comps == best,
        SortCase::Worst => comps == worst,
        SortCase::Random => best <= comps && comps <= worst,
        SortCase::File => true,
    };
    if !ok {
        return Err(Failure::Check(format!(
            "{case:?} case: comps={comps} outside expectation (B={best}, W={worst})"
        )));
    }
    if trace.output.windows(2).any(|w| w[0] > w[1]) {
        return Err(Failure::Check("output is not sorted".into()));
    }
    Ok(EXIT_OK)
}
