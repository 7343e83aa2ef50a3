//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lclab_core::asymptotics::{convergence_report, extrema, limit_function, PiecewiseQuadratic};
use lclab_core::automaton::AutomatonSpec;
use lclab_core::complexity::{line_complexity, BlockScan, ComplexitySeq, ScanPolicy};
use lclab_core::genfun::{build_framework, FrameworkInstance};
use lclab_core::recursion::{fit_general_order, verify_theorem_main, MainOutcome, RecursionSpec};
use lclab_core::structure::{intersection_k_min, intersection_table_from_scan, suspicion};
use lclab_core::{GfpPoly, PrimeModulus};
use serde_json::{json, Value};

use crate::formats;
use crate::render::{self, Pad};

/// Environment variable capping internal parallelism.
pub const THREADS_VAR: &str = "LCLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "lclab", version, about = "Line complexity of additive cellular automata over Z/p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct AutomatonArgs {
    /// Prime modulus.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Rule T in ascending order: "1101" is 1+x+x^3; use commas when p > 10.
    #[arg(long)]
    rule: String,
    /// Initial state, same encoding as the rule.
    #[arg(long, default_value = "1")]
    initial: String,
}

#[derive(Args, Debug, Clone, Default)]
struct ScanArgs {
    /// Extra silent rows required after the completeness certificate.
    #[arg(long)]
    window: Option<usize>,
    /// Hard cap on scanned rows.
    #[arg(long)]
    row_limit: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct OutArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PictureFormat {
    Text,
    Pbm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PadArg {
    None,
    Zero,
    Blank,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the first rows of the automaton.
    Simulate {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 16)]
        rows: usize,
        #[arg(long, value_enum, default_value_t = PictureFormat::Text)]
        format: PictureFormat,
        /// Right padding of text lines.
        #[arg(long, value_enum, default_value_t = PadArg::None)]
        pad: PadArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Line complexity a(k) for k = 0..=kmax.
    Complexity {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 32)]
        kmax: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Odd/even-part analysis of a rule over Z/2.
    Suspicious {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Intersection sizes of the four block images for k = n+1..=kmax.
    Intersections {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 16)]
        kmax: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fit and verify a recursion for a(k).
    Recursion {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 200)]
        kmax: usize,
        /// Largest order tried by the general fit.
        #[arg(long, default_value_t = 8)]
        order_max: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generating-function data: lambda, R, C and the recursion constants.
    Genfun {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 200)]
        kmax: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The piecewise quadratic limit of a(k)/k^2 and its extrema.
    Limit {
        #[command(flatten)]
        automaton: AutomatonArgs,
        #[arg(long, default_value_t = 200)]
        kmax: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare alpha(k)/k^2 with the limit function on log-spaced k.
    Converge {
        #[command(flatten)]
        automaton: AutomatonArgs,
        /// Scan length; raised to what ymax needs.
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = 32.0)]
        ymin: f64,
        #[arg(long, default_value_t = 2047.0)]
        ymax: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or values; exit status 2.
    Usage(String),
    /// The computation itself failed; exit status 1.
    Compute(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => formats::error_json("usage", m),
            CliError::Compute(m) => formats::error_json("computation", m),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn compute(e: impl ToString) -> CliError {
    CliError::Compute(e.to_string())
}

/// Reads the thread cap. The core algorithms are sequential, so any
/// positive cap is met; the value is only validated.
fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(usage(format!("{THREADS_VAR}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

impl AutomatonArgs {
    fn spec(&self) -> Result<AutomatonSpec, CliError> {
        AutomatonSpec::parse(self.p, &self.rule, &self.initial).map_err(usage)
    }
}

impl ScanArgs {
    fn policy(&self) -> ScanPolicy {
        let mut policy = ScanPolicy { window: self.window, ..ScanPolicy::default() };
        if let Some(limit) = self.row_limit {
            policy.row_limit = limit;
        }
        policy
    }
}

fn check_kmax(kmax: usize) -> Result<(), CliError> {
    if kmax == 0 {
        return Err(usage("--kmax must be at least 1"));
    }
    Ok(())
}

fn exact_sequence(spec: &AutomatonSpec, kmax: usize, scan: &ScanArgs) -> Result<ComplexitySeq, CliError> {
    let seq = line_complexity(spec, kmax, &scan.policy());
    match (0..=kmax).find(|&k| !seq.is_exact(k)) {
        Some(k) => Err(compute(format!("a({k}) is not exact; raise --row-limit"))),
        None => Ok(seq),
    }
}

fn theorem_main(seq: &ComplexitySeq) -> Result<RecursionSpec, CliError> {
    match verify_theorem_main(seq, seq.spec().degree()).map_err(compute)? {
        MainOutcome::Verified { spec, .. } => Ok(spec),
        MainOutcome::Violated { k, parity, constant, found, .. } => Err(compute(format!(
            "recursion with C = {constant} fails at k = {k} ({parity:?} display gives {found}); raise --kmax"
        ))),
    }
}

fn framework(seq: &ComplexitySeq) -> Result<FrameworkInstance, CliError> {
    let rec = theorem_main(seq)?;
    build_framework(seq, &rec).map_err(compute)
}

fn limit_of(spec: &AutomatonSpec, kmax: usize, scan: &ScanArgs) -> Result<(ComplexitySeq, FrameworkInstance, PiecewiseQuadratic), CliError> {
    let seq = exact_sequence(spec, kmax, scan)?;
    let fw = framework(&seq)?;
    let f = limit_function(&fw).map_err(compute)?;
    Ok((seq, fw, f))
}

fn limit_json(f: &PiecewiseQuadratic) -> Value {
    json!({"function": formats::piecewise_json(f), "extrema": formats::extrema_json(&extrema(f))})
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// What a successful dispatch produced. `failure` is set when the output is
/// still worth writing but the run must exit nonzero.
struct Output {
    text: String,
    path: Option<PathBuf>,
    failure: Option<CliError>,
}

fn done(text: String, out: OutArgs) -> Result<Output, CliError> {
    Ok(Output { text, path: out.out, failure: None })
}

fn execute(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Simulate { automaton, rows, format, pad, out } => {
            let spec = automaton.spec()?;
            if rows == 0 {
                return Err(usage("--rows must be at least 1"));
            }
            let text = match format {
                PictureFormat::Pbm => render::pbm(&spec, rows),
                PictureFormat::Text => {
                    let pad = match pad {
                        PadArg::None => Pad::None,
                        PadArg::Zero => Pad::Zero,
                        PadArg::Blank => Pad::Blank,
                    };
                    render::text(&spec, rows, pad)
                }
            };
            done(text, out)
        }
        Command::Complexity { automaton, kmax, scan, format, out } => {
            let spec = automaton.spec()?;
            check_kmax(kmax)?;
            let seq = line_complexity(&spec, kmax, &scan.policy());
            let text = match format {
                TableFormat::Csv => formats::complexity_csv(&seq),
                TableFormat::Json => pretty(&formats::complexity_json(&seq)),
            };
            let failure = (0..=kmax)
                .find(|&k| !seq.is_exact(k))
                .map(|k| compute(format!("a({k}) and beyond are lower bounds; raise --row-limit")));
            Ok(Output { text, path: out.out, failure })
        }
        Command::Suspicious { p, rule, out } => {
            if p != 2 {
                return Err(usage("suspicious is defined over Z/2 only"));
            }
            let rule = GfpPoly::parse(PrimeModulus::TWO, &rule).map_err(usage)?;
            let report = suspicion(&rule).map_err(usage)?;
            done(pretty(&formats::suspicion_json(&report)), out)
        }
        Command::Intersections { automaton, kmax, scan, out } => {
            let spec = automaton.spec()?;
            if spec.modulus().get() != 2 {
                return Err(usage("intersections are defined over Z/2 only"));
            }
            let n = spec.degree();
            let k_min = intersection_k_min(n);
            if kmax < k_min {
                return Err(usage(format!("--kmax must be at least n + 1 = {k_min}")));
            }
            let block_scan = BlockScan::run(&spec, kmax + n.div_ceil(2), &scan.policy());
            let mut text = format!("{}\n", formats::INTERSECTION_HEADER);
            for k in k_min..=kmax {
                let t = intersection_table_from_scan(&block_scan, k).map_err(compute)?;
                text.push_str(&formats::intersection_row(&t));
                text.push('\n');
            }
            done(text, out)
        }
        Command::Recursion { automaton, kmax, order_max, scan, out } => {
            let spec = automaton.spec()?;
            check_kmax(kmax)?;
            let seq = exact_sequence(&spec, kmax, &scan)?;
            let main = if spec.modulus().get() == 2 { theorem_main(&seq).ok() } else { None };
            let rec = match main {
                Some(rec) => rec,
                None => fit_general_order(&seq, order_max)
                    .map_err(compute)?
                    .ok_or_else(|| compute(format!("no recursion of order <= {order_max} fits up to k = {kmax}")))?,
            };
            done(pretty(&formats::recursion_json(&rec)), out)
        }
        Command::Genfun { automaton, kmax, scan, out } => {
            let spec = automaton.spec()?;
            check_kmax(kmax)?;
            let seq = exact_sequence(&spec, kmax, &scan)?;
            let fw = framework(&seq)?;
            done(pretty(&formats::framework_json(&fw).map_err(compute)?), out)
        }
        Command::Limit { automaton, kmax, scan, out } => {
            let spec = automaton.spec()?;
            check_kmax(kmax)?;
            let (_, _, f) = limit_of(&spec, kmax, &scan)?;
            done(pretty(&limit_json(&f)), out)
        }
        Command::Converge { automaton, kmax, ymin, ymax, samples, scan, format, out } => {
            let spec = automaton.spec()?;
            if !(ymin >= 1.0 && ymax >= ymin && ymax.is_finite()) || samples == 0 {
                return Err(usage("need 1 <= ymin <= ymax and samples >= 1"));
            }
            let need = ymax.floor() as usize + spec.degree() + 1;
            let (seq, fw, f) = limit_of(&spec, kmax.unwrap_or(need).max(need), &scan)?;
            let report = convergence_report(&seq, &fw, &f, ymin, ymax, samples).map_err(compute)?;
            let text = match format {
                TableFormat::Csv => formats::convergence_csv(&report),
                TableFormat::Json => {
                    let mut v = limit_json(&f);
                    let extra = formats::convergence_json(&report);
                    v["rows"] = extra["rows"].clone();
                    v["octaves"] = extra["octaves"].clone();
                    pretty(&v)
                }
            };
            done(text, out)
        }
    }
}

/// Runs one invocation and returns the exit status: 0 on success, 2 on
/// usage errors, 1 when the computation fails. Errors go to `stderr` as JSON.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            return report(stderr, usage(e.render().to_string().trim_end()));
        }
    };
    let result = thread_cap().and_then(|_| execute(cli.command));
    let output = match result {
        Ok(output) => output,
        Err(e) => return report(stderr, e),
    };
    let written = match &output.path {
        None => stdout.write_all(output.text.as_bytes()).map_err(compute),
        Some(path) => std::fs::write(path, &output.text).map_err(|e| compute(format!("{}: {e}", path.display()))),
    };
    match written.err().or(output.failure) {
        Some(e) => report(stderr, e),
        None => 0,
    }
}

fn report(stderr: &mut dyn Write, e: CliError) -> i32 {
    let _ = writeln!(stderr, "{}", e.to_json());
    e.status()
}
