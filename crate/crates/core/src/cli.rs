//! Command-line front end. `main` forwards here so the dispatcher can be
//! driven in-process by tests.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::arith::build_spf_table;
use crate::constants::{constants_report, CONSTANTS_V};
use crate::numeric::{fmt_sig15, round_sig15};
use crate::report::{
    compare_dense, compare_rough, e_of_x, emit_figure_data, fit_nu_practical, theta_series, write_rows_csv,
    write_rows_jsonl, CompareRow, FSpec, Figure, DEFAULT_SLACK,
};
use crate::special::{grid_points, FnKind};
use crate::theta::{funceq_identity, rough_members, rough_stats_with, theta_stats, BEnumerator, Ratio, ThetaRule};
use crate::{Error, Result};

/// Exit status for a run that produced its output.
pub const EXIT_OK: i32 = 0;
/// An acceptance-tagged row exceeded its envelope, or an identity failed.
pub const EXIT_FAILED_CHECK: i32 = 1;
/// Bad flags or out-of-range parameters.
pub const EXIT_USAGE: i32 = 2;
/// A numerical routine or the output stream failed.
pub const EXIT_RUNTIME: i32 = 3;

const DEFAULT_MAX_X: u64 = 100_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "taumean",
    version,
    about = "Average divisor counts over rough, t-dense and practical integers",
    long_about = "Average divisor counts over rough, t-dense and practical integers.\n\n\
        Tabulates ω, ξ and λ, computes δ, λ₀ and λ₁ with root certificates, enumerates \
        the sequences exactly and compares them with their asymptotic estimates.\n\n\
        Exit status: 0 success, 1 failed acceptance row or identity, 2 usage error, 3 runtime failure.",
    after_help = "Floating-point output uses 15 significant digits. Progress messages go to stderr."
)]
pub struct Cli {
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, env = "TAUMEAN_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Largest cutoff accepted by enumerating commands
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_X, value_parser = parse_count)]
    pub max_x: u64,

    /// Suppress progress messages
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// δ, λ₀, λ₁ and the complex pair, with root certificates and the zero census
    Constants {
        /// Same as --format json
        #[arg(long)]
        json: bool,
        /// Truncation V of the g(s) integral
        #[arg(long = "truncation", default_value_t = CONSTANTS_V)]
        truncation: f64,
    },
    /// Tabulate ω, ξ or λ on a grid
    Fn {
        #[arg(value_enum)]
        function: FnArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
    },
    /// List the members of a sequence up to x, ascending
    Enumerate {
        #[arg(value_enum)]
        sequence: SeqArg,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[command(flatten)]
        param: SeqParam,
    },
    /// Exact count, τ-sum and harmonic sum of a sequence
    Stats {
        #[arg(value_enum)]
        sequence: SeqArg,
        /// Cutoffs (comma separated)
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_count)]
        x: Vec<u64>,
        #[command(flatten)]
        param: SeqParam,
    },
    /// Compare exact enumerations with asymptotic estimates
    Verify {
        #[command(subcommand)]
        check: VerifyCmd,
    },
    /// Data behind the two figures
    Figures {
        #[arg(value_enum)]
        which: FigArg,
        /// Grid start (fig1: 1, fig2: 0)
        #[arg(long)]
        from: Option<f64>,
        /// Grid end (fig1: 10, fig2: 50)
        #[arg(long)]
        to: Option<f64>,
        /// Grid step (fig1: 0.05, fig2: 0.25)
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FnArg {
    Omega,
    Xi,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeqArg {
    Rough,
    Dense,
    Practical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigArg {
    Fig1,
    Fig2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaArg {
    Dense,
    Practical,
}

#[derive(Args, Debug, Clone)]
pub struct SeqParam {
    /// Roughness bound y (rough)
    #[arg(long)]
    y: Option<f64>,
    /// y = x^{1/u} instead of --y (rough)
    #[arg(long, conflicts_with = "y")]
    u: Option<f64>,
    /// Density ratio t, decimal or p/q (dense)
    #[arg(long)]
    t: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct ThetaSel {
    /// θ-rule
    #[arg(long, value_enum, default_value_t = ThetaArg::Practical)]
    theta: ThetaArg,
    /// Density ratio t for --theta dense
    #[arg(long, default_value = "2")]
    t: String,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// S, Φ, harmonic sum and S/Φ of y-rough numbers against their main terms
    Rough {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_count)]
        x: Vec<u64>,
        #[arg(long)]
        y: Option<f64>,
        /// y = x^{1/u} instead of --y
        #[arg(long, conflicts_with = "y")]
        u: Option<f64>,
        /// Multiple of each error envelope allowed
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: f64,
    },
    /// T(x,t) against x log t λ(v)
    Dense {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_count)]
        x: Vec<u64>,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = DEFAULT_SLACK)]
        slack: f64,
    },
    /// T(x)/(x (log x)^δ) for practical numbers
    Practical {
        #[arg(long, value_delimiter = ',', default_value = "10000000,100000000", value_parser = parse_count)]
        x: Vec<u64>,
    },
    /// Partial sums of Σ τ(n)/n Π_{p≤θ(n)} (1−1/p)²
    #[command(name = "L")]
    L {
        #[command(flatten)]
        sel: ThetaSel,
        #[arg(long, value_delimiter = ',', default_value = "10000,100000,1000000,10000000", value_parser = parse_count)]
        n: Vec<u64>,
    },
    /// Partial sums of the c_θ series against B(x) log x/x
    Ctheta {
        #[command(flatten)]
        sel: ThetaSel,
        #[arg(long, value_delimiter = ',', default_value = "10000000", value_parser = parse_count)]
        n: Vec<u64>,
        /// Cutoff for B(x) log x/x
        #[arg(long, default_value = "100000000", value_parser = parse_count)]
        compare_x: u64,
        /// Growth shape of θ(n)/n for E(x): const:C, logpow:C:A or explog:a
        #[arg(long)]
        f: Option<String>,
    },
    /// Both sides of the θ-decomposition identity for f = 1 and f = τ
    Funceq {
        #[command(flatten)]
        sel: ThetaSel,
        #[arg(long, value_delimiter = ',', default_value = "100000", value_parser = parse_count)]
        x: Vec<u64>,
    },
}

/// Accepts plain integers and scientific forms such as `1e7`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

fn parse_fspec(s: &str) -> Result<FSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<f64> {
        parts
            .get(i)
            .and_then(|p| p.parse::<f64>().ok())
            .ok_or_else(|| Error::Config(format!("bad f-spec '{s}'")))
    };
    let f = match parts[0] {
        "const" if parts.len() == 2 => FSpec::Constant { c: num(1)? },
        "logpow" if parts.len() == 3 => FSpec::LogPower { c: num(1)?, a: num(2)? },
        "explog" if parts.len() == 2 => FSpec::ExpLogPower { a: num(1)? },
        _ => return Err(Error::Config(format!("bad f-spec '{s}' (const:C, logpow:C:A, explog:a)"))),
    };
    Ok(f)
}

fn theta_rule(sel: &ThetaSel) -> Result<ThetaRule> {
    match sel.theta {
        ThetaArg::Practical => Ok(ThetaRule::practical()),
        ThetaArg::Dense => ThetaRule::dense_ratio(Ratio::parse(&sel.t)?),
    }
}

fn rough_y(x: u64, y: Option<f64>, u: Option<f64>) -> Result<f64> {
    match (y, u) {
        (Some(y), _) => Ok(y),
        (None, Some(u)) if u > 0.0 => Ok((x as f64).powf(1.0 / u)),
        (None, Some(u)) => Err(Error::Range { what: "u", value: u, lo: 0.0, hi: f64::INFINITY }),
        (None, None) => Err(Error::Config("rough needs --y or --u".into())),
    }
}

struct Ctx<'a> {
    max_x: u64,
    quiet: bool,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn progress(&mut self, msg: &str) {
        if !self.quiet {
            let _ = writeln!(self.err, "[taumean] {msg}");
        }
    }

    fn check_x(&self, xs: &[u64]) -> Result<()> {
        for &x in xs {
            if x == 0 || x > self.max_x {
                return Err(Error::Range { what: "x", value: x as f64, lo: 1.0, hi: self.max_x as f64 });
            }
        }
        Ok(())
    }
}

/// A small table rendered either as CSV or as JSON lines.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Int(u128),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for r in &self.rows {
                    let cells: Vec<String> = r
                        .iter()
                        .map(|c| match c {
                            Cell::Int(i) => i.to_string(),
                            Cell::Float(f) => fmt_sig15(*f),
                            Cell::Text(s) => s.clone(),
                            Cell::Bool(b) => b.to_string(),
                        })
                        .collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                for r in &self.rows {
                    let mut obj = serde_json::Map::new();
                    for (k, c) in self.header.iter().zip(r) {
                        let v = match c {
                            Cell::Int(i) => match u64::try_from(*i) {
                                Ok(u) => Value::from(u),
                                Err(_) => Value::from(i.to_string()),
                            },
                            Cell::Float(f) => float_value(*f),
                            Cell::Text(s) => Value::from(s.clone()),
                            Cell::Bool(b) => Value::from(*b),
                        };
                        obj.insert((*k).to_string(), v);
                    }
                    writeln!(out, "{}", Value::Object(obj))?;
                }
            }
        }
        Ok(())
    }
}

fn float_value(f: f64) -> Value {
    serde_json::Number::from_f64(round_sig15(f)).map(Value::Number).unwrap_or(Value::Null)
}

/// Round every float in a JSON document to 15 significant digits.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = float_value(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

/// `key,value` lines from a JSON document, nested keys joined with '.'.
fn flatten_json(prefix: &str, v: &Value, out: &mut Table) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_json(&key, x, out);
            }
        }
        Value::Number(n) if n.is_f64() => {
            out.push(vec![Cell::Text(prefix.into()), Cell::Float(n.as_f64().unwrap_or(f64::NAN))])
        }
        Value::Number(n) => out.push(vec![Cell::Text(prefix.into()), Cell::Text(n.to_string())]),
        Value::String(s) => out.push(vec![Cell::Text(prefix.into()), Cell::Text(s.clone())]),
        other => out.push(vec![Cell::Text(prefix.into()), Cell::Text(other.to_string())]),
    }
}

fn write_compare(out: &mut dyn Write, rows: &[CompareRow], format: Format) -> Result<bool> {
    let mut w = out;
    match format {
        Format::Csv => write_rows_csv(&mut w, rows)?,
        Format::Json => write_rows_jsonl(&mut w, rows)?,
    }
    Ok(rows.iter().all(|r| r.pass))
}

/// Parse `args` (program name first) and run. Output goes to `out` unless
/// `--output` names a file; progress and errors go to `err`.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} threads: {e}", cli.threads);
            return EXIT_RUNTIME;
        }
    };
    let result = pool.install(|| match &cli.output {
        Some(path) => {
            let file = File::create(path).map_err(Error::from);
            match file {
                Ok(f) => {
                    let mut w = BufWriter::new(f);
                    let r = dispatch(&cli, &mut w, err);
                    w.flush().map_err(Error::from).and(r)
                }
                Err(e) => Err(e),
            }
        }
        None => {
            let mut w = BufWriter::new(out);
            let r = dispatch(&cli, &mut w, err);
            w.flush().map_err(Error::from).and(r)
        }
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED_CHECK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Range { .. } | Error::Config(_) | Error::Domain(_) | Error::Scale { .. } | Error::Resource { .. } => {
                    EXIT_USAGE
                }
                _ => EXIT_RUNTIME,
            }
        }
    }
}

/// Ok(false) when a check failed.
fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let mut ctx = Ctx { max_x: cli.max_x, quiet: cli.quiet, err };
    let format = cli.format;
    match &cli.command {
        Command::Constants { json, truncation } => {
            let format = if *json { Format::Json } else { format };
            ctx.progress(&format!("constants at V = {truncation}"));
            let t0 = Instant::now();
            let rep = constants_report(*truncation)?;
            ctx.progress(&format!("constants done in {:.1} s", t0.elapsed().as_secs_f64()));
            let mut v = serde_json::to_value(&rep).map_err(|e| Error::Io(e.to_string()))?;
            round_json(&mut v);
            match format {
                Format::Json => {
                    let s = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
                    writeln!(out, "{s}")?;
                }
                Format::Csv => {
                    let mut t = Table::new(&["name", "value"]);
                    flatten_json("", &v, &mut t);
                    t.write(out, Format::Csv)?;
                }
            }
            Ok(true)
        }
        Command::Fn { function, from, to, step } => {
            let kind = match function {
                FnArg::Omega => FnKind::Omega,
                FnArg::Xi => FnKind::Xi,
                FnArg::Lambda => FnKind::Lambda,
            };
            let mut t = Table::new(&["u", "value", "err_budget"]);
            for u in grid_points(*from, *to, *step)? {
                let (v, e) = kind.eval_with_err(u);
                t.push(vec![Cell::Float(u), Cell::Float(v), Cell::Float(e)]);
            }
            t.write(out, format)?;
            Ok(true)
        }
        Command::Enumerate { sequence, x, param } => {
            ctx.check_x(&[*x])?;
            ctx.progress(&format!("enumerating {sequence:?} up to {x}"));
            let members = match sequence {
                SeqArg::Rough => {
                    let table = build_spf_table((*x).max(2))?;
                    rough_members(&table, *x, rough_y(*x, param.y, param.u)?)?
                }
                SeqArg::Dense | SeqArg::Practical => {
                    BEnumerator::new(&seq_rule(*sequence, param)?, *x)?.collect_sorted()?
                }
            };
            ctx.progress(&format!("{} members", members.len()));
            let mut t = Table::new(&["n"]);
            for n in members {
                t.push(vec![Cell::Int(n as u128)]);
            }
            t.write(out, format)?;
            Ok(true)
        }
        Command::Stats { sequence, x, param } => {
            ctx.check_x(x)?;
            let mut t = Table::new(&["sequence", "param", "x", "count", "tau_sum", "harmonic"]);
            let table = match sequence {
                SeqArg::Rough => Some(build_spf_table(x.iter().copied().max().unwrap_or(2).max(2))?),
                _ => None,
            };
            for &xi in x {
                ctx.progress(&format!("stats {sequence:?} x = {xi}"));
                let (tag, st) = match (&table, sequence) {
                    (Some(tab), _) => {
                        let y = rough_y(xi, param.y, param.u)?;
                        (format!("y={}", fmt_sig15(y)), rough_stats_with(tab, xi, y)?)
                    }
                    _ => {
                        let rule = seq_rule(*sequence, param)?;
                        (rule.tag(), theta_stats(&rule, xi)?)
                    }
                };
                t.push(vec![
                    Cell::Text(format!("{sequence:?}").to_lowercase()),
                    Cell::Text(tag),
                    Cell::Int(xi as u128),
                    Cell::Int(st.count as u128),
                    Cell::Int(st.tau_sum),
                    Cell::Float(st.harmonic),
                ]);
            }
            t.write(out, format)?;
            Ok(true)
        }
        Command::Verify { check } => verify(check, &mut ctx, out, format),
        Command::Figures { which, from, to, step } => {
            let fig = match which {
                FigArg::Fig1 => Figure::Fig1,
                FigArg::Fig2 => Figure::Fig2,
            };
            let (f0, t0, s0) = fig.default_grid();
            let (from, to, step) = (from.unwrap_or(f0), to.unwrap_or(t0), step.unwrap_or(s0));
            match format {
                Format::Csv => {
                    let mut w = out;
                    emit_figure_data(&mut w, fig, from, to, step)?;
                }
                Format::Json => {
                    let mut buf = Vec::new();
                    emit_figure_data(&mut buf, fig, from, to, step)?;
                    csv_to_jsonl(&buf, out)?;
                }
            }
            Ok(true)
        }
    }
}

fn seq_rule(sequence: SeqArg, param: &SeqParam) -> Result<ThetaRule> {
    match sequence {
        SeqArg::Practical => Ok(ThetaRule::practical()),
        SeqArg::Dense => {
            let t = param.t.as_deref().ok_or_else(|| Error::Config("dense needs --t".into()))?;
            ThetaRule::dense_ratio(Ratio::parse(t)?)
        }
        SeqArg::Rough => Err(Error::Config("rough numbers have no θ-rule".into())),
    }
}

/// Numeric-only CSV (as the figure emitter writes) to JSON lines.
fn csv_to_jsonl(csv: &[u8], out: &mut dyn Write) -> Result<()> {
    let text = String::from_utf8_lossy(csv);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    for line in lines {
        let mut obj = serde_json::Map::new();
        for (k, cell) in header.iter().zip(line.split(',')) {
            obj.insert((*k).to_string(), cell.parse::<f64>().map(float_value).unwrap_or(Value::Null));
        }
        writeln!(out, "{}", Value::Object(obj))?;
    }
    Ok(())
}

fn verify(check: &VerifyCmd, ctx: &mut Ctx, out: &mut dyn Write, format: Format) -> Result<bool> {
    match check {
        VerifyCmd::Rough { x, y, u, slack } => {
            ctx.check_x(x)?;
            let mut rows = Vec::new();
            for &xi in x {
                let y = rough_y(xi, *y, *u)?;
                ctx.progress(&format!("rough x = {xi}, y = {}", fmt_sig15(y)));
                rows.extend(compare_rough(xi, y, *slack)?);
            }
            write_compare(out, &rows, format)
        }
        VerifyCmd::Dense { x, t, slack } => {
            ctx.check_x(x)?;
            let ratio = Ratio::parse(t)?;
            let mut rows = Vec::new();
            for &xi in x {
                ctx.progress(&format!("dense x = {xi}, t = {ratio}"));
                rows.extend(compare_dense(xi, ratio, *slack)?);
            }
            write_compare(out, &rows, format)
        }
        VerifyCmd::Practical { x } => {
            ctx.check_x(x)?;
            ctx.progress(&format!("practical numbers up to {}", x.iter().max().copied().unwrap_or(0)));
            let pts = fit_nu_practical(x)?;
            let mut t = Table::new(&["x", "tau_sum", "ratio", "change_from_previous"]);
            let mut prev: Option<f64> = None;
            for p in pts {
                let change = prev.map_or(0.0, |q| (p.ratio - q) / q);
                t.push(vec![Cell::Int(p.x as u128), Cell::Int(p.tau_sum), Cell::Float(p.ratio), Cell::Float(change)]);
                prev = Some(p.ratio);
            }
            t.write(out, format)?;
            Ok(true)
        }
        VerifyCmd::L { sel, n } => {
            ctx.check_x(n)?;
            let rule = theta_rule(sel)?;
            ctx.progress(&format!("L series for {} up to {}", rule.tag(), n.iter().max().copied().unwrap_or(0)));
            let pts = theta_series(&rule, n)?;
            let mut t = Table::new(&["theta", "n", "l_partial", "increment", "pass"]);
            let mut ok = true;
            let mut prev = 0.0;
            for p in pts {
                let pass = p.l_partial <= 1.0 && p.l_partial >= prev;
                ok &= pass;
                t.push(vec![
                    Cell::Text(rule.tag()),
                    Cell::Int(p.n as u128),
                    Cell::Float(p.l_partial),
                    Cell::Float(p.l_partial - prev),
                    Cell::Bool(pass),
                ]);
                prev = p.l_partial;
            }
            t.write(out, format)?;
            Ok(ok)
        }
        VerifyCmd::Ctheta { sel, n, compare_x, f } => {
            ctx.check_x(n)?;
            ctx.check_x(&[*compare_x])?;
            let fspec = f.as_deref().map(parse_fspec).transpose()?;
            let e = match &fspec {
                Some(fs) => Some(e_of_x(fs, *compare_x as f64)?),
                None => None,
            };
            let rule = theta_rule(sel)?;
            ctx.progress(&format!("c_θ series for {}", rule.tag()));
            let pts = theta_series(&rule, n)?;
            ctx.progress(&format!("B({compare_x})"));
            let b = theta_stats(&rule, *compare_x)?.count;
            let cx = *compare_x as f64;
            let scaled = b as f64 * cx.ln() / cx;
            let mut t = Table::new(&[
                "theta",
                "n",
                "c_partial",
                "negative_c_terms",
                "compare_x",
                "b_count",
                "b_scaled",
                "abs_diff",
                "e_of_x",
            ]);
            for p in pts {
                t.push(vec![
                    Cell::Text(rule.tag()),
                    Cell::Int(p.n as u128),
                    Cell::Float(p.c_partial),
                    Cell::Int(p.negative_c_terms as u128),
                    Cell::Int(*compare_x as u128),
                    Cell::Int(b as u128),
                    Cell::Float(scaled),
                    Cell::Float((p.c_partial - scaled).abs()),
                    e.map_or(Cell::Text(String::new()), Cell::Float),
                ]);
            }
            t.write(out, format)?;
            Ok(true)
        }
        VerifyCmd::Funceq { sel, x } => {
            ctx.check_x(x)?;
            let rule = theta_rule(sel)?;
            let table = build_spf_table(x.iter().copied().max().unwrap_or(2).max(2))?;
            let mut t =
                Table::new(&["theta", "x", "lhs_count", "rhs_count", "lhs_tau", "rhs_tau", "result"]);
            let mut ok = true;
            for &xi in x {
                ctx.progress(&format!("identity for {} at x = {xi}", rule.tag()));
                let c = funceq_identity(&rule, xi, &table)?;
                ok &= c.holds();
                t.push(vec![
                    Cell::Text(rule.tag()),
                    Cell::Int(xi as u128),
                    Cell::Int(c.lhs_count),
                    Cell::Int(c.rhs_count),
                    Cell::Int(c.lhs_tau),
                    Cell::Int(c.rhs_tau),
                    Cell::Text(if c.holds() { "PASS" } else { "FAIL" }.into()),
                ]);
            }
            t.write(out, format)?;
            Ok(ok)
        }
    }
}
