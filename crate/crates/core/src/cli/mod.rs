//! The `bibliopower` command-line tool.
//!
//! Exit status is 0 on success, 2 for bad input (including usage errors) and
//! 1 when a computation fails.

pub mod numlist;
pub mod records;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::{one_proportion_test, one_sample_t, two_sample_t, Alternative, TestResult};
use crate::percentile::{score_records, top_share, PercentileScore};
use crate::power::{
    power_one_mean, power_two_means, sample_size_one_mean, sample_size_one_proportion,
    sample_size_two_means, solve_power_one_mean, solve_power_one_proportion, solve_power_two_means,
    target_mean_one_mean, Direction, PowerQuery, PowerSolution, ProportionQuery, ProportionSolution,
    Sides, TwoSampleQuery, TwoSampleSolution,
};
use crate::resampling::{
    bootstrap_mean, simulate_power, BootstrapConfig, BootstrapResult, CiMethod, Population,
    SimulationConfig, SimulationDesign, DEFAULT_SEED,
};

pub use numlist::parse_numlist;
pub use records::{read_records, write_scores};
pub use report::ReportTable;

pub const SEED_ENV: &str = "BIBLIOPOWER_SEED";

#[derive(Parser, Debug)]
#[command(name = "bibliopower", version, about = "Power analysis and percentile tools for citation-impact studies")]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Design {
    Onemean,
    Twomeans,
    Oneprop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimDesign {
    Onemean,
    Twomeans,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SidesArg {
    One,
    Two,
}

impl From<SidesArg> for Sides {
    fn from(s: SidesArg) -> Self {
        match s {
            SidesArg::One => Sides::OneSided,
            SidesArg::Two => Sides::TwoSided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Lower,
    Upper,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Lower => Direction::Lower,
            DirectionArg::Upper => Direction::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CiArg {
    Percentile,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PopulationArg {
    Uniform,
    Normal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for power given the sample size and alternative.
    Power {
        #[arg(value_enum)]
        design: Design,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Solve for the smallest sample size reaching the requested power.
    Samplesize {
        #[arg(value_enum)]
        design: Design,
        #[command(flatten)]
        plan: PlanArgs,
    },
    /// Solve for the one-sample target mean (minimum detectable difference).
    Targetmean(TargetArgs),
    /// Score publication records with inverted citation percentiles.
    Percentiles(PercentileArgs),
    /// Share of papers below a percentile threshold, tested against its expected value.
    Topshare(TopShareArgs),
    /// Run a t test or proportion test on observed data.
    Test {
        #[arg(value_enum)]
        design: Design,
        #[command(flatten)]
        args: TestArgs,
    },
    /// Bootstrap the mean of a sample.
    Bootstrap(BootstrapArgs),
    /// Estimate power by Monte Carlo simulation.
    Simulate {
        #[arg(value_enum)]
        design: SimDesign,
        #[command(flatten)]
        args: SimArgs,
    },
}

#[derive(Args, Debug)]
struct PlanArgs {
    /// Null value: mean (onemean), first-group mean (twomeans) or share (oneprop).
    #[arg(long = "null", allow_hyphen_values = true)]
    null: Option<f64>,
    /// Alternative value(s) as a number list, e.g. "47.5(-2.5)40".
    #[arg(long = "alt", allow_hyphen_values = true)]
    alt: Option<String>,
    /// Population standard deviation in percentile points.
    #[arg(long, default_value_t = 28.87)]
    sd: f64,
    /// Significance level(s).
    #[arg(long, default_value = "0.05")]
    alpha: String,
    /// Requested power(s).
    #[arg(long, default_value = "0.8")]
    power: String,
    /// Sample size(s); for twomeans, the first-group size.
    #[arg(long)]
    n: Option<String>,
    /// Second-group size (twomeans).
    #[arg(long)]
    n2: Option<u64>,
    /// n2 / n1 when n2 is not given (twomeans).
    #[arg(long, default_value_t = 1.0)]
    ratio: f64,
    #[arg(long, value_enum, default_value_t = SidesArg::Two)]
    sides: SidesArg,
    /// Side of the null for one-sided tests with no effect.
    #[arg(long, value_enum, default_value_t = DirectionArg::Lower)]
    direction: DirectionArg,
    /// Print results as a table even for a single query.
    #[arg(long)]
    table: bool,
    /// Write (varied parameter, result) pairs to this CSV file.
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TargetArgs {
    #[arg(long = "null", default_value_t = 50.0, allow_hyphen_values = true)]
    null: f64,
    #[arg(long, default_value_t = 28.87)]
    sd: f64,
    /// Sample size(s).
    #[arg(long)]
    n: String,
    #[arg(long, default_value = "0.8")]
    power: String,
    #[arg(long, default_value = "0.05")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = SidesArg::Two)]
    sides: SidesArg,
    /// Side of the null on which to place the target mean.
    #[arg(long, value_enum, default_value_t = DirectionArg::Lower)]
    direction: DirectionArg,
    #[arg(long)]
    table: bool,
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PercentileArgs {
    /// CSV with header paper_id,pub_year,subject,citations.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Also write the scores as CSV to this file.
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TopShareArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Percentile threshold; 10 selects the top-10% papers.
    #[arg(long, default_value_t = 10.0)]
    threshold: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args, Debug)]
struct SampleSource {
    /// File of numbers (comma, space or newline separated; optional header line).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Inline sample as a number list.
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    sample: SampleSource,
    /// Second sample file (twomeans).
    #[arg(long = "in2", value_name = "FILE")]
    input2: Option<PathBuf>,
    /// Second inline sample (twomeans).
    #[arg(long, allow_hyphen_values = true)]
    values2: Option<String>,
    /// Null mean (onemean, default 50) or null share (oneprop, default 0.10).
    #[arg(long = "null", allow_hyphen_values = true)]
    null: Option<f64>,
    /// Number of successes (oneprop).
    #[arg(long)]
    successes: Option<u64>,
    /// Number of trials (oneprop).
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_enum, default_value_t = SidesArg::Two)]
    sides: SidesArg,
    /// Alternative side for one-sided tests.
    #[arg(long, value_enum, default_value_t = DirectionArg::Lower)]
    direction: DirectionArg,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    #[command(flatten)]
    sample: SampleSource,
    #[arg(long = "null", default_value_t = 50.0, allow_hyphen_values = true)]
    null: f64,
    #[arg(long, default_value_t = 2000)]
    replicates: usize,
    /// Random seed; defaults to $BIBLIOPOWER_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = CiArg::Percentile)]
    ci: CiArg,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(long = "null", default_value_t = 50.0, allow_hyphen_values = true)]
    null: f64,
    #[arg(long = "alt", allow_hyphen_values = true)]
    alt: f64,
    #[arg(long, default_value_t = 28.87)]
    sd: f64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    n2: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    ratio: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = SidesArg::Two)]
    sides: SidesArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::Lower)]
    direction: DirectionArg,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Random seed; defaults to $BIBLIOPOWER_SEED.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = PopulationArg::Uniform)]
    population: PopulationArg,
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn run_cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { 0 } else { 2 };
        }
    };
    let mut ctx = Context { format: cli.format, stdout, stderr };
    match ctx.dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.stderr, "error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("{SEED_ENV}={text:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn sizes(text: &str) -> Result<Vec<u64>> {
    parse_numlist(text)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(Error::Validation(format!("sample size {v} is not a positive integer")))
            }
        })
        .collect()
}

fn require<T>(value: Option<T>, flag: &str, why: &str) -> Result<T> {
    value.ok_or_else(|| Error::Validation(format!("missing {flag}: {why}")))
}

fn sides_label(sides: Sides) -> &'static str {
    match sides {
        Sides::TwoSided => "two-sided",
        Sides::OneSided => "one-sided",
    }
}

fn alternative_label(alt: Alternative) -> &'static str {
    match alt {
        Alternative::TwoSided => "two-sided",
        Alternative::Less => "one-sided, lower",
        Alternative::Greater => "one-sided, upper",
    }
}

/// One list-valued planning parameter.
struct Axis<T> {
    name: &'static str,
    values: Vec<T>,
}

impl<T: Copy> Axis<T> {
    fn new(name: &'static str, values: Vec<T>) -> Self {
        Self { name, values }
    }
}

/// Grid of planning queries in row order alpha, power, n, alternative.
struct Grid {
    alpha: Axis<f64>,
    power: Axis<f64>,
    n: Axis<Option<u64>>,
    alt: Axis<f64>,
}

impl Grid {
    fn points(&self) -> Vec<(f64, f64, Option<u64>, f64)> {
        let mut out = Vec::new();
        for &a in &self.alpha.values {
            for &p in &self.power.values {
                for &n in &self.n.values {
                    for &m in &self.alt.values {
                        out.push((a, p, n, m));
                    }
                }
            }
        }
        out
    }

    /// Name and per-point value of the single varying parameter, if any.
    fn varying(&self, default: &'static str) -> Result<(&'static str, Vec<f64>)> {
        let lens = [self.alt.values.len(), self.n.values.len(), self.alpha.values.len(), self.power.values.len()];
        let names = [self.alt.name, self.n.name, self.alpha.name, self.power.name];
        let varying: Vec<usize> = (0..4).filter(|&i| lens[i] > 1).collect();
        if varying.len() > 1 {
            return Err(Error::Validation(format!(
                "--curve needs a single varying parameter, but {} all vary",
                varying.iter().map(|&i| names[i]).collect::<Vec<_>>().join(", ")
            )));
        }
        let which = varying.first().copied().unwrap_or_else(|| names.iter().position(|&n| n == default).unwrap_or(0));
        let values = self
            .points()
            .into_iter()
            .map(|(a, p, n, m)| match which {
                0 => m,
                1 => n.map_or(f64::NAN, |v| v as f64),
                2 => a,
                _ => p,
            })
            .collect();
        Ok((names[which], values))
    }
}

fn write_curve(path: &Path, parameter: &str, result: &str, pairs: impl Iterator<Item = (f64, f64)>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
    let wrap = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([parameter, result]).map_err(wrap)?;
    for (x, y) in pairs {
        w.write_record([x.to_string(), y.to_string()]).map_err(wrap)?;
    }
    w.flush().map_err(io)
}

#[derive(Serialize)]
struct TopShareReport {
    threshold: f64,
    papers: usize,
    top_papers: usize,
    share: f64,
    expected_share: f64,
    test: TestResult,
}

#[derive(Serialize)]
struct SimulationReport {
    empirical_power: f64,
    mc_std_error: f64,
    analytic_power: f64,
    reps: usize,
    seed: u64,
    population: Population,
    warnings: Vec<String>,
}

struct Context<'a> {
    format: Format,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Context<'_> {
    fn dispatch(&mut self, command: Command) -> Result<()> {
        match command {
            Command::Power { design, plan } => self.plan(design, plan, false),
            Command::Samplesize { design, plan } => self.plan(design, plan, true),
            Command::Targetmean(args) => self.target_mean(args),
            Command::Percentiles(args) => self.percentiles(args),
            Command::Topshare(args) => self.top_share(args),
            Command::Test { design, args } => self.test(design, args),
            Command::Bootstrap(args) => self.bootstrap(args),
            Command::Simulate { design, args } => self.simulate(design, args),
        }
    }

    fn emit(&mut self, text: &str) -> Result<()> {
        self.stdout.write_all(text.as_bytes()).map_err(io)
    }

    fn warn(&mut self, message: &str) {
        let _ = writeln!(self.stderr, "warning: {message}");
    }

    fn json<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        self.emit(&text)?;
        self.emit("\n")
    }

    /// One object for a single row, an array otherwise.
    fn json_rows<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        match rows {
            [one] => self.json(one),
            _ => self.json(rows),
        }
    }

    fn csv_rows<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        let mut buf = Vec::new();
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        self.stdout.write_all(&buf).map_err(io)
    }

    fn csv_table(&mut self, headers: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut buf = Vec::new();
        {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
            let wrap = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(headers).map_err(wrap)?;
            for r in rows {
                w.write_record(r).map_err(wrap)?;
            }
            w.flush().map_err(io)?;
        }
        self.stdout.write_all(&buf).map_err(io)
    }

    fn rows_or_blocks<T: Serialize>(
        &mut self,
        solutions: &[T],
        table: ReportTable,
        force_table: bool,
        block: impl Fn(&T) -> String,
    ) -> Result<()> {
        match self.format {
            Format::Json => self.json_rows(solutions),
            Format::Csv => self.csv_rows(solutions),
            Format::Text if force_table || solutions.len() > 1 => self.emit(&table.render()),
            Format::Text => {
                let text = solutions.iter().map(block).collect::<Vec<_>>().join("\n");
                self.emit(&text)
            }
        }
    }

    fn plan(&mut self, design: Design, a: PlanArgs, solve_n: bool) -> Result<()> {
        let alpha = Axis::new("alpha", parse_numlist(&a.alpha)?);
        let power = Axis::new("power", if solve_n { parse_numlist(&a.power)? } else { vec![0.8] });
        let n = match (&a.n, solve_n) {
            (_, true) => Axis::new("n", vec![None]),
            (Some(text), false) => Axis::new("n", sizes(text)?.into_iter().map(Some).collect()),
            (None, false) => return Err(Error::Validation("missing --n: power needs the sample size".into())),
        };
        let alt_text = require(a.alt.as_deref(), "--alt", "give the alternative value(s)")?;
        let alt_name = match design {
            Design::Onemean => "mu_a",
            Design::Twomeans => "mu_2",
            Design::Oneprop => "p_a",
        };
        let grid = Grid { alpha, power, n, alt: Axis::new(alt_name, parse_numlist(alt_text)?) };
        let sides: Sides = a.sides.into();
        let verb = if solve_n { "Estimated sample size" } else { "Estimated power" };
        let power_cell = |requested: Option<f64>, achieved: f64| match requested {
            Some(p) => report::general(p),
            None => report::fixed(achieved, 4),
        };

        match design {
            Design::Onemean => {
                let mu0 = a.null.unwrap_or(50.0);
                let solutions = grid
                    .points()
                    .into_iter()
                    .map(|(alpha, power, n, mua)| {
                        let mut q = PowerQuery::default()
                            .with_null(mu0)
                            .with_alternative(mua)
                            .with_sd(a.sd)
                            .with_alpha(alpha)
                            .with_power(power)
                            .with_sides(sides)
                            .with_direction(a.direction.into());
                        q.n = n;
                        if solve_n {
                            sample_size_one_mean(&q)
                        } else {
                            solve_power_one_mean(&q)
                        }
                    })
                    .collect::<Result<Vec<PowerSolution>>>()?;
                self.curve_for(&a.curve, &grid, if solve_n { "n" } else { "power" }, solutions.iter().map(|s| {
                    if solve_n { s.n as f64 } else { s.achieved_power }
                }))?;
                let mut table = ReportTable::new(
                    format!("{verb}, one-sample t test ({})", sides_label(sides)),
                    &["alpha", "power", "N", "delta", "mu_a"],
                );
                for s in &solutions {
                    table.push(vec![
                        report::general(s.alpha),
                        power_cell(s.requested_power, s.achieved_power),
                        s.n.to_string(),
                        report::fixed(s.delta, 4),
                        report::trimmed(s.mua, 2),
                    ]);
                }
                table.footnote = Some(format!("mu_0 = {}, sd = {}", report::general(mu0), report::general(a.sd)));
                self.rows_or_blocks(&solutions, table, a.table, |s| one_mean_block(verb, s))
            }
            Design::Twomeans => {
                let mu1 = a.null.unwrap_or(50.0);
                let solutions = grid
                    .points()
                    .into_iter()
                    .map(|(alpha, power, n, mu2)| {
                        let mut q = TwoSampleQuery::new(mu1, mu2, a.sd);
                        q.alpha = alpha;
                        q.power = power;
                        q.sides = sides;
                        q.ratio = a.ratio;
                        q.n1 = n;
                        q.n2 = a.n2;
                        if solve_n {
                            sample_size_two_means(&q)
                        } else {
                            solve_power_two_means(&q)
                        }
                    })
                    .collect::<Result<Vec<TwoSampleSolution>>>()?;
                self.curve_for(&a.curve, &grid, if solve_n { "n1" } else { "power" }, solutions.iter().map(|s| {
                    if solve_n { s.n1 as f64 } else { s.achieved_power }
                }))?;
                let mut table = ReportTable::new(
                    format!("{verb}, two-sample t test ({})", sides_label(sides)),
                    &["alpha", "power", "N1", "N2", "delta", "mu_2"],
                );
                for s in &solutions {
                    table.push(vec![
                        report::general(s.alpha),
                        power_cell(s.requested_power, s.achieved_power),
                        s.n1.to_string(),
                        s.n2.to_string(),
                        report::fixed(s.delta, 4),
                        report::trimmed(s.mu2, 2),
                    ]);
                }
                table.footnote = Some(format!("mu_1 = {}, sd = {}", report::general(mu1), report::general(a.sd)));
                self.rows_or_blocks(&solutions, table, a.table, |s| two_means_block(verb, s))
            }
            Design::Oneprop => {
                let p0 = a.null.unwrap_or(0.10);
                let solutions = grid
                    .points()
                    .into_iter()
                    .map(|(alpha, power, n, pa)| {
                        let mut q = ProportionQuery::new(p0, pa);
                        q.alpha = alpha;
                        q.power = power;
                        q.sides = sides;
                        q.n = n;
                        if solve_n {
                            sample_size_one_proportion(&q)
                        } else {
                            solve_power_one_proportion(&q)
                        }
                    })
                    .collect::<Result<Vec<ProportionSolution>>>()?;
                self.curve_for(&a.curve, &grid, if solve_n { "n" } else { "power" }, solutions.iter().map(|s| {
                    if solve_n { s.n as f64 } else { s.achieved_power }
                }))?;
                let mut table = ReportTable::new(
                    format!("{verb}, one-proportion score test ({})", sides_label(sides)),
                    &["alpha", "power", "N", "p_a"],
                );
                for s in &solutions {
                    table.push(vec![
                        report::general(s.alpha),
                        power_cell(s.requested_power, s.achieved_power),
                        s.n.to_string(),
                        report::general(s.pa),
                    ]);
                }
                table.footnote = Some(format!("p_0 = {}", report::general(p0)));
                self.rows_or_blocks(&solutions, table, a.table, |s| proportion_block(verb, s))
            }
        }
    }

    fn curve_for(
        &mut self,
        path: &Option<PathBuf>,
        grid: &Grid,
        result: &str,
        ys: impl Iterator<Item = f64>,
    ) -> Result<()> {
        let Some(path) = path else { return Ok(()) };
        let (name, xs) = grid.varying(grid.alt.name)?;
        write_curve(path, name, result, xs.into_iter().zip(ys))
    }

    fn target_mean(&mut self, a: TargetArgs) -> Result<()> {
        let grid = Grid {
            alpha: Axis::new("alpha", parse_numlist(&a.alpha)?),
            power: Axis::new("power", parse_numlist(&a.power)?),
            n: Axis::new("n", sizes(&a.n)?.into_iter().map(Some).collect()),
            alt: Axis::new("mu_a", vec![f64::NAN]),
        };
        let sides: Sides = a.sides.into();
        let solutions = grid
            .points()
            .into_iter()
            .map(|(alpha, power, n, _)| {
                let mut q = PowerQuery::default()
                    .with_null(a.null)
                    .with_sd(a.sd)
                    .with_alpha(alpha)
                    .with_power(power)
                    .with_sides(sides)
                    .with_direction(a.direction.into());
                q.n = n;
                target_mean_one_mean(&q)
            })
            .collect::<Result<Vec<PowerSolution>>>()?;
        if let Some(path) = &a.curve {
            let (name, xs) = grid.varying("n")?;
            write_curve(path, name, "mu_a", xs.into_iter().zip(solutions.iter().map(|s| s.mua)))?;
        }
        let mut table = ReportTable::new(
            format!("Estimated target mean, one-sample t test ({})", sides_label(sides)),
            &["alpha", "power", "N", "delta", "mu_a"],
        );
        for s in &solutions {
            table.push(vec![
                report::general(s.alpha),
                report::general(s.requested_power.unwrap_or(s.achieved_power)),
                s.n.to_string(),
                report::fixed(s.delta, 4),
                report::trimmed(s.mua, 2),
            ]);
        }
        table.footnote = Some(format!("mu_0 = {}, sd = {}", report::general(a.null), report::general(a.sd)));
        self.rows_or_blocks(&solutions, table, a.table, |s| one_mean_block("Estimated target mean", s))
    }

    fn percentiles(&mut self, a: PercentileArgs) -> Result<()> {
        let records = read_records(&a.input)?;
        let scored = score_records(&records)?;
        for (key, size) in &scored.small_sets {
            self.warn(&format!("reference set {key} has only {size} paper(s); its percentiles are coarse"));
        }
        if let Some(path) = &a.output {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
            write_scores(std::io::BufWriter::new(file), &scored.scores)?;
        }
        match self.format {
            Format::Json => self.json(&scored.scores),
            Format::Csv => {
                let mut buf = Vec::new();
                write_scores(&mut buf, &scored.scores)?;
                self.stdout.write_all(&buf).map_err(io)
            }
            Format::Text => {
                let mut table = ReportTable::new(
                    format!("Inverted citation percentiles ({} papers)", scored.scores.len()),
                    &["paper_id", "reference_set", "percentile"],
                );
                for s in &scored.scores {
                    table.push(vec![
                        s.paper_id.clone(),
                        s.reference_key.to_string(),
                        report::fixed(s.inverted_percentile, 2),
                    ]);
                }
                self.emit(&table.render())
            }
        }
    }

    fn top_share(&mut self, a: TopShareArgs) -> Result<()> {
        let records = read_records(&a.input)?;
        let scored = score_records(&records)?;
        let share = top_share(&scored.scores, a.threshold)?;
        let papers = scored.scores.len();
        let top_papers = scored.scores.iter().filter(|s: &&PercentileScore| s.inverted_percentile < a.threshold).count();
        let expected = a.threshold / 100.0;
        if expected >= 1.0 {
            return Err(Error::Validation("--threshold 100 includes every paper; nothing to test".into()));
        }
        let test = one_proportion_test(top_papers as u64, papers as u64, expected, Alternative::TwoSided, a.level)?;
        let report = TopShareReport { threshold: a.threshold, papers, top_papers, share, expected_share: expected, test };
        match self.format {
            Format::Json => self.json(&report),
            Format::Csv => self.csv_table(
                &["threshold", "papers", "top_papers", "share", "expected_share", "statistic", "p_value", "ci_lower", "ci_upper"],
                &[vec![
                    report.threshold.to_string(),
                    papers.to_string(),
                    top_papers.to_string(),
                    share.to_string(),
                    expected.to_string(),
                    test.statistic.to_string(),
                    test.p_value.to_string(),
                    test.ci.lower.to_string(),
                    test.ci.upper.to_string(),
                ]],
            ),
            Format::Text => {
                let text = report::key_values(
                    &format!("Share of papers below percentile {}", report::general(a.threshold)),
                    &[
                        ("papers", papers.to_string()),
                        ("top papers", top_papers.to_string()),
                        ("share", report::fixed(share, 4)),
                        ("expected share", report::general(expected)),
                        ("z statistic", report::fixed(test.statistic, 4)),
                        ("p-value", report::fixed(test.p_value, 4)),
                        (&ci_label(a.level), ci_text(&test, 4)),
                    ],
                );
                self.emit(&text)
            }
        }
    }

    fn load_sample(&mut self, source: &SampleSource, which: &str) -> Result<Vec<f64>> {
        match (&source.input, &source.values) {
            (Some(_), Some(_)) => Err(Error::Validation(format!("give either a file or inline values for the {which}, not both"))),
            (Some(path), None) => records::read_sample(path),
            (None, Some(text)) => parse_numlist(text),
            (None, None) => Err(Error::Validation(format!("missing --in or --values for the {which}"))),
        }
    }

    fn test(&mut self, design: Design, a: TestArgs) -> Result<()> {
        let alternative = Alternative::from_sides(a.sides.into(), a.direction.into());
        let (title, result, n_label) = match design {
            Design::Onemean => {
                let sample = self.load_sample(&a.sample, "sample")?;
                let mu0 = a.null.unwrap_or(50.0);
                let r = one_sample_t(&sample, mu0, alternative, a.level)?;
                (format!("One-sample t test of mean = {}", report::general(mu0)), r, format!("{}", sample.len()))
            }
            Design::Twomeans => {
                let first = self.load_sample(&a.sample, "first sample")?;
                let second = self.load_sample(&SampleSource { input: a.input2.clone(), values: a.values2.clone() }, "second sample")?;
                let r = two_sample_t(&first, &second, alternative, a.level)?;
                ("Two-sample t test of mean(first) - mean(second) = 0".to_string(), r, format!("{} + {}", first.len(), second.len()))
            }
            Design::Oneprop => {
                let successes = require(a.successes, "--successes", "the number of papers in the class")?;
                let n = require(a.n, "--n", "the number of papers")?;
                let p0 = a.null.unwrap_or(0.10);
                let r = one_proportion_test(successes, n, p0, alternative, a.level)?;
                (format!("One-proportion score test of p = {}", report::general(p0)), r, n.to_string())
            }
        };
        match self.format {
            Format::Json => self.json(&result),
            Format::Csv => self.csv_table(
                &["statistic", "df", "p_value", "ci_lower", "ci_upper", "level", "estimate", "effect_size", "alternative"],
                &[vec![
                    result.statistic.to_string(),
                    result.df.map(|d| d.to_string()).unwrap_or_default(),
                    result.p_value.to_string(),
                    result.ci.lower.to_string(),
                    result.ci.upper.to_string(),
                    result.ci.level.to_string(),
                    result.estimate.to_string(),
                    result.effect_size.map(|d| d.to_string()).unwrap_or_default(),
                    serde_json::to_value(result.alternative).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                ]],
            ),
            Format::Text => {
                let mut pairs = vec![("n", n_label), ("estimate", report::fixed(result.estimate, 4))];
                pairs.push(("statistic", report::fixed(result.statistic, 4)));
                if let Some(df) = result.df {
                    pairs.push(("df", report::general(df)));
                }
                pairs.push(("p-value", report::fixed(result.p_value, 4)));
                let label = ci_label(a.level);
                pairs.push((&label, ci_text(&result, 4)));
                if let Some(d) = result.effect_size {
                    pairs.push(("effect size", report::fixed(d, 4)));
                }
                let text = report::key_values(&format!("{title} ({})", alternative_label(alternative)), &pairs);
                self.emit(&text)
            }
        }
    }

    fn bootstrap(&mut self, a: BootstrapArgs) -> Result<()> {
        let sample = self.load_sample(&a.sample, "sample")?;
        let cfg = BootstrapConfig {
            replicates: a.replicates,
            seed: resolve_seed(a.seed)?,
            ci_method: match a.ci {
                CiArg::Percentile => CiMethod::Percentile,
                CiArg::Normal => CiMethod::NormalApprox,
            },
            level: a.level,
        };
        let r: BootstrapResult = bootstrap_mean(&sample, a.null, &cfg)?;
        match self.format {
            Format::Json => self.json(&r),
            Format::Csv => self.csv_table(
                &["point_estimate", "std_error", "ci_lower", "ci_upper", "level", "p_value_vs_mu0", "mu0", "replicates", "seed", "ci_method"],
                &[vec![
                    r.point_estimate.to_string(),
                    r.std_error.to_string(),
                    r.ci.lower.to_string(),
                    r.ci.upper.to_string(),
                    r.ci.level.to_string(),
                    r.p_value_vs_mu0.to_string(),
                    r.mu0.to_string(),
                    r.replicates.to_string(),
                    r.seed.to_string(),
                    match r.ci_method {
                        CiMethod::Percentile => "percentile".into(),
                        CiMethod::NormalApprox => "normal_approx".into(),
                    },
                ]],
            ),
            Format::Text => {
                let label = ci_label(a.level);
                let text = report::key_values(
                    &format!("Bootstrap of the mean ({} replicates, seed {})", r.replicates, r.seed),
                    &[
                        ("n", sample.len().to_string()),
                        ("estimate", report::fixed(r.point_estimate, 4)),
                        ("std. error", report::fixed(r.std_error, 4)),
                        (&label, format!("[{}, {}]", report::fixed(r.ci.lower, 4), report::fixed(r.ci.upper, 4))),
                        (&format!("p-value vs {}", report::general(a.null)), report::fixed(r.p_value_vs_mu0, 4)),
                    ],
                );
                self.emit(&text)
            }
        }
    }

    fn simulate(&mut self, design: SimDesign, a: SimArgs) -> Result<()> {
        let sides: Sides = a.sides.into();
        let (sim_design, analytic) = match design {
            SimDesign::Onemean => {
                let q = PowerQuery::default()
                    .with_null(a.null)
                    .with_alternative(a.alt)
                    .with_sd(a.sd)
                    .with_n(a.n)
                    .with_alpha(a.alpha)
                    .with_sides(sides)
                    .with_direction(a.direction.into());
                (SimulationDesign::OneMean(q), power_one_mean(&q)?)
            }
            SimDesign::Twomeans => {
                let mut q = TwoSampleQuery::new(a.null, a.alt, a.sd);
                q.n1 = Some(a.n);
                q.n2 = a.n2;
                q.ratio = a.ratio;
                q.alpha = a.alpha;
                q.sides = sides;
                (SimulationDesign::TwoMeans(q), power_two_means(&q)?)
            }
        };
        let cfg = SimulationConfig {
            reps: a.reps,
            seed: resolve_seed(a.seed)?,
            population: match a.population {
                PopulationArg::Uniform => Population::Uniform,
                PopulationArg::Normal => Population::Normal,
            },
        };
        let r = simulate_power(&sim_design, &cfg)?;
        for w in &r.warnings {
            self.warn(w);
        }
        let report = SimulationReport {
            empirical_power: r.empirical_power,
            mc_std_error: r.mc_std_error,
            analytic_power: analytic,
            reps: r.reps,
            seed: r.seed,
            population: r.population,
            warnings: r.warnings,
        };
        match self.format {
            Format::Json => self.json(&report),
            Format::Csv => self.csv_table(
                &["empirical_power", "mc_std_error", "analytic_power", "reps", "seed"],
                &[vec![
                    report.empirical_power.to_string(),
                    report.mc_std_error.to_string(),
                    report.analytic_power.to_string(),
                    report.reps.to_string(),
                    report.seed.to_string(),
                ]],
            ),
            Format::Text => {
                let text = report::key_values(
                    &format!("Simulated power ({} replications, seed {})", report.reps, report.seed),
                    &[
                        ("empirical power", report::fixed(report.empirical_power, 4)),
                        ("MC std. error", report::fixed(report.mc_std_error, 4)),
                        ("analytic power", report::fixed(report.analytic_power, 4)),
                    ],
                );
                self.emit(&text)
            }
        }
    }
}

fn ci_label(level: f64) -> String {
    format!("{}% CI", report::general(level * 100.0))
}

fn ci_text(r: &TestResult, decimals: usize) -> String {
    format!("[{}, {}]", report::fixed(r.ci.lower, decimals), report::fixed(r.ci.upper, decimals))
}

fn requested_or_achieved(requested: Option<f64>, achieved: f64) -> Vec<(&'static str, String)> {
    let mut pairs = Vec::new();
    if let Some(p) = requested {
        pairs.push(("power", report::general(p)));
    }
    pairs.push(("achieved power", report::fixed(achieved, 4)));
    pairs
}

fn one_mean_block(verb: &str, s: &PowerSolution) -> String {
    let mut pairs = vec![
        ("alpha", report::general(s.alpha)),
        ("mu_0", report::general(s.mu0)),
        ("mu_a", report::trimmed(s.mua, 2)),
        ("sd", report::general(s.sd)),
        ("delta", report::fixed(s.delta, 4)),
        ("N", s.n.to_string()),
    ];
    pairs.extend(requested_or_achieved(s.requested_power, s.achieved_power));
    report::key_values(&format!("{verb}, one-sample t test ({})", sides_label(s.sides)), &pairs)
}

fn two_means_block(verb: &str, s: &TwoSampleSolution) -> String {
    let mut pairs = vec![
        ("alpha", report::general(s.alpha)),
        ("mu_1", report::general(s.mu1)),
        ("mu_2", report::trimmed(s.mu2, 2)),
        ("sd", report::general(s.sd)),
        ("delta", report::fixed(s.delta, 4)),
        ("N1", s.n1.to_string()),
        ("N2", s.n2.to_string()),
    ];
    pairs.extend(requested_or_achieved(s.requested_power, s.achieved_power));
    report::key_values(&format!("{verb}, two-sample t test ({})", sides_label(s.sides)), &pairs)
}

fn proportion_block(verb: &str, s: &ProportionSolution) -> String {
    let mut pairs = vec![
        ("alpha", report::general(s.alpha)),
        ("p_0", report::general(s.p0)),
        ("p_a", report::general(s.pa)),
        ("N", s.n.to_string()),
    ];
    pairs.extend(requested_or_achieved(s.requested_power, s.achieved_power));
    report::key_values(&format!("{verb}, one-proportion score test ({})", sides_label(s.sides)), &pairs)
}
