//! Command-line front end. Exit codes: 0 when a program was found (or the
//! command succeeded), 2 when synthesis found nothing, 1 on any error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::IpAddr;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dsi_bench::{load_dataset, render_csv, render_report, run_benchmark, ReportFormat, RunConfig};
use dsi_core::dsbk::{builtin_domains, describe_domain, Library};
use dsi_core::synth::{SpaceCache, SynthesisResult};
use dsi_core::term::FillResult;

use crate::engine::{self, Limits};
use crate::server::{self, ServiceConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOTHING_FOUND: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dsi",
    version,
    about = "Fill-by-example string transformation with domain libraries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print ranked programs consistent with the example rows.
    Synth(SynthArgs),
    /// Complete the output column of a CSV with the top program.
    Fill(SynthArgs),
    /// Run every dataset of a suite against a set of libraries.
    Bench(BenchArgs),
    /// List the builtin domain libraries.
    Domains,
    /// Serve the JSON API and the UI bundle.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Builtin domain library.
    #[arg(
        long,
        conflicts_with = "manifest",
        required_unless_present = "manifest"
    )]
    pub domain: Option<String>,
    /// Path to a `.dsbk` manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// CSV with `input` and `expected` columns.
    #[arg(long)]
    pub examples: PathBuf,
    /// Leading rows used as examples; defaults to the rows before the first empty output.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = engine::DEFAULT_D_MAX)]
    pub dmax: u32,
    /// Time budget in seconds.
    #[arg(long, default_value_t = 120.0)]
    pub timeout: f64,
    /// Programs to print.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Also print the completed column.
    #[arg(long)]
    pub fill: bool,
    /// Write the completed column here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "suite")]
    pub suite: PathBuf,
    #[arg(long, default_value_t = engine::DEFAULT_D_MAX)]
    pub dmax: u32,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Time budget per cell in seconds.
    #[arg(long, default_value_t = 120.0)]
    pub timeout: f64,
    /// Comma-separated library names; all builtins by default.
    #[arg(long, value_delimiter = ',')]
    pub libraries: Vec<String>,
    /// Report CSV path.
    #[arg(long, default_value = "report.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value_t = engine::DEFAULT_D_MAX)]
    pub dmax: u32,
    /// Default time budget in seconds.
    #[arg(long, default_value_t = 120.0)]
    pub timeout: f64,
    #[arg(long)]
    pub max_candidates: Option<u64>,
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Directory for persisted candidate spaces.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Built UI bundle served at `/`.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}

fn budget_ms(seconds: f64) -> Result<u64> {
    if !(seconds.is_finite() && seconds > 0.0) {
        bail!("--timeout must be a positive number of seconds");
    }
    Ok(((seconds * 1000.0).round() as u64).max(1))
}

fn library(args: &SynthArgs) -> Result<Library> {
    match (&args.domain, &args.manifest) {
        (Some(name), _) => Ok(engine::builtin_library(name)?),
        (None, Some(path)) => Ok(engine::library_from_file(path)?),
        (None, None) => bail!("one of --domain or --manifest is required"),
    }
}

struct Synthesis {
    rows: Vec<(String, String)>,
    n: usize,
    fuel: u64,
    result: SynthesisResult,
}

fn run_synthesis(args: &SynthArgs) -> Result<Synthesis> {
    let lib = library(args)?;
    let ds = load_dataset(&args.examples)?;
    let n = args.n.unwrap_or_else(|| engine::infer_n(&ds.rows));
    if n == 0 || n > ds.rows.len() {
        bail!(
            "--n must be between 1 and {} for {}",
            ds.rows.len(),
            args.examples.display()
        );
    }
    let limits = Limits {
        d_max: Some(args.dmax),
        budget_ms: Some(budget_ms(args.timeout)?),
        max_returned: Some(args.top.max(1)),
        max_candidates: None,
    };
    let req = engine::request(lib, ds.rows[..n].to_vec(), &limits);
    let result = engine::run(&req, SpaceCache::global())?;
    Ok(Synthesis {
        rows: ds.rows,
        n,
        fuel: req.fuel,
        result,
    })
}

/// `input,output` CSV with example rows kept and the rest filled.
fn completed_column(s: &Synthesis) -> Result<(String, usize)> {
    let program = s.result.best().context("no program to fill with")?;
    let rest: Vec<&str> = s.rows[s.n..].iter().map(|(x, _)| x.as_str()).collect();
    let fills = engine::fill(program, &rest, s.fuel);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["input", "output"])?;
    for (x, y) in &s.rows[..s.n] {
        w.write_record([x, y])?;
    }
    let mut failures = 0;
    for (x, f) in rest.iter().zip(&fills) {
        match f {
            FillResult::Ok(y) => w.write_record([*x, y.as_str()])?,
            FillResult::Failed(_) => {
                failures += 1;
                w.write_record([*x, ""])?
            }
        }
    }
    Ok((String::from_utf8(w.into_inner()?)?, failures))
}

fn emit(text: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn synth(
    args: &SynthArgs,
    fill_only: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let s = run_synthesis(args)?;
    let st = &s.result.stats;
    writeln!(
        stderr,
        "n={} d_max={} enumerated={} evaluated={} elapsed_ms={}{}",
        s.n,
        args.dmax,
        st.enumerated_count,
        st.evaluated_count,
        st.elapsed_ms,
        if st.timed_out { " timed out" } else { "" }
    )?;
    if s.result.programs.is_empty() {
        writeln!(stderr, "no program is consistent with the examples")?;
        return Ok(EXIT_NOTHING_FOUND);
    }
    if !fill_only {
        for (i, p) in s.result.programs.iter().enumerate() {
            writeln!(stdout, "{:>3}. {}", i + 1, p.rendering())?;
        }
    }
    if fill_only || args.fill {
        let (csv, failures) = completed_column(&s)?;
        if !fill_only && args.out.is_none() {
            writeln!(stdout)?;
        }
        emit(&csv, &args.out, stdout)?;
        if failures > 0 {
            writeln!(stderr, "{failures} row(s) could not be filled")?;
        }
    }
    Ok(EXIT_OK)
}

fn bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<i32> {
    if !args.suite.is_dir() {
        bail!("suite directory {} does not exist", args.suite.display());
    }
    let all = builtin_domains();
    let libraries: Vec<Library> = if args.libraries.is_empty() {
        all
    } else {
        args.libraries
            .iter()
            .map(|name| engine::builtin_library(name.trim()))
            .collect::<Result<_, _>>()?
    };
    let config = RunConfig {
        n: args.n,
        d_max: args.dmax,
        budget_ms: budget_ms(args.timeout)?,
        ..RunConfig::default()
    };
    let report = run_benchmark(&args.suite, &libraries, &config)?;
    fs::write(&args.out, render_csv(&report.matrix()))
        .with_context(|| format!("writing {}", args.out.display()))?;
    stdout.write_all(render_report(&report, ReportFormat::Text).as_bytes())?;
    Ok(EXIT_OK)
}

fn domains(stdout: &mut dyn Write) -> Result<i32> {
    for lib in builtin_domains() {
        writeln!(
            stdout,
            "{:<9} {:>4}  {}",
            lib.name(),
            lib.breadth(),
            describe_domain(lib.name())
        )?;
    }
    Ok(EXIT_OK)
}

fn serve(args: &ServeArgs) -> Result<i32> {
    let config = ServiceConfig {
        bind: args.bind,
        port: args.port,
        d_max: args.dmax,
        budget_ms: budget_ms(args.timeout)?,
        max_candidates: args.max_candidates,
        suite_dir: args.suite.clone(),
        cache_dir: args.cache_dir.clone(),
        static_dir: args.static_dir.clone(),
    };
    config.validate()?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(server::serve(config))?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Synth(a) => synth(a, false, stdout, stderr),
        Command::Fill(a) => synth(a, true, stdout, stderr),
        Command::Bench(a) => bench(a, stdout),
        Command::Domains => domains(stdout),
        Command::Serve(a) => serve(a),
    }
}

/// Parses `args` and runs the command, reporting errors on `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return EXIT_ERROR;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
