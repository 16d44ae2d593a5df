//! The `orn` command-line driver.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::blackbox::{linear_blackbox, sample_blackbox, SampleOptions};
use crate::dsl;
use crate::dynamics::{
    assignments, emit_equations, grey_box, simulate_with, EquationFormat, FlowSpec, SimOptions,
};
use crate::error::Error;
use crate::io::{to_json, trajectory_csv, RelationDocument, TupleDocument};
use crate::laws::run_law_suite;
use crate::rational::{parse_rational, to_f64};
use crate::reaction::OpenRxNet;

#[derive(Parser, Debug)]
#[command(name = "orn", version, about = "Compose, simulate and black-box open reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Glue the outputs of A to the inputs of B, matching points by name.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Place two networks side by side.
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the open rate equations.
    Equations {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Integrate the open rate equation with RK4.
    Simulate {
        file: PathBuf,
        /// Initial concentrations, `A=1,B=0.5`; unlisted species start at 0.
        #[arg(long, default_value = "")]
        c0: String,
        /// Inflows, `p=expr,…`; `expr` is a polynomial in `t`, or pieces
        /// `start:expr;start:expr`.
        #[arg(long, default_value = "")]
        inflow: String,
        #[arg(long, default_value = "")]
        outflow: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Clamp concentrations at zero after each step.
        #[arg(long)]
        nonnegative: bool,
    },
    /// Sample the steady-state relation, or compute it exactly for linear
    /// systems.
    Blackbox {
        file: PathBuf,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        linear: bool,
        /// Sampling range for a species, `A=lo:hi`; repeatable.
        #[arg(long = "box")]
        ranges: Vec<String>,
    },
    /// Run the law suite on random instances.
    CheckLaws {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Latex,
}

/// A failure with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Domain(format!("{}: {e}", path.display()))
}

/// Runs the driver with process arguments, printing to the real streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the driver. Exit codes: 0 success, 1 domain error, 2 usage error.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<OpenRxNet, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    dsl::parse(&text).map_err(in_file(path))
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> Result<(), Failure> {
    match target {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Domain(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Domain(e.to_string())),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Compose { a, b, output } => {
            let (na, nb) = (load(&a)?, load(&b)?);
            let composite = na.then(&nb).map_err(|e| {
                Failure::Domain(format!(
                    "cannot compose {} with {}: {e}",
                    a.display(),
                    b.display()
                ))
            })?;
            emit(out, output.as_deref(), &dsl::render(&composite))
        }
        Command::Tensor { a, b, output } => {
            let (na, nb) = (load(&a)?, load(&b)?);
            emit(out, output.as_deref(), &dsl::render(&na.tensor(&nb)))
        }
        Command::Equations { file, format } => {
            let sys = grey_box(&load(&file)?);
            let format = match format {
                Format::Text => EquationFormat::Text,
                Format::Latex => EquationFormat::Latex,
            };
            emit(out, None, &emit_equations(&sys, format))
        }
        Command::Simulate {
            file,
            c0,
            inflow,
            outflow,
            t_end,
            dt,
            csv,
            nonnegative,
        } => {
            let sys = grey_box(&load(&file)?);
            let mut state = vec![0.0; sys.apex().len()];
            let c0 = assignments(&c0).map_err(|e| Failure::Usage(format!("--c0: {e}")))?;
            for (k, v) in c0 {
                let i = sys.apex().index_of(&k).ok_or_else(|| {
                    Failure::Domain(format!("{}: no species `{k}`", file.display()))
                })?;
                state[i] = parse_number(&v).ok_or_else(|| {
                    Failure::Usage(format!("--c0: `{v}` is not a number"))
                })?;
            }
            let flows = FlowSpec::parse(&inflow, &outflow).map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = SimOptions {
                project_nonnegative: nonnegative,
            };
            let traj = simulate_with(&sys, &state, &flows, t_end, dt, &opts).map_err(in_file(&file))?;
            emit(out, csv.as_deref(), &trajectory_csv(&traj))
        }
        Command::Blackbox {
            file,
            samples,
            seed,
            json,
            linear,
            ranges,
        } => {
            let sys = grey_box(&load(&file)?);
            let name = file.display().to_string();
            let text = if linear {
                let rel = linear_blackbox(&sys).map_err(in_file(&file))?;
                to_json(&RelationDocument::new(&name, &sys, &rel))
            } else {
                let mut opts = SampleOptions::new(samples, seed);
                for spec in &ranges {
                    let (species, lo, hi) = parse_range(spec)?;
                    opts = opts.with_range(&species, lo, hi);
                }
                let tuples = sample_blackbox(&sys, &opts).map_err(in_file(&file))?;
                let doc = TupleDocument::new(&name, &sys, tuples.into_iter().map(|s| s.tuple).collect());
                to_json(&doc)
            };
            emit(out, json.as_deref(), &text)
        }
        Command::CheckLaws { seed, cases } => {
            let mut failed = 0;
            for report in run_law_suite(seed, cases) {
                let status = if report.passed() { "ok" } else { "FAILED" };
                writeln!(out, "{status:>6}  {} ({} cases)", report.name, report.cases)
                    .map_err(|e| Failure::Domain(e.to_string()))?;
                for f in report.failures.iter().take(5) {
                    let _ = writeln!(out, "        {f}");
                }
                failed += usize::from(!report.passed());
            }
            if failed > 0 {
                Err(Failure::Domain(format!("{failed} law(s) failed")))
            } else {
                Ok(())
            }
        }
    }
}

fn parse_number(text: &str) -> Option<f64> {
    parse_rational(text).map(|r| to_f64(&r))
}

fn parse_range(spec: &str) -> Result<(String, f64, f64), Failure> {
    let bad = || Failure::Usage(format!("--box: expected `species=lo:hi`, got `{spec}`"));
    let (species, range) = spec.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
    let lo = parse_number(lo).ok_or_else(bad)?;
    let hi = parse_number(hi).ok_or_else(bad)?;
    if lo > hi {
        return Err(bad());
    }
    Ok((species.trim().to_string(), lo, hi))
}
