//! `nlsl2`: analyze characteristic functions, solve for highest weights,
//! build and verify representation matrices, map onto sl_q(2), and export
//! cobweb/sweep data.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or schema error,
//! 3 solver failure, 4 I/O error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nlsl2_core::repbuilder::BuildMode;
use nlsl2_core::CharFunc;

use commands::LadderSource;
use config::RunConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: String) -> Self {
        CliError { code, message }
    }
}

impl From<nlsl2_core::Error> for CliError {
    fn from(err: nlsl2_core::Error) -> Self {
        CliError::new(EXIT_SOLVER, err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::new(EXIT_IO, err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "nlsl2",
    version,
    about = "Finite-dimensional representations of nonlinearly deformed sl(2) algebras",
    after_help = "CSV columns: cobweb emits `x0,step,x,y,kind` (kind V or H; each row is a \
segment endpoint, the polyline starts at (x0, x0)); sweep emits \
`t,r,s,d,alpha_j,unitary` with one row per cut solution. The NLSL2_TOL \
environment variable overrides the verification tolerance."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags that choose the characteristic function.
#[derive(Args)]
struct FuncArgs {
    /// Linear f(x) = r*x - s, as key=value pairs: --linear r=2 s=1
    #[arg(long, num_args = 1..=2, value_name = "KEY=VALUE")]
    linear: Option<Vec<String>>,

    /// Quadratic f(x) = t*x^2 + r*x - s: --quadratic t=1 r=1 s=1.1
    #[arg(long, num_args = 1..=3, value_name = "KEY=VALUE")]
    quadratic: Option<Vec<String>>,

    /// Ascending coefficients c0,c1,...: f(x) = c0 + c1 x + ...
    #[arg(long, value_name = "C0,C1,...")]
    polynomial: Option<String>,

    /// Function as inline JSON, or @path to a JSON file
    #[arg(long, value_name = "JSON|@PATH")]
    function: Option<String>,

    /// JSON config file; explicit flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl FuncArgs {
    fn load_config(&self) -> Result<RunConfig, CliError> {
        RunConfig::load(self.config.as_ref())
    }

    fn resolve(&self, config: &RunConfig) -> Result<CharFunc, CliError> {
        config::resolve_function(
            self.linear.as_ref(),
            self.quadratic.as_ref(),
            self.polynomial.as_ref(),
            self.function.as_ref(),
            config,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant regime, fixed points, and the allowed weight region
    Analyze {
        #[command(flatten)]
        func: FuncArgs,
        /// Write to a file instead of stdout
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Cycles of exact period d, with stability multipliers
    Cycles {
        #[command(flatten)]
        func: FuncArgs,
        /// Cycle period
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Highest weights solving the cut condition a + f^d(a) + 1 = 0
    Cut {
        #[command(flatten)]
        func: FuncArgs,
        /// Representation dimension
        #[arg(long)]
        d: Option<usize>,
        /// Search interval lo,hi (default: allowed region or (-0.5, 1e3))
        #[arg(long, value_name = "LO,HI")]
        interval: Option<String>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Build the d-by-d matrices J0, J+, J-, C for one highest weight
    Build {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long)]
        d: Option<usize>,
        /// Explicit highest weight (termination is detected)
        #[arg(long, value_name = "VALUE")]
        alpha_j: Option<f64>,
        /// Use the i-th cut solution on the search interval
        #[arg(long, value_name = "INDEX", conflicts_with = "alpha_j")]
        cut_index: Option<usize>,
        /// Use the i-th cycle of period d
        #[arg(
            long,
            value_name = "INDEX",
            conflicts_with_all = ["alpha_j", "cut_index"]
        )]
        cycle_index: Option<usize>,
        /// unitary: N_m = sqrt(nsq), J- = J+^T; algebraic: J- carries nsq
        #[arg(long, value_enum, default_value = "unitary")]
        mode: Mode,
        #[arg(long, value_name = "LO,HI")]
        interval: Option<String>,
        /// Aligned plain-text matrices instead of the JSON document
        #[arg(long)]
        pretty: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Re-check every algebraic relation on a build document
    Verify {
        /// Build document (default: stdin)
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        /// Pass threshold for dimension-normalized residuals
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Map sl_q(2) generators onto the linear family and report residuals
    Qmap {
        /// Deformation parameter q > 0, q != 1 (r = q^2)
        #[arg(long)]
        q: Option<f64>,
        /// Half-integer j ("3/2", "1.5", "2"); dimension is 2j + 1
        #[arg(long)]
        j: Option<String>,
        /// Offset s of the linear function
        #[arg(long)]
        s: Option<f64>,
        /// Highest weight (default: the cut solution for r = q^2)
        #[arg(long, value_name = "VALUE")]
        alpha_j: Option<f64>,
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Cobweb iteration trace as CSV (x0,step,x,y,kind)
    Cobweb {
        #[command(flatten)]
        func: FuncArgs,
        /// Starting point
        #[arg(long)]
        x0: Option<f64>,
        /// Number of iteration steps (2 segments each)
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Cut-solution sweep over a (t, r, s) grid as CSV
    Sweep {
        /// t axis: VALUE or START:STOP:STEP (t = 0 means linear)
        #[arg(long, value_name = "RANGE")]
        t: Option<String>,
        /// r axis
        #[arg(long, value_name = "RANGE")]
        r: Option<String>,
        /// s axis
        #[arg(long, value_name = "RANGE")]
        s: Option<String>,
        /// Representation dimension
        #[arg(long)]
        d: Option<usize>,
        /// Worker threads (default: sequential)
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Unitary,
    Algebraic,
}

impl From<Mode> for BuildMode {
    fn from(mode: Mode) -> BuildMode {
        match mode {
            Mode::Unitary => BuildMode::Unitary,
            Mode::Algebraic => BuildMode::Algebraic,
        }
    }
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::new(EXIT_SCHEMA, format!("missing --{name} (flag or config)")))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Analyze { func, output } => {
            let config = func.load_config()?;
            let f = func.resolve(&config)?;
            let output = output.or(config.output);
            commands::analyze(&f, output.as_ref())
        }
        Command::Cycles { func, d, output } => {
            let config = func.load_config()?;
            let f = func.resolve(&config)?;
            let d = required(d.or(config.d), "d")?;
            let output = output.or(config.output);
            commands::cycles(&f, d, output.as_ref())
        }
        Command::Cut {
            func,
            d,
            interval,
            output,
        } => {
            let config = func.load_config()?;
            let f = func.resolve(&config)?;
            let d = required(d.or(config.d), "d")?;
            let interval = match interval {
                Some(text) => Some(config::parse_interval(&text)?),
                None => config.interval.map(|[lo, hi]| (lo, hi)),
            };
            let output = output.or(config.output);
            commands::cut(&f, d, interval, output.as_ref())
        }
        Command::Build {
            func,
            d,
            alpha_j,
            cut_index,
            cycle_index,
            mode,
            interval,
            pretty,
            output,
        } => {
            let config = func.load_config()?;
            let f = func.resolve(&config)?;
            let d = required(d.or(config.d), "d")?;
            let source = if let Some(alpha) = alpha_j.or(config.alpha_j) {
                LadderSource::AlphaJ(alpha)
            } else if let Some(index) = cut_index {
                LadderSource::CutIndex(index)
            } else if let Some(index) = cycle_index {
                LadderSource::CycleIndex(index)
            } else {
                return Err(CliError::new(
                    EXIT_SCHEMA,
                    "give one of --alpha-j, --cut-index, --cycle-index".into(),
                ));
            };
            let mode = match config.mode.as_deref() {
                Some("algebraic") if alpha_j.is_none() => BuildMode::Algebraic,
                _ => mode.into(),
            };
            let interval = match interval {
                Some(text) => Some(config::parse_interval(&text)?),
                None => config.interval.map(|[lo, hi]| (lo, hi)),
            };
            let output = output.or(config.output);
            commands::build(&f, d, source, mode, interval, pretty, output.as_ref())
        }
        Command::Verify {
            input,
            tol,
            config,
            output,
        } => {
            let config = RunConfig::load(config.as_ref())?;
            let tolerance = config::resolve_tolerance(tol, &config)?;
            let output = output.or(config.output);
            commands::verify(input.as_ref(), tolerance, output.as_ref())
        }
        Command::Qmap {
            q,
            j,
            s,
            alpha_j,
            config,
            output,
        } => {
            let config = RunConfig::load(config.as_ref())?;
            let q = required(q.or(config.q), "q")?;
            let j = required(j.or(config.j.clone()), "j")?;
            let s = required(s.or(config.s), "s")?;
            let alpha_j = alpha_j.or(config.alpha_j);
            let output = output.or(config.output);
            commands::qmap_cmd(q, &j, s, alpha_j, output.as_ref())
        }
        Command::Cobweb {
            func,
            x0,
            steps,
            output,
        } => {
            let config = func.load_config()?;
            let f = func.resolve(&config)?;
            let x0 = required(x0.or(config.x0), "x0")?;
            let steps = required(steps.or(config.steps), "steps")?;
            let output = output.or(config.output);
            commands::cobweb(&f, x0, steps, output.as_ref())
        }
        Command::Sweep {
            t,
            r,
            s,
            d,
            jobs,
            config,
            output,
        } => {
            let config = RunConfig::load(config.as_ref())?;
            let t_axis = config::parse_range(
                &required(t.or(config.t.clone()), "t")?,
                "t",
            )?;
            let r_axis = config::parse_range(
                &required(r.or(config.r.clone()), "r")?,
                "r",
            )?;
            let s_axis = config::parse_range(
                &required(s.or(config.sweep_s.clone()), "s")?,
                "s",
            )?;
            let d = required(d.or(config.d), "d")?;
            let jobs = jobs.or(config.jobs);
            let output = output.clone().or(config.output.clone());
            commands::sweep(&t_axis, &r_axis, &s_axis, d, jobs, &config, output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
