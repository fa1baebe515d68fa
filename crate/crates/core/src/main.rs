use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use diamond_bounds::bounds::BoundEvaluator;
use diamond_bounds::closed_forms::{f_a, f_b, f_c, interval_a_x};
use diamond_bounds::config::ConfigValues;
use diamond_bounds::mimo_bc::sum_capacity;
use diamond_bounds::oracle::{grid_max_min, grid_sum_capacity, n3_identity_residual};
use diamond_bounds::sweep::{emit_plot_script, format_report, run_sweep, write_csv, SweepRow, SweepSpec};
use diamond_bounds::{ChannelConfig, Error, Interval, OptimizerOptions, Rho, XSelector};

/// Sum-capacity upper bounds for the two-user Gaussian multiple-access diamond
/// channel. Rates are in bits per channel use.
#[derive(Parser, Debug)]
#[command(name = "diamond-bounds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every bound at one channel and backhaul configuration.
    Eval(EvalArgs),
    /// Sweep C1 = C2 = C over a range and write the bounds as CSV.
    Sweep(SweepArgs),
    /// Write a gnuplot script that draws a sweep CSV.
    Plot(PlotArgs),
    /// Brute-force reference evaluations.
    #[command(hide = true, subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug, Clone, Default)]
struct ChannelArgs {
    /// Cross gain from transmitter 2 to receiver 1.
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Cross gain from transmitter 1 to receiver 2.
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// `key = value` file supplying any of the numeric flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Accuracy target for the broadcast sum capacity, in bits.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Also print the result as a CSV header and row; the `C` column holds C1.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long)]
    c_min: Option<f64>,
    #[arg(long)]
    c_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Exhaustive broadcast sum capacity at one correlation.
    SumCapacity {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 101)]
        n_theta: usize,
        #[arg(long, default_value_t = 51)]
        n_q: usize,
    },
    /// Plain grid scan of one bound's max-min problem.
    MaxMin {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 20001)]
        n: usize,
    },
    /// Residual of the correlation-penalty identity.
    N3 {
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Which {
    #[value(name = "102")]
    FourCut,
    #[value(name = "101a")]
    StrengthenedA,
    #[value(name = "101b")]
    StrengthenedB,
}

/// Errors the CLI maps to exit codes.
enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

type Term<'a> = &'a dyn Fn(Rho) -> f64;

struct Resolved {
    file: ConfigValues,
}

impl Resolved {
    fn new(path: Option<&PathBuf>) -> CliResult<Self> {
        let file = match path {
            Some(p) => ConfigValues::load(p)?,
            None => ConfigValues::default(),
        };
        Ok(Resolved { file })
    }

    fn required(&self, key: &str, flag: Option<f64>) -> CliResult<f64> {
        self.file.resolve(key, flag).ok_or_else(|| {
            Failure::Usage(format!(
                "missing value for --{} (flag or config file)",
                key.replace('_', "-")
            ))
        })
    }

    fn optional(&self, key: &str, flag: Option<f64>) -> Option<f64> {
        self.file.resolve(key, flag)
    }

    fn options(&self, flag: Option<f64>) -> CliResult<OptimizerOptions> {
        match self.optional("tol", flag) {
            Some(tol) => Ok(OptimizerOptions::with_tolerance(tol)?),
            None => Ok(OptimizerOptions::default()),
        }
    }

    fn channel(&self, args: &ChannelArgs, c1: f64, c2: f64) -> CliResult<ChannelConfig> {
        Ok(ChannelConfig::new(
            self.required("a", args.a)?,
            self.required("b", args.b)?,
            self.required("p1", args.p1)?,
            self.required("p2", args.p2)?,
            c1,
            c2,
        )?)
    }
}

fn eval(args: &EvalArgs) -> CliResult<()> {
    let r = Resolved::new(args.channel.config.as_ref())?;
    let c1 = r.required("c1", args.c1)?;
    let c2 = r.required("c2", args.c2)?;
    let cfg = r.channel(&args.channel, c1, c2)?;
    let opts = r.options(args.channel.tol)?;
    let evaluator = BoundEvaluator::new(&cfg, &opts)?;
    evaluator.prefill();
    let report = evaluator.report(c1, c2)?;
    let row = SweepRow::from_report(c1, &report);
    row.check_ordering()?;
    print!("{}", format_report(&cfg, &report));
    if args.csv {
        write_csv(&[row], io::stdout().lock())?;
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> CliResult<()> {
    let r = Resolved::new(args.channel.config.as_ref())?;
    let base = r.channel(&args.channel, 0.0, 0.0)?;
    let spec = SweepSpec::new(
        base,
        r.required("c_min", args.c_min)?,
        r.required("c_max", args.c_max)?,
        r.required("step", args.step)?,
    )?;
    let opts = r.options(args.channel.tol)?;
    let rows = run_sweep(&spec, &opts)?;
    let file = File::create(&args.out).map_err(|e| Error::Io(format!("cannot write {}: {e}", args.out.display())))?;
    write_csv(&rows, BufWriter::new(file))?;
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn plot(args: &PlotArgs) -> CliResult<()> {
    emit_plot_script(&args.csv, &args.out)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn oracle(cmd: &OracleCommand) -> CliResult<()> {
    match cmd {
        OracleCommand::SumCapacity {
            channel,
            rho,
            n_theta,
            n_q,
        } => {
            let r = Resolved::new(channel.config.as_ref())?;
            let cfg = r.channel(channel, 0.0, 0.0)?;
            let rho = Rho::new(*rho)?;
            let grid = grid_sum_capacity(rho, &cfg, (*n_theta, *n_q))?;
            let optimized = sum_capacity(rho, &cfg, &r.options(channel.tol)?).bits;
            println!("grid_sum_capacity {grid:.10}");
            println!("sum_capacity      {optimized:.10}");
        }
        OracleCommand::MaxMin {
            channel,
            c1,
            c2,
            which,
            n,
        } => {
            let r = Resolved::new(channel.config.as_ref())?;
            let c1 = r.required("c1", *c1)?;
            let c2 = r.required("c2", *c2)?;
            let cfg = r.channel(channel, c1, c2)?;
            let opts = r.options(channel.tol)?;
            let fa = |rho: Rho| f_a(rho, &cfg);
            let fb = |rho: Rho| f_b(rho, &cfg);
            let fc0 = f_c(Rho::ZERO, &cfg);
            let fc = |_: Rho| fc0;
            let cm = |rho: Rho| sum_capacity(rho, &cfg, &opts).bits;
            let averaged = |rho: Rho| 0.5 * (f_c(rho, &cfg) + sum_capacity(rho, &cfg, &opts).bits);
            let (terms, domain, selector): (Vec<Term>, Interval, Option<XSelector>) = match which {
                Which::FourCut => (vec![&fa, &fb, &fc, &cm], Interval::FULL, None),
                Which::StrengthenedA => (
                    vec![&fa, &fb, &fc, &cm, &averaged],
                    interval_a_x(cfg.a, &cfg),
                    Some(XSelector::UseA),
                ),
                Which::StrengthenedB => (
                    vec![&fa, &fb, &fc, &cm, &averaged],
                    interval_a_x(cfg.b, &cfg),
                    Some(XSelector::UseB),
                ),
            };
            let (grid, at) = grid_max_min(&terms, domain, *n)?;
            let evaluator = BoundEvaluator::new(&cfg, &opts)?;
            let (optimized, opt_at) = match selector {
                None => evaluator.cutset_bound_102(c1, c2)?,
                Some(x) => evaluator.bound_101(x, c1, c2)?,
            };
            println!("domain            [{:.10}, {:.10}]", domain.lo(), domain.hi());
            println!("grid_max_min      {grid:.10} at rho = {:.10}", at.value());
            println!("maximize_min      {optimized:.10} at rho = {:.10}", opt_at.value());
        }
        OracleCommand::N3 { rho, b, p1, p2 } => {
            let cfg = ChannelConfig::new(0.0, *b, *p1, *p2, 0.0, 0.0)?;
            let residual = n3_identity_residual(Rho::new(*rho)?, &cfg)?;
            println!("n3_identity_residual {residual:.3e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args),
        Command::Plot(args) => plot(args),
        Command::Oracle(cmd) => oracle(cmd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e @ Error::InvariantViolation { .. })) => {
            eprintln!("internal error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
