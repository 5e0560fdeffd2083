//! Command-line front end: clustering, measure sweeps, series generation and
//! benchmarking. Results go to standard output, diagnostics to standard
//! error. Exit codes: 0 success, 1 usage error, 2 data error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use evclust_core::{
    cluster_events, gen_uniform, measure_speedup, parse_events, sweep, write_bench_csv,
    write_result, write_series_plain, EventSeries, GeneratorSpec, InputFormat, MeasureError,
    SortPolicy,
};

#[derive(Parser)]
#[command(
    name = "evclust",
    version,
    about = "Cluster ordered event timestamps against an expected inter-event interval"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a timestamp file and print the result document as JSON.
    Cluster(ClusterArgs),
    /// Sweep the quality measures over a log-frequency grid, as CSV.
    Sweep(SweepArgs),
    /// Generate a synthetic series into a plain-lines file.
    Gen(GenArgs),
    /// Compare the linear pass against the density-based baseline, as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input path, or "-" for standard input.
    input: PathBuf,
    /// Input format: plain, csv:<column> or jsonl[:<field>].
    #[arg(long, default_value = "plain", value_parser = parse_format)]
    format: InputFormat,
    /// What to do with unsorted input.
    #[arg(long, value_enum, default_value_t = SortPolicyArg::Reject)]
    sort_policy: SortPolicyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SortPolicyArg {
    /// Fail on the first out-of-order timestamp.
    Reject,
    /// Sort ascending and warn on standard error.
    Sort,
}

impl From<SortPolicyArg> for SortPolicy {
    fn from(arg: SortPolicyArg) -> Self {
        match arg {
            SortPolicyArg::Reject => SortPolicy::RejectUnsorted,
            SortPolicyArg::Sort => SortPolicy::SortWithWarning,
        }
    }
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse()
}

#[derive(Args)]
#[command(group(ArgGroup::new("threshold").required(true).multiple(false)))]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Expected inter-event interval; gaps strictly larger split clusters.
    #[arg(long, group = "threshold", allow_hyphen_values = true)]
    delta_t: Option<f64>,
    /// Use the mean consecutive gap of the input as the threshold.
    #[arg(long, group = "threshold")]
    auto_mean_gap: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Lower end of the log-frequency grid.
    #[arg(long, allow_hyphen_values = true)]
    f_min: f64,
    /// Upper end of the log-frequency grid.
    #[arg(long, allow_hyphen_values = true)]
    f_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    steps: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).multiple(false)))]
struct GenArgs {
    /// Equally spaced events.
    #[arg(long, group = "kind")]
    periodic: bool,
    /// Uniform random events on [lo, hi), sorted.
    #[arg(long, group = "kind")]
    uniform: bool,
    /// A random burst on [0, 1) followed by equidistant events on [1, 10].
    #[arg(long, group = "kind")]
    burst_composite: bool,
    /// Number of events (periodic and uniform).
    #[arg(long)]
    n: Option<usize>,
    /// Spacing between events (periodic).
    #[arg(long)]
    period: Option<f64>,
    /// First event time (periodic).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    start: f64,
    /// Range lower bound, inclusive (uniform).
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    /// Range upper bound, exclusive (uniform).
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the plain-lines file.
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Ascending input sizes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Threshold, also the baseline's neighborhood radius; must be positive.
    #[arg(long, default_value_t = 1.0)]
    delta_t: f64,
    /// Timed runs per size after one discarded warm-up.
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Seed for the white-noise series.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn data(msg: impl std::fmt::Display) -> Self {
        CliError::Data(msg.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cluster(args) => run_cluster(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Gen(args) => run_gen(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn read_series(args: &InputArgs) -> Result<EventSeries, CliError> {
    let parsed = if args.input == Path::new("-") {
        parse_events(io::stdin().lock(), &args.format, args.sort_policy.into())
    } else {
        let file = File::open(&args.input)
            .map_err(|e| CliError::data(format_args!("{}: {e}", args.input.display())))?;
        parse_events(BufReader::new(file), &args.format, args.sort_policy.into())
    }
    .map_err(CliError::data)?;

    if let Some(warning) = parsed.sort_warning {
        eprintln!(
            "warning: input was not sorted (first inversion at line {}); sorted ascending",
            warning.first_inversion_line
        );
    }
    Ok(parsed.series)
}

fn run_cluster(args: ClusterArgs) -> Result<(), CliError> {
    let series = read_series(&args.input)?;
    let delta_t = match args.delta_t {
        Some(value) if value.is_nan() => return Err(CliError::usage("--delta-t must be a number")),
        Some(value) => value,
        None => series.mean_gap().map_err(CliError::data)?,
    };
    let result = cluster_events(&series, delta_t);
    let stdout = io::stdout().lock();
    write_result(&result, stdout).map_err(CliError::data)
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let series = read_series(&args.input)?;
    let swept = sweep(&series, args.f_min, args.f_max, args.steps).map_err(|e| match e {
        MeasureError::BadGrid(_) => CliError::usage(e.to_string()),
        _ => CliError::data(e),
    })?;

    let mut out = BufWriter::new(io::stdout().lock());
    let write = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "f,delta_t,c_o,c_n,c_s")?;
        for p in &swept.points {
            writeln!(
                out,
                "{},{},{},{},{}",
                p.f, p.delta_t, p.coverage, p.cluster_number, p.isolation
            )?;
        }
        Ok(())
    };
    write(&mut out).and_then(|()| out.flush()).map_err(CliError::data)
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let spec = if args.periodic {
        let n = args.n.ok_or_else(|| CliError::usage("--periodic requires --n"))?;
        let period = args
            .period
            .ok_or_else(|| CliError::usage("--periodic requires --period"))?;
        if !period.is_finite() || period <= 0.0 {
            return Err(CliError::usage("--period must be positive and finite"));
        }
        if !args.start.is_finite() {
            return Err(CliError::usage("--start must be finite"));
        }
        GeneratorSpec::Periodic { n, period, start: args.start }
    } else if args.uniform {
        let n = args.n.ok_or_else(|| CliError::usage("--uniform requires --n"))?;
        let lo = args.lo.ok_or_else(|| CliError::usage("--uniform requires --lo"))?;
        let hi = args.hi.ok_or_else(|| CliError::usage("--uniform requires --hi"))?;
        GeneratorSpec::UniformRandom { n, lo, hi, seed: args.seed }
    } else {
        GeneratorSpec::BurstComposite { seed: args.seed }
    };

    let series = spec.generate().map_err(|e| CliError::usage(e.to_string()))?;
    let file = File::create(&args.output)
        .map_err(|e| CliError::data(format_args!("{}: {e}", args.output.display())))?;
    let mut out = BufWriter::new(file);
    write_series_plain(&series, &mut out).map_err(CliError::data)?;
    out.flush().map_err(CliError::data)
}

fn run_bench(args: BenchArgs) -> Result<(), CliError> {
    if args.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage("--sizes must be strictly ascending"));
    }
    if args.repeats < 3 {
        return Err(CliError::usage("--repeats must be at least 3"));
    }
    if args.delta_t.is_nan() || args.delta_t <= 0.0 {
        return Err(CliError::usage("--delta-t must be positive"));
    }

    let seed = args.seed;
    // White-noise convention: uniform on [0, n), so the mean gap is about
    // one at every size.
    let records = measure_speedup(&args.sizes, args.delta_t, args.repeats, |n| {
        gen_uniform(n, 0.0, n as f64, seed).expect("valid range")
    });
    write_bench_csv(&records, io::stdout().lock()).map_err(CliError::data)
}
