use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tailgof::conditions::{classify_alternative, grid_table, GridOptions, MonotoneGrid, DEFAULT_TOL};
use tailgof::data::parse_sample;
use tailgof::simulation::{
    default_n_grid, eta_q_experiment, simulate_null, simulate_power, validate_k_schedule,
    EtaExperiment, EtaReport, KRule, SimulationConfig, SimulationResult,
};
use tailgof::{tail_test, Distribution, EndpointTransform, Sided};

mod failure;
mod output;

use failure::{CliError, CliResult};
use output::{Format, Output};

/// Tail goodness-of-fit testing, tail-ordering checks and Monte Carlo studies.
#[derive(Debug, Parser)]
#[command(name = "tailgof", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether the upper tail of a sample follows F0.
    Test(TestArgs),
    /// Check the tail-ordering conditions between F0 and an alternative F1.
    Check(CheckArgs),
    /// Monte Carlo replications under the null hypothesis.
    SimulateNull(SimArgs),
    /// Monte Carlo replications under an alternative F1.
    Power(SimArgs),
    /// Run a simulation described entirely by a JSON config.
    Simulate(SimulateArgs),
    /// Compare the law of the log-survival gap eta_q with Exp(1).
    Eta(EtaArgs),
    /// Check a k(n) schedule against the growth conditions on a grid of n.
    ValidateK(ValidateKArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[arg(long)]
    f0: Distribution,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    level: f64,
    #[arg(long, default_value_t = Sided::Two)]
    sided: Sided,
    /// Data file, one value per line; `-` reads stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Finite right endpoint x*: test y = 1/(x* - x) against F0 instead.
    #[arg(long)]
    endpoint: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    f0: Distribution,
    #[arg(long)]
    f1: Distribution,
    /// Start of the tail region (default: 0.9 quantile of F0).
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long, default_value_t = 512)]
    grid_points: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the per-point check quantities as CSV.
    #[arg(long)]
    grid_dump: Option<PathBuf>,
    /// Slack used for the grid dump (default: the tolerance).
    #[arg(long)]
    epsilon: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seed {
    Fixed(u64),
    Auto,
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    if s == "auto" {
        return Ok(Seed::Auto);
    }
    s.parse().map(Seed::Fixed).map_err(|_| format!("expected an integer or `auto`, got `{s}`"))
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(s) => s,
            Seed::Auto => {
                let seed = rand::random::<u64>();
                eprintln!("seed: {seed}");
                seed
            }
        }
    }
}

#[derive(Debug, Args)]
struct SimArgs {
    /// JSON config; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    f0: Option<Distribution>,
    #[arg(long)]
    f1: Option<Distribution>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "k_rule")]
    k: Option<usize>,
    /// Schedule such as `n^0.6`, `2*n^0.5` or `ln(n)^2`.
    #[arg(long, alias = "rule")]
    k_rule: Option<KRule>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    sided: Option<Sided>,
    #[arg(long)]
    reps: Option<usize>,
    /// Master seed, or `auto` to draw one (printed to stderr).
    #[arg(long, value_parser = parse_seed)]
    seed: Option<Seed>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Also write per-replication records as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    records: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct EtaArgs {
    /// Law whose log-survival measures the gap.
    #[arg(long, alias = "f0")]
    f: Distribution,
    /// Law the exceedance is drawn from.
    #[arg(long, alias = "f1")]
    g: Distribution,
    #[arg(long)]
    q: f64,
    #[arg(long, default_value_t = 100_000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateKArgs {
    #[arg(long, alias = "k-rule")]
    rule: KRule,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Comma-separated sample sizes (default: 1e3,1e4,...,1e7).
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Smallest n at which the growth trend must hold.
    #[arg(long)]
    growth_from: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

fn read_input(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| CliError::io("stdin", e))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::io(path, e))
    }
}

fn run_test(args: TestArgs) -> CliResult<()> {
    let text = read_input(&args.input)?;
    let mut sample = parse_sample(&text).map_err(CliError::data)?;
    if let Some(x_star) = args.endpoint {
        let t = EndpointTransform::new(x_star).map_err(CliError::usage)?;
        sample = t.apply_all(&sample).map_err(CliError::data)?;
    }
    let report = tail_test(sample, &args.f0, args.k, args.level, args.sided).map_err(CliError::data)?;
    Output::from(&args.output).write_record(&report)
}

#[derive(Serialize)]
struct CheckOutput {
    f0: Distribution,
    f1: Distribution,
    #[serde(flatten)]
    report: tailgof::conditions::ConditionReport,
}

fn run_check(args: CheckArgs) -> CliResult<()> {
    if !(args.tol > 0.0 && args.tol < 0.5) {
        return Err(CliError::Usage(format!("tolerance must lie in (0, 0.5), got {}", args.tol)));
    }
    let opts = GridOptions { x0: args.x0, points: args.grid_points, ..GridOptions::default() };
    let grid = MonotoneGrid::new(&args.f0, opts).map_err(CliError::usage)?;
    let report = classify_alternative(&args.f0, &args.f1, &grid, args.tol);
    if let Some(path) = &args.grid_dump {
        let rows = grid_table(&args.f0, &args.f1, &grid, args.epsilon.unwrap_or(args.tol));
        output::write_file(path, &output::csv_rows(&rows)?)?;
    }
    Output::from(&args.output).write_record(&CheckOutput { f0: args.f0, f1: args.f1, report })
}

fn load_config(path: &PathBuf) -> CliResult<serde_json::Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

fn set_field(fields: &mut serde_json::Map<String, serde_json::Value>, key: &str, v: serde_json::Value) {
    match key {
        "k_rule" => fields.remove("k"),
        "master_seed" => fields.remove("seed"),
        _ => None,
    };
    fields.insert(key.to_string(), v);
}

fn build_config(args: &SimArgs) -> CliResult<SimulationConfig> {
    let mut value = match &args.config {
        Some(path) => load_config(path)?,
        None => serde_json::json!({}),
    };
    let Some(fields) = value.as_object_mut() else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    // Flags override config entries; the merged object is validated by serde.
    let mut set = |key: &str, v: serde_json::Value| set_field(fields, key, v);
    let json = |v: String| serde_json::Value::String(v);
    if let Some(d) = args.f0 {
        set("f0", json(d.to_string()));
    }
    if let Some(d) = args.f1 {
        set("f1", json(d.to_string()));
    }
    if let Some(n) = args.n {
        set("n", n.into());
    }
    if let Some(k) = args.k {
        set("k_rule", k.into());
    }
    if let Some(rule) = args.k_rule {
        set("k_rule", json(rule.to_string()));
    }
    if let Some(level) = args.level {
        set("level", level.into());
    }
    if let Some(sided) = args.sided {
        set("sided", json(sided.to_string()));
    }
    if let Some(reps) = args.reps {
        set("reps", reps.into());
    }
    if let Some(seed) = args.seed {
        set("master_seed", seed.resolve().into());
    }
    if !fields.contains_key("master_seed") && !fields.contains_key("seed") {
        return Err(CliError::Usage("--seed is required (an integer, or `auto`)".into()));
    }
    for (key, flag) in [("f0", "--f0"), ("n", "--n"), ("reps", "--reps")] {
        if !fields.contains_key(key) {
            return Err(CliError::Usage(format!("{flag} is required")));
        }
    }
    if !fields.contains_key("k_rule") && !fields.contains_key("k") {
        return Err(CliError::Usage("--k or --k-rule is required".into()));
    }
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("invalid simulation config: {e}")))
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be >= 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn emit_simulation(res: SimulationResult, records: Option<&PathBuf>, out: &OutputArgs) -> CliResult<()> {
    if let Some(path) = records {
        output::write_file(path, &res.records_csv())?;
    }
    let out = Output::from(out);
    match out.format {
        Format::Json => out.write_json(&res),
        Format::Csv => out.write_text(&res.records_csv()),
    }
}

fn run_simulation(args: SimArgs, power: bool) -> CliResult<()> {
    let mut cfg = build_config(&args)?;
    if !power && cfg.f1 == Some(cfg.f0) {
        cfg.f1 = None;
    }
    let res = with_workers(args.workers, || if power { simulate_power(&cfg) } else { simulate_null(&cfg) })?
        .map_err(CliError::usage)?;
    emit_simulation(res, args.records.as_ref(), &args.output)
}

fn run_simulate(args: SimulateArgs) -> CliResult<()> {
    let value = load_config(&args.config)?;
    let cfg: SimulationConfig = serde_json::from_value(value)
        .map_err(|e| CliError::Usage(format!("invalid simulation config: {e}")))?;
    let power = cfg.f1.is_some_and(|f1| f1 != cfg.f0);
    let res = with_workers(args.workers, || if power { simulate_power(&cfg) } else { simulate_null(&cfg) })?
        .map_err(CliError::usage)?;
    emit_simulation(res, args.records.as_ref(), &args.output)
}

#[derive(Serialize)]
struct EtaOutput {
    f: Distribution,
    g: Distribution,
    q: f64,
    seed: u64,
    #[serde(flatten)]
    report: EtaReport,
}

fn run_eta(args: EtaArgs) -> CliResult<()> {
    let exp = EtaExperiment { f: &args.f, g: &args.g, q: args.q, reps: args.reps, seed: args.seed };
    let report = eta_q_experiment(&exp).map_err(CliError::usage)?;
    Output::from(&args.output).write_record(&EtaOutput { f: args.f, g: args.g, q: args.q, seed: args.seed, report })
}

fn run_validate_k(args: ValidateKArgs) -> CliResult<()> {
    let grid = args.n_grid.unwrap_or_else(default_n_grid);
    let report = validate_k_schedule(args.rule, args.alpha, &grid, args.growth_from).map_err(CliError::usage)?;
    let out = Output::from(&args.output);
    match out.format {
        Format::Json => out.write_json(&report),
        Format::Csv => out.write_text(&output::csv_rows(&report.rows)?),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Test(a) => run_test(a),
        Command::Check(a) => run_check(a),
        Command::SimulateNull(a) => run_simulation(a, false),
        Command::Power(a) => run_simulation(a, true),
        Command::Simulate(a) => run_simulate(a),
        Command::Eta(a) => run_eta(a),
        Command::ValidateK(a) => run_validate_k(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return failure::clap_exit(e),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
