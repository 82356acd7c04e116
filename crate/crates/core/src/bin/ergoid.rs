//! Command-line driver: `simulate`, `identify`, `certify`, `phase-diagram`.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical or experiment
//! failure. `ERGOID_LOG={error|warn|info|debug}` controls diagnostics.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ergoid::dynamics::{estimate_density, simulate, DensityEstimate, ObservationSet};
use ergoid::error::Error;
use ergoid::experiments::{run_identification, run_phase_diagram, ExperimentConfig};
use ergoid::lasso::{solve_lasso, LassoConfig};
use ergoid::sensing::{covariance_from_density, DensitySpec, MeasurementSystem};
use ergoid::spectra::{certify, CertifyParams};
use ergoid::trigpoly::{random_sparse_map, FrequencySet, TrigPoly};

#[derive(Parser)]
#[command(
    name = "ergoid",
    version,
    about = "Sparse circle-map identification from a single trajectory"
)]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config value.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = auto); overrides the config value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for tabular data.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Iterate a map and write the trajectory and density estimate.
    Simulate(SimulateArgs),
    /// Recover a map end-to-end (or from an observation file) and write the
    /// solution plus metrics.
    Identify(IdentifyArgs),
    /// Verify the recovery conditions for a density or map and write a
    /// certification report.
    Certify(CertifyArgs),
    /// Run the (M, s, sigma) grid and write per-trial and summary tables.
    PhaseDiagram,
}

#[derive(Args)]
struct SimulateArgs {
    /// Map file (JSON); absent means a generated map from the config.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Start state; derived from the seed when omitted.
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Args)]
struct IdentifyArgs {
    /// Observation CSV (`x,y`); absent means an end-to-end run from the
    /// config.
    #[arg(long)]
    observations: Option<PathBuf>,
    /// Frequency cutoff for observation-file mode.
    #[arg(long)]
    nmax: Option<u32>,
    /// Penalty for observation-file mode (otherwise the lambda rule with
    /// --sigma, or the noiseless default).
    #[arg(long)]
    lambda: Option<f64>,
    /// Noise level for the lambda rule in observation-file mode.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args)]
struct CertifyArgs {
    /// Closed-form density: currently `uniform`.
    #[arg(long)]
    density: Option<String>,
    /// Histogram density CSV (`bin_left,bin_right,density`).
    #[arg(long)]
    density_csv: Option<PathBuf>,
    /// Map file (JSON): simulate, estimate the density, then certify.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Frequency cutoff of the covariance matrix.
    #[arg(long)]
    nmax: Option<u32>,
    /// Density floor; measured or exact when omitted.
    #[arg(long)]
    xi_h: Option<f64>,
    /// Tabulate sparse eigenvalues for s = 1..=s_max.
    #[arg(long, default_value_t = 3)]
    s_max: usize,
    #[arg(long, default_value_t = 3)]
    s0: usize,
    #[arg(long, default_value_t = 3.0)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 200)]
    mc_samples: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("ERGOID_LOG", "warn"),
    )
    .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are successes, everything else is usage
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parameter(_) | Error::Config(_) | Error::Format(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            ExperimentConfig::from_toml_str(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.display().to_string();
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    cfg.validate()?;
    if cfg.threads > 0 {
        // ignore the error when a pool already exists (tests, repeat calls)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf, Error> {
    let dir = PathBuf::from(&cfg.output_dir);
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes)?;
    log::info!("wrote {}", path.display());
    println!("{}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = load_config(&cli)?;
    match &cli.command {
        Command::Simulate(args) => run_simulate(&cli, &cfg, args),
        Command::Identify(args) => run_identify(&cli, &cfg, args),
        Command::Certify(args) => run_certify(&cfg, args),
        Command::PhaseDiagram => run_phase(&cli, &cfg),
    }
}

fn load_map(path: &Path) -> Result<TrigPoly, Error> {
    let text = fs::read_to_string(path)?;
    TrigPoly::from_json_str(&text, true)
}

fn run_simulate(cli: &Cli, cfg: &ExperimentConfig, args: &SimulateArgs) -> Result<(), Error> {
    use rand::{Rng, SeedableRng};

    let map = match &args.map {
        Some(path) => load_map(path)?,
        None => {
            let s = cfg.sparsities[0];
            random_sparse_map(
                s,
                cfg.frequency_set()?,
                cfg.dc_value,
                cfg.amplitude_budget,
                ergoid::experiments::hash64(cfg.master_seed, 1, 0),
            )?
        }
    };
    if !map.validate_circle_map(cfg.validation_grid).is_valid() {
        return Err(Error::Parameter(
            "map does not stay inside (0,1); refusing to simulate".into(),
        ));
    }
    let x0 = match args.x0 {
        Some(x0) => x0,
        None => rand_chacha::ChaCha8Rng::seed_from_u64(ergoid::experiments::hash64(
            cfg.master_seed,
            2,
            0,
        ))
        .random(),
    };
    let burn_in = args.burn_in.unwrap_or(cfg.burn_in);
    let length = args.length.unwrap_or(cfg.orbit_length);
    let bins = args.bins.unwrap_or(cfg.density_bins);

    let traj = simulate(&map, x0, burn_in, length)?;
    let density = estimate_density(&traj, bins)?;

    let dir = out_dir(cfg)?;
    match cli.format {
        Format::Csv => {
            let mut buf = Vec::new();
            traj.write_csv(&mut buf)?;
            write_file(&dir.join("trajectory.csv"), &buf)?;
            let mut buf = Vec::new();
            density.write_csv(&mut buf)?;
            write_file(&dir.join("density.csv"), &buf)?;
        }
        Format::Json => {
            let states = serde_json::to_string_pretty(traj.states())?;
            write_file(&dir.join("trajectory.json"), states.as_bytes())?;
            let densities = serde_json::to_string_pretty(&density.densities())?;
            write_file(&dir.join("density.json"), densities.as_bytes())?;
        }
    }
    write_file(&dir.join("map.json"), map.to_json_string().as_bytes())?;
    Ok(())
}

fn run_identify(cli: &Cli, cfg: &ExperimentConfig, args: &IdentifyArgs) -> Result<(), Error> {
    let dir = out_dir(cfg)?;
    match &args.observations {
        Some(path) => {
            let nmax = args.nmax.ok_or_else(|| {
                Error::Parameter("--nmax is required with --observations".into())
            })?;
            let sigma = args.sigma.unwrap_or(0.0);
            let text = fs::read_to_string(path)?;
            let obs = ObservationSet::read_csv(text.as_bytes(), sigma)?;
            let freqs = FrequencySet::new(nmax)?;
            let sys = MeasurementSystem::build(&obs, freqs)?;
            let lambda = match args.lambda {
                Some(l) => l,
                None if sigma > 0.0 => ergoid::lasso::lambda_rule_with_constant(
                    cfg.lambda_constant,
                    sigma,
                    sys.n(),
                    sys.m(),
                ),
                None => cfg.noiseless_lambda,
            };
            let solver_cfg = LassoConfig {
                lambda,
                max_iterations: cfg.max_sweeps,
                tolerance: cfg.tolerance,
                symmetrize_output: true,
                record_objectives: false,
                warm_start: None,
            };
            let solution = solve_lasso(&sys, &solver_cfg)?;
            write_file(
                &dir.join("solution.json"),
                solution.to_json_string(freqs).as_bytes(),
            )?;
        }
        None => {
            let pick = |name: &str, len: usize| -> Result<(), Error> {
                if len == 1 {
                    Ok(())
                } else {
                    Err(Error::Config(format!(
                        "identify needs exactly one {name} in the config (found {len}); use phase-diagram for grids"
                    )))
                }
            };
            pick("sparsity", cfg.sparsities.len())?;
            pick("sample count", cfg.sample_counts.len())?;
            pick("noise sigma", cfg.noise_sigmas.len())?;
            let result = run_identification(
                cfg,
                cfg.sparsities[0],
                cfg.sample_counts[0],
                cfg.noise_sigmas[0],
                ergoid::experiments::hash64(cfg.master_seed, 0, 0),
            )?;
            write_file(
                &dir.join("solution.json"),
                result.solution_json_string().as_bytes(),
            )?;
            write_file(
                &dir.join("metrics.json"),
                result.metrics_json_string(cfg.record_wall_time).as_bytes(),
            )?;
        }
    }
    let _ = cli;
    Ok(())
}

fn run_certify(cfg: &ExperimentConfig, args: &CertifyArgs) -> Result<(), Error> {
    let nmax = args.nmax.unwrap_or(cfg.max_freq);
    let freqs = FrequencySet::new(nmax)?;

    let sources = [
        args.density.is_some(),
        args.density_csv.is_some(),
        args.map.is_some(),
    ];
    if sources.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::Parameter(
            "certify needs exactly one of --density, --density-csv, --map".into(),
        ));
    }

    let (covariance, measured_floor) = if let Some(name) = &args.density {
        match name.as_str() {
            "uniform" => (
                covariance_from_density(&DensitySpec::Uniform, freqs)?,
                1.0,
            ),
            other => {
                return Err(Error::Parameter(format!(
                    "unknown closed-form density {other:?} (expected: uniform)"
                )))
            }
        }
    } else if let Some(path) = &args.density_csv {
        let text = fs::read_to_string(path)?;
        let est = DensityEstimate::read_csv(text.as_bytes())?;
        let floor = est.lower_bound();
        (
            covariance_from_density(&DensitySpec::Histogram(&est), freqs)?,
            floor,
        )
    } else {
        let map = load_map(args.map.as_ref().expect("checked above"))?;
        if !map.validate_circle_map(cfg.validation_grid).is_valid() {
            return Err(Error::Parameter("map does not stay inside (0,1)".into()));
        }
        let traj = simulate(&map, 0.5, cfg.burn_in, cfg.orbit_length)?;
        let est = estimate_density(&traj, cfg.density_bins)?;
        let floor = est.lower_bound();
        (
            covariance_from_density(&DensitySpec::Histogram(&est), freqs)?,
            floor,
        )
    };

    let xi_h = args.xi_h.unwrap_or(measured_floor);
    let params = CertifyParams {
        sparsity: cfg.sparsities[0],
        s_max: args.s_max,
        s0: args.s0,
        p: args.p,
        c2: cfg.c2,
        delta: args.delta,
        mc_samples: args.mc_samples,
        seed: cfg.master_seed,
        budget: ergoid::lasso::DEFAULT_ENUMERATION_BUDGET,
    };
    let report = certify(&covariance, xi_h, &params)?;
    let dir = out_dir(cfg)?;
    write_file(
        &dir.join("certification.json"),
        report.to_json_string().as_bytes(),
    )?;
    Ok(())
}

fn run_phase(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), Error> {
    let diagram = run_phase_diagram(cfg)?;
    let dir = out_dir(cfg)?;
    match cli.format {
        Format::Csv => {
            let mut buf = Vec::new();
            diagram.write_trials_csv(&mut buf)?;
            write_file(&dir.join("phase_diagram.csv"), &buf)?;
        }
        Format::Json => {
            write_file(
                &dir.join("phase_diagram.json"),
                diagram.trials_json_string().as_bytes(),
            )?;
        }
    }
    let mut buf = Vec::new();
    diagram.write_summary_csv(&mut buf)?;
    write_file(&dir.join("phase_summary.csv"), &buf)?;
    if !diagram.failures.is_empty() {
        let mut buf = Vec::new();
        diagram.write_failures_csv(&mut buf)?;
        write_file(&dir.join("phase_failures.csv"), &buf)?;
    }
    Ok(())
}
