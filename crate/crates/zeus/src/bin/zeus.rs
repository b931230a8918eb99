use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zeus::audit::{ackley_audit, audit_config};
use zeus::bench::{run_experiment, speedup_study};
use zeus::fit::{fit_config, fit_dataset, read_dataset, write_dataset, SpectrumDemo};
use zeus::output::{Format, RecordWriter};
use zeus::plan::ExperimentPlan;
use zeus::{zeus_run, Error};
use zeus_core::fitting::{FallingSpectrum, LinearModel};
use zeus_core::{Benchmark, BfgsStatus, ZeusConfig};

/// Multistart global optimizer: particle swarm seeding followed by
/// parallel BFGS with forward-mode gradients.
#[derive(Debug, Parser)]
#[command(name = "zeus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize one registered benchmark.
    Run(RunArgs),
    /// Execute an experiment plan and write one record per execution.
    Bench(BenchArgs),
    /// Fit a binned spectrum by minimizing chi-square.
    Fit(FitArgs),
    /// Report the gradient-norm failure modes on 2-D Ackley.
    AckleyAudit(AuditArgs),
    /// Measure wall-time speedup against a single worker.
    Speedup(SpeedupArgs),
}

/// Overrides for driver settings; unset flags keep the defaults.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// Number of particles (N).
    #[arg(long)]
    particles: Option<usize>,
    #[arg(long)]
    lower: Option<f64>,
    #[arg(long)]
    upper: Option<f64>,
    /// Swarm sweeps before local refinement.
    #[arg(long)]
    iter_pso: Option<usize>,
    /// Iteration cap per local run.
    #[arg(long)]
    iter_bfgs: Option<usize>,
    /// Line-search trial cap.
    #[arg(long)]
    iter_ls: Option<usize>,
    /// Gradient-norm convergence threshold.
    #[arg(long)]
    theta: Option<f64>,
    /// Converged runs required before stopping the rest.
    #[arg(long)]
    required_c: Option<usize>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    c1_pso: Option<f64>,
    #[arg(long)]
    c2_pso: Option<f64>,
    /// Sufficient-decrease constant of the line search.
    #[arg(long)]
    c1_armijo: Option<f64>,
    /// Worker threads; 0 runs sequentially.
    #[arg(long)]
    workers: Option<usize>,
    /// Run every start to completion (no early stop).
    #[arg(long)]
    deterministic: bool,
}

impl ConfigArgs {
    fn apply(&self, cfg: &mut ZeusConfig) {
        let set = |dst: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        let setf = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut cfg.particles, self.particles);
        setf(&mut cfg.lower, self.lower);
        setf(&mut cfg.upper, self.upper);
        set(&mut cfg.pso.iterations, self.iter_pso);
        set(&mut cfg.bfgs_iterations, self.iter_bfgs);
        set(&mut cfg.line_search.max_iter, self.iter_ls);
        setf(&mut cfg.theta, self.theta);
        set(&mut cfg.required_convergences, self.required_c);
        setf(&mut cfg.pso.w, self.w);
        setf(&mut cfg.pso.c1, self.c1_pso);
        setf(&mut cfg.pso.c2, self.c2_pso);
        setf(&mut cfg.line_search.c1, self.c1_armijo);
        set(&mut cfg.workers, self.workers);
        cfg.deterministic |= self.deterministic;
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Args)]
struct RunArgs {
    /// rosenbrock, rastrigin, ackley or goldstein-price.
    #[arg(long)]
    objective: String,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    config: ConfigArgs,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Experiment plan (TOML).
    plan: PathBuf,
    /// Base seed; repetition r uses seed + r.
    #[arg(long)]
    seed: u64,
    /// Output file.
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    Spectrum,
    Linear,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Demo {
    Noiseless,
    Poisson,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Dataset file with columns edge_low, edge_high, count[, sigma].
    #[arg(long, conflicts_with = "demo", required_unless_present = "demo")]
    data: Option<PathBuf>,
    /// Fit the built-in synthetic spectrum instead of a file.
    #[arg(long)]
    demo: Option<Demo>,
    #[arg(long, value_enum, default_value = "spectrum")]
    model: ModelKind,
    /// Spectrum normalization; defaults to the largest observed count.
    #[arg(long)]
    scale: Option<f64>,
    /// Spectrum mass scale; defaults to 1.1 times the last bin edge.
    #[arg(long)]
    mass_scale: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the fitted dataset used (useful with --demo).
    #[arg(long)]
    write_data: Option<PathBuf>,
    /// Report file; printed to stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SpeedupArgs {
    #[arg(long)]
    objective: String,
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker counts to measure.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
    worker_counts: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[command(flatten)]
    config: ConfigArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run(args) => run(args),
        Command::Bench(args) => bench(args),
        Command::Fit(args) => fit(args),
        Command::AckleyAudit(args) => audit(args),
        Command::Speedup(args) => speedup(args),
    }
}

fn benchmark_config(
    objective: &str,
    dim: usize,
    seed: u64,
    args: &ConfigArgs,
) -> Result<(Benchmark, ZeusConfig), Error> {
    let f = Benchmark::from_name(objective, dim)?;
    let mut cfg = ZeusConfig {
        seed,
        workers: default_workers(),
        ..ZeusConfig::for_benchmark(&f)
    };
    args.apply(&mut cfg);
    Ok((f, cfg))
}

fn run(args: RunArgs) -> Result<(), Error> {
    let (f, cfg) = benchmark_config(&args.objective, args.dim, args.seed, &args.config)?;
    let result = zeus_run(&f, &cfg)?;
    let best = &result.best;
    if args.json {
        let value = serde_json::json!({
            "objective": f.name(),
            "dim": cfg.dim,
            "best_x": best.x_final,
            "best_f": best.f_final,
            "best_status": best.status.as_str(),
            "grad_norm": best.grad_norm,
            "iterations": best.iterations,
            "launched": result.per_run.len(),
            "converged": result.count(BfgsStatus::Converged),
            "diverged": result.count(BfgsStatus::Diverged),
            "stopped": result.count(BfgsStatus::Stopped),
            "domain_error": result.count(BfgsStatus::DomainError),
            "stop_raised": result.stop_raised,
            "pso_best": result.pso_best_before_bfgs,
            "wall_time_s": result.wall_time,
        });
        println!("{}", serde_json::to_string_pretty(&value).expect("json value"));
    } else {
        println!("objective   {} (dim {})", f.name(), cfg.dim);
        println!("best f      {:.12e}", best.f_final);
        println!("best x      {:?}", best.x_final);
        println!(
            "status      {} after {} iterations, |g| = {:.3e}",
            best.status.as_str(),
            best.iterations,
            best.grad_norm
        );
        println!(
            "runs        {} launched: {} converged, {} diverged, {} stopped, {} domain errors",
            result.per_run.len(),
            result.count(BfgsStatus::Converged),
            result.count(BfgsStatus::Diverged),
            result.count(BfgsStatus::Stopped),
            result.count(BfgsStatus::DomainError)
        );
        println!("swarm best  {:.12e}", result.pso_best_before_bfgs);
        println!("wall time   {:.3} s", result.wall_time);
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Error> {
    let plan = ExperimentPlan::load(&args.plan, args.seed)?;
    plan.grid()?;
    let mut writer = RecordWriter::create(&args.out, args.format)?;
    let records = run_experiment(&plan, |r| {
        eprintln!(
            "{} {} dim={} N={} iter_pso={} rep={} n_correct={} euclid_error={:.3e} {:.3}s",
            r.experiment,
            r.objective,
            r.dim,
            r.particles,
            r.iter_pso,
            r.rep,
            r.n_correct,
            r.euclid_error,
            r.wall_time_s
        );
        writer.write(r)
    })?;
    eprintln!("wrote {} records to {}", records.len(), args.out.display());
    Ok(())
}

fn fit(args: FitArgs) -> Result<(), Error> {
    let demo = SpectrumDemo::default();
    let data = match (&args.data, args.demo) {
        (Some(path), _) => read_dataset(path)?,
        (None, Some(Demo::Noiseless)) => demo.expected(),
        (None, Some(Demo::Poisson)) => demo.fluctuated(args.seed),
        (None, None) => unreachable!("clap requires --data or --demo"),
    };
    if let Some(path) = &args.write_data {
        write_dataset(path, &data)?;
    }
    let report = match args.model {
        ModelKind::Spectrum => {
            let model = if args.data.is_none() && args.scale.is_none() && args.mass_scale.is_none() {
                demo.model
            } else {
                let last_edge = *data.edges().last().expect("non-empty binning");
                let max_count = data.counts().iter().copied().fold(1.0, f64::max);
                FallingSpectrum {
                    scale: args.scale.unwrap_or(max_count),
                    mass_scale: args.mass_scale.unwrap_or(1.1 * last_edge),
                }
            };
            let mut cfg = fit_config(3, args.seed);
            args.config.apply(&mut cfg);
            fit_dataset(&model, &data, &cfg)?
        }
        ModelKind::Linear => {
            let mut cfg = fit_config(2, args.seed);
            cfg.lower = -10.0;
            cfg.upper = 10.0;
            args.config.apply(&mut cfg);
            fit_dataset(&LinearModel, &data, &cfg)?
        }
    };
    let text = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))?,
        None => println!("{text}"),
    }
    eprintln!(
        "parameters {:?}  chi2 {:.6e}  ndf {}  pulls within 2: {:.1}%",
        report.parameters,
        report.chi2,
        report.ndf,
        100.0 * report.pulls_within_2
    );
    Ok(())
}

fn audit(args: AuditArgs) -> Result<(), Error> {
    let mut cfg = audit_config(args.seed);
    cfg.workers = default_workers();
    args.config.apply(&mut cfg);
    let report = ackley_audit(&cfg)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{report}");
    }
    Ok(())
}

fn speedup(args: SpeedupArgs) -> Result<(), Error> {
    let (f, mut cfg) = benchmark_config(&args.objective, args.dim, args.seed, &args.config)?;
    cfg.validate()?;
    cfg.workers = 1;
    let rows = speedup_study(&f, &cfg, &args.worker_counts, args.reps)?;
    println!("workers,wall_time_s,speedup");
    for r in rows {
        println!("{},{:.6},{:.3}", r.workers, r.wall_time, r.speedup);
    }
    Ok(())
}
