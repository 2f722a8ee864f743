//! `rackforce` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rackforce::io::{
    format_value, read_scenario, result_path, write_decomposition_csv, write_result_csv,
    write_scenario, CONFIG_FILE, SUMMARY_FILE,
};
use rackforce::tire::{Axle, EffectiveRoadPoint};
use rackforce::{
    decompose, decompose_oracle, gen_experiment1, gen_experiment2, gen_experiment3, nmae,
    normal_forces, run_estimator, run_oracle, Config, EstimationResult, EstimatorKind, Exp1Config,
    Exp2Config, Exp3Config, MetricReport, ModelSummary, OracleParams, Scenario,
};

const CONFIG_ENV: &str = "RACKFORCE_CONFIG";

#[derive(Parser)]
#[command(name = "rackforce", version, about = "Steering rack force estimation")]
struct Cli {
    /// JSON configuration; overrides $RACKFORCE_CONFIG and the scenario's config.json.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic scenario directory.
    Gen(GenArgs),
    /// Run one estimator on a scenario.
    Run {
        #[arg(long, value_enum)]
        model: Model,
        #[command(flatten)]
        io: ScenarioArgs,
    },
    /// Run the reference model on a scenario.
    Oracle {
        #[command(flatten)]
        io: ScenarioArgs,
    },
    /// Run every estimator and the reference, and score them.
    Compare {
        #[command(flatten)]
        io: ScenarioArgs,
    },
    /// Split one estimator's rack force into steering, road and residual parts.
    Decompose {
        #[arg(long, value_enum)]
        model: DecomposeModel,
        #[command(flatten)]
        io: ScenarioArgs,
    },
    /// Tabulate a tire kernel over slip angle.
    TireSweep {
        #[arg(long, value_enum)]
        model: Model,
        /// Largest slip angle, degrees.
        #[arg(long, default_value_t = 15.0)]
        max_slip_deg: f64,
        #[arg(long, default_value_t = 301)]
        points: usize,
        /// Per-tire normal load, N. Defaults to the static front load.
        #[arg(long)]
        load: Option<f64>,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Lt,
    Bt,
    Rr,
}

impl From<Model> for EstimatorKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Lt => EstimatorKind::Lt,
            Model::Bt => EstimatorKind::Bt,
            Model::Rr => EstimatorKind::Rr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeModel {
    Lt,
    Bt,
    Rr,
    Oracle,
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory; defaults to the scenario directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn out_dir(&self) -> Result<&Path> {
        let dir = self.out.as_deref().unwrap_or(&self.scenario);
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Exp1,
    Exp2,
    Exp3,
}

/// Angles are in degrees and speeds in km/h; unset options keep the
/// experiment defaults.
#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    rate_hz: Option<f64>,
    #[arg(long)]
    speed_kmh: Option<f64>,
    /// Lateral slope (exp1, exp2).
    #[arg(long)]
    slope_deg: Option<f64>,
    /// Steering amplitude at the road wheel.
    #[arg(long)]
    amplitude_deg: Option<f64>,
    /// Steering period, s.
    #[arg(long)]
    period_s: Option<f64>,
    /// Constant steering offset (exp3).
    #[arg(long)]
    steer_bias_deg: Option<f64>,
    /// Distance between cleats, m (exp3).
    #[arg(long)]
    cleat_spacing_m: Option<f64>,
}

fn set(target: &mut f64, value: Option<f64>) {
    if let Some(v) = value {
        *target = v;
    }
}

/// Picks the configuration: `--config`, then `$RACKFORCE_CONFIG`, then the
/// scenario's own `config.json`, then the built-in example.
fn resolve_config(flag: Option<&Path>, scenario: Option<&Path>) -> Result<Config> {
    let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    let local = scenario.map(|d| d.join(CONFIG_FILE)).filter(|p| p.exists());
    let cfg = match flag.map(Path::to_path_buf).or(env).or(local) {
        Some(path) => Config::load(&path)?,
        None => Config::example(),
    };
    cfg.validate().into_result()?;
    Ok(cfg)
}

fn load(cli_config: Option<&Path>, dir: &Path) -> Result<(Config, Scenario)> {
    let cfg = resolve_config(cli_config, Some(dir)).context("config")?;
    let scenario = read_scenario(dir, &cfg).context("reading scenario")?;
    Ok((cfg, scenario))
}

fn write_summary(dir: &Path, report: &MetricReport) -> Result<()> {
    let path = dir.join(SUMMARY_FILE);
    let json = serde_json::to_string_pretty(report)?;
    fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn run_model(
    cfg: &Config,
    s: &Scenario,
    kind: EstimatorKind,
) -> rackforce::Result<EstimationResult> {
    run_estimator(&cfg.tire(kind), &s.delta, &s.road, &s.speed, &cfg.vehicle)
}

fn run_reference(cfg: &Config, s: &Scenario) -> rackforce::Result<EstimationResult> {
    run_oracle(&s.delta, &s.road, &s.speed, &OracleParams::from_config(cfg))
}

fn cmd_gen(args: &GenArgs, cli_config: Option<&Path>) -> Result<()> {
    let mut cfg = resolve_config(cli_config, None).context("config")?;
    let scenario = match args.experiment {
        Experiment::Exp1 => {
            let mut c = Exp1Config::default();
            set(&mut c.rate_hz, args.rate_hz);
            set(&mut c.speed_kmh, args.speed_kmh);
            set(&mut c.slope_deg, args.slope_deg);
            set(&mut c.steer_amplitude_deg, args.amplitude_deg);
            set(&mut c.steer_period_s, args.period_s);
            gen_experiment1(&c)
        }
        Experiment::Exp2 => {
            let mut c = Exp2Config::default();
            set(&mut c.rate_hz, args.rate_hz);
            set(&mut c.speed_kmh, args.speed_kmh);
            set(&mut c.slope_deg, args.slope_deg);
            set(&mut c.amplitude_deg, args.amplitude_deg);
            set(&mut c.period_s, args.period_s);
            gen_experiment2(&c)
        }
        Experiment::Exp3 => {
            let mut c = Exp3Config::default();
            set(&mut c.rate_hz, args.rate_hz);
            set(&mut c.speed_kmh, args.speed_kmh);
            set(&mut c.amplitude_deg, args.amplitude_deg);
            set(&mut c.period_s, args.period_s);
            set(&mut c.steer_bias_deg, args.steer_bias_deg);
            set(&mut c.cleat_spacing_m, args.cleat_spacing_m);
            gen_experiment3(&c)
        }
    }
    .context("generating scenario")?;
    cfg.sim.rate_hz = scenario.rate_hz();
    cfg.sim.duration = scenario.duration();
    cfg.sim.steering_ratio = None;
    write_scenario(&args.out, &scenario, &cfg).context("writing scenario")?;
    eprintln!(
        "wrote {} ({} samples) to {}",
        scenario.name,
        scenario.delta.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_run(model: Model, io: &ScenarioArgs, cli_config: Option<&Path>) -> Result<()> {
    let (cfg, s) = load(cli_config, &io.scenario)?;
    let kind = EstimatorKind::from(model);
    let (res, secs) = timed(|| run_model(&cfg, &s, kind));
    let res = res.with_context(|| format!("running {kind} estimator"))?;
    write_single(io.out_dir()?, &s.name, kind.as_str(), &res, secs)
}

fn cmd_oracle(io: &ScenarioArgs, cli_config: Option<&Path>) -> Result<()> {
    let (cfg, s) = load(cli_config, &io.scenario)?;
    let (res, secs) = timed(|| run_reference(&cfg, &s));
    let res = res.context("running oracle")?;
    write_single(io.out_dir()?, &s.name, "oracle", &res, secs)
}

fn write_single(
    dir: &Path,
    scenario: &str,
    model: &str,
    res: &EstimationResult,
    secs: f64,
) -> Result<()> {
    write_result_csv(&result_path(dir, model), res).context("writing results")?;
    let report = MetricReport {
        scenario: scenario.to_owned(),
        reference: None,
        models: vec![ModelSummary::new(model, &res.rf, secs)],
    };
    write_summary(dir, &report)
}

fn cmd_compare(io: &ScenarioArgs, cli_config: Option<&Path>) -> Result<()> {
    let (cfg, s) = load(cli_config, &io.scenario)?;
    let (cfg, s) = (&cfg, &s);
    let (runs, reference) = std::thread::scope(|scope| {
        let handles: Vec<_> = EstimatorKind::ALL
            .iter()
            .map(|&kind| scope.spawn(move || (kind, timed(|| run_model(cfg, s, kind)))))
            .collect();
        let reference = timed(|| run_reference(cfg, s));
        let runs: Vec<_> = handles
            .into_iter()
            .map(|h| h.join().expect("estimator thread panicked"))
            .collect();
        (runs, reference)
    });
    let (reference, ref_secs) = reference;
    let reference = reference.context("running oracle")?;

    let dir = io.out_dir()?;
    let mut models = Vec::new();
    for (kind, (res, secs)) in runs {
        let res = res.with_context(|| format!("running {kind} estimator"))?;
        let mut summary = ModelSummary::new(kind.as_str(), &res.rf, secs);
        summary.nmae_pct = Some(
            nmae(&reference.rf, &res.rf)
                .with_context(|| format!("scoring {kind} against oracle"))?,
        );
        write_result_csv(&result_path(dir, kind.as_str()), &res).context("writing results")?;
        models.push(summary);
    }
    write_result_csv(&result_path(dir, "oracle"), &reference).context("writing results")?;
    models.push(ModelSummary::new("oracle", &reference.rf, ref_secs));

    let report = MetricReport {
        scenario: s.name.clone(),
        reference: Some("oracle".into()),
        models,
    };
    write_summary(dir, &report)?;
    for m in &report.models {
        match m.nmae_pct {
            Some(e) => println!("{:<7}NMAE {e:6.2} %  ({:.3} s)", m.model, m.runtime_s),
            None => println!("{:<7}reference   ({:.3} s)", m.model, m.runtime_s),
        }
    }
    Ok(())
}

fn cmd_decompose(
    model: DecomposeModel,
    io: &ScenarioArgs,
    cli_config: Option<&Path>,
) -> Result<()> {
    let (cfg, s) = load(cli_config, &io.scenario)?;
    let (name, dec) = match model {
        DecomposeModel::Oracle => (
            "oracle",
            decompose_oracle(
                &s.delta,
                &s.road,
                &s.speed,
                &OracleParams::from_config(&cfg),
            ),
        ),
        m => {
            let kind = EstimatorKind::from(match m {
                DecomposeModel::Lt => Model::Lt,
                DecomposeModel::Bt => Model::Bt,
                _ => Model::Rr,
            });
            (
                kind.as_str(),
                decompose(&cfg.tire(kind), &s.delta, &s.road, &s.speed, &cfg.vehicle),
            )
        }
    };
    let dec = dec.with_context(|| format!("decomposing {name}"))?;
    let path = io.out_dir()?.join(format!("decomposition_{name}.csv"));
    write_decomposition_csv(&path, &dec).context("writing decomposition")
}

fn cmd_tire_sweep(
    model: Model,
    max_slip_deg: f64,
    points: usize,
    load: Option<f64>,
    out: Option<&Path>,
    cli_config: Option<&Path>,
) -> Result<()> {
    if points < 2 {
        bail!("tire sweep needs at least two points");
    }
    if !(max_slip_deg > 0.0 && max_slip_deg < 90.0) {
        bail!("max slip must lie in (0, 90) degrees, got {max_slip_deg}");
    }
    let cfg = resolve_config(cli_config, None).context("config")?;
    let tire = cfg.tire(model.into());
    let fz = load.unwrap_or_else(|| normal_forces(0.0, &cfg.vehicle).front);
    let eff = EffectiveRoadPoint::flat(fz);
    let max = max_slip_deg.to_radians();

    let mut text = String::from("alpha,f_y,t_p,m_zf\n");
    for i in 0..points {
        let alpha = -max + 2.0 * max * i as f64 / (points - 1) as f64;
        let o = tire
            .evaluate(alpha, fz, &eff, Axle::Front, cfg.vehicle.mechanical_trail)
            .context("evaluating tire")?;
        let row = [alpha, o.fy, o.trail, o.mz].map(format_value).join(",");
        text.push_str(&row);
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing sweep"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::Gen(args) => cmd_gen(args, config),
        Command::Run { model, io } => cmd_run(*model, io, config),
        Command::Oracle { io } => cmd_oracle(io, config),
        Command::Compare { io } => cmd_compare(io, config),
        Command::Decompose { model, io } => cmd_decompose(*model, io, config),
        Command::TireSweep {
            model,
            max_slip_deg,
            points,
            load,
            out,
        } => cmd_tire_sweep(
            *model,
            *max_slip_deg,
            *points,
            *load,
            out.as_deref(),
            config,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
