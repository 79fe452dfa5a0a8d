//! Command-line front end: `redtraj run` and `redtraj sweep`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coherence::{coherence_degree, tau_from_visibility, CoherenceMode, EnvironmentModel};
use crate::error::{Error, Result};
use crate::experiment::{
    analytic_profile, compare_profiles, fringe_spacing, geometric_fringe_spacing, read_reference_profile,
    rebin_reference, run_scenario, visibility_at_spacing, AnalyticIntensity, ExperimentConfig,
    IntensityProfile, Scenario, ScenarioRun, FINE_SPACING,
};
use crate::sampling::SamplingMethod;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "redtraj", version, about = "Reduced quantum trajectories for partially coherent double-slit interference")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write histogram, analytic profile, trajectories and manifest.
    Run(RunArgs),
    /// Tabulate coherence degree against coherence time.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingArg {
    Random,
    Rejection,
    QuantileGrid,
}

impl From<SamplingArg> for SamplingMethod {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Random => SamplingMethod::Random,
            SamplingArg::Rejection => SamplingMethod::Rejection,
            SamplingArg::QuantileGrid => SamplingMethod::QuantileGrid,
        }
    }
}

impl From<SamplingMethod> for SamplingArg {
    fn from(s: SamplingMethod) -> Self {
        match s {
            SamplingMethod::Random => SamplingArg::Random,
            SamplingMethod::Rejection => SamplingArg::Rejection,
            SamplingMethod::QuantileGrid => SamplingArg::QuantileGrid,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Built-in parameter set.
    #[arg(long)]
    pub preset: Option<String>,
    /// Flat TOML config file (a previous manifest works too).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fixed environment overlap in [0, 1].
    #[arg(long)]
    pub alpha_fixed: Option<f64>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Detector bin width, m.
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Number of full trajectories written out.
    #[arg(long)]
    pub traj_sample: Option<usize>,
    #[arg(long, value_enum)]
    pub sampling: Option<SamplingArg>,
    /// Base integration steps over the flight.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// coherent, partial, decoherent or independent.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Coherence time, s. 0 means fully decoherent, inf fully coherent.
    #[arg(long)]
    pub tau_c: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Optional two-column (position_m, intensity) profile to compare against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureFrom {
    /// Visibility of the analytic detector profile.
    Analytic,
    /// Visibility of the trajectory histogram (one ensemble per row).
    Trajectories,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated coherence times, s (`inf` allowed).
    #[arg(long, value_delimiter = ',')]
    pub tau_c: Vec<f64>,
    /// Geometric range `start:stop:count`, s.
    #[arg(long)]
    pub tau_c_range: Option<String>,
    #[arg(long, value_enum, default_value = "analytic")]
    pub measure: MeasureFrom,
    /// Write the table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flat config file. Lengths accept either a `_um` or an `_m` key; emitted
/// manifests use SI keys so that values round-trip exactly.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_db_angstrom: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_db_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub velocity_m_per_s: Option<f64>,
    /// `coherent` or `decoherent`; otherwise implied by the keys below.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_c_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_fixed: Option<f64>,
    /// Target coherence degree at the detector; sets `tau_c_s`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence_degree: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub env_phase_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_traj: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_width_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_width_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_min_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_min_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_max_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traj_sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Run metadata in manifests; ignored on input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run_info: Option<toml::Table>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies the file on top of `base`.
    pub fn apply(&self, base: &mut ExperimentConfig) -> Result<()> {
        fn pick(name: &str, scaled: Option<f64>, scale: f64, si: Option<f64>) -> Result<Option<f64>> {
            match (scaled, si) {
                (Some(_), Some(_)) => Err(Error::Config(format!("{name} given in two units"))),
                (Some(v), None) => Ok(Some(v / scale)),
                (None, v) => Ok(v),
            }
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut base.a1, pick("a1", self.a1_um, 1e6, self.a1_m)?);
        set(&mut base.a2, pick("a2", self.a2_um, 1e6, self.a2_m)?);
        set(&mut base.gap, pick("gap", self.gap_um, 1e6, self.gap_m)?);
        set(&mut base.distance, self.distance_m);
        set(&mut base.lambda_db, pick("lambda_db", self.lambda_db_angstrom, 1e10, self.lambda_db_m)?);
        set(&mut base.mass, self.mass_kg);
        set(&mut base.velocity, self.velocity_m_per_s);
        set(&mut base.bin_width, pick("bin_width", self.bin_width_um, 1e6, self.bin_width_m)?);
        set(&mut base.detector_window.0, pick("window_min", self.window_min_um, 1e6, self.window_min_m)?);
        set(&mut base.detector_window.1, pick("window_max", self.window_max_um, 1e6, self.window_max_m)?);
        if let Some(n) = self.n_traj {
            base.n_traj = n;
        }
        if let Some(s) = self.seed {
            base.seed = s;
        }
        if let Some(s) = self.sampling {
            base.sampling = s.into();
        }
        if let Some(k) = self.traj_sample {
            base.traj_sample = k;
        }
        if let Some(s) = self.steps {
            base.steps = s;
        }

        let phase = self.env_phase_rad.unwrap_or(base.coherence.env_phase());
        let given = [
            self.coherence.is_some(),
            self.tau_c_s.is_some(),
            self.alpha_fixed.is_some(),
            self.coherence_degree.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given > 1 {
            return Err(Error::Config(
                "give at most one of coherence, tau_c_s, alpha_fixed, coherence_degree".into(),
            ));
        }
        let env = if let Some(name) = &self.coherence {
            match name.as_str() {
                "coherent" => EnvironmentModel::coherent(),
                "decoherent" => EnvironmentModel::decoherent(),
                other => return Err(Error::Config(format!("unknown coherence '{other}'"))),
            }
        } else if let Some(tau) = self.tau_c_s {
            environment_from_tau(tau)?
        } else if let Some(a) = self.alpha_fixed {
            EnvironmentModel::fixed(a).map_err(to_config)?
        } else if let Some(lambda) = self.coherence_degree {
            let tau = tau_from_visibility(lambda, base.distance / base.velocity).map_err(to_config)?;
            EnvironmentModel::exponential(tau).map_err(to_config)?
        } else {
            base.coherence
        };
        base.coherence = env.with_phase(phase);
        Ok(())
    }

    /// The file that reproduces `config` and `scenario`.
    pub fn snapshot(config: &ExperimentConfig, scenario: Option<Scenario>) -> Self {
        let mut f = ConfigFile {
            scenario: scenario.map(|s| s.to_string()),
            a1_m: Some(config.a1),
            a2_m: Some(config.a2),
            gap_m: Some(config.gap),
            distance_m: Some(config.distance),
            lambda_db_m: Some(config.lambda_db),
            mass_kg: Some(config.mass),
            velocity_m_per_s: Some(config.velocity),
            env_phase_rad: Some(config.coherence.env_phase()),
            n_traj: Some(config.n_traj),
            bin_width_m: Some(config.bin_width),
            window_min_m: Some(config.detector_window.0),
            window_max_m: Some(config.detector_window.1),
            seed: Some(config.seed),
            sampling: Some(config.sampling.into()),
            traj_sample: Some(config.traj_sample),
            steps: Some(config.steps),
            ..Default::default()
        };
        match config.coherence.mode() {
            CoherenceMode::Exponential { tau_c } => f.tau_c_s = Some(tau_c),
            CoherenceMode::Fixed { alpha } => f.alpha_fixed = Some(alpha),
            CoherenceMode::Coherent => f.coherence = Some("coherent".into()),
            CoherenceMode::Decoherent => f.coherence = Some("decoherent".into()),
        }
        f
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("cannot serialize config: {e}")))
    }
}

fn to_config(e: Error) -> Error {
    match e {
        Error::Domain(m) => Error::Config(m),
        other => other,
    }
}

/// `τ_c = 0` is the fully decoherent limit.
pub fn environment_from_tau(tau: f64) -> Result<EnvironmentModel> {
    if tau == 0.0 {
        Ok(EnvironmentModel::decoherent())
    } else {
        EnvironmentModel::exponential(tau).map_err(to_config)
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match name {
        "zeilinger" => Ok(ExperimentConfig::zeilinger()),
        other => Err(Error::Config(format!("unknown preset '{other}' (available: zeilinger)"))),
    }
}

/// Preset, then config file, then flags.
pub fn resolve_config(
    common: &CommonArgs,
    tau_c: Option<f64>,
) -> Result<(ExperimentConfig, Option<String>)> {
    let file = common.config.as_deref().map(ConfigFile::load).transpose()?;
    let preset_name = common
        .preset
        .clone()
        .or_else(|| file.as_ref().and_then(|f| f.preset.clone()))
        .unwrap_or_else(|| "zeilinger".into());
    let mut cfg = preset(&preset_name)?;
    if let Some(f) = &file {
        f.apply(&mut cfg)?;
    }
    if tau_c.is_some() && common.alpha_fixed.is_some() {
        return Err(Error::Config("--tau-c and --alpha-fixed are mutually exclusive".into()));
    }
    let phase = cfg.coherence.env_phase();
    if let Some(tau) = tau_c {
        cfg.coherence = environment_from_tau(tau)?.with_phase(phase);
    }
    if let Some(a) = common.alpha_fixed {
        cfg.coherence = EnvironmentModel::fixed(a).map_err(to_config)?.with_phase(phase);
    }
    if let Some(n) = common.n_traj {
        cfg.n_traj = n;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = common.bin_width {
        cfg.bin_width = w;
    }
    if let Some(k) = common.traj_sample {
        cfg.traj_sample = k;
    }
    if let Some(s) = common.sampling {
        cfg.sampling = s.into();
    }
    if let Some(s) = common.steps {
        cfg.steps = s;
    }
    cfg.validate()?;
    Ok((cfg, file.and_then(|f| f.scenario)))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Visibility at the profile center; falls back to the geometric fringe
/// period when the profile's own extrema are too few.
pub fn measured_visibility(profile: &IntensityProfile, config: &ExperimentConfig) -> Option<f64> {
    let spacing = fringe_spacing(profile).unwrap_or_else(|_| geometric_fringe_spacing(config));
    visibility_at_spacing(profile, spacing).ok()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |v| format!("{v:e}"))
}

pub fn histogram_csv(run: &ScenarioRun) -> String {
    let mut s = String::from("# bin_center_m,count,normalized_intensity,analytic_intensity\n");
    s.push_str("# units: m,1,1/m,1/m\n");
    for i in 0..run.histogram.len() {
        let _ = writeln!(
            s,
            "{:e},{},{:e},{:e}",
            run.histogram.bin_centers[i], run.histogram.counts[i], run.histogram.values[i], run.analytic.values[i]
        );
    }
    s
}

pub fn analytic_csv(profile: &IntensityProfile) -> String {
    let mut s = String::from("# x_m,analytic_intensity\n# units: m,1/m\n");
    for (x, v) in profile.bin_centers.iter().zip(&profile.values) {
        let _ = writeln!(s, "{x:e},{v:e}");
    }
    s
}

pub fn trajectories_csv(run: &ScenarioRun) -> String {
    let mut s = String::from("# traj_id,t_s,x_m,z_m\n");
    for tr in &run.trajectories {
        for p in &tr.samples {
            let _ = writeln!(s, "{},{:e},{:e},{:e}", tr.id, p.t, p.x, p.z);
        }
    }
    s
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_run(args: &RunArgs) -> Result<String> {
    let (cfg, file_scenario) = resolve_config(&args.common, args.tau_c)?;
    let scenario: Scenario =
        args.scenario.clone().or(file_scenario).unwrap_or_else(|| "partial".into()).parse()?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", args.out.display())))?;
    let reference = args.reference.as_deref().map(read_reference_profile).transpose()?;

    let started = Instant::now();
    let run = with_threads(args.common.threads, || run_scenario(&cfg, scenario))??;
    let wall = started.elapsed().as_secs_f64();

    write(&args.out, "histogram.csv", &histogram_csv(&run))?;
    write(&args.out, "analytic_profile.csv", &analytic_csv(&run.analytic_fine))?;
    write(&args.out, "trajectories.csv", &trajectories_csv(&run))?;

    let cmp = compare_profiles(&run.histogram, &run.analytic)?;
    let v_traj = measured_visibility(&run.histogram, &cfg);
    let v_analytic = measured_visibility(&run.analytic_fine, &cfg);
    let lambda_tf = run.environment.coherence_degree_at(run.flight_time)?;

    let mut info = toml::Table::new();
    info.insert("software_version".into(), env!("CARGO_PKG_VERSION").into());
    info.insert("wall_time_s".into(), wall.into());
    info.insert("node_aborts".into(), (run.aborted as i64).into());
    info.insert("completed".into(), (run.completed as i64).into());
    info.insert("outside_window".into(), (run.outside_window as i64).into());
    info.insert("flight_time_s".into(), run.flight_time.into());
    info.insert("coherence_degree_tf".into(), lambda_tf.into());
    info.insert("l1_histogram_vs_analytic".into(), cmp.l1.into());
    for (key, v) in [("visibility_trajectories", v_traj), ("visibility_analytic", v_analytic)] {
        if let Some(v) = v {
            info.insert(key.into(), v.into());
        }
    }
    let mut manifest = ConfigFile::snapshot(&cfg, Some(scenario));
    manifest.run_info = Some(info);
    write(&args.out, "manifest.toml", &manifest.to_toml()?)?;

    let mut report = format!(
        "scenario {scenario}: {} trajectories ({} node aborts, {} outside window) in {wall:.1} s\n\
         coherence degree at detector {lambda_tf:.4}\n\
         visibility: analytic {}, trajectories {}\n\
         L1(histogram, analytic) {:.4}\n",
        run.completed,
        run.aborted,
        run.outside_window,
        fmt_opt(v_analytic),
        fmt_opt(v_traj),
        cmp.l1,
    );
    if let Some(points) = reference {
        let r = rebin_reference(&points, &run.histogram)?;
        let c = compare_profiles(&run.histogram, &r)?;
        let _ = writeln!(report, "L1(histogram, reference) {:.4}", c.l1);
    }
    let _ = writeln!(report, "wrote {}", args.out.display());
    Ok(report)
}

fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Config(format!("tau-c range '{text}' is not start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) || count == 0 {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let ratio = (stop / start).ln() / (count - 1) as f64;
    Ok((0..count).map(|i| start * (ratio * i as f64).exp()).collect())
}

/// One row of the sweep table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub tau_c: f64,
    pub alpha_tf: f64,
    pub lambda_analytic: f64,
    pub lambda_measured: Option<f64>,
}

pub fn sweep_rows(args: &SweepArgs) -> Result<(ExperimentConfig, Vec<SweepRow>)> {
    let (base, _) = resolve_config(&args.common, None)?;
    let mut taus = args.tau_c.clone();
    if let Some(r) = &args.tau_c_range {
        taus.extend(parse_range(r)?);
    }
    if taus.is_empty() {
        return Err(Error::Config("sweep needs --tau-c values or --tau-c-range".into()));
    }
    let t_f = base.flight_time();
    let mut rows = Vec::with_capacity(taus.len());
    for tau in taus {
        let env = environment_from_tau(tau)?.with_phase(base.coherence.env_phase());
        let cfg = ExperimentConfig { coherence: env, ..base };
        let alpha_tf = env.alpha(t_f)?;
        let lambda_analytic = coherence_degree(alpha_tf)?;
        let lambda_measured = match args.measure {
            MeasureFrom::Analytic => {
                let state = crate::experiment::derive_state(&cfg)?;
                let p = analytic_profile(
                    &state,
                    AnalyticIntensity::Reduced(env),
                    t_f,
                    cfg.detector_window,
                    FINE_SPACING,
                    false,
                )?;
                measured_visibility(&p, &cfg)
            }
            MeasureFrom::Trajectories => {
                let run = with_threads(args.common.threads, || run_scenario(&cfg, Scenario::Partial))??;
                measured_visibility(&run.histogram, &cfg)
            }
        };
        rows.push(SweepRow { tau_c: tau, alpha_tf, lambda_analytic, lambda_measured });
    }
    Ok((base, rows))
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut s = String::from("# tau_c_s,alpha_tf,lambda_analytic,lambda_measured\n");
    for r in rows {
        let _ = writeln!(s, "{:e},{:e},{:e},{}", r.tau_c, r.alpha_tf, r.lambda_analytic, fmt_opt(r.lambda_measured));
    }
    s
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let (_, rows) = sweep_rows(args)?;
    let table = sweep_table(&rows);
    match &args.out {
        Some(path) => {
            fs::write(path, &table)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(table),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) | Error::Precondition(_) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("redtraj: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    run_with_args(std::env::args_os())
}
