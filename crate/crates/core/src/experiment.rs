//! Double-slit harness: geometry, derived packet parameters, scenario runs,
//! detector binning and profile measurements.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::coherence::{tau_from_visibility, EnvironmentModel};
use crate::density::{CrossWeight, Slit, SuperpositionState};
use crate::dynamics::{run_ensemble, FieldSpec, IntegratorConfig, Trajectory};
use crate::error::{Error, Result};
use crate::sampling::{sample_initials, SamplerConfig, SamplingMethod};
use crate::vec2::Vec2;
use crate::wavepacket::{GaussianPacket, PhysicalConstants, HBAR, NEUTRON_MASS};

/// Geometry and beam parameters of a double-slit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Slit widths, m.
    pub a1: f64,
    pub a2: f64,
    /// Opaque gap between the slits, m.
    pub gap: f64,
    /// Slit-to-detector distance, m.
    pub distance: f64,
    /// de Broglie wavelength, m.
    pub lambda_db: f64,
    pub mass: f64,
    /// Longitudinal speed, m/s.
    pub velocity: f64,
    pub coherence: EnvironmentModel,
    pub n_traj: usize,
    pub bin_width: f64,
    pub detector_window: (f64, f64),
    pub seed: u64,
    pub sampling: SamplingMethod,
    /// Number of trajectories kept in full for output.
    pub traj_sample: usize,
    /// Base integration steps over the flight.
    pub steps: usize,
}

/// Measured coherence degree that calibrates the partial-coherence preset.
pub const ZEILINGER_COHERENCE_DEGREE: f64 = 0.632;
/// Coherence time quoted for that calibration, s.
pub const ZEILINGER_TAU_C: f64 = 2.26e-2;

impl ExperimentConfig {
    /// Cold-neutron double slit: 21.9–104.1–22.5 μm slits, 5 m flight,
    /// λ = 18.45 Å, v = 214.4 m/s, τ_c = 2.26×10⁻² s.
    pub fn zeilinger() -> Self {
        ExperimentConfig {
            a1: 21.9e-6,
            a2: 22.5e-6,
            gap: 104.1e-6,
            distance: 5.0,
            lambda_db: 18.45e-10,
            mass: NEUTRON_MASS,
            velocity: 214.4,
            coherence: EnvironmentModel::exponential(ZEILINGER_TAU_C).expect("positive"),
            n_traj: 5420,
            bin_width: 20e-6,
            detector_window: (-500e-6, 500e-6),
            seed: 0,
            sampling: SamplingMethod::QuantileGrid,
            traj_sample: 40,
            steps: IntegratorConfig::DEFAULT_STEPS,
        }
    }

    pub fn constants(&self) -> Result<PhysicalConstants> {
        PhysicalConstants::new(HBAR, self.mass).map_err(|e| Error::Config(e.to_string()))
    }

    /// Time of flight `L / v`.
    pub fn flight_time(&self) -> f64 {
        self.distance / self.velocity
    }

    /// Separation of the two slit centers, m.
    pub fn slit_separation(&self) -> f64 {
        self.gap + 0.5 * (self.a1 + self.a2)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("a1", self.a1),
            ("a2", self.a2),
            ("gap", self.gap),
            ("distance", self.distance),
            ("lambda_db", self.lambda_db),
            ("mass", self.mass),
            ("velocity", self.velocity),
            ("bin_width", self.bin_width),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_traj == 0 {
            return Err(Error::Config("n_traj must be positive".into()));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be positive".into()));
        }
        let (lo, hi) = self.detector_window;
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Config(format!("empty detector window ({lo}, {hi})")));
        }
        if self.bin_width > hi - lo {
            return Err(Error::Config("bin width exceeds the detector window".into()));
        }
        let implied = 2.0 * std::f64::consts::PI * HBAR / (self.mass * self.velocity);
        if ((implied - self.lambda_db) / self.lambda_db).abs() > 5e-3 {
            return Err(Error::Config(format!(
                "wavelength {:e} m inconsistent with speed {} m/s (implies {:e} m)",
                self.lambda_db, self.velocity, implied
            )));
        }
        Ok(())
    }

    pub fn integrator(&self) -> Result<IntegratorConfig> {
        let t_f = self.flight_time();
        let cfg = IntegratorConfig::for_flight(t_f)?.with_dt(t_f / self.steps as f64)?;
        cfg.with_record_stride((self.steps / 100).max(1))
    }
}

/// Builds the two-packet state for a configuration.
///
/// Slit `j` is centered at `∓(d' + a_j)/2` with `σ_x = a_j/4`; both packets use
/// `σ_z = a₁ + a₂` (twice the mean slit width), `p_x = ∓ħ/a_j` and
/// `p_z = √((2πħ/λ)² - p_x²)`. The weights are `c₁ = c₂ = 1/√2`.
pub fn derive_state(config: &ExperimentConfig) -> Result<SuperpositionState> {
    config.validate()?;
    let c = config.constants()?;
    let k = 2.0 * std::f64::consts::PI * c.hbar / config.lambda_db;
    let sigma_z = config.a1 + config.a2;
    let packet = |a: f64, sign: f64| {
        let px = sign * c.hbar / a;
        let pz = (k * k - px * px).sqrt();
        GaussianPacket::new(
            Vec2::new(sign * 0.5 * (config.gap + a), 0.0),
            Vec2::new(px, pz),
            Vec2::new(a / 4.0, sigma_z),
            c,
        )
    };
    let state = SuperpositionState::equal_weights(packet(config.a1, -1.0)?, packet(config.a2, 1.0)?)?;
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// `τ_c = ∞`.
    Coherent,
    /// The configured environment.
    Partial,
    /// `τ_c = 0`.
    Decoherent,
    /// Each slit independently open.
    Independent,
}

impl Scenario {
    pub const ALL: [Scenario; 4] =
        [Scenario::Coherent, Scenario::Partial, Scenario::Decoherent, Scenario::Independent];

    pub fn environment(&self, config: &ExperimentConfig) -> EnvironmentModel {
        match self {
            Scenario::Coherent => EnvironmentModel::coherent(),
            Scenario::Partial => config.coherence,
            Scenario::Decoherent | Scenario::Independent => EnvironmentModel::decoherent(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scenario::Independent => FieldSpec::Independent,
            _ => FieldSpec::Reduced,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Coherent => "coherent",
            Scenario::Partial => "partial",
            Scenario::Decoherent => "decoherent",
            Scenario::Independent => "independent",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

/// Intensity on a uniform grid of bins across the detector window.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    pub bin_width: f64,
    pub bin_centers: Vec<f64>,
    /// Intensity normalized to unit area over the window.
    pub values: Vec<f64>,
    /// Raw counts per bin (empty for analytic profiles).
    pub counts: Vec<u64>,
    /// Whether each value is an average over its bin (histograms) rather
    /// than a point sample.
    pub bin_averaged: bool,
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

fn bin_centers(window: (f64, f64), bin_width: f64) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(bin_width > 0.0) || !(hi > lo) {
        return Err(Error::Domain(format!("invalid binning: window {window:?}, width {bin_width}")));
    }
    let n = ((hi - lo) / bin_width).round().max(1.0) as usize;
    Ok((0..n).map(|i| lo + bin_width * (i as f64 + 0.5)).collect())
}

fn normalize(values: &mut [f64], bin_width: f64) -> Result<()> {
    let area: f64 = values.iter().sum::<f64>() * bin_width;
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::NotApplicable("profile has zero area over the window".into()));
    }
    values.iter_mut().for_each(|v| *v /= area);
    Ok(())
}

impl IntensityProfile {
    /// Histogram of `positions` over the window. Positions outside the
    /// window are ignored.
    pub fn histogram(
        positions: impl IntoIterator<Item = f64>,
        window: (f64, f64),
        bin_width: f64,
    ) -> Result<Self> {
        let centers = bin_centers(window, bin_width)?;
        let mut counts = vec![0u64; centers.len()];
        let lo = window.0;
        for x in positions {
            let i = ((x - lo) / bin_width).floor();
            if i >= 0.0 && (i as usize) < counts.len() {
                counts[i as usize] += 1;
            }
        }
        let mut values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        normalize(&mut values, bin_width)?;
        Ok(IntensityProfile { bin_width, bin_centers: centers, values, counts, bin_averaged: true })
    }

    /// Bin averages of `density` (5-point Gauss–Legendre per bin).
    pub fn binned_density(
        window: (f64, f64),
        bin_width: f64,
        density: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let centers = bin_centers(window, bin_width)?;
        let mut values: Vec<f64> = centers
            .iter()
            .map(|&c| GL5.iter().map(|&(u, w)| 0.5 * w * density(c + 0.5 * bin_width * u)).sum())
            .collect();
        normalize(&mut values, bin_width)?;
        Ok(IntensityProfile {
            bin_width,
            bin_centers: centers,
            values,
            counts: Vec::new(),
            bin_averaged: true,
        })
    }

    /// Point samples of `density` at the bin centers.
    pub fn sampled_density(
        window: (f64, f64),
        spacing: f64,
        density: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let centers = bin_centers(window, spacing)?;
        let mut values: Vec<f64> = centers.iter().map(|&c| density(c)).collect();
        normalize(&mut values, spacing)?;
        Ok(IntensityProfile {
            bin_width: spacing,
            bin_centers: centers,
            values,
            counts: Vec::new(),
            bin_averaged: false,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn window(&self) -> (f64, f64) {
        let half = 0.5 * self.bin_width;
        (self.bin_centers[0] - half, self.bin_centers[self.len() - 1] + half)
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Intensity-weighted mean position.
    pub fn centroid(&self) -> f64 {
        let m: f64 = self.values.iter().sum();
        self.bin_centers.iter().zip(&self.values).map(|(x, v)| x * v).sum::<f64>() / m
    }
}

/// Marginal `∫ ρ(x, z, t) dz` of a density over the detector plane region.
fn z_marginal(state: &SuperpositionState, t: f64, rho: impl Fn(f64, f64) -> f64) -> impl Fn(f64) -> f64 {
    let [p1, p2] = state.packets();
    let zc = 0.5 * (p1.center_at(t).z + p2.center_at(t).z);
    let sz = p1.width_at(t).map(|w| w.z).unwrap_or(p1.width0().z).max(
        p2.width_at(t).map(|w| w.z).unwrap_or(p2.width0().z),
    );
    let spread = (p1.center_at(t).z - p2.center_at(t).z).abs();
    let half = 8.0 * sz + spread;
    let panels = 8;
    let h = 2.0 * half / panels as f64;
    move |x| {
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = zc - half + h * (p as f64 + 0.5);
            for &(u, w) in &GL5 {
                sum += 0.5 * h * w * rho(x, mid + 0.5 * h * u);
            }
        }
        sum
    }
}

/// Which analytic intensity a profile represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticIntensity {
    /// Reduced intensity for the given environment.
    Reduced(EnvironmentModel),
    /// Sum of the weighted single-slit densities.
    Classical,
}

impl AnalyticIntensity {
    pub fn for_scenario(scenario: Scenario, config: &ExperimentConfig) -> Self {
        match scenario {
            Scenario::Independent => AnalyticIntensity::Classical,
            other => AnalyticIntensity::Reduced(other.environment(config)),
        }
    }
}

/// Analytic x-profile at time `t`, marginalized over `z`. With `bin_width`
/// equal to the detector binning this is directly comparable to a histogram
/// of trajectory end points; `bin_averaged = false` gives point samples.
pub fn analytic_profile(
    state: &SuperpositionState,
    intensity: AnalyticIntensity,
    t: f64,
    window: (f64, f64),
    bin_width: f64,
    bin_averaged: bool,
) -> Result<IntensityProfile> {
    let frozen = state.at(t)?;
    let rho: Box<dyn Fn(f64, f64) -> f64> = match intensity {
        AnalyticIntensity::Reduced(env) => {
            let cross = CrossWeight::new(&env, t)?;
            Box::new(move |x, z| frozen.reduced_density(cross, x, z))
        }
        AnalyticIntensity::Classical => Box::new(move |x, z| frozen.classical_density(x, z)),
    };
    let marginal = z_marginal(state, t, rho);
    if bin_averaged {
        IntensityProfile::binned_density(window, bin_width, marginal)
    } else {
        IntensityProfile::sampled_density(window, bin_width, marginal)
    }
}

/// Spacing of the fine analytic grid used for fringe measurements, m.
pub const FINE_SPACING: f64 = 0.5e-6;

/// Everything produced by one scenario run.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub state: SuperpositionState,
    pub environment: EnvironmentModel,
    pub flight_time: f64,
    /// Histogram of trajectory end points.
    pub histogram: IntensityProfile,
    /// Analytic intensity averaged over the same bins.
    pub analytic: IntensityProfile,
    /// Analytic intensity sampled on a fine grid.
    pub analytic_fine: IntensityProfile,
    pub trajectories: Vec<Trajectory>,
    pub completed: usize,
    pub aborted: usize,
    /// Completed trajectories ending outside the detector window.
    pub outside_window: usize,
}

pub fn run_scenario(config: &ExperimentConfig, scenario: Scenario) -> Result<ScenarioRun> {
    let state = derive_state(config)?;
    let environment = scenario.environment(config);
    let t_f = config.flight_time();
    let integrator = config.integrator()?;

    let sampler = SamplerConfig::new(config.n_traj, config.seed, config.sampling)?;
    let initials = sample_initials(&state, &sampler)?;
    let ensemble = run_ensemble(&initials, scenario.field(), &state, &environment, &integrator)?;

    let (lo, hi) = config.detector_window;
    let finals: Vec<f64> = ensemble.final_positions().map(|r| r.x).collect();
    let outside_window = finals.iter().filter(|&&x| x < lo || x >= hi).count();
    let histogram = IntensityProfile::histogram(finals.iter().copied(), config.detector_window, config.bin_width)?;

    let intensity = AnalyticIntensity::for_scenario(scenario, config);
    let analytic = analytic_profile(&state, intensity, t_f, config.detector_window, config.bin_width, true)?;
    let analytic_fine =
        analytic_profile(&state, intensity, t_f, config.detector_window, FINE_SPACING, false)?;

    let n = ensemble.trajectories.len();
    let keep = config.traj_sample.min(n);
    let trajectories = (0..keep).map(|i| ensemble.trajectories[i * n / keep].clone()).collect();

    Ok(ScenarioRun {
        scenario,
        state,
        environment,
        flight_time: t_f,
        histogram,
        analytic,
        analytic_fine,
        trajectories,
        completed: ensemble.completed(),
        aborted: ensemble.aborted,
        outside_window,
    })
}

/// Two-source fringe spacing `λ L / Δx` for the configured geometry.
pub fn geometric_fringe_spacing(config: &ExperimentConfig) -> f64 {
    config.lambda_db * config.distance / config.slit_separation()
}

/// Interior local maxima and minima, refined by parabolic interpolation.
fn extrema(profile: &IntensityProfile) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let v = &profile.values;
    let x = &profile.bin_centers;
    let h = profile.bin_width;
    let (mut maxima, mut minima) = (Vec::new(), Vec::new());
    for i in 1..v.len().saturating_sub(1) {
        let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) {
            continue;
        }
        let denom = a - 2.0 * b + c;
        let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
        let pos = x[i] + shift * h;
        let val = b - 0.25 * (a - c) * shift;
        if is_max {
            maxima.push((pos, val));
        } else {
            minima.push((pos, val));
        }
    }
    (maxima, minima)
}

/// Mean spacing of the fringe maxima nearest the profile centroid.
pub fn fringe_spacing(profile: &IntensityProfile) -> Result<f64> {
    let (maxima, minima) = extrema(profile);
    if maxima.len() < 2 || minima.is_empty() || maxima.len() + minima.len() < 3 {
        return Err(Error::NotApplicable(format!(
            "profile has {} maxima and {} minima; fringes need at least three extrema",
            maxima.len(),
            minima.len()
        )));
    }
    let center = profile.centroid();
    let nearest = maxima
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .0 - center).abs().total_cmp(&(b.1 .0 - center).abs()))
        .map(|(i, _)| i)
        .expect("non-empty");
    let lo = nearest.saturating_sub(1);
    let hi = (nearest + 1).min(maxima.len() - 1);
    let lo = if hi - lo < 2 { lo.saturating_sub(1) } else { lo };
    let hi = if hi - lo < 2 { (hi + 1).min(maxima.len() - 1) } else { hi };
    Ok((maxima[hi].0 - maxima[lo].0) / (hi - lo) as f64)
}

/// Fringe visibility at the center of the profile.
///
/// Measures `(I_max - I_min)/(I_max + I_min)` locally: over the central three
/// fringes the profile is fitted by a quadratic background plus a carrier of
/// period `fringe_spacing(profile)` with quadratic amplitude, and the ratio of
/// carrier amplitude to background is read off at the centroid. Unlike raw
/// extrema, this is not biased by the imbalance `|ψ₁| ≠ |ψ₂|` a few microns
/// away from the center. Bin averaging of histograms is undone.
pub fn visibility(profile: &IntensityProfile) -> Result<f64> {
    let spacing = fringe_spacing(profile)?;
    visibility_at_spacing(profile, spacing)
}

/// [`visibility`] for a known fringe period (e.g. the geometric one).
pub fn visibility_at_spacing(profile: &IntensityProfile, spacing: f64) -> Result<f64> {
    if !(spacing > 0.0) {
        return Err(Error::Domain(format!("fringe spacing must be positive, got {spacing}")));
    }
    let center = profile.centroid();
    // Coarse histograms need a wider window to constrain nine parameters.
    let half = (1.5 * spacing).max(8.0 * profile.bin_width);
    let k = 2.0 * std::f64::consts::PI / spacing;
    let attenuation = if profile.bin_averaged {
        let arg = 0.5 * k * profile.bin_width;
        arg.sin() / arg
    } else {
        1.0
    };
    const NPAR: usize = 9;
    let mut rows: Vec<([f64; NPAR], f64)> = Vec::new();
    for (&x, &v) in profile.bin_centers.iter().zip(&profile.values) {
        let u = (x - center) / spacing;
        if u.abs() > half / spacing {
            continue;
        }
        let (s, c) = (k * (x - center)).sin_cos();
        let (c, s) = (c * attenuation, s * attenuation);
        let poly = [1.0, u, u * u];
        let mut row = [0.0; NPAR];
        for j in 0..3 {
            row[j] = poly[j];
            row[3 + j] = poly[j] * c;
            row[6 + j] = poly[j] * s;
        }
        rows.push((row, v));
    }
    if rows.len() < NPAR + 2 {
        return Err(Error::NotApplicable(format!(
            "only {} samples in the central three fringes",
            rows.len()
        )));
    }
    let coef = least_squares(&rows)?;
    let background = coef[0];
    if !(background > 0.0) {
        return Err(Error::NotApplicable("non-positive background at the center".into()));
    }
    Ok(coef[3].hypot(coef[6]) / background)
}

fn least_squares<const N: usize>(rows: &[([f64; N], f64)]) -> Result<[f64; N]> {
    let mut a = [[0.0; N]; N];
    let mut b = [0.0; N];
    for (r, y) in rows {
        for i in 0..N {
            b[i] += r[i] * y;
            for j in 0..N {
                a[i][j] += r[i] * r[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty range");
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::NotApplicable("singular fringe fit".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for j in col..N {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for i in (0..N).rev() {
        let s: f64 = (i + 1..N).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Ok(x)
}

/// Distances between two profiles on identical binning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileComparison {
    /// `Σ |a - b| · w`
    pub l1: f64,
    pub max_abs: f64,
    /// Symmetric chi-square `Σ (a - b)² / (a + b) · w`.
    pub chi_square: f64,
}

pub fn compare_profiles(a: &IntensityProfile, b: &IntensityProfile) -> Result<ProfileComparison> {
    if a.len() != b.len() || a.bin_width != b.bin_width {
        return Err(Error::BinningMismatch(format!(
            "{} bins of {:e} m vs {} bins of {:e} m",
            a.len(),
            a.bin_width,
            b.len(),
            b.bin_width
        )));
    }
    let tol = 1e-9 * a.bin_width;
    if a.bin_centers.iter().zip(&b.bin_centers).any(|(x, y)| (x - y).abs() > tol) {
        return Err(Error::BinningMismatch("bin centers differ".into()));
    }
    let w = a.bin_width;
    let mut out = ProfileComparison { l1: 0.0, max_abs: 0.0, chi_square: 0.0 };
    for (&p, &q) in a.values.iter().zip(&b.values) {
        let d = (p - q).abs();
        out.l1 += d * w;
        out.max_abs = out.max_abs.max(d);
        if p + q > 0.0 {
            out.chi_square += d * d / (p + q) * w;
        }
    }
    Ok(out)
}

/// Reads a two-column `position_m intensity` text file (whitespace or comma
/// separated; `#` starts a comment).
pub fn read_reference_profile(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_reference_profile(&text)
}

pub fn parse_reference_profile(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if fields.len() != 2 {
            return Err(Error::Config(format!("line {}: expected two columns", n + 1)));
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))
        };
        out.push((parse(fields[0])?, parse(fields[1])?));
    }
    if out.is_empty() {
        return Err(Error::Config("reference profile is empty".into()));
    }
    Ok(out)
}

/// Rebins reference points onto `like`'s bins by averaging the points that
/// fall in each bin, then normalizes to unit area. Empty bins are zero.
pub fn rebin_reference(points: &[(f64, f64)], like: &IntensityProfile) -> Result<IntensityProfile> {
    let (lo, _) = like.window();
    let mut sums = vec![0.0; like.len()];
    let mut hits = vec![0usize; like.len()];
    for &(x, v) in points {
        let i = ((x - lo) / like.bin_width).floor();
        if i >= 0.0 && (i as usize) < sums.len() {
            sums[i as usize] += v;
            hits[i as usize] += 1;
        }
    }
    let mut values: Vec<f64> =
        sums.iter().zip(&hits).map(|(s, &h)| if h > 0 { s / h as f64 } else { 0.0 }).collect();
    normalize(&mut values, like.bin_width)?;
    Ok(IntensityProfile {
        bin_width: like.bin_width,
        bin_centers: like.bin_centers.clone(),
        values,
        counts: Vec::new(),
        bin_averaged: like.bin_averaged,
    })
}

/// Coherence time that reproduces `lambda` at the end of the flight.
pub fn calibrated_tau(config: &ExperimentConfig, lambda: f64) -> Result<f64> {
    tau_from_visibility(lambda, config.flight_time())
}

/// Picks which slit's packet a position most likely came from.
pub fn nearest_slit(state: &SuperpositionState, x: f64) -> Slit {
    let d1 = (x - state.packet(Slit::One).center0().x).abs();
    let d2 = (x - state.packet(Slit::Two).center0().x).abs();
    if d1 <= d2 {
        Slit::One
    } else {
        Slit::Two
    }
}
