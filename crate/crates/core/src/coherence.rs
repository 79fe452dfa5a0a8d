//! Environment model: the overlap `α_t = ⟨E₂|E₁⟩_t` between the environment
//! states attached to each partial wave, and the coherence degree it induces.

use crate::error::{domain, Result};

/// How the environment overlap evolves in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoherenceMode {
    /// `|α_t| = exp(-t/τ_c)`. `τ_c = +∞` is allowed and means no decay.
    Exponential { tau_c: f64 },
    /// Constant overlap in `[0, 1]`.
    Fixed { alpha: f64 },
    /// `α ≡ 1`: the environment never learns which slit was taken.
    Coherent,
    /// `α ≡ 0`: full which-way information from the start.
    Decoherent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentModel {
    mode: CoherenceMode,
    /// Constant phase of `α`, radians. Shifts the fringes rigidly.
    env_phase: f64,
}

impl EnvironmentModel {
    pub fn exponential(tau_c: f64) -> Result<Self> {
        if !(tau_c > 0.0) {
            return domain(format!("coherence time must be positive, got {tau_c}"));
        }
        Ok(Self::from_mode(CoherenceMode::Exponential { tau_c }))
    }

    pub fn fixed(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("fixed overlap must lie in [0, 1], got {alpha}"));
        }
        Ok(Self::from_mode(CoherenceMode::Fixed { alpha }))
    }

    pub fn coherent() -> Self {
        Self::from_mode(CoherenceMode::Coherent)
    }

    pub fn decoherent() -> Self {
        Self::from_mode(CoherenceMode::Decoherent)
    }

    fn from_mode(mode: CoherenceMode) -> Self {
        EnvironmentModel { mode, env_phase: 0.0 }
    }

    pub fn with_phase(mut self, env_phase: f64) -> Self {
        self.env_phase = env_phase;
        self
    }

    pub fn mode(&self) -> CoherenceMode {
        self.mode
    }

    pub fn env_phase(&self) -> f64 {
        self.env_phase
    }

    /// True when `α` varies with time (continuity then picks up a source term).
    pub fn is_time_dependent(&self) -> bool {
        matches!(self.mode, CoherenceMode::Exponential { tau_c } if tau_c.is_finite())
    }

    /// `|α_t|`.
    pub fn alpha(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return domain(format!("time must be non-negative, got {t}"));
        }
        Ok(match self.mode {
            CoherenceMode::Exponential { tau_c } => (-t / tau_c).exp(),
            CoherenceMode::Fixed { alpha } => alpha,
            CoherenceMode::Coherent => 1.0,
            CoherenceMode::Decoherent => 0.0,
        })
    }

    /// `Λ_t` for this environment.
    pub fn coherence_degree_at(&self, t: f64) -> Result<f64> {
        coherence_degree(self.alpha(t)?)
    }
}

/// `Λ = 2α / (1 + α²)`.
pub fn coherence_degree(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return domain(format!("overlap must lie in [0, 1], got {alpha}"));
    }
    Ok(2.0 * alpha / (1.0 + alpha * alpha))
}

/// Coherence time that yields coherence degree `lambda` after a flight of
/// `t_f`: `τ_c = t_f / arcsech(Λ)`. Returns `+∞` for `Λ = 1`.
pub fn tau_from_visibility(lambda: f64, t_f: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return domain(format!("coherence degree must lie in (0, 1], got {lambda}"));
    }
    if !(t_f > 0.0 && t_f.is_finite()) {
        return domain(format!("flight time must be positive, got {t_f}"));
    }
    if lambda == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(t_f / arcsech(lambda))
}

fn arcsech(x: f64) -> f64 {
    ((1.0 + (1.0 - x * x).sqrt()) / x).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exponential_starts_coherent() {
        let env = EnvironmentModel::exponential(2.26e-2).unwrap();
        assert_eq!(env.alpha(0.0).unwrap(), 1.0);
    }

    #[test]
    fn calibration_value() {
        let env = EnvironmentModel::exponential(2.26e-2).unwrap();
        let a = env.alpha(2.33e-2).unwrap();
        assert!((a - 0.356_659_6).abs() < 1e-7);
        assert!((a - 0.36).abs() < 0.01);
    }

    #[test]
    fn fixed_modes() {
        assert_eq!(EnvironmentModel::decoherent().alpha(7.0).unwrap(), 0.0);
        assert_eq!(EnvironmentModel::coherent().alpha(7.0).unwrap(), 1.0);
        assert_eq!(EnvironmentModel::fixed(0.36).unwrap().alpha(7.0).unwrap(), 0.36);
        assert_eq!(EnvironmentModel::exponential(f64::INFINITY).unwrap().alpha(3.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(EnvironmentModel::exponential(0.0).is_err());
        assert!(EnvironmentModel::exponential(-1.0).is_err());
        assert!(EnvironmentModel::fixed(1.5).is_err());
        assert!(EnvironmentModel::fixed(-0.1).is_err());
        assert!(EnvironmentModel::coherent().alpha(-1e-9).is_err());
        assert!(coherence_degree(1.01).is_err());
        assert!(tau_from_visibility(0.0, 1.0).is_err());
        assert!(tau_from_visibility(1.2, 1.0).is_err());
        assert!(tau_from_visibility(0.5, 0.0).is_err());
    }

    #[test]
    fn coherence_degree_endpoints_and_reference_value() {
        assert_eq!(coherence_degree(1.0).unwrap(), 1.0);
        assert_eq!(coherence_degree(0.0).unwrap(), 0.0);
        // 2·0.36/(1 + 0.36²), evaluated with 50-digit arithmetic.
        assert!((coherence_degree(0.36).unwrap() - 0.637_393_767_705_382_4).abs() < 1e-15);
    }

    #[test]
    fn tau_from_measured_visibility() {
        let tau = tau_from_visibility(0.632, 2.33e-2).unwrap();
        assert!((tau / 2.26e-2 - 1.0).abs() < 0.01, "tau {tau}");
        assert!((tau - 0.022_563_340_831_081_17).abs() < 1e-15);
        assert_eq!(tau_from_visibility(1.0, 0.3).unwrap(), f64::INFINITY);
    }

    #[test]
    fn time_dependence_flag() {
        assert!(EnvironmentModel::exponential(1.0).unwrap().is_time_dependent());
        assert!(!EnvironmentModel::exponential(f64::INFINITY).unwrap().is_time_dependent());
        assert!(!EnvironmentModel::fixed(0.2).unwrap().is_time_dependent());
    }

    proptest! {
        #[test]
        fn sech_identity(t in 0.0f64..1.0, tau in 1e-3f64..1.0) {
            let a = EnvironmentModel::exponential(tau).unwrap().alpha(t).unwrap();
            let lhs = coherence_degree(a).unwrap();
            let rhs = 1.0 / (t / tau).cosh();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }

        #[test]
        fn round_trip_through_tau(lambda in 1e-3f64..0.999_999, tf in 1e-4f64..1.0) {
            let tau = tau_from_visibility(lambda, tf).unwrap();
            let env = EnvironmentModel::exponential(tau).unwrap();
            let back = env.coherence_degree_at(tf).unwrap();
            prop_assert!((back - lambda).abs() <= 1e-12);
        }

        #[test]
        fn monotone_in_time(t1 in 0.0f64..1.0, dt in 0.0f64..1.0, tau in 1e-3f64..1.0) {
            let env = EnvironmentModel::exponential(tau).unwrap();
            prop_assert!(env.alpha(t1 + dt).unwrap() <= env.alpha(t1).unwrap());
            prop_assert!(env.coherence_degree_at(t1 + dt).unwrap() <= env.coherence_degree_at(t1).unwrap());
        }

        #[test]
        fn coherence_degree_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(coherence_degree(lo).unwrap() <= coherence_degree(hi).unwrap());
            prop_assert!((0.0..=1.0).contains(&coherence_degree(a).unwrap()));
        }
    }
}
