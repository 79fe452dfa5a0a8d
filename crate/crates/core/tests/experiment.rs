use redtraj::experiment::{
    analytic_profile, compare_profiles, derive_state, fringe_spacing, geometric_fringe_spacing,
    run_scenario, visibility, AnalyticIntensity, ExperimentConfig, Scenario, FINE_SPACING,
};
use redtraj::{EnvironmentModel, Error, SamplingMethod};

fn fine(cfg: &ExperimentConfig, intensity: AnalyticIntensity) -> redtraj::IntensityProfile {
    let state = derive_state(cfg).unwrap();
    analytic_profile(&state, intensity, cfg.flight_time(), cfg.detector_window, FINE_SPACING, false).unwrap()
}

#[test]
fn coherent_profile_spacing_and_visibility() {
    let cfg = ExperimentConfig::zeilinger();
    let p = fine(&cfg, AnalyticIntensity::Reduced(EnvironmentModel::coherent()));
    let oracle = 18.45e-10 * 5.0 / 126.3e-6;
    assert!((geometric_fringe_spacing(&cfg) - oracle).abs() < 1e-15);
    let s = fringe_spacing(&p).unwrap();
    assert!((s / oracle - 1.0).abs() <= 0.05, "spacing {s:e}");
    let v = visibility(&p).unwrap();
    assert!((v - 1.0).abs() <= 0.02, "visibility {v}");
}

#[test]
fn partial_profile_visibility() {
    let cfg = ExperimentConfig::zeilinger();
    let p = fine(&cfg, AnalyticIntensity::Reduced(cfg.coherence));
    let v = visibility(&p).unwrap();
    assert!((v - 0.632).abs() <= 0.015, "visibility {v}");
}

#[test]
fn decoherent_profile_has_no_fringes() {
    let cfg = ExperimentConfig::zeilinger();
    let p = fine(&cfg, AnalyticIntensity::Reduced(EnvironmentModel::decoherent()));
    assert!(matches!(visibility(&p), Err(Error::NotApplicable(_))));
    assert!(matches!(fringe_spacing(&p), Err(Error::NotApplicable(_))));
    let v = redtraj::experiment::visibility_at_spacing(&p, geometric_fringe_spacing(&cfg)).unwrap();
    assert!(v <= 0.02, "{v}");
}

#[test]
fn decoherent_and_independent_analytic_profiles_coincide() {
    let cfg = ExperimentConfig::zeilinger();
    let state = derive_state(&cfg).unwrap();
    let t = cfg.flight_time();
    let zc = state.packets()[0].center_at(t).z;
    let dec = EnvironmentModel::decoherent();
    for i in -500..=500 {
        let x = i as f64 * 1e-6;
        let a = state.reduced_intensity(&dec, x, zc, t).unwrap();
        let b = state.classical_intensity(x, zc, t).unwrap();
        assert!((a - b).abs() <= 1e-12 * b);
    }
    let pa = fine(&cfg, AnalyticIntensity::Reduced(dec));
    let pb = fine(&cfg, AnalyticIntensity::Classical);
    for (a, b) in pa.values.iter().zip(&pb.values) {
        assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }
}

#[test]
fn coherent_and_decoherent_patterns_differ_strongly() {
    let cfg = ExperimentConfig::zeilinger();
    let state = derive_state(&cfg).unwrap();
    let t = cfg.flight_time();
    let mk = |env| analytic_profile(&state, AnalyticIntensity::Reduced(env), t, cfg.detector_window, cfg.bin_width, true).unwrap();
    let c = mk(EnvironmentModel::coherent());
    let d = mk(EnvironmentModel::decoherent());
    let cmp = compare_profiles(&c, &d).unwrap();
    assert!(cmp.l1 > 0.3, "L1 {}", cmp.l1);
    let area: f64 = c.values.iter().sum::<f64>() * c.bin_width;
    assert!((area - 1.0).abs() <= 1e-9);
    assert!(c.values.iter().all(|&v| v >= 0.0));
}

#[test]
fn envelope_containment() {
    let mut cfg = ExperimentConfig::zeilinger();
    cfg.n_traj = 400;
    cfg.sampling = SamplingMethod::Random;
    cfg.seed = 17;
    let run = run_scenario(&cfg, Scenario::Coherent).unwrap();
    let inside = run.completed - run.outside_window;
    assert!(inside * 100 >= 98 * run.completed, "{inside} of {}", run.completed);
    assert_eq!(run.histogram.total_count() as usize, inside);
}
