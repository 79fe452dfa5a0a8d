#![allow(dead_code)]

use redtraj::experiment::{derive_state, ExperimentConfig};
use redtraj::SuperpositionState;

/// Zeilinger geometry with both slits 22.2 μm wide.
pub fn symmetric_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::zeilinger();
    cfg.a1 = 22.2e-6;
    cfg.a2 = 22.2e-6;
    cfg
}

pub fn zeilinger_state() -> SuperpositionState {
    derive_state(&ExperimentConfig::zeilinger()).unwrap()
}

pub fn symmetric_state() -> SuperpositionState {
    derive_state(&symmetric_config()).unwrap()
}

/// 5-point Gauss–Legendre nodes and weights on [-1, 1].
pub const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Composite 5-point Gauss–Legendre rule: (nodes, weights) over [lo, hi].
pub fn gl_grid(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(5 * panels);
    for p in 0..panels {
        let mid = lo + h * (p as f64 + 0.5);
        for &(u, w) in &GL5 {
            out.push((mid + 0.5 * h * u, 0.5 * h * w));
        }
    }
    out
}

/// `∫∫ f(x, z) dx dz` on a product grid.
pub fn integrate_2d(xs: &[(f64, f64)], zs: &[(f64, f64)], f: impl Fn(f64, f64) -> f64) -> f64 {
    xs.iter().map(|&(x, wx)| wx * zs.iter().map(|&(z, wz)| wz * f(x, z)).sum::<f64>()).sum()
}
