//! Initial positions distributed as the initial density `|Ψ(r, 0)|²`.
//!
//! Random draws use a counter-based generator: sample `i` gets its own
//! ChaCha8 stream keyed by `(seed, i)`, so the sample list is identical no
//! matter how the indices are partitioned across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::density::{Slit, SuperpositionState};
use crate::dynamics::InitialCondition;
use crate::error::{domain, Error, Result};
use crate::vec2::Vec2;

/// Largest initial envelope overlap for which the two-component mixture is
/// treated as the exact initial density.
pub const MIXTURE_OVERLAP_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMethod {
    /// Pick slit `j` with probability `|c_j|²`, then draw from its Gaussian.
    Random,
    /// Exact draws from `|Ψ|²` by rejection from the mixture. Valid for any
    /// overlap.
    Rejection,
    /// Deterministic equal-probability x-quantiles of each slit at `z = z₀`.
    QuantileGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub n: usize,
    pub seed: u64,
    pub method: SamplingMethod,
}

impl SamplerConfig {
    pub fn new(n: usize, seed: u64, method: SamplingMethod) -> Result<Self> {
        if n == 0 {
            return domain("sample count must be positive");
        }
        Ok(SamplerConfig { n, seed, method })
    }
}

/// The generator for sample `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_initials(
    state: &SuperpositionState,
    sampler: &SamplerConfig,
) -> Result<Vec<InitialCondition>> {
    if sampler.n == 0 {
        return domain("sample count must be positive");
    }
    let overlap = state.initial_envelope_overlap();
    if sampler.method != SamplingMethod::Rejection && overlap >= MIXTURE_OVERLAP_LIMIT {
        return Err(Error::Precondition(format!(
            "initial packet overlap {overlap:e} is not negligible; use rejection sampling"
        )));
    }
    match sampler.method {
        SamplingMethod::Random => Ok((0..sampler.n as u64)
            .into_par_iter()
            .map(|i| mixture_draw(state, &mut stream_rng(sampler.seed, i)))
            .collect()),
        SamplingMethod::Rejection => (0..sampler.n as u64)
            .into_par_iter()
            .map(|i| rejection_draw(state, &mut stream_rng(sampler.seed, i)))
            .collect(),
        SamplingMethod::QuantileGrid => Ok(quantile_grid(state, sampler.n)),
    }
}

fn mixture_draw<R: Rng>(state: &SuperpositionState, rng: &mut R) -> InitialCondition {
    let u: f64 = rng.random();
    let slit = if u < state.weight(Slit::One) { Slit::One } else { Slit::Two };
    let p = state.packet(slit);
    let (c, w) = (p.center0(), p.width0());
    let gx: f64 = StandardNormal.sample(rng);
    let gz: f64 = StandardNormal.sample(rng);
    InitialCondition { position: Vec2::new(c.x + w.x * gx, c.z + w.z * gz), slit }
}

/// `|Ψ|² ≤ 2 (|c₁ψ₁|² + |c₂ψ₂|²)`, so accepting a mixture draw with
/// probability `|Ψ|² / (2 × mixture)` yields exact samples of `|Ψ|²`.
fn rejection_draw<R: Rng>(state: &SuperpositionState, rng: &mut R) -> Result<InitialCondition> {
    let frozen = state.at(0.0)?;
    for _ in 0..10_000 {
        let cand = mixture_draw(state, rng);
        let (x, z) = (cand.position.x, cand.position.z);
        let mixture = frozen.classical_density(x, z);
        let target = frozen.coherent_density(x, z);
        let u: f64 = rng.random();
        if u * 2.0 * mixture <= target {
            return Ok(cand);
        }
    }
    Err(Error::Precondition("rejection sampling failed to accept a draw".into()))
}

fn quantile_grid(state: &SuperpositionState, n: usize) -> Vec<InitialCondition> {
    let n1 = (n as f64 * state.weight(Slit::One)).round() as usize;
    let n1 = n1.min(n);
    let mut out = Vec::with_capacity(n);
    for (slit, count) in [(Slit::One, n1), (Slit::Two, n - n1)] {
        let p = state.packet(slit);
        let (c, w) = (p.center0(), p.width0());
        let normal = Normal::new(c.x, w.x).expect("positive width");
        out.extend((0..count).map(|i| InitialCondition {
            position: Vec2::new(normal.inverse_cdf((i as f64 + 0.5) / count as f64), c.z),
            slit,
        }));
    }
    out
}
