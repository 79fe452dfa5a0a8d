//! Reduced quantum trajectories for partially coherent two-slit interference.
//!
//! A two-packet state evolves freely; an environment overlap `α_t` suppresses
//! the interference term of the reduced density matrix, and trajectories
//! follow the velocity field `J̃ / ρ̃` of its diagonal. See the guide in
//! `book/` for a walkthrough.

pub mod cli;
pub mod coherence;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod sampling;
pub mod vec2;
pub mod wavepacket;

pub use coherence::{coherence_degree, tau_from_visibility, CoherenceMode, EnvironmentModel};
pub use density::{CrossWeight, LocalFields, Slit, SuperpositionState};
pub use dynamics::{
    integrate_trajectory, reduced_velocity, run_ensemble, Ensemble, FieldSpec, InitialCondition,
    IntegratorConfig, Trajectory, TrajectoryStatus,
};
pub use error::{Error, Result};
pub use experiment::{
    compare_profiles, derive_state, fringe_spacing, run_scenario, visibility, ExperimentConfig,
    IntensityProfile, Scenario,
};
pub use sampling::{sample_initials, SamplerConfig, SamplingMethod};
pub use vec2::Vec2;
pub use wavepacket::{GaussianPacket, PhysicalConstants};

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/wavepackets.md")]
    mod wavepackets {}
    #[doc = include_str!("../../../book/src/coherence.md")]
    mod coherence {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/trajectories.md")]
    mod trajectories {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/experiment.md")]
    mod experiment {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
