//! Reduced velocity field `ṙ = J̃ / ρ̃` and trajectory integration.
//!
//! Trajectories are advanced with classical RK4 on a fixed base step. A base
//! step is split in halves (recursively, up to `max_refines` levels) when the
//! displacement it would produce relative to the mean packet drift exceeds
//! `step_tolerance`, or when any RK4 stage lands on a density node. The
//! refinement decision depends only on the trajectory's own state, so results
//! do not depend on how an ensemble is scheduled across threads.

use rayon::prelude::*;

use crate::coherence::EnvironmentModel;
use crate::density::{CrossWeight, FrozenState, Slit, SuperpositionState};
use crate::error::{domain, Error, Result};
use crate::vec2::Vec2;
use crate::wavepacket::NODE_FLOOR;

/// Velocity of the reduced quantum trajectory through `(x, z)` at time `t`.
pub fn reduced_velocity(
    state: &SuperpositionState,
    env: &EnvironmentModel,
    x: f64,
    z: f64,
    t: f64,
) -> Result<Vec2> {
    let cross = CrossWeight::new(env, t)?;
    reduced_velocity_frozen(&state.at(t)?, cross, x, z, t, NODE_FLOOR)
}

fn reduced_velocity_frozen(
    frozen: &FrozenState,
    cross: CrossWeight,
    x: f64,
    z: f64,
    t: f64,
    node_floor: f64,
) -> Result<Vec2> {
    let f = frozen.reduced_fields(cross, x, z);
    if !(f.density > node_floor) {
        return Err(Error::Node { x, z, t, density: f.density });
    }
    Ok(f.current * (1.0 / f.density))
}

/// Bohmian velocity of one slit's partial wave, as if the other slit were
/// closed.
pub fn independent_velocity(
    slit: Slit,
    state: &SuperpositionState,
    x: f64,
    z: f64,
    t: f64,
) -> Result<Vec2> {
    independent_velocity_frozen(&state.at(t)?, slit, state, x, z, t, NODE_FLOOR)
}

fn independent_velocity_frozen(
    frozen: &FrozenState,
    slit: Slit,
    state: &SuperpositionState,
    x: f64,
    z: f64,
    t: f64,
    node_floor: f64,
) -> Result<Vec2> {
    let w = state.weight(slit);
    let f = frozen.partial_fields(slit, x, z);
    // Undo the |c_j|² weight so the node test applies to |ψ_j|² itself.
    let density = if w > 0.0 { f.density / w } else { 0.0 };
    if !(density > node_floor) {
        return Err(Error::Node { x, z, t, density });
    }
    Ok(f.current * (1.0 / f.density))
}

/// Which velocity field drives the trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    /// Both slits open; the reduced field of the superposition.
    Reduced,
    /// Slits independently open; each trajectory follows its own slit's wave.
    Independent,
}

/// Starting point of a trajectory and the slit it was drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub position: Vec2,
    pub slit: Slit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Base time step, s.
    pub dt: f64,
    pub t_end: f64,
    /// Maximum number of successive halvings of a base step.
    pub max_refines: u32,
    /// Largest displacement (m), relative to the mean drift, allowed per substep.
    pub step_tolerance: f64,
    /// Density below which the velocity field is undefined.
    pub node_floor: f64,
    /// Record every `record_stride`-th base step (the final point is always kept).
    pub record_stride: usize,
}

impl IntegratorConfig {
    pub const DEFAULT_STEPS: usize = 4000;

    /// Defaults for a flight of duration `t_end`: `dt = t_end / 4000`.
    pub fn for_flight(t_end: f64) -> Result<Self> {
        Self::new(t_end / Self::DEFAULT_STEPS as f64, t_end, 10, 1e-7, NODE_FLOOR, 40)
    }

    pub fn new(
        dt: f64,
        t_end: f64,
        max_refines: u32,
        step_tolerance: f64,
        node_floor: f64,
        record_stride: usize,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return domain(format!("dt must be positive, got {dt}"));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return domain(format!("t_end must be positive, got {t_end}"));
        }
        if !(step_tolerance > 0.0) {
            return domain(format!("step tolerance must be positive, got {step_tolerance}"));
        }
        if !(node_floor >= 0.0) {
            return domain(format!("node floor must be non-negative, got {node_floor}"));
        }
        if record_stride == 0 {
            return domain("record stride must be at least 1");
        }
        Ok(IntegratorConfig { dt, t_end, max_refines, step_tolerance, node_floor, record_stride })
    }

    pub fn with_dt(self, dt: f64) -> Result<Self> {
        Self::new(dt, self.t_end, self.max_refines, self.step_tolerance, self.node_floor, self.record_stride)
    }

    pub fn with_record_stride(self, stride: usize) -> Result<Self> {
        Self::new(self.dt, self.t_end, self.max_refines, self.step_tolerance, self.node_floor, stride)
    }

    /// Number of base steps.
    pub fn steps(&self) -> usize {
        // Tolerate t_end/dt landing a hair above an integer.
        ((self.t_end / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }

    fn time_at(&self, k: usize) -> f64 {
        if k >= self.steps() {
            self.t_end
        } else {
            self.dt * k as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
}

impl Sample {
    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    Completed,
    NodeAbort,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub id: usize,
    pub slit: Slit,
    pub samples: Vec<Sample>,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.status == TrajectoryStatus::Completed
    }

    /// Last recorded position (the position at `t_end` when completed).
    pub fn final_position(&self) -> Vec2 {
        self.samples.last().expect("trajectory has at least the initial sample").position()
    }

    pub fn initial_position(&self) -> Vec2 {
        self.samples[0].position()
    }
}

/// A velocity field bound to one trajectory.
struct Field<'a> {
    state: &'a SuperpositionState,
    env: &'a EnvironmentModel,
    spec: FieldSpec,
    slit: Slit,
    node_floor: f64,
}

impl Field<'_> {
    fn velocity(&self, r: Vec2, t: f64) -> Result<Vec2> {
        let frozen = self.state.at(t)?;
        match self.spec {
            FieldSpec::Reduced => {
                let cross = CrossWeight::new(self.env, t)?;
                reduced_velocity_frozen(&frozen, cross, r.x, r.z, t, self.node_floor)
            }
            FieldSpec::Independent => independent_velocity_frozen(
                &frozen,
                self.slit,
                self.state,
                r.x,
                r.z,
                t,
                self.node_floor,
            ),
        }
    }
}

struct Stepper<'a> {
    field: Field<'a>,
    drift: Vec2,
    tolerance: f64,
    max_refines: u32,
}

impl Stepper<'_> {
    fn advance(&self, r: Vec2, t: f64, h: f64, depth: u32) -> Result<Vec2> {
        let can_split = depth < self.max_refines;
        let k1 = match self.field.velocity(r, t) {
            Ok(v) => v,
            Err(e @ Error::Node { .. }) if !can_split => return Err(e),
            Err(Error::Node { .. }) => return self.split(r, t, h, depth),
            Err(e) => return Err(e),
        };
        if can_split && (k1 - self.drift).norm() * h > self.tolerance {
            return self.split(r, t, h, depth);
        }
        match self.rk4(r, t, h, k1) {
            Ok(next) => Ok(next),
            Err(Error::Node { .. }) if can_split => self.split(r, t, h, depth),
            Err(e) => Err(e),
        }
    }

    fn split(&self, r: Vec2, t: f64, h: f64, depth: u32) -> Result<Vec2> {
        let half = 0.5 * h;
        let mid = self.advance(r, t, half, depth + 1)?;
        self.advance(mid, t + half, half, depth + 1)
    }

    fn rk4(&self, r: Vec2, t: f64, h: f64, k1: Vec2) -> Result<Vec2> {
        let half = 0.5 * h;
        let k2 = self.field.velocity(r + k1 * half, t + half)?;
        let k3 = self.field.velocity(r + k2 * half, t + half)?;
        let k4 = self.field.velocity(r + k3 * h, t + h)?;
        Ok(r + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0))
    }
}

/// Integrates one trajectory from `initial` to `config.t_end`.
pub fn integrate_trajectory(
    id: usize,
    initial: &InitialCondition,
    field: FieldSpec,
    state: &SuperpositionState,
    env: &EnvironmentModel,
    config: &IntegratorConfig,
) -> Trajectory {
    let stepper = Stepper {
        field: Field { state, env, spec: field, slit: initial.slit, node_floor: config.node_floor },
        drift: match field {
            FieldSpec::Reduced => state.mean_velocity(),
            FieldSpec::Independent => state.packet(initial.slit).group_velocity(),
        },
        tolerance: config.step_tolerance,
        max_refines: config.max_refines,
    };

    let steps = config.steps();
    let mut samples = Vec::with_capacity(steps / config.record_stride + 2);
    let mut r = initial.position;
    samples.push(Sample { t: 0.0, x: r.x, z: r.z });
    let mut status = TrajectoryStatus::Completed;

    for k in 0..steps {
        let (t0, t1) = (config.time_at(k), config.time_at(k + 1));
        match stepper.advance(r, t0, t1 - t0, 0) {
            Ok(next) => r = next,
            Err(_) => {
                status = TrajectoryStatus::NodeAbort;
                samples.push(Sample { t: t0, x: r.x, z: r.z });
                break;
            }
        }
        if (k + 1) % config.record_stride == 0 || k + 1 == steps {
            samples.push(Sample { t: t1, x: r.x, z: r.z });
        }
    }
    if status == TrajectoryStatus::NodeAbort && samples.len() >= 2 {
        let n = samples.len();
        if samples[n - 1].t <= samples[n - 2].t {
            samples.remove(n - 1);
        }
    }

    Trajectory { id, slit: initial.slit, samples, status }
}

/// Result of integrating a set of independent trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub trajectories: Vec<Trajectory>,
    pub aborted: usize,
}

impl Ensemble {
    /// Final positions of the completed trajectories, in input order.
    pub fn final_positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.trajectories.iter().filter(|t| t.is_completed()).map(Trajectory::final_position)
    }

    pub fn completed(&self) -> usize {
        self.trajectories.len() - self.aborted
    }
}

/// Integrates every initial condition independently (in parallel on the
/// current rayon pool). Trajectory `i` gets id `i`. Fails when more than 1%
/// of the trajectories abort on a node.
pub fn run_ensemble(
    initials: &[InitialCondition],
    field: FieldSpec,
    state: &SuperpositionState,
    env: &EnvironmentModel,
    config: &IntegratorConfig,
) -> Result<Ensemble> {
    if initials.is_empty() {
        return Err(Error::Precondition("ensemble needs at least one initial condition".into()));
    }
    let trajectories: Vec<Trajectory> = initials
        .par_iter()
        .enumerate()
        .map(|(id, init)| integrate_trajectory(id, init, field, state, env, config))
        .collect();
    let aborted = trajectories.iter().filter(|t| !t.is_completed()).count();
    if aborted * 100 > trajectories.len() {
        return Err(Error::TooManyAborts { aborted, total: trajectories.len() });
    }
    Ok(Ensemble { trajectories, aborted })
}
