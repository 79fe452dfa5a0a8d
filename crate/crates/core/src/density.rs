//! Diagonal of the reduced density matrix (the measured intensity) and the
//! reduced probability current, for a two-packet superposition whose
//! partial waves are entangled with environment states of overlap `α`.
//!
//! With `a = c₁ψ₁`, `b = c₂ψ₂` and `B = e^{-iδ'} b`, the intensity
//!
//! ```text
//! ρ̃ = (1 + α²)(|a|² + |b|²) + 4 Re[α e^{iδ'} a b*]
//! ```
//!
//! is evaluated in the equivalent form `(1 - α)²(|a|² + |b|²) + 2α |a + B|²`,
//! which is a sum of non-negative terms and has no cancellation at the
//! interference minima. The current is rearranged the same way.

use num_complex::Complex64;

use crate::coherence::EnvironmentModel;
use crate::error::{domain, Result};
use crate::vec2::Vec2;
use crate::wavepacket::{FrozenPacket, GaussianPacket, LocalAmplitude, PhysicalConstants};

/// Two Gaussian partial waves with complex weights `c₁`, `c₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionState {
    packets: [GaussianPacket; 2],
    coeffs: [Complex64; 2],
    frame: Vec2,
}

/// `ρ̃` and `J̃` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFields {
    pub density: f64,
    pub current: Vec2,
}

impl SuperpositionState {
    pub fn new(
        packet1: GaussianPacket,
        packet2: GaussianPacket,
        c1: Complex64,
        c2: Complex64,
    ) -> Result<Self> {
        let norm = c1.norm_sqr() + c2.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return domain(format!("|c1|² + |c2|² must equal 1, got {norm}"));
        }
        if packet1.constants() != packet2.constants() {
            return domain("both packets must share the same physical constants");
        }
        let frame = (packet1.momentum() + packet2.momentum()) * 0.5;
        Ok(SuperpositionState { packets: [packet1, packet2], coeffs: [c1, c2], frame })
    }

    /// Equal-weight superposition `c₁ = c₂ = 1/√2`.
    pub fn equal_weights(packet1: GaussianPacket, packet2: GaussianPacket) -> Result<Self> {
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(packet1, packet2, c, c)
    }

    pub fn packet(&self, slit: Slit) -> &GaussianPacket {
        &self.packets[slit.index()]
    }

    pub fn packets(&self) -> &[GaussianPacket; 2] {
        &self.packets
    }

    pub fn coefficient(&self, slit: Slit) -> Complex64 {
        self.coeffs[slit.index()]
    }

    /// `|c_j|²`.
    pub fn weight(&self, slit: Slit) -> f64 {
        self.coeffs[slit.index()].norm_sqr()
    }

    pub fn constants(&self) -> &PhysicalConstants {
        self.packets[0].constants()
    }

    /// Momentum of the co-moving reference plane wave used for phases.
    pub fn frame_momentum(&self) -> Vec2 {
        self.frame
    }

    /// Weighted mean group velocity of the two packets.
    pub fn mean_velocity(&self) -> Vec2 {
        self.packets[0].group_velocity() * self.weight(Slit::One)
            + self.packets[1].group_velocity() * self.weight(Slit::Two)
    }

    /// Both packets frozen at time `t` in the co-moving frame.
    pub fn at(&self, t: f64) -> Result<FrozenState> {
        Ok(FrozenState {
            packets: [
                self.packets[0].in_frame(t, self.frame)?,
                self.packets[1].in_frame(t, self.frame)?,
            ],
            coeffs: self.coeffs,
            frame_velocity: self.frame * (1.0 / self.constants().mass),
            hbar_over_m: self.constants().hbar / self.constants().mass,
        })
    }

    /// Measured intensity `ρ̃(x, z, t)`.
    pub fn reduced_intensity(&self, env: &EnvironmentModel, x: f64, z: f64, t: f64) -> Result<f64> {
        let cross = CrossWeight::new(env, t)?;
        Ok(self.at(t)?.reduced_density(cross, x, z))
    }

    /// `|c₁ψ₁ + c₂ψ₂|²`, the intensity without any environment.
    pub fn coherent_intensity(&self, x: f64, z: f64, t: f64) -> Result<f64> {
        Ok(self.at(t)?.coherent_density(x, z))
    }

    /// `|c₁|²|ψ₁|² + |c₂|²|ψ₂|²`, the intensity with full which-way information.
    pub fn classical_intensity(&self, x: f64, z: f64, t: f64) -> Result<f64> {
        Ok(self.at(t)?.classical_density(x, z))
    }

    /// Reduced current `J̃(x, z, t)` in m⁻¹·s⁻¹.
    pub fn reduced_current(&self, env: &EnvironmentModel, x: f64, z: f64, t: f64) -> Result<Vec2> {
        let cross = CrossWeight::new(env, t)?;
        Ok(self.at(t)?.reduced_fields(cross, x, z).current)
    }

    /// `ρ̃` and `J̃` together.
    pub fn reduced_fields(
        &self,
        env: &EnvironmentModel,
        x: f64,
        z: f64,
        t: f64,
    ) -> Result<LocalFields> {
        let cross = CrossWeight::new(env, t)?;
        Ok(self.at(t)?.reduced_fields(cross, x, z))
    }

    /// `∫∫ ρ̃ dx dz` in closed form: `(1 + α²) + 4 Re[α e^{iδ'} c₁c₂* ⟨ψ₂|ψ₁⟩]`.
    pub fn reduced_norm(&self, env: &EnvironmentModel, t: f64) -> Result<f64> {
        let cross = CrossWeight::new(env, t)?;
        let overlap = self.overlap(t)?;
        let w = cross.phase * self.coeffs[0] * self.coeffs[1].conj() * overlap;
        Ok(1.0 + cross.alpha * cross.alpha + 4.0 * cross.alpha * w.re)
    }

    /// `⟨ψ₂|ψ₁⟩_t`. Free evolution is unitary, so this is time independent;
    /// it is computed at `t` anyway so the frame phases match.
    pub fn overlap(&self, t: f64) -> Result<Complex64> {
        let [p1, p2] = &self.packets;
        let (c1, c2) = (p1.center_at(t), p2.center_at(t));
        let mut total = Complex64::new(1.0, 0.0);
        for axis in [Axis::X, Axis::Z] {
            let reference = match axis {
                Axis::X => (0.5 * (c1.x + c2.x), self.frame.x),
                Axis::Z => (0.5 * (c1.z + c2.z), self.frame.z),
            };
            let a = AxisGaussian::of(p1, axis, t, reference)?;
            let b = AxisGaussian::of(p2, axis, t, reference)?;
            total *= a.overlap_with(&b.conj());
        }
        Ok(total)
    }

    /// `∫∫ |ψ₁||ψ₂| dx dz` at `t = 0`, an upper bound on `|⟨ψ₂|ψ₁⟩|` and on the
    /// relative weight of the interference term in the initial density.
    pub fn initial_envelope_overlap(&self) -> f64 {
        let [p1, p2] = &self.packets;
        let axis = |s1: f64, s2: f64, d: f64| {
            let v = s1 * s1 + s2 * s2;
            (2.0 * s1 * s2 / v).sqrt() * (-d * d / (4.0 * v)).exp()
        };
        let (c1, c2) = (p1.center0(), p2.center0());
        let (w1, w2) = (p1.width0(), p2.width0());
        axis(w1.x, w2.x, c1.x - c2.x) * axis(w1.z, w2.z, c1.z - c2.z)
    }
}

/// Slit label for a partial wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slit {
    One,
    Two,
}

impl Slit {
    pub fn index(self) -> usize {
        match self {
            Slit::One => 0,
            Slit::Two => 1,
        }
    }

    pub fn other(self) -> Slit {
        match self {
            Slit::One => Slit::Two,
            Slit::Two => Slit::One,
        }
    }
}

/// `α` and `e^{iδ'}` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossWeight {
    pub alpha: f64,
    pub phase: Complex64,
}

impl CrossWeight {
    pub fn new(env: &EnvironmentModel, t: f64) -> Result<Self> {
        Ok(CrossWeight { alpha: env.alpha(t)?, phase: Complex64::from_polar(1.0, env.env_phase()) })
    }

    pub fn with_alpha(alpha: f64) -> Self {
        CrossWeight { alpha, phase: Complex64::new(1.0, 0.0) }
    }
}

/// A superposition with its time dependence frozen at one instant.
#[derive(Debug, Clone, Copy)]
pub struct FrozenState {
    packets: [FrozenPacket; 2],
    coeffs: [Complex64; 2],
    frame_velocity: Vec2,
    hbar_over_m: f64,
}

impl FrozenState {
    /// Weighted partial amplitudes `c_j ψ_j` (frame-relative) and their
    /// gradients.
    #[inline]
    fn weighted(&self, x: f64, z: f64) -> [(Complex64, [Complex64; 2]); 2] {
        let w = |j: usize| {
            let LocalAmplitude { value, dlog } = self.packets[j].local(x, z);
            let a = self.coeffs[j] * value;
            (a, [a * dlog[0], a * dlog[1]])
        };
        [w(0), w(1)]
    }

    pub fn reduced_density(&self, cross: CrossWeight, x: f64, z: f64) -> f64 {
        let [(a, _), (b, _)] = self.weighted(x, z);
        let alpha = cross.alpha;
        let big_b = b * cross.phase.conj();
        let incoherent = a.norm_sqr() + b.norm_sqr();
        (1.0 - alpha) * (1.0 - alpha) * incoherent + 2.0 * alpha * (a + big_b).norm_sqr()
    }

    pub fn coherent_density(&self, x: f64, z: f64) -> f64 {
        let [(a, _), (b, _)] = self.weighted(x, z);
        (a + b).norm_sqr()
    }

    pub fn classical_density(&self, x: f64, z: f64) -> f64 {
        let [(a, _), (b, _)] = self.weighted(x, z);
        a.norm_sqr() + b.norm_sqr()
    }

    /// Density `|c_j|²|ψ_j|²` of one weighted partial wave.
    pub fn partial_density(&self, slit: Slit, x: f64, z: f64) -> f64 {
        let j = slit.index();
        (self.coeffs[j] * self.packets[j].value(x, z)).norm_sqr()
    }

    pub fn reduced_fields(&self, cross: CrossWeight, x: f64, z: f64) -> LocalFields {
        let [(a, ga), (b, gb)] = self.weighted(x, z);
        let alpha = cross.alpha;
        let rot = cross.phase.conj();
        let big_b = b * rot;
        let s = a + big_b;
        let gs = [ga[0] + gb[0] * rot, ga[1] + gb[1] * rot];
        let damp = (1.0 - alpha) * (1.0 - alpha);

        let density = damp * (a.norm_sqr() + b.norm_sqr()) + 2.0 * alpha * s.norm_sqr();
        let flux = |k: usize| {
            damp * (a.conj() * ga[k] + b.conj() * gb[k]).im + 2.0 * alpha * (s.conj() * gs[k]).im
        };
        let current =
            Vec2::new(flux(0), flux(1)) * self.hbar_over_m + self.frame_velocity * density;
        LocalFields { density, current }
    }

    /// Current and density of one weighted partial wave alone.
    pub fn partial_fields(&self, slit: Slit, x: f64, z: f64) -> LocalFields {
        let j = slit.index();
        let LocalAmplitude { value, dlog } = self.packets[j].local(x, z);
        let density = (self.coeffs[j] * value).norm_sqr();
        let current = Vec2::new(dlog[0].im, dlog[1].im) * (self.hbar_over_m * density)
            + self.frame_velocity * density;
        LocalFields { density, current }
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    X,
    Z,
}

/// `N exp(-A u² + B u + C)` representation of one axis factor.
#[derive(Debug, Clone, Copy)]
struct AxisGaussian {
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl AxisGaussian {
    /// One axis factor in the shifted variable `v = u - u_ref`, with the
    /// carrier `e^{i k_ref u}` removed. The omitted factor is common to both
    /// packets, so it cancels in `ψ₁ ψ₂*`.
    fn of(p: &GaussianPacket, axis: Axis, t: f64, reference: (f64, f64)) -> Result<Self> {
        let k = p.constants();
        let (u0, mom, sigma) = match axis {
            Axis::X => (p.center0().x, p.momentum().x, p.width0().x),
            Axis::Z => (p.center0().z, p.momentum().z, p.width0().z),
        };
        let (u_ref, p_ref) = reference;
        let s = crate::wavepacket::complex_width(sigma, t, k)?;
        let vc = u0 + mom * t / k.mass - u_ref;
        let a = 1.0 / (4.0 * sigma * s);
        let dk = (mom - p_ref) / k.hbar;
        let b = 2.0 * vc * a + Complex64::new(0.0, dk);
        let norm = Complex64::new(-0.25 * (2.0 * std::f64::consts::PI * sigma * sigma).ln(), 0.0)
            - 0.5 * (s / sigma).ln()
            + Complex64::new(0.0, dk * u_ref - (mom - p_ref) * (mom + p_ref) * t / (2.0 * k.mass * k.hbar));
        let c = norm - vc * vc * a;
        Ok(AxisGaussian { a, b, c })
    }

    fn conj(&self) -> Self {
        AxisGaussian { a: self.a.conj(), b: self.b.conj(), c: self.c.conj() }
    }

    /// `∫ self · other du`.
    fn overlap_with(&self, other: &AxisGaussian) -> Complex64 {
        let a = self.a + other.a;
        let b = self.b + other.b;
        let c = self.c + other.c;
        (std::f64::consts::PI / a).sqrt() * (b * b / (4.0 * a) + c).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::PhysicalConstants;

    fn symmetric_state() -> SuperpositionState {
        let c = PhysicalConstants::neutron();
        let a = 22e-6;
        let sep = 126e-6;
        let p = c.hbar / a;
        let pz = 3.5e-25;
        let w = Vec2::new(a / 4.0, 44e-6);
        let p1 = GaussianPacket::new(Vec2::new(-sep / 2.0, 0.0), Vec2::new(-p, pz), w, c).unwrap();
        let p2 = GaussianPacket::new(Vec2::new(sep / 2.0, 0.0), Vec2::new(p, pz), w, c).unwrap();
        SuperpositionState::equal_weights(p1, p2).unwrap()
    }

    #[test]
    fn rejects_unnormalized_coefficients() {
        let s = symmetric_state();
        let [p1, p2] = *s.packets();
        let c = Complex64::new(0.8, 0.0);
        assert!(SuperpositionState::new(p1, p2, c, c).is_err());
    }

    #[test]
    fn coherent_limit_is_twice_the_pure_state_intensity() {
        let s = symmetric_state();
        let env = EnvironmentModel::coherent();
        let t = 1e-2;
        for i in 0..200 {
            let x = -300e-6 + 3e-6 * i as f64;
            let z = s.mean_velocity().z * t;
            let red = s.reduced_intensity(&env, x, z, t).unwrap();
            let coh = s.coherent_intensity(x, z, t).unwrap();
            assert!((red - 2.0 * coh).abs() <= 1e-12 * red.max(1e-300));
        }
    }

    #[test]
    fn decoherent_limit_is_classical_sum() {
        let s = symmetric_state();
        let env = EnvironmentModel::decoherent();
        let t = 1e-2;
        for i in 0..200 {
            let x = -300e-6 + 3e-6 * i as f64;
            let z = s.mean_velocity().z * t + 10e-6;
            let red = s.reduced_intensity(&env, x, z, t).unwrap();
            let cl = s.classical_intensity(x, z, t).unwrap();
            assert!((red - cl).abs() <= 1e-12 * cl);
        }
    }

    #[test]
    fn expanded_and_factored_forms_agree() {
        let s = symmetric_state();
        let t = 7e-3;
        let frozen = s.at(t).unwrap();
        let env = EnvironmentModel::fixed(0.36).unwrap().with_phase(0.7);
        let cross = CrossWeight::new(&env, t).unwrap();
        for i in 0..50 {
            let x = -200e-6 + 8e-6 * i as f64;
            let z = s.mean_velocity().z * t;
            let [(a, _), (b, _)] = frozen.weighted(x, z);
            let expanded = (1.0 + 0.36 * 0.36) * (a.norm_sqr() + b.norm_sqr())
                + 4.0 * (0.36 * cross.phase * a * b.conj()).re;
            let factored = frozen.reduced_density(cross, x, z);
            assert!((expanded - factored).abs() <= 1e-9 * factored);
        }
    }

    #[test]
    fn single_packet_current_is_density_times_bohmian_velocity() {
        let s = symmetric_state();
        let [p1, p2] = *s.packets();
        let one = SuperpositionState::new(p1, p2, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            .unwrap();
        let env = EnvironmentModel::fixed(0.5).unwrap();
        let t = 4e-3;
        let c = p1.center_at(t);
        for dx in [-30e-6, -5e-6, 0.0, 12e-6] {
            let f = one.reduced_fields(&env, c.x + dx, c.z + 3e-6, t).unwrap();
            let v = p1.bohmian_velocity(c.x + dx, c.z + 3e-6, t).unwrap();
            let rho1 = p1.density(c.x + dx, c.z + 3e-6, t).unwrap();
            // (1 + α²)|ψ₁|² with α = 0.5
            assert!((f.density / (1.25 * rho1) - 1.0).abs() < 1e-12);
            assert!((f.current.x / f.density - v.x).abs() < 1e-12 * v.norm());
            assert!((f.current.z / f.density - v.z).abs() < 1e-12 * v.norm());
        }
    }

    #[test]
    fn decoherent_current_is_sum_of_partial_currents() {
        let s = symmetric_state();
        let env = EnvironmentModel::decoherent();
        let t = 1.2e-2;
        let frozen = s.at(t).unwrap();
        for i in 0..40 {
            let x = -250e-6 + 12.5e-6 * i as f64;
            let z = s.mean_velocity().z * t;
            let f = frozen.reduced_fields(CrossWeight::new(&env, t).unwrap(), x, z);
            let mut expected = Vec2::ZERO;
            for slit in [Slit::One, Slit::Two] {
                let p = s.packet(slit);
                let rho = p.density(x, z, t).unwrap();
                expected += p.bohmian_velocity(x, z, t).unwrap() * (s.weight(slit) * rho);
            }
            assert!((f.current.x - expected.x).abs() <= 1e-10 * expected.norm());
            assert!((f.current.z - expected.z).abs() <= 1e-12 * expected.norm());
        }
    }

    #[test]
    fn envelope_overlap_matches_quadrature() {
        let s = symmetric_state();
        // Trapezoid rule on |ψ₁||ψ₂| over x; z factors are identical so their
        // overlap is 1.
        let p = s.packets();
        let n = 200_000;
        let (lo, hi) = (-200e-6, 200e-6);
        let h = (hi - lo) / n as f64;
        let amp = |pk: &GaussianPacket, x: f64| {
            let sx = pk.width0().x;
            (2.0 * std::f64::consts::PI * sx * sx).powf(-0.25)
                * (-(x - pk.center0().x).powi(2) / (4.0 * sx * sx)).exp()
        };
        let sum: f64 = (0..=n)
            .map(|i| {
                let x = lo + h * i as f64;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * amp(&p[0], x) * amp(&p[1], x)
            })
            .sum::<f64>()
            * h;
        let closed = s.initial_envelope_overlap();
        assert!((closed - sum).abs() <= 1e-6 * closed.max(1e-300), "{closed} vs {sum}");
    }

    #[test]
    fn closed_form_overlap_matches_initial_envelope_bound() {
        let s = symmetric_state();
        let ov = s.overlap(0.0).unwrap().norm();
        assert!(ov <= s.initial_envelope_overlap() * (1.0 + 1e-9));
        let later = s.overlap(2e-2).unwrap().norm();
        assert!((ov - later).abs() <= 1e-9 * ov.max(1e-300));
    }
}
