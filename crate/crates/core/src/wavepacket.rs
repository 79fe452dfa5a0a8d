//! Freely propagating two-dimensional Gaussian wave packets.
//!
//! Each packet is a separable product of two one-dimensional Gaussians,
//!
//! ```text
//! ψ(x, z, 0) = (2π σx σz)^(-1/2) · exp[-(x-x0)²/4σx² + i px x/ħ]
//!                                · exp[-(z-z0)²/4σz² + i pz z/ħ]
//! ```
//!
//! and is evolved in closed form through the complex width
//! `s_t = σ (1 + i ħ t / 2 m σ²)`. No grid is involved, so values, gradients
//! and Bohmian velocities are exact up to floating point.
//!
//! Carrier phases `p·r/ħ` become very large at detector distances (about
//! 10¹⁰ rad for cold neutrons at 5 m), so bilinear quantities between two
//! packets are computed in a co-moving frame: every packet is evaluated
//! relative to a shared plane wave `exp(i p̄·r/ħ - i p̄² t / 2mħ)` and only
//! the small momentum differences enter the phases. See [`FrozenPacket`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::vec2::Vec2;

/// Complex amplitude density of a wave packet (units m⁻¹ in the plane).
pub type ComplexAmplitude = Complex64;

/// Densities `|ψ|²` below this value (m⁻²) are treated as nodes.
pub const NODE_FLOOR: f64 = 1e-30;

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Neutron mass, kg (CODATA 2018).
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return domain(format!("hbar must be positive and finite, got {hbar}"));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return domain(format!("mass must be positive and finite, got {mass}"));
        }
        Ok(PhysicalConstants { hbar, mass })
    }

    pub fn neutron() -> Self {
        PhysicalConstants { hbar: HBAR, mass: NEUTRON_MASS }
    }

    /// Dimensionless spreading parameter `ħ t / (2 m σ0²)`.
    pub fn spreading_parameter(&self, sigma0: f64, t: f64) -> f64 {
        self.hbar * t / (2.0 * self.mass * sigma0 * sigma0)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::neutron()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        domain(format!("time must be finite and non-negative, got {t}"))
    }
}

/// Complex width `s_t = σ0 (1 + i ħ t / 2 m σ0²)` of a free Gaussian.
///
/// The modulus `|s_t| = σ0 √(1 + (ħt/2mσ0²)²)` is the standard deviation
/// of `|ψ|²` along that axis at time `t`.
pub fn complex_width(sigma0: f64, t: f64, constants: &PhysicalConstants) -> Result<Complex64> {
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return domain(format!("width must be positive, got {sigma0}"));
    }
    check_time(t)?;
    Ok(Complex64::new(sigma0, sigma0 * constants.spreading_parameter(sigma0, t)))
}

/// `σ_t / σ0` for a free Gaussian of initial width `sigma0`.
pub fn spreading_ratio(sigma0: f64, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    Ok(complex_width(sigma0, t, constants)?.norm() / sigma0)
}

/// A two-dimensional Gaussian partial wave (one per slit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    center0: Vec2,
    momentum: Vec2,
    width0: Vec2,
    constants: PhysicalConstants,
}

impl GaussianPacket {
    pub fn new(
        center0: Vec2,
        momentum: Vec2,
        width0: Vec2,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        if !(width0.x > 0.0 && width0.z > 0.0 && width0.is_finite()) {
            return domain(format!("packet widths must be positive, got {width0:?}"));
        }
        if !center0.is_finite() || !momentum.is_finite() {
            return domain("packet center and momentum must be finite");
        }
        Ok(GaussianPacket { center0, momentum, width0, constants })
    }

    pub fn center0(&self) -> Vec2 {
        self.center0
    }

    pub fn momentum(&self) -> Vec2 {
        self.momentum
    }

    pub fn width0(&self) -> Vec2 {
        self.width0
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Group velocity `p / m`.
    pub fn group_velocity(&self) -> Vec2 {
        self.momentum * (1.0 / self.constants.mass)
    }

    /// Center of `|ψ|²` at time `t`.
    pub fn center_at(&self, t: f64) -> Vec2 {
        self.center0 + self.group_velocity() * t
    }

    /// Standard deviation of `|ψ|²` along each axis at time `t`.
    pub fn width_at(&self, t: f64) -> Result<Vec2> {
        Ok(Vec2::new(
            complex_width(self.width0.x, t, &self.constants)?.norm(),
            complex_width(self.width0.z, t, &self.constants)?.norm(),
        ))
    }

    /// Freezes the time dependence at `t`, in the lab frame.
    pub fn at(&self, t: f64) -> Result<FrozenPacket> {
        self.in_frame(t, Vec2::ZERO)
    }

    /// Freezes the time dependence at `t`, with phases measured relative to
    /// the plane wave of momentum `frame`.
    pub fn in_frame(&self, t: f64, frame: Vec2) -> Result<FrozenPacket> {
        check_time(t)?;
        let c = &self.constants;
        Ok(FrozenPacket {
            x: AxisFactor::new(self.center0.x, self.momentum.x, self.width0.x, frame.x, t, c),
            z: AxisFactor::new(self.center0.z, self.momentum.z, self.width0.z, frame.z, t, c),
        })
    }

    pub fn evaluate(&self, x: f64, z: f64, t: f64) -> Result<ComplexAmplitude> {
        Ok(self.at(t)?.local(x, z).value)
    }

    /// Analytic `(∂ψ/∂x, ∂ψ/∂z)`.
    pub fn gradient(&self, x: f64, z: f64, t: f64) -> Result<(ComplexAmplitude, ComplexAmplitude)> {
        let g = self.at(t)?.local(x, z).gradient();
        Ok((g[0], g[1]))
    }

    /// `|ψ|²` in m⁻².
    pub fn density(&self, x: f64, z: f64, t: f64) -> Result<f64> {
        Ok(self.at(t)?.local(x, z).value.norm_sqr())
    }

    /// Polar decomposition `ψ = R e^{iS/ħ}`.
    ///
    /// `S` is the analytic phase of the closed form, continuous in `(x, z, t)`,
    /// so no branch unwrapping is needed along a trajectory.
    pub fn polar(&self, x: f64, z: f64, t: f64) -> Result<(f64, f64)> {
        let frozen = self.at(t)?;
        let log = frozen.x.log_amplitude(x) + frozen.z.log_amplitude(z);
        let r = log.re.exp();
        if r * r < NODE_FLOOR {
            return Err(Error::Node { x, z, t, density: r * r });
        }
        Ok((r, self.constants.hbar * log.im))
    }

    /// Bohmian velocity `(ħ/m) Im[∇ψ/ψ]` of this packet alone.
    pub fn bohmian_velocity(&self, x: f64, z: f64, t: f64) -> Result<Vec2> {
        let local = self.at(t)?.local(x, z);
        let density = local.value.norm_sqr();
        if density < NODE_FLOOR {
            return Err(Error::Node { x, z, t, density });
        }
        let k = self.constants.hbar / self.constants.mass;
        Ok(Vec2::new(k * local.dlog[0].im, k * local.dlog[1].im))
    }
}

/// One Gaussian axis factor with its time dependence evaluated.
#[derive(Debug, Clone, Copy)]
struct AxisFactor {
    center: f64,
    /// `1 / (4 σ0 s_t)`
    inv_width: Complex64,
    /// `-¼ ln(2πσ0²) - ½ ln(1 + iτ)` plus the time-dependent carrier phase.
    offset: Complex64,
    /// Wavenumber relative to the frame, `(p - p̄)/ħ`.
    wavenumber: f64,
}

impl AxisFactor {
    fn new(u0: f64, p: f64, sigma: f64, frame_p: f64, t: f64, c: &PhysicalConstants) -> Self {
        let tau = c.spreading_parameter(sigma, t);
        let one_plus = Complex64::new(1.0, tau);
        let inv_width = 1.0 / (4.0 * sigma * sigma * one_plus);
        let carrier = -(p - frame_p) * (p + frame_p) * t / (2.0 * c.mass * c.hbar);
        let offset = Complex64::new(-0.25 * (2.0 * PI * sigma * sigma).ln(), carrier)
            - 0.5 * one_plus.ln();
        AxisFactor {
            center: u0 + p * t / c.mass,
            inv_width,
            offset,
            wavenumber: (p - frame_p) / c.hbar,
        }
    }

    #[inline]
    fn log_amplitude(&self, u: f64) -> Complex64 {
        let du = u - self.center;
        self.offset - du * du * self.inv_width + Complex64::new(0.0, self.wavenumber * u)
    }

    #[inline]
    fn dlog(&self, u: f64) -> Complex64 {
        -2.0 * (u - self.center) * self.inv_width + Complex64::new(0.0, self.wavenumber)
    }
}

/// A packet with its time dependence evaluated at a fixed instant and frame.
///
/// Construct one through [`GaussianPacket::at`] or [`GaussianPacket::in_frame`]
/// when many points are evaluated at the same time.
#[derive(Debug, Clone, Copy)]
pub struct FrozenPacket {
    x: AxisFactor,
    z: AxisFactor,
}

/// Amplitude and logarithmic derivative `∇ψ/ψ` at one point.
#[derive(Debug, Clone, Copy)]
pub struct LocalAmplitude {
    pub value: ComplexAmplitude,
    pub dlog: [Complex64; 2],
}

impl LocalAmplitude {
    pub fn gradient(&self) -> [Complex64; 2] {
        [self.value * self.dlog[0], self.value * self.dlog[1]]
    }
}

impl FrozenPacket {
    #[inline]
    pub fn local(&self, x: f64, z: f64) -> LocalAmplitude {
        let log = self.x.log_amplitude(x) + self.z.log_amplitude(z);
        LocalAmplitude { value: log.exp(), dlog: [self.x.dlog(x), self.z.dlog(z)] }
    }

    pub fn value(&self, x: f64, z: f64) -> ComplexAmplitude {
        (self.x.log_amplitude(x) + self.z.log_amplitude(z)).exp()
    }
}
