//! Special functions and pointwise electromagnetic coefficients.
//!
//! Everything here uses the `e^{+jωt}` time convention, so a lossy medium has
//! relative permittivity `ε′ − jε″` with `ε″ ≥ 0`, and a decaying wave carries
//! a wavenumber with `Im(k) ≤ 0`.

mod bessel;
mod interface;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use bessel::{bessel_j0, bessel_j1, bessel_y0, bessel_y1, hankel_h0_2, hankel_h1_2};
pub(crate) use bessel::h0_2_unchecked;
pub use interface::{
    reflection_coefficient, refraction_cosines, slab_phase, slab_phase_per_wavenumber,
    transmission_pair, RefractionCosines, TransmissionPair,
};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permeability (H/m), CODATA 2018.
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m), `1/(μ₀c²)`.
pub const EPS_0: f64 = 1.0 / (MU_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
/// Free-space wave impedance `√(μ₀/ε₀) = μ₀c` (Ω).
pub const ETA_0: f64 = MU_0 * SPEED_OF_LIGHT;

/// A non-magnetic medium described by its relative complex permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    eps_rel: Complex64,
}

impl Material {
    /// Free space, `ε = ε₀`.
    pub const AIR: Material = Material {
        eps_rel: Complex64 { re: 1.0, im: 0.0 },
    };

    /// Builds `ε′ − jε″` from the real part and the (non-negative) loss
    /// magnitude.
    pub fn new(eps_re: f64, eps_loss: f64) -> Result<Self> {
        if !(eps_re.is_finite() && eps_re > 0.0) {
            return Err(Error::invalid("eps_re", format!("must be finite and > 0, got {eps_re}")));
        }
        if !(eps_loss.is_finite() && eps_loss >= 0.0) {
            return Err(Error::invalid(
                "eps_im",
                format!("loss magnitude must be finite and >= 0, got {eps_loss}"),
            ));
        }
        Ok(Material {
            eps_rel: Complex64::new(eps_re, -eps_loss),
        })
    }

    pub fn lossless(eps_re: f64) -> Result<Self> {
        Self::new(eps_re, 0.0)
    }

    /// Relative permittivity as stored, i.e. with a non-positive imaginary part.
    pub fn eps_rel(&self) -> Complex64 {
        self.eps_rel
    }

    pub fn eps_re(&self) -> f64 {
        self.eps_rel.re
    }

    /// Loss magnitude `ε″` (non-negative).
    pub fn eps_loss(&self) -> f64 {
        -self.eps_rel.im
    }

    /// Complex refractive index `√ε_r`, principal branch.
    pub fn refractive_index(&self) -> Complex64 {
        csqrt(self.eps_rel)
    }
}

/// A real incidence angle measured from the surface normal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub const NORMAL: Angle = Angle(0.0);

    /// Accepts `0 ≤ θ < π/2`.
    pub fn from_radians(theta: f64) -> Result<Self> {
        if (0.0..FRAC_PI_2).contains(&theta) {
            Ok(Angle(theta))
        } else {
            Err(Error::invalid(
                "angle",
                format!("incidence angle must lie in [0, π/2), got {theta} rad"),
            ))
        }
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::from_radians(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

/// Principal square root with `Re ≥ 0`, computed without the polar round trip
/// so that real non-negative inputs map to exact real roots.
pub fn csqrt(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, z.im);
    }
    let modulus = z.re.hypot(z.im);
    let t = (0.5 * (modulus + z.re.abs())).sqrt();
    if z.re >= 0.0 {
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        Complex64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

/// Free-space wavenumber `2πf/c` (rad/m).
pub fn free_space_wavenumber(freq: f64) -> f64 {
    2.0 * PI * freq / SPEED_OF_LIGHT
}

/// `k = 2πf √(μ₀ε₀ε_r)`, on the branch `Re(k) > 0`, `Im(k) ≤ 0`.
pub fn wavenumber(freq: f64, material: &Material) -> Complex64 {
    free_space_wavenumber(freq) * material.refractive_index()
}

/// Wave impedance `√(μ₀/(ε₀ε_r))` with `Re(η) > 0`.
pub fn impedance(material: &Material) -> Complex64 {
    ETA_0 / material.refractive_index()
}
