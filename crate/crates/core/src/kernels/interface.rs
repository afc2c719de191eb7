//! Interface coefficients for a planar boundary between free space (or a
//! general outer medium) and a lossy dielectric.
//!
//! The refraction angle is never materialized: for complex permittivity the
//! arcsine form of Snell's law has no real meaning, and every formula below
//! only needs `cos θ₂ = √(1 − (ε_outer/ε_inner) sin²θ₁)` on the `Re ≥ 0`
//! branch.

use num_complex::Complex64;

use super::{csqrt, free_space_wavenumber, impedance, Angle, Material};

/// Cosines on both sides of an interface for a given incidence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractionCosines {
    /// `cos θ₁` in the outer medium.
    pub outer: f64,
    /// `cos θ₂` in the inner medium, `Re ≥ 0`.
    pub inner: Complex64,
}

/// Transmission into the inner medium and back out again.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionPair {
    /// Outer → inner coefficient.
    pub into: Complex64,
    /// Inner → outer coefficient.
    pub out_of: Complex64,
}

impl TransmissionPair {
    pub fn product(&self) -> Complex64 {
        self.into * self.out_of
    }
}

/// Refraction cosines for a wave hitting `inner` from `outer` at `theta_1`.
pub fn refraction_cosines(theta_1: Angle, outer: &Material, inner: &Material) -> RefractionCosines {
    let (s, c) = theta_1.radians().sin_cos();
    let ratio = outer.eps_rel() / inner.eps_rel();
    // 1 − r sin²θ written as cos²θ + (1 − r) sin²θ, so that r = 1 gives back
    // exactly cos θ
    let radicand = Complex64::new(c * c, 0.0) + (1.0 - ratio) * (s * s);
    RefractionCosines {
        outer: c,
        inner: csqrt(radicand),
    }
}

/// Reflection coefficient of a free-space wave on `medium`:
///
/// `R = (cos θ − √(ε₁/ε₀) √(1 − (ε₀/ε₁) sin²θ)) / (cos θ + √(ε₁/ε₀) √(1 − (ε₀/ε₁) sin²θ))`
pub fn reflection_coefficient(theta_i: Angle, medium: &Material) -> Complex64 {
    let cos = refraction_cosines(theta_i, &Material::AIR, medium);
    let index = csqrt(medium.eps_rel() / Material::AIR.eps_rel());
    let scaled = index * cos.inner;
    (cos.outer - scaled) / (cos.outer + scaled)
}

/// Interface transmission coefficients
/// `T₀→₁ = 2η₁cosθ₁ / (η₀cosθ₁ + η₁cosθ₂)` and
/// `T₁→₀ = 2η₀cosθ₂ / (η₁cosθ₂ + η₀cosθ₁)`.
pub fn transmission_pair(theta_1: Angle, outer: &Material, inner: &Material) -> TransmissionPair {
    let cos = refraction_cosines(theta_1, outer, inner);
    let eta_out = impedance(outer);
    let eta_in = impedance(inner);
    let a = eta_out * cos.outer;
    let b = eta_in * cos.inner;
    TransmissionPair {
        into: 2.0 * eta_in * cos.outer / (a + b),
        out_of: 2.0 * eta_out * cos.inner / (b + a),
    }
}

/// Slab phase correction divided by the free-space wavenumber:
/// `√ε_r · l · (1/cos θ₁ − √ε_r / cos θ₂)`.
///
/// Frequency enters the phase only through `k₀`, so the solver evaluates this
/// once per ray and scales it per frequency.
pub fn slab_phase_per_wavenumber(theta_1: Angle, material: &Material, thickness: f64) -> Complex64 {
    let cos = refraction_cosines(theta_1, &Material::AIR, material);
    let index = material.refractive_index();
    // (1/c₁ − n/c₂) = (c₂ − n c₁) / (c₁ c₂); zero exactly when n = 1
    let bracket = (cos.inner - index * cos.outer) / (cos.inner * cos.outer);
    index * thickness * bracket
}

/// `φ = k_obs l (1/cos θ₁ − (1/cos θ₂)√(ε₁/ε₀))` with the complex in-slab
/// wavenumber `k_obs`; the field is multiplied by `e^{jφ}`.
pub fn slab_phase(theta_1: Angle, material: &Material, thickness: f64, freq: f64) -> Complex64 {
    free_space_wavenumber(freq) * slab_phase_per_wavenumber(theta_1, material, thickness)
}
