//! Integer-order Bessel functions of orders 0 and 1 and the matching Hankel
//! functions of the second kind.
//!
//! Two regimes are used:
//!
//! - `x < SERIES_CUTOFF`: ascending power series. The largest term grows like
//!   `e^x / x`, so at the cutoff the cancellation costs about five digits,
//!   leaving an absolute error near 1e-11.
//! - `x >= SERIES_CUTOFF`: Hankel asymptotic expansion, summed until the terms
//!   stop shrinking. The smallest term is of order `e^{-2x}`.
//!
//! Both regimes keep the relative error of `H = J - jY` below 1e-10 on
//! `(0, ∞)`; `|H|` never vanishes, so relative error of the pair is well
//! defined even at the zeros of `J` and `Y` individually.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_CUTOFF: f64 = 12.0;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_SERIES_TERMS: usize = 200;

/// `J₀(x)` and `Y₀(x)` for `x > 0`.
fn order0(x: f64) -> (f64, f64) {
    if x < SERIES_CUTOFF {
        series0(x)
    } else {
        asymptotic(x, 0.0)
    }
}

/// `J₁(x)` and `Y₁(x)` for `x > 0`.
fn order1(x: f64) -> (f64, f64) {
    if x < SERIES_CUTOFF {
        series1(x)
    } else {
        asymptotic(x, 1.0)
    }
}

fn series0(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0; // (x²/4)^k / (k!)²
    let mut j = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0; // Σ (-1)^{k+1} H_k term_k
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j += term;
        tail -= harmonic * term;
        if term.abs() < 1e-19 {
            break;
        }
    }
    let y = FRAC_2_PI * ((0.5 * x).ln() + EULER_GAMMA) * j + FRAC_2_PI * tail;
    (j, y)
}

fn series1(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let half = 0.5 * x;
    let mut term = half; // (x/2)^{2k+1} / (k! (k+1)!)
    let mut j = term;
    let mut h_k = 0.0;
    let mut h_k1 = 1.0;
    let mut tail = (h_k + h_k1) * term;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        h_k = h_k1;
        h_k1 += 1.0 / (kf + 1.0);
        j += term;
        tail += (h_k + h_k1) * term;
        if term.abs() < 1e-19 {
            break;
        }
    }
    let y = FRAC_2_PI * (half.ln() + EULER_GAMMA) * j - FRAC_2_PI / x - tail / PI;
    (j, y)
}

/// Hankel asymptotic expansion in the `P`/`Q` form:
/// `J = A (P cos χ − Q sin χ)`, `Y = A (P sin χ + Q cos χ)`,
/// with `A = √(2/(πx))` and `χ = x − (ν/2 + 1/4)π`.
fn asymptotic(x: f64, nu: f64) -> (f64, f64) {
    let (p, q) = asymptotic_pq(x, nu);
    let chi = x - (0.5 * nu + 0.25) * PI;
    let (s, c) = chi.sin_cos();
    let amp = (FRAC_2_PI / x).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

fn asymptotic_pq(x: f64, nu: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0; // a_k(ν) / x^k
    let mut prev = f64::INFINITY;
    for k in 1..MAX_SERIES_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * k as f64 * x);
        let size = term.abs();
        if size >= prev {
            // the expansion has started to diverge
            break;
        }
        prev = size;
        // P collects even k with sign (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if size < 1e-17 {
            break;
        }
    }
    (p, q)
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Bessel functions of the second kind need a finite x > 0, got {x}"
        )))
    }
}

/// Bessel function of the first kind, order 0.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(order0(x).0)
}

/// Bessel function of the second kind, order 0.
pub fn bessel_y0(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(order0(x).1)
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(order1(x).0)
}

pub fn bessel_y1(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(order1(x).1)
}

/// `H₀⁽²⁾(x) = J₀(x) − jY₀(x)`, the outgoing cylindrical wave under the
/// `e^{+jωt}` time convention.
///
/// Fails for `x ≤ 0`, where `Y₀` has its logarithmic singularity.
pub fn hankel_h0_2(x: f64) -> Result<Complex64> {
    check_argument(x)?;
    let (j, y) = order0(x);
    Ok(Complex64::new(j, -y))
}

/// `H₁⁽²⁾(x) = J₁(x) − jY₁(x)`; note `d/dx H₀⁽²⁾ = −H₁⁽²⁾`.
pub fn hankel_h1_2(x: f64) -> Result<Complex64> {
    check_argument(x)?;
    let (j, y) = order1(x);
    Ok(Complex64::new(j, -y))
}

/// Unchecked variant for the solver's inner loop, where the argument is a
/// product of a positive wavenumber and a positive distance.
#[inline]
pub(crate) fn h0_2_unchecked(x: f64) -> Complex64 {
    debug_assert!(x > 0.0);
    let (j, y) = order0(x);
    Complex64::new(j, -y)
}
