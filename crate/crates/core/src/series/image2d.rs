//! Image expansion G(x) = (i/4) Σₙ e^{i2παn} H₀⁽¹⁾(k|x − 2πn e₁|).
//!
//! The sum converges only conditionally; each one-sided half is a sequence of
//! the form zⁿ n^{−1/2}(c₀ + c₁/n + …) with |z| = 1, z ≠ 1 away from Wood
//! anomalies, which Wynn's ε-algorithm accelerates very effectively.

use std::f64::consts::PI;

use complex_bessel::hankel1;
use num_complex::Complex64;

use super::{Accel, SeriesControl, Wynn};
use crate::error::{Error, Result};

/// Consecutive estimates must agree this many times in a row.
const STABLE_STEPS: usize = 3;
const MIN_TERMS: usize = 12;

fn h0(z: f64) -> Result<Complex64> {
    hankel1(0.0, Complex64::new(z, 0.0))
        .map_err(|e| Error::InvalidParameter(format!("Hankel function failed at {z}: {e:?}")))
}

/// Σ_{n≥1} e^{i2π·sign·αn} H₀(k|(t − 2π·sign·n, x₂)|).
fn one_sided(t: f64, x2: f64, k: f64, alpha: f64, sign: f64, ctl: &SeriesControl) -> Result<Complex64> {
    let mut wynn = Wynn::default();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut prev: Option<Complex64> = None;
    let mut stable = 0;
    for n in 1..=ctl.max_terms {
        let nf = n as f64;
        let r = (t - 2.0 * PI * sign * nf).hypot(x2);
        let term = Complex64::from_polar(1.0, 2.0 * PI * sign * alpha * nf) * h0(k * r)?;
        partial += term;
        let est = match ctl.accel {
            Accel::EulerShanks => wynn.push(partial),
            Accel::None => partial,
        };
        let converged = match (ctl.accel, prev) {
            (Accel::None, _) => term.norm() < ctl.tail_tol,
            (_, Some(p)) => (est - p).norm() < ctl.tail_tol,
            _ => false,
        };
        prev = Some(est);
        stable = if converged { stable + 1 } else { 0 };
        if stable >= STABLE_STEPS && n >= MIN_TERMS {
            return Ok(est);
        }
    }
    Err(Error::NoConvergence { terms: ctl.max_terms as u64 })
}

/// G(x) from the accelerated image sum. Usable on the periodicity axis
/// (x₂ = 0) away from the sources 2πn e₁.
pub fn g2d_image(x: [f64; 2], k: f64, alpha: f64, ctl: &SeriesControl) -> Result<Complex64> {
    ctl.validate()?;
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    let shift = ((x[0] + PI) / (2.0 * PI)).floor();
    let t = x[0] - 2.0 * PI * shift;
    let r0 = t.hypot(x[1]);
    if r0 < 1e-14 {
        return Err(Error::EvalAtSource);
    }
    let centre = h0(k * r0)?;
    let right = one_sided(t, x[1], k, alpha, 1.0, ctl)?;
    let left = one_sided(t, x[1], k, alpha, -1.0, ctl)?;
    let phase = Complex64::from_polar(1.0, 2.0 * PI * alpha * shift);
    Ok(phase * Complex64::new(0.0, 0.25) * (centre + right + left))
}
