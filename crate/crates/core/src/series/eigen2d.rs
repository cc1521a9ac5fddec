//! Eigenfunction expansion of the singly periodic Green's function,
//!
//! G(x) = (i/4π) Σₙ (1/βₙ) e^{iαₙx₁ + iβₙ|x₂|},
//!
//! and its term-wise derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SeriesControl;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::params::beta_2d;

/// G and its derivatives up to second order at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen2D {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    pub d11: Complex64,
    pub d12: Complex64,
    pub d22: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deriv2D {
    D1,
    D2,
    D11,
    D12,
    D22,
}

impl Deriv2D {
    fn order(self) -> i32 {
        match self {
            Deriv2D::D1 | Deriv2D::D2 => 1,
            _ => 2,
        }
    }
}

/// Smallest half-width M with the tail bound of terms |n| > M below `tol`.
///
/// Terms in the tail are bounded by aᵖ e^{−(a−k)|x₂|}/(a−k) with a = |αₙ|,
/// and consecutive bounds shrink by at least (1 + 1/a)ᵖ e^{−|x₂|}.
pub(crate) fn window_2d(k: f64, alpha: f64, x2: f64, p: i32, tol: f64, max_terms: usize) -> Result<usize> {
    if x2 == 0.0 {
        return Err(Error::NoConvergence { terms: max_terms as u64 });
    }
    let mut m = (k + alpha.abs()).ceil() as usize + 1;
    loop {
        let a = m as f64 + 1.0 - alpha.abs();
        let d = a - k;
        let rho = (1.0 + 1.0 / a).powi(p) * (-x2).exp();
        if d > 0.0 && rho < 1.0 {
            let first = a.powi(p) * (-d * x2).exp() / d;
            let bound = 2.0 * first / (1.0 - rho) / (4.0 * PI);
            if bound < tol {
                return Ok(m);
            }
        }
        if m > max_terms {
            return Err(Error::NoConvergence { terms: max_terms as u64 });
        }
        m += (m / 32).max(1);
    }
}

fn check(x: [f64; 2], ctl: &SeriesControl) -> Result<()> {
    ctl.validate()?;
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    Ok(())
}

/// G(x) from the eigenfunction expansion. Requires x₂ ≠ 0.
pub fn g2d_eigen(x: [f64; 2], k: f64, alpha: f64, ctl: &SeriesControl) -> Result<Complex64> {
    check(x, ctl)?;
    let x2 = x[1].abs();
    let m = window_2d(k, alpha, x2, 0, ctl.tail_tol, ctl.max_terms)? as i64;
    let s = exec::sum_range(Exec::default(), (2 * m + 1) as usize, |i| {
        let n = i as i64 - m;
        let b = beta_2d(k, alpha, n);
        let an = alpha + n as f64;
        (Complex64::i() * (an * x[0] + b * x2)).exp() / b
    });
    Ok(s * Complex64::new(0.0, 1.0 / (4.0 * PI)))
}

/// G and all first and second derivatives, summed over one shared window.
pub fn g2d_eigen_all(x: [f64; 2], k: f64, alpha: f64, ctl: &SeriesControl) -> Result<Eigen2D> {
    check(x, ctl)?;
    let x2 = x[1].abs();
    let sgn = x[1].signum();
    let m = window_2d(k, alpha, x2, 2, ctl.tail_tol, ctl.max_terms)? as i64;
    let parts = exec::map_collect(Exec::default(), &vec![(); (2 * m + 1) as usize], |i, _| {
        let n = i as i64 - m;
        let b = beta_2d(k, alpha, n);
        let an = alpha + n as f64;
        let e = (Complex64::i() * (an * x[0] + b * x2)).exp();
        let t = e / b;
        [
            t,
            Complex64::i() * an * t,
            Complex64::i() * sgn * e,
            -an * an * t,
            -an * sgn * e,
            -b * e,
        ]
    });
    let mut acc = [Complex64::new(0.0, 0.0); 6];
    for p in parts {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    let f = Complex64::new(0.0, 1.0 / (4.0 * PI));
    Ok(Eigen2D {
        value: acc[0] * f,
        d1: acc[1] * f,
        d2: acc[2] * f,
        d11: acc[3] * f,
        d12: acc[4] * f,
        d22: acc[5] * f,
    })
}

/// One first or second derivative of G.
pub fn g2d_deriv_eigen(x: [f64; 2], k: f64, alpha: f64, ctl: &SeriesControl, which: Deriv2D) -> Result<Complex64> {
    check(x, ctl)?;
    let x2 = x[1].abs();
    let sgn = x[1].signum();
    let m = window_2d(k, alpha, x2, which.order(), ctl.tail_tol, ctl.max_terms)? as i64;
    let s = exec::sum_range(Exec::default(), (2 * m + 1) as usize, |i| {
        let n = i as i64 - m;
        let b = beta_2d(k, alpha, n);
        let an = alpha + n as f64;
        let e = (Complex64::i() * (an * x[0] + b * x2)).exp();
        match which {
            Deriv2D::D1 => Complex64::i() * an * e / b,
            Deriv2D::D2 => Complex64::i() * sgn * e,
            Deriv2D::D11 => -an * an * e / b,
            Deriv2D::D12 => -an * sgn * e,
            Deriv2D::D22 => -b * e,
        }
    });
    Ok(s * Complex64::new(0.0, 1.0 / (4.0 * PI)))
}
