//! Physical and discretization parameters, propagation constants and the
//! Wood-anomaly guard.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest admissible |β| accepted by [`Params2D::validate`] and
/// [`Params3D::validate`].
pub const DEFAULT_WOOD_TOL: f64 = 1e-6;

/// Modes `[-GUARD_FACTOR·N, GUARD_FACTOR·N]` are checked against the Wood tolerance.
pub const GUARD_FACTOR: i64 = 3;

/// Vertical propagation constant of a Floquet mode with squared transverse
/// wavenumber `transverse_sq`.
///
/// Propagating modes get a non-negative real root, evanescent modes a
/// non-negative imaginary one.
#[inline]
pub fn beta_from_sq(k: f64, transverse_sq: f64) -> Complex64 {
    let d = k * k - transverse_sq;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

/// β_n for the singly periodic problem, with α_n = α + n.
#[inline]
pub fn beta_2d(k: f64, alpha: f64, n: i64) -> Complex64 {
    let an = alpha + n as f64;
    beta_from_sq(k, an * an)
}

/// β_{n₁,n₂} for the doubly periodic problem.
#[inline]
pub fn beta_3d(k: f64, alpha1: f64, alpha2: f64, n1: i64, n2: i64) -> Complex64 {
    let a1 = alpha1 + n1 as f64;
    let a2 = alpha2 + n2 as f64;
    beta_from_sq(k, a1 * a1 + a2 * a2)
}

/// Parameters of the 2D pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params2D {
    /// Wavenumber k > 0.
    pub k: f64,
    /// Quasi-momentum α.
    pub alpha: f64,
    /// Half-height of the band |x₂| ≤ c served by the table.
    pub c: f64,
    /// Periodization half-height c̃ > c.
    pub c_tilde: f64,
    /// Radius ε of the singular-part cutoff.
    pub eps: f64,
    /// Spectral half-width N; the table grid is 2N × 2N.
    pub n_modes: usize,
    /// Resolution of the auxiliary FFTs for the singular coefficients.
    pub fft_res: usize,
}

impl Params2D {
    pub fn new(k: f64, alpha: f64, n_modes: usize) -> Self {
        Self {
            k,
            alpha,
            c: 0.6,
            c_tilde: 1.0,
            eps: 0.4,
            n_modes,
            fft_res: 2048,
        }
    }

    pub fn beta(&self, n: i64) -> Complex64 {
        beta_2d(self.k, self.alpha, n)
    }

    pub fn validate(self) -> Result<Self> {
        self.validate_with_tol(DEFAULT_WOOD_TOL)
    }

    pub fn validate_with_tol(self, wood_tol: f64) -> Result<Self> {
        check_wavenumber(self.k)?;
        if !self.alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite".into()));
        }
        check_geometry(self.c, self.c_tilde, self.eps)?;
        check_modes(self.n_modes)?;
        if !self.fft_res.is_power_of_two() || self.fft_res < 4 * self.n_modes {
            return Err(Error::InvalidParameter(format!(
                "fft_res = {} must be a power of two and at least 4N = {}",
                self.fft_res,
                4 * self.n_modes
            )));
        }
        let m = GUARD_FACTOR * self.n_modes as i64;
        for n in -m..=m {
            let b = self.beta(n).norm();
            if b < wood_tol {
                return Err(Error::WoodAnomaly {
                    mode: vec![n],
                    modulus: b,
                });
            }
        }
        Ok(self)
    }
}

/// Parameters of the 3D Helmholtz and Maxwell pipelines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params3D {
    pub k: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub eps: f64,
    /// Spectral half-width N; the table grid is (2N)³.
    pub n_modes: usize,
}

impl Params3D {
    pub fn new(k: f64, alpha1: f64, alpha2: f64, n_modes: usize) -> Self {
        Self {
            k,
            alpha1,
            alpha2,
            c: 0.6,
            c_tilde: 1.0,
            eps: 0.4,
            n_modes,
        }
    }

    pub fn beta(&self, n1: i64, n2: i64) -> Complex64 {
        beta_3d(self.k, self.alpha1, self.alpha2, n1, n2)
    }

    pub fn validate(self) -> Result<Self> {
        self.validate_with_tol(DEFAULT_WOOD_TOL)
    }

    pub fn validate_with_tol(self, wood_tol: f64) -> Result<Self> {
        check_wavenumber(self.k)?;
        if !self.alpha1.is_finite() || !self.alpha2.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite".into()));
        }
        check_geometry(self.c, self.c_tilde, self.eps)?;
        check_modes(self.n_modes)?;
        let m = GUARD_FACTOR * self.n_modes as i64;
        let mut worst = (f64::INFINITY, 0, 0);
        for n1 in -m..=m {
            for n2 in -m..=m {
                let b = self.beta(n1, n2).norm();
                if b < worst.0 {
                    worst = (b, n1, n2);
                }
            }
        }
        if worst.0 < wood_tol {
            return Err(Error::WoodAnomaly {
                mode: vec![worst.1, worst.2],
                modulus: worst.0,
            });
        }
        Ok(self)
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("wavenumber k = {k} must be positive")));
    }
    Ok(())
}

fn check_geometry(c: f64, c_tilde: f64, eps: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::Geometry(format!("c = {c} must be positive")));
    }
    if !(c_tilde.is_finite() && c < c_tilde) {
        return Err(Error::Geometry(format!("need c < c_tilde, got c = {c}, c_tilde = {c_tilde}")));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Geometry(format!("eps = {eps} must be positive")));
    }
    if 2.0 * eps >= PI.min(c_tilde) {
        return Err(Error::Geometry(format!(
            "singular cutoff support 2*eps = {} does not fit the period cell",
            2.0 * eps
        )));
    }
    Ok(())
}

fn check_modes(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "n_modes = {n} must be a power of two >= 2"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert_eq!(beta_2d(1.0, 0.0, 0), Complex64::new(1.0, 0.0));
        let b = beta_2d(10f64.sqrt(), 0.3, 0);
        assert!((b.re - 9.91f64.sqrt()).abs() < 1e-14 && b.im == 0.0);
        assert!((b.re - 3.148015).abs() < 1e-6);
        let b = beta_2d(10f64.sqrt(), 0.3, 5);
        assert!(b.re == 0.0 && (b.im - (5.3f64 * 5.3 - 10.0).sqrt()).abs() < 1e-14);
        assert!((b.im - 4.253234).abs() < 1e-6);
    }

    #[test]
    fn wood_anomaly_detected() {
        let p = Params2D::new(1.0, 0.0, 16);
        match p.validate() {
            Err(Error::WoodAnomaly { mode, modulus }) => {
                assert_eq!(mode.len(), 1);
                assert_eq!(mode[0].abs(), 1);
                assert!(modulus < 1e-12);
            }
            other => panic!("expected Wood anomaly, got {other:?}"),
        }
        assert!(matches!(
            Params3D::new(1.0, 0.0, 0.0, 8).validate(),
            Err(Error::WoodAnomaly { .. })
        ));
    }

    #[test]
    fn paper_geometry_accepted() {
        let p = Params2D::new(10f64.sqrt(), 0.3, 64);
        assert_eq!(p.validate().unwrap(), p);
    }

    #[test]
    fn geometry_errors() {
        let mut p = Params2D::new(10f64.sqrt(), 0.3, 64);
        p.c_tilde = 0.5;
        assert!(matches!(p.validate(), Err(Error::Geometry(_))));
        let mut p = Params2D::new(10f64.sqrt(), 0.3, 64);
        p.eps = 0.6;
        assert!(matches!(p.validate(), Err(Error::Geometry(_))));
        let mut p = Params2D::new(10f64.sqrt(), 0.3, 64);
        p.fft_res = 128;
        assert!(matches!(p.validate(), Err(Error::InvalidParameter(_))));
    }
}
