//! Reference evaluators built directly from the defining series.
//!
//! These are slow but independent of the FFT pipelines and serve as the
//! oracles in the test suites.

mod eigen2d;
mod eigen3d;
mod image2d;

pub use eigen2d::{g2d_deriv_eigen, g2d_eigen, g2d_eigen_all, Deriv2D, Eigen2D};
pub use eigen3d::{g3d_eigen, g3d_eigen_hessian, maxwell_oracle, Eigen3D};
pub use image2d::g2d_image;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Acceleration applied to conditionally convergent sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Accel {
    None,
    /// Iterated Shanks transformation (Wynn's ε-algorithm) on partial sums.
    EulerShanks,
}

/// Stopping rules for the reference series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    /// Absolute truncation tolerance.
    pub tail_tol: f64,
    /// Largest admissible mode index (window half-width) or image count.
    pub max_terms: usize,
    pub accel: Accel,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            tail_tol: 1e-12,
            max_terms: 1 << 20,
            accel: Accel::EulerShanks,
        }
    }
}

impl SeriesControl {
    pub fn with_tol(tail_tol: f64) -> Self {
        Self {
            tail_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidParameter("tail_tol must be positive".into()));
        }
        if self.max_terms < 16 {
            return Err(Error::InvalidParameter("max_terms must be at least 16".into()));
        }
        Ok(())
    }
}

/// Streaming Wynn ε-algorithm. Each pushed partial sum extends the current
/// anti-diagonal of the ε-table; the estimate is its last even-column entry.
#[derive(Clone, Debug, Default)]
pub(crate) struct Wynn {
    diag: Vec<Complex64>,
    /// Set once a zero difference has frozen the table.
    frozen: Option<Complex64>,
}

const WYNN_MAX_ORDER: usize = 48;

impl Wynn {
    pub fn push(&mut self, s: Complex64) -> Complex64 {
        if let Some(v) = self.frozen {
            return v;
        }
        let old = std::mem::take(&mut self.diag);
        let mut new = Vec::with_capacity(old.len() + 1);
        new.push(s);
        for k in 0..old.len().min(WYNN_MAX_ORDER) {
            let diff = new[k] - old[k];
            if diff.norm() <= 1e-300 {
                let v = if k % 2 == 0 { new[k] } else { new[k - 1] };
                self.frozen = Some(v);
                return v;
            }
            let prev = if k == 0 { Complex64::new(0.0, 0.0) } else { old[k - 1] };
            new.push(prev + 1.0 / diff);
        }
        let last_even = (new.len() - 1) & !1;
        let est = new[last_even];
        self.diag = new;
        est
    }
}
