//! Eigenfunction expansion of the doubly periodic Green's function,
//!
//! G_d(x) = (i/8π²) Σ (1/β) e^{iα₁ₙx₁ + iα₂ₙx₂ + iβ|x₃|},
//!
//! its Hessian, and the Maxwell tensor 𝔾 = G_d·𝕀 + ∇∇G_d / k².

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SeriesControl;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::params::beta_from_sq;

/// G_d and its six distinct second derivatives, ordered 11, 12, 13, 22, 23, 33.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen3D {
    pub value: Complex64,
    pub hessian: [Complex64; 6],
}

impl Eigen3D {
    /// The Maxwell tensor assembled from G_d and its Hessian.
    pub fn tensor(&self, k: f64) -> [[Complex64; 3]; 3] {
        crate::maxwell::assemble_tensor(self.value, &self.hessian, k)
    }
}

/// Smallest square half-width M such that the shells m > M contribute less
/// than `tol`. A shell has 8m modes, each bounded by Aᵖ e^{−b|x₃|}/b with
/// b = √((m − ā)² − k²) and A = √2(m + ā).
fn window_3d(k: f64, a1: f64, a2: f64, x3: f64, p: i32, tol: f64, max_terms: usize) -> Result<usize> {
    let fail = Error::NoConvergence { terms: max_terms as u64 };
    if x3 == 0.0 {
        return Err(fail);
    }
    let abar = a1.abs().max(a2.abs());
    let start = (k + abar).ceil() as usize + 1;
    let shell = |m: usize| {
        let mf = m as f64;
        let b = ((mf - abar).powi(2) - k * k).sqrt();
        8.0 * mf * (2f64.sqrt() * (mf + abar)).powi(p) * (-b * x3).exp() / b / (8.0 * PI * PI)
    };
    // shell bounds eventually decay geometrically; sum them until negligible
    let mut bounds = Vec::new();
    let mut m = start + 1;
    loop {
        let t = shell(m);
        bounds.push(t);
        let decaying = m > start + 2 && t < bounds[bounds.len() - 2];
        if decaying && t < tol * 1e-4 {
            break;
        }
        if m > max_terms + 1 {
            return Err(fail);
        }
        m += 1;
    }
    let mut tail = 0.0;
    let mut best = None;
    for (i, t) in bounds.iter().enumerate().rev() {
        tail += t;
        if tail < tol {
            best = Some(start + i);
        } else {
            break;
        }
    }
    // `best` is the half-width whose outer shells sum below tol
    let m = best.unwrap_or(start + bounds.len());
    if m > max_terms {
        return Err(fail);
    }
    Ok(m)
}

struct Phases {
    m: i64,
    p1: Vec<Complex64>,
    p2: Vec<Complex64>,
}

impl Phases {
    fn new(m: i64, a1: f64, a2: f64, x: &[f64; 3]) -> Self {
        let line = |a: f64, t: f64| {
            (-m..=m)
                .map(|n| Complex64::from_polar(1.0, (a + n as f64) * t))
                .collect::<Vec<_>>()
        };
        Self {
            m,
            p1: line(a1, x[0]),
            p2: line(a2, x[1]),
        }
    }
}

fn check(x: &[f64; 3], ctl: &SeriesControl) -> Result<()> {
    ctl.validate()?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    Ok(())
}

/// G_d(x). Requires x₃ ≠ 0.
pub fn g3d_eigen(x: [f64; 3], k: f64, alpha1: f64, alpha2: f64, ctl: &SeriesControl) -> Result<Complex64> {
    check(&x, ctl)?;
    let x3 = x[2].abs();
    let m = window_3d(k, alpha1, alpha2, x3, 0, ctl.tail_tol, ctl.max_terms)? as i64;
    let ph = Phases::new(m, alpha1, alpha2, &x);
    let width = (2 * m + 1) as usize;
    let s = exec::sum_range(Exec::default(), width, |i| {
        let a1 = alpha1 + (i as i64 - ph.m) as f64;
        let mut row = Complex64::new(0.0, 0.0);
        for (j, p2) in ph.p2.iter().enumerate() {
            let a2 = alpha2 + (j as i64 - ph.m) as f64;
            let b = beta_from_sq(k, a1 * a1 + a2 * a2);
            row += p2 * (Complex64::i() * b * x3).exp() / b;
        }
        ph.p1[i] * row
    });
    Ok(s * Complex64::new(0.0, 1.0 / (8.0 * PI * PI)))
}

/// G_d and its Hessian over one shared window.
pub fn g3d_eigen_hessian(x: [f64; 3], k: f64, alpha1: f64, alpha2: f64, ctl: &SeriesControl) -> Result<Eigen3D> {
    check(&x, ctl)?;
    let x3 = x[2].abs();
    let sgn = x[2].signum();
    let m = window_3d(k, alpha1, alpha2, x3, 2, ctl.tail_tol, ctl.max_terms)? as i64;
    let ph = Phases::new(m, alpha1, alpha2, &x);
    let width = (2 * m + 1) as usize;
    let rows = exec::map_collect(Exec::default(), &vec![(); width], |i, _| {
        let a1 = alpha1 + (i as i64 - ph.m) as f64;
        let mut acc = [Complex64::new(0.0, 0.0); 7];
        for (j, p2) in ph.p2.iter().enumerate() {
            let a2 = alpha2 + (j as i64 - ph.m) as f64;
            let b = beta_from_sq(k, a1 * a1 + a2 * a2);
            let t = p2 * (Complex64::i() * b * x3).exp() / b;
            let c3 = b * sgn;
            acc[0] += t;
            acc[1] -= t * (a1 * a1);
            acc[2] -= t * (a1 * a2);
            acc[3] -= t * c3 * a1;
            acc[4] -= t * (a2 * a2);
            acc[5] -= t * c3 * a2;
            acc[6] -= t * c3 * c3;
        }
        acc.map(|v| v * ph.p1[i])
    });
    let mut acc = [Complex64::new(0.0, 0.0); 7];
    for r in rows {
        for (a, v) in acc.iter_mut().zip(r) {
            *a += v;
        }
    }
    let f = Complex64::new(0.0, 1.0 / (8.0 * PI * PI));
    Ok(Eigen3D {
        value: acc[0] * f,
        hessian: [acc[1] * f, acc[2] * f, acc[3] * f, acc[4] * f, acc[5] * f, acc[6] * f],
    })
}

/// The Maxwell Green's tensor from the eigenfunction expansion.
pub fn maxwell_oracle(
    x: [f64; 3],
    k: f64,
    alpha1: f64,
    alpha2: f64,
    ctl: &SeriesControl,
) -> Result<[[Complex64; 3]; 3]> {
    Ok(g3d_eigen_hessian(x, k, alpha1, alpha2, ctl)?.tensor(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetries() {
        let ctl = SeriesControl::with_tol(1e-12);
        let (k, a1, a2) = (5.0, 0.1, 0.2);
        let g = g3d_eigen([0.3, -0.4, 0.25], k, a1, a2, &ctl).unwrap();
        let s = g3d_eigen([0.3 + 2.0 * PI, -0.4, 0.25], k, a1, a2, &ctl).unwrap();
        assert!((s - Complex64::from_polar(1.0, 2.0 * PI * a1) * g).norm() < 1e-12 * g.norm());
        let m = g3d_eigen([0.3, -0.4, -0.25], k, a1, a2, &ctl).unwrap();
        assert_eq!(m, g);
    }

    #[test]
    fn trace_identity() {
        let ctl = SeriesControl::with_tol(1e-12);
        let k = 5.0;
        let e = g3d_eigen_hessian([0.03, 0.03, 0.2], k, 0.1, 0.2, &ctl).unwrap();
        let t = e.tensor(k);
        let tr = t[0][0] + t[1][1] + t[2][2];
        assert!((tr - 2.0 * e.value).norm() < 1e-9 * e.value.norm());
        for p in 0..3 {
            for q in 0..3 {
                assert_eq!(t[p][q], t[q][p]);
            }
        }
    }

    #[test]
    fn value_matches_hessian_pass() {
        let ctl = SeriesControl::with_tol(1e-12);
        let x = [0.5, 1.0, 0.3];
        let a = g3d_eigen(x, 1.0, 0.1, 0.2, &ctl).unwrap();
        let b = g3d_eigen_hessian(x, 1.0, 0.1, 0.2, &ctl).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }
}
