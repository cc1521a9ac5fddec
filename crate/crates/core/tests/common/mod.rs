//! Quadrature oracles shared by the coefficient tests and the acceptance run.

use std::f64::consts::PI;

use num_complex::Complex64;
use qpgreen::cutoff::{AxialCutoff, RadialCutoff};
use qpgreen::helm3d::phi0_3d;
use qpgreen::quad::GaussLegendre;
use qpgreen::Params3D;

/// ∫_{−c̃}^{c̃} e^{iβ|t|} 𝒳(t) e^{−iqt} dt by composite Gauss–Legendre.
pub fn axial_integral(beta: Complex64, q: f64, c: f64, c_tilde: f64) -> Complex64 {
    let x = AxialCutoff::new(c, c_tilde);
    let gl = GaussLegendre::new(20);
    let end = x.support_end();
    let f = |t: f64| (Complex64::i() * beta * t).exp() * (2.0 * (q * t).cos()) * x.eval(t, 0);
    gl.integrate_panels(0.0, c, 64, f) + gl.integrate_panels(c, end, 64, f)
}

/// F̂ⱼ from a direct trapezoidal sum of the annulus kernel at resolution `res`.
pub fn fhat_trapezoid(p: &Params3D, j: [i64; 3], res: usize) -> Complex64 {
    let h = [2.0 * PI / res as f64, 2.0 * PI / res as f64, 2.0 * p.c_tilde / res as f64];
    let y = RadialCutoff::new(p.eps);
    let c = [p.alpha1 + j[0] as f64, p.alpha2 + j[1] as f64, j[2] as f64 * PI / p.c_tilde];
    let reach: Vec<i64> = h.iter().map(|&s| (2.0 * p.eps / s).ceil() as i64 + 1).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for m0 in -reach[0]..=reach[0] {
        for m1 in -reach[1]..=reach[1] {
            for m2 in -reach[2]..=reach[2] {
                let x = [m0 as f64 * h[0], m1 as f64 * h[1], m2 as f64 * h[2]];
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let (_, d1, d2) = y.eval_all(r);
                if d1 == 0.0 && d2 == 0.0 {
                    continue;
                }
                let ph = p.k * r - (c[0] * x[0] + c[1] * x[1] + c[2] * x[2]);
                acc += Complex64::from_polar(1.0 / (4.0 * PI * r), ph) * Complex64::new(d2, 2.0 * p.k * d1);
            }
        }
    }
    let hh = acc * (h[0] * h[1] * h[2]);
    let ksq = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    phi0_3d(p.c_tilde) * (1.0 - hh) / (ksq - p.k * p.k)
}
