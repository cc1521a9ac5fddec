use std::f64::consts::PI;

use num_complex::Complex64;

use super::singular::phi0_2d;
use crate::axial::AxialTransform;
use crate::error::Result;
use crate::exec::{self, Exec};
use crate::grid::{slot_index, ComplexGrid};
use crate::params::Params2D;

/// Fourier coefficients K̂ⱼ, j ∈ [−N, N)², of the periodized kernel
/// K = e^{−iαx₁}G·𝒳(x₂), in wraparound order.
pub fn compute_khat(params: &Params2D) -> Result<ComplexGrid> {
    compute_khat_with(params, Exec::default())
}

pub fn compute_khat_with(params: &Params2D, exec: Exec) -> Result<ComplexGrid> {
    let p = params.validate()?;
    let n = p.n_modes;
    let m = 2 * n;
    let axial = AxialTransform::new(p.c, p.c_tilde, n);
    let phi0 = phi0_2d(p.c_tilde);
    let mut out = ComplexGrid::zeros(&[m, m], &[2.0 * PI, 2.0 * p.c_tilde]);
    exec::for_each_chunk(exec, out.data_mut(), m, |s1, row| {
        let beta = p.beta(slot_index(s1, n));
        let mut buf = axial.scratch();
        axial.coefficients(beta, phi0, p.c_tilde, row, &mut buf);
    });
    Ok(out)
}

/// Multiplies a spectrum by the symbol of ∂ₚ (or ∂ₚ∂_q) acting on
/// e^{iαx₁}(·): i(α + j₁) for x₁ and i j₂π/c̃ for x₂.
pub(crate) fn apply_symbol(spec: &mut [Complex64], n: usize, alpha: f64, c_tilde: f64, axes: &[usize]) {
    let m = 2 * n;
    for (idx, z) in spec.iter_mut().enumerate() {
        let xi = [alpha + slot_index(idx / m, n) as f64, slot_index(idx % m, n) as f64 * PI / c_tilde];
        for &a in axes {
            *z *= Complex64::i() * xi[a];
        }
    }
}
