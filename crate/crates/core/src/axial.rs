//! Fourier coefficients of the periodized kernel along the last axis.
//!
//! After the transverse integrals both the 2D and the 3D coefficients reduce
//! to
//!
//! ```text
//! K̂ = C·[J(β − q) + J(β + q)],   C = i·φ₀ / (2β),   q = j·π/c̃,
//! J(γ) = ∫₀^{c̃} e^{iγx} 𝒳(x) dx = (i/γ)·(1 + ∫₀^{c̃} e^{iγx} 𝒳′(x) dx),
//! ```
//!
//! with φ₀ the basis normalization. The 𝒳′ integrals for all `j` come from one
//! FFT of e^{iβx}𝒳′(x); for |γ| below [`RESONANCE_TOL`] J is integrated
//! directly instead.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::cutoff::AxialCutoff;
use crate::quad::GaussLegendre;

/// Below this |γ| the integrated-by-parts form loses digits and J is
/// computed by quadrature.
pub const RESONANCE_TOL: f64 = 1e-4;

/// Minimum FFT length used to sample e^{iβx}𝒳′ on [−c̃, c̃).
const MIN_SAMPLES: usize = 1024;

pub struct AxialTransform {
    n_modes: usize,
    len: usize,
    step: f64,
    /// (x_m, 𝒳′(x_m)) on the nonzero part of the support.
    samples: Vec<(usize, f64, f64)>,
    plan: Arc<dyn Fft<f64>>,
    /// Nodes on [0, c] and on the transition band, for direct J.
    flat_nodes: Vec<(f64, f64)>,
    band_nodes: Vec<(f64, f64)>,
}

impl AxialTransform {
    pub fn new(c: f64, c_tilde: f64, n_modes: usize) -> Self {
        let cutoff = AxialCutoff::new(c, c_tilde);
        let len = (4 * n_modes).max(MIN_SAMPLES).next_power_of_two();
        let step = 2.0 * c_tilde / len as f64;
        let samples = (0..len / 2)
            .filter_map(|m| {
                let x = m as f64 * step;
                let d = cutoff.eval(x, 1);
                (d != 0.0).then_some((m, x, d))
            })
            .collect();
        let plan = FftPlanner::new().plan_fft_forward(len);
        let gl = GaussLegendre::new(24);
        Self {
            n_modes,
            len,
            step,
            samples,
            plan,
            flat_nodes: gl.mapped(0.0, c, 2),
            band_nodes: {
                let band = GaussLegendre::new(16);
                band.mapped(c, cutoff.support_end(), 16)
                    .into_iter()
                    .map(|(x, w)| (x, w * cutoff.eval(x, 0)))
                    .collect()
            },
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// J(γ) by quadrature; accurate for small |γ|.
    pub fn j_direct(&self, gamma: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, w) in self.flat_nodes.iter().chain(&self.band_nodes) {
            acc += (Complex64::i() * gamma * x).exp() * w;
        }
        acc
    }

    /// Scratch buffer of the right length for [`Self::coefficients`].
    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.len]
    }

    /// Writes C·[J(β−q) + J(β+q)] for j ∈ [−N, N) into `out` (length 2N,
    /// wraparound order), with C = i·pref/(2β).
    pub fn coefficients(&self, beta: Complex64, pref: f64, c_tilde: f64, out: &mut [Complex64], buf: &mut [Complex64]) {
        let n = self.n_modes;
        debug_assert_eq!(out.len(), 2 * n);
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        let ib = Complex64::i() * beta;
        for &(m, x, d) in &self.samples {
            buf[m] = (ib * x).exp() * (d * self.step);
        }
        self.plan.process(buf);
        let cj = Complex64::i() * pref / (2.0 * beta);
        let l = self.len as i64;
        for (slot, o) in out.iter_mut().enumerate() {
            let j = if slot < n { slot as i64 } else { slot as i64 - 2 * n as i64 };
            let q = j as f64 * std::f64::consts::PI / c_tilde;
            let i_minus = buf[j.rem_euclid(l) as usize];
            let i_plus = buf[(-j).rem_euclid(l) as usize];
            let jm = self.j_value(beta - q, i_minus);
            let jp = self.j_value(beta + q, i_plus);
            *o = cj * (jm + jp);
        }
    }

    #[inline]
    fn j_value(&self, gamma: Complex64, integral: Complex64) -> Complex64 {
        if gamma.norm() < RESONANCE_TOL {
            self.j_direct(gamma)
        } else {
            Complex64::i() / gamma * (1.0 + integral)
        }
    }
}
