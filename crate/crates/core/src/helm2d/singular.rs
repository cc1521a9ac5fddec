//! Fourier coefficients of the localized singular functions in 2D.
//!
//! With g = ln|x|·𝒴_ε(|x|) every singular part used by the 2D tables is a
//! combination of the moments
//!
//! ```text
//! A_ab = (x₁ᵃ x₂ᵇ g)^,   B_ab = (x₁ᵃ x₂ᵇ 𝒴_ε / |x|²)^.
//! ```
//!
//! Applying Δ and ∂ₚ to x₁ᵃx₂ᵇg and transforming gives, for ξ = (j₁, j₂π/c̃),
//!
//! ```text
//! −|ξ|² A_ab = a(a−1)A_{a−2,b} + b(b−1)A_{a,b−2} + 2(a+b)B_ab + R̂_ab + 2πφ₀δ_{a+b,0}
//! B_ab = iξ₁A_{a−1,b} − (a−1)A_{a−2,b} − (x₁^{a−1}x₂ᵇ·x₁w)^
//! ```
//!
//! where w = ln|x|𝒴′/|x|, Φ₁ = (2+ln|x|)𝒴′/|x| + 𝒴″ln|x| and
//! R_ab = x₁ᵃx₂ᵇ(2(a+b)w + Φ₁). The functions R and x·w are smooth and
//! supported on the annulus ε ≤ |x| ≤ 2ε, so their coefficients come from a
//! high-resolution FFT; at ξ = 0 the A moments are radial integrals.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::{crop_spectrum_2d, slot_index, wrap_index, ComplexGrid};
use crate::params::Params2D;
use crate::persist::{self, HeaderParams, TableKind};
use crate::quad::GaussLegendre;

/// Singular moments, in storage order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment {
    A00,
    A10,
    A01,
    A20,
    A11,
    A02,
    B10,
    B01,
    B20,
    B11,
    B02,
    B30,
    B21,
    B12,
}

const ALL_MOMENTS: [Moment; 14] = [
    Moment::A00,
    Moment::A10,
    Moment::A01,
    Moment::A20,
    Moment::A11,
    Moment::A02,
    Moment::B10,
    Moment::B01,
    Moment::B20,
    Moment::B11,
    Moment::B02,
    Moment::B30,
    Moment::B21,
    Moment::B12,
];

/// Moments needed for the Green's function table alone.
const GREEN_MOMENTS: usize = 2;

/// Smooth annulus functions whose FFTs feed the recursions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Smooth {
    Phi1,
    R10,
    R01,
    R20,
    R11,
    R02,
    S1,
    S2,
    S11,
    S12,
    S22,
    S111,
    S112,
    S122,
}

const GREEN_SMOOTH: [Smooth; 3] = [Smooth::Phi1, Smooth::R10, Smooth::S1];
const ALL_SMOOTH: [Smooth; 14] = [
    Smooth::Phi1,
    Smooth::R10,
    Smooth::S1,
    Smooth::R01,
    Smooth::R20,
    Smooth::R11,
    Smooth::R02,
    Smooth::S2,
    Smooth::S11,
    Smooth::S12,
    Smooth::S22,
    Smooth::S111,
    Smooth::S112,
    Smooth::S122,
];

impl Smooth {
    #[inline]
    fn eval(self, x1: f64, x2: f64, w: f64, phi1: f64) -> f64 {
        match self {
            Smooth::Phi1 => phi1,
            Smooth::R10 => x1 * (2.0 * w + phi1),
            Smooth::R01 => x2 * (2.0 * w + phi1),
            Smooth::R20 => x1 * x1 * (4.0 * w + phi1),
            Smooth::R11 => x1 * x2 * (4.0 * w + phi1),
            Smooth::R02 => x2 * x2 * (4.0 * w + phi1),
            Smooth::S1 => x1 * w,
            Smooth::S2 => x2 * w,
            Smooth::S11 => x1 * x1 * w,
            Smooth::S12 => x1 * x2 * w,
            Smooth::S22 => x2 * x2 * w,
            Smooth::S111 => x1 * x1 * x1 * w,
            Smooth::S112 => x1 * x1 * x2 * w,
            Smooth::S122 => x1 * x2 * x2 * w,
        }
    }
}

/// Basis normalization 1/√(4πc̃) of φⱼ on [−π, π] × [−c̃, c̃].
#[inline]
pub fn phi0_2d(c_tilde: f64) -> f64 {
    1.0 / (2.0 * (PI * c_tilde).sqrt())
}

/// Coefficients ∫ u φ̄ⱼ for j ∈ [−N, N)² of several smooth functions
/// supported in |x| < 2ε, from a `res × res` trapezoidal rule. Only the rows
/// and columns that can be nonzero or are needed are transformed.
fn annulus_spectra(fns: &[Smooth], c_tilde: f64, eps: f64, res: usize, n: usize, exec: Exec) -> Vec<Vec<Complex64>> {
    let y = RadialCutoff::new(eps);
    let h1 = 2.0 * PI / res as f64;
    let h2 = 2.0 * c_tilde / res as f64;
    let reach1 = (2.0 * eps / h1).ceil() as i64 + 1;
    let reach2 = (2.0 * eps / h2).ceil() as i64 + 1;
    let nf = fns.len();
    let m = 2 * n;
    let mut planner = FftPlanner::new();
    let plan = planner.plan_fft_forward(res);
    let rows: Vec<i64> = (-reach1..=reach1).collect();
    // x₂-transform of every support row, keeping the 2N needed outputs
    let row_spectra = exec::map_collect(exec, &rows, |_, &m1| {
        let x1 = m1 as f64 * h1;
        let mut bufs = vec![vec![Complex64::new(0.0, 0.0); res]; nf];
        for m2 in -reach2..=reach2 {
            let x2 = m2 as f64 * h2;
            let r = x1.hypot(x2);
            let (_, d1, d2) = y.eval_all(r);
            if d1 == 0.0 && d2 == 0.0 {
                continue;
            }
            let lr = r.ln();
            let w = lr * d1 / r;
            let phi1 = (2.0 + lr) * d1 / r + d2 * lr;
            let slot = wrap_index(m2, res);
            for (b, f) in bufs.iter_mut().zip(fns) {
                b[slot] = Complex64::new(f.eval(x1, x2, w, phi1), 0.0);
            }
        }
        bufs.into_iter()
            .map(|mut b| {
                plan.process(&mut b);
                (0..m).map(|s| b[wrap_index(slot_index(s, n), res)]).collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    let scale = h1 * h2 * phi0_2d(c_tilde);
    let cols: Vec<usize> = (0..nf * m).collect();
    let col_spectra = exec::map_collect(exec, &cols, |_, &fc| {
        let (f, s2) = (fc / m, fc % m);
        let mut b = vec![Complex64::new(0.0, 0.0); res];
        for (r, &m1) in rows.iter().enumerate() {
            b[wrap_index(m1, res)] = row_spectra[r][f][s2];
        }
        plan.process(&mut b);
        (0..m).map(|s1| b[wrap_index(slot_index(s1, n), res)] * scale).collect::<Vec<_>>()
    });
    (0..nf)
        .map(|f| {
            let mut out = vec![Complex64::new(0.0, 0.0); m * m];
            for s2 in 0..m {
                let col = &col_spectra[f * m + s2];
                for s1 in 0..m {
                    out[s1 * m + s2] = col[s1];
                }
            }
            out
        })
        .collect()
}

/// ∫₀^{2ε} rᵖ ln r 𝒴_ε(r) dr.
fn radial_log_moment(eps: f64, p: i32) -> f64 {
    let y = RadialCutoff::new(eps);
    let q = (p + 1) as f64;
    let inner = eps.powf(q) * (eps.ln() / q - 1.0 / (q * q));
    let gl = GaussLegendre::new(32);
    inner + gl.integrate_panels(eps, 2.0 * eps, 8, |r| r.powi(p) * r.ln() * y.eval(r, 0))
}

/// Cached singular moments for one (c̃, ε, fft_res), valid for all N up to
/// `n_modes` and independent of k and α.
#[derive(Clone, Debug, PartialEq)]
pub struct F12Cache {
    c_tilde: f64,
    eps: f64,
    fft_res: usize,
    n_modes: usize,
    moments: Vec<ComplexGrid>,
}

impl F12Cache {
    /// Builds the moments A₀₀ and A₁₀, or all fourteen when `full` is set
    /// (required by the derivative and difference tables).
    pub fn compute(c_tilde: f64, eps: f64, fft_res: usize, n_modes: usize, full: bool) -> Result<Self> {
        Self::compute_with(c_tilde, eps, fft_res, n_modes, full, Exec::default())
    }

    pub fn compute_with(c_tilde: f64, eps: f64, fft_res: usize, n_modes: usize, full: bool, exec: Exec) -> Result<Self> {
        if !(c_tilde > 0.0 && eps > 0.0 && 2.0 * eps < PI.min(c_tilde)) {
            return Err(Error::Geometry(format!("eps = {eps} does not fit c_tilde = {c_tilde}")));
        }
        if !fft_res.is_power_of_two() || fft_res < 4 * n_modes || n_modes < 1 {
            return Err(Error::InvalidParameter(format!(
                "fft_res = {fft_res} must be a power of two and at least 4N = {}",
                4 * n_modes
            )));
        }
        let fns: &[Smooth] = if full { &ALL_SMOOTH } else { &GREEN_SMOOTH };
        let spectra = annulus_spectra(fns, c_tilde, eps, fft_res, n_modes, exec);
        let sm = |s: Smooth| &spectra[fns.iter().position(|&f| f == s).unwrap()];
        let m = 2 * n_modes;
        let phi0 = phi0_2d(c_tilde);
        let a00_0 = phi0 * 2.0 * PI * radial_log_moment(eps, 1);
        let a20_0 = phi0 * PI * radial_log_moment(eps, 3);
        let count = if full { ALL_MOMENTS.len() } else { GREEN_MOMENTS };
        let mut out = vec![vec![Complex64::new(0.0, 0.0); m * m]; count];
        let i = Complex64::i();
        for s1 in 0..m {
            let xi1 = slot_index(s1, n_modes) as f64;
            for s2 in 0..m {
                let xi2 = slot_index(s2, n_modes) as f64 * PI / c_tilde;
                let idx = s1 * m + s2;
                let xsq = xi1 * xi1 + xi2 * xi2;
                let at_zero = s1 == 0 && s2 == 0;
                let solve = |rhs: Complex64| -rhs / xsq;
                let a00 = if at_zero {
                    Complex64::new(a00_0, 0.0)
                } else {
                    solve(sm(Smooth::Phi1)[idx] + 2.0 * PI * phi0)
                };
                let b10 = i * xi1 * a00 - sm(Smooth::S1)[idx];
                let a10 = if at_zero {
                    Complex64::new(0.0, 0.0)
                } else {
                    solve(2.0 * b10 + sm(Smooth::R10)[idx])
                };
                out[0][idx] = a00;
                out[1][idx] = a10;
                if !full {
                    continue;
                }
                let b01 = i * xi2 * a00 - sm(Smooth::S2)[idx];
                let a01 = if at_zero {
                    Complex64::new(0.0, 0.0)
                } else {
                    solve(2.0 * b01 + sm(Smooth::R01)[idx])
                };
                let b20 = i * xi1 * a10 - a00 - sm(Smooth::S11)[idx];
                let b11 = i * xi1 * a01 - sm(Smooth::S12)[idx];
                let b02 = i * xi2 * a01 - a00 - sm(Smooth::S22)[idx];
                let (a20, a11, a02) = if at_zero {
                    (Complex64::new(a20_0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(a20_0, 0.0))
                } else {
                    (
                        solve(2.0 * a00 + 4.0 * b20 + sm(Smooth::R20)[idx]),
                        solve(4.0 * b11 + sm(Smooth::R11)[idx]),
                        solve(2.0 * a00 + 4.0 * b02 + sm(Smooth::R02)[idx]),
                    )
                };
                let b30 = i * xi1 * a20 - 2.0 * a10 - sm(Smooth::S111)[idx];
                let b21 = i * xi1 * a11 - a01 - sm(Smooth::S112)[idx];
                let b12 = i * xi1 * a02 - sm(Smooth::S122)[idx];
                for (slot, v) in [a01, a20, a11, a02, b10, b01, b20, b11, b02, b30, b21, b12].into_iter().enumerate() {
                    out[2 + slot][idx] = v;
                }
            }
        }
        let cell = [2.0 * PI, 2.0 * c_tilde];
        let moments = out
            .into_iter()
            .map(|d| ComplexGrid::from_vec(&[m, m], &cell, d))
            .collect::<Result<_>>()?;
        Ok(Self {
            c_tilde,
            eps,
            fft_res,
            n_modes,
            moments,
        })
    }

    pub fn c_tilde(&self) -> f64 {
        self.c_tilde
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn fft_res(&self) -> usize {
        self.fft_res
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn is_full(&self) -> bool {
        self.moments.len() == ALL_MOMENTS.len()
    }

    pub fn moment(&self, which: Moment) -> Result<&ComplexGrid> {
        let pos = ALL_MOMENTS.iter().position(|&m| m == which).unwrap();
        self.moments.get(pos).ok_or_else(|| {
            Error::CacheMismatch(format!("moment {which:?} needs a cache built with all moments"))
        })
    }

    /// F̂₁ⱼ, the coefficients of f₁ = −ln|x|𝒴_ε/2π.
    pub fn f1(&self) -> Vec<Complex64> {
        self.moments[0].data().iter().map(|z| -z / (2.0 * PI)).collect()
    }

    /// F̂₂ⱼ, the coefficients of f₂ = −x₁ln|x|𝒴_ε/2π.
    pub fn f2(&self) -> Vec<Complex64> {
        self.moments[1].data().iter().map(|z| -z / (2.0 * PI)).collect()
    }

    /// The same cache restricted to j ∈ [−n, n)².
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.n_modes {
            return Err(Error::CacheMismatch(format!(
                "cache holds N = {}, asked for N = {n}",
                self.n_modes
            )));
        }
        let big = 2 * self.n_modes;
        let cell = [2.0 * PI, 2.0 * self.c_tilde];
        let moments = self
            .moments
            .iter()
            .map(|g| ComplexGrid::from_vec(&[2 * n, 2 * n], &cell, crop_spectrum_2d(g.data(), big, n)))
            .collect::<Result<_>>()?;
        Ok(Self {
            n_modes: n,
            moments,
            ..*self
        })
    }

    /// Checks that the cache can serve `params`, returning a copy truncated
    /// to its N.
    pub fn for_params(&self, params: &Params2D, need_full: bool) -> Result<Self> {
        if self.c_tilde != params.c_tilde || self.eps != params.eps {
            return Err(Error::CacheMismatch(format!(
                "cache built for c_tilde = {}, eps = {}; table needs c_tilde = {}, eps = {}",
                self.c_tilde, self.eps, params.c_tilde, params.eps
            )));
        }
        if self.fft_res != params.fft_res {
            return Err(Error::CacheMismatch(format!(
                "cache built with fft_res = {}, table needs {}",
                self.fft_res, params.fft_res
            )));
        }
        if need_full && !self.is_full() {
            return Err(Error::CacheMismatch("derivative tables need all singular moments".into()));
        }
        if self.n_modes == params.n_modes {
            return Ok(self.clone());
        }
        self.truncate(params.n_modes)
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let params = HeaderParams {
            c_tilde: self.c_tilde,
            eps: self.eps,
            n_modes: self.n_modes as u64,
            fft_res: self.fft_res as u64,
            flags: self.is_full() as u64,
            ..Default::default()
        };
        let grids: Vec<&ComplexGrid> = self.moments.iter().collect();
        persist::save_table(path, TableKind::F12Cache2D, params, &grids)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let (h, moments) = persist::load_kind(path, TableKind::F12Cache2D)?;
        let expected = if h.params.flags == 1 { ALL_MOMENTS.len() } else { GREEN_MOMENTS };
        if moments.len() != expected {
            return Err(Error::Format(format!("cache holds {} moments, expected {expected}", moments.len())));
        }
        Ok(Self {
            c_tilde: h.params.c_tilde,
            eps: h.params.eps,
            fft_res: h.params.fft_res as usize,
            n_modes: h.params.n_modes as usize,
            moments,
        })
    }
}

/// The Green's-table cache (moments A₀₀, A₁₀) for the given geometry.
pub fn compute_f12cache(c_tilde: f64, eps: f64, fft_res: usize, n_modes: usize) -> Result<F12Cache> {
    F12Cache::compute(c_tilde, eps, fft_res, n_modes, false)
}

/// The radial factors (ln r·𝒴, 𝒴/r²) at r, or `None` outside the support.
#[inline]
pub(crate) fn singular_factors(y: &RadialCutoff, r: f64) -> Option<(f64, f64)> {
    if r >= y.support_end() {
        return None;
    }
    let yv = y.eval(r, 0);
    Some((r.ln() * yv, yv / (r * r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_of_f2_vanishes() {
        let c = F12Cache::compute(1.0, 0.2, 256, 16, true).unwrap();
        assert_eq!(c.f2()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn truncation_matches_direct_build() {
        let big = F12Cache::compute(1.0, 0.2, 512, 32, false).unwrap();
        let small = F12Cache::compute(1.0, 0.2, 512, 16, false).unwrap();
        let cut = big.truncate(16).unwrap();
        for (a, b) in cut.moments.iter().zip(&small.moments) {
            for (x, y) in a.data().iter().zip(b.data()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn basic_and_full_caches_share_green_moments() {
        let a = F12Cache::compute(1.0, 0.2, 256, 8, false).unwrap();
        let b = F12Cache::compute(1.0, 0.2, 256, 8, true).unwrap();
        assert_eq!(a.moments[0], b.moments[0]);
        assert_eq!(a.moments[1], b.moments[1]);
    }
}
