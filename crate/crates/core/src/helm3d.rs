//! The doubly periodic Helmholtz pipeline on a (2N)³ grid of
//! [−π, π)² × [−c̃, c̃).
//!
//! The singular part is F = e^{−iα·x}Φ with Φ(x) = e^{ik|x|}𝒴_ε(|x|)/(4π|x|).
//! Φ is radial, so F̂ⱼ = φ₀·f(|cⱼ|) with cⱼ = (α₁+j₁, α₂+j₂, j₃π/c̃) and
//!
//! f(κ) = (1/κ) ∫₀^{2ε} e^{ikr} 𝒴_ε(r) sin(κr) dr.
//!
//! f is tabulated once on a fine κ grid and interpolated.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::axial::AxialTransform;
use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::fft;
use crate::grid::{slot_index, ComplexGrid};
use crate::interp::Stencil;
use crate::params::{beta_3d, Params3D};
use crate::persist::{self, HeaderParams, TableHeader, TableKind};
use crate::quad::GaussLegendre;
use crate::series::{self, SeriesControl};

pub const SOURCE_TOL: f64 = 1e-14;

/// Basis normalization 1/√(8π²c̃).
#[inline]
pub fn phi0_3d(c_tilde: f64) -> f64 {
    1.0 / (8.0 * PI * PI * c_tilde).sqrt()
}

/// How the singular coefficients F̂ⱼ are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FhatMethod {
    /// Tabulated radial transform (default).
    #[default]
    Radial,
    /// FFT of the sampled annulus kernel (e^{ik|x|}/4π|x|)(2ik𝒴′ + 𝒴″) at
    /// `res³` resolution, via F̂ = φ₀(1 − ĥ)/(|c|² − k²).
    Fft { res: usize },
}

/// f(κ) on a uniform grid; even in κ.
pub struct RadialTransform {
    step: f64,
    values: Vec<Complex64>,
}

const KAPPA_STEP: f64 = 0.01;

impl RadialTransform {
    pub fn new(k: f64, eps: f64, kappa_max: f64) -> Self {
        let y = RadialCutoff::new(eps);
        let gl = GaussLegendre::new(16);
        let panels = ((kappa_max + k) * eps / PI).ceil() as usize + 4;
        let mut nodes = gl.mapped(0.0, eps, panels);
        nodes.extend(gl.mapped(eps, 2.0 * eps, panels));
        let weighted: Vec<(f64, Complex64)> = nodes
            .into_iter()
            .map(|(r, w)| (r, Complex64::from_polar(w * y.eval(r, 0), k * r)))
            .collect();
        let count = (kappa_max / KAPPA_STEP).ceil() as usize + 4;
        let ks: Vec<usize> = (0..count).collect();
        let values = exec::map_collect(Exec::default(), &ks, |_, &i| {
            let kappa = (i as f64 - 1.0) * KAPPA_STEP;
            direct_f(&weighted, kappa)
        });
        Self {
            step: KAPPA_STEP,
            values,
        }
    }

    /// f(κ) by cubic interpolation, κ ≥ 0.
    #[inline]
    pub fn eval(&self, kappa: f64) -> Complex64 {
        let u = kappa / self.step + 1.0;
        let i = (u.floor() as usize).clamp(1, self.values.len() - 3);
        let t = u - i as f64;
        let w = [
            -t * (t - 1.0) * (t - 2.0) / 6.0,
            (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0,
            (t + 1.0) * t * (t - 1.0) / 6.0,
        ];
        let v = &self.values[i - 1..i + 3];
        v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3]
    }
}

fn direct_f(weighted: &[(f64, Complex64)], kappa: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if kappa.abs() < 1e-12 {
        for &(r, w) in weighted {
            acc += w * r;
        }
    } else {
        for &(r, w) in weighted {
            acc += w * (kappa * r).sin();
        }
        acc /= kappa;
    }
    acc
}

/// f(κ) by direct quadrature, for checks.
pub fn radial_transform_direct(k: f64, eps: f64, kappa: f64) -> Complex64 {
    let y = RadialCutoff::new(eps);
    let gl = GaussLegendre::new(16);
    let panels = ((kappa.abs() + k) * eps / PI).ceil() as usize + 8;
    let mut nodes = gl.mapped(0.0, eps, panels);
    nodes.extend(gl.mapped(eps, 2.0 * eps, panels));
    let weighted: Vec<(f64, Complex64)> = nodes
        .into_iter()
        .map(|(r, w)| (r, Complex64::from_polar(w * y.eval(r, 0), k * r)))
        .collect();
    direct_f(&weighted, kappa)
}

#[inline]
pub(crate) fn wave_vector(p: &Params3D, s: [usize; 3]) -> [f64; 3] {
    let n = p.n_modes;
    [
        p.alpha1 + slot_index(s[0], n) as f64,
        p.alpha2 + slot_index(s[1], n) as f64,
        slot_index(s[2], n) as f64 * PI / p.c_tilde,
    ]
}

/// Largest |cⱼ| over the spectral grid.
fn kappa_max(p: &Params3D) -> f64 {
    let n = p.n_modes as f64;
    let a = (n + p.alpha1.abs()).powi(2) + (n + p.alpha2.abs()).powi(2) + (n * PI / p.c_tilde).powi(2);
    a.sqrt()
}

fn spectral_cell(p: &Params3D) -> [f64; 3] {
    [2.0 * PI, 2.0 * PI, 2.0 * p.c_tilde]
}

/// K̂_dj over j ∈ [−N, N)³, wraparound order (x₃ fastest).
pub fn compute_kdhat(params: &Params3D) -> Result<ComplexGrid> {
    compute_kdhat_with(params, Exec::default())
}

pub fn compute_kdhat_with(params: &Params3D, exec: Exec) -> Result<ComplexGrid> {
    let p = params.validate()?;
    let n = p.n_modes;
    let m = 2 * n;
    let axial = AxialTransform::new(p.c, p.c_tilde, n);
    let phi0 = phi0_3d(p.c_tilde);
    let mut out = ComplexGrid::zeros(&[m, m, m], &spectral_cell(&p));
    exec::for_each_chunk(exec, out.data_mut(), m * m, |s1, slab| {
        let mut buf = axial.scratch();
        for (s2, row) in slab.chunks_mut(m).enumerate() {
            let beta = beta_3d(p.k, p.alpha1, p.alpha2, slot_index(s1, n), slot_index(s2, n));
            axial.coefficients(beta, phi0, p.c_tilde, row, &mut buf);
        }
    });
    Ok(out)
}

/// F̂ⱼ over j ∈ [−N, N)³.
pub fn compute_fhat(params: &Params3D, method: FhatMethod) -> Result<ComplexGrid> {
    let p = params.validate()?;
    let m = 2 * p.n_modes;
    let mut out = ComplexGrid::zeros(&[m, m, m], &spectral_cell(&p));
    subtract_fhat(&p, method, out.data_mut(), Exec::default())?;
    out.data_mut().iter_mut().for_each(|z| *z = -*z);
    Ok(out)
}

/// spec[j] −= F̂ⱼ.
fn subtract_fhat(p: &Params3D, method: FhatMethod, spec: &mut [Complex64], exec: Exec) -> Result<()> {
    let m = 2 * p.n_modes;
    let phi0 = phi0_3d(p.c_tilde);
    let radial = RadialTransform::new(p.k, p.eps, kappa_max(p) + 1.0);
    let annulus = match method {
        FhatMethod::Radial => None,
        FhatMethod::Fft { res } => Some(annulus_spectrum(p, res, exec)?),
    };
    exec::for_each_chunk(exec, spec, m * m, |s1, slab| {
        for (rest, z) in slab.iter_mut().enumerate() {
            let c = wave_vector(p, [s1, rest / m, rest % m]);
            let ksq = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
            let kappa = ksq.sqrt();
            let f = match &annulus {
                Some(h) if (ksq - p.k * p.k).abs() > 1e-6 * (1.0 + p.k * p.k) => {
                    (1.0 - h[s1 * m * m + rest]) / (ksq - p.k * p.k)
                }
                _ => radial.eval(kappa),
            };
            *z -= phi0 * f;
        }
    });
    Ok(())
}

/// ĥⱼ/φ₀ = ∫ h e^{−icⱼ·x} dx for the annulus kernel, from a pruned `res³`
/// trapezoidal rule.
fn annulus_spectrum(p: &Params3D, res: usize, exec: Exec) -> Result<Vec<Complex64>> {
    let m = 2 * p.n_modes;
    if !res.is_power_of_two() || res < m {
        return Err(Error::InvalidParameter(format!("F-hat resolution {res} must be a power of two >= 2N")));
    }
    let h = [2.0 * PI / res as f64, 2.0 * PI / res as f64, 2.0 * p.c_tilde / res as f64];
    let reach: Vec<usize> = h.iter().map(|&s| (2.0 * p.eps / s).ceil() as usize + 1).collect();
    if reach.iter().any(|&r| 2 * r + 1 >= res) {
        return Err(Error::InvalidParameter("F-hat resolution too coarse for the cutoff radius".into()));
    }
    let y = RadialCutoff::new(p.eps);
    let k = p.k;
    let (a1, a2) = (p.alpha1, p.alpha2);
    let vol = h[0] * h[1] * h[2];
    let spec = fft::pruned_forward(
        res,
        &reach,
        p.n_modes,
        |mi| {
            let x = [mi[0] as f64 * h[0], mi[1] as f64 * h[1], mi[2] as f64 * h[2]];
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let (_, d1, d2) = y.eval_all(r);
            if d1 == 0.0 && d2 == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let u = Complex64::from_polar(1.0 / (4.0 * PI * r), k * r - a1 * x[0] - a2 * x[1]);
            u * Complex64::new(d2, 2.0 * k * d1) * vol
        },
        exec,
    );
    Ok(spec)
}

/// L̂_dj = K̂_dj − F̂ⱼ.
pub fn compute_ldhat(params: &Params3D, method: FhatMethod, exec: Exec) -> Result<ComplexGrid> {
    let mut spec = compute_kdhat_with(params, exec)?;
    subtract_fhat(params, method, spec.data_mut(), exec)?;
    Ok(spec)
}

/// Turns a spectrum into node values φ₀·Σ ĉⱼ e^{icⱼ·x}e^{−iα·x} in place.
pub(crate) fn synthesize_3d(spec: &mut ComplexGrid, c_tilde: f64, exec: Exec) -> Result<()> {
    let dims = spec.dims().to_vec();
    fft::synthesize(spec.data_mut(), &dims, exec)?;
    let phi0 = phi0_3d(c_tilde);
    spec.data_mut().iter_mut().for_each(|z| *z *= phi0);
    Ok(())
}

/// A point reduced to the central cell.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reduced3 {
    pub t: [f64; 3],
    pub r: f64,
    pub phase: Complex64,
}

pub(crate) fn reduce3(x: [f64; 3], a1: f64, a2: f64) -> Result<Reduced3> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    let wrap = |v: f64| v - 2.0 * PI * ((v + PI) / (2.0 * PI)).floor();
    let t = [wrap(x[0]), wrap(x[1]), x[2]];
    let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    if r < SOURCE_TOL {
        return Err(Error::EvalAtSource);
    }
    Ok(Reduced3 {
        t,
        r,
        phase: Complex64::from_polar(1.0, a1 * x[0] + a2 * x[1]),
    })
}

/// F(t) = e^{−iα·t}e^{ik|t|}𝒴_ε(|t|)/(4π|t|) in the central cell.
#[inline]
pub fn f_closed_form(t: [f64; 3], r: f64, p: &Params3D) -> Complex64 {
    if r >= 2.0 * p.eps {
        return Complex64::new(0.0, 0.0);
    }
    let y = RadialCutoff::new(p.eps).eval(r, 0);
    Complex64::from_polar(y / (4.0 * PI * r), p.k * r - p.alpha1 * t[0] - p.alpha2 * t[1])
}

pub(crate) fn header_params(p: &Params3D) -> HeaderParams {
    HeaderParams {
        k: p.k,
        alpha1: p.alpha1,
        alpha2: p.alpha2,
        c: p.c,
        c_tilde: p.c_tilde,
        eps: p.eps,
        n_modes: p.n_modes as u64,
        ..Default::default()
    }
}

pub(crate) fn params_from_header(h: &TableHeader) -> Params3D {
    Params3D {
        k: h.params.k,
        alpha1: h.params.alpha1,
        alpha2: h.params.alpha2,
        c: h.params.c,
        c_tilde: h.params.c_tilde,
        eps: h.params.eps,
        n_modes: h.params.n_modes as usize,
    }
}

pub(crate) fn check_grids(h: &TableHeader, grids: &[ComplexGrid], count: usize) -> Result<()> {
    let m = 2 * h.params.n_modes as usize;
    if grids.len() != count || grids.iter().any(|g| g.dims() != [m, m, m]) {
        return Err(Error::Format(format!("{:?} table needs {count} grids of {m}^3", h.kind)));
    }
    Ok(())
}

/// Prepared table for G_d.
#[derive(Clone, Debug)]
pub struct GreenTable3D {
    params: Params3D,
    grid: ComplexGrid,
    pub series: SeriesControl,
}

pub fn prepare3d(params: &Params3D) -> Result<GreenTable3D> {
    prepare3d_with(params, FhatMethod::Radial, Exec::default())
}

pub fn prepare3d_with(params: &Params3D, method: FhatMethod, exec: Exec) -> Result<GreenTable3D> {
    let p = params.validate()?;
    let mut grid = compute_ldhat(&p, method, exec)?;
    synthesize_3d(&mut grid, p.c_tilde, exec)?;
    Ok(GreenTable3D {
        params: p,
        grid,
        series: SeriesControl::default(),
    })
}

impl GreenTable3D {
    pub fn params(&self) -> &Params3D {
        &self.params
    }

    pub fn grid(&self) -> &ComplexGrid {
        &self.grid
    }

    /// G_d(x). Points with |x₃| ≥ c are evaluated from the eigenfunction series.
    pub fn eval(&self, x: [f64; 3]) -> Result<Complex64> {
        let p = &self.params;
        let red = reduce3(x, p.alpha1, p.alpha2)?;
        if x[2].abs() >= p.c {
            return series::g3d_eigen(x, p.k, p.alpha1, p.alpha2, &self.series);
        }
        let l = Stencil::for_grid(&self.grid, &red.t).eval(&self.grid);
        Ok((l + f_closed_form(red.t, red.r, p)) * red.phase)
    }

    pub fn eval_many(&self, points: &[[f64; 3]], exec: Exec) -> Vec<Result<Complex64>> {
        exec::map_collect(exec, points, |_, &x| self.eval(x))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        persist::save_table(path, TableKind::Green3D, header_params(&self.params), &[&self.grid])?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (h, mut grids) = persist::load_kind(path, TableKind::Green3D)?;
        check_grids(&h, &grids, 1)?;
        Ok(Self {
            params: params_from_header(&h),
            grid: grids.remove(0),
            series: SeriesControl::default(),
        })
    }
}

pub fn eval_g3d(table: &GreenTable3D, x: [f64; 3]) -> Result<Complex64> {
    table.eval(x)
}
