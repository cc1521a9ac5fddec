//! The singly periodic Helmholtz pipeline: a regularized function L on a
//! 2N × 2N grid of [−π, π) × [−c̃, c̃), evaluated by cubic interpolation with
//! the singular part added back in closed form.

mod deriv;
mod diff;
mod khat;
mod singular;

pub use deriv::{eval_g2d_deriv, prepare2d_deriv, DerivTable2D, H2Form};
pub use diff::{eval_t_diff, prepare2d_diff, DiffTable2D};
pub use khat::{compute_khat, compute_khat_with};
pub use singular::{compute_f12cache, phi0_2d, F12Cache, Moment};

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::fft;
use crate::grid::ComplexGrid;
use crate::interp::Stencil;
use crate::params::Params2D;
use crate::persist::{self, HeaderParams, TableHeader, TableKind};
use crate::series::{self, SeriesControl};

/// Points closer than this to a lattice source are rejected.
pub const SOURCE_TOL: f64 = 1e-14;

/// A point reduced to the central cell.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reduced2 {
    pub t: f64,
    pub x2: f64,
    pub r: f64,
    /// e^{iαx₁} for the original, unwrapped x₁.
    pub phase: Complex64,
}

pub(crate) fn reduce(x: [f64; 2], alpha: f64) -> Result<Reduced2> {
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(Error::InvalidParameter("evaluation point must be finite".into()));
    }
    let t = x[0] - 2.0 * PI * ((x[0] + PI) / (2.0 * PI)).floor();
    let r = t.hypot(x[1]);
    if r < SOURCE_TOL {
        return Err(Error::EvalAtSource);
    }
    Ok(Reduced2 {
        t,
        x2: x[1],
        r,
        phase: Complex64::from_polar(1.0, alpha * x[0]),
    })
}

/// Grid values φ₀·Σⱼ ĉⱼ e^{i(j₁x₁ + j₂πx₂/c̃)} at the 2N × 2N nodes.
pub(crate) fn synthesize_2d(mut spec: Vec<Complex64>, n: usize, c_tilde: f64, exec: Exec) -> Result<ComplexGrid> {
    let m = 2 * n;
    fft::synthesize(&mut spec, &[m, m], exec)?;
    let phi0 = phi0_2d(c_tilde);
    spec.iter_mut().for_each(|z| *z *= phi0);
    ComplexGrid::from_vec(&[m, m], &[2.0 * PI, 2.0 * c_tilde], spec)
}

pub(crate) fn header_params(p: &Params2D) -> HeaderParams {
    HeaderParams {
        k: p.k,
        alpha1: p.alpha,
        c: p.c,
        c_tilde: p.c_tilde,
        eps: p.eps,
        n_modes: p.n_modes as u64,
        fft_res: p.fft_res as u64,
        ..Default::default()
    }
}

pub(crate) fn params_from_header(h: &TableHeader) -> Params2D {
    Params2D {
        k: h.params.k,
        alpha: h.params.alpha1,
        c: h.params.c,
        c_tilde: h.params.c_tilde,
        eps: h.params.eps,
        n_modes: h.params.n_modes as usize,
        fft_res: h.params.fft_res as usize,
    }
}

pub(crate) fn check_grids(h: &TableHeader, grids: &[ComplexGrid], count: usize) -> Result<()> {
    let m = 2 * h.params.n_modes as usize;
    if grids.len() != count || grids.iter().any(|g| g.dims() != [m, m]) {
        return Err(Error::Format(format!(
            "{:?} table needs {count} grids of {m} x {m}",
            h.kind
        )));
    }
    Ok(())
}

/// Prepared table for G.
#[derive(Clone, Debug)]
pub struct GreenTable2D {
    params: Params2D,
    grid: ComplexGrid,
    /// Stopping rule for points delegated to the series (|x₂| ≥ c).
    pub series: SeriesControl,
}

/// Builds the table of L = K − f₁ + iαf₂.
pub fn prepare2d(params: &Params2D, cache: &F12Cache) -> Result<GreenTable2D> {
    prepare2d_with(params, cache, Exec::default())
}

pub fn prepare2d_with(params: &Params2D, cache: &F12Cache, exec: Exec) -> Result<GreenTable2D> {
    let p = params.validate()?;
    let cache = cache.for_params(&p, false)?;
    let khat = compute_khat_with(&p, exec)?;
    let ialpha = Complex64::new(0.0, p.alpha);
    let spec: Vec<Complex64> = khat
        .data()
        .iter()
        .zip(cache.f1())
        .zip(cache.f2())
        .map(|((k, f1), f2)| k - f1 + ialpha * f2)
        .collect();
    Ok(GreenTable2D {
        params: p,
        grid: synthesize_2d(spec, p.n_modes, p.c_tilde, exec)?,
        series: SeriesControl::default(),
    })
}

/// f₁ − iαf₂ at a reduced point, zero outside the cutoff support.
#[inline]
fn singular_part(y: &RadialCutoff, alpha: f64, t: f64, r: f64) -> Complex64 {
    match singular::singular_factors(y, r) {
        Some((lny, _)) => {
            let f1 = -lny / (2.0 * PI);
            Complex64::new(f1, -alpha * t * f1)
        }
        None => Complex64::new(0.0, 0.0),
    }
}

impl GreenTable2D {
    pub fn params(&self) -> &Params2D {
        &self.params
    }

    /// Values of L at the grid nodes.
    pub fn grid(&self) -> &ComplexGrid {
        &self.grid
    }

    /// G(x). Points with |x₂| ≥ c are evaluated from the eigenfunction series.
    pub fn eval(&self, x: [f64; 2]) -> Result<Complex64> {
        let p = &self.params;
        let red = reduce(x, p.alpha)?;
        if x[1].abs() >= p.c {
            return series::g2d_eigen(x, p.k, p.alpha, &self.series);
        }
        let st = Stencil::for_grid(&self.grid, &[red.t, red.x2]);
        let l = st.eval(&self.grid);
        let y = RadialCutoff::new(p.eps);
        Ok((l + singular_part(&y, p.alpha, red.t, red.r)) * red.phase)
    }

    pub fn eval_many(&self, points: &[[f64; 2]], exec: Exec) -> Vec<Result<Complex64>> {
        exec::map_collect(exec, points, |_, &x| self.eval(x))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        persist::save_table(path, TableKind::Green2D, header_params(&self.params), &[&self.grid])?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (h, mut grids) = persist::load_kind(path, TableKind::Green2D)?;
        check_grids(&h, &grids, 1)?;
        Ok(Self {
            params: params_from_header(&h),
            grid: grids.remove(0),
            series: SeriesControl::default(),
        })
    }
}

/// Free-function form of [`GreenTable2D::eval`].
pub fn eval_g2d(table: &GreenTable2D, x: [f64; 2]) -> Result<Complex64> {
    table.eval(x)
}
