use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use super::khat::{apply_symbol, compute_khat_with};
use super::singular::{singular_factors, F12Cache, Moment};
use super::{check_grids, header_params, params_from_header, reduce, synthesize_2d};
use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::ComplexGrid;
use crate::interp::Stencil;
use crate::params::Params2D;
use crate::persist::{self, TableKind};
use crate::series::{self, Deriv2D, SeriesControl};

/// Which leading log term the x₂-derivative singular part carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum H2Form {
    /// −(k²/2)·x₂ ln|x|, the term ∂₂ of (k²/8π)|x|² ln|x| actually produces.
    #[default]
    Consistent,
    /// −(k²/2)·x₁ ln|x|, mirroring the x₁-derivative term. K₂ − h₂ then keeps
    /// a log-type kink at the origin; kept for comparison.
    Mirrored,
}

impl H2Form {
    fn flag(self) -> u64 {
        match self {
            H2Form::Consistent => 0,
            H2Form::Mirrored => 1,
        }
    }
}

/// Prepared tables for ∂₁G and ∂₂G.
#[derive(Clone, Debug)]
pub struct DerivTable2D {
    params: Params2D,
    form: H2Form,
    grids: [ComplexGrid; 2],
    pub series: SeriesControl,
}

/// h₁ and h₂ at a reduced point.
#[inline]
fn singular_parts(p: &Params2D, form: H2Form, y: &RadialCutoff, t: f64, x2: f64, r: f64) -> [Complex64; 2] {
    let Some((lny, yr2)) = singular_factors(y, r) else {
        return [Complex64::new(0.0, 0.0); 2];
    };
    let k2h = 0.5 * p.k * p.k;
    let a = p.alpha;
    let log_arm = match form {
        H2Form::Consistent => x2,
        H2Form::Mirrored => t,
    };
    let c = -1.0 / (2.0 * PI);
    let h1 = Complex64::new(-k2h * t * lny + t * yr2 - 0.5 * a * a * t * t * t * yr2, -a * t * t * yr2);
    let h2 = Complex64::new(-k2h * log_arm * lny + x2 * yr2 - 0.5 * a * a * t * t * x2 * yr2, -a * t * x2 * yr2);
    [h1 * c, h2 * c]
}

/// Builds the tables of K₁ − h₁ and K₂ − h₂, with Kₚ = e^{−iαx₁}∂ₚG.
pub fn prepare2d_deriv(params: &Params2D, cache: &F12Cache, form: H2Form) -> Result<DerivTable2D> {
    prepare2d_deriv_with(params, cache, form, Exec::default())
}

pub fn prepare2d_deriv_with(params: &Params2D, cache: &F12Cache, form: H2Form, exec: Exec) -> Result<DerivTable2D> {
    let p = params.validate()?;
    let cache = cache.for_params(&p, true)?;
    let khat = compute_khat_with(&p, exec)?;
    let n = p.n_modes;
    let mo = |m: Moment| cache.moment(m).map(|g| g.data());
    let (a10, a01) = (mo(Moment::A10)?, mo(Moment::A01)?);
    let (b10, b20, b30) = (mo(Moment::B10)?, mo(Moment::B20)?, mo(Moment::B30)?);
    let (b01, b11, b21) = (mo(Moment::B01)?, mo(Moment::B11)?, mo(Moment::B21)?);
    let log2 = match form {
        H2Form::Consistent => a01,
        H2Form::Mirrored => a10,
    };
    let k2h = 0.5 * p.k * p.k;
    let ia = Complex64::new(0.0, p.alpha);
    let a2h = 0.5 * p.alpha * p.alpha;
    let c = -1.0 / (2.0 * PI);
    let mut grids = Vec::with_capacity(2);
    for axis in 0..2 {
        let mut spec = khat.data().to_vec();
        apply_symbol(&mut spec, n, p.alpha, p.c_tilde, &[axis]);
        for (i, z) in spec.iter_mut().enumerate() {
            let h = if axis == 0 {
                -k2h * a10[i] + b10[i] - ia * b20[i] - a2h * b30[i]
            } else {
                -k2h * log2[i] + b01[i] - ia * b11[i] - a2h * b21[i]
            };
            *z -= c * h;
        }
        let g = synthesize_2d(spec, n, p.c_tilde, exec)?;
        if !g.data().iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter("derivative table is not finite".into()));
        }
        grids.push(g);
    }
    let g1 = grids.pop().unwrap();
    let g0 = grids.pop().unwrap();
    Ok(DerivTable2D {
        params: p,
        form,
        grids: [g0, g1],
        series: SeriesControl::default(),
    })
}

impl DerivTable2D {
    pub fn params(&self) -> &Params2D {
        &self.params
    }

    pub fn form(&self) -> H2Form {
        self.form
    }

    pub fn grids(&self) -> &[ComplexGrid; 2] {
        &self.grids
    }

    /// (∂₁G, ∂₂G) at x.
    pub fn eval(&self, x: [f64; 2]) -> Result<(Complex64, Complex64)> {
        let p = &self.params;
        let red = reduce(x, p.alpha)?;
        if x[1].abs() >= p.c {
            let d1 = series::g2d_deriv_eigen(x, p.k, p.alpha, &self.series, Deriv2D::D1)?;
            let d2 = series::g2d_deriv_eigen(x, p.k, p.alpha, &self.series, Deriv2D::D2)?;
            return Ok((d1, d2));
        }
        let st = Stencil::for_grid(&self.grids[0], &[red.t, red.x2]);
        let y = RadialCutoff::new(p.eps);
        let h = singular_parts(p, self.form, &y, red.t, red.x2, red.r);
        Ok((
            (st.eval(&self.grids[0]) + h[0]) * red.phase,
            (st.eval(&self.grids[1]) + h[1]) * red.phase,
        ))
    }

    pub fn eval_many(&self, points: &[[f64; 2]], exec: Exec) -> Vec<Result<(Complex64, Complex64)>> {
        exec::map_collect(exec, points, |_, &x| self.eval(x))
    }

    /// Largest second difference (scaled by 1/h²) of each regularized grid
    /// over the nodes within two cells of the origin, a cheap indicator of
    /// whether the singular part was removed cleanly.
    pub fn roughness(&self) -> [f64; 2] {
        self.grids.clone().map(|g| origin_roughness(&g))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut hp = header_params(&self.params);
        hp.flags = self.form.flag();
        persist::save_table(path, TableKind::Deriv2D, hp, &[&self.grids[0], &self.grids[1]])?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (h, mut grids) = persist::load_kind(path, TableKind::Deriv2D)?;
        check_grids(&h, &grids, 2)?;
        let form = if h.params.flags == 1 { H2Form::Mirrored } else { H2Form::Consistent };
        let g1 = grids.pop().unwrap();
        let g0 = grids.pop().unwrap();
        Ok(Self {
            params: params_from_header(&h),
            form,
            grids: [g0, g1],
            series: SeriesControl::default(),
        })
    }
}

pub(crate) fn origin_roughness(g: &ComplexGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for axis in 0..2 {
        let h = g.spacing(axis);
        for i in -2i64..=2 {
            for j in -2i64..=2 {
                let mut lo = [i, j];
                let mut hi = [i, j];
                lo[axis] -= 1;
                hi[axis] += 1;
                let d = g.get(&lo) - 2.0 * g.get(&[i, j]) + g.get(&hi);
                worst = worst.max(d.norm() / (h * h));
            }
        }
    }
    worst
}

/// Free-function form of [`DerivTable2D::eval`].
pub fn eval_g2d_deriv(table: &DerivTable2D, x: [f64; 2]) -> Result<(Complex64, Complex64)> {
    table.eval(x)
}
