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
use crate::series::{self, SeriesControl};

/// Prepared tables for the second-derivative differences
/// Tₚq = ∂ₚ∂_qG(k₁) − ∂ₚ∂_qG(k₂), pq ∈ {11, 12, 22}.
#[derive(Clone, Debug)]
pub struct DiffTable2D {
    params: Params2D,
    k2: f64,
    grids: [ComplexGrid; 3],
    pub series: SeriesControl,
}

const PAIRS: [[usize; 2]; 3] = [[0, 0], [0, 1], [1, 1]];

/// h₁₁, h₁₂, h₂₂ at a reduced point.
#[inline]
fn singular_parts(scale: f64, alpha: f64, y: &RadialCutoff, t: f64, x2: f64, r: f64) -> [Complex64; 3] {
    let Some((lny, yr2)) = singular_factors(y, r) else {
        return [Complex64::new(0.0, 0.0); 3];
    };
    let ha = 0.5 * alpha;
    let h11 = Complex64::new(0.5 * lny + 0.5 * t * t * yr2, -ha * (t * lny + t * t * t * yr2));
    let h12 = Complex64::new(0.5 * t * x2 * yr2, -ha * t * t * x2 * yr2);
    let h22 = Complex64::new(0.5 * lny + 0.5 * x2 * x2 * yr2, -ha * (t * lny + t * x2 * x2 * yr2));
    [h11 * scale, h12 * scale, h22 * scale]
}

/// Builds the tables of Tₚq − hₚq for the wavenumbers of `p1` and `p2`,
/// which must agree in every other parameter.
pub fn prepare2d_diff(p1: &Params2D, p2: &Params2D, cache: &F12Cache) -> Result<DiffTable2D> {
    prepare2d_diff_with(p1, p2, cache, Exec::default())
}

pub fn prepare2d_diff_with(p1: &Params2D, p2: &Params2D, cache: &F12Cache, exec: Exec) -> Result<DiffTable2D> {
    let same = Params2D { k: p1.k, ..*p2 };
    if same != *p1 {
        return Err(Error::ParamMismatch(
            "difference tables need equal alpha, geometry, n_modes and fft_res".into(),
        ));
    }
    let p = p1.validate()?;
    p2.validate()?;
    let cache = cache.for_params(&p, true)?;
    let n = p.n_modes;
    let k1hat = compute_khat_with(&p, exec)?;
    let dk: Vec<Complex64> = if p1.k == p2.k {
        vec![Complex64::new(0.0, 0.0); k1hat.len()]
    } else {
        let k2hat = compute_khat_with(p2, exec)?;
        k1hat.data().iter().zip(k2hat.data()).map(|(a, b)| a - b).collect()
    };
    let mo = |m: Moment| cache.moment(m).map(|g| g.data());
    let (a00, a10) = (mo(Moment::A00)?, mo(Moment::A10)?);
    let (b20, b30, b11, b21, b02, b12) = (
        mo(Moment::B20)?,
        mo(Moment::B30)?,
        mo(Moment::B11)?,
        mo(Moment::B21)?,
        mo(Moment::B02)?,
        mo(Moment::B12)?,
    );
    let scale = (p1.k * p1.k - p2.k * p2.k) / (2.0 * PI);
    let ha = Complex64::new(0.0, 0.5 * p.alpha);
    let mut grids = Vec::with_capacity(3);
    for (which, pair) in PAIRS.iter().enumerate() {
        let mut spec = dk.clone();
        apply_symbol(&mut spec, n, p.alpha, p.c_tilde, pair);
        if scale != 0.0 {
            for (i, z) in spec.iter_mut().enumerate() {
                let h = match which {
                    0 => 0.5 * a00[i] - ha * a10[i] + 0.5 * b20[i] - ha * b30[i],
                    1 => 0.5 * b11[i] - ha * b21[i],
                    _ => 0.5 * a00[i] - ha * a10[i] + 0.5 * b02[i] - ha * b12[i],
                };
                *z -= scale * h;
            }
        }
        grids.push(synthesize_2d(spec, n, p.c_tilde, exec)?);
    }
    let g22 = grids.pop().unwrap();
    let g12 = grids.pop().unwrap();
    let g11 = grids.pop().unwrap();
    Ok(DiffTable2D {
        params: p,
        k2: p2.k,
        grids: [g11, g12, g22],
        series: SeriesControl::default(),
    })
}

impl DiffTable2D {
    /// Parameters of the first wavenumber k₁.
    pub fn params(&self) -> &Params2D {
        &self.params
    }

    pub fn k1(&self) -> f64 {
        self.params.k
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn grids(&self) -> &[ComplexGrid; 3] {
        &self.grids
    }

    /// (T₁₁, T₁₂, T₂₂) at x.
    pub fn eval(&self, x: [f64; 2]) -> Result<[Complex64; 3]> {
        let p = &self.params;
        let red = reduce(x, p.alpha)?;
        if x[1].abs() >= p.c {
            let a = series::g2d_eigen_all(x, p.k, p.alpha, &self.series)?;
            let b = series::g2d_eigen_all(x, self.k2, p.alpha, &self.series)?;
            return Ok([a.d11 - b.d11, a.d12 - b.d12, a.d22 - b.d22]);
        }
        let st = Stencil::for_grid(&self.grids[0], &[red.t, red.x2]);
        let y = RadialCutoff::new(p.eps);
        let scale = (p.k * p.k - self.k2 * self.k2) / (2.0 * PI);
        let h = singular_parts(scale, p.alpha, &y, red.t, red.x2, red.r);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (o, (g, hs)) in out.iter_mut().zip(self.grids.iter().zip(h)) {
            *o = (st.eval(g) + hs) * red.phase;
        }
        Ok(out)
    }

    pub fn eval_many(&self, points: &[[f64; 2]], exec: Exec) -> Vec<Result<[Complex64; 3]>> {
        exec::map_collect(exec, points, |_, &x| self.eval(x))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut hp = header_params(&self.params);
        hp.k2 = self.k2;
        let g: Vec<&ComplexGrid> = self.grids.iter().collect();
        persist::save_table(path, TableKind::Diff2D, hp, &g)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (h, mut grids) = persist::load_kind(path, TableKind::Diff2D)?;
        check_grids(&h, &grids, 3)?;
        let g22 = grids.pop().unwrap();
        let g12 = grids.pop().unwrap();
        let g11 = grids.pop().unwrap();
        Ok(Self {
            params: params_from_header(&h),
            k2: h.params.k2,
            grids: [g11, g12, g22],
            series: SeriesControl::default(),
        })
    }
}

/// Free-function form of [`DiffTable2D::eval`].
pub fn eval_t_diff(table: &DiffTable2D, x: [f64; 2]) -> Result<[Complex64; 3]> {
    table.eval(x)
}
