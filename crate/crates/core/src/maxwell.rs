//! The Maxwell Green's tensor 𝔾 = G_d𝕀 + ∇∇G_d/k² from seven regularized
//! grids: L_d and L^pq for pq ∈ {11, 12, 13, 22, 23, 33}.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::ComplexGrid;
use crate::helm3d::{
    check_grids, compute_ldhat, f_closed_form, header_params, params_from_header, reduce3, synthesize_3d,
    wave_vector, FhatMethod,
};
use crate::interp::Stencil;
use crate::params::Params3D;
use crate::persist::{self, TableKind};
use crate::series::{self, SeriesControl};

/// Index pairs of the six stored second derivatives.
pub const PAIRS: [[usize; 2]; 6] = [[0, 0], [0, 1], [0, 2], [1, 1], [1, 2], [2, 2]];

/// Position of (p, q) in [`PAIRS`].
#[inline]
pub fn pair_index(p: usize, q: usize) -> usize {
    let (a, b) = if p <= q { (p, q) } else { (q, p) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

/// 𝔾 = g𝕀 + H/k² with H given by its six distinct entries.
pub fn assemble_tensor(g: Complex64, hess: &[Complex64; 6], k: f64) -> [[Complex64; 3]; 3] {
    let inv = 1.0 / (k * k);
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (p, row) in out.iter_mut().enumerate() {
        for (q, v) in row.iter_mut().enumerate() {
            *v = hess[pair_index(p, q)] * inv;
            if p == q {
                *v += g;
            }
        }
    }
    out
}

/// F^pq(t) = e^{−iα·t}∂ₚ∂_qΦ(t) at a central-cell point, all six pairs.
pub fn f_pq_closed_form(t: [f64; 3], params: &Params3D) -> Result<[Complex64; 6]> {
    let r = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    if r < crate::helm3d::SOURCE_TOL {
        return Err(Error::EvalAtSource);
    }
    Ok(f_pq(t, r, params))
}

fn f_pq(t: [f64; 3], r: f64, p: &Params3D) -> [Complex64; 6] {
    let zero = [Complex64::new(0.0, 0.0); 6];
    if r >= 2.0 * p.eps {
        return zero;
    }
    let (y, y1, y2) = RadialCutoff::new(p.eps).eval_all(r);
    let ik = Complex64::new(0.0, p.k);
    let u = Complex64::from_polar(1.0 / (4.0 * PI * r), p.k * r - p.alpha1 * t[0] - p.alpha2 * t[1]);
    let a = ik - 1.0 / r;
    let u1 = u * a;
    let u2 = u * (a * a + 1.0 / (r * r));
    let g1 = u1 * y + u * y1;
    let g2 = u2 * y + 2.0 * u1 * y1 + u * y2;
    let mut out = zero;
    for (o, &[i, j]) in out.iter_mut().zip(PAIRS.iter()) {
        let xx = t[i] * t[j] / (r * r);
        let delta = if i == j { 1.0 } else { 0.0 };
        *o = g2 * xx + g1 * ((delta - xx) / r);
    }
    out
}

/// Prepared grids for G_d and its Hessian.
#[derive(Clone, Debug)]
pub struct MaxwellTable {
    params: Params3D,
    /// L_d followed by L^pq in [`PAIRS`] order.
    grids: Vec<ComplexGrid>,
    pub series: SeriesControl,
}

pub fn prepare_maxwell(params: &Params3D) -> Result<MaxwellTable> {
    prepare_maxwell_with(params, FhatMethod::Radial, Exec::default())
}

pub fn prepare_maxwell_with(params: &Params3D, method: FhatMethod, exec: Exec) -> Result<MaxwellTable> {
    let p = params.validate()?;
    let mut ld = compute_ldhat(&p, method, exec)?;
    let m = 2 * p.n_modes;
    let mut grids = Vec::with_capacity(7);
    for &[a, b] in PAIRS.iter() {
        let mut g = ld.clone();
        exec::for_each_chunk(exec, g.data_mut(), m * m, |s1, slab| {
            for (rest, z) in slab.iter_mut().enumerate() {
                let c = wave_vector(&p, [s1, rest / m, rest % m]);
                *z *= -c[a] * c[b];
            }
        });
        synthesize_3d(&mut g, p.c_tilde, exec)?;
        grids.push(g);
    }
    synthesize_3d(&mut ld, p.c_tilde, exec)?;
    grids.insert(0, ld);
    Ok(MaxwellTable {
        params: p,
        grids,
        series: SeriesControl::default(),
    })
}

impl MaxwellTable {
    pub fn params(&self) -> &Params3D {
        &self.params
    }

    /// L_d followed by the six L^pq grids.
    pub fn grids(&self) -> &[ComplexGrid] {
        &self.grids
    }

    /// G_d(x) and its Hessian entries in [`PAIRS`] order.
    pub fn eval_components(&self, x: [f64; 3]) -> Result<(Complex64, [Complex64; 6])> {
        let p = &self.params;
        let red = reduce3(x, p.alpha1, p.alpha2)?;
        if x[2].abs() >= p.c {
            let e = series::g3d_eigen_hessian(x, p.k, p.alpha1, p.alpha2, &self.series)?;
            return Ok((e.value, e.hessian));
        }
        let st = Stencil::for_grid(&self.grids[0], &red.t);
        let g = (st.eval(&self.grids[0]) + f_closed_form(red.t, red.r, p)) * red.phase;
        let f = f_pq(red.t, red.r, p);
        let mut h = [Complex64::new(0.0, 0.0); 6];
        for (i, v) in h.iter_mut().enumerate() {
            *v = (st.eval(&self.grids[i + 1]) + f[i]) * red.phase;
        }
        Ok((g, h))
    }

    /// 𝔾(x).
    pub fn eval(&self, x: [f64; 3]) -> Result<[[Complex64; 3]; 3]> {
        let (g, h) = self.eval_components(x)?;
        Ok(assemble_tensor(g, &h, self.params.k))
    }

    pub fn eval_many(&self, points: &[[f64; 3]], exec: Exec) -> Vec<Result<[[Complex64; 3]; 3]>> {
        exec::map_collect(exec, points, |_, &x| self.eval(x))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let g: Vec<&ComplexGrid> = self.grids.iter().collect();
        persist::save_table(path, TableKind::Maxwell3D, header_params(&self.params), &g)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (h, grids) = persist::load_kind(path, TableKind::Maxwell3D)?;
        check_grids(&h, &grids, 7)?;
        Ok(Self {
            params: params_from_header(&h),
            grids,
            series: SeriesControl::default(),
        })
    }
}

pub fn eval_maxwell(table: &MaxwellTable, x: [f64; 3]) -> Result<[[Complex64; 3]; 3]> {
    table.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_finite_differences() {
        let p = Params3D::new(1.0, 0.1, 0.2, 4);
        let phi = |x: [f64; 3]| {
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            Complex64::from_polar(RadialCutoff::new(p.eps).eval(r, 0) / (4.0 * PI * r), p.k * r)
        };
        // one point on the flat part of the cutoff, one on its transition band
        for x in [[0.1, 0.05, 0.08], [0.3, -0.3, 0.35]] {
            let f = f_pq_closed_form(x, &p).unwrap();
            let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let back = Complex64::from_polar(1.0, -p.alpha1 * x[0] - p.alpha2 * x[1]);
            let h = 1e-4;
            for (i, &[a, b]) in PAIRS.iter().enumerate() {
                let at = |da: f64, db: f64| {
                    let mut y = x;
                    y[a] += da;
                    y[b] += db;
                    phi(y)
                };
                let fd = if a == b {
                    (at(h, 0.0) - 2.0 * phi(x) + at(-h, 0.0)) / (h * h)
                } else {
                    (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
                };
                assert!((fd * back - f[i]).norm() < 1e-5 * scale, "{x:?} pair {i}");
            }
        }
    }

    #[test]
    fn vanishes_outside_support() {
        let p = Params3D::new(1.0, 0.1, 0.2, 4);
        assert!(f_pq_closed_form([0.6, 0.5, 0.2], &p).unwrap().iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    }
}
