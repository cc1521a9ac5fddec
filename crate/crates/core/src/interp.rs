//! Local cubic interpolation on periodic grids.
//!
//! Each axis uses the four nodes surrounding the point (tensor-product cubic
//! Lagrange), so 16 nodes enter a 2D value and 64 a 3D value. The error is
//! O(h⁴) for smooth data.

use num_complex::Complex64;

use crate::grid::{wrap_index, ComplexGrid};

/// Node offsets and weights for one point, reusable across grids that share
/// extents and periods.
#[derive(Clone, Copy, Debug)]
pub struct Stencil {
    ndim: usize,
    idx: [[usize; 4]; 3],
    w: [[f64; 4]; 3],
}

#[inline]
fn weights(t: f64) -> [f64; 4] {
    let tm = t - 1.0;
    let tmm = t - 2.0;
    let tp = t + 1.0;
    [
        -t * tm * tmm / 6.0,
        tp * tm * tmm / 2.0,
        -tp * t * tmm / 2.0,
        tp * t * tm / 6.0,
    ]
}

impl Stencil {
    /// Stencil for the physical `point` on a grid with extents `dims` and
    /// periods `cell`.
    pub fn new(dims: &[usize], cell: &[f64], point: &[f64]) -> Self {
        let ndim = dims.len();
        debug_assert!(ndim <= 3 && point.len() == ndim);
        let mut idx = [[0usize; 4]; 3];
        let mut w = [[0.0; 4]; 3];
        for a in 0..ndim {
            let m = dims[a];
            let u = point[a] * m as f64 / cell[a];
            let base = u.floor();
            let t = u - base;
            let base = base as i64;
            for (o, slot) in idx[a].iter_mut().enumerate() {
                *slot = wrap_index(base - 1 + o as i64, m);
            }
            w[a] = weights(t);
        }
        Self { ndim, idx, w }
    }

    pub fn for_grid(grid: &ComplexGrid, point: &[f64]) -> Self {
        Self::new(grid.dims(), grid.cell(), point)
    }

    /// Interpolated value of `data`, laid out with the extents the stencil
    /// was built for.
    #[inline]
    pub fn apply(&self, data: &[Complex64], dims: &[usize]) -> Complex64 {
        match self.ndim {
            2 => {
                let m2 = dims[1];
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..4 {
                    let row = self.idx[0][a] * m2;
                    let mut line = Complex64::new(0.0, 0.0);
                    for b in 0..4 {
                        line += data[row + self.idx[1][b]] * self.w[1][b];
                    }
                    acc += line * self.w[0][a];
                }
                acc
            }
            3 => {
                let (m2, m3) = (dims[1], dims[2]);
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..4 {
                    let plane = self.idx[0][a] * m2;
                    let mut pa = Complex64::new(0.0, 0.0);
                    for b in 0..4 {
                        let row = (plane + self.idx[1][b]) * m3;
                        let mut line = Complex64::new(0.0, 0.0);
                        for c in 0..4 {
                            line += data[row + self.idx[2][c]] * self.w[2][c];
                        }
                        pa += line * self.w[1][b];
                    }
                    acc += pa * self.w[0][a];
                }
                acc
            }
            _ => unreachable!("grids are 2D or 3D"),
        }
    }

    pub fn eval(&self, grid: &ComplexGrid) -> Complex64 {
        self.apply(grid.data(), grid.dims())
    }
}

/// Cubic interpolant of `grid` at the physical `point`.
pub fn interp(grid: &ComplexGrid, point: &[f64]) -> Complex64 {
    Stencil::for_grid(grid, point).eval(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample(dims: &[usize], cell: &[f64], f: impl Fn(&[f64]) -> Complex64) -> ComplexGrid {
        let mut g = ComplexGrid::zeros(dims, cell);
        let n = g.len();
        let mut x = vec![0.0; dims.len()];
        for flat in 0..n {
            let mut rem = flat;
            for a in (0..dims.len()).rev() {
                x[a] = g.coordinate(a, rem % dims[a]);
                rem /= dims[a];
            }
            g.data_mut()[flat] = f(&x);
        }
        g
    }

    #[test]
    fn reproduces_nodes() {
        let g = sample(&[16, 8], &[2.0 * PI, 2.0], |x| Complex64::new(x[0].sin(), x[1]));
        for i in 0..16 {
            for j in 0..8 {
                let p = [g.coordinate(0, i), g.coordinate(1, j)];
                assert_eq!(interp(&g, &p), g.get(&[i as i64, j as i64]));
            }
        }
    }

    #[test]
    fn exact_for_cubics_away_from_the_seam() {
        let g = sample(&[32, 32], &[2.0, 2.0], |x| {
            Complex64::new(x[0].powi(3) - 2.0 * x[0] * x[1] * x[1], x[1].powi(3))
        });
        for &p in &[[0.123, -0.31], [0.5, 0.52], [-0.77, 0.01]] {
            let v = interp(&g, &p);
            let exact = Complex64::new(p[0].powi(3) - 2.0 * p[0] * p[1] * p[1], p[1].powi(3));
            assert!((v - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let c_t = 1.0;
        let f = |x: &[f64]| Complex64::new(x[0].sin() * (PI * x[1] / c_t).cos(), 0.0);
        let pts: Vec<[f64; 2]> = (0..50)
            .map(|i| {
                let s = i as f64 * 0.618_033_988_7;
                [(s.fract() - 0.5) * 6.0, ((s * 1.7).fract() - 0.5) * 1.2]
            })
            .collect();
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let g = sample(&[n, n], &[2.0 * PI, 2.0 * c_t], f);
            let e = pts
                .iter()
                .map(|p| (interp(&g, p) - f(p)).norm())
                .fold(0.0, f64::max);
            errs.push(e);
        }
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() > 3.8, "{errs:?}");
        }
    }

    #[test]
    fn tricubic_matches_smooth_function() {
        let f = |x: &[f64]| Complex64::from_polar(1.0, x[0] + 2.0 * x[1] - x[2] * PI);
        let g = sample(&[32, 32, 32], &[2.0 * PI, 2.0 * PI, 2.0], f);
        let p = [0.3, -1.1, 0.45];
        assert!((interp(&g, &p) - f(&p)).norm() < 1e-3);
    }
}
