//! Multidimensional complex FFTs on row-major arrays.
//!
//! Forward transforms compute Σ g·e^{−i⟨ω, x⟩} without normalization; the
//! inverse carries the factor 1/(product of transformed extents), so
//! `ifft(fft(g)) == g`. Spectra use the usual wraparound order.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::ComplexGrid;

/// Columns gathered per batch when transforming a strided axis.
const COLUMN_BATCH: usize = 64;

/// Unnormalized in-place transform of `data` (extents `dims`) along `axes`.
pub fn transform(
    data: &mut [Complex64],
    dims: &[usize],
    axes: &[usize],
    direction: FftDirection,
    exec: Exec,
) -> Result<()> {
    let total: usize = dims.iter().product();
    if total != data.len() {
        return Err(Error::ExtentMismatch(format!(
            "extents {dims:?} do not match {} samples",
            data.len()
        )));
    }
    let mut planner = FftPlanner::new();
    for &axis in axes {
        if axis >= dims.len() {
            return Err(Error::ExtentMismatch(format!("axis {axis} out of range")));
        }
        if !dims[axis].is_power_of_two() {
            return Err(Error::ExtentMismatch(format!(
                "extent {} is not a power of two",
                dims[axis]
            )));
        }
        let plan = planner.plan_fft(dims[axis], direction);
        transform_axis(data, dims, axis, plan, exec);
    }
    Ok(())
}

fn transform_axis(
    data: &mut [Complex64],
    dims: &[usize],
    axis: usize,
    plan: Arc<dyn Fft<f64>>,
    exec: Exec,
) {
    let n = dims[axis];
    let stride: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    if stride == 1 {
        let lines_per_task = (4096 / n).max(1);
        exec::for_each_chunk(exec, data, n * lines_per_task, |_, chunk| plan.process(chunk));
        return;
    }
    let block = n * stride;
    let run_block = |blk: &mut [Complex64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); n * COLUMN_BATCH];
        let mut c0 = 0;
        while c0 < stride {
            let width = COLUMN_BATCH.min(stride - c0);
            let lines = &mut buf[..n * width];
            for i in 0..n {
                let row = &blk[i * stride + c0..i * stride + c0 + width];
                for (b, &v) in row.iter().enumerate() {
                    lines[b * n + i] = v;
                }
            }
            plan.process(lines);
            for i in 0..n {
                let row = &mut blk[i * stride + c0..i * stride + c0 + width];
                for (b, v) in row.iter_mut().enumerate() {
                    *v = lines[b * n + i];
                }
            }
            c0 += width;
        }
    };
    if outer > 1 {
        exec::for_each_chunk(exec, data, block, |_, blk| run_block(blk));
    } else {
        run_block(data);
    }
}

/// Forward transform of `grid` along `axes`.
pub fn fft(grid: &ComplexGrid, axes: &[usize]) -> Result<ComplexGrid> {
    let mut out = grid.clone();
    fft_in_place(&mut out, axes)?;
    Ok(out)
}

/// Normalized inverse transform of `grid` along `axes`.
pub fn ifft(grid: &ComplexGrid, axes: &[usize]) -> Result<ComplexGrid> {
    let mut out = grid.clone();
    ifft_in_place(&mut out, axes)?;
    Ok(out)
}

pub fn fft_in_place(grid: &mut ComplexGrid, axes: &[usize]) -> Result<()> {
    let dims = grid.dims().to_vec();
    transform(grid.data_mut(), &dims, axes, FftDirection::Forward, Exec::default())
}

pub fn ifft_in_place(grid: &mut ComplexGrid, axes: &[usize]) -> Result<()> {
    let dims = grid.dims().to_vec();
    transform(grid.data_mut(), &dims, axes, FftDirection::Inverse, Exec::default())?;
    let scale = 1.0 / axes.iter().map(|&a| dims[a] as f64).product::<f64>();
    grid.data_mut().iter_mut().for_each(|z| *z *= scale);
    Ok(())
}

/// Unnormalized synthesis Σ_j ĉ_j e^{+i j·m 2π/M} over all axes.
pub fn synthesize(data: &mut [Complex64], dims: &[usize], exec: Exec) -> Result<()> {
    let axes: Vec<usize> = (0..dims.len()).collect();
    transform(data, dims, &axes, FftDirection::Inverse, exec)
}

/// Unnormalized analysis Σ_m g_m e^{−i j·m 2π/M} over all axes.
pub fn analyze(data: &mut [Complex64], dims: &[usize], exec: Exec) -> Result<()> {
    let axes: Vec<usize> = (0..dims.len()).collect();
    transform(data, dims, &axes, FftDirection::Forward, exec)
}

/// Forward DFT, restricted to outputs j ∈ [−N, N)^d, of a function sampled
/// on a `res^d` periodic grid that vanishes outside the box |mₐ| ≤ reach[a].
///
/// Equivalent to transforming the full grid and cropping, but only the lines
/// that can be nonzero are transformed. Output is in wraparound order over
/// the (2N)^d spectral grid.
pub fn pruned_forward<F>(res: usize, reach: &[usize], n: usize, sample: F, exec: Exec) -> Vec<Complex64>
where
    F: Fn(&[i64]) -> Complex64 + Sync,
{
    let d = reach.len();
    let m = 2 * n;
    let plan = FftPlanner::new().plan_fft_forward(res);
    let mut shape: Vec<usize> = reach.iter().map(|&r| 2 * r + 1).collect();
    let total: usize = shape.iter().product();
    let points: Vec<usize> = (0..total).collect();
    let mut data = exec::map_collect(exec, &points, |_, &flat| {
        let mut idx = [0i64; 3];
        let mut rem = flat;
        for a in (0..d).rev() {
            idx[a] = (rem % shape[a]) as i64 - reach[a] as i64;
            rem /= shape[a];
        }
        sample(&idx[..d])
    });
    for axis in (0..d).rev() {
        let len = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let r = reach[axis] as i64;
        let lines: Vec<usize> = (0..outer * stride).collect();
        let spectra = exec::map_collect(exec, &lines, |_, &line| {
            let (o, s) = (line / stride, line % stride);
            let mut buf = vec![Complex64::new(0.0, 0.0); res];
            for i in 0..len {
                buf[(i as i64 - r).rem_euclid(res as i64) as usize] = data[(o * len + i) * stride + s];
            }
            plan.process(&mut buf);
            (0..m)
                .map(|slot| {
                    let j = if slot < n { slot as i64 } else { slot as i64 - m as i64 };
                    buf[j.rem_euclid(res as i64) as usize]
                })
                .collect::<Vec<_>>()
        });
        let mut next = vec![Complex64::new(0.0, 0.0); outer * m * stride];
        for (line, spec) in spectra.into_iter().enumerate() {
            let (o, s) = (line / stride, line % stride);
            for (slot, v) in spec.into_iter().enumerate() {
                next[(o * m + slot) * stride + s] = v;
            }
        }
        data = next;
        shape[axis] = m;
    }
    data
}
