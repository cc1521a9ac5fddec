//! Periodic uniform grids of complex samples and spectral index helpers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A periodic, uniformly sampled complex field in 2 or 3 dimensions.
///
/// Storage is row-major with axis order (x₁, x₂[, x₃]). Index `i` on an axis of
/// extent `M` and period `P` sits at the physical coordinate `i·P/M`, wrapped
/// to `[-P/2, P/2)`; index 0 is the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    dims: Vec<usize>,
    cell: Vec<f64>,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn zeros(dims: &[usize], cell: &[f64]) -> Self {
        let len = dims.iter().product();
        Self {
            dims: dims.to_vec(),
            cell: cell.to_vec(),
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn from_vec(dims: &[usize], cell: &[f64], data: Vec<Complex64>) -> Result<Self> {
        if dims.len() != cell.len() || !(2..=3).contains(&dims.len()) {
            return Err(Error::ExtentMismatch(format!(
                "{} extents with {} periods",
                dims.len(),
                cell.len()
            )));
        }
        let len: usize = dims.iter().product();
        if len != data.len() {
            return Err(Error::ExtentMismatch(format!(
                "extents {dims:?} need {len} samples, got {}",
                data.len()
            )));
        }
        Ok(Self {
            dims: dims.to_vec(),
            cell: cell.to_vec(),
            data,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Physical period along each axis.
    pub fn cell(&self) -> &[f64] {
        &self.cell
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.cell[axis] / self.dims[axis] as f64
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat offset of a (possibly negative or out-of-range) multi-index, taken
    /// modulo each extent.
    pub fn offset(&self, index: &[i64]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index
            .iter()
            .zip(&self.dims)
            .fold(0usize, |acc, (&i, &m)| acc * m + wrap_index(i, m))
    }

    pub fn get(&self, index: &[i64]) -> Complex64 {
        self.data[self.offset(index)]
    }

    /// Physical coordinate of node `i` on `axis`.
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let m = self.dims[axis];
        let signed = if i < m / 2 { i as i64 } else { i as i64 - m as i64 };
        signed as f64 * self.spacing(axis)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[inline]
pub fn wrap_index(i: i64, m: usize) -> usize {
    i.rem_euclid(m as i64) as usize
}

/// Storage slot of spectral index `j ∈ [-N, N)` in a length-2N axis.
#[inline]
pub fn spectral_slot(j: i64, n: usize) -> usize {
    wrap_index(j, 2 * n)
}

/// Spectral index represented by storage slot `s` of a length-2N axis.
#[inline]
pub fn slot_index(s: usize, n: usize) -> i64 {
    if s < n {
        s as i64
    } else {
        s as i64 - 2 * n as i64
    }
}

/// Extracts the coefficients `j ∈ [-n, n)²` from a larger wraparound-ordered
/// 2D spectrum of extent `big × big`.
pub fn crop_spectrum_2d(src: &[Complex64], big: usize, n: usize) -> Vec<Complex64> {
    let m = 2 * n;
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for s1 in 0..m {
        let b1 = wrap_index(slot_index(s1, n), big);
        for s2 in 0..m {
            let b2 = wrap_index(slot_index(s2, n), big);
            out[s1 * m + s2] = src[b1 * big + b2];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_wrap_to_half_open_cell() {
        let g = ComplexGrid::zeros(&[8, 4], &[2.0 * std::f64::consts::PI, 2.0]);
        assert_eq!(g.coordinate(0, 0), 0.0);
        assert!((g.coordinate(0, 4) + std::f64::consts::PI).abs() < 1e-15);
        assert!((g.coordinate(1, 3) + 0.5).abs() < 1e-15);
        assert_eq!(g.offset(&[-1, -1]), 7 * 4 + 3);
        assert_eq!(g.offset(&[9, 5]), 4 + 1);
    }

    #[test]
    fn length_checked() {
        assert!(ComplexGrid::from_vec(&[2, 2], &[1.0, 1.0], vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn spectral_slots_roundtrip() {
        for n in [2usize, 8] {
            for j in -(n as i64)..n as i64 {
                assert_eq!(slot_index(spectral_slot(j, n), n), j);
            }
        }
    }
}
