//! FFT-based evaluation of quasi-periodic Green's functions for the
//! Helmholtz equation in 2D (one periodic direction) and 3D (two periodic
//! directions), and of the corresponding Maxwell Green's tensor.
//!
//! Each pipeline prepares a regularized table once and then evaluates at
//! arbitrary points by local interpolation plus a closed-form singular part.

pub mod axial;
pub mod cutoff;
pub mod error;
pub mod exec;
pub mod fft;
pub mod grid;
pub mod helm2d;
pub mod helm3d;
pub mod interp;
pub mod maxwell;
pub mod params;
pub mod persist;
pub mod quad;
pub mod series;

pub use error::{Error, Result};
pub use exec::Exec;
pub use grid::ComplexGrid;
pub use helm2d::{
    compute_f12cache, compute_khat, eval_g2d, eval_g2d_deriv, eval_t_diff, prepare2d, prepare2d_deriv, prepare2d_diff,
    DerivTable2D, DiffTable2D, F12Cache, GreenTable2D, H2Form,
};
pub use helm3d::{compute_fhat, compute_kdhat, eval_g3d, prepare3d, FhatMethod, GreenTable3D};
pub use maxwell::{eval_maxwell, f_pq_closed_form, prepare_maxwell, MaxwellTable};
pub use params::{Params2D, Params3D};
pub use series::SeriesControl;
