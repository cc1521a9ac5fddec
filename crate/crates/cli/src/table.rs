//! A uniform view over the five table kinds.

use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use qpgreen::helm2d::{prepare2d_deriv, DerivTable2D, DiffTable2D, F12Cache, H2Form};
use qpgreen::persist::{read_header, TableKind};
use qpgreen::series::{self, Deriv2D, SeriesControl};
use qpgreen::{
    prepare2d, prepare2d_diff, Exec, FhatMethod, GreenTable2D, GreenTable3D, MaxwellTable, Params2D, Params3D,
};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Helm2d,
    Helm3d,
    Maxwell,
    #[value(name = "helm2d-deriv")]
    Helm2dDeriv,
    #[value(name = "helm2d-diff")]
    Helm2dDiff,
}

impl Mode {
    pub fn dim(self) -> usize {
        match self {
            Mode::Helm2d | Mode::Helm2dDeriv | Mode::Helm2dDiff => 2,
            Mode::Helm3d | Mode::Maxwell => 3,
        }
    }

    fn from_kind(kind: TableKind) -> Option<Self> {
        Some(match kind {
            TableKind::Green2D => Mode::Helm2d,
            TableKind::Deriv2D => Mode::Helm2dDeriv,
            TableKind::Diff2D => Mode::Helm2dDiff,
            TableKind::Green3D => Mode::Helm3d,
            TableKind::Maxwell3D => Mode::Maxwell,
            TableKind::F12Cache2D => return None,
        })
    }

    /// Names of the complex output quantities.
    pub fn quantities(self) -> Vec<String> {
        match self {
            Mode::Helm2d | Mode::Helm3d => vec!["g".into()],
            Mode::Helm2dDeriv => vec!["d1".into(), "d2".into()],
            Mode::Helm2dDiff => vec!["t11".into(), "t12".into(), "t22".into()],
            Mode::Maxwell => (1..=3).flat_map(|p| (1..=3).map(move |q| format!("g{p}{q}"))).collect(),
        }
    }
}

/// Everything needed to build a table.
#[derive(Clone, Debug)]
pub enum Spec {
    Two { mode: Mode, params: Params2D, k2: f64, form: H2Form },
    Three { mode: Mode, params: Params3D, method: FhatMethod },
}

impl Spec {
    pub fn mode(&self) -> Mode {
        match self {
            Spec::Two { mode, .. } | Spec::Three { mode, .. } => *mode,
        }
    }

    pub fn with_modes(&self, n: usize) -> Spec {
        let mut s = self.clone();
        match &mut s {
            Spec::Two { params, .. } => params.n_modes = n,
            Spec::Three { params, .. } => params.n_modes = n,
        }
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            Spec::Two { mode, params, k2, .. } => {
                params.validate()?;
                if *mode == Mode::Helm2dDiff {
                    Params2D { k: *k2, ..*params }.validate()?;
                }
            }
            Spec::Three { params, .. } => {
                params.validate()?;
            }
        }
        Ok(())
    }

    fn needs_full_cache(&self) -> bool {
        matches!(self.mode(), Mode::Helm2dDeriv | Mode::Helm2dDiff)
    }

    /// Singular-coefficient cache for the widest table of a 2D run.
    pub fn compute_cache(&self, n_max: usize) -> Result<Option<F12Cache>, CliError> {
        match self {
            Spec::Two { params: p, .. } => Ok(Some(F12Cache::compute(
                p.c_tilde,
                p.eps,
                p.fft_res,
                n_max,
                self.needs_full_cache(),
            )?)),
            Spec::Three { .. } => Ok(None),
        }
    }

    /// File name under which the cache for this spec is kept.
    pub fn cache_name(&self) -> Option<String> {
        match self {
            Spec::Two { params: p, .. } => Some(format!(
                "f12-ct{}-eps{}-res{}-n{}-{}.qpt",
                p.c_tilde,
                p.eps,
                p.fft_res,
                p.n_modes,
                if self.needs_full_cache() { "full" } else { "basic" }
            )),
            Spec::Three { .. } => None,
        }
    }

    /// Loads the cache at `path` when it can serve this spec, else computes and
    /// writes it.
    pub fn cache_at(&self, path: &Path) -> Result<Option<F12Cache>, CliError> {
        let Spec::Two { params, .. } = self else {
            return Ok(None);
        };
        if let Ok(c) = F12Cache::load(path) {
            if c.for_params(params, self.needs_full_cache()).is_ok() {
                return Ok(Some(c));
            }
        }
        let start = Instant::now();
        let c = self.compute_cache(params.n_modes)?.expect("2D spec has a cache");
        c.save(path)?;
        eprintln!("wrote singular-coefficient cache {} in {:.3} s", path.display(), start.elapsed().as_secs_f64());
        Ok(Some(c))
    }

    pub fn build(&self, cache: Option<&F12Cache>) -> Result<Table, CliError> {
        Ok(match self {
            Spec::Two { mode, params, k2, form } => {
                let cache = cache.expect("2D tables need a cache");
                match mode {
                    Mode::Helm2d => Table::Green2(prepare2d(params, cache)?),
                    Mode::Helm2dDeriv => Table::Deriv2(prepare2d_deriv(params, cache, *form)?),
                    Mode::Helm2dDiff => Table::Diff2(prepare2d_diff(params, &Params2D { k: *k2, ..*params }, cache)?),
                    _ => unreachable!(),
                }
            }
            Spec::Three { mode, params, method } => match mode {
                Mode::Helm3d => Table::Green3(qpgreen::helm3d::prepare3d_with(params, *method, Exec::default())?),
                Mode::Maxwell => Table::Maxwell(qpgreen::maxwell::prepare_maxwell_with(params, *method, Exec::default())?),
                _ => unreachable!(),
            },
        })
    }
}

pub enum Table {
    Green2(GreenTable2D),
    Deriv2(DerivTable2D),
    Diff2(DiffTable2D),
    Green3(GreenTable3D),
    Maxwell(MaxwellTable),
}

fn two(x: &[f64]) -> [f64; 2] {
    [x[0], x[1]]
}

fn three(x: &[f64]) -> [f64; 3] {
    [x[0], x[1], x[2]]
}

impl Table {
    pub fn load(path: &Path) -> Result<Table, CliError> {
        let h = read_header(path)?;
        let mode = Mode::from_kind(h.kind)
            .ok_or_else(|| CliError::Invalid(format!("{} is a coefficient cache, not a table", path.display())))?;
        Ok(match mode {
            Mode::Helm2d => Table::Green2(GreenTable2D::load(path)?),
            Mode::Helm2dDeriv => Table::Deriv2(DerivTable2D::load(path)?),
            Mode::Helm2dDiff => Table::Diff2(DiffTable2D::load(path)?),
            Mode::Helm3d => Table::Green3(GreenTable3D::load(path)?),
            Mode::Maxwell => Table::Maxwell(MaxwellTable::load(path)?),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        match self {
            Table::Green2(t) => t.save(path)?,
            Table::Deriv2(t) => t.save(path)?,
            Table::Diff2(t) => t.save(path)?,
            Table::Green3(t) => t.save(path)?,
            Table::Maxwell(t) => t.save(path)?,
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        match self {
            Table::Green2(_) => Mode::Helm2d,
            Table::Deriv2(_) => Mode::Helm2dDeriv,
            Table::Diff2(_) => Mode::Helm2dDiff,
            Table::Green3(_) => Mode::Helm3d,
            Table::Maxwell(_) => Mode::Maxwell,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Table::Green2(t) => format!("Green2D k={} N={}", t.params().k, t.params().n_modes),
            Table::Deriv2(t) => format!("Deriv2D k={} N={} h2={:?}", t.params().k, t.params().n_modes, t.form()),
            Table::Diff2(t) => format!("Diff2D k1={} k2={} N={}", t.k1(), t.k2(), t.params().n_modes),
            Table::Green3(t) => format!("Green3D k={} N={}", t.params().k, t.params().n_modes),
            Table::Maxwell(t) => format!("Maxwell3D k={} N={} (7 grids)", t.params().k, t.params().n_modes),
        }
    }

    pub fn eval(&self, x: &[f64]) -> qpgreen::Result<Vec<Complex64>> {
        Ok(match self {
            Table::Green2(t) => vec![t.eval(two(x))?],
            Table::Deriv2(t) => {
                let (a, b) = t.eval(two(x))?;
                vec![a, b]
            }
            Table::Diff2(t) => t.eval(two(x))?.to_vec(),
            Table::Green3(t) => vec![t.eval(three(x))?],
            Table::Maxwell(t) => t.eval(three(x))?.iter().flatten().copied().collect(),
        })
    }

    pub fn eval_many(&self, points: &[Vec<f64>]) -> Vec<qpgreen::Result<Vec<Complex64>>> {
        qpgreen::exec::map_collect(Exec::default(), points, |_, x| self.eval(x))
    }

    /// Reference values from the series expansions.
    pub fn oracle(&self, x: &[f64]) -> qpgreen::Result<Vec<Complex64>> {
        let ctl = SeriesControl::default();
        Ok(match self {
            Table::Green2(t) => {
                let p = t.params();
                let x = two(x);
                if x[1] == 0.0 {
                    vec![series::g2d_image(x, p.k, p.alpha, &SeriesControl::with_tol(1e-10))?]
                } else {
                    vec![series::g2d_eigen(x, p.k, p.alpha, &ctl)?]
                }
            }
            Table::Deriv2(t) => {
                let p = t.params();
                let x = two(x);
                vec![
                    series::g2d_deriv_eigen(x, p.k, p.alpha, &ctl, Deriv2D::D1)?,
                    series::g2d_deriv_eigen(x, p.k, p.alpha, &ctl, Deriv2D::D2)?,
                ]
            }
            Table::Diff2(t) => {
                let a = t.params().alpha;
                let e1 = series::g2d_eigen_all(two(x), t.k1(), a, &ctl)?;
                let e2 = series::g2d_eigen_all(two(x), t.k2(), a, &ctl)?;
                vec![e1.d11 - e2.d11, e1.d12 - e2.d12, e1.d22 - e2.d22]
            }
            Table::Green3(t) => {
                let p = t.params();
                vec![series::g3d_eigen(three(x), p.k, p.alpha1, p.alpha2, &ctl)?]
            }
            Table::Maxwell(t) => {
                let p = t.params();
                let e = series::g3d_eigen_hessian(three(x), p.k, p.alpha1, p.alpha2, &ctl)?;
                e.tensor(p.k).iter().flatten().copied().collect()
            }
        })
    }
}

/// Largest componentwise relative error.
pub fn rel_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    got.iter()
        .zip(want)
        .map(|(a, b)| (a - b).norm() / b.norm())
        .fold(0.0, f64::max)
}
