//! `qpgreen`: prepare, evaluate and check quasi-periodic Green's function
//! tables.

mod csvio;
mod table;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpgreen::helm2d::H2Form;
use qpgreen::{FhatMethod, Params2D, Params3D};

use csvio::{coord_names, num, read_points, Sink};
use table::{rel_error, Mode, Spec, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qpgreen::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use qpgreen::Error as E;
        match self {
            CliError::Io(_) => 1,
            CliError::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => 1,
            CliError::Csv(_) | CliError::Invalid(_) => 2,
            CliError::Core(e) => match e {
                E::Io(_) | E::Format(_) | E::TruncatedFile { .. } => 1,
                E::NoConvergence { .. } | E::EvalAtSource => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "qpgreen", version, about = "Quasi-periodic Helmholtz and Maxwell Green's function tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a table and write it to --table.
    Prepare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        table: PathBuf,
    },
    /// Evaluate a prepared table at the points of a CSV file.
    Eval {
        /// Expected table mode; taken from the file when omitted.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        table: PathBuf,
        /// CSV with a header row and columns x1,x2[,x3].
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also evaluate the series expansions and report the relative error.
        #[arg(long)]
        oracle: bool,
        /// Omit the timestamp line.
        #[arg(long)]
        reproducible: bool,
    },
    /// Relative errors against the series over a sweep of N.
    Converge {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated N values, increasing powers of two.
        #[arg(long, value_delimiter = ',', required = true)]
        sweep: Vec<usize>,
        /// Points to check; the standard test points of the mode by default.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepted for symmetry with eval; the sweep always uses the series.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        reproducible: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum H2Arg {
    Consistent,
    Mirrored,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    k: f64,
    /// Second wavenumber (helm2d-diff).
    #[arg(long)]
    k2: Option<f64>,
    /// Quasi-momentum; once in 2D, twice in 3D.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    n_modes: usize,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    c_tilde: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Singular-coefficient FFT size. In 3D this selects the FFT route for F.
    #[arg(long)]
    fft_res: Option<usize>,
    /// Singular part of the x2-derivative (helm2d-deriv).
    #[arg(long, value_enum, default_value = "consistent")]
    h2_form: H2Arg,
}

impl ParamArgs {
    fn spec(&self) -> Result<Spec, CliError> {
        let mode = self.mode;
        if self.k2.is_some() != (mode == Mode::Helm2dDiff) {
            return Err(CliError::Invalid("--k2 is required for helm2d-diff and only valid there".into()));
        }
        if mode.dim() == 2 {
            let alpha = match self.alpha[..] {
                [] => 0.0,
                [a] => a,
                _ => return Err(CliError::Invalid("2D modes take one --alpha".into())),
            };
            let mut p = Params2D::new(self.k, alpha, self.n_modes);
            p.c = self.c.unwrap_or(p.c);
            p.c_tilde = self.c_tilde.unwrap_or(p.c_tilde);
            p.eps = self.eps.unwrap_or(p.eps);
            p.fft_res = self.fft_res.unwrap_or(p.fft_res);
            let form = match self.h2_form {
                H2Arg::Consistent => H2Form::Consistent,
                H2Arg::Mirrored => H2Form::Mirrored,
            };
            Ok(Spec::Two { mode, params: p, k2: self.k2.unwrap_or(0.0), form })
        } else {
            let (a1, a2) = match self.alpha[..] {
                [] => (0.0, 0.0),
                [a1, a2] => (a1, a2),
                _ => return Err(CliError::Invalid("3D modes take --alpha twice".into())),
            };
            let mut p = Params3D::new(self.k, a1, a2, self.n_modes);
            p.c = self.c.unwrap_or(p.c);
            p.c_tilde = self.c_tilde.unwrap_or(p.c_tilde);
            p.eps = self.eps.unwrap_or(p.eps);
            let method = match self.fft_res {
                Some(res) => FhatMethod::Fft { res },
                None => FhatMethod::Radial,
            };
            Ok(Spec::Three { mode, params: p, method })
        }
    }
}

fn prepare(params: &ParamArgs, path: &Path) -> Result<u8, CliError> {
    let spec = params.spec()?;
    spec.validate()?;
    let start = Instant::now();
    let cache = match spec.cache_name() {
        Some(name) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            spec.cache_at(&dir.join(name))?
        }
        None => None,
    };
    let table = spec.build(cache.as_ref())?;
    let secs = start.elapsed().as_secs_f64();
    table.save(path)?;
    eprintln!("prepared {} in {secs:.3} s, wrote {}", table.describe(), path.display());
    Ok(0)
}

fn eval(
    mode: Option<Mode>,
    table_path: &Path,
    points: &Path,
    out: Option<&Path>,
    oracle: bool,
    reproducible: bool,
) -> Result<u8, CliError> {
    let table = Table::load(table_path)?;
    if let Some(m) = mode {
        if m != table.mode() {
            return Err(CliError::Invalid(format!("--mode {m:?} does not match the table ({})", table.describe())));
        }
    }
    let dim = table.mode().dim();
    let pts = read_points(points, dim)?;
    let quantities = table.mode().quantities();

    let start = Instant::now();
    let values = table.eval_many(&pts);
    let secs = start.elapsed().as_secs_f64();
    eprintln!(
        "evaluated {} points in {secs:.3} s ({:.0} ns per point)",
        pts.len(),
        if pts.is_empty() { 0.0 } else { secs * 1e9 / pts.len() as f64 }
    );

    let mut header = coord_names(dim);
    for q in &quantities {
        header.push(format!("{q}_re"));
        header.push(format!("{q}_im"));
    }
    if oracle {
        for q in &quantities {
            header.push(format!("oracle_{q}_re"));
            header.push(format!("oracle_{q}_im"));
        }
        header.push("rel_err".into());
    }
    header.push("status".into());

    let mut sink = Sink::open(out, reproducible, &[])?;
    sink.row(&header)?;
    let mut failed = false;
    let width = 2 * quantities.len();
    for (x, v) in pts.iter().zip(values) {
        let mut row: Vec<String> = x.iter().map(|&c| num(c)).collect();
        let mut status = "ok".to_string();
        let got = match v {
            Ok(v) => {
                row.extend(v.iter().flat_map(|z| [num(z.re), num(z.im)]));
                Some(v)
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), width));
                if matches!(e, qpgreen::Error::EvalAtSource) {
                    status = "at-source".into();
                } else {
                    failed = true;
                    status = format!("error: {e}");
                }
                None
            }
        };
        if oracle {
            match got.as_ref().map(|_| table.oracle(x)) {
                Some(Ok(want)) => {
                    row.extend(want.iter().flat_map(|z| [num(z.re), num(z.im)]));
                    row.push(num(rel_error(got.as_ref().unwrap(), &want)));
                }
                Some(Err(e)) => {
                    failed = true;
                    row.extend(std::iter::repeat_n(String::new(), width + 1));
                    status = format!("oracle error: {e}");
                }
                None => row.extend(std::iter::repeat_n(String::new(), width + 1)),
            }
        }
        row.push(status);
        sink.row(&row)?;
    }
    sink.finish()?;
    Ok(if failed { 3 } else { 0 })
}

fn default_points(mode: Mode) -> Vec<Vec<f64>> {
    match mode {
        Mode::Helm2d => vec![
            vec![0.01 * PI, 0.0],
            vec![0.01 * PI, 0.01],
            vec![0.5 * PI, 0.0],
            vec![0.5 * PI, 0.01],
        ],
        Mode::Helm2dDeriv | Mode::Helm2dDiff => vec![vec![0.01 * PI, 0.01], vec![0.5 * PI, 0.01], vec![1.0, 0.3]],
        Mode::Helm3d | Mode::Maxwell => vec![vec![0.0, 1.5, 0.1], vec![0.03, 0.03, 0.1]],
    }
}

/// Least-squares slope of −log₂(err) against log₂(N).
fn fitted_order(ns: &[usize], errs: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errs)
        .filter(|(_, e)| e.is_finite() && **e > 0.0)
        .map(|(&n, &e)| ((n as f64).log2(), -e.log2()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn converge(
    params: &ParamArgs,
    sweep: &[usize],
    points: Option<&Path>,
    out: Option<&Path>,
    reproducible: bool,
) -> Result<u8, CliError> {
    if sweep.iter().any(|n| !n.is_power_of_two()) || sweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Invalid("--sweep must list increasing powers of two".into()));
    }
    let base = params.spec()?;
    let pts = match points {
        Some(p) => read_points(p, base.mode().dim())?,
        None => default_points(base.mode()),
    };
    for &n in sweep {
        base.with_modes(n).validate()?;
    }
    let n_max = *sweep.last().unwrap();
    let cache = base.with_modes(n_max).compute_cache(n_max)?;

    let mut failed = false;
    let mut oracle: Vec<Option<Vec<num_complex::Complex64>>> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for &n in sweep {
        let start = Instant::now();
        let table = base.with_modes(n).build(cache.as_ref())?;
        eprintln!("N = {n}: prepared in {:.3} s", start.elapsed().as_secs_f64());
        if oracle.is_empty() {
            oracle = pts
                .iter()
                .map(|x| match table.oracle(x) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        eprintln!("series failed at {x:?}: {e}");
                        failed = true;
                        None
                    }
                })
                .collect();
        }
        let errs = pts
            .iter()
            .zip(&oracle)
            .map(|(x, want)| match (table.eval(x), want) {
                (Ok(got), Some(want)) => rel_error(&got, want),
                (Err(e), _) => {
                    eprintln!("N = {n}: evaluation failed at {x:?}: {e}");
                    failed |= !matches!(e, qpgreen::Error::EvalAtSource);
                    f64::NAN
                }
                _ => f64::NAN,
            })
            .collect();
        rows.push(errs);
    }

    let labels: Vec<String> = (1..=pts.len()).map(|i| format!("p{i}")).collect();
    let notes: Vec<String> = labels
        .iter()
        .zip(&pts)
        .map(|(l, x)| {
            let c: Vec<String> = x.iter().map(|&v| num(v)).collect();
            format!("{l} = ({})", c.join(", "))
        })
        .collect();
    let mut sink = Sink::open(out, reproducible, &notes)?;
    let mut header = vec!["n_modes".to_string()];
    header.extend(labels);
    sink.row(&header)?;
    for (n, errs) in sweep.iter().zip(&rows) {
        let mut row = vec![n.to_string()];
        row.extend(errs.iter().map(|&e| num(e)));
        sink.row(&row)?;
    }
    let mut order = vec!["order".to_string()];
    for j in 0..pts.len() {
        let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        order.push(num(fitted_order(sweep, &col)));
    }
    sink.row(&order)?;
    sink.finish()?;
    Ok(if failed { 3 } else { 0 })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Prepare { params, table } => prepare(&params, &table),
        Command::Eval { mode, table, points, out, oracle, reproducible } => {
            eval(mode, &table, &points, out.as_deref(), oracle, reproducible)
        }
        Command::Converge { params, sweep, points, out, oracle: _, reproducible } => {
            converge(&params, &sweep, points.as_deref(), out.as_deref(), reproducible)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
