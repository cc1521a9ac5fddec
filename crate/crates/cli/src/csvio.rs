use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::CliError;

/// Reads `dim` coordinates per row from a CSV file with a header row.
pub fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(File::open(path)?);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim {
            return Err(CliError::Invalid(format!(
                "{}: row {} has {} columns, expected {dim}",
                path.display(),
                i + 1,
                rec.len()
            )));
        }
        let x = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| CliError::Invalid(format!("{}: row {}: bad coordinate {s:?}", path.display(), i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(x);
    }
    Ok(out)
}

pub fn coord_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

/// Seventeen significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV sink on a file or stdout, with the optional generation stamp first.
pub struct Sink {
    w: csv::Writer<Box<dyn Write>>,
}

impl Sink {
    /// `notes` become `#` lines that are part of the deterministic output.
    pub fn open(path: Option<&Path>, reproducible: bool, notes: &[String]) -> Result<Self, CliError> {
        let mut raw: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        if !reproducible {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            writeln!(raw, "# generated at unix time {secs}")?;
        }
        for n in notes {
            writeln!(raw, "# {n}")?;
        }
        Ok(Self {
            w: csv::WriterBuilder::new().flexible(true).from_writer(raw),
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.w.flush()?;
        Ok(())
    }
}
