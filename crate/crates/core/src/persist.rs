//! Binary table files.
//!
//! Layout (all little-endian): magic `QPGREENT`, version, kind, the parameter
//! block, grid geometry, payload length, then the grids as interleaved re/im
//! doubles in row-major order, followed by the CRC-64/XZ of the payload.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crc::{Crc, CRC_64_XZ};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::ComplexGrid;

pub const MAGIC: [u8; 8] = *b"QPGREENT";
pub const VERSION: u16 = 1;

/// Header size in bytes.
pub const HEADER_LEN: usize = 8 + 2 + 2 + 7 * 8 + 3 * 8 + 4 + 4 + 3 * 8 + 3 * 8 + 8;

const CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u16)]
pub enum TableKind {
    F12Cache2D = 1,
    Green2D = 2,
    Deriv2D = 3,
    Diff2D = 4,
    Green3D = 5,
    Maxwell3D = 6,
}

impl TableKind {
    fn from_u16(v: u16) -> Result<Self> {
        Ok(match v {
            1 => Self::F12Cache2D,
            2 => Self::Green2D,
            3 => Self::Deriv2D,
            4 => Self::Diff2D,
            5 => Self::Green3D,
            6 => Self::Maxwell3D,
            _ => return Err(Error::Format(format!("unknown table kind {v}"))),
        })
    }
}

/// Parameters recorded with a table. Fields that do not apply to a table
/// kind are stored as zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct HeaderParams {
    pub k: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub eps: f64,
    /// Second wavenumber of a difference table.
    pub k2: f64,
    pub n_modes: u64,
    pub fft_res: u64,
    /// Kind-specific flags.
    pub flags: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableHeader {
    pub version: u16,
    pub kind: TableKind,
    pub params: HeaderParams,
    pub n_grids: u32,
    pub ndim: u32,
    pub dims: [u64; 3],
    pub cell: [f64; 3],
    pub payload_len: u64,
}

impl TableHeader {
    fn encode(&self) -> Vec<u8> {
        let p = &self.params;
        let mut b = Vec::with_capacity(HEADER_LEN);
        b.extend_from_slice(&MAGIC);
        b.extend_from_slice(&self.version.to_le_bytes());
        b.extend_from_slice(&(self.kind as u16).to_le_bytes());
        for v in [p.k, p.alpha1, p.alpha2, p.c, p.c_tilde, p.eps, p.k2] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        for v in [p.n_modes, p.fft_res, p.flags] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b.extend_from_slice(&self.n_grids.to_le_bytes());
        b.extend_from_slice(&self.ndim.to_le_bytes());
        for v in self.dims {
            b.extend_from_slice(&v.to_le_bytes());
        }
        for v in self.cell {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b.extend_from_slice(&self.payload_len.to_le_bytes());
        debug_assert_eq!(b.len(), HEADER_LEN);
        b
    }

    fn decode(b: &[u8]) -> Result<Self> {
        if b[..8] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut pos = 8;
        let mut take = |n: usize| {
            let s = &b[pos..pos + n];
            pos += n;
            s
        };
        let u16_at = |s: &[u8]| u16::from_le_bytes(s.try_into().unwrap());
        let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().unwrap());
        let u64_at = |s: &[u8]| u64::from_le_bytes(s.try_into().unwrap());
        let f64_at = |s: &[u8]| f64::from_le_bytes(s.try_into().unwrap());
        let version = u16_at(take(2));
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let kind = TableKind::from_u16(u16_at(take(2)))?;
        let mut f = [0.0; 7];
        for v in &mut f {
            *v = f64_at(take(8));
        }
        let n_modes = u64_at(take(8));
        let fft_res = u64_at(take(8));
        let flags = u64_at(take(8));
        let n_grids = u32_at(take(4));
        let ndim = u32_at(take(4));
        let mut dims = [0u64; 3];
        for v in &mut dims {
            *v = u64_at(take(8));
        }
        let mut cell = [0.0; 3];
        for v in &mut cell {
            *v = f64_at(take(8));
        }
        let payload_len = u64_at(take(8));
        Ok(Self {
            version,
            kind,
            params: HeaderParams {
                k: f[0],
                alpha1: f[1],
                alpha2: f[2],
                c: f[3],
                c_tilde: f[4],
                eps: f[5],
                k2: f[6],
                n_modes,
                fft_res,
                flags,
            },
            n_grids,
            ndim,
            dims,
            cell,
            payload_len,
        })
    }

    fn grid_len(&self) -> u64 {
        self.dims[..self.ndim as usize].iter().product()
    }
}

/// Writes `grids` (all sharing extents and periods) under a header of the
/// given kind.
pub fn write_table<W: Write>(
    w: &mut W,
    kind: TableKind,
    params: HeaderParams,
    grids: &[&ComplexGrid],
) -> Result<TableHeader> {
    let first = grids
        .first()
        .ok_or_else(|| Error::Format("a table needs at least one grid".into()))?;
    let ndim = first.dims().len();
    let mut dims = [0u64; 3];
    let mut cell = [0.0; 3];
    for a in 0..ndim {
        dims[a] = first.dims()[a] as u64;
        cell[a] = first.cell()[a];
    }
    if grids.iter().any(|g| g.dims() != first.dims() || g.cell() != first.cell()) {
        return Err(Error::ExtentMismatch("grids of one table must share their geometry".into()));
    }
    let header = TableHeader {
        version: VERSION,
        kind,
        params,
        n_grids: grids.len() as u32,
        ndim: ndim as u32,
        dims,
        cell,
        payload_len: (grids.len() * first.len() * 16) as u64,
    };
    w.write_all(&header.encode())?;
    let mut digest = CRC64.digest();
    let mut buf = Vec::with_capacity(1 << 16);
    for g in grids {
        for chunk in g.data().chunks(4096) {
            buf.clear();
            for z in chunk {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
            digest.update(&buf);
            w.write_all(&buf)?;
        }
    }
    w.write_all(&digest.finalize().to_le_bytes())?;
    Ok(header)
}

/// Reads a table written by [`write_table`]. `available` is the total stream
/// length when known, used to report truncation before reading the payload.
/// Reads only the header of a table file.
pub fn read_header(path: impl AsRef<Path>) -> Result<TableHeader> {
    let mut f = File::open(path)?;
    let mut hb = vec![0u8; HEADER_LEN];
    let got = read_full(&mut f, &mut hb)?;
    if got >= 8 && hb[..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    if got < HEADER_LEN {
        return Err(Error::TruncatedFile {
            expected: HEADER_LEN as u64,
            found: got as u64,
        });
    }
    TableHeader::decode(&hb)
}

pub fn read_table<R: Read>(r: &mut R, available: Option<u64>) -> Result<(TableHeader, Vec<ComplexGrid>)> {
    let mut hb = vec![0u8; HEADER_LEN];
    let got = read_full(r, &mut hb)?;
    if got >= 8 && hb[..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    if got < HEADER_LEN {
        return Err(Error::TruncatedFile {
            expected: HEADER_LEN as u64,
            found: got as u64,
        });
    }
    let header = TableHeader::decode(&hb)?;
    let ndim = header.ndim as usize;
    if !(2..=3).contains(&ndim) {
        return Err(Error::Format(format!("unsupported dimension {ndim}")));
    }
    let per_grid = header.grid_len();
    if header.payload_len != per_grid * header.n_grids as u64 * 16 {
        return Err(Error::Format("payload length disagrees with grid extents".into()));
    }
    let expected = HEADER_LEN as u64 + header.payload_len + 8;
    if let Some(found) = available {
        if found < expected {
            return Err(Error::TruncatedFile { expected, found });
        }
    }
    let dims: Vec<usize> = header.dims[..ndim].iter().map(|&d| d as usize).collect();
    let cell = header.cell[..ndim].to_vec();
    let mut digest = CRC64.digest();
    let mut grids = Vec::with_capacity(header.n_grids as usize);
    let mut consumed = HEADER_LEN as u64;
    let mut buf = vec![0u8; 16 * 4096];
    for _ in 0..header.n_grids {
        let mut data = Vec::with_capacity(per_grid as usize);
        let mut left = per_grid as usize;
        while left > 0 {
            let n = left.min(4096);
            let bytes = &mut buf[..16 * n];
            let got = read_full(r, bytes)?;
            consumed += got as u64;
            if got < bytes.len() {
                return Err(Error::TruncatedFile { expected, found: consumed });
            }
            digest.update(bytes);
            for z in bytes.chunks_exact(16) {
                data.push(Complex64::new(
                    f64::from_le_bytes(z[..8].try_into().unwrap()),
                    f64::from_le_bytes(z[8..].try_into().unwrap()),
                ));
            }
            left -= n;
        }
        grids.push(ComplexGrid::from_vec(&dims, &cell, data)?);
    }
    let mut tail = [0u8; 8];
    let got = read_full(r, &mut tail)?;
    if got < 8 {
        return Err(Error::TruncatedFile {
            expected,
            found: consumed + got as u64,
        });
    }
    if u64::from_le_bytes(tail) != digest.finalize() {
        return Err(Error::Format("payload checksum mismatch".into()));
    }
    Ok((header, grids))
}

fn read_full<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(filled)
}

pub fn save_table(
    path: impl AsRef<Path>,
    kind: TableKind,
    params: HeaderParams,
    grids: &[&ComplexGrid],
) -> Result<TableHeader> {
    let mut w = BufWriter::new(File::create(path)?);
    let h = write_table(&mut w, kind, params, grids)?;
    w.flush()?;
    Ok(h)
}

pub fn load_table(path: impl AsRef<Path>) -> Result<(TableHeader, Vec<ComplexGrid>)> {
    let f = File::open(path)?;
    let len = f.metadata()?.len();
    read_table(&mut BufReader::new(f), Some(len))
}

/// Like [`load_table`] but also checks the kind.
pub fn load_kind(path: impl AsRef<Path>, kind: TableKind) -> Result<(TableHeader, Vec<ComplexGrid>)> {
    let (h, g) = load_table(path)?;
    if h.kind != kind {
        return Err(Error::Format(format!("expected a {kind:?} table, found {:?}", h.kind)));
    }
    Ok((h, g))
}
