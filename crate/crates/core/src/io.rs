//! Readers and writers for IDX (MNIST), CSV and `dsetbin` files.
//!
//! `dsetbin` layout, all integers little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | ASCII `DSB1` |
//! | 4     | u32 version = 1 |
//! | 8     | u64 `n` |
//! | 8     | u64 `dim` |
//! | 8·n·dim | f64 values, row-major |
//!
//! CSV files have no header, use `,` as delimiter and `.` as decimal point.
//! Labels for CSV data live in a separate one-column CSV file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::dataset::{DataSet, ProbMatrix};
use crate::error::{Error, Result};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;
pub const DSETBIN_MAGIC: &[u8; 4] = b"DSB1";
pub const DSETBIN_VERSION: u32 = 1;
pub const DSETBIN_HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Idx,
    Csv,
    Dsetbin,
}

impl DataFormat {
    /// Guesses the format from a file extension: `.csv`, `.dsetbin`, and
    /// anything containing `ubyte` or ending in `.idx` for IDX.
    pub fn from_path(path: &Path) -> Option<Self> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        if name.ends_with(".csv") {
            Some(Self::Csv)
        } else if name.ends_with(".dsetbin") {
            Some(Self::Dsetbin)
        } else if name.contains("ubyte") || name.ends_with(".idx") {
            Some(Self::Idx)
        } else {
            None
        }
    }
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "idx" => Ok(Self::Idx),
            "csv" => Ok(Self::Csv),
            "dsetbin" => Ok(Self::Dsetbin),
            other => Err(Error::Parameter(format!("unknown data format '{other}'"))),
        }
    }
}

pub fn load_dataset(path: impl AsRef<Path>, format: DataFormat) -> Result<DataSet> {
    let path = path.as_ref();
    let mut reader = BufReader::new(File::open(path)?);
    match format {
        DataFormat::Idx => read_idx_images(&mut reader),
        DataFormat::Csv => read_csv_dataset(reader),
        DataFormat::Dsetbin => read_dsetbin(&mut reader),
    }
}

pub fn save_dataset(ds: &DataSet, path: impl AsRef<Path>, format: DataFormat) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    match format {
        DataFormat::Csv => write_csv_dataset(ds, &mut w)?,
        DataFormat::Dsetbin => write_dsetbin(ds, &mut w)?,
        DataFormat::Idx => {
            return Err(Error::Parameter(
                "writing IDX files is not supported".into(),
            ))
        }
    }
    w.flush()?;
    Ok(())
}

fn read_u32_be<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|e| Error::Format(format!("truncated IDX header: {e}")))?;
    Ok(u32::from_be_bytes(b))
}

fn expect_magic<R: Read>(r: &mut R, expected: u32) -> Result<()> {
    let magic = read_u32_be(r)?;
    if magic != expected {
        return Err(Error::Format(format!(
            "bad IDX magic {magic:#010x}, expected {expected:#010x}"
        )));
    }
    Ok(())
}

/// Reads an IDX image file into flattened rows, pixels scaled to `[0, 1]`.
pub fn read_idx_images<R: Read>(r: &mut R) -> Result<DataSet> {
    expect_magic(r, IDX_IMAGES_MAGIC)?;
    let count = read_u32_be(r)? as usize;
    let rows = read_u32_be(r)? as usize;
    let cols = read_u32_be(r)? as usize;
    let mut pixels = vec![0u8; count * rows * cols];
    r.read_exact(&mut pixels).map_err(|e| {
        Error::Format(format!(
            "IDX payload shorter than {count}x{rows}x{cols}: {e}"
        ))
    })?;
    let values = pixels.iter().map(|&p| f64::from(p) / 255.0).collect();
    DataSet::new(count, rows * cols, values)
}

/// Reads an IDX label file.
pub fn read_idx_labels<R: Read>(r: &mut R) -> Result<Vec<u32>> {
    expect_magic(r, IDX_LABELS_MAGIC)?;
    let count = read_u32_be(r)? as usize;
    let mut labels = vec![0u8; count];
    r.read_exact(&mut labels)
        .map_err(|e| Error::Format(format!("IDX label payload shorter than {count}: {e}")))?;
    Ok(labels.into_iter().map(u32::from).collect())
}

/// Loads labels from either an IDX label file (detected by its magic) or a
/// one-column CSV.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<u32>> {
    let bytes = std::fs::read(path.as_ref())?;
    if bytes.len() >= 4 && bytes[..4] == IDX_LABELS_MAGIC.to_be_bytes() {
        return read_idx_labels(&mut bytes.as_slice());
    }
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::Format("label file is neither IDX nor UTF-8 CSV".into()))?;
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<u32>()
            .map_err(|e| Error::Format(format!("line {}: invalid label '{line}': {e}", i + 1)))?;
        labels.push(v);
    }
    Ok(labels)
}

/// Parses a header-less numeric CSV into rows.
fn read_csv_rows<R: BufRead>(reader: R) -> Result<(usize, Vec<f64>)> {
    let mut width = None;
    let mut values = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = values.len();
        for field in line.split(',') {
            let field = field.trim();
            let v = field.parse::<f64>().map_err(|e| {
                Error::Format(format!("line {}: invalid number '{field}': {e}", i + 1))
            })?;
            values.push(v);
        }
        let w = values.len() - before;
        match width {
            None => width = Some(w),
            Some(expected) if expected != w => {
                return Err(Error::Format(format!(
                    "line {}: {w} fields, expected {expected}",
                    i + 1
                )))
            }
            _ => {}
        }
    }
    match width {
        Some(w) => Ok((w, values)),
        None => Err(Error::Format("empty CSV file".into())),
    }
}

fn read_csv_dataset<R: BufRead>(reader: R) -> Result<DataSet> {
    let (dim, values) = read_csv_rows(reader)?;
    DataSet::new(values.len() / dim, dim, values)
}

fn write_csv_dataset<W: Write>(ds: &DataSet, w: &mut W) -> Result<()> {
    for row in ds.rows() {
        let mut first = true;
        for v in row {
            if !first {
                w.write_all(b",")?;
            }
            first = false;
            // Display prints the shortest string that parses back to the same f64.
            write!(w, "{v}")?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_dsetbin<R: Read>(r: &mut R) -> Result<DataSet> {
    let mut header = [0u8; DSETBIN_HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated dsetbin header: {e}")))?;
    if &header[..4] != DSETBIN_MAGIC {
        return Err(Error::Format("missing DSB1 magic".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != DSETBIN_VERSION {
        return Err(Error::Format(format!(
            "unsupported dsetbin version {version}"
        )));
    }
    let n = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let dim = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let len = n
        .checked_mul(dim)
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| Error::Format(format!("dsetbin shape {n}x{dim} overflows")))?;
    let mut payload = Vec::new();
    r.take(len as u64).read_to_end(&mut payload)?;
    if payload.len() != len {
        return Err(Error::Format(format!(
            "dsetbin payload has {} bytes, expected {len}",
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    DataSet::new(n, dim, values)
}

pub fn write_dsetbin<W: Write>(ds: &DataSet, w: &mut W) -> Result<()> {
    w.write_all(DSETBIN_MAGIC)?;
    w.write_all(&DSETBIN_VERSION.to_le_bytes())?;
    w.write_all(&(ds.n() as u64).to_le_bytes())?;
    w.write_all(&(ds.dim() as u64).to_le_bytes())?;
    for v in ds.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Loads a CSV of per-sample class probabilities, one row per sample.
pub fn load_prob_matrix(path: impl AsRef<Path>) -> Result<ProbMatrix> {
    let reader = BufReader::new(File::open(path.as_ref())?);
    let (k, values) = read_csv_rows(reader)?;
    ProbMatrix::new(values.len() / k, k, values)
}

/// Hex SHA-256 of a file's bytes.
pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let mut file = File::open(path.as_ref())?;
    let mut hasher = Sha256::new();
    std::io::copy(&mut file, &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}
