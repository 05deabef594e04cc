//! CEVB embedding files.
//!
//! | offset | type | field |
//! | --- | --- | --- |
//! | 0 | `[u8; 4]` | magic `CEVB` |
//! | 4 | u32 LE | version = 1 |
//! | 8 | u64 LE | row count n |
//! | 16 | u32 LE | dim |
//! | 20 | u8 | dtype = 0 (f32) |
//! | 21 | n × (u16 LE len + UTF-8) | ids |
//! | … | n·dim × f32 LE | row-major values |

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"CEVB";
pub const VERSION: u32 = 1;
pub const DTYPE_F32: u8 = 0;

/// Ids plus a dense row-major f32 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    ids: Vec<String>,
    dim: usize,
    values: Vec<f32>,
}

impl EmbeddingMatrix {
    pub fn new(ids: Vec<String>, dim: usize, values: Vec<f32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidEmbedding("dim must be positive".into()));
        }
        if values.len() != ids.len() * dim {
            return Err(Error::InvalidEmbedding(format!(
                "{} values for {} rows of dim {dim}",
                values.len(),
                ids.len()
            )));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        for (row, id) in ids.iter().enumerate() {
            if values[row * dim..(row + 1) * dim].iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { id: id.clone() });
            }
        }
        Ok(EmbeddingMatrix { ids, dim, values })
    }

    pub fn from_rows(rows: Vec<(String, Vec<f32>)>) -> Result<Self> {
        let dim = rows.first().map(|r| r.1.len()).unwrap_or(0);
        let mut ids = Vec::with_capacity(rows.len());
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (id, row) in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            ids.push(id);
            values.extend(row);
        }
        Self::new(ids, dim, values)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(21 + self.ids.len() * 8 + self.values.len() * 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.ids.len() as u64).to_le_bytes());
        let dim = u32::try_from(self.dim).map_err(|_| Error::InvalidEmbedding("dim exceeds u32".into()))?;
        out.extend_from_slice(&dim.to_le_bytes());
        out.push(DTYPE_F32);
        for id in &self.ids {
            let len = u16::try_from(id.len())
                .map_err(|_| Error::InvalidEmbedding(format!("id longer than 65535 bytes: {id:.32}…")))?;
            out.extend_from_slice(&len.to_le_bytes());
            out.extend_from_slice(id.as_bytes());
        }
        for v in &self.values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::BadMagic);
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let n = usize::try_from(r.u64()?).map_err(|_| Error::Truncated)?;
        let dim = r.u32()? as usize;
        let dtype = r.take(1)?[0];
        if dtype != DTYPE_F32 {
            return Err(Error::UnsupportedDtype(dtype));
        }
        // every id needs at least its two length bytes
        if n > bytes.len() / 2 {
            return Err(Error::Truncated);
        }
        let mut ids = Vec::with_capacity(n);
        for _ in 0..n {
            let len = u16::from_le_bytes(r.take(2)?.try_into().unwrap()) as usize;
            let id = std::str::from_utf8(r.take(len)?)
                .map_err(|e| Error::InvalidEmbedding(format!("id is not UTF-8: {e}")))?;
            ids.push(id.to_string());
        }
        let count = n.checked_mul(dim).ok_or(Error::Truncated)?;
        let raw = r.take(count.checked_mul(4).ok_or(Error::Truncated)?)?;
        if r.pos != bytes.len() {
            return Err(Error::InvalidEmbedding(format!(
                "{} trailing bytes",
                bytes.len() - r.pos
            )));
        }
        let values = raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if n == 0 {
            return Ok(EmbeddingMatrix {
                ids,
                dim,
                values,
            });
        }
        Self::new(ids, dim, values)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated)?;
        let slice = self.bytes.get(self.pos..end).ok_or(Error::Truncated)?;
        self.pos = end;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn load_embeddings(path: &Path) -> Result<EmbeddingMatrix> {
    EmbeddingMatrix::from_bytes(&fs::read(path)?)
}

pub fn save_embeddings(matrix: &EmbeddingMatrix, path: &Path) -> Result<()> {
    fs::write(path, matrix.to_bytes()?)?;
    Ok(())
}
