use std::io::{Read, Write};

use rayon::prelude::*;

use super::cevb::EmbeddingMatrix;
use crate::error::{Error, Result};

/// Query-by-candidate score matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    query_ids: Vec<String>,
    candidate_ids: Vec<String>,
    scores: Vec<f32>,
}

impl SimilarityMatrix {
    pub fn new(query_ids: Vec<String>, candidate_ids: Vec<String>, scores: Vec<f32>) -> Result<Self> {
        if scores.len() != query_ids.len() * candidate_ids.len() {
            return Err(Error::DimMismatch {
                left: query_ids.len() * candidate_ids.len(),
                right: scores.len(),
            });
        }
        for (i, q) in query_ids.iter().enumerate() {
            let n = candidate_ids.len();
            if scores[i * n..(i + 1) * n].iter().any(|s| !s.is_finite()) {
                return Err(Error::NonFinite { id: q.clone() });
            }
        }
        Ok(SimilarityMatrix {
            query_ids,
            candidate_ids,
            scores,
        })
    }

    pub fn query_ids(&self) -> &[String] {
        &self.query_ids
    }

    pub fn candidate_ids(&self) -> &[String] {
        &self.candidate_ids
    }

    pub fn row(&self, i: usize) -> &[f32] {
        let n = self.candidate_ids.len();
        &self.scores[i * n..(i + 1) * n]
    }

    pub fn get(&self, query: usize, candidate: usize) -> f32 {
        self.scores[query * self.candidate_ids.len() + candidate]
    }

    pub fn transpose(&self) -> SimilarityMatrix {
        let (q, c) = (self.query_ids.len(), self.candidate_ids.len());
        let mut scores = Vec::with_capacity(q * c);
        for j in 0..c {
            for i in 0..q {
                scores.push(self.scores[i * c + j]);
            }
        }
        SimilarityMatrix {
            query_ids: self.candidate_ids.clone(),
            candidate_ids: self.query_ids.clone(),
            scores,
        }
    }

    /// Reads the CSV layout: a header row of candidate ids (optionally led by
    /// one label cell), then one row per query: query id followed by scores.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut rows = rdr.records();
        let header = rows.next().ok_or(Error::NoRecords)??;
        let header: Vec<String> = header.iter().map(String::from).collect();
        let mut query_ids = Vec::new();
        let mut scores = Vec::new();
        let mut candidate_ids: Option<Vec<String>> = None;
        for (i, row) in rows.enumerate() {
            let row = row?;
            let width = row.len().saturating_sub(1);
            let cands = candidate_ids.get_or_insert_with(|| {
                if header.len() == width + 1 {
                    header[1..].to_vec()
                } else {
                    header.clone()
                }
            });
            if cands.len() != width {
                return Err(Error::Malformed {
                    line: i + 2,
                    message: format!("expected {} scores, found {width}", cands.len()),
                });
            }
            query_ids.push(row[0].to_string());
            for cell in row.iter().skip(1) {
                let v: f32 = cell.trim().parse().map_err(|_| Error::Malformed {
                    line: i + 2,
                    message: format!("not a number: {cell:?}"),
                })?;
                scores.push(v);
            }
        }
        let candidate_ids = candidate_ids.unwrap_or(header);
        Self::new(query_ids, candidate_ids, scores)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(std::iter::once("").chain(self.candidate_ids.iter().map(String::as_str)))?;
        for (i, q) in self.query_ids.iter().enumerate() {
            let mut rec = vec![q.clone()];
            rec.extend(self.row(i).iter().map(|s| s.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn norms(m: &EmbeddingMatrix) -> Vec<f64> {
    (0..m.len())
        .map(|i| m.row(i).iter().map(|&v| (v as f64) * (v as f64)).sum::<f64>().sqrt())
        .collect()
}

/// Cosine similarity of every text row against every video row, accumulated
/// in f64. Rows with zero norm score 0 against everything.
pub fn cosine_similarity(texts: &EmbeddingMatrix, videos: &EmbeddingMatrix) -> Result<SimilarityMatrix> {
    if texts.dim() != videos.dim() && !texts.is_empty() && !videos.is_empty() {
        return Err(Error::DimMismatch {
            left: texts.dim(),
            right: videos.dim(),
        });
    }
    let tn = norms(texts);
    let vn = norms(videos);
    let scores: Vec<f32> = (0..texts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let t = texts.row(i);
            let tn_i = tn[i];
            let vn = &vn;
            (0..videos.len()).map(move |j| {
                if tn_i == 0.0 || vn[j] == 0.0 {
                    return 0.0;
                }
                let dot: f64 = t
                    .iter()
                    .zip(videos.row(j))
                    .map(|(&a, &b)| a as f64 * b as f64)
                    .sum();
                (dot / (tn_i * vn[j])) as f32
            })
        })
        .collect();
    SimilarityMatrix::new(texts.ids().to_vec(), videos.ids().to_vec(), scores)
}
