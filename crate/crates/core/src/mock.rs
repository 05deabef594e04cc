//! Deterministic bag-of-words encoder for runs without a real model.
//!
//! Each lowercased token hashes (FNV-1a 64) to a coordinate `h mod 256` with
//! sign `+1` when bit 63 of `h` is clear and `-1` otherwise. The signed
//! one-hots are summed in f64 and L2-normalized; an empty caption encodes to
//! the zero vector.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::rng::fnv1a64;
use crate::retrieval::EmbeddingMatrix;
use crate::textproc::tokenize;

pub const MOCK_DIM: usize = 256;

pub fn mock_encode(text: &str) -> Vec<f32> {
    let mut acc = [0.0f64; MOCK_DIM];
    for token in tokenize(text) {
        let h = fnv1a64(token.to_lowercase().as_bytes());
        let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
        acc[(h % MOCK_DIM as u64) as usize] += sign;
    }
    let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; MOCK_DIM];
    }
    acc.iter().map(|v| (v / norm) as f32).collect()
}

/// Encodes `(id, text)` rows in the given order.
pub fn mock_text_matrix<'a>(rows: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<EmbeddingMatrix> {
    let rows: Vec<(String, Vec<f32>)> = rows
        .into_iter()
        .map(|(id, text)| (id.to_string(), mock_encode(text)))
        .collect();
    if rows.is_empty() {
        return EmbeddingMatrix::new(Vec::new(), MOCK_DIM, Vec::new());
    }
    EmbeddingMatrix::from_rows(rows)
}

/// Video vectors for the mock run: the normalized sum of the mock vectors of
/// each video's original captions (a single caption's vector when the video
/// has one). Rows are ordered by video id.
pub fn mock_video_matrix<'a>(
    captions: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<EmbeddingMatrix> {
    let mut sums: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (video_id, text) in captions {
        let v = mock_encode(text);
        let acc = sums.entry(video_id).or_insert_with(|| vec![0.0; MOCK_DIM]);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x as f64;
        }
    }
    let rows = sums
        .into_iter()
        .map(|(id, acc)| {
            let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
            let row = if norm == 0.0 {
                vec![0.0; MOCK_DIM]
            } else {
                acc.iter().map(|v| (v / norm) as f32).collect()
            };
            (id.to_string(), row)
        })
        .collect::<Vec<_>>();
    if rows.is_empty() {
        return EmbeddingMatrix::new(Vec::new(), MOCK_DIM, Vec::new());
    }
    EmbeddingMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nonzero(v: &[f32]) -> Vec<usize> {
        v.iter().enumerate().filter(|(_, x)| **x != 0.0).map(|(i, _)| i).collect()
    }

    #[test]
    fn empty_caption_is_zero() {
        assert!(mock_encode("").iter().all(|&x| x == 0.0));
        assert_eq!(mock_encode("").len(), MOCK_DIM);
    }

    #[test]
    fn repetition_does_not_change_direction() {
        assert_eq!(mock_encode("dog dog"), mock_encode("dog"));
        assert_eq!(mock_encode("Dog"), mock_encode("dog"));
    }

    #[test]
    fn order_invariant() {
        assert_eq!(mock_encode("a guy drives a car"), mock_encode("car a drives guy a"));
    }

    #[test]
    fn a_guy_uses_pinned_hash_coordinates() {
        // FNV-1a 64 of "a" = 0xaf63dc4c8601ec8c; of "guy" = 0xd5195618fad9a650; both have bit 63 set
        let v = mock_encode("a guy");
        assert_eq!(nonzero(&v), vec![0x50, 0x8c]);
        let h = std::f32::consts::FRAC_1_SQRT_2;
        assert!((v[0x8c] + h).abs() < 1e-7);
        assert!((v[0x50] + h).abs() < 1e-7);
    }
}
