//! Rank-based retrieval metrics.
//!
//! Ties are pessimistic: a non-truth candidate scoring exactly the best truth
//! score ranks ahead of it. For queries with several correct candidates the
//! best-scoring one counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cevb::EmbeddingMatrix;
use super::similarity::{cosine_similarity, SimilarityMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    T2v,
    V2t,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::T2v, Direction::V2t];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::T2v => "t2v",
            Direction::V2t => "v2t",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t2v" => Ok(Direction::T2v),
            "v2t" => Ok(Direction::V2t),
            other => Err(Error::Config(format!("unknown direction {other:?}"))),
        }
    }
}

/// Correct candidates per query.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub truth: BTreeMap<String, BTreeSet<String>>,
}

impl GroundTruth {
    /// Caption queries, each with its single video.
    pub fn text_to_video<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut truth: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (caption, video) in pairs {
            truth.entry(caption.to_string()).or_default().insert(video.to_string());
        }
        GroundTruth { truth }
    }

    /// Video queries, each with all of its captions.
    pub fn video_to_text<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut truth: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (caption, video) in pairs {
            truth.entry(video.to_string()).or_default().insert(caption.to_string());
        }
        GroundTruth { truth }
    }

    pub fn for_direction<'a>(
        direction: Direction,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        match direction {
            Direction::T2v => Self::text_to_video(pairs),
            Direction::V2t => Self::video_to_text(pairs),
        }
    }
}

/// 1-based pessimistic rank of the best truth within one score row.
pub fn rank_in_row(row: &[f32], truth: &[usize]) -> usize {
    let best = truth
        .iter()
        .map(|&j| row[j])
        .fold(f32::NEG_INFINITY, f32::max);
    let mut rank = 1;
    for (j, &s) in row.iter().enumerate() {
        if s > best || (s == best && !truth.contains(&j)) {
            rank += 1;
        }
    }
    rank
}

fn candidate_index(sim: &SimilarityMatrix) -> HashMap<&str, usize> {
    sim.candidate_ids()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect()
}

fn truth_indices(index: &HashMap<&str, usize>, ids: &BTreeSet<String>, missing: &mut Vec<String>) -> Vec<usize> {
    ids.iter()
        .filter_map(|id| match index.get(id.as_str()) {
            Some(&i) => Some(i),
            None => {
                missing.push(id.clone());
                None
            }
        })
        .collect()
}

pub fn rank_of_truth(sim: &SimilarityMatrix, gt: &GroundTruth, query: &str) -> Result<usize> {
    let qi = sim
        .query_ids()
        .iter()
        .position(|q| q == query)
        .ok_or_else(|| Error::MissingIds(vec![query.to_string()]))?;
    let ids = gt
        .truth
        .get(query)
        .ok_or_else(|| Error::MissingIds(vec![query.to_string()]))?;
    let mut missing = Vec::new();
    let truth = truth_indices(&candidate_index(sim), ids, &mut missing);
    if !missing.is_empty() || truth.is_empty() {
        return Err(Error::MissingIds(missing));
    }
    Ok(rank_in_row(sim.row(qi), &truth))
}

/// Ranks for every ground-truth query, in ground-truth key order.
pub fn ranks_for(sim: &SimilarityMatrix, gt: &GroundTruth) -> Result<Vec<usize>> {
    let rows: HashMap<&str, usize> = sim
        .query_ids()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let cands = candidate_index(sim);
    let mut missing = Vec::new();
    let mut jobs = Vec::with_capacity(gt.truth.len());
    for (query, ids) in &gt.truth {
        let row = rows.get(query.as_str()).copied();
        if row.is_none() {
            missing.push(query.clone());
        }
        let truth = truth_indices(&cands, ids, &mut missing);
        if let Some(r) = row {
            jobs.push((r, truth));
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(Error::MissingIds(missing));
    }
    Ok(jobs
        .par_iter()
        .map(|(r, truth)| rank_in_row(sim.row(*r), truth))
        .collect())
}

pub fn recall_at_k(ranks: &[usize], k: usize) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyRanks);
    }
    let hits = ranks.iter().filter(|&&r| r <= k).count();
    Ok(100.0 * hits as f64 / ranks.len() as f64)
}

/// Lower median for even counts.
pub fn median_rank(ranks: &[usize]) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyRanks);
    }
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    Ok(sorted[(sorted.len() - 1) / 2] as f64)
}

pub fn mean_rank(ranks: &[usize]) -> Result<f64> {
    if ranks.is_empty() {
        return Err(Error::EmptyRanks);
    }
    Ok(ranks.iter().map(|&r| r as f64).sum::<f64>() / ranks.len() as f64)
}

/// Metrics of one task in one direction. Values are unrounded; emitters
/// round to one decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub task_id: String,
    pub direction: Direction,
    pub r1: f64,
    pub r5: f64,
    pub r10: f64,
    pub median_rank: f64,
    pub mean_rank: f64,
    pub query_count: usize,
}

impl MetricsReport {
    pub fn from_ranks(task_id: &str, direction: Direction, ranks: &[usize]) -> Result<Self> {
        Ok(MetricsReport {
            task_id: task_id.to_string(),
            direction,
            r1: recall_at_k(ranks, 1)?,
            r5: recall_at_k(ranks, 5)?,
            r10: recall_at_k(ranks, 10)?,
            median_rank: median_rank(ranks)?,
            mean_rank: mean_rank(ranks)?,
            query_count: ranks.len(),
        })
    }
}

/// Scores a precomputed text-by-video similarity matrix.
pub fn evaluate_similarity(
    text_by_video: &SimilarityMatrix,
    pairs: &[(String, String)],
    direction: Direction,
    task_id: &str,
) -> Result<MetricsReport> {
    let gt = GroundTruth::for_direction(direction, pairs.iter().map(|(c, v)| (c.as_str(), v.as_str())));
    let ranks = match direction {
        Direction::T2v => ranks_for(text_by_video, &gt)?,
        Direction::V2t => ranks_for(&text_by_video.transpose(), &gt)?,
    };
    MetricsReport::from_ranks(task_id, direction, &ranks)
}

/// Cosine-scores text rows against video rows and evaluates one direction.
/// `pairs` are (caption id, video id) ground-truth links.
pub fn evaluate_run(
    texts: &EmbeddingMatrix,
    videos: &EmbeddingMatrix,
    pairs: &[(String, String)],
    direction: Direction,
    task_id: &str,
) -> Result<MetricsReport> {
    let sim = cosine_similarity(texts, videos)?;
    evaluate_similarity(&sim, pairs, direction, task_id)
}
