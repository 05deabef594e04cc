//! Corpus-scale application of perturbation tasks and manifest I/O.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kind::{PerturbationKind, ORIGINAL_TASK_ID};
use super::ops::{perturb, PerturbContext, Provenance};
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::textproc::TaggedCaption;

/// One JSON Lines record of a `<task_id>.jsonl` manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub caption_id: String,
    pub video_id: String,
    pub task_id: String,
    pub text: String,
    pub provenance: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ManifestRecord {
    fn original(cap: &TaggedCaption) -> Self {
        ManifestRecord {
            caption_id: cap.caption_id.clone(),
            video_id: cap.video_id.clone(),
            task_id: ORIGINAL_TASK_ID.to_string(),
            text: cap.text(),
            provenance: (0..cap.tokens.len()).map(Provenance::Source).collect(),
            error: None,
        }
    }
}

/// Manifests keyed by task id, `original` included. Records are sorted by
/// caption id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PerturbedCorpus {
    pub manifests: BTreeMap<String, Vec<ManifestRecord>>,
}

impl PerturbedCorpus {
    pub fn failures(&self) -> BTreeMap<String, usize> {
        self.manifests
            .iter()
            .map(|(task, recs)| (task.clone(), recs.iter().filter(|r| r.error.is_some()).count()))
            .filter(|(_, n)| *n > 0)
            .collect()
    }

    pub fn encode(records: &[ManifestRecord]) -> Result<String> {
        let mut out = String::new();
        for r in records {
            out.push_str(&serde_json::to_string(r).map_err(|e| Error::json("manifest record", e))?);
            out.push('\n');
        }
        Ok(out)
    }

    /// Writes `<task_id>.jsonl` for every manifest, returning the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for (task, records) in &self.manifests {
            let path = dir.join(format!("{task}.jsonl"));
            fs::write(&path, Self::encode(records)?)?;
            paths.push(path);
        }
        Ok(paths)
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRecord>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Malformed {
                line: i + 1,
                message: format!("{}: {e}", path.display()),
            })
        })
        .collect()
}

/// Runs every requested task over every caption. Each (caption, task) pair
/// draws from its own stream seeded by `(run_seed, caption_id, task_id)`, so
/// output does not depend on scheduling. Per-caption failures are recorded in
/// the manifest rather than aborting the run.
pub fn apply_suite(
    corpus: &[TaggedCaption],
    tasks: &[PerturbationKind],
    run_seed: u64,
    ctx: &PerturbContext<'_>,
) -> Result<PerturbedCorpus> {
    if ctx.vocab.is_none() && tasks.iter().any(|k| k.needs_vocab()) {
        return Err(Error::MissingVocab);
    }
    let mut sorted: Vec<&TaggedCaption> = corpus.iter().collect();
    sorted.sort_by(|a, b| a.caption_id.cmp(&b.caption_id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].caption_id == w[1].caption_id) {
        return Err(Error::DuplicateCaption(w[0].caption_id.clone()));
    }

    let rows: Vec<Vec<ManifestRecord>> = sorted
        .par_iter()
        .map(|cap| {
            tasks
                .iter()
                .map(|&kind| {
                    let mut rng = SeededRng::for_stream(run_seed, &cap.caption_id, kind.task_id());
                    match perturb(kind, cap, ctx, &mut rng) {
                        Ok(p) => ManifestRecord {
                            caption_id: p.caption_id.clone(),
                            video_id: p.video_id.clone(),
                            task_id: kind.task_id().to_string(),
                            text: p.text(),
                            provenance: p.provenance,
                            error: None,
                        },
                        Err(e) => ManifestRecord {
                            caption_id: cap.caption_id.clone(),
                            video_id: cap.video_id.clone(),
                            task_id: kind.task_id().to_string(),
                            text: String::new(),
                            provenance: Vec::new(),
                            error: Some(e.to_string()),
                        },
                    }
                })
                .collect()
        })
        .collect();

    let mut out = PerturbedCorpus::default();
    out.manifests.insert(
        ORIGINAL_TASK_ID.to_string(),
        sorted.iter().map(|c| ManifestRecord::original(c)).collect(),
    );
    for (ti, kind) in tasks.iter().enumerate() {
        out.manifests.insert(
            kind.task_id().to_string(),
            rows.iter().map(|row| row[ti].clone()).collect(),
        );
    }
    Ok(out)
}
