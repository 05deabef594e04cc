//! Canonical corpus files: `<name>.jsonl` sorted by caption id, with a
//! `<name>.manifest.json` carrying counts and a SHA-256 content digest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{video_count, CaptionRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub dataset: String,
    pub split: String,
    pub record_count: usize,
    pub video_count: usize,
    pub digest: String,
}

pub fn manifest_path(corpus: &Path) -> PathBuf {
    let stem = corpus
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    corpus.with_file_name(format!("{stem}.manifest.json"))
}

fn common<T: ToString>(values: impl Iterator<Item = T>) -> String {
    let mut all: Vec<String> = values.map(|v| v.to_string()).collect();
    all.sort();
    all.dedup();
    match all.len() {
        0 => String::new(),
        1 => all.remove(0),
        _ => "mixed".into(),
    }
}

fn encode(records: &[CaptionRecord]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).map_err(|e| Error::json("serialize record", e))?);
        out.push('\n');
    }
    Ok(out)
}

pub fn corpus_manifest(records: &[CaptionRecord], body: &[u8]) -> CorpusManifest {
    CorpusManifest {
        dataset: common(records.iter().map(|r| r.dataset)),
        split: common(records.iter().map(|r| r.split)),
        record_count: records.len(),
        video_count: video_count(records),
        digest: hex::encode(Sha256::digest(body)),
    }
}

/// Writes records sorted by caption id plus the manifest next to them.
pub fn write_corpus(records: &[CaptionRecord], path: &Path) -> Result<CorpusManifest> {
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| a.caption_id.cmp(&b.caption_id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].caption_id == w[1].caption_id) {
        return Err(Error::DuplicateCaption(w[0].caption_id.clone()));
    }
    let body = encode(&sorted)?;
    let manifest = corpus_manifest(&sorted, body.as_bytes());
    fs::write(path, &body)?;
    let mut m = serde_json::to_string_pretty(&manifest).map_err(|e| Error::json("manifest", e))?;
    m.push('\n');
    fs::write(manifest_path(path), m)?;
    Ok(manifest)
}

/// Reads a canonical corpus. When a manifest sits next to the file, the
/// content digest and counts must match it.
pub fn read_corpus(path: &Path) -> Result<Vec<CaptionRecord>> {
    let body = fs::read(path)?;
    let mpath = manifest_path(path);
    let expected: Option<CorpusManifest> = if mpath.exists() {
        let text = fs::read_to_string(&mpath)?;
        Some(serde_json::from_str(&text).map_err(|e| Error::json("corpus manifest", e))?)
    } else {
        None
    };
    if let Some(m) = &expected {
        let found = hex::encode(Sha256::digest(&body));
        if found != m.digest {
            return Err(Error::DigestMismatch {
                expected: m.digest.clone(),
                found,
            });
        }
    }
    let text = String::from_utf8(body).map_err(|e| Error::Malformed {
        line: 0,
        message: format!("corpus is not UTF-8: {e}"),
    })?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: CaptionRecord = serde_json::from_str(line).map_err(|e| Error::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(rec);
    }
    for w in records.windows(2) {
        if w[0].caption_id >= w[1].caption_id {
            return Err(if w[0].caption_id == w[1].caption_id {
                Error::DuplicateCaption(w[1].caption_id.clone())
            } else {
                Error::Malformed {
                    line: 0,
                    message: "records are not sorted by caption_id".into(),
                }
            });
        }
    }
    if let Some(m) = expected {
        if m.record_count != records.len() || m.video_count != video_count(&records) {
            return Err(Error::Malformed {
                line: 0,
                message: "record or video count disagrees with manifest".into(),
            });
        }
    }
    Ok(records)
}
