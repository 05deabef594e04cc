//! Caption corpora: dataset loaders and the canonical JSON Lines format.

mod adapter;
mod canonical;
mod loaders;

pub use adapter::{AdapterConfig, FieldMap};
pub use canonical::{corpus_manifest, manifest_path, read_corpus, write_corpus, CorpusManifest};
pub use loaders::{load_didemo, load_msrvtt, load_msvd, parse_id_list};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::UnknownSplit(other.to_string())),
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dataset {
    Msrvtt,
    Msvd,
    Didemo,
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "msrvtt" => Ok(Dataset::Msrvtt),
            "msvd" => Ok(Dataset::Msvd),
            "didemo" => Ok(Dataset::Didemo),
            other => Err(Error::UnknownDataset(other.to_string())),
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dataset::Msrvtt => "msrvtt",
            Dataset::Msvd => "msvd",
            Dataset::Didemo => "didemo",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaptionRecord {
    pub caption_id: String,
    pub video_id: String,
    pub text: String,
    pub split: Split,
    pub dataset: Dataset,
}

/// Number of distinct videos among `records`.
pub fn video_count(records: &[CaptionRecord]) -> usize {
    let mut ids: Vec<&str> = records.iter().map(|r| r.video_id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}
