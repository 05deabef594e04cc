use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::textproc::{Category, TaggedCaption};

/// Corpus-derived noun and verb inventories with frequencies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplacementVocab {
    pub nouns: BTreeMap<String, u64>,
    pub verbs: BTreeMap<String, u64>,
    pub digest: String,
}

pub fn build_vocab(corpus: &[TaggedCaption]) -> ReplacementVocab {
    let mut vocab = ReplacementVocab::default();
    let mut ordered: Vec<&TaggedCaption> = corpus.iter().collect();
    ordered.sort_by(|a, b| a.caption_id.cmp(&b.caption_id));
    let mut hasher = Sha256::new();
    for cap in ordered {
        hasher.update(cap.caption_id.as_bytes());
        for t in &cap.tokens {
            hasher.update(b"\t");
            hasher.update(t.surface.as_bytes());
            hasher.update(b"/");
            hasher.update(t.pos.as_str().as_bytes());
            if t.is_noun() {
                *vocab.nouns.entry(t.lower.clone()).or_default() += 1;
            } else if t.category == Category::Action {
                *vocab.verbs.entry(t.lower.clone()).or_default() += 1;
            }
        }
        hasher.update(b"\n");
    }
    vocab.digest = hex::encode(hasher.finalize());
    vocab
}

impl ReplacementVocab {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::json("serialize vocab", e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::json("parse vocab", e))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexEntry {
    pub synonyms: BTreeSet<String>,
    pub antonyms: BTreeSet<String>,
}

/// Synonym/antonym sets keyed by lowercased lemma. Relations are taken as
/// listed; no symmetric closure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, LexEntry>,
}

static EMPTY: std::sync::OnceLock<LexEntry> = std::sync::OnceLock::new();

impl Lexicon {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Parses `lemma<TAB>syn:<a,b,...><TAB>ant:<c,d,...>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: HashMap<String, LexEntry> = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |message: &str| Error::Malformed {
                line: lineno + 1,
                message: message.to_string(),
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols[0].trim().is_empty() {
                return Err(malformed("expected `lemma<TAB>syn:<list><TAB>ant:<list>`"));
            }
            let syn = cols[1]
                .strip_prefix("syn:")
                .ok_or_else(|| malformed("second column must start with `syn:`"))?;
            let ant = cols[2]
                .strip_prefix("ant:")
                .ok_or_else(|| malformed("third column must start with `ant:`"))?;
            let list = |s: &str| -> BTreeSet<String> {
                s.split(',')
                    .map(|w| w.trim().to_lowercase())
                    .filter(|w| !w.is_empty())
                    .collect()
            };
            let entry = entries.entry(cols[0].trim().to_lowercase()).or_default();
            entry.synonyms.extend(list(syn));
            entry.antonyms.extend(list(ant));
        }
        Ok(Lexicon { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn lookup(&self, word: &str) -> &LexEntry {
        self.entries
            .get(&word.to_lowercase())
            .unwrap_or_else(|| EMPTY.get_or_init(LexEntry::default))
    }

    /// True when `candidate` may not replace `original`.
    pub fn excludes(&self, original: &str, candidate: &str) -> bool {
        if original == candidate {
            return true;
        }
        let e = self.lookup(original);
        e.synonyms.contains(candidate) || e.antonyms.contains(candidate)
    }
}
