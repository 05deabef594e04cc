//! Dataset adapter configs.
//!
//! Upstream annotation releases differ in layout, so the loaders read their
//! field names from a small TOML file:
//!
//! ```toml
//! dataset = "msrvtt"
//! annotation = "MSRVTT_data.json"
//!
//! [splits]
//! train = "train_list.txt"
//! test = "test_list.txt"
//!
//! [fields]
//! captions = "sentences"
//! text = "caption"
//! video_id = "video_id"
//! caption_id = "sen_id"
//! videos = "videos"
//! ```
//!
//! Relative paths resolve against the config file's directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{loaders, CaptionRecord, Dataset, Split};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldMap {
    /// Dotted path to the caption array; empty means the document root.
    pub captions: String,
    pub text: String,
    pub video_id: String,
    /// Caption id field. When absent, ids are `<video_id>#<n>`.
    pub caption_id: Option<String>,
    /// Dotted path to the video array used to validate caption references.
    pub videos: Option<String>,
    pub video_key: String,
}

impl Default for FieldMap {
    fn default() -> Self {
        FieldMap {
            captions: "sentences".into(),
            text: "caption".into(),
            video_id: "video_id".into(),
            caption_id: Some("sen_id".into()),
            videos: Some("videos".into()),
            video_key: "video_id".into(),
        }
    }
}

impl FieldMap {
    pub fn didemo() -> Self {
        FieldMap {
            captions: String::new(),
            text: "description".into(),
            video_id: "video".into(),
            caption_id: None,
            videos: None,
            video_key: "video".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdapterConfig {
    pub dataset: Dataset,
    /// Annotation file for msrvtt/msvd. DiDeMo ships one annotation file per
    /// split, listed under `splits`.
    #[serde(default)]
    pub annotation: Option<PathBuf>,
    #[serde(default)]
    pub splits: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub fields: Option<FieldMap>,
    /// Keep every caption of a test video instead of the first one.
    #[serde(default)]
    pub all_captions: bool,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl AdapterConfig {
    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: AdapterConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, base)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn split_path(&self, split: Split) -> Result<PathBuf> {
        self.splits
            .get(&split.to_string())
            .map(|p| self.resolve(p))
            .ok_or_else(|| Error::Config(format!("no `{split}` entry under [splits]")))
    }

    fn annotation_path(&self) -> Result<PathBuf> {
        self.annotation
            .as_deref()
            .map(|p| self.resolve(p))
            .ok_or_else(|| Error::Config("missing `annotation`".into()))
    }

    /// Loads the requested split; `split` is parsed so unknown names fail.
    pub fn load_split(&self, split: &str) -> Result<Vec<CaptionRecord>> {
        let split: Split = split.parse()?;
        match self.dataset {
            Dataset::Msrvtt => {
                let fields = self.fields.clone().unwrap_or_default();
                loaders::load_msrvtt(
                    &fs::read_to_string(self.annotation_path()?)?,
                    &fs::read_to_string(self.split_path(split)?)?,
                    split,
                    &fields,
                    self.all_captions,
                )
            }
            Dataset::Msvd => loaders::load_msvd(
                &fs::read_to_string(self.annotation_path()?)?,
                &fs::read_to_string(self.split_path(split)?)?,
                split,
            ),
            Dataset::Didemo => {
                let fields = self.fields.clone().unwrap_or_else(FieldMap::didemo);
                loaders::load_didemo(&fs::read_to_string(self.split_path(split)?)?, split, &fields)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = AdapterConfig::from_toml(
            "dataset = \"didemo\"\n[splits]\ntest = \"test_data.json\"\n",
            "/data",
        )
        .unwrap();
        assert_eq!(cfg.dataset, Dataset::Didemo);
        assert_eq!(cfg.split_path(Split::Test).unwrap(), PathBuf::from("/data/test_data.json"));
        assert!(cfg.split_path(Split::Train).is_err());
    }

    #[test]
    fn unknown_keys_and_datasets_are_rejected() {
        assert!(AdapterConfig::from_toml("dataset = \"kinetics\"\n", ".").is_err());
        assert!(AdapterConfig::from_toml("dataset = \"msvd\"\nbogus = 1\n", ".").is_err());
    }

    #[test]
    fn unknown_split_name() {
        let cfg = AdapterConfig::from_toml("dataset = \"msvd\"\n", ".").unwrap();
        assert!(matches!(cfg.load_split("val"), Err(Error::UnknownSplit(_))));
    }
}
