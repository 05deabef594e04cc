use std::collections::{BTreeMap, HashMap, HashSet};

use serde_json::Value;

use super::adapter::FieldMap;
use super::{CaptionRecord, Dataset, Split};
use crate::error::{Error, Result};

/// Parses a split list: one video id per line, or a CSV with a header row
/// (the `video_id` column if present, otherwise the first column).
pub fn parse_id_list(text: &str) -> Vec<String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let Some(first) = lines.next() else {
        return Vec::new();
    };
    if !first.contains(',') {
        return std::iter::once(first).chain(lines).map(String::from).collect();
    }
    let column = first
        .split(',')
        .position(|h| h.trim() == "video_id")
        .unwrap_or(0);
    lines
        .filter_map(|l| l.split(',').nth(column))
        .map(|c| c.trim().to_string())
        .collect()
}

fn at_path<'a>(doc: &'a Value, path: &str) -> Option<&'a Value> {
    if path.is_empty() {
        return Some(doc);
    }
    path.split('.').try_fold(doc, |v, key| v.get(key))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn field(item: &Value, name: &str, index: usize) -> Result<String> {
    item.get(name).and_then(scalar).ok_or_else(|| {
        Error::Config(format!("annotation item {index} has no string field `{name}`"))
    })
}

fn array<'a>(doc: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    at_path(doc, path)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Config(format!("no array at `{path}`")))
}

fn parse_json(text: &str) -> Result<Value> {
    if text.trim().is_empty() {
        return Err(Error::NoRecords);
    }
    serde_json::from_str(text).map_err(|e| Error::json("annotation file", e))
}

fn sorted(mut records: Vec<CaptionRecord>) -> Result<Vec<CaptionRecord>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    records.sort_by(|a, b| a.caption_id.cmp(&b.caption_id));
    if let Some(w) = records.windows(2).find(|w| w[0].caption_id == w[1].caption_id) {
        return Err(Error::DuplicateCaption(w[0].caption_id.clone()));
    }
    Ok(records)
}

fn check_listed(listed: &[String], present: &HashSet<String>) -> Result<()> {
    let missing: Vec<String> = listed.iter().filter(|v| !present.contains(*v)).cloned().collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingIds(missing))
    }
}

/// MSRVTT: a JSON document with a caption array (and optionally a video
/// array) plus a split list. For the test split only the first caption of
/// each video is kept unless `all_captions` is set.
pub fn load_msrvtt(
    annotation: &str,
    split_list: &str,
    split: Split,
    fields: &FieldMap,
    all_captions: bool,
) -> Result<Vec<CaptionRecord>> {
    let doc = parse_json(annotation)?;
    let captions = array(&doc, &fields.captions)?;
    if captions.is_empty() {
        return Err(Error::NoRecords);
    }
    let known_videos: Option<HashSet<String>> = match &fields.videos {
        Some(path) => Some(
            array(&doc, path)?
                .iter()
                .enumerate()
                .map(|(i, v)| field(v, &fields.video_key, i))
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    let wanted: Vec<String> = parse_id_list(split_list);
    let wanted_set: HashSet<String> = wanted.iter().cloned().collect();

    let mut per_video: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::new();
    for (i, item) in captions.iter().enumerate() {
        let video_id = field(item, &fields.video_id, i)?;
        let ordinal = per_video.entry(video_id.clone()).or_default();
        let caption_id = match &fields.caption_id {
            Some(name) => field(item, name, i)?,
            None => format!("{video_id}#{ordinal}"),
        };
        *ordinal += 1;
        if let Some(known) = &known_videos {
            if !known.contains(&video_id) {
                return Err(Error::MissingVideo {
                    caption_id,
                    video_id,
                });
            }
        }
        if !wanted_set.contains(&video_id) {
            continue;
        }
        if split == Split::Test && !all_captions && *ordinal > 1 {
            continue;
        }
        records.push(CaptionRecord {
            caption_id,
            video_id,
            text: field(item, &fields.text, i)?,
            split,
            dataset: Dataset::Msrvtt,
        });
    }
    let present: HashSet<String> = records.iter().map(|r| r.video_id.clone()).collect();
    check_listed(&wanted, &present)?;
    sorted(records)
}

/// MSVD: a plain-text caption file of `<video_id> <caption>` lines plus a
/// split list. Every caption of every listed video is kept.
pub fn load_msvd(captions: &str, split_list: &str, split: Split) -> Result<Vec<CaptionRecord>> {
    let wanted = parse_id_list(split_list);
    let wanted_set: HashSet<&str> = wanted.iter().map(String::as_str).collect();
    let mut per_video: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::new();
    for (lineno, line) in captions.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (video_id, text) = line.split_once(char::is_whitespace).ok_or_else(|| Error::Malformed {
            line: lineno + 1,
            message: "expected `<video_id> <caption>`".into(),
        })?;
        let ordinal = per_video.entry(video_id.to_string()).or_default();
        let n = *ordinal;
        *ordinal += 1;
        if !wanted_set.contains(video_id) {
            continue;
        }
        records.push(CaptionRecord {
            caption_id: format!("{video_id}#{n:03}"),
            video_id: video_id.to_string(),
            text: text.trim().to_string(),
            split,
            dataset: Dataset::Msvd,
        });
    }
    if per_video.is_empty() {
        return Err(Error::NoRecords);
    }
    let present: HashSet<String> = records.iter().map(|r| r.video_id.clone()).collect();
    check_listed(&wanted, &present)?;
    sorted(records)
}

/// DiDeMo: one annotation array per split. All sentences of a video are
/// joined in annotation order with single spaces into one paragraph record
/// whose caption id is the video id.
pub fn load_didemo(annotation: &str, split: Split, fields: &FieldMap) -> Result<Vec<CaptionRecord>> {
    let doc = parse_json(annotation)?;
    let items = array(&doc, &fields.captions)?;
    let mut order: Vec<String> = Vec::new();
    let mut paragraphs: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, item) in items.iter().enumerate() {
        let video_id = field(item, &fields.video_id, i)?;
        let sentence = field(item, &fields.text, i)?;
        let entry = paragraphs.entry(video_id.clone()).or_insert_with(|| {
            order.push(video_id);
            Vec::new()
        });
        entry.push(sentence.trim().to_string());
    }
    let records = order
        .into_iter()
        .map(|video_id| {
            let text = paragraphs[&video_id].join(" ");
            CaptionRecord {
                caption_id: video_id.clone(),
                video_id,
                text,
                split,
                dataset: Dataset::Didemo,
            }
        })
        .collect();
    sorted(records)
}
