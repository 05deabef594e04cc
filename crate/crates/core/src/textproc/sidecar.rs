//! Tag sidecars: externally produced tags for corpus captions.
//!
//! ```text
//! # id = <caption_id>
//! surface<TAB>UPOS
//! ...
//! <blank line>
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::tokenize::tokenize;
use super::upos::Upos;
use super::TaggedCaption;
use crate::corpus::CaptionRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidecarEntry {
    pub caption_id: String,
    pub surfaces: Vec<String>,
    pub tags: Vec<Upos>,
}

pub fn parse_sidecar(text: &str) -> Result<Vec<SidecarEntry>> {
    let mut entries: Vec<SidecarEntry> = Vec::new();
    let mut open = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let malformed = |message: String| Error::Malformed {
            line: lineno + 1,
            message,
        };
        if line.is_empty() {
            open = false;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let id = rest
                .trim_start()
                .strip_prefix("id")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .map(str::trim)
                .ok_or_else(|| malformed(format!("expected `# id = <caption_id>`, got {line:?}")))?;
            if id.is_empty() {
                return Err(malformed("empty caption id".into()));
            }
            if open && entries.last().is_some_and(|e| !e.surfaces.is_empty()) {
                return Err(malformed("missing blank line between captions".into()));
            }
            entries.push(SidecarEntry {
                caption_id: id.to_string(),
                surfaces: Vec::new(),
                tags: Vec::new(),
            });
            open = true;
            continue;
        }
        if !open {
            return Err(malformed("token line outside a caption block".into()));
        }
        let (surface, tag) = line
            .split_once('\t')
            .ok_or_else(|| malformed(format!("expected `surface<TAB>UPOS`, got {line:?}")))?;
        if surface.is_empty() || tag.contains('\t') {
            return Err(malformed(format!("expected `surface<TAB>UPOS`, got {line:?}")));
        }
        let tag = tag
            .parse::<Upos>()
            .map_err(|_| malformed(format!("unknown UPOS tag {tag:?}")))?;
        let entry = entries.last_mut().expect("open block has an entry");
        entry.surfaces.push(surface.to_string());
        entry.tags.push(tag);
    }
    Ok(entries)
}

/// Attaches sidecar tags to corpus captions. Surfaces and tags are taken
/// verbatim from the sidecar; the token count must match the tokenized
/// caption text.
pub fn load_external_tags(text: &str, corpus: &[CaptionRecord]) -> Result<Vec<TaggedCaption>> {
    let by_id: HashMap<&str, &CaptionRecord> =
        corpus.iter().map(|r| (r.caption_id.as_str(), r)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for entry in parse_sidecar(text)? {
        let record = by_id
            .get(entry.caption_id.as_str())
            .ok_or_else(|| Error::UnknownCaption(entry.caption_id.clone()))?;
        if !seen.insert(entry.caption_id.clone()) {
            return Err(Error::DuplicateCaption(entry.caption_id));
        }
        let expected = tokenize(&record.text).len();
        if expected != entry.tags.len() {
            return Err(Error::TokenCountMismatch {
                caption_id: entry.caption_id,
                expected,
                found: entry.tags.len(),
            });
        }
        out.push(TaggedCaption::new(
            entry.caption_id,
            record.video_id.clone(),
            &entry.surfaces,
            &entry.tags,
        ));
    }
    Ok(out)
}

pub fn write_sidecar(captions: &[TaggedCaption]) -> String {
    let mut out = String::new();
    for (i, cap) in captions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "# id = {}", cap.caption_id);
        for t in &cap.tokens {
            let _ = writeln!(out, "{}\t{}", t.surface, t.pos);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Dataset, Split};
    use crate::textproc::Category;

    const GUY_CAPTION: &str = "a guy wearing a red shirt drives a car while talking";
    const GOLD: [&str; 11] = [
        "DET", "NOUN", "VERB", "DET", "ADJ", "NOUN", "VERB", "DET", "NOUN", "SCONJ", "VERB",
    ];

    fn record(id: &str, text: &str) -> CaptionRecord {
        CaptionRecord {
            caption_id: id.into(),
            video_id: format!("v-{id}"),
            text: text.into(),
            split: Split::Test,
            dataset: Dataset::Msrvtt,
        }
    }

    fn sidecar_for(id: &str, text: &str, tags: &[&str]) -> String {
        let mut s = format!("# id = {id}\n");
        for (w, t) in tokenize(text).iter().zip(tags) {
            s.push_str(&format!("{w}\t{t}\n"));
        }
        s
    }

    #[test]
    fn gold_sidecar_for_worked_example() {
        let corpus = vec![record("q", GUY_CAPTION)];
        let caps = load_external_tags(&sidecar_for("q", GUY_CAPTION, &GOLD), &corpus).unwrap();
        assert_eq!(caps.len(), 1);
        let cap = &caps[0];
        assert_eq!(cap.video_id, "v-q");
        assert_eq!(cap.count(Category::ObjectAttribute), 4);
        assert_eq!(cap.count(Category::Action), 3);
        assert_eq!(cap.count(Category::Syntax), 4);
        assert_eq!(cap.text(), GUY_CAPTION);
    }

    #[test]
    fn empty_file_gives_empty_corpus() {
        assert!(load_external_tags("", &[]).unwrap().is_empty());
    }

    #[test]
    fn short_sidecar_names_caption() {
        let corpus = vec![record("q", GUY_CAPTION)];
        let mut text = sidecar_for("q", GUY_CAPTION, &GOLD);
        text = text.lines().take(11).collect::<Vec<_>>().join("\n");
        match load_external_tags(&text, &corpus).unwrap_err() {
            Error::TokenCountMismatch {
                caption_id,
                expected,
                found,
            } => {
                assert_eq!(caption_id, "q");
                assert_eq!((expected, found), (11, 10));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let text = "# id = a\ndog\tNOUN\nruns VERB\n";
        assert!(matches!(parse_sidecar(text), Err(Error::Malformed { line: 3, .. })));
        let text = "# id = a\ndog\tNN\n";
        assert!(matches!(parse_sidecar(text), Err(Error::Malformed { line: 2, .. })));
        let text = "dog\tNOUN\n";
        assert!(matches!(parse_sidecar(text), Err(Error::Malformed { line: 1, .. })));
    }

    #[test]
    fn unknown_caption_is_rejected() {
        let text = "# id = zzz\ndog\tNOUN\n";
        assert!(matches!(
            load_external_tags(text, &[record("a", "dog")]),
            Err(Error::UnknownCaption(_))
        ));
    }

    #[test]
    fn written_sidecar_parses_back() {
        let corpus = vec![record("q", GUY_CAPTION), record("r", "dog runs")];
        let mut text = sidecar_for("q", GUY_CAPTION, &GOLD);
        text.push('\n');
        text.push_str(&sidecar_for("r", "dog runs", &["NOUN", "VERB"]));
        let caps = load_external_tags(&text, &corpus).unwrap();
        assert_eq!(write_sidecar(&caps), text);
    }
}
