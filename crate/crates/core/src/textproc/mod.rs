//! Tokenization, part-of-speech tagging and compositional categories.

mod sidecar;
mod tagger;
mod tokenize;
mod upos;

pub use sidecar::{load_external_tags, parse_sidecar, write_sidecar, SidecarEntry};
pub use tagger::{accuracy, train_tagger, TaggedSentence, TaggerModel};
pub use tokenize::{normalize, tokenize};
pub use upos::{categorize, Category, Upos};

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub pos: Upos,
    pub category: Category,
    pub index: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, pos: Upos, index: usize) -> Self {
        let surface = surface.into();
        Token {
            lower: surface.to_lowercase(),
            category: categorize(pos),
            surface,
            pos,
            index,
        }
    }

    /// Nouns in the narrow sense used by the shift/replacement/partial tasks.
    pub fn is_noun(&self) -> bool {
        matches!(self.pos, Upos::Noun | Upos::Propn)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedCaption {
    pub caption_id: String,
    pub video_id: String,
    pub tokens: Vec<Token>,
}

impl TaggedCaption {
    pub fn new(
        caption_id: impl Into<String>,
        video_id: impl Into<String>,
        surfaces: &[String],
        tags: &[Upos],
    ) -> Self {
        assert_eq!(surfaces.len(), tags.len(), "one tag per token");
        let tokens = surfaces
            .iter()
            .zip(tags)
            .enumerate()
            .map(|(i, (s, &t))| Token::new(s.clone(), t, i))
            .collect();
        TaggedCaption {
            caption_id: caption_id.into(),
            video_id: video_id.into(),
            tokens,
        }
    }

    /// Tokenizes `text` and tags it with `model`.
    pub fn from_model(
        model: &TaggerModel,
        caption_id: impl Into<String>,
        video_id: impl Into<String>,
        text: &str,
    ) -> Result<Self> {
        let surfaces = tokenize(text);
        let tags = if surfaces.is_empty() {
            Vec::new()
        } else {
            model.tag(&surfaces)?
        };
        Ok(Self::new(caption_id, video_id, &surfaces, &tags))
    }

    pub fn text(&self) -> String {
        join_surfaces(self.tokens.iter().map(|t| t.surface.as_str()))
    }

    pub fn surfaces(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.surface.clone()).collect()
    }

    pub fn count(&self, category: Category) -> usize {
        self.tokens.iter().filter(|t| t.category == category).count()
    }
}

pub(crate) fn join_surfaces<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Upos::*;

    pub(crate) fn guy_caption() -> TaggedCaption {
        let surfaces = tokenize("a guy wearing a red shirt drives a car while talking");
        TaggedCaption::new(
            "q",
            "v",
            &surfaces,
            &[Det, Noun, Verb, Det, Adj, Noun, Verb, Det, Noun, Sconj, Verb],
        )
    }

    #[test]
    fn categories_partition_worked_example() {
        let cap = guy_caption();
        assert_eq!(cap.count(Category::ObjectAttribute), 4);
        assert_eq!(cap.count(Category::Action), 3);
        assert_eq!(cap.count(Category::Syntax), 4);
        assert_eq!(cap.tokens.len(), 11);
        assert_eq!(cap.text(), "a guy wearing a red shirt drives a car while talking");
    }

    #[test]
    fn indices_are_contiguous() {
        let cap = guy_caption();
        for (i, t) in cap.tokens.iter().enumerate() {
            assert_eq!(t.index, i);
        }
    }

    #[test]
    fn lower_preserves_surface() {
        let t = Token::new("Guy", Noun, 0);
        assert_eq!(t.surface, "Guy");
        assert_eq!(t.lower, "guy");
    }
}
