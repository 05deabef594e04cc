//! The ten caption perturbations.
//!
//! "Nouns" are NOUN/PROPN tokens; the object-attribute removal task works on
//! the wider object & attribute category (adjectives and adverbs included).

use serde::{Deserialize, Serialize};

use super::kind::PerturbationKind;
use super::vocab::{Lexicon, ReplacementVocab};
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::textproc::{join_surfaces, Category, TaggedCaption, Token};

pub const NEGATION: &str = "not";

/// Where an output token came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Source(usize),
    Inserted,
    Replaced(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedCaption {
    pub caption_id: String,
    pub video_id: String,
    pub kind: PerturbationKind,
    pub tokens: Vec<String>,
    pub provenance: Vec<Provenance>,
}

impl PerturbedCaption {
    pub fn text(&self) -> String {
        join_surfaces(self.tokens.iter().map(String::as_str))
    }
}

/// How `object_partial` picks the surviving nouns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartialMode {
    #[default]
    Random,
    KeepFirst,
    KeepLast,
}

impl std::str::FromStr for PartialMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(PartialMode::Random),
            "keep-first" => Ok(PartialMode::KeepFirst),
            "keep-last" => Ok(PartialMode::KeepLast),
            other => Err(Error::Config(format!("unknown partial mode {other:?}"))),
        }
    }
}

fn emit(cap: &TaggedCaption, kind: PerturbationKind, out: Vec<(String, Provenance)>) -> PerturbedCaption {
    let (tokens, provenance) = out.into_iter().unzip();
    PerturbedCaption {
        caption_id: cap.caption_id.clone(),
        video_id: cap.video_id.clone(),
        kind,
        tokens,
        provenance,
    }
}

fn keep_where(cap: &TaggedCaption, kind: PerturbationKind, keep: impl Fn(&Token) -> bool) -> PerturbedCaption {
    let out = cap
        .tokens
        .iter()
        .filter(|t| keep(t))
        .map(|t| (t.surface.clone(), Provenance::Source(t.index)))
        .collect();
    emit(cap, kind, out)
}

fn noun_positions(cap: &TaggedCaption) -> Vec<usize> {
    cap.tokens.iter().filter(|t| t.is_noun()).map(|t| t.index).collect()
}

pub fn object_attribute_removal(cap: &TaggedCaption) -> PerturbedCaption {
    keep_where(cap, PerturbationKind::ObjAttrRemoval, |t| {
        t.category != Category::ObjectAttribute
    })
}

/// Cyclic left shift of nouns: the noun at the i-th noun slot moves to
/// slot i-1, the first noun wraps to the last slot.
pub fn object_shift(cap: &TaggedCaption) -> PerturbedCaption {
    let slots = noun_positions(cap);
    let mut source: Vec<usize> = (0..cap.tokens.len()).collect();
    if slots.len() > 1 {
        for (i, &slot) in slots.iter().enumerate() {
            source[slot] = slots[(i + 1) % slots.len()];
        }
    }
    let out = source
        .into_iter()
        .map(|s| (cap.tokens[s].surface.clone(), Provenance::Source(s)))
        .collect();
    emit(cap, PerturbationKind::ObjShift, out)
}

fn replace_where<'v>(
    cap: &TaggedCaption,
    kind: PerturbationKind,
    inventory: impl Fn() -> Vec<&'v str>,
    lexicon: &Lexicon,
    rng: &mut SeededRng,
    target: impl Fn(&Token) -> bool,
) -> Result<PerturbedCaption> {
    let mut pool: Option<Vec<&str>> = None;
    let mut out = Vec::with_capacity(cap.tokens.len());
    for t in &cap.tokens {
        if !target(t) {
            out.push((t.surface.clone(), Provenance::Source(t.index)));
            continue;
        }
        let pool = pool.get_or_insert_with(&inventory);
        let candidates: Vec<&str> = pool
            .iter()
            .copied()
            .filter(|c| !lexicon.excludes(&t.lower, c))
            .collect();
        if candidates.is_empty() {
            return Err(Error::EmptyCandidatePool {
                token: t.surface.clone(),
            });
        }
        let pick = candidates[rng.index(candidates.len())];
        out.push((pick.to_string(), Provenance::Replaced(t.index)));
    }
    Ok(emit(cap, kind, out))
}

/// Replaces every noun with a uniform draw from the noun inventory, skipping
/// the original word and its lexicon synonyms/antonyms.
pub fn object_replacement(
    cap: &TaggedCaption,
    vocab: &ReplacementVocab,
    lexicon: &Lexicon,
    rng: &mut SeededRng,
) -> Result<PerturbedCaption> {
    replace_where(
        cap,
        PerturbationKind::ObjReplacement,
        || vocab.nouns.keys().map(String::as_str).collect(),
        lexicon,
        rng,
        Token::is_noun,
    )
}

/// Keeps `floor(k/2)` of the `k` nouns and drops the rest.
pub fn object_partial(cap: &TaggedCaption, mode: PartialMode, rng: &mut SeededRng) -> PerturbedCaption {
    let slots = noun_positions(cap);
    let k = slots.len();
    let keep = k / 2;
    let kept: Vec<usize> = match mode {
        PartialMode::KeepFirst => slots[..keep].to_vec(),
        PartialMode::KeepLast => slots[k - keep..].to_vec(),
        PartialMode::Random => rng
            .sample_indices(k, keep)
            .into_iter()
            .map(|i| slots[i])
            .collect(),
    };
    keep_where(cap, PerturbationKind::ObjPartial, |t| {
        !t.is_noun() || kept.contains(&t.index)
    })
}

pub fn action_removal(cap: &TaggedCaption) -> PerturbedCaption {
    keep_where(cap, PerturbationKind::ActRemoval, |t| t.category != Category::Action)
}

pub fn action_negation(cap: &TaggedCaption) -> PerturbedCaption {
    let mut out = Vec::with_capacity(cap.tokens.len() * 2);
    for t in &cap.tokens {
        if t.category == Category::Action {
            out.push((NEGATION.to_string(), Provenance::Inserted));
        }
        out.push((t.surface.clone(), Provenance::Source(t.index)));
    }
    emit(cap, PerturbationKind::ActNegation, out)
}

pub fn action_replacement(
    cap: &TaggedCaption,
    vocab: &ReplacementVocab,
    lexicon: &Lexicon,
    rng: &mut SeededRng,
) -> Result<PerturbedCaption> {
    replace_where(
        cap,
        PerturbationKind::ActReplacement,
        || vocab.verbs.keys().map(String::as_str).collect(),
        lexicon,
        rng,
        |t| t.category == Category::Action,
    )
}

pub fn syntax_removal(cap: &TaggedCaption) -> PerturbedCaption {
    keep_where(cap, PerturbationKind::SynRemoval, |t| t.category != Category::Syntax)
}

pub fn shuffle(cap: &TaggedCaption, rng: &mut SeededRng) -> PerturbedCaption {
    let mut order: Vec<usize> = (0..cap.tokens.len()).collect();
    rng.shuffle(&mut order);
    let out = order
        .into_iter()
        .map(|i| (cap.tokens[i].surface.clone(), Provenance::Source(i)))
        .collect();
    emit(cap, PerturbationKind::Shuffle, out)
}

pub fn reverse(cap: &TaggedCaption) -> PerturbedCaption {
    let out = cap
        .tokens
        .iter()
        .rev()
        .map(|t| (t.surface.clone(), Provenance::Source(t.index)))
        .collect();
    emit(cap, PerturbationKind::Reverse, out)
}

/// Whether a perturbation sees the whole caption or each sentence separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Granularity {
    #[default]
    Whole,
    /// Split at `.`, `!` and `?` tokens, perturb each sentence, and rejoin.
    PerSentence,
}

/// Inputs shared by every perturbation of a run.
#[derive(Debug, Clone, Copy)]
pub struct PerturbContext<'a> {
    pub vocab: Option<&'a ReplacementVocab>,
    pub lexicon: &'a Lexicon,
    pub partial_mode: PartialMode,
    pub granularity: Granularity,
}

fn apply_whole(
    kind: PerturbationKind,
    cap: &TaggedCaption,
    ctx: &PerturbContext<'_>,
    rng: &mut SeededRng,
) -> Result<PerturbedCaption> {
    use PerturbationKind::*;
    let vocab = || ctx.vocab.ok_or(Error::MissingVocab);
    Ok(match kind {
        ObjAttrRemoval => object_attribute_removal(cap),
        ObjShift => object_shift(cap),
        ObjReplacement => object_replacement(cap, vocab()?, ctx.lexicon, rng)?,
        ObjPartial => object_partial(cap, ctx.partial_mode, rng),
        ActRemoval => action_removal(cap),
        ActNegation => action_negation(cap),
        ActReplacement => action_replacement(cap, vocab()?, ctx.lexicon, rng)?,
        SynRemoval => syntax_removal(cap),
        Shuffle => shuffle(cap, rng),
        Reverse => reverse(cap),
    })
}

fn sentences(cap: &TaggedCaption) -> Vec<TaggedCaption> {
    let mut out = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut flush = |current: &mut Vec<Token>| {
        if !current.is_empty() {
            out.push(TaggedCaption {
                caption_id: cap.caption_id.clone(),
                video_id: cap.video_id.clone(),
                tokens: std::mem::take(current),
            });
        }
    };
    for t in &cap.tokens {
        let end = matches!(t.surface.as_str(), "." | "!" | "?");
        let mut local = t.clone();
        local.index = current.len();
        current.push(local);
        if end {
            flush(&mut current);
        }
    }
    flush(&mut current);
    out
}

/// Applies one perturbation, honouring the context's granularity. Sentence
/// pieces share `rng` in left-to-right order.
pub fn perturb(
    kind: PerturbationKind,
    cap: &TaggedCaption,
    ctx: &PerturbContext<'_>,
    rng: &mut SeededRng,
) -> Result<PerturbedCaption> {
    if ctx.granularity == Granularity::Whole {
        return apply_whole(kind, cap, ctx, rng);
    }
    let mut merged = emit(cap, kind, Vec::new());
    let mut offset = 0;
    for piece in sentences(cap) {
        let part = apply_whole(kind, &piece, ctx, rng)?;
        merged.tokens.extend(part.tokens);
        merged.provenance.extend(part.provenance.into_iter().map(|p| match p {
            Provenance::Source(i) => Provenance::Source(i + offset),
            Provenance::Replaced(i) => Provenance::Replaced(i + offset),
            Provenance::Inserted => Provenance::Inserted,
        }));
        offset += piece.tokens.len();
    }
    Ok(merged)
}
