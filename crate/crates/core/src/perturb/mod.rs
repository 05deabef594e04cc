//! Deterministic, seed-stable caption perturbations.

mod kind;
mod ops;
mod suite;
mod vocab;

pub use kind::{PerturbationKind, ORIGINAL_TASK_ID};
pub use ops::{
    action_negation, action_removal, action_replacement, object_attribute_removal, object_partial,
    object_replacement, object_shift, perturb, reverse, shuffle, syntax_removal, Granularity,
    PartialMode, PerturbContext, PerturbedCaption, Provenance, NEGATION,
};
pub use suite::{apply_suite, read_manifest, ManifestRecord, PerturbedCorpus};
pub use vocab::{build_vocab, LexEntry, Lexicon, ReplacementVocab};

pub use crate::rng::SeededRng;
