//! Compositional and syntactic caption perturbations for text-video
//! retrieval, plus the metric harness that scores any dual encoder on the
//! perturbed captions.
//!
//! The pipeline is: load a caption corpus ([`corpus`]), tag it
//! ([`textproc`]), generate perturbed manifests ([`perturb`]), score
//! embeddings ([`retrieval`]) and tabulate drops against the original
//! captions ([`report`]).

pub mod corpus;
pub mod error;
pub mod mock;
pub mod perturb;
pub mod report;
pub mod retrieval;
pub mod rng;
pub mod textproc;

pub use corpus::{CaptionRecord, CorpusManifest, Dataset, Split};
pub use error::{Error, ErrorKind, Result};
pub use mock::{mock_encode, MOCK_DIM};
pub use perturb::{
    apply_suite, build_vocab, Lexicon, ManifestRecord, PerturbContext, PerturbationKind,
    PerturbedCaption, PerturbedCorpus, ReplacementVocab, ORIGINAL_TASK_ID,
};
pub use report::{delta_table, emit, DeltaEntry, ReportFormat, RunComparison};
pub use retrieval::{Direction, EmbeddingMatrix, GroundTruth, MetricsReport, SimilarityMatrix};
pub use rng::SeededRng;
pub use textproc::{Category, TaggedCaption, TaggerModel, Token, Upos};
