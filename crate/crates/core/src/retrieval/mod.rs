//! Embedding files, similarity scoring and ranking metrics.

mod cevb;
mod metrics;
mod similarity;

pub use cevb::{load_embeddings, save_embeddings, EmbeddingMatrix, DTYPE_F32, MAGIC, VERSION};
pub use metrics::{
    evaluate_run, evaluate_similarity, mean_rank, median_rank, rank_in_row, rank_of_truth, ranks_for,
    recall_at_k, Direction, GroundTruth, MetricsReport,
};
pub use similarity::{cosine_similarity, SimilarityMatrix};
