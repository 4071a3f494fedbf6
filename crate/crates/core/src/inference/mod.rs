//! Estimators that turn cascade timestamps into an edge set.

mod algorithms;
mod degree;
mod scores;
mod transfer;
mod weights;

pub use algorithms::{
    edge_count_for, general_iti, gi, gi_detailed, iti, iti_detailed, DegreeChoice, InferenceConfig,
    InferenceOutput, SelectionScope,
};
pub use degree::estimate_avg_degree;
pub use scores::{fuse_scores, likelihood_scores, load_score_file, parse_score_file, ScoreTable};
pub use transfer::transfer;
pub use weights::{
    generalized_weights, graph_weights, tree_weights, weights_for, Combiner, Deviation,
    WeightMatrix, WeightRule,
};
