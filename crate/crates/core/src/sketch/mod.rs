//! Streaming frequency estimation.

mod count_min;
mod hash;
mod hybrid;
mod methods;
mod misra_gries;
mod persist;

pub use count_min::CountMinSketch;
pub use hash::HashFamily;
pub use hybrid::{
    cmmg_threshold, cmmg_topk, count_hybrid, sort_estimates, FrequencyEstimate, HybridSketchState,
    MergedSketch, SketchConfig, DEFAULT_HASHES, DEFAULT_K, DEFAULT_SEED, DEFAULT_WIDTH,
};
pub use methods::{exact_counts, frequent_terms, sample_frequencies, FrequencyMethod};
pub use misra_gries::MisraGries;
pub use persist::{read_sketch, write_sketch};

