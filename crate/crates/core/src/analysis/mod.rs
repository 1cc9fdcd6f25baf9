//! Space model, baseline encoders and measured compression and locality.

mod baselines;
mod compare;
mod metrics;
mod space;

pub use baselines::{hash_based_encode, order_based_encode, syntactic_encode, HashEncoding};
pub use compare::{compare_encoders, default_join_pair, s_kog_by_id, write_compare_csv, CompareRow};
pub use metrics::{encode_all, measure_compression, measure_join_locality};
pub use space::{
    ceil_log2, s_fix, s_kog, s_kog_zipf, space_report, zipf_counts, zipf_frequencies, BlockModel,
    Count, FrequencyTable, SpaceReport, ZipfLaw, ZipfParams,
};
