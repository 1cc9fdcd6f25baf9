//! Dictionary encoding for RDF knowledge graphs.
//!
//! Frequent terms, found with a Count-Min sketch and Misra-Gries summaries,
//! get the smallest IDs. The remaining terms are grouped by their class in
//! the ontology taxonomy, so that instances of related classes receive
//! nearby IDs. The [`analysis`] module measures both effects against
//! baseline encoders.

pub mod analysis;
pub mod codec;
pub mod dictionary;
pub mod error;
pub mod fbe;
pub mod ingest;
pub mod lbe;
pub mod pipeline;
pub mod sketch;
pub mod synth;
pub mod taxonomy;

mod binio;
mod parallel;

pub use dictionary::Dictionary;
pub use error::{Error, Result};
pub use ingest::{Term, TermKind, Triple};
pub use pipeline::{decode, encode, encode_with_sketch, EncodeConfig, EncodeStats, Encoded};

/// Exact integer occurrence counts.
pub type CountTable = analysis::FrequencyTable<u64>;
/// Real-valued frequencies, e.g. an ideal Zipf law.
pub type WeightTable = analysis::FrequencyTable<f64>;
pub type Zipf = analysis::ZipfParams<f64>;
pub type Zipf32 = analysis::ZipfParams<f32>;
