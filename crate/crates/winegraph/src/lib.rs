//! Food-wine pairing from review text.
//!
//! The crate derives taste profiles for foods and wines from review
//! corpora, pairs them with sommelier-defined constraint and decision
//! rules, embeds the pairings into a heterogeneous food/compound/wine
//! graph with metapath-guided random walks, and evaluates the node
//! embeddings by clustering quality and nearest-neighbor retrieval.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//!
//! - `phrase_mining` — tokenize reviews and mine 1-3 token phrases
//! - `train_embeddings` — skip-gram negative sampling over a toy corpus
//! - `taste_profiles` — aroma-wheel mapping and taste scalars
//! - `rule_pairing` — elimination and pairing rules over taste profiles
//! - `winegraph_walks` — heterogeneous graph, metapath walks, node vectors
//! - `evaluate_clusters` — k-means, NMI, and 2-d projection export
//! - `full_pipeline` — every stage end to end on synthetic data
//!
//! The same stages are scriptable through the `winegraph` binary; see the
//! README for the config format.

pub mod corpus;
pub mod demo;
pub mod embed;
pub mod eval;
mod error;
pub mod graph;
pub mod pipeline;
pub mod profile;
pub mod rules;

pub use error::{Error, Result};
