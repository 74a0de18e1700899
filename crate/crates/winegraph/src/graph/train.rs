//! Heterogeneous skip-gram over metapath walks (metapath2vec).
//!
//! Walks feed the same trainer as the text model; the only difference is
//! type-aware negative sampling: negatives for a context node are drawn
//! from nodes of the same type only.

use super::{HetGraph, Walk};
use crate::embed::sgns::{self, TypedUnigramTables};
use crate::embed::{EmbeddingMatrix, TrainConfig, TrainReport};
use crate::error::{Error, Result};

/// Train node embeddings from walks. Rows of the result follow graph
/// node order; keys are external node ids.
pub fn train_metapath2vec(
    walks: &[Walk],
    graph: &HetGraph,
    cfg: &TrainConfig,
) -> Result<(EmbeddingMatrix, TrainReport)> {
    if walks.is_empty() {
        return Err(Error::data("empty walk stream"));
    }
    let sentences: Vec<Vec<u32>> = walks.iter().map(|w| w.nodes.clone()).collect();
    let mut counts = sgns::token_counts(&sentences, graph.node_count());
    for c in counts.iter_mut() {
        if *c < cfg.min_count {
            *c = 0;
        }
    }
    let type_of: Vec<u8> = graph
        .nodes()
        .iter()
        .map(|n| n.node_type.index() as u8)
        .collect();
    let per_type_size = (cfg.negative_table_size / 4).max(4096);
    let sampler = TypedUnigramTables::build(&counts, type_of, per_type_size);
    let (input, context, report) = sgns::train(&sentences, &counts, cfg, &sampler)?;
    let keys: Vec<String> = graph
        .nodes()
        .iter()
        .map(|n| n.external_id.clone())
        .collect();
    let emb = EmbeddingMatrix::new(keys, cfg.dim, input).with_context(context);
    Ok((emb, report))
}
