//! Embedding evaluation: clustering quality against category labels,
//! nearest-neighbor pairing queries, and 2-d projection export.

pub mod kmeans;
pub mod nmi;

use std::collections::BTreeMap;

use crate::embed::{EmbeddingMatrix, cosine};
use crate::error::{Error, Result};
use crate::graph::{HetGraph, NodeType};

pub use kmeans::{KmeansResult, kmeans as kmeans_run, kmeans_best_of};
pub use nmi::{NmiVariant, nmi, nmi_labeled};

/// Item -> cluster index mapping from one clustering run.
#[derive(Debug, Clone)]
pub struct ClusterAssignment {
    pub labels: BTreeMap<String, usize>,
    pub k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: BTreeMap<String, usize>, k: usize) -> Result<ClusterAssignment> {
        if k < 2 {
            return Err(Error::config("a cluster assignment needs k >= 2"));
        }
        Ok(ClusterAssignment { labels, k })
    }
}

/// Rank all wine nodes by cosine similarity to a food node's embedding,
/// best first, with ascending node-id tie-break.
pub fn query_pairings(
    food_node: &str,
    node_emb: &EmbeddingMatrix,
    graph: &HetGraph,
    k: usize,
) -> Result<Vec<(u32, f64)>> {
    if k < 1 {
        return Err(Error::config("k must be >= 1"));
    }
    let food_idx = graph
        .find_external(food_node)
        .ok_or_else(|| Error::data(format!("unknown node `{food_node}`")))?;
    let food_vec = node_emb
        .get(&graph.node(food_idx).external_id)
        .ok_or_else(|| Error::data(format!("node `{food_node}` has no embedding")))?;

    let mut ranked: Vec<(u32, f64)> = Vec::new();
    for wine_idx in graph.nodes_of_type(NodeType::Wine) {
        let Some(wine_vec) = node_emb.get(&graph.node(wine_idx).external_id) else {
            continue;
        };
        if let Ok(sim) = cosine(food_vec, wine_vec) {
            ranked.push((wine_idx, sim));
        }
    }
    if ranked.is_empty() {
        return Err(Error::data("no wine node has an embedding"));
    }
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                graph
                    .node(a.0)
                    .external_id
                    .cmp(&graph.node(b.0).external_id)
            })
    });
    ranked.truncate(k);
    Ok(ranked)
}

/// Unit vector orthogonal to `v1`, picked along the axis where `v1` is
/// smallest.
fn orthogonal_complement(v1: &[f64]) -> Vec<f64> {
    let axis = v1
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut ortho = vec![0.0; v1.len()];
    ortho[axis] = 1.0;
    project_out(&mut ortho, v1);
    normalize(&mut ortho);
    ortho
}

fn project_out(v: &mut [f64], basis: &[f64]) {
    let overlap: f64 = basis.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    for (vi, bi) in v.iter_mut().zip(basis) {
        *vi -= overlap * bi;
    }
}

/// Leading eigenvector of the covariance operator of `rows`, restricted
/// to the complement of `deflate` when given (projection deflation keeps
/// the iterate orthogonal even when the remaining spectrum is zero).
fn power_iteration(rows: &[Vec<f64>], deflate: Option<&[f64]>, seed_offset: u64) -> (Vec<f64>, f64) {
    let dim = rows[0].len();
    let n = rows.len() as f64;
    // Deterministic pseudo-random start direction.
    let mut v: Vec<f64> = (0..dim)
        .map(|i| {
            let h = crate::embed::sgns::splitmix64(0x5EED ^ seed_offset ^ (i as u64));
            (h as f64 / u64::MAX as f64) - 0.5
        })
        .collect();
    if let Some(v1) = deflate {
        project_out(&mut v, v1);
    }
    normalize(&mut v);
    let mut eigenvalue = 0.0;
    for _ in 0..500 {
        // w = Cov * v = X^T (X v) / n.
        let mut w = vec![0.0; dim];
        for row in rows {
            let proj: f64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi += proj * ri;
            }
        }
        w.iter_mut().for_each(|x| *x /= n);
        if let Some(v1) = deflate {
            project_out(&mut w, v1);
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-200 {
            // No variance left in this subspace.
            return match deflate {
                Some(v1) => (orthogonal_complement(v1), 0.0),
                None => (v, 0.0),
            };
        }
        let mut new_v = w;
        new_v.iter_mut().for_each(|x| *x /= norm);
        if let Some(v1) = deflate {
            // Re-project at unit scale: normalization re-amplifies the
            // subtraction residue along v1 when the deflated spectrum is
            // near zero.
            project_out(&mut new_v, v1);
            normalize(&mut new_v);
        }
        let delta: f64 = new_v
            .iter()
            .zip(&v)
            .map(|(a, b)| (a.abs() - b.abs()).abs())
            .sum();
        v = new_v;
        eigenvalue = norm;
        if delta < 1e-13 {
            break;
        }
    }
    (v, eigenvalue)
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Project every row onto the top two principal components of the
/// mean-centered matrix. Coordinates are determined up to sign.
pub fn export_projection(node_emb: &EmbeddingMatrix) -> Result<Vec<(String, [f64; 2])>> {
    let n = node_emb.len();
    if n < 2 {
        return Err(Error::data("projection needs at least 2 vectors"));
    }
    let dim = node_emb.dim();
    let mut mean = vec![0.0; dim];
    for r in 0..n {
        for (m, v) in mean.iter_mut().zip(node_emb.row(r)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            node_emb
                .row(r)
                .iter()
                .zip(&mean)
                .map(|(v, m)| v - m)
                .collect()
        })
        .collect();
    if centered
        .iter()
        .all(|row| row.iter().all(|&v| v.abs() < 1e-300))
    {
        return Err(Error::data("projection is degenerate: all vectors identical"));
    }

    let (v1, _lambda1) = power_iteration(&centered, None, 1);
    let (v2, _) = power_iteration(&centered, Some(&v1), 2);

    Ok((0..n)
        .map(|r| {
            let row = &centered[r];
            let x: f64 = row.iter().zip(&v1).map(|(a, b)| a * b).sum();
            let y: f64 = row.iter().zip(&v2).map(|(a, b)| a * b).sum();
            (node_emb.key(r).to_string(), [x, y])
        })
        .collect())
}
