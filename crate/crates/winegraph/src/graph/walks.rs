//! Metapath-guided random walks.
//!
//! A metapath is a cyclic sequence of node types; at each step the walk
//! samples uniformly (or weight-proportionally) among neighbors whose
//! type matches the next type in the pattern, truncating early when no
//! conforming neighbor exists. Every node whose type appears in the
//! pattern starts `walks_per_node` walks, entering the cycle at the first
//! occurrence of its type.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{HetGraph, NodeType};
use crate::embed::sgns::stream_seed;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metapath {
    name: String,
    types: Vec<NodeType>,
    cycle: Vec<NodeType>,
}

impl Metapath {
    pub fn new(name: impl Into<String>, types: Vec<NodeType>) -> Result<Metapath> {
        if types.len() < 2 {
            return Err(Error::config("a metapath needs at least 2 node types"));
        }
        // When the pattern closes on its own first type, drop the
        // duplicate endpoint from the cycle.
        let cycle = if types.first() == types.last() {
            types[..types.len() - 1].to_vec()
        } else {
            types.clone()
        };
        Ok(Metapath {
            name: name.into(),
            types,
            cycle,
        })
    }

    /// Parse `ingredient-hub_ingredient-compound` style lines.
    pub fn parse(line: &str) -> Result<Metapath> {
        let types: Vec<NodeType> = line
            .trim()
            .split('-')
            .map(NodeType::parse)
            .collect::<Result<_>>()?;
        Metapath::new(line.trim(), types)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn types(&self) -> &[NodeType] {
        &self.types
    }

    pub fn cycle(&self) -> &[NodeType] {
        &self.cycle
    }

    /// First position of `t` in the cycle, if any.
    pub fn start_offset(&self, t: NodeType) -> Option<usize> {
        self.cycle.iter().position(|&c| c == t)
    }

    /// Whether a node-type sequence is a prefix of the cyclic pattern
    /// unrolled from some occurrence of its first type.
    pub fn conforms(&self, types: &[NodeType]) -> bool {
        let Some(&first) = types.first() else {
            return true;
        };
        let m = self.cycle.len();
        (0..m).filter(|&j| self.cycle[j] == first).any(|j| {
            types
                .iter()
                .enumerate()
                .all(|(i, &t)| self.cycle[(j + i) % m] == t)
        })
    }

    /// Every consecutive (cyclic) type pair must have at least one edge
    /// in the graph.
    pub fn realizable(&self, graph: &HetGraph) -> Result<()> {
        let m = self.cycle.len();
        for i in 0..m {
            let a = self.cycle[i];
            let b = self.cycle[(i + 1) % m];
            if !graph.has_type_pair(a, b) {
                return Err(Error::data(format!(
                    "metapath `{}` is unrealizable: no edge between `{a}` and `{b}`",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

/// Metapath plus its sampling weight: the number of walks started per
/// node scales with the weight.
#[derive(Debug, Clone)]
pub struct MetapathSpec {
    pub path: Metapath,
    pub weight: f64,
}

impl From<Metapath> for MetapathSpec {
    fn from(path: Metapath) -> Self {
        MetapathSpec { path, weight: 1.0 }
    }
}

/// The shipped defaults: the chemical-information path plus two
/// wine-bearing paths.
pub fn default_metapaths() -> Vec<Metapath> {
    [
        "ingredient-hub_ingredient-compound-hub_ingredient-ingredient",
        "wine-ingredient-ingredient-wine",
        "ingredient-wine-ingredient",
    ]
    .iter()
    .map(|line| Metapath::parse(line).unwrap())
    .collect()
}

/// One metapath per line, `#` comments and blank lines ignored.
pub fn read_metapaths(r: impl BufRead) -> Result<Vec<Metapath>> {
    let mut paths = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        paths.push(Metapath::parse(line)?);
    }
    if paths.is_empty() {
        return Err(Error::config("metapath file contains no metapaths"));
    }
    Ok(paths)
}

pub fn read_metapaths_file(path: impl AsRef<Path>) -> Result<Vec<Metapath>> {
    let file = std::fs::File::open(path.as_ref())?;
    read_metapaths(std::io::BufReader::new(file))
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub seed: u64,
    /// Sample neighbors proportionally to edge weight instead of
    /// uniformly.
    pub weighted: bool,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 100,
            walk_length: 50,
            seed: 42,
            weighted: false,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walk_length < 2 {
            return Err(Error::config("walk_length must be >= 2"));
        }
        if self.walks_per_node < 1 {
            return Err(Error::config("walks_per_node must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Walk {
    pub nodes: Vec<u32>,
    /// Index into the metapath list that generated this walk.
    pub metapath: usize,
}

/// Generate walks for every (metapath, start node, repeat) triple. Each
/// walk draws from an independent random stream derived from
/// (seed, metapath, node, repeat), so generation is reproducible and
/// order-independent under parallelism.
pub fn generate_walks(
    graph: &HetGraph,
    metapaths: &[MetapathSpec],
    cfg: &WalkConfig,
) -> Result<Vec<Walk>> {
    cfg.validate()?;
    if graph.is_empty() {
        return Err(Error::data("cannot walk an empty graph"));
    }
    if metapaths.is_empty() {
        return Err(Error::config("no metapaths given"));
    }
    for spec in metapaths {
        spec.path.realizable(graph)?;
    }

    let mut jobs: Vec<(usize, u32, usize)> = Vec::new();
    for (mi, spec) in metapaths.iter().enumerate() {
        let repeats = ((cfg.walks_per_node as f64) * spec.weight).round().max(0.0) as usize;
        for node in 0..graph.node_count() as u32 {
            if spec.path.start_offset(graph.node_type(node)).is_none() {
                continue;
            }
            for r in 0..repeats {
                jobs.push((mi, node, r));
            }
        }
    }

    let walks: Vec<Walk> = jobs
        .par_iter()
        .map(|&(mi, node, r)| {
            let seed = stream_seed(cfg.seed, (mi as u64) << 32 | node as u64, r as u64);
            Walk {
                nodes: walk_once(graph, &metapaths[mi].path, node, cfg, seed),
                metapath: mi,
            }
        })
        .collect();
    Ok(walks)
}

fn walk_once(
    graph: &HetGraph,
    path: &Metapath,
    start: u32,
    cfg: &WalkConfig,
    seed: u64,
) -> Vec<u32> {
    let cycle = path.cycle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(cfg.walk_length);
    nodes.push(start);
    let mut offset = path
        .start_offset(graph.node_type(start))
        .expect("start node type must appear in the metapath");
    while nodes.len() < cfg.walk_length {
        let current = *nodes.last().unwrap();
        let next_type = cycle[(offset + 1) % cycle.len()];
        let neighbors = graph.neighbors_of_type(current, next_type);
        if neighbors.is_empty() {
            break;
        }
        let next = if cfg.weighted {
            weighted_pick(&mut rng, neighbors)
        } else {
            neighbors[rng.random_range(0..neighbors.len())].0
        };
        nodes.push(next);
        offset += 1;
    }
    nodes
}

fn weighted_pick(rng: &mut ChaCha8Rng, neighbors: &[(u32, f64)]) -> u32 {
    let total: f64 = neighbors.iter().map(|(_, w)| w.max(0.0)).sum();
    if total <= 0.0 {
        return neighbors[rng.random_range(0..neighbors.len())].0;
    }
    let mut target = rng.random::<f64>() * total;
    for (node, weight) in neighbors {
        target -= weight.max(0.0);
        if target <= 0.0 {
            return *node;
        }
    }
    neighbors.last().unwrap().0
}

/// One walk per line, space-separated external node ids.
pub fn write_walks(walks: &[Walk], graph: &HetGraph, w: &mut impl Write) -> Result<()> {
    for walk in walks {
        let mut first = true;
        for &node in &walk.nodes {
            if !first {
                write!(w, " ")?;
            }
            write!(w, "{}", graph.node(node).external_id)?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}
