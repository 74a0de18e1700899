//! The WineGraph: food/compound nodes and edges plus wine nodes and
//! food-wine pairing edges, with metapath-guided random walks and
//! heterogeneous node embeddings.

pub mod train;
pub mod walks;

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub use train::train_metapath2vec;
pub use walks::{Metapath, MetapathSpec, Walk, WalkConfig, default_metapaths, generate_walks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeType {
    Ingredient,
    HubIngredient,
    Compound,
    Wine,
}

impl NodeType {
    pub const ALL: [NodeType; 4] = [
        NodeType::Ingredient,
        NodeType::HubIngredient,
        NodeType::Compound,
        NodeType::Wine,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NodeType::Ingredient => "ingredient",
            NodeType::HubIngredient => "hub_ingredient",
            NodeType::Compound => "compound",
            NodeType::Wine => "wine",
        }
    }

    pub fn parse(s: &str) -> Result<NodeType> {
        match s.trim().to_lowercase().as_str() {
            "ingredient" => Ok(NodeType::Ingredient),
            "hub_ingredient" | "hub-ingredient" => Ok(NodeType::HubIngredient),
            "compound" => Ok(NodeType::Compound),
            "wine" => Ok(NodeType::Wine),
            other => Err(Error::data(format!("unknown node type `{other}`"))),
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|t| t == self).unwrap()
    }

    /// Ingredient or hub ingredient — the node kinds a food item may
    /// resolve to and the kinds evaluated against category labels.
    pub fn is_ingredient_kind(&self) -> bool {
        matches!(self, NodeType::Ingredient | NodeType::HubIngredient)
    }
}

impl std::fmt::Display for NodeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeType {
    IngrIngr,
    IngrCompound,
    FoodWine,
}

impl EdgeType {
    pub const ALL: [EdgeType; 3] = [EdgeType::IngrIngr, EdgeType::IngrCompound, EdgeType::FoodWine];

    pub fn name(&self) -> &'static str {
        match self {
            EdgeType::IngrIngr => "ingr-ingr",
            EdgeType::IngrCompound => "ingr-fcomp",
            EdgeType::FoodWine => "food-wine",
        }
    }

    pub fn parse(s: &str) -> Result<EdgeType> {
        match s.trim().to_lowercase().as_str() {
            "ingr-ingr" | "ingr_ingr" => Ok(EdgeType::IngrIngr),
            "ingr-fcomp" | "ingr_fcomp" | "ingr-compound" | "ingr_compound" => {
                Ok(EdgeType::IngrCompound)
            }
            "food-wine" | "food_wine" => Ok(EdgeType::FoodWine),
            other => Err(Error::data(format!("unknown edge type `{other}`"))),
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|t| t == self).unwrap()
    }
}

impl std::fmt::Display for EdgeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Lowercase, alphanumeric runs joined by single underscores. Used to
/// match pairing item ids against graph node names.
pub fn normalize_name(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_sep = false;
    for c in s.to_lowercase().chars() {
        if c.is_alphanumeric() {
            if pending_sep && !out.is_empty() {
                out.push('_');
            }
            pending_sep = false;
            out.push(c);
        } else {
            pending_sep = true;
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Node {
    pub external_id: String,
    pub name: String,
    pub node_type: NodeType,
    pub category: Option<String>,
    /// Passthrough of the node file's `id` column.
    pub ext_ref: String,
}

/// Undirected heterogeneous graph with typed nodes and edges.
#[derive(Debug, Clone, Default)]
pub struct HetGraph {
    nodes: Vec<Node>,
    /// Per node, neighbors bucketed by the neighbor's type.
    typed_adj: Vec<[Vec<(u32, f64)>; 4]>,
    edges: Vec<(u32, u32, f64, EdgeType)>,
    by_external: HashMap<String, u32>,
    by_norm_name: HashMap<String, u32>,
    type_pairs: HashSet<(u8, u8)>,
}

impl HetGraph {
    pub fn new() -> HetGraph {
        HetGraph::default()
    }

    pub fn add_node(
        &mut self,
        external_id: impl Into<String>,
        name: impl Into<String>,
        node_type: NodeType,
        category: Option<String>,
        ext_ref: impl Into<String>,
    ) -> Result<u32> {
        let external_id = external_id.into();
        let name = name.into();
        if self.by_external.contains_key(&external_id) {
            return Err(Error::data(format!("duplicate node id `{external_id}`")));
        }
        let idx = self.nodes.len() as u32;
        self.by_external.insert(external_id.clone(), idx);
        self.by_norm_name.entry(normalize_name(&name)).or_insert(idx);
        self.nodes.push(Node {
            external_id,
            name,
            node_type,
            category,
            ext_ref: ext_ref.into(),
        });
        self.typed_adj.push(Default::default());
        Ok(idx)
    }

    pub fn add_edge(&mut self, a: u32, b: u32, weight: f64, edge_type: EdgeType) -> Result<()> {
        let (ta, tb) = (self.node_type(a), self.node_type(b));
        if edge_type == EdgeType::FoodWine {
            let ok = (ta.is_ingredient_kind() && tb == NodeType::Wine)
                || (tb.is_ingredient_kind() && ta == NodeType::Wine);
            if !ok {
                return Err(Error::data(format!(
                    "food-wine edge must connect an ingredient-kind node to a wine node, got {ta} - {tb}"
                )));
            }
        }
        self.typed_adj[a as usize][tb.index()].push((b, weight));
        self.typed_adj[b as usize][ta.index()].push((a, weight));
        self.edges.push((a, b, weight, edge_type));
        let (x, y) = (ta.index() as u8, tb.index() as u8);
        self.type_pairs.insert((x.min(y), x.max(y)));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, idx: u32) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(u32, u32, f64, EdgeType)] {
        &self.edges
    }

    pub fn node_type(&self, idx: u32) -> NodeType {
        self.nodes[idx as usize].node_type
    }

    pub fn find_external(&self, external_id: &str) -> Option<u32> {
        self.by_external.get(external_id).copied()
    }

    pub fn find_by_name(&self, name: &str) -> Option<u32> {
        self.by_norm_name.get(&normalize_name(name)).copied()
    }

    pub fn neighbors_of_type(&self, idx: u32, t: NodeType) -> &[(u32, f64)] {
        &self.typed_adj[idx as usize][t.index()]
    }

    pub fn degree(&self, idx: u32) -> usize {
        self.typed_adj[idx as usize].iter().map(Vec::len).sum()
    }

    pub fn nodes_of_type(&self, t: NodeType) -> impl Iterator<Item = u32> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.node_type == t)
            .map(|(i, _)| i as u32)
    }

    pub fn count_of_type(&self, t: NodeType) -> usize {
        self.nodes.iter().filter(|n| n.node_type == t).count()
    }

    /// Whether any edge connects the two node types (in either order).
    pub fn has_type_pair(&self, a: NodeType, b: NodeType) -> bool {
        let (x, y) = (a.index() as u8, b.index() as u8);
        self.type_pairs.contains(&(x.min(y), x.max(y)))
    }

    /// |node types| + |edge types| > 2.
    pub fn is_heterogeneous(&self) -> bool {
        let node_types: HashSet<NodeType> = self.nodes.iter().map(|n| n.node_type).collect();
        let edge_types: HashSet<EdgeType> = self.edges.iter().map(|e| e.3).collect();
        node_types.len() + edge_types.len() > 2
    }

    /// Node CSV `node_id,name,id,node_type,is_hub` with an optional
    /// trailing `category` column.
    pub fn read_nodes_csv(path: impl AsRef<Path>) -> Result<HetGraph> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .comment(Some(b'#'))
            .from_path(path)?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::HeaderMismatch {
                    file: path.to_path_buf(),
                    column: name.to_string(),
                })
        };
        let id_col = col("node_id")?;
        let name_col = col("name")?;
        let ref_col = col("id")?;
        let type_col = col("node_type")?;
        let hub_col = col("is_hub")?;
        let category_col = headers.iter().position(|h| h == "category");

        let mut graph = HetGraph::new();
        for record in reader.records() {
            let record = record?;
            let get = |i: usize| record.get(i).unwrap_or("").trim();
            let raw_type = NodeType::parse(get(type_col))?;
            let is_hub = matches!(
                get(hub_col).to_lowercase().as_str(),
                "hub" | "true" | "1" | "yes"
            );
            let node_type = match raw_type {
                NodeType::Ingredient | NodeType::HubIngredient if is_hub => NodeType::HubIngredient,
                other => other,
            };
            let category = category_col
                .map(&get)
                .filter(|v| !v.is_empty())
                .map(str::to_string);
            graph.add_node(get(id_col), get(name_col), node_type, category, get(ref_col))?;
        }
        Ok(graph)
    }

    /// Edge CSV `id_1,id_2,score,edge_type`; empty scores default to 1.
    pub fn read_edges_csv(&mut self, path: impl AsRef<Path>) -> Result<usize> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .comment(Some(b'#'))
            .from_path(path)?;
        let headers = reader.headers()?.clone();
        let col = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::HeaderMismatch {
                    file: path.to_path_buf(),
                    column: name.to_string(),
                })
        };
        let a_col = col("id_1")?;
        let b_col = col("id_2")?;
        let score_col = col("score")?;
        let type_col = col("edge_type")?;
        let mut added = 0;
        for record in reader.records() {
            let record = record?;
            let get = |i: usize| record.get(i).unwrap_or("").trim();
            let a = self.find_external(get(a_col)).ok_or_else(|| {
                Error::data(format!("edge references unknown node `{}`", get(a_col)))
            })?;
            let b = self.find_external(get(b_col)).ok_or_else(|| {
                Error::data(format!("edge references unknown node `{}`", get(b_col)))
            })?;
            let score = get(score_col);
            let weight: f64 = if score.is_empty() {
                1.0
            } else {
                score
                    .parse()
                    .map_err(|_| Error::data(format!("bad edge score `{score}`")))?
            };
            self.add_edge(a, b, weight, EdgeType::parse(get(type_col))?)?;
            added += 1;
        }
        Ok(added)
    }

    pub fn write_nodes_csv(&self, w: impl Write) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        let has_category = self.nodes.iter().any(|n| n.category.is_some());
        let mut header = vec!["node_id", "name", "id", "node_type", "is_hub"];
        if has_category {
            header.push("category");
        }
        writer.write_record(&header)?;
        for node in &self.nodes {
            let (type_str, hub_str) = match node.node_type {
                NodeType::HubIngredient => ("ingredient", "hub"),
                NodeType::Ingredient => ("ingredient", "no_hub"),
                NodeType::Compound => ("compound", "no_hub"),
                NodeType::Wine => ("wine", "no_hub"),
            };
            let mut record = vec![
                node.external_id.clone(),
                node.name.clone(),
                node.ext_ref.clone(),
                type_str.to_string(),
                hub_str.to_string(),
            ];
            if has_category {
                record.push(node.category.clone().unwrap_or_default());
            }
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_edges_csv(&self, w: impl Write) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["id_1", "id_2", "score", "edge_type"])?;
        for (a, b, weight, edge_type) in &self.edges {
            writer.write_record([
                self.nodes[*a as usize].external_id.as_str(),
                self.nodes[*b as usize].external_id.as_str(),
                &weight.to_string(),
                edge_type.name(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// One food's ranked wine list, as produced by the rule engine.
#[derive(Debug, Clone)]
pub struct FoodPairings {
    pub food_id: String,
    /// (wine id, aroma similarity), best first.
    pub wines: Vec<(String, f64)>,
}

#[derive(Debug, Default, Clone)]
pub struct AugmentStats {
    pub foods_total: usize,
    pub foods_resolved: usize,
    pub foods_skipped: usize,
    pub wine_nodes_added: usize,
    pub pairing_edges_added: usize,
}

/// Augment a parsed food graph with wine nodes and top-k pairing edges.
///
/// Food ids resolve to ingredient-kind nodes by normalized-name match;
/// unresolvable foods are skipped and tallied. The aroma similarity is
/// stored as the edge weight (unused by uniform walks).
pub fn build_winegraph(
    mut graph: HetGraph,
    pairings: &[FoodPairings],
    k: usize,
) -> Result<(HetGraph, AugmentStats)> {
    if k < 1 {
        return Err(Error::config("k must be >= 1"));
    }
    let mut stats = AugmentStats {
        foods_total: pairings.len(),
        ..Default::default()
    };
    if pairings.is_empty() {
        return Ok((graph, stats));
    }

    let mut next_id: i64 = graph
        .nodes
        .iter()
        .filter_map(|n| n.external_id.parse::<i64>().ok())
        .max()
        .map(|m| m + 1)
        .unwrap_or(graph.node_count() as i64);
    let mut wine_nodes: HashMap<String, u32> = HashMap::new();
    let mut seen_edges: HashSet<(u32, u32)> = HashSet::new();

    for pairing in pairings {
        let food_idx = graph
            .find_by_name(&pairing.food_id)
            .filter(|&idx| graph.node_type(idx).is_ingredient_kind());
        let Some(food_idx) = food_idx else {
            stats.foods_skipped += 1;
            continue;
        };
        stats.foods_resolved += 1;
        for (wine_id, similarity) in pairing.wines.iter().take(k) {
            let wine_idx = match wine_nodes.get(wine_id) {
                Some(&idx) => idx,
                None => {
                    let idx = graph.add_node(
                        next_id.to_string(),
                        wine_id.clone(),
                        NodeType::Wine,
                        None,
                        "",
                    )?;
                    next_id += 1;
                    wine_nodes.insert(wine_id.clone(), idx);
                    stats.wine_nodes_added += 1;
                    idx
                }
            };
            if seen_edges.insert((food_idx, wine_idx)) {
                graph.add_edge(food_idx, wine_idx, *similarity, EdgeType::FoodWine)?;
                stats.pairing_edges_added += 1;
            }
        }
    }

    if stats.foods_resolved == 0 {
        return Err(Error::data(
            "zero resolvable pairings: no food id matches an ingredient-kind node name",
        ));
    }
    if !graph.is_heterogeneous() {
        return Err(Error::data(
            "augmented graph is not heterogeneous: |node types| + |edge types| <= 2",
        ));
    }
    Ok((graph, stats))
}

/// Pairing CSV rows `food_id,wine_id,status,fired_rules,aroma_similarity`
/// grouped into per-food ranked lists. Rows keep file order within each
/// food (already ranked by the pair stage).
pub fn read_pairings_csv(r: impl BufRead) -> Result<Vec<FoodPairings>> {
    let mut reader = csv::Reader::from_reader(r);
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::data(format!("pairings file is missing column `{name}`")))
    };
    let food_col = col("food_id")?;
    let wine_col = col("wine_id")?;
    let sim_col = col("aroma_similarity")?;
    let mut order: Vec<String> = Vec::new();
    let mut by_food: HashMap<String, Vec<(String, f64)>> = HashMap::new();
    for record in reader.records() {
        let record = record?;
        let food = record.get(food_col).unwrap_or("").to_string();
        let wine = record.get(wine_col).unwrap_or("").to_string();
        let sim: f64 = record
            .get(sim_col)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::data("bad aroma_similarity in pairings file"))?;
        if !by_food.contains_key(&food) {
            order.push(food.clone());
        }
        by_food.entry(food).or_default().push((wine, sim));
    }
    Ok(order
        .into_iter()
        .map(|food_id| {
            let wines = by_food.remove(&food_id).unwrap();
            FoodPairings { food_id, wines }
        })
        .collect())
}
