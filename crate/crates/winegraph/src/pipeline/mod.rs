//! Stage orchestration: the review corpora flow through prepare ->
//! train-text -> profile -> pair -> build-graph -> train-graph ->
//! evaluate, with resumable artifacts on disk and a query entry point.

pub mod artifact;
pub mod config;

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use crate::corpus::{self, PhraseDoc, ReviewSchema, Source, Vocabulary, WineMeta};
use crate::embed::{self, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::eval;
use crate::graph::{self, HetGraph, MetapathSpec};
use crate::profile::{self, AnchorSet, AromaWheel, TasteProfile};
use crate::rules::{self, RuleSet};

pub use config::PipelineConfig;

/// Pipeline stages, in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Prepare,
    TrainText,
    Profile,
    Pair,
    BuildGraph,
    TrainGraph,
    Evaluate,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Prepare => "prepare",
            Stage::TrainText => "train-text",
            Stage::Profile => "profile",
            Stage::Pair => "pair",
            Stage::BuildGraph => "build-graph",
            Stage::TrainGraph => "train-graph",
            Stage::Evaluate => "evaluate",
        }
    }
}

/// Machine-readable stage outcome: `stage=<name> status=ok <metrics>`.
#[derive(Debug, Clone)]
pub struct StageSummary {
    pub stage: &'static str,
    pub metrics: Vec<(&'static str, String)>,
}

impl StageSummary {
    fn new(stage: &'static str) -> StageSummary {
        StageSummary {
            stage,
            metrics: Vec::new(),
        }
    }

    fn push(&mut self, key: &'static str, value: impl ToString) {
        self.metrics.push((key, value.to_string()));
    }
}

impl std::fmt::Display for StageSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage={} status=ok", self.stage)?;
        for (key, value) in &self.metrics {
            write!(f, " {key}={value}")?;
        }
        Ok(())
    }
}

pub fn run_stage(stage: Stage, cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    match stage {
        Stage::Prepare => prepare(cfg),
        Stage::TrainText => train_text(cfg, force),
        Stage::Profile => profile_stage(cfg, force),
        Stage::Pair => pair_stage(cfg, force),
        Stage::BuildGraph => build_graph(cfg, force),
        Stage::TrainGraph => train_graph(cfg, force),
        Stage::Evaluate => evaluate(cfg, force),
    }
}

fn out(cfg: &PipelineConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

fn required_input(path: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
    let path = path
        .as_ref()
        .ok_or_else(|| Error::config(format!("config key `{key}` is required for this stage")))?;
    if !path.exists() {
        return Err(Error::config(format!(
            "`{key}` points to a missing file: {}",
            path.display()
        )));
    }
    Ok(path.clone())
}

fn prepare(cfg: &PipelineConfig) -> Result<StageSummary> {
    let food_path = required_input(&cfg.food_reviews, "data.food_reviews")?;
    let wine_path = required_input(&cfg.wine_reviews, "data.wine_reviews")?;
    let hash = cfg.hash();

    let food = corpus::ingest(&food_path, ReviewSchema::FoodReviews)?;
    let wine = corpus::ingest(&wine_path, ReviewSchema::WineReviews)?;

    let mut reviews = food.reviews;
    let food_count = reviews.len();
    reviews.extend(wine.reviews);
    let texts: Vec<&str> = reviews.iter().map(|r| r.text.as_str()).collect();
    let token_lists = corpus::tokenize_all(&texts);
    let total_tokens: usize = token_lists.iter().map(Vec::len).sum();

    let model = corpus::extract_phrases(
        &token_lists,
        cfg.corpus_min_count,
        cfg.corpus_score_threshold,
    )?;
    if model.vocab().is_empty() {
        return Err(Error::data(
            "empty vocabulary: lower corpus.min_count or corpus.score_threshold",
        ));
    }

    artifact::write_artifact(&out(cfg, artifact::VOCAB), &hash, |w| {
        model.vocab().write_tsv(w)
    })?;

    // One sentence per review, post-merge, in-vocabulary surfaces only.
    artifact::write_artifact(&out(cfg, artifact::SENTENCES), &hash, |w| {
        for tokens in &token_lists {
            let ids = model.to_ids(tokens);
            if ids.is_empty() {
                continue;
            }
            let surfaces: Vec<&str> = ids.iter().map(|&id| model.vocab().surface(id)).collect();
            writeln!(w, "{}", surfaces.join(" "))?;
        }
        Ok(())
    })?;

    let docs = corpus::build_phrase_docs(&reviews, &token_lists, &model);
    artifact::write_artifact(&out(cfg, artifact::DOCS), &hash, |w| {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["item_id", "source", "surface", "count"])?;
        for doc in &docs {
            for (surface, count) in &doc.counts {
                writer.write_record([
                    doc.item_id.as_str(),
                    doc.source.as_str(),
                    surface,
                    &count.to_string(),
                ])?;
            }
        }
        writer.flush()?;
        Ok(())
    })?;

    artifact::write_artifact(&out(cfg, artifact::WINE_META), &hash, |w| {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["item_id", "variety", "province", "country"])?;
        let mut items: Vec<(&String, &WineMeta)> = wine.wine_meta.iter().collect();
        items.sort_by_key(|(id, _)| id.as_str());
        for (item_id, meta) in items {
            writer.write_record([
                item_id.as_str(),
                meta.variety.as_deref().unwrap_or(""),
                meta.province.as_deref().unwrap_or(""),
                meta.country.as_deref().unwrap_or(""),
            ])?;
        }
        writer.flush()?;
        Ok(())
    })?;

    let mut summary = StageSummary::new("prepare");
    summary.push("food_reviews", food_count);
    summary.push("wine_reviews", reviews.len() - food_count);
    summary.push("skipped_food", food.skipped);
    summary.push("skipped_wine", wine.skipped);
    summary.push("tokens", total_tokens);
    summary.push("vocab", model.vocab().len());
    summary.push("docs", docs.len());
    Ok(summary)
}

fn read_vocab(cfg: &PipelineConfig, force: bool) -> Result<Vocabulary> {
    let reader = artifact::open_artifact(&out(cfg, artifact::VOCAB), &cfg.hash(), force, "prepare")?;
    Vocabulary::read_tsv(reader)
}

fn read_sentences(cfg: &PipelineConfig, force: bool, vocab: &Vocabulary) -> Result<Vec<Vec<u32>>> {
    let reader =
        artifact::open_artifact(&out(cfg, artifact::SENTENCES), &cfg.hash(), force, "prepare")?;
    let mut sentences = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ids: Vec<u32> = line
            .split_whitespace()
            .filter_map(|s| vocab.id_of(s))
            .collect();
        if !ids.is_empty() {
            sentences.push(ids);
        }
    }
    Ok(sentences)
}

fn train_text(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let vocab = read_vocab(cfg, force)?;
    let sentences = read_sentences(cfg, force, &vocab)?;
    let (emb, report) = embed::train_skipgram_with_report(&sentences, &vocab, &cfg.embed)?;
    artifact::write_artifact(&out(cfg, artifact::EMBEDDINGS), &cfg.hash(), |w| {
        emb.write_text(w)
    })?;
    let mut summary = StageSummary::new("train-text");
    summary.push("vocab", vocab.len());
    summary.push("sentences", sentences.len());
    summary.push("pairs", report.pairs);
    if let Some(obj) = report.epoch_objective.last() {
        summary.push("objective", format!("{obj:.4}"));
    }
    Ok(summary)
}

fn read_docs(cfg: &PipelineConfig, force: bool) -> Result<Vec<PhraseDoc>> {
    let reader = artifact::open_artifact(&out(cfg, artifact::DOCS), &cfg.hash(), force, "prepare")?;
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut docs: Vec<PhraseDoc> = Vec::new();
    let mut index: HashMap<(Source, String), usize> = HashMap::new();
    for record in csv_reader.records() {
        let record = record?;
        let item_id = record.get(0).unwrap_or("").to_string();
        let source = Source::parse(record.get(1).unwrap_or(""))?;
        let surface = record.get(2).unwrap_or("").to_string();
        let count: u32 = record
            .get(3)
            .unwrap_or("")
            .parse()
            .map_err(|_| Error::data("bad count in docs file"))?;
        let key = (source, item_id.clone());
        let doc_idx = *index.entry(key).or_insert_with(|| {
            docs.push(PhraseDoc {
                item_id,
                source,
                counts: Default::default(),
            });
            docs.len() - 1
        });
        docs[doc_idx].counts.insert(surface, count);
    }
    Ok(docs)
}

fn read_wine_meta(cfg: &PipelineConfig, force: bool) -> Result<HashMap<String, WineMeta>> {
    let reader =
        artifact::open_artifact(&out(cfg, artifact::WINE_META), &cfg.hash(), force, "prepare")?;
    let mut csv_reader = csv::Reader::from_reader(reader);
    let mut meta = HashMap::new();
    for record in csv_reader.records() {
        let record = record?;
        let get = |i: usize| {
            record
                .get(i)
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(str::to_string)
        };
        let Some(item_id) = get(0) else { continue };
        meta.insert(
            item_id,
            WineMeta {
                variety: get(1),
                province: get(2),
                country: get(3),
            },
        );
    }
    Ok(meta)
}

/// Key for an item's aroma vector in the sidecar embedding file.
fn aroma_key(source: Source, item_id: &str) -> String {
    format!("{}:{}", source.as_str(), item_id)
}

fn profile_stage(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let docs = read_docs(cfg, force)?;
    let emb = {
        let reader = artifact::open_artifact(
            &out(cfg, artifact::EMBEDDINGS),
            &cfg.hash(),
            force,
            "train-text",
        )?;
        EmbeddingMatrix::read_text(reader)?
    };
    let wine_meta = read_wine_meta(cfg, force)?;
    let wheel = match &cfg.aroma_wheel {
        Some(path) => AromaWheel::read_csv(required_input(&cfg.aroma_wheel, "data.aroma_wheel")?)
            .map_err(|e| match e {
                Error::Io(_) => Error::config(format!("cannot read {}", path.display())),
                other => other,
            })?,
        None => AromaWheel::empty(),
    };
    let anchors = match &cfg.anchors {
        Some(_) => AnchorSet::read_file(required_input(&cfg.anchors, "data.anchors")?)?,
        None => AnchorSet::default(),
    };

    let (profiles, weights, stats) =
        profile::build_profiles(&docs, &emb, &anchors, &wheel, cfg.wheel_level, &wine_meta)?;

    let hash = cfg.hash();
    artifact::write_artifact(&out(cfg, artifact::TFIDF), &hash, |w| weights.write_csv(w))?;
    artifact::write_artifact(&out(cfg, artifact::PROFILES), &hash, |w| {
        profile::write_profiles_csv(&profiles, w)
    })?;
    artifact::write_artifact(&out(cfg, artifact::PROFILES_AROMA), &hash, |w| {
        let with_vec: Vec<&TasteProfile> =
            profiles.iter().filter(|p| p.aroma_vec.is_some()).collect();
        let dim = emb.dim();
        let keys: Vec<String> = with_vec
            .iter()
            .map(|p| aroma_key(p.source, &p.item_id))
            .collect();
        let vectors: Vec<f64> = with_vec
            .iter()
            .flat_map(|p| p.aroma_vec.as_ref().unwrap().iter().copied())
            .collect();
        EmbeddingMatrix::new(keys, dim, vectors).write_text(w)
    })?;

    let mut summary = StageSummary::new("profile");
    summary.push("profiles", stats.profiles);
    summary.push("empty_aroma", stats.empty_aroma);
    summary.push("missing_anchors", stats.missing_anchors.len());
    Ok(summary)
}

fn read_profiles(cfg: &PipelineConfig, force: bool) -> Result<Vec<TasteProfile>> {
    let reader =
        artifact::open_artifact(&out(cfg, artifact::PROFILES), &cfg.hash(), force, "profile")?;
    let mut profiles = profile::read_profiles_csv(reader)?;
    let aroma = {
        let reader = artifact::open_artifact(
            &out(cfg, artifact::PROFILES_AROMA),
            &cfg.hash(),
            force,
            "profile",
        )?;
        EmbeddingMatrix::read_text(reader)?
    };
    for p in profiles.iter_mut() {
        let key = aroma_key(p.source, &p.item_id);
        let vec = aroma.get(&key).or_else(|| {
            // The vector text format collapses whitespace runs in keys.
            let collapsed: String = key.split_whitespace().collect::<Vec<_>>().join(" ");
            aroma.get(&collapsed)
        });
        p.aroma_vec = vec.map(|v| v.to_vec());
    }
    Ok(profiles)
}

fn pair_stage(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let profiles = read_profiles(cfg, force)?;
    let ruleset = RuleSet::with_thresholds(cfg.tau_high, cfg.tau_bitter)?;
    let wines: Vec<TasteProfile> = profiles
        .iter()
        .filter(|p| p.source == Source::Wine)
        .cloned()
        .collect();
    let mut foods: Vec<&TasteProfile> = profiles
        .iter()
        .filter(|p| p.source == Source::Food && p.aroma_vec.is_some())
        .collect();
    foods.sort_by(|a, b| a.item_id.cmp(&b.item_id));

    let mut rows = 0usize;
    let mut foods_with_pairs = 0usize;
    artifact::write_artifact(&out(cfg, artifact::PAIRINGS), &cfg.hash(), |w| {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["food_id", "wine_id", "status", "fired_rules", "aroma_similarity"])?;
        for food in &foods {
            let ranked = rules::pair(food, &wines, &ruleset, cfg.pair_k)?;
            if !ranked.is_empty() {
                foods_with_pairs += 1;
            }
            for r in ranked {
                let fired: Vec<&str> =
                    r.verdict.fired_pairing.iter().map(|p| p.name()).collect();
                writer.write_record([
                    food.item_id.as_str(),
                    r.wine_id.as_str(),
                    r.verdict.status.as_str(),
                    &fired.join("; "),
                    &r.similarity.to_string(),
                ])?;
                rows += 1;
            }
        }
        writer.flush()?;
        Ok(())
    })?;

    let mut summary = StageSummary::new("pair");
    summary.push("foods", foods.len());
    summary.push("wines", wines.len());
    summary.push("foods_with_pairs", foods_with_pairs);
    summary.push("pairings", rows);
    Ok(summary)
}

fn build_graph(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let nodes_path = required_input(&cfg.flavor_nodes, "data.flavor_nodes")?;
    let edges_path = required_input(&cfg.flavor_edges, "data.flavor_edges")?;
    let pairings = {
        let reader =
            artifact::open_artifact(&out(cfg, artifact::PAIRINGS), &cfg.hash(), force, "pair")?;
        graph::read_pairings_csv(reader)?
    };
    let mut base = HetGraph::read_nodes_csv(&nodes_path)?;
    let flavor_edges = base.read_edges_csv(&edges_path)?;
    let (augmented, stats) = graph::build_winegraph(base, &pairings, cfg.pair_k)?;

    let hash = cfg.hash();
    artifact::write_artifact(&out(cfg, artifact::GRAPH_NODES), &hash, |w| {
        augmented.write_nodes_csv(w)
    })?;
    artifact::write_artifact(&out(cfg, artifact::GRAPH_EDGES), &hash, |w| {
        augmented.write_edges_csv(w)
    })?;

    let mut summary = StageSummary::new("build-graph");
    summary.push("nodes", augmented.node_count());
    summary.push("edges", augmented.edge_count());
    summary.push("flavor_edges", flavor_edges);
    summary.push("wine_nodes", stats.wine_nodes_added);
    summary.push("pairing_edges", stats.pairing_edges_added);
    summary.push("foods_skipped", stats.foods_skipped);
    Ok(summary)
}

fn read_winegraph(cfg: &PipelineConfig, force: bool) -> Result<HetGraph> {
    let nodes_path = artifact::check_artifact(
        &out(cfg, artifact::GRAPH_NODES),
        &cfg.hash(),
        force,
        "build-graph",
    )?;
    let edges_path = artifact::check_artifact(
        &out(cfg, artifact::GRAPH_EDGES),
        &cfg.hash(),
        force,
        "build-graph",
    )?;
    let mut g = HetGraph::read_nodes_csv(&nodes_path)?;
    g.read_edges_csv(&edges_path)?;
    Ok(g)
}

fn train_graph(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let g = read_winegraph(cfg, force)?;
    let (metapaths, from_file) = match &cfg.metapaths {
        Some(_) => {
            let path = required_input(&cfg.metapaths, "data.metapaths")?;
            (graph::walks::read_metapaths_file(path)?, true)
        }
        None => (graph::default_metapaths(), false),
    };
    // Explicitly configured metapaths must be realizable; the shipped
    // defaults drop silently when the graph lacks their edge types.
    let mut specs: Vec<MetapathSpec> = Vec::new();
    let mut dropped = 0usize;
    for mp in metapaths {
        match mp.realizable(&g) {
            Ok(()) => specs.push(MetapathSpec::from(mp)),
            Err(e) if from_file => return Err(e),
            Err(_) => dropped += 1,
        }
    }
    if specs.is_empty() {
        return Err(Error::data(
            "no realizable metapath for this graph; provide data.metapaths",
        ));
    }

    let walks = graph::generate_walks(&g, &specs, &cfg.walks)?;
    let hash = cfg.hash();
    if cfg.dump_walks {
        artifact::write_artifact(&out(cfg, artifact::WALKS), &hash, |w| {
            graph::walks::write_walks(&walks, &g, w)
        })?;
    }
    let (emb, report) = graph::train_metapath2vec(&walks, &g, &cfg.graph_train)?;
    artifact::write_artifact(&out(cfg, artifact::NODE_EMBEDDINGS), &hash, |w| {
        emb.write_text(w)
    })?;

    let tokens: usize = walks.iter().map(|w| w.nodes.len()).sum();
    let mut summary = StageSummary::new("train-graph");
    summary.push("metapaths", specs.len());
    summary.push("metapaths_dropped", dropped);
    summary.push("walks", walks.len());
    summary.push("walk_tokens", tokens);
    summary.push("nodes", emb.len());
    summary.push("pairs", report.pairs);
    Ok(summary)
}

fn read_node_embeddings(cfg: &PipelineConfig, force: bool) -> Result<EmbeddingMatrix> {
    let reader = artifact::open_artifact(
        &out(cfg, artifact::NODE_EMBEDDINGS),
        &cfg.hash(),
        force,
        "train-graph",
    )?;
    EmbeddingMatrix::read_text(reader)
}

/// Evaluation label: first entry of the semicolon-separated category.
fn eval_label(category: &str) -> String {
    category.split(';').next().unwrap_or(category).trim().to_string()
}

fn evaluate(cfg: &PipelineConfig, force: bool) -> Result<StageSummary> {
    let emb = read_node_embeddings(cfg, force)?;
    let g = read_winegraph(cfg, force)?;

    // Clustering covers ingredient-kind nodes carrying a category label.
    let mut items: Vec<(String, String, Vec<f64>)> = Vec::new();
    for node in g.nodes() {
        if !node.node_type.is_ingredient_kind() {
            continue;
        }
        let Some(category) = &node.category else {
            continue;
        };
        let Some(vec) = emb.get(&node.external_id) else {
            continue;
        };
        items.push((node.external_id.clone(), eval_label(category), vec.to_vec()));
    }
    if items.is_empty() {
        return Err(Error::data(
            "no labeled ingredient-kind node to evaluate: the node file needs a category column",
        ));
    }
    let mut labels: Vec<&str> = items.iter().map(|(_, label, _)| label.as_str()).collect();
    labels.sort_unstable();
    labels.dedup();
    let k = if cfg.kmeans_k >= 2 { cfg.kmeans_k } else { labels.len() };
    if k < 2 {
        return Err(Error::data("need at least 2 distinct category labels"));
    }

    let points: Vec<Vec<f64>> = items.iter().map(|(_, _, v)| v.clone()).collect();
    let result = eval::kmeans_best_of(&points, k, cfg.seed, cfg.kmeans_max_iter, cfg.kmeans_restarts)?;
    let pred = eval::ClusterAssignment::new(
        items
            .iter()
            .zip(&result.assignment)
            .map(|((id, _, _), &c)| (id.clone(), c))
            .collect(),
        k,
    )?;
    let truth: std::collections::BTreeMap<String, String> = items
        .iter()
        .map(|(id, label, _)| (id.clone(), label.clone()))
        .collect();
    let score = eval::nmi_labeled(&pred.labels, &truth, cfg.nmi_variant)?;

    let hash = cfg.hash();
    artifact::write_artifact(&out(cfg, artifact::NMI_REPORT), &hash, |w| {
        writeln!(w, "dataset,epochs,nmi")?;
        writeln!(w, "winegraph,{},{score}", cfg.graph_train.epochs)?;
        Ok(())
    })?;

    let coords = eval::export_projection(&emb)?;
    artifact::write_artifact(&out(cfg, artifact::PROJECTION), &hash, |w| {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["node_id", "node_type", "x", "y"])?;
        for (key, [x, y]) in &coords {
            let node_type = g
                .find_external(key)
                .map(|idx| g.node_type(idx).name())
                .unwrap_or("unknown");
            writer.write_record([key.as_str(), node_type, &x.to_string(), &y.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    })?;

    let mut summary = StageSummary::new("evaluate");
    summary.push("items", items.len());
    summary.push("k", k);
    summary.push("distortion", format!("{:.4}", result.distortion));
    summary.push("nmi", format!("{score:.4}"));
    Ok(summary)
}

/// One ranked wine from a query.
#[derive(Debug, Clone)]
pub struct QueryHit {
    pub rank: usize,
    pub wine: String,
    pub node_id: String,
    pub similarity: f64,
}

/// Top-k wines for a food item, by node-embedding cosine. The food may
/// be given as a node id or a (normalized) node name.
pub fn query(cfg: &PipelineConfig, food: &str, k: usize, force: bool) -> Result<Vec<QueryHit>> {
    let emb = read_node_embeddings(cfg, force)?;
    let g = read_winegraph(cfg, force)?;
    let idx = g
        .find_external(food)
        .or_else(|| g.find_by_name(food))
        .ok_or_else(|| Error::data(format!("no node matches `{food}`")))?;
    if !g.node_type(idx).is_ingredient_kind() {
        return Err(Error::data(format!(
            "`{food}` is a {} node, not a food",
            g.node_type(idx)
        )));
    }
    let external = g.node(idx).external_id.clone();
    let ranked = eval::query_pairings(&external, &emb, &g, k)?;
    Ok(ranked
        .into_iter()
        .enumerate()
        .map(|(i, (node_idx, similarity))| QueryHit {
            rank: i + 1,
            wine: g.node(node_idx).name.clone(),
            node_id: g.node(node_idx).external_id.clone(),
            similarity,
        })
        .collect())
}

/// Template config with every key and its default, for `--init-config`
/// style bootstrapping and the README.
pub fn config_template() -> String {
    PipelineConfig::default().canonical()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_are_stable() {
        assert_eq!(Stage::Prepare.name(), "prepare");
        assert_eq!(Stage::TrainGraph.name(), "train-graph");
    }

    #[test]
    fn summary_renders_machine_readable_line() {
        let mut s = StageSummary::new("prepare");
        s.push("vocab", 123);
        s.push("docs", 4);
        assert_eq!(s.to_string(), "stage=prepare status=ok vocab=123 docs=4");
    }

    #[test]
    fn eval_label_takes_first_semicolon_entry() {
        assert_eq!(eval_label("fruit;plant"), "fruit");
        assert_eq!(eval_label("meat"), "meat");
        assert_eq!(eval_label(" dairy ; cow"), "dairy");
    }

    #[test]
    fn missing_prerequisite_reports_stage_and_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = PipelineConfig {
            out_dir: dir.path().to_path_buf(),
            ..PipelineConfig::default()
        };
        let err = run_stage(Stage::Evaluate, &cfg, false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("node_embeddings.txt"), "{msg}");
        assert!(msg.contains("train-graph"), "{msg}");
    }

    #[test]
    fn required_input_classifies_as_config_error() {
        let cfg = PipelineConfig::default();
        let err = run_stage(Stage::Prepare, &cfg, false).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("data.food_reviews"));
    }
}
