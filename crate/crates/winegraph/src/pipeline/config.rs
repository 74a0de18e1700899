//! Flat key=value pipeline configuration with section prefixes.

use std::path::{Path, PathBuf};

use crate::embed::TrainConfig;
use crate::error::{Error, Result};
use crate::eval::NmiVariant;
use crate::graph::WalkConfig;
use crate::profile::WheelLevel;

/// Everything the pipeline stages need, parsed from one config file.
/// `--seed` and `--workers` overrides propagate to every stage.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub seed: u64,
    pub workers: usize,
    pub out_dir: PathBuf,

    pub food_reviews: Option<PathBuf>,
    pub wine_reviews: Option<PathBuf>,
    pub flavor_nodes: Option<PathBuf>,
    pub flavor_edges: Option<PathBuf>,
    pub aroma_wheel: Option<PathBuf>,
    pub anchors: Option<PathBuf>,
    pub metapaths: Option<PathBuf>,

    pub corpus_min_count: u64,
    pub corpus_score_threshold: f64,

    pub embed: TrainConfig,
    pub wheel_level: WheelLevel,
    pub tau_high: f64,
    pub tau_bitter: f64,
    pub pair_k: usize,

    pub walks: WalkConfig,
    pub graph_train: TrainConfig,
    pub dump_walks: bool,

    /// 0 = use the number of distinct category labels.
    pub kmeans_k: usize,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub nmi_variant: NmiVariant,
    pub query_k: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            workers: 1,
            out_dir: PathBuf::from("out"),
            food_reviews: None,
            wine_reviews: None,
            flavor_nodes: None,
            flavor_edges: None,
            aroma_wheel: None,
            anchors: None,
            metapaths: None,
            corpus_min_count: 10,
            corpus_score_threshold: 10.0,
            embed: TrainConfig::default(),
            wheel_level: WheelLevel::Tier2,
            tau_high: 0.75,
            tau_bitter: 0.75,
            pair_k: 3,
            walks: WalkConfig::default(),
            graph_train: TrainConfig {
                // Walk corpora are small and near-uniform; frequent-token
                // subsampling would gut them.
                subsample_t: 0.0,
                ..TrainConfig::default()
            },
            dump_walks: false,
            kmeans_k: 0,
            kmeans_restarts: 10,
            kmeans_max_iter: 100,
            nmi_variant: NmiVariant::Geometric,
            query_k: 3,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::config(format!("bad boolean `{other}` for `{key}`"))),
    }
}

fn opt_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("config line {} is not `key=value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => cfg.seed = parse_num(key, value)?,
                "workers" => cfg.workers = parse_num(key, value)?,
                "out_dir" => cfg.out_dir = PathBuf::from(value),
                "data.food_reviews" => cfg.food_reviews = opt_path(value),
                "data.wine_reviews" => cfg.wine_reviews = opt_path(value),
                "data.flavor_nodes" => cfg.flavor_nodes = opt_path(value),
                "data.flavor_edges" => cfg.flavor_edges = opt_path(value),
                "data.aroma_wheel" => cfg.aroma_wheel = opt_path(value),
                "data.anchors" => cfg.anchors = opt_path(value),
                "data.metapaths" => cfg.metapaths = opt_path(value),
                "corpus.min_count" => cfg.corpus_min_count = parse_num(key, value)?,
                "corpus.score_threshold" => cfg.corpus_score_threshold = parse_num(key, value)?,
                "embed.dim" => cfg.embed.dim = parse_num(key, value)?,
                "embed.window" => cfg.embed.window = parse_num(key, value)?,
                "embed.negatives" => cfg.embed.negatives = parse_num(key, value)?,
                "embed.epochs" => cfg.embed.epochs = parse_num(key, value)?,
                "embed.initial_lr" => cfg.embed.initial_lr = parse_num(key, value)?,
                "embed.min_count" => cfg.embed.min_count = parse_num(key, value)?,
                "embed.subsample_t" => cfg.embed.subsample_t = parse_num(key, value)?,
                "profile.wheel_level" => cfg.wheel_level = WheelLevel::parse(value)?,
                "rules.tau_high" => cfg.tau_high = parse_num(key, value)?,
                "rules.tau_bitter" => cfg.tau_bitter = parse_num(key, value)?,
                "pair.k" => cfg.pair_k = parse_num(key, value)?,
                "graph.walks_per_node" => cfg.walks.walks_per_node = parse_num(key, value)?,
                "graph.walk_length" => cfg.walks.walk_length = parse_num(key, value)?,
                "graph.weighted_sampling" => cfg.walks.weighted = parse_bool(key, value)?,
                "graph.dump_walks" => cfg.dump_walks = parse_bool(key, value)?,
                "graph.dim" => cfg.graph_train.dim = parse_num(key, value)?,
                "graph.window" => cfg.graph_train.window = parse_num(key, value)?,
                "graph.negatives" => cfg.graph_train.negatives = parse_num(key, value)?,
                "graph.epochs" => cfg.graph_train.epochs = parse_num(key, value)?,
                "graph.initial_lr" => cfg.graph_train.initial_lr = parse_num(key, value)?,
                "graph.min_count" => cfg.graph_train.min_count = parse_num(key, value)?,
                "graph.subsample_t" => cfg.graph_train.subsample_t = parse_num(key, value)?,
                "eval.kmeans_k" => cfg.kmeans_k = parse_num(key, value)?,
                "eval.restarts" => cfg.kmeans_restarts = parse_num(key, value)?,
                "eval.max_iter" => cfg.kmeans_max_iter = parse_num(key, value)?,
                "eval.nmi_variant" => cfg.nmi_variant = NmiVariant::parse(value)?,
                "eval.query_k" => cfg.query_k = parse_num(key, value)?,
                other => {
                    return Err(Error::config(format!(
                        "unknown config key `{other}` on line {}",
                        lineno + 1
                    )));
                }
            }
        }
        cfg.sync_seeds();
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<PipelineConfig> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        PipelineConfig::parse(&text)
    }

    /// CLI `--seed` / `--workers` overrides.
    pub fn apply_overrides(&mut self, seed: Option<u64>, workers: Option<usize>) {
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(workers) = workers {
            self.workers = workers.max(1);
        }
        self.sync_seeds();
    }

    /// The top-level seed and worker count propagate to every stochastic
    /// stage.
    fn sync_seeds(&mut self) {
        self.embed.seed = self.seed;
        self.embed.workers = self.workers;
        self.walks.seed = self.seed;
        self.graph_train.seed = self.seed;
        self.graph_train.workers = self.workers;
    }

    /// Canonical serialization: every key in fixed order, one per line.
    /// Hash input for artifact stamping.
    pub fn canonical(&self) -> String {
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let wheel = match self.wheel_level {
            WheelLevel::Specific => "specific",
            WheelLevel::Tier2 => "tier2",
            WheelLevel::Tier1 => "tier1",
        };
        let variant = match self.nmi_variant {
            NmiVariant::Geometric => "geometric",
            NmiVariant::Arithmetic => "arithmetic",
            NmiVariant::Min => "min",
        };
        format!(
            "seed={}\nworkers={}\nout_dir={}\n\
             data.food_reviews={}\ndata.wine_reviews={}\ndata.flavor_nodes={}\n\
             data.flavor_edges={}\ndata.aroma_wheel={}\ndata.anchors={}\ndata.metapaths={}\n\
             corpus.min_count={}\ncorpus.score_threshold={}\n\
             embed.dim={}\nembed.window={}\nembed.negatives={}\nembed.epochs={}\n\
             embed.initial_lr={}\nembed.min_count={}\nembed.subsample_t={}\n\
             profile.wheel_level={}\nrules.tau_high={}\nrules.tau_bitter={}\npair.k={}\n\
             graph.walks_per_node={}\ngraph.walk_length={}\ngraph.weighted_sampling={}\n\
             graph.dump_walks={}\ngraph.dim={}\ngraph.window={}\ngraph.negatives={}\n\
             graph.epochs={}\ngraph.initial_lr={}\ngraph.min_count={}\ngraph.subsample_t={}\n\
             eval.kmeans_k={}\neval.restarts={}\neval.max_iter={}\neval.nmi_variant={}\n\
             eval.query_k={}\n",
            self.seed,
            self.workers,
            self.out_dir.display(),
            path(&self.food_reviews),
            path(&self.wine_reviews),
            path(&self.flavor_nodes),
            path(&self.flavor_edges),
            path(&self.aroma_wheel),
            path(&self.anchors),
            path(&self.metapaths),
            self.corpus_min_count,
            self.corpus_score_threshold,
            self.embed.dim,
            self.embed.window,
            self.embed.negatives,
            self.embed.epochs,
            self.embed.initial_lr,
            self.embed.min_count,
            self.embed.subsample_t,
            wheel,
            self.tau_high,
            self.tau_bitter,
            self.pair_k,
            self.walks.walks_per_node,
            self.walks.walk_length,
            self.walks.weighted,
            self.dump_walks,
            self.graph_train.dim,
            self.graph_train.window,
            self.graph_train.negatives,
            self.graph_train.epochs,
            self.graph_train.initial_lr,
            self.graph_train.min_count,
            self.graph_train.subsample_t,
            self.kmeans_k,
            self.kmeans_restarts,
            self.kmeans_max_iter,
            variant,
            self.query_k,
        )
    }

    /// FNV-1a hash of the canonical form, as 16 hex digits.
    pub fn hash(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.canonical().bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}
