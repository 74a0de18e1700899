//! Phrase embeddings (skip-gram negative sampling) and TF-IDF weights.

pub mod sgns;

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::corpus::{PhraseDoc, Source, Vocabulary};
use crate::error::{Error, Result};

pub use sgns::{PairGradient, TrainReport, ln_sigmoid, pair_gradient, pair_objective, sigmoid};

/// Hyperparameters for skip-gram training.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub min_count: u64,
    pub subsample_t: f64,
    pub seed: u64,
    /// 1 = deterministic single-worker mode; more workers run lock-free
    /// asynchronous SGD over sentence shards.
    pub workers: usize,
    pub negative_table_size: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 300,
            window: 5,
            negatives: 5,
            epochs: 5,
            initial_lr: 0.025,
            min_count: 1,
            subsample_t: 1e-4,
            seed: 42,
            workers: 1,
            negative_table_size: 10_000_000,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::config("dim must be >= 1"));
        }
        if self.window < 1 {
            return Err(Error::config("window must be >= 1"));
        }
        if self.negatives < 1 {
            return Err(Error::config("negatives must be >= 1"));
        }
        if self.epochs < 1 {
            return Err(Error::config("epochs must be >= 1"));
        }
        if self.initial_lr <= 0.0 {
            return Err(Error::config("initial_lr must be > 0"));
        }
        Ok(())
    }
}

/// Dense keyed vector matrix. Used both for phrase embeddings (keys are
/// phrase surfaces) and for node embeddings (keys are node ids).
///
/// Context vectors exist only on freshly trained matrices; they are not
/// serialized.
#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    keys: Vec<String>,
    index: HashMap<String, usize>,
    dim: usize,
    vectors: Vec<f64>,
    context_vectors: Option<Vec<f64>>,
}

impl EmbeddingMatrix {
    pub fn new(keys: Vec<String>, dim: usize, vectors: Vec<f64>) -> EmbeddingMatrix {
        assert_eq!(keys.len() * dim, vectors.len());
        let index = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        EmbeddingMatrix {
            keys,
            index,
            dim,
            vectors,
            context_vectors: None,
        }
    }

    pub(crate) fn with_context(mut self, context: Vec<f64>) -> EmbeddingMatrix {
        assert_eq!(context.len(), self.vectors.len());
        self.context_vectors = Some(context);
        self
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn key(&self, row: usize) -> &str {
        &self.keys[row]
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.vectors[row * self.dim..(row + 1) * self.dim]
    }

    pub fn get(&self, key: &str) -> Option<&[f64]> {
        self.index_of(key).map(|r| self.row(r))
    }

    /// Context (output) vector, available on trained matrices only.
    pub fn context_row(&self, row: usize) -> Option<&[f64]> {
        self.context_vectors
            .as_ref()
            .map(|c| &c[row * self.dim..(row + 1) * self.dim])
    }

    pub fn all_finite(&self) -> bool {
        self.vectors.iter().all(|v| v.is_finite())
    }

    /// Text format: first line `|V| dim`, then one `key v1 .. vdim` line
    /// per row. Only input vectors are written.
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.len(), self.dim)?;
        for (i, key) in self.keys.iter().enumerate() {
            write!(w, "{key}")?;
            for v in self.row(i) {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Reads the text format. The key is everything before the trailing
    /// `dim` float fields, so keys containing single spaces survive;
    /// runs of whitespace inside a key collapse to one space.
    pub fn read_text(r: impl BufRead) -> Result<EmbeddingMatrix> {
        let mut lines = r.lines();
        let header = loop {
            match lines.next() {
                Some(line) => {
                    let line = line?;
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    break line;
                }
                None => return Err(Error::data("embedding file is empty")),
            }
        };
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::data("bad embedding header"))?;
        let dim: usize = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::data("bad embedding header"))?;

        let mut keys = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n * dim);
        for line in lines {
            let line = line?;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < dim + 1 {
                return Err(Error::data(format!(
                    "embedding line has {} fields, expected at least {}",
                    fields.len(),
                    dim + 1
                )));
            }
            let key_end = fields.len() - dim;
            keys.push(fields[..key_end].join(" "));
            for f in &fields[key_end..] {
                let v: f64 = f
                    .parse()
                    .map_err(|_| Error::data(format!("bad float `{f}` in embedding file")))?;
                vectors.push(v);
            }
        }
        if keys.len() != n {
            return Err(Error::data(format!(
                "embedding file declares {n} rows but contains {}",
                keys.len()
            )));
        }
        Ok(EmbeddingMatrix::new(keys, dim, vectors))
    }
}

/// Cosine similarity. Errors on dimension mismatch or a zero vector.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::data(format!(
            "cosine: dimension mismatch {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::data("cosine: zero vector"));
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

/// TF-IDF weights per (item, phrase surface), computed within each source
/// group: `weight = tf * ln(N / df)` with `N` the number of documents of
/// the same source.
#[derive(Debug, Clone, Default)]
pub struct TfidfWeights {
    weights: HashMap<String, HashMap<String, f64>>,
}

impl TfidfWeights {
    pub fn get(&self, item_id: &str, surface: &str) -> f64 {
        self.weights
            .get(item_id)
            .and_then(|m| m.get(surface))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn item(&self, item_id: &str) -> Option<&HashMap<String, f64>> {
        self.weights.get(item_id)
    }

    pub fn items(&self) -> usize {
        self.weights.len()
    }

    /// CSV rows `item_id,surface,weight`, sorted for reproducible output.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut writer = csv::Writer::from_writer(w);
        writer.write_record(["item_id", "surface", "weight"])?;
        let mut items: Vec<&String> = self.weights.keys().collect();
        items.sort();
        for item in items {
            let mut surfaces: Vec<(&String, &f64)> = self.weights[item].iter().collect();
            surfaces.sort_by(|a, b| a.0.cmp(b.0));
            for (surface, weight) in surfaces {
                writer.write_record([item.as_str(), surface.as_str(), &weight.to_string()])?;
            }
        }
        writer.flush()?;
        Ok(())
    }
}

/// Document frequencies and weights are computed per source group, so a
/// phrase ubiquitous among wines still discriminates among foods.
pub fn compute_tfidf(docs: &[PhraseDoc]) -> Result<TfidfWeights> {
    if docs.is_empty() {
        return Err(Error::data("compute_tfidf: no documents"));
    }
    let mut weights = TfidfWeights::default();
    for source in [Source::Food, Source::Wine] {
        let group: Vec<&PhraseDoc> = docs.iter().filter(|d| d.source == source).collect();
        if group.is_empty() {
            continue;
        }
        let n = group.len() as f64;
        let mut df: HashMap<&str, u64> = HashMap::new();
        for doc in &group {
            for surface in doc.counts.keys() {
                *df.entry(surface.as_str()).or_insert(0) += 1;
            }
        }
        for doc in &group {
            let entry = weights.weights.entry(doc.item_id.clone()).or_default();
            for (surface, &tf) in &doc.counts {
                let idf = (n / df[surface.as_str()] as f64).ln();
                entry.insert(surface.clone(), tf as f64 * idf);
            }
        }
    }
    Ok(weights)
}

/// Train phrase embeddings over id sentences. Sentence ids index into
/// `vocab`; rows of the result follow vocabulary order.
pub fn train_skipgram(
    corpus: &[Vec<u32>],
    vocab: &Vocabulary,
    cfg: &TrainConfig,
) -> Result<EmbeddingMatrix> {
    train_skipgram_with_report(corpus, vocab, cfg).map(|(emb, _)| emb)
}

pub fn train_skipgram_with_report(
    corpus: &[Vec<u32>],
    vocab: &Vocabulary,
    cfg: &TrainConfig,
) -> Result<(EmbeddingMatrix, TrainReport)> {
    let mut counts = sgns::token_counts(corpus, vocab.len());
    for c in counts.iter_mut() {
        if *c < cfg.min_count {
            *c = 0;
        }
    }
    let sampler = sgns::UnigramTable::build(&counts, cfg.negative_table_size)
        .ok_or_else(|| Error::data("empty corpus: nothing to train on"))?;
    let (input, context, report) = sgns::train(corpus, &counts, cfg, &sampler)?;
    let keys: Vec<String> = vocab.surfaces().map(str::to_string).collect();
    let emb = EmbeddingMatrix::new(keys, cfg.dim, input).with_context(context);
    Ok((emb, report))
}
