//! Skip-gram with negative sampling.
//!
//! One SGD step per (center, context) pair maximizes
//!
//! ```text
//! ln sigma(v_c . u_o) + sum_i ln sigma(-v_c . u_ni)
//! ```
//!
//! where `v` are input vectors, `u` are context (output) vectors, and the
//! negatives `n_i` are drawn from the unigram distribution raised to the
//! 3/4 power. Parameters live in atomic cells so that the multi-worker
//! mode can run lock-free over sentence shards, tolerating lost updates;
//! with one worker the pass is fully deterministic.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::TrainConfig;
use crate::error::{Error, Result};

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derive an independent stream seed from a base seed and stream labels.
pub(crate) fn stream_seed(seed: u64, a: u64, b: u64) -> u64 {
    splitmix64(seed ^ splitmix64(a.wrapping_mul(0x9E37_79B9) ^ splitmix64(b)))
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Numerically stable ln(sigmoid(x)).
pub fn ln_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Value of the negative-sampling objective for one training pair.
pub fn pair_objective(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    let mut obj = ln_sigmoid(dot(center, context));
    for neg in negatives {
        obj += ln_sigmoid(-dot(center, neg));
    }
    obj
}

/// Analytic gradient of [`pair_objective`] with respect to every
/// parameter block (ascent direction).
#[derive(Debug, Clone)]
pub struct PairGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn pair_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let dim = center.len();
    let g_pos = 1.0 - sigmoid(dot(center, context));
    let mut grad_center: Vec<f64> = context.iter().map(|&u| g_pos * u).collect();
    let grad_context: Vec<f64> = center.iter().map(|&v| g_pos * v).collect();
    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for neg in negatives {
        let g_neg = sigmoid(dot(center, neg));
        for d in 0..dim {
            grad_center[d] -= g_neg * neg[d];
        }
        grad_negatives.push(center.iter().map(|&v| -g_neg * v).collect());
    }
    PairGradient {
        center: grad_center,
        context: grad_context,
        negatives: grad_negatives,
    }
}

/// Row-major matrix of f64 cells shared across workers without locks.
pub(crate) struct AtomicMatrix {
    cells: Vec<AtomicU64>,
    dim: usize,
}

impl AtomicMatrix {
    pub fn from_vec(values: Vec<f64>, dim: usize) -> AtomicMatrix {
        let cells = values
            .into_iter()
            .map(|v| AtomicU64::new(v.to_bits()))
            .collect();
        AtomicMatrix { cells, dim }
    }

    pub fn load_row(&self, row: usize, buf: &mut [f64]) {
        let base = row * self.dim;
        for (d, slot) in buf.iter_mut().enumerate() {
            *slot = f64::from_bits(self.cells[base + d].load(Ordering::Relaxed));
        }
    }

    /// Racy read-modify-write add; lost updates are acceptable by design
    /// of the asynchronous SGD mode.
    pub fn add_row(&self, row: usize, delta: &[f64]) {
        let base = row * self.dim;
        for (d, &v) in delta.iter().enumerate() {
            let cell = &self.cells[base + d];
            let cur = f64::from_bits(cell.load(Ordering::Relaxed));
            cell.store((cur + v).to_bits(), Ordering::Relaxed);
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.cells
            .into_iter()
            .map(|c| f64::from_bits(c.into_inner()))
            .collect()
    }
}

/// Draws negative ids given the positive context id.
pub(crate) trait NegativeSampler: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng, context: u32) -> u32;
}

/// Precomputed table realizing the 3/4-power unigram distribution.
pub(crate) struct UnigramTable {
    table: Vec<u32>,
}

impl UnigramTable {
    /// `None` when no id has positive count.
    pub fn build(counts: &[u64], size: usize) -> Option<UnigramTable> {
        const POWER: f64 = 0.75;
        let items: Vec<(u32, f64)> = counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(id, &c)| (id as u32, (c as f64).powf(POWER)))
            .collect();
        if items.is_empty() {
            return None;
        }
        let total: f64 = items.iter().map(|(_, w)| w).sum();
        let size = size.max(items.len());
        let mut table = Vec::with_capacity(size);
        let mut j = 0;
        let mut cum = items[0].1 / total;
        for a in 0..size {
            table.push(items[j].0);
            if (a as f64 + 1.0) / size as f64 > cum && j + 1 < items.len() {
                j += 1;
                cum += items[j].1 / total;
            }
        }
        Some(UnigramTable { table })
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> u32 {
        self.table[rng.random_range(0..self.table.len())]
    }
}

impl NegativeSampler for UnigramTable {
    fn sample(&self, rng: &mut ChaCha8Rng, _context: u32) -> u32 {
        self.draw(rng)
    }
}

/// Per-type tables: negatives are drawn from the same type as the
/// positive context node (heterogeneous skip-gram).
pub(crate) struct TypedUnigramTables {
    type_of: Vec<u8>,
    tables: Vec<Option<UnigramTable>>,
}

impl TypedUnigramTables {
    pub fn build(counts: &[u64], type_of: Vec<u8>, per_type_size: usize) -> TypedUnigramTables {
        assert_eq!(counts.len(), type_of.len());
        let n_types = type_of.iter().map(|&t| t as usize + 1).max().unwrap_or(0);
        let mut tables = Vec::with_capacity(n_types);
        for t in 0..n_types {
            let masked: Vec<u64> = counts
                .iter()
                .zip(&type_of)
                .map(|(&c, &ty)| if ty as usize == t { c } else { 0 })
                .collect();
            tables.push(UnigramTable::build(&masked, per_type_size));
        }
        TypedUnigramTables { type_of, tables }
    }
}

impl NegativeSampler for TypedUnigramTables {
    fn sample(&self, rng: &mut ChaCha8Rng, context: u32) -> u32 {
        match &self.tables[self.type_of[context as usize] as usize] {
            Some(table) => table.draw(rng),
            // No other node of this type exists; returning the context
            // itself makes the trainer skip the draw.
            None => context,
        }
    }
}

/// Corpus frequency per vocabulary id.
pub(crate) fn token_counts(sentences: &[Vec<u32>], vocab_size: usize) -> Vec<u64> {
    let mut counts = vec![0u64; vocab_size];
    for sent in sentences {
        for &id in sent {
            counts[id as usize] += 1;
        }
    }
    counts
}

/// Keep probability under frequent-token subsampling. Tokens whose
/// relative frequency is at or below the threshold are always kept.
pub(crate) fn subsample_keep_prob(count: u64, total: u64, threshold: f64) -> f64 {
    if threshold <= 0.0 || count == 0 || total == 0 {
        return 1.0;
    }
    let freq = count as f64 / total as f64;
    if freq <= threshold {
        1.0
    } else {
        (threshold / freq).sqrt()
    }
}

pub(crate) fn init_input_matrix(vocab_size: usize, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, 0x1217, 0));
    let half = 0.5 / dim as f64;
    (0..vocab_size * dim)
        .map(|_| rng.random_range(-half..half))
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub epochs: usize,
    pub pairs: u64,
    /// Mean per-pair objective value, one entry per epoch.
    pub epoch_objective: Vec<f64>,
}

struct WorkerOutcome {
    objective_sum: f64,
    pairs: u64,
}

/// Train over id sentences. `counts[id] == 0` marks an id as excluded
/// (below min_count); such tokens are dropped from every sentence.
pub(crate) fn train<S: NegativeSampler + ?Sized>(
    sentences: &[Vec<u32>],
    counts: &[u64],
    cfg: &TrainConfig,
    sampler: &S,
) -> Result<(Vec<f64>, Vec<f64>, TrainReport)> {
    cfg.validate()?;
    let vocab_size = counts.len();
    let total_tokens: u64 = counts.iter().sum();
    if sentences.is_empty() || total_tokens == 0 {
        return Err(Error::data("empty corpus: nothing to train on"));
    }
    if vocab_size < cfg.negatives + 1 {
        return Err(Error::data(format!(
            "vocabulary size {} is smaller than negatives+1 = {}",
            vocab_size,
            cfg.negatives + 1
        )));
    }

    let keep_prob: Vec<f64> = counts
        .iter()
        .map(|&c| subsample_keep_prob(c, total_tokens, cfg.subsample_t))
        .collect();

    let input = AtomicMatrix::from_vec(
        init_input_matrix(vocab_size, cfg.dim, cfg.seed),
        cfg.dim,
    );
    let context = AtomicMatrix::from_vec(vec![0.0; vocab_size * cfg.dim], cfg.dim);

    let workers = cfg.workers.max(1);
    let total_budget = (cfg.epochs as u64).saturating_mul(total_tokens);
    let processed = AtomicU64::new(0);

    let mut epoch_objective = Vec::with_capacity(cfg.epochs);
    let mut total_pairs = 0u64;

    for epoch in 0..cfg.epochs {
        let outcomes: Vec<WorkerOutcome> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let input = &input;
                    let context = &context;
                    let processed = &processed;
                    let keep_prob = &keep_prob;
                    scope.spawn(move || {
                        run_worker(
                            sentences,
                            cfg,
                            sampler,
                            input,
                            context,
                            keep_prob,
                            processed,
                            total_budget,
                            counts,
                            w,
                            workers,
                            epoch,
                        )
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let obj_sum: f64 = outcomes.iter().map(|o| o.objective_sum).sum();
        let pairs: u64 = outcomes.iter().map(|o| o.pairs).sum();
        total_pairs += pairs;
        epoch_objective.push(if pairs > 0 { obj_sum / pairs as f64 } else { 0.0 });
    }

    let input = input.into_vec();
    let context = context.into_vec();
    if input.iter().any(|v| !v.is_finite()) || context.iter().any(|v| !v.is_finite()) {
        return Err(Error::data(
            "training diverged: non-finite values in embedding matrix",
        ));
    }
    Ok((
        input,
        context,
        TrainReport {
            epochs: cfg.epochs,
            pairs: total_pairs,
            epoch_objective,
        },
    ))
}

#[allow(clippy::too_many_arguments)]
fn run_worker<S: NegativeSampler + ?Sized>(
    sentences: &[Vec<u32>],
    cfg: &TrainConfig,
    sampler: &S,
    input: &AtomicMatrix,
    context: &AtomicMatrix,
    keep_prob: &[f64],
    processed: &AtomicU64,
    total_budget: u64,
    counts: &[u64],
    worker: usize,
    workers: usize,
    epoch: usize,
) -> WorkerOutcome {
    let dim = cfg.dim;
    let lr_floor = cfg.initial_lr * 0.1;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(
        cfg.seed,
        worker as u64 + 1,
        epoch as u64,
    ));

    let mut center_vec = vec![0.0; dim];
    let mut other_vec = vec![0.0; dim];
    let mut center_delta = vec![0.0; dim];
    let mut scaled = vec![0.0; dim];
    let mut kept: Vec<u32> = Vec::new();

    let mut objective_sum = 0.0;
    let mut pairs = 0u64;

    for (si, sentence) in sentences.iter().enumerate() {
        if si % workers != worker {
            continue;
        }
        let done = processed.fetch_add(sentence.len() as u64, Ordering::Relaxed);
        let progress = done as f64 / total_budget as f64;
        let lr = (cfg.initial_lr * (1.0 - 0.9 * progress)).max(lr_floor);

        kept.clear();
        for &id in sentence {
            if counts[id as usize] == 0 {
                continue;
            }
            let p = keep_prob[id as usize];
            if p >= 1.0 || rng.random::<f64>() < p {
                kept.push(id);
            }
        }
        if kept.len() < 2 {
            continue;
        }

        for pos in 0..kept.len() {
            let center = kept[pos];
            let radius = rng.random_range(1..=cfg.window);
            let lo = pos.saturating_sub(radius);
            let hi = (pos + radius).min(kept.len() - 1);
            for (ctx_pos, &ctx) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                if ctx_pos == pos {
                    continue;
                }
                input.load_row(center as usize, &mut center_vec);
                center_delta.iter_mut().for_each(|v| *v = 0.0);
                let mut pair_obj = 0.0;

                // Positive example.
                context.load_row(ctx as usize, &mut other_vec);
                let d = dot(&center_vec, &other_vec);
                pair_obj += ln_sigmoid(d);
                let g = lr * (1.0 - sigmoid(d));
                for k in 0..dim {
                    center_delta[k] += g * other_vec[k];
                    scaled[k] = g * center_vec[k];
                }
                context.add_row(ctx as usize, &scaled);

                // Negatives stand in for the context side.
                for _ in 0..cfg.negatives {
                    let neg = sampler.sample(&mut rng, ctx);
                    if neg == ctx {
                        continue;
                    }
                    context.load_row(neg as usize, &mut other_vec);
                    let d = dot(&center_vec, &other_vec);
                    pair_obj += ln_sigmoid(-d);
                    let g = -lr * sigmoid(d);
                    for k in 0..dim {
                        center_delta[k] += g * other_vec[k];
                        scaled[k] = g * center_vec[k];
                    }
                    context.add_row(neg as usize, &scaled);
                }

                input.add_row(center as usize, &center_delta);
                objective_sum += pair_obj;
                pairs += 1;
            }
        }
    }

    WorkerOutcome {
        objective_sum,
        pairs,
    }
}
