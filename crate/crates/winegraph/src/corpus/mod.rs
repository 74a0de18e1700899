//! Review ingestion, text normalization, and phrase-vocabulary mining.
//!
//! Two review datasets (food and wine) feed a shared vocabulary of 1-3
//! token phrases. Phrases are mined in two collocation passes: the first
//! merges bigrams, the second attaches one more token to a merged bigram,
//! yielding trigrams. A pair `(a, b)` merges when
//!
//! ```text
//! count(a,b) >= min_count
//! score(a,b) = (count(a,b) - min_count) * total_tokens / (count(a) * count(b)) >= score_threshold
//! ```

pub mod stopwords;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Which dataset a review came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Food,
    Wine,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Food => "food",
            Source::Wine => "wine",
        }
    }

    pub fn parse(s: &str) -> Result<Source> {
        match s {
            "food" => Ok(Source::Food),
            "wine" => Ok(Source::Wine),
            other => Err(Error::data(format!("unknown source `{other}`"))),
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One text record tied to a food or wine item.
#[derive(Debug, Clone)]
pub struct Review {
    pub review_id: String,
    pub item_id: String,
    pub text: String,
    pub source: Source,
}

/// Optional wine item attributes captured at ingestion.
#[derive(Debug, Clone, Default)]
pub struct WineMeta {
    pub variety: Option<String>,
    pub province: Option<String>,
    pub country: Option<String>,
}

/// Declared CSV layout of a review file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReviewSchema {
    /// Columns `Id, ProductId, ..., Summary, Text`; item is the product,
    /// review text is `Summary + " " + Text`.
    FoodReviews,
    /// Columns including `title, description, variety, province, country`;
    /// item is the title, review text is the description.
    WineReviews,
}

impl ReviewSchema {
    pub fn source(&self) -> Source {
        match self {
            ReviewSchema::FoodReviews => Source::Food,
            ReviewSchema::WineReviews => Source::Wine,
        }
    }
}

struct FoodCols {
    id: usize,
    product_id: usize,
    summary: usize,
    text: usize,
}

struct WineCols {
    title: usize,
    description: usize,
    variety: Option<usize>,
    province: Option<usize>,
    country: Option<usize>,
}

enum SchemaCols {
    Food(FoodCols),
    Wine(WineCols),
}

/// Drop `<...>` markup spans; review dumps carry HTML line breaks whose
/// tag names would otherwise survive tokenization.
fn strip_markup(text: &str) -> String {
    if !text.contains('<') {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut in_tag = false;
    for c in text.chars() {
        match c {
            '<' => {
                in_tag = true;
                out.push(' ');
            }
            '>' if in_tag => in_tag = false,
            _ if !in_tag => out.push(c),
            _ => {}
        }
    }
    out
}

/// Streaming reader over a review CSV. Malformed rows (missing fields,
/// empty text after trimming) are skipped and tallied, not errors.
pub struct ReviewReader {
    records: csv::StringRecordsIntoIter<File>,
    cols: SchemaCols,
    skipped: usize,
    yielded: usize,
    row: u64,
    wine_meta: HashMap<String, WineMeta>,
}

fn require_column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::HeaderMismatch {
            file: path.to_path_buf(),
            column: name.to_string(),
        })
}

fn optional_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h == name)
}

impl ReviewReader {
    pub fn open(path: impl AsRef<Path>, schema: ReviewSchema) -> Result<ReviewReader> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::data(format!("missing file: {}", path.display())));
        }
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .from_path(path)?;
        let headers = reader.headers()?.clone();
        let cols = match schema {
            ReviewSchema::FoodReviews => SchemaCols::Food(FoodCols {
                id: require_column(&headers, "Id", path)?,
                product_id: require_column(&headers, "ProductId", path)?,
                summary: require_column(&headers, "Summary", path)?,
                text: require_column(&headers, "Text", path)?,
            }),
            ReviewSchema::WineReviews => SchemaCols::Wine(WineCols {
                title: require_column(&headers, "title", path)?,
                description: require_column(&headers, "description", path)?,
                variety: optional_column(&headers, "variety"),
                province: optional_column(&headers, "province"),
                country: optional_column(&headers, "country"),
            }),
        };
        Ok(ReviewReader {
            records: reader.into_records(),
            cols,
            skipped: 0,
            yielded: 0,
            row: 0,
            wine_meta: HashMap::new(),
        })
    }

    /// Rows dropped so far (malformed or empty text).
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Valid reviews yielded so far.
    pub fn yielded(&self) -> usize {
        self.yielded
    }

    /// Wine attributes collected while iterating (wine schema only).
    pub fn take_wine_meta(&mut self) -> HashMap<String, WineMeta> {
        std::mem::take(&mut self.wine_meta)
    }

    fn row_to_review(&mut self, record: &csv::StringRecord) -> Option<Review> {
        let nonempty = |idx: usize| -> Option<String> {
            let v = record.get(idx)?.trim();
            (!v.is_empty()).then(|| v.to_string())
        };
        match &self.cols {
            SchemaCols::Food(c) => {
                let item_id = nonempty(c.product_id)?;
                let summary = strip_markup(record.get(c.summary).unwrap_or("").trim());
                let body = strip_markup(record.get(c.text).unwrap_or("").trim());
                let text = if summary.is_empty() {
                    body
                } else if body.is_empty() {
                    summary
                } else {
                    format!("{summary} {body}")
                };
                if text.trim().is_empty() {
                    return None;
                }
                let review_id = record
                    .get(c.id)
                    .filter(|v| !v.trim().is_empty())
                    .map(|v| v.trim().to_string())
                    .unwrap_or_else(|| format!("food-{}", self.row));
                Some(Review {
                    review_id,
                    item_id,
                    text,
                    source: Source::Food,
                })
            }
            SchemaCols::Wine(c) => {
                let item_id = nonempty(c.title)?;
                let text = strip_markup(&nonempty(c.description)?);
                if text.trim().is_empty() {
                    return None;
                }
                let get_opt = |idx: Option<usize>| {
                    idx.and_then(|i| record.get(i))
                        .map(str::trim)
                        .filter(|v| !v.is_empty())
                        .map(str::to_string)
                };
                let meta = WineMeta {
                    variety: get_opt(c.variety),
                    province: get_opt(c.province),
                    country: get_opt(c.country),
                };
                self.wine_meta.entry(item_id.clone()).or_insert(meta);
                Some(Review {
                    review_id: format!("wine-{}", self.row),
                    item_id,
                    text,
                    source: Source::Wine,
                })
            }
        }
    }
}

impl Iterator for ReviewReader {
    type Item = Result<Review>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let record = match self.records.next()? {
                Ok(r) => r,
                Err(e) => return Some(Err(e.into())),
            };
            self.row += 1;
            match self.row_to_review(&record) {
                Some(review) => {
                    self.yielded += 1;
                    return Some(Ok(review));
                }
                None => self.skipped += 1,
            }
        }
    }
}

/// Everything one dataset yields.
#[derive(Debug)]
pub struct Ingested {
    pub reviews: Vec<Review>,
    pub skipped: usize,
    pub wine_meta: HashMap<String, WineMeta>,
}

/// Read a whole review file. Errors if no row survives validation.
pub fn ingest(path: impl AsRef<Path>, schema: ReviewSchema) -> Result<Ingested> {
    let path = path.as_ref();
    let mut reader = ReviewReader::open(path, schema)?;
    let mut reviews = Vec::new();
    for review in &mut reader {
        reviews.push(review?);
    }
    if reviews.is_empty() {
        return Err(Error::data(format!(
            "{}: zero valid rows ({} skipped)",
            path.display(),
            reader.skipped()
        )));
    }
    Ok(Ingested {
        reviews,
        skipped: reader.skipped(),
        wine_meta: reader.take_wine_meta(),
    })
}

/// Lowercase, split on any non-alphanumeric character, drop stopwords and
/// digit-only tokens. Idempotent over its own rejoined output.
pub fn tokenize_normalize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|tok| !tok.is_empty())
        .filter(|tok| !tok.chars().all(|c| c.is_numeric()))
        .filter(|tok| !stopwords::is_stopword(tok))
        .map(str::to_string)
        .collect()
}

/// Tokenize many texts in parallel, preserving order.
pub fn tokenize_all(texts: &[&str]) -> Vec<Vec<String>> {
    texts.par_iter().map(|t| tokenize_normalize(t)).collect()
}

/// A vocabulary entry: 1-3 tokens joined by underscores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phrase {
    pub surface: String,
    pub count: u64,
}

impl Phrase {
    pub fn tokens(&self) -> Vec<&str> {
        self.surface.split('_').collect()
    }
}

/// Dense-indexed phrase vocabulary, ordered by descending count then
/// lexicographic surface.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    phrases: Vec<Phrase>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn from_counts(counts: &HashMap<String, u64>, min_count: u64) -> Vocabulary {
        let mut phrases: Vec<Phrase> = counts
            .iter()
            .filter(|&(_, &c)| c >= min_count)
            .map(|(s, &c)| Phrase {
                surface: s.clone(),
                count: c,
            })
            .collect();
        phrases.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.surface.cmp(&b.surface)));
        let index = phrases
            .iter()
            .enumerate()
            .map(|(i, p)| (p.surface.clone(), i as u32))
            .collect();
        Vocabulary { phrases, index }
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    pub fn id_of(&self, surface: &str) -> Option<u32> {
        self.index.get(surface).copied()
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.index.contains_key(surface)
    }

    pub fn phrase(&self, id: u32) -> &Phrase {
        &self.phrases[id as usize]
    }

    pub fn surface(&self, id: u32) -> &str {
        &self.phrases[id as usize].surface
    }

    pub fn phrases(&self) -> &[Phrase] {
        &self.phrases
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.phrases.iter().map(|p| p.surface.as_str())
    }

    pub fn counts(&self) -> Vec<u64> {
        self.phrases.iter().map(|p| p.count).collect()
    }

    /// One `surface<TAB>count` line per phrase, in vocabulary order.
    pub fn write_tsv(&self, w: &mut impl Write) -> Result<()> {
        for p in &self.phrases {
            writeln!(w, "{}\t{}", p.surface, p.count)?;
        }
        Ok(())
    }

    pub fn read_tsv(r: impl BufRead) -> Result<Vocabulary> {
        let mut phrases = Vec::new();
        let mut index = HashMap::new();
        for line in r.lines() {
            let line = line?;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (surface, count) = line
                .split_once('\t')
                .ok_or_else(|| Error::data(format!("bad vocabulary line: {line:?}")))?;
            let count: u64 = count
                .parse()
                .map_err(|_| Error::data(format!("bad phrase count in line: {line:?}")))?;
            index.insert(surface.to_string(), phrases.len() as u32);
            phrases.push(Phrase {
                surface: surface.to_string(),
                count,
            });
        }
        Ok(Vocabulary { phrases, index })
    }
}

/// Learned collocation merges plus the resulting vocabulary.
#[derive(Debug, Clone)]
pub struct PhraseModel {
    pass1: HashSet<(String, String)>,
    pass2: HashSet<(String, String)>,
    vocab: Vocabulary,
    total_tokens: u64,
}

fn token_parts(s: &str) -> usize {
    s.split('_').count()
}

/// (unigram counts, adjacent-bigram counts, total token count).
type CorpusStats = (HashMap<String, u64>, HashMap<(String, String), u64>, u64);

fn pair_stats(sentences: &[Vec<String>]) -> CorpusStats {
    let (unigrams, bigrams, total) = sentences
        .par_iter()
        .fold(
            || (HashMap::new(), HashMap::new(), 0u64),
            |(mut uni, mut bi, mut total), sent| {
                for tok in sent {
                    *uni.entry(tok.clone()).or_insert(0u64) += 1;
                    total += 1;
                }
                for pair in sent.windows(2) {
                    *bi.entry((pair[0].clone(), pair[1].clone())).or_insert(0u64) += 1;
                }
                (uni, bi, total)
            },
        )
        .reduce(
            || (HashMap::new(), HashMap::new(), 0u64),
            |(mut ua, mut ba, ta), (ub, bb, tb)| {
                for (k, v) in ub {
                    *ua.entry(k).or_insert(0) += v;
                }
                for (k, v) in bb {
                    *ba.entry(k).or_insert(0) += v;
                }
                (ua, ba, ta + tb)
            },
        );
    (unigrams, bigrams, total)
}

fn decide_merges(
    unigrams: &HashMap<String, u64>,
    bigrams: &HashMap<(String, String), u64>,
    total: u64,
    min_count: u64,
    score_threshold: f64,
    eligible: impl Fn(&str, &str) -> bool,
) -> HashSet<(String, String)> {
    bigrams
        .iter()
        .filter(|&((a, b), &cnt)| {
            if cnt < min_count || !eligible(a, b) {
                return false;
            }
            let ca = unigrams[a] as f64;
            let cb = unigrams[b] as f64;
            let score = (cnt - min_count) as f64 * total as f64 / (ca * cb);
            score >= score_threshold
        })
        .map(|(pair, _)| pair.clone())
        .collect()
}

fn apply_merges(tokens: &[String], merges: &HashSet<(String, String)>) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() {
            let key = (tokens[i].clone(), tokens[i + 1].clone());
            if merges.contains(&key) {
                out.push(format!("{}_{}", tokens[i], tokens[i + 1]));
                i += 2;
                continue;
            }
        }
        out.push(tokens[i].clone());
        i += 1;
    }
    out
}

/// Mine the phrase vocabulary from tokenized sentences.
///
/// Greedy left-to-right merging within a sentence; overlapping candidates
/// resolve in favor of the earlier pair.
pub fn extract_phrases(
    sentences: &[Vec<String>],
    min_count: u64,
    score_threshold: f64,
) -> Result<PhraseModel> {
    if min_count < 1 {
        return Err(Error::config("min_count must be >= 1"));
    }
    let (uni1, bi1, total_tokens) = pair_stats(sentences);
    let pass1 = decide_merges(&uni1, &bi1, total_tokens, min_count, score_threshold, |_, _| {
        true
    });

    let merged1: Vec<Vec<String>> = sentences
        .par_iter()
        .map(|s| apply_merges(s, &pass1))
        .collect();

    // Second pass only attaches one more token to a pass-1 bigram.
    let (uni2, bi2, total2) = pair_stats(&merged1);
    let pass2 = decide_merges(&uni2, &bi2, total2, min_count, score_threshold, |a, b| {
        token_parts(a) + token_parts(b) == 3
    });

    let mut final_counts: HashMap<String, u64> = HashMap::new();
    for sent in &merged1 {
        for tok in apply_merges(sent, &pass2) {
            *final_counts.entry(tok).or_insert(0) += 1;
        }
    }
    let vocab = Vocabulary::from_counts(&final_counts, min_count);
    Ok(PhraseModel {
        pass1,
        pass2,
        vocab,
        total_tokens,
    })
}

impl PhraseModel {
    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn into_vocab(self) -> Vocabulary {
        self.vocab
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Apply both merge passes; output may contain out-of-vocabulary
    /// surfaces.
    pub fn apply(&self, tokens: &[String]) -> Vec<String> {
        apply_merges(&apply_merges(tokens, &self.pass1), &self.pass2)
    }

    /// Apply merges and map to vocabulary ids, dropping out-of-vocabulary
    /// surfaces.
    pub fn to_ids(&self, tokens: &[String]) -> Vec<u32> {
        self.apply(tokens)
            .iter()
            .filter_map(|s| self.vocab.id_of(s))
            .collect()
    }
}

/// All reviews of one item, reduced to a multiset of in-vocabulary phrase
/// surfaces.
#[derive(Debug, Clone)]
pub struct PhraseDoc {
    pub item_id: String,
    pub source: Source,
    pub counts: BTreeMap<String, u32>,
}

impl PhraseDoc {
    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Group tokenized reviews per item and count in-vocabulary phrases.
/// `token_lists` must parallel `reviews`. Output is sorted by
/// (source, item_id).
pub fn build_phrase_docs(
    reviews: &[Review],
    token_lists: &[Vec<String>],
    model: &PhraseModel,
) -> Vec<PhraseDoc> {
    assert_eq!(reviews.len(), token_lists.len());
    let mut docs: BTreeMap<(Source, String), BTreeMap<String, u32>> = BTreeMap::new();
    for (review, tokens) in reviews.iter().zip(token_lists) {
        let entry = docs
            .entry((review.source, review.item_id.clone()))
            .or_default();
        for surface in model.apply(tokens) {
            if model.vocab.contains(&surface) {
                *entry.entry(surface).or_insert(0) += 1;
            }
        }
    }
    docs.into_iter()
        .map(|((source, item_id), counts)| PhraseDoc {
            item_id,
            source,
            counts,
        })
        .collect()
}

/// Resolve a dataset path, mapping absence to a data error that names the
/// file.
pub fn existing_path(path: &Path) -> Result<PathBuf> {
    if path.exists() {
        Ok(path.to_path_buf())
    } else {
        Err(Error::data(format!("missing file: {}", path.display())))
    }
}
