//! Taste profiles: aroma-wheel mapping, per-item aroma vectors, and the
//! seven core-taste scalars.
//!
//! Wine phrases pass through a three-tier aroma wheel
//! (specific -> intermediate -> broad, e.g. raspberry -> berry -> fruit)
//! before aggregation. An item's aroma vector is the TF-IDF-weighted mean
//! of its phrase vectors, L2-normalized. Each taste scalar is the cosine
//! between the item vector and the mean vector of that taste's anchor
//! phrases, min-max normalized to [0, 1] within each (taste, source)
//! group.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;
use std::path::Path;

use crate::corpus::{PhraseDoc, Source, WineMeta};
use crate::embed::{EmbeddingMatrix, TfidfWeights, cosine};
use crate::error::{Error, Result};

/// The seven scalar taste attributes used by the pairing rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoreTaste {
    Weight,
    Sweet,
    Acid,
    Salt,
    Piquant,
    Fat,
    Bitter,
}

impl CoreTaste {
    pub const ALL: [CoreTaste; 7] = [
        CoreTaste::Weight,
        CoreTaste::Sweet,
        CoreTaste::Acid,
        CoreTaste::Salt,
        CoreTaste::Piquant,
        CoreTaste::Fat,
        CoreTaste::Bitter,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CoreTaste::Weight => "weight",
            CoreTaste::Sweet => "sweet",
            CoreTaste::Acid => "acid",
            CoreTaste::Salt => "salt",
            CoreTaste::Piquant => "piquant",
            CoreTaste::Fat => "fat",
            CoreTaste::Bitter => "bitter",
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|t| t == self).unwrap()
    }

    pub fn parse(s: &str) -> Result<CoreTaste> {
        Self::ALL
            .iter()
            .find(|t| t.name() == s)
            .copied()
            .ok_or_else(|| Error::data(format!("unknown core taste `{s}`")))
    }
}

impl std::fmt::Display for CoreTaste {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which tier of the wheel a phrase is generalized to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WheelLevel {
    Specific,
    Tier2,
    Tier1,
}

impl WheelLevel {
    pub fn parse(s: &str) -> Result<WheelLevel> {
        match s {
            "specific" => Ok(WheelLevel::Specific),
            "tier2" => Ok(WheelLevel::Tier2),
            "tier1" => Ok(WheelLevel::Tier1),
            other => Err(Error::config(format!("unknown wheel level `{other}`"))),
        }
    }
}

/// Three-tier aroma descriptor hierarchy: specific -> (tier2, tier1).
/// A descriptor may equal its parent where the wheel is shallow.
#[derive(Debug, Clone, Default)]
pub struct AromaWheel {
    entries: HashMap<String, (String, String)>,
}

fn wheel_key(s: &str) -> String {
    s.trim().to_lowercase().replace(' ', "_")
}

impl AromaWheel {
    pub fn empty() -> AromaWheel {
        AromaWheel::default()
    }

    pub fn insert(&mut self, specific: &str, tier2: &str, tier1: &str) {
        self.entries
            .insert(wheel_key(specific), (wheel_key(tier2), wheel_key(tier1)));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// CSV with columns `specific,tier2,tier1`.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<AromaWheel> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        for col in ["specific", "tier2", "tier1"] {
            if !headers.iter().any(|h| h == col) {
                return Err(Error::HeaderMismatch {
                    file: path.to_path_buf(),
                    column: col.to_string(),
                });
            }
        }
        let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
        let (si, t2i, t1i) = (idx("specific"), idx("tier2"), idx("tier1"));
        let mut wheel = AromaWheel::empty();
        for record in reader.records() {
            let record = record?;
            let get = |i: usize| record.get(i).unwrap_or("").trim();
            if get(si).is_empty() {
                continue;
            }
            wheel.insert(get(si), get(t2i), get(t1i));
        }
        Ok(wheel)
    }

    /// Descriptor at the requested level; non-wheel phrases pass through
    /// unchanged.
    pub fn map(&self, phrase: &str, level: WheelLevel) -> String {
        match self.entries.get(phrase) {
            Some((tier2, tier1)) => match level {
                WheelLevel::Specific => phrase.to_string(),
                WheelLevel::Tier2 => tier2.clone(),
                WheelLevel::Tier1 => tier1.clone(),
            },
            None => phrase.to_string(),
        }
    }
}

/// See [`AromaWheel::map`].
pub fn map_aroma(phrase: &str, wheel: &AromaWheel, level: WheelLevel) -> String {
    wheel.map(phrase, level)
}

/// Anchor phrases per core taste.
#[derive(Debug, Clone)]
pub struct AnchorSet {
    anchors: [Vec<String>; 7],
}

impl Default for AnchorSet {
    fn default() -> Self {
        let v = |items: &[&str]| items.iter().map(|s| s.to_string()).collect();
        AnchorSet {
            anchors: [
                v(&["heavy", "full_bodied", "bold", "dense"]),
                v(&["sweet", "sweetness", "sugar"]),
                v(&["acid", "acidity", "tart", "sour"]),
                v(&["salt", "salty", "briny"]),
                v(&["spicy", "piquant", "pepper", "chili"]),
                v(&["fat", "fatty", "rich", "buttery", "creamy"]),
                v(&["bitter", "bitterness", "tannin"]),
            ],
        }
    }
}

impl AnchorSet {
    pub fn get(&self, taste: CoreTaste) -> &[String] {
        &self.anchors[taste.index()]
    }

    pub fn set(&mut self, taste: CoreTaste, phrases: Vec<String>) {
        self.anchors[taste.index()] = phrases;
    }

    /// Plain-text sections `taste: phrase1, phrase2, ...`; `#` comments.
    /// Tastes absent from the file keep their defaults.
    pub fn parse(text: &str) -> Result<AnchorSet> {
        let mut set = AnchorSet::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (taste, phrases) = line.split_once(':').ok_or_else(|| {
                Error::config(format!("anchor line {} has no `:`", lineno + 1))
            })?;
            let taste = CoreTaste::parse(taste.trim())
                .map_err(|_| Error::config(format!("unknown taste on line {}", lineno + 1)))?;
            let phrases: Vec<String> = phrases
                .split(',')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .collect();
            if phrases.is_empty() {
                return Err(Error::config(format!(
                    "taste `{taste}` has no anchor phrases"
                )));
            }
            set.set(taste, phrases);
        }
        Ok(set)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<AnchorSet> {
        let text = std::fs::read_to_string(path.as_ref())?;
        AnchorSet::parse(&text)
    }
}

/// Anchor mean vectors resolved against a trained vocabulary. Anchors
/// missing from the vocabulary are dropped and reported; a taste with no
/// surviving anchor is an error.
#[derive(Debug, Clone)]
pub struct ResolvedAnchors {
    means: [Vec<f64>; 7],
    pub missing: Vec<(CoreTaste, String)>,
}

impl ResolvedAnchors {
    pub fn resolve(anchors: &AnchorSet, emb: &EmbeddingMatrix) -> Result<ResolvedAnchors> {
        let mut means: [Vec<f64>; 7] = Default::default();
        let mut missing = Vec::new();
        for taste in CoreTaste::ALL {
            let mut mean = vec![0.0; emb.dim()];
            let mut found = 0usize;
            for phrase in anchors.get(taste) {
                match emb.get(phrase) {
                    Some(vec) => {
                        for (m, v) in mean.iter_mut().zip(vec) {
                            *m += v;
                        }
                        found += 1;
                    }
                    None => missing.push((taste, phrase.clone())),
                }
            }
            if found == 0 {
                return Err(Error::data(format!(
                    "taste `{taste}` has no anchor phrase in the vocabulary"
                )));
            }
            mean.iter_mut().for_each(|m| *m /= found as f64);
            means[taste.index()] = mean;
        }
        Ok(ResolvedAnchors { means, missing })
    }

    pub fn mean(&self, taste: CoreTaste) -> &[f64] {
        &self.means[taste.index()]
    }
}

/// Per-item pairing currency: aroma vector plus seven taste scalars.
#[derive(Debug, Clone)]
pub struct TasteProfile {
    pub item_id: String,
    pub source: Source,
    /// Unit-norm aroma vector, or `None` when the item has no
    /// in-vocabulary phrase (the empty flag).
    pub aroma_vec: Option<Vec<f64>>,
    scalars: [f64; 7],
    pub metadata: Option<WineMeta>,
}

impl TasteProfile {
    pub fn new(item_id: impl Into<String>, source: Source) -> TasteProfile {
        TasteProfile {
            item_id: item_id.into(),
            source,
            aroma_vec: None,
            scalars: [0.0; 7],
            metadata: None,
        }
    }

    pub fn scalar(&self, taste: CoreTaste) -> f64 {
        self.scalars[taste.index()]
    }

    pub fn set_scalar(&mut self, taste: CoreTaste, value: f64) {
        self.scalars[taste.index()] = value;
    }

    /// Taste with the largest scalar; ties resolve to the earlier taste
    /// in canonical order.
    pub fn dominant_taste(&self) -> CoreTaste {
        let mut best = CoreTaste::Weight;
        for taste in CoreTaste::ALL {
            if self.scalar(taste) > self.scalar(best) {
                best = taste;
            }
        }
        best
    }
}

/// Wheel-map a document's phrases (wine only) and drop surfaces that
/// leave the vocabulary.
pub fn resolve_doc(
    doc: &PhraseDoc,
    wheel: &AromaWheel,
    level: WheelLevel,
    vocab_contains: impl Fn(&str) -> bool,
) -> PhraseDoc {
    if doc.source != Source::Wine || wheel.is_empty() {
        return doc.clone();
    }
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for (surface, &count) in &doc.counts {
        let mapped = wheel.map(surface, level);
        if vocab_contains(&mapped) {
            *counts.entry(mapped).or_insert(0) += count;
        }
    }
    PhraseDoc {
        item_id: doc.item_id.clone(),
        source: doc.source,
        counts,
    }
}

/// TF-IDF-weighted mean of the document's phrase vectors, L2-normalized.
/// Returns `None` (the empty flag) when no phrase is in the vocabulary or
/// the aggregate cancels to zero.
pub fn aroma_vector(
    doc: &PhraseDoc,
    emb: &EmbeddingMatrix,
    weights: &TfidfWeights,
) -> Option<Vec<f64>> {
    let mut acc = vec![0.0; emb.dim()];
    let mut any = false;
    for surface in doc.counts.keys() {
        let Some(vec) = emb.get(surface) else {
            continue;
        };
        let w = weights.get(&doc.item_id, surface);
        any = true;
        for (a, v) in acc.iter_mut().zip(vec) {
            *a += w * v;
        }
    }
    if !any {
        return None;
    }
    let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return None;
    }
    acc.iter_mut().for_each(|v| *v /= norm);
    Some(acc)
}

/// Cosine between an item vector and the anchor mean for a taste,
/// in [-1, 1].
pub fn taste_scalar_raw(
    item_vec: &[f64],
    taste: CoreTaste,
    anchors: &ResolvedAnchors,
) -> Result<f64> {
    cosine(item_vec, anchors.mean(taste))
        .map_err(|_| Error::data(format!("cannot score `{taste}`: degenerate vector")))
}

/// Min-max normalization within one (taste, source) group. Degenerate
/// groups (max == min) map everything to 0.5.
pub fn normalize_scalars(raw: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in raw.values() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    raw.iter()
        .map(|(k, &v)| {
            let norm = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
            (k.clone(), norm)
        })
        .collect()
}

/// Summary of a profile-building run.
#[derive(Debug, Default)]
pub struct ProfileStats {
    pub profiles: usize,
    pub empty_aroma: usize,
    pub missing_anchors: Vec<(CoreTaste, String)>,
}

/// Build profiles for every document: resolve wine docs through the
/// wheel, compute TF-IDF over the resolved docs, aggregate aroma vectors,
/// score the seven tastes, and min-max normalize per (taste, source).
///
/// Also returns the TF-IDF weights actually used, for export.
pub fn build_profiles(
    docs: &[PhraseDoc],
    emb: &EmbeddingMatrix,
    anchors: &AnchorSet,
    wheel: &AromaWheel,
    level: WheelLevel,
    wine_meta: &HashMap<String, WineMeta>,
) -> Result<(Vec<TasteProfile>, TfidfWeights, ProfileStats)> {
    let resolved_docs: Vec<PhraseDoc> = docs
        .iter()
        .map(|d| resolve_doc(d, wheel, level, |s| emb.index_of(s).is_some()))
        .collect();
    let weights = crate::embed::compute_tfidf(&resolved_docs)?;
    let resolved = ResolvedAnchors::resolve(anchors, emb)?;

    let mut profiles: Vec<TasteProfile> = Vec::with_capacity(docs.len());
    let mut stats = ProfileStats {
        missing_anchors: resolved.missing.clone(),
        ..Default::default()
    };

    for doc in &resolved_docs {
        let mut profile = TasteProfile::new(doc.item_id.clone(), doc.source);
        profile.aroma_vec = aroma_vector(doc, emb, &weights);
        if profile.aroma_vec.is_none() {
            stats.empty_aroma += 1;
        }
        if doc.source == Source::Wine {
            profile.metadata = wine_meta.get(&doc.item_id).cloned();
        }
        profiles.push(profile);
    }

    // Raw anchor cosines, then per-(taste, source) min-max.
    for taste in CoreTaste::ALL {
        for source in [Source::Food, Source::Wine] {
            let mut raw: BTreeMap<String, f64> = BTreeMap::new();
            for profile in profiles.iter().filter(|p| p.source == source) {
                if let Some(vec) = &profile.aroma_vec {
                    raw.insert(profile.item_id.clone(), taste_scalar_raw(vec, taste, &resolved)?);
                }
            }
            if raw.is_empty() {
                continue;
            }
            let norm = normalize_scalars(&raw);
            for profile in profiles.iter_mut().filter(|p| p.source == source) {
                if let Some(&v) = norm.get(&profile.item_id) {
                    profile.set_scalar(taste, v);
                }
            }
        }
    }

    stats.profiles = profiles.len();
    Ok((profiles, weights, stats))
}

/// CSV rows `item_id,source,weight,sweet,acid,salt,piquant,fat,bitter`.
pub fn write_profiles_csv(profiles: &[TasteProfile], w: impl std::io::Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let mut header = vec!["item_id".to_string(), "source".to_string()];
    header.extend(CoreTaste::ALL.iter().map(|t| t.name().to_string()));
    writer.write_record(&header)?;
    for p in profiles {
        let mut record = vec![p.item_id.clone(), p.source.to_string()];
        record.extend(CoreTaste::ALL.iter().map(|t| p.scalar(*t).to_string()));
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Read profiles back; aroma vectors are attached from the sidecar
/// embedding separately.
pub fn read_profiles_csv(r: impl BufRead) -> Result<Vec<TasteProfile>> {
    let mut reader = csv::Reader::from_reader(r);
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::data(format!("profiles file is missing column `{name}`")))
    };
    let item_col = col("item_id")?;
    let source_col = col("source")?;
    let taste_cols: Vec<usize> = CoreTaste::ALL
        .iter()
        .map(|t| col(t.name()))
        .collect::<Result<_>>()?;
    let mut profiles = Vec::new();
    for record in reader.records() {
        let record = record?;
        let item_id = record.get(item_col).unwrap_or("").to_string();
        let source = Source::parse(record.get(source_col).unwrap_or(""))?;
        let mut profile = TasteProfile::new(item_id, source);
        for (taste, &ci) in CoreTaste::ALL.iter().zip(&taste_cols) {
            let v: f64 = record
                .get(ci)
                .unwrap_or("")
                .parse()
                .map_err(|_| Error::data("bad scalar in profiles file"))?;
            profile.set_scalar(*taste, v);
        }
        profiles.push(profile);
    }
    Ok(profiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn demo_wheel() -> AromaWheel {
        let mut wheel = AromaWheel::empty();
        wheel.insert("raspberry", "berry", "fruit");
        wheel.insert("lemon", "citrus", "fruit");
        wheel
    }

    #[test]
    fn wheel_maps_to_requested_tier() {
        let wheel = demo_wheel();
        assert_eq!(map_aroma("raspberry", &wheel, WheelLevel::Tier2), "berry");
        assert_eq!(map_aroma("raspberry", &wheel, WheelLevel::Tier1), "fruit");
        assert_eq!(
            map_aroma("raspberry", &wheel, WheelLevel::Specific),
            "raspberry"
        );
    }

    #[test]
    fn wheel_passes_unknown_phrases_through() {
        let wheel = demo_wheel();
        assert_eq!(map_aroma("pizza", &wheel, WheelLevel::Tier2), "pizza");
    }

    #[test]
    fn wheel_mapping_is_idempotent() {
        let wheel = demo_wheel();
        for level in [WheelLevel::Specific, WheelLevel::Tier2, WheelLevel::Tier1] {
            let once = map_aroma("raspberry", &wheel, level);
            let twice = map_aroma(&once, &wheel, level);
            assert_eq!(once, twice, "level {level:?}");
        }
    }

    fn emb(entries: &[(&str, &[f64])]) -> EmbeddingMatrix {
        let dim = entries[0].1.len();
        let keys: Vec<String> = entries.iter().map(|(k, _)| k.to_string()).collect();
        let vectors: Vec<f64> = entries.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        EmbeddingMatrix::new(keys, dim, vectors)
    }

    fn doc(item: &str, source: Source, counts: &[(&str, u32)]) -> PhraseDoc {
        PhraseDoc {
            item_id: item.to_string(),
            source,
            counts: counts.iter().map(|(s, c)| (s.to_string(), *c)).collect(),
        }
    }

    /// TF-IDF over `target` plus one decoy doc, so every phrase unique to
    /// the target gets weight tf * ln 2.
    fn weights_for(target: &PhraseDoc) -> TfidfWeights {
        let docs = vec![target.clone(), doc("decoy", Source::Food, &[("other", 1)])];
        crate::embed::compute_tfidf(&docs).unwrap()
    }

    #[test]
    fn aroma_vector_single_phrase_is_normalized_embedding() {
        let e = emb(&[("tart", &[3.0, 4.0])]);
        let d = doc("a", Source::Food, &[("tart", 2)]);
        let v = aroma_vector(&d, &e, &weights_for(&d)).unwrap();
        assert!((v[0] - 0.6).abs() < 1e-12);
        assert!((v[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn aroma_vector_cancellation_yields_empty_flag() {
        let e = emb(&[("up", &[0.0, 1.0]), ("down", &[0.0, -1.0])]);
        let d = doc("a", Source::Food, &[("up", 1), ("down", 1)]);
        assert_eq!(aroma_vector(&d, &e, &weights_for(&d)), None);
    }

    #[test]
    fn aroma_vector_no_vocabulary_overlap_is_empty() {
        let e = emb(&[("tart", &[1.0, 0.0])]);
        let d = doc("a", Source::Food, &[("missing", 3)]);
        assert_eq!(aroma_vector(&d, &e, &TfidfWeights::default()), None);
    }

    /// 3-phrase document, 2-d vectors. Each phrase is unique to the doc,
    /// so its weight is tf * ln 2 and the common ln 2 factor drops out
    /// under normalization: sum = 2*(1,0) + 1*(0,1) + 3*(1,1) = (5,4),
    /// norm sqrt(41).
    #[test]
    fn aroma_vector_hand_computed_weighted_mean() {
        let e = emb(&[("p", &[1.0, 0.0]), ("q", &[0.0, 1.0]), ("r", &[1.0, 1.0])]);
        let d = doc("a", Source::Food, &[("p", 2), ("q", 1), ("r", 3)]);
        let v = aroma_vector(&d, &e, &weights_for(&d)).unwrap();
        let norm = (41.0f64).sqrt();
        assert!((v[0] - 5.0 / norm).abs() < 1e-12);
        assert!((v[1] - 4.0 / norm).abs() < 1e-12);
    }

    #[test]
    fn aroma_vector_output_is_unit_norm() {
        let e = emb(&[("p", &[0.2, 0.9]), ("q", &[-0.4, 0.1])]);
        let d = doc("a", Source::Food, &[("p", 5), ("q", 2)]);
        let v = aroma_vector(&d, &e, &weights_for(&d)).unwrap();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    fn resolved(entries: &[(&str, &[f64])]) -> ResolvedAnchors {
        let e = emb(entries);
        let mut anchors = AnchorSet::default();
        for taste in CoreTaste::ALL {
            anchors.set(taste, vec![entries[0].0.to_string()]);
        }
        anchors.set(CoreTaste::Acid, vec!["acid_anchor".to_string()]);
        ResolvedAnchors::resolve(&anchors, &e).unwrap()
    }

    #[test]
    fn taste_scalar_identity_and_orthogonal() {
        let anchors = resolved(&[("other", &[1.0, 0.0]), ("acid_anchor", &[0.0, 1.0])]);
        let along = [0.0, 2.5];
        let across = [1.0, 0.0];
        assert!((taste_scalar_raw(&along, CoreTaste::Acid, &anchors).unwrap() - 1.0).abs() < 1e-12);
        assert!(taste_scalar_raw(&across, CoreTaste::Acid, &anchors).unwrap().abs() < 1e-12);
    }

    #[test]
    fn taste_scalar_invariant_under_positive_scaling() {
        let anchors = resolved(&[("other", &[0.3, 0.7]), ("acid_anchor", &[0.5, 0.5])]);
        let item = [0.9, 0.1];
        let scaled: Vec<f64> = item.iter().map(|v| v * 37.0).collect();
        let a = taste_scalar_raw(&item, CoreTaste::Acid, &anchors).unwrap();
        let b = taste_scalar_raw(&scaled, CoreTaste::Acid, &anchors).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn anchorless_taste_is_an_error() {
        let e = emb(&[("sweet", &[1.0, 0.0])]);
        let mut anchors = AnchorSet::default();
        anchors.set(CoreTaste::Bitter, vec!["no_such_phrase".to_string()]);
        anchors.set(CoreTaste::Sweet, vec!["sweet".to_string()]);
        let err = ResolvedAnchors::resolve(&anchors, &e).unwrap_err();
        assert!(err.to_string().contains("anchor"), "{err}");
    }

    #[test]
    fn missing_anchors_are_reported_and_dropped() {
        let e = emb(&[("sweet", &[1.0, 0.0]), ("sugar", &[0.8, 0.2])]);
        let mut anchors = AnchorSet::default();
        for taste in CoreTaste::ALL {
            anchors.set(taste, vec!["sweet".to_string()]);
        }
        anchors.set(
            CoreTaste::Sweet,
            vec!["sweet".to_string(), "ghost".to_string(), "sugar".to_string()],
        );
        let resolved = ResolvedAnchors::resolve(&anchors, &e).unwrap();
        assert_eq!(resolved.missing, vec![(CoreTaste::Sweet, "ghost".to_string())]);
        // Mean over the two surviving anchors.
        assert!((resolved.mean(CoreTaste::Sweet)[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn normalize_hand_example() {
        let raw: BTreeMap<String, f64> = [("a", -0.2), ("b", 0.1), ("c", 0.6)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let norm = normalize_scalars(&raw);
        assert!((norm["a"] - 0.0).abs() < 1e-12);
        assert!((norm["b"] - 0.375).abs() < 1e-12);
        assert!((norm["c"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_single_item_maps_to_half() {
        let raw: BTreeMap<String, f64> = [("only".to_string(), 0.83)].into_iter().collect();
        assert_eq!(normalize_scalars(&raw)["only"], 0.5);
    }

    #[test]
    fn normalize_unit_range_is_fixed_point() {
        let raw: BTreeMap<String, f64> = [("lo", 0.0), ("hi", 1.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let norm = normalize_scalars(&raw);
        assert_eq!(norm["lo"], 0.0);
        assert_eq!(norm["hi"], 1.0);
    }

    proptest! {
        #[test]
        fn normalize_preserves_order_and_hits_bounds(values in proptest::collection::vec(-1.0f64..1.0, 2..20)) {
            let raw: BTreeMap<String, f64> = values
                .iter()
                .enumerate()
                .map(|(i, &v)| (format!("item{i:03}"), v))
                .collect();
            let norm = normalize_scalars(&raw);
            for (a, va) in &raw {
                for (b, vb) in &raw {
                    if va < vb {
                        prop_assert!(norm[a] <= norm[b]);
                    }
                }
                prop_assert!((0.0..=1.0).contains(&norm[a]));
            }
            let lo = raw.values().cloned().fold(f64::INFINITY, f64::min);
            let hi = raw.values().cloned().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                let min_key = raw.iter().find(|&(_, &v)| v == lo).unwrap().0;
                let max_key = raw.iter().find(|&(_, &v)| v == hi).unwrap().0;
                prop_assert_eq!(norm[min_key], 0.0);
                prop_assert_eq!(norm[max_key], 1.0);
            }
        }
    }

    #[test]
    fn resolve_doc_maps_wine_phrases_through_wheel() {
        let wheel = demo_wheel();
        let d = doc("w", Source::Wine, &[("raspberry", 2), ("lemon", 1), ("oak", 4)]);
        let resolved = resolve_doc(&d, &wheel, WheelLevel::Tier2, |s| s != "citrus");
        assert_eq!(resolved.counts.get("berry"), Some(&2));
        // Mapped surface left the vocabulary: dropped.
        assert!(!resolved.counts.contains_key("citrus"));
        assert_eq!(resolved.counts.get("oak"), Some(&4));
    }

    #[test]
    fn resolve_doc_leaves_food_untouched() {
        let wheel = demo_wheel();
        let d = doc("f", Source::Food, &[("raspberry", 2)]);
        let resolved = resolve_doc(&d, &wheel, WheelLevel::Tier2, |_| true);
        assert_eq!(resolved.counts.get("raspberry"), Some(&2));
    }

    #[test]
    fn anchor_file_overrides_and_keeps_defaults() {
        let set = AnchorSet::parse("# comment\nacid: tart, lemon_juice\n").unwrap();
        assert_eq!(set.get(CoreTaste::Acid), &["tart", "lemon_juice"]);
        assert_eq!(set.get(CoreTaste::Salt), &["salt", "salty", "briny"]);
        assert!(AnchorSet::parse("acid tart").is_err());
        assert!(AnchorSet::parse("acid:").is_err());
        assert!(AnchorSet::parse("umami: broth").is_err());
    }

    #[test]
    fn profiles_csv_round_trip() {
        let mut p = TasteProfile::new("burrito", Source::Food);
        p.set_scalar(CoreTaste::Acid, 0.625);
        p.set_scalar(CoreTaste::Weight, 1.0);
        let mut q = TasteProfile::new("Quinta do Vale, Douro", Source::Wine);
        q.set_scalar(CoreTaste::Sweet, 0.25);
        let mut buf = Vec::new();
        write_profiles_csv(&[p, q], &mut buf).unwrap();
        let read = read_profiles_csv(&buf[..]).unwrap();
        assert_eq!(read.len(), 2);
        assert_eq!(read[0].item_id, "burrito");
        assert_eq!(read[0].scalar(CoreTaste::Acid), 0.625);
        assert_eq!(read[1].item_id, "Quinta do Vale, Douro");
        assert_eq!(read[1].source, Source::Wine);
        assert_eq!(read[1].scalar(CoreTaste::Sweet), 0.25);
    }

    #[test]
    fn dominant_taste_breaks_ties_by_canonical_order() {
        let mut p = TasteProfile::new("x", Source::Food);
        p.set_scalar(CoreTaste::Acid, 0.9);
        p.set_scalar(CoreTaste::Fat, 0.9);
        assert_eq!(p.dominant_taste(), CoreTaste::Acid);
    }
}
