//! Aroma-wheel mapping, aroma vectors, and the seven taste scalars.
//!
//! ```bash
//! cargo run --example taste_profiles
//! ```

use std::collections::BTreeMap;

use winegraph::corpus::{PhraseDoc, Source};
use winegraph::embed::{EmbeddingMatrix, compute_tfidf};
use winegraph::profile::{
    AnchorSet, AromaWheel, CoreTaste, ResolvedAnchors, WheelLevel, aroma_vector, map_aroma,
    normalize_scalars, resolve_doc, taste_scalar_raw,
};

fn main() -> winegraph::Result<()> {
    // A miniature aroma wheel: specific -> intermediate -> broad.
    let mut wheel = AromaWheel::empty();
    wheel.insert("raspberry", "berry", "fruit");
    wheel.insert("cherry", "berry", "fruit");
    wheel.insert("lemon", "citrus", "fruit");

    println!("aroma wheel mapping:");
    for level in [WheelLevel::Specific, WheelLevel::Tier2, WheelLevel::Tier1] {
        println!("  raspberry @ {level:?} -> {}", map_aroma("raspberry", &wheel, level));
    }
    println!("  pizza @ Tier2 -> {} (not a wheel entry)", map_aroma("pizza", &wheel, WheelLevel::Tier2));

    // Hand-set 2-d phrase embedding: the first axis is "sweet-ish", the
    // second "tart-ish".
    let emb = EmbeddingMatrix::new(
        vec![
            "berry".into(),
            "citrus".into(),
            "sugar".into(),
            "tart".into(),
            "buttery".into(),
        ],
        2,
        vec![
            0.9, 0.3, // berry
            0.2, 0.9, // citrus
            1.0, 0.0, // sugar
            0.0, 1.0, // tart
            0.6, -0.2, // buttery
        ],
    );

    // Two wines: one mostly raspberry/cherry, one lemon-driven.
    let docs = [
        doc("Jammy Red", &[("raspberry", 5), ("cherry", 3), ("buttery", 1)]),
        doc("Zesty White", &[("lemon", 6), ("tart", 2)]),
    ];
    let resolved: Vec<PhraseDoc> = docs
        .iter()
        .map(|d| resolve_doc(d, &wheel, WheelLevel::Tier2, |s| emb.get(s).is_some()))
        .collect();
    println!("\nwheel-resolved documents:");
    for doc in &resolved {
        println!("  {}: {:?}", doc.item_id, doc.counts);
    }

    let weights = compute_tfidf(&resolved)?;
    println!("\naroma vectors (TF-IDF-weighted, unit norm):");
    let mut vectors = BTreeMap::new();
    for doc in &resolved {
        let v = aroma_vector(doc, &emb, &weights).expect("non-empty doc");
        println!("  {:<12} [{:+.3}, {:+.3}]", doc.item_id, v[0], v[1]);
        vectors.insert(doc.item_id.clone(), v);
    }

    // Taste scalars: cosine against anchor means, then min-max per group.
    let mut anchors = AnchorSet::default();
    anchors.set(CoreTaste::Sweet, vec!["sugar".into(), "berry".into()]);
    anchors.set(CoreTaste::Acid, vec!["tart".into(), "citrus".into()]);
    for taste in CoreTaste::ALL {
        if !matches!(taste, CoreTaste::Sweet | CoreTaste::Acid) {
            anchors.set(taste, vec!["buttery".into()]);
        }
    }
    let resolved_anchors = ResolvedAnchors::resolve(&anchors, &emb)?;

    for taste in [CoreTaste::Sweet, CoreTaste::Acid] {
        let raw: BTreeMap<String, f64> = vectors
            .iter()
            .map(|(item, v)| {
                let s = taste_scalar_raw(v, taste, &resolved_anchors).unwrap();
                (item.clone(), s)
            })
            .collect();
        let norm = normalize_scalars(&raw);
        println!("\n{taste} scalar (raw cosine -> normalized):");
        for (item, r) in &raw {
            println!("  {:<12} {:+.3} -> {:.3}", item, r, norm[item]);
        }
    }
    Ok(())
}

fn doc(item: &str, counts: &[(&str, u32)]) -> PhraseDoc {
    PhraseDoc {
        item_id: item.to_string(),
        source: Source::Wine,
        counts: counts.iter().map(|(s, c)| (s.to_string(), *c)).collect(),
    }
}
