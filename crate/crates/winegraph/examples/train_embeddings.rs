//! Skip-gram negative sampling on a toy corpus with two topic clusters.
//!
//! ```bash
//! cargo run --example train_embeddings
//! ```

use winegraph::corpus::Vocabulary;
use winegraph::embed::{TrainConfig, cosine, train_skipgram_with_report};

fn main() -> winegraph::Result<()> {
    // Two word families that never mix: fruity vs savory.
    let fruity = ["cherry", "berry", "plum", "jam"];
    let savory = ["bacon", "smoke", "pepper", "broth"];

    let mut counts = std::collections::HashMap::new();
    for word in fruity.iter().chain(&savory) {
        counts.insert(word.to_string(), 100u64);
    }
    let vocab = Vocabulary::from_counts(&counts, 1);

    let sentence = |words: &[&str], a: usize, b: usize, c: usize| -> Vec<u32> {
        [words[a], words[b], words[c]]
            .iter()
            .map(|w| vocab.id_of(w).unwrap())
            .collect()
    };
    let mut corpus = Vec::new();
    for i in 0..400 {
        corpus.push(sentence(&fruity, i % 4, (i + 1) % 4, (i + 2) % 4));
        corpus.push(sentence(&savory, i % 4, (i + 3) % 4, (i + 1) % 4));
    }

    let cfg = TrainConfig {
        dim: 16,
        window: 2,
        negatives: 3,
        epochs: 5,
        initial_lr: 0.05,
        subsample_t: 0.0,
        seed: 42,
        ..TrainConfig::default()
    };
    let (emb, report) = train_skipgram_with_report(&corpus, &vocab, &cfg)?;

    println!("trained {} pairs over {} epochs", report.pairs, report.epochs);
    println!("mean objective per epoch (should rise): ");
    for (epoch, obj) in report.epoch_objective.iter().enumerate() {
        println!("  epoch {epoch}: {obj:.4}");
    }

    println!("\nnearest neighbors by cosine:");
    for query in ["cherry", "bacon"] {
        let qv = emb.get(query).unwrap();
        let mut sims: Vec<(&str, f64)> = emb
            .keys()
            .iter()
            .filter(|k| k.as_str() != query)
            .map(|k| (k.as_str(), cosine(qv, emb.get(k).unwrap()).unwrap()))
            .collect();
        sims.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        println!("  {query}:");
        for (word, sim) in sims.iter().take(3) {
            println!("    {word:<8} {sim:+.3}");
        }
    }
    Ok(())
}
