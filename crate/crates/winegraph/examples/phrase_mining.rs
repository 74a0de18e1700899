//! Tokenize review text and mine 1-3 token phrases.
//!
//! ```bash
//! cargo run --example phrase_mining
//! ```

use winegraph::corpus::{extract_phrases, tokenize_normalize};

fn main() -> winegraph::Result<()> {
    let reviews = [
        "Great fruit flavour, loved it!",
        "The fruit flavour is unreal - 100% would buy again.",
        "Subtle fruit flavour with black cherries on the nose.",
        "Black cherries and a hint of fruit flavour.",
        "Intense black cherries, very ripe.",
        "Fruit flavour everywhere, plus black cherries.",
        "A wall of black cherries.",
        "Mostly fruit flavour here.",
        "Some tart apple notes.",
        "Tart apple again, quite sharp.",
    ];

    println!("tokenization:");
    for text in &reviews[..3] {
        println!("  {:?}", text);
        println!("    -> {:?}", tokenize_normalize(text));
    }

    let sentences: Vec<Vec<String>> = reviews.iter().map(|t| tokenize_normalize(t)).collect();
    let model = extract_phrases(&sentences, 2, 1.0)?;

    println!("\nvocabulary (min_count=2, score_threshold=1.0):");
    println!("  {:<24} count", "surface");
    for phrase in model.vocab().phrases() {
        println!("  {:<24} {}", phrase.surface, phrase.count);
    }

    let fresh = tokenize_normalize("This fruit flavour beats the black cherries.");
    println!("\nmerging a new review with the learned phrases:");
    println!("  {:?}", fresh);
    println!("  -> {:?}", model.apply(&fresh));
    Ok(())
}
