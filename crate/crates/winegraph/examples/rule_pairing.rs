//! The sommelier rule system: elimination constraints, pairing decision
//! rules, and ranked pairing for one food.
//!
//! ```bash
//! cargo run --example rule_pairing
//! ```

use winegraph::corpus::Source;
use winegraph::profile::{CoreTaste, TasteProfile};
use winegraph::rules::{RuleSet, evaluate_pair, pair, pairing_style};

fn profile(id: &str, source: Source, scalars: [f64; 7], aroma: [f64; 2]) -> TasteProfile {
    let mut p = TasteProfile::new(id, source);
    for (taste, v) in CoreTaste::ALL.iter().zip(scalars) {
        p.set_scalar(*taste, v);
    }
    p.aroma_vec = Some(aroma.to_vec());
    p
}

fn main() -> winegraph::Result<()> {
    let rules = RuleSet::default();

    // Scalar order: [weight, sweet, acid, salt, piquant, fat, bitter].
    let food = profile(
        "lemon tart",
        Source::Food,
        [0.3, 0.5, 0.85, 0.1, 0.0, 0.4, 0.1],
        [0.9, 0.4],
    );
    let wines = vec![
        profile("Late Harvest White", Source::Wine, [0.5, 0.9, 0.9, 0.0, 0.0, 0.8, 0.1], [0.8, 0.6]),
        profile("Feather Rose", Source::Wine, [0.1, 0.6, 0.9, 0.0, 0.0, 0.2, 0.1], [0.9, 0.3]),
        profile("Thin Fizz", Source::Wine, [0.4, 0.4, 0.7, 0.0, 0.0, 0.1, 0.0], [0.5, 0.5]),
        profile("Tannic Monster", Source::Wine, [0.9, 0.9, 0.9, 0.0, 0.0, 0.1, 0.9], [0.7, 0.7]),
        profile("Salted Sherry", Source::Wine, [0.9, 0.9, 0.9, 0.9, 0.0, 0.3, 0.1], [0.2, 0.9]),
    ];

    println!("evaluating each wine against `{}`:", food.item_id);
    for wine in &wines {
        let verdict = evaluate_pair(&food, wine, &rules);
        print!("  {:<20} {:<13}", wine.item_id, verdict.status.as_str());
        if !verdict.fired_elimination.is_empty() {
            let names: Vec<&str> = verdict.fired_elimination.iter().map(|r| r.name()).collect();
            print!(" rejected by: {}", names.join(", "));
        }
        if !verdict.fired_pairing.is_empty() {
            let names: Vec<&str> = verdict.fired_pairing.iter().map(|r| r.name()).collect();
            print!(" fired: {} ({:?})", names.join(", "), pairing_style(&food, wine));
        }
        println!();
    }

    println!("\ntop pairings by aroma similarity:");
    for ranked in pair(&food, &wines, &rules, 3)? {
        println!(
            "  {:<20} similarity {:+.3}",
            ranked.wine_id, ranked.similarity
        );
    }
    Ok(())
}
