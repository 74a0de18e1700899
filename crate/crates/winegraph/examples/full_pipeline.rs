//! Every pipeline stage end to end on a synthetic dataset: reviews in,
//! pairings and node embeddings out, finishing with a burrito query.
//!
//! ```bash
//! cargo run --example full_pipeline
//! ```

use winegraph::demo;
use winegraph::pipeline::{self, Stage};

fn main() -> winegraph::Result<()> {
    let dir = tempfile::tempdir().expect("temp dir");
    let paths = demo::write_demo_dataset(&dir.path().join("data"), 11)?;
    let cfg = demo::demo_config(&paths, &dir.path().join("out"));
    println!("synthetic dataset under {}", paths.dir.display());

    for stage in [
        Stage::Prepare,
        Stage::TrainText,
        Stage::Profile,
        Stage::Pair,
        Stage::BuildGraph,
        Stage::TrainGraph,
        Stage::Evaluate,
    ] {
        let summary = pipeline::run_stage(stage, &cfg, false)?;
        println!("{summary}");
    }

    // Rule-generated pairings for burrito (from the pair stage)...
    let pairings = std::fs::read_to_string(cfg.out_dir.join("pairings.csv"))?;
    println!("\nrule-generated pairings for burrito:");
    for line in pairings.lines().filter(|l| l.starts_with("burrito,")) {
        let mut fields = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(line.as_bytes())
            .into_records();
        if let Some(Ok(record)) = fields.next() {
            println!(
                "  {} (similarity {})",
                record.get(1).unwrap_or("?"),
                record.get(4).unwrap_or("?")
            );
        }
    }

    // ...versus the nearest wine nodes in the trained graph embedding.
    println!("\nclosest wine nodes in the graph embedding:");
    for hit in pipeline::query(&cfg, "burrito", 3, false)? {
        println!("  {}. {} ({:+.3})", hit.rank, hit.wine, hit.similarity);
    }
    Ok(())
}
