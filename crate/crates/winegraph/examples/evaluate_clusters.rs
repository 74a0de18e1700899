//! Cluster labeled vectors with k-means, score with NMI, and export a
//! 2-d projection.
//!
//! ```bash
//! cargo run --example evaluate_clusters
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use winegraph::embed::EmbeddingMatrix;
use winegraph::eval::{NmiVariant, export_projection, kmeans_best_of, nmi};

fn main() -> winegraph::Result<()> {
    // Three blobs in 5-d standing in for food categories.
    let centers = [
        ("dairy", [4.0, 0.0, 0.0, 1.0, -1.0]),
        ("fruit", [-3.0, 3.0, 0.0, -1.0, 0.0]),
        ("meat", [0.0, -4.0, 3.0, 0.0, 1.0]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut points = Vec::new();
    let mut truth = Vec::new();
    for (label_idx, (_, center)) in centers.iter().enumerate() {
        for _ in 0..30 {
            let p: Vec<f64> = center
                .iter()
                .map(|&c| c + rng.random_range(-1.0..1.0))
                .collect();
            points.push(p);
            truth.push(label_idx);
        }
    }

    let result = kmeans_best_of(&points, 3, 42, 100, 10)?;
    println!(
        "k-means: distortion {:.3} after {} iterations (best of 10 restarts)",
        result.distortion, result.iterations
    );
    let score = nmi(&result.assignment, &truth, NmiVariant::Geometric)?;
    println!("NMI against the true labels: {score:.4}");

    for variant in [NmiVariant::Arithmetic, NmiVariant::Min] {
        println!(
            "  {variant:?} variant: {:.4}",
            nmi(&result.assignment, &truth, variant)?
        );
    }

    // Project the 5-d points to 2-d for plotting.
    let keys: Vec<String> = (0..points.len()).map(|i| format!("p{i:03}")).collect();
    let flat: Vec<f64> = points.iter().flatten().copied().collect();
    let emb = EmbeddingMatrix::new(keys, 5, flat);
    let coords = export_projection(&emb)?;
    println!("\nfirst projected point per blob (x, y):");
    for (label_idx, (label, _)) in centers.iter().enumerate() {
        let (key, [x, y]) = &coords[label_idx * 30];
        println!("  {label:<6} {key}: ({x:+.2}, {y:+.2})");
    }
    Ok(())
}
