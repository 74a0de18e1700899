//! Build a small heterogeneous food/compound/wine graph, generate
//! metapath-guided walks, and train node embeddings.
//!
//! ```bash
//! cargo run --example winegraph_walks
//! ```

use winegraph::embed::TrainConfig;
use winegraph::eval::query_pairings;
use winegraph::graph::{
    EdgeType, HetGraph, MetapathSpec, NodeType, WalkConfig, default_metapaths, generate_walks,
    train_metapath2vec,
};

fn main() -> winegraph::Result<()> {
    let mut g = HetGraph::new();
    let add = |g: &mut HetGraph, id: u32, name: &str, t: NodeType| {
        g.add_node(id.to_string(), name, t, None, "").unwrap()
    };
    let burrito = add(&mut g, 0, "burrito", NodeType::Ingredient);
    let chili = add(&mut g, 1, "chili", NodeType::Ingredient);
    let cake = add(&mut g, 2, "cake", NodeType::Ingredient);
    let cheese = add(&mut g, 3, "cheese", NodeType::Ingredient);
    let butter = add(&mut g, 4, "butter", NodeType::HubIngredient);
    let cream = add(&mut g, 5, "cream", NodeType::HubIngredient);
    let diacetyl = add(&mut g, 6, "diacetyl", NodeType::Compound);
    let vanillin = add(&mut g, 7, "vanillin", NodeType::Compound);
    let red = add(&mut g, 8, "Big Red Blend", NodeType::Wine);
    let white = add(&mut g, 9, "Crisp White", NodeType::Wine);

    for (a, b) in [(burrito, chili), (burrito, cheese), (cake, cheese)] {
        g.add_edge(a, b, 1.0, EdgeType::IngrIngr)?;
    }
    for (a, b) in [(cake, butter), (cheese, cream), (burrito, butter)] {
        g.add_edge(a, b, 1.0, EdgeType::IngrIngr)?;
    }
    for (h, c) in [(butter, diacetyl), (butter, vanillin), (cream, diacetyl)] {
        g.add_edge(h, c, 1.0, EdgeType::IngrCompound)?;
    }
    for (f, w, s) in [(burrito, red, 0.9), (chili, red, 0.8), (cake, white, 0.85), (cheese, white, 0.7)] {
        g.add_edge(f, w, s, EdgeType::FoodWine)?;
    }

    println!(
        "graph: {} nodes, {} edges, heterogeneous: {}",
        g.node_count(),
        g.edge_count(),
        g.is_heterogeneous()
    );

    let specs: Vec<MetapathSpec> = default_metapaths().into_iter().map(Into::into).collect();
    let cfg = WalkConfig {
        walks_per_node: 30,
        walk_length: 8,
        seed: 7,
        weighted: false,
    };
    let walks = generate_walks(&g, &specs, &cfg)?;
    println!("generated {} walks; a few samples:", walks.len());
    for walk in walks.iter().step_by(walks.len() / 5).take(5) {
        let names: Vec<&str> = walk.nodes.iter().map(|&n| g.node(n).name.as_str()).collect();
        let types: Vec<&str> = walk.nodes.iter().map(|&n| g.node_type(n).name()).collect();
        println!("  [{}] {}", specs[walk.metapath].path.name(), names.join(" -> "));
        println!("      types: {}", types.join(" -> "));
    }

    let tcfg = TrainConfig {
        dim: 16,
        window: 2,
        negatives: 3,
        epochs: 6,
        initial_lr: 0.05,
        subsample_t: 0.0,
        seed: 7,
        ..TrainConfig::default()
    };
    let (emb, report) = train_metapath2vec(&walks, &g, &tcfg)?;
    println!("\ntrained {} pairs; wines closest to burrito:", report.pairs);
    for (idx, sim) in query_pairings("0", &emb, &g, 2)? {
        println!("  {:<16} {:+.3}", g.node(idx).name, sim);
    }
    Ok(())
}
