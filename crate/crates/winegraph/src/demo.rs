//! Synthetic demo dataset: a handful of foods and wines with slanted
//! taste vocabularies, a miniature food graph, and an aroma wheel.
//!
//! The examples and integration tests run the full pipeline on this data
//! instead of the multi-hundred-megabyte public review dumps. Reviews are
//! generated deterministically from a seed; taste slants are chosen so
//! that the rule engine reliably finds pairings (one wine leads every
//! elimination scale, each taste has a clearly dominant food).

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::pipeline::PipelineConfig;

const FILLER: &[&str] = &[
    "really", "enjoyed", "bottle", "glass", "flavor", "taste", "great", "nice", "evening",
    "dinner", "lovely", "overall", "again", "definitely", "ordered",
];

const WHEEL_WORDS: &[&str] = &["raspberry", "cherry", "lemon", "berry", "citrus", "fruit"];

struct Item {
    name: &'static str,
    pools: &'static [&'static [&'static str]],
    category: &'static str,
}

const WEIGHT_POOL: &[&str] = &["heavy", "bold", "dense", "full", "bodied"];
const SWEET_POOL: &[&str] = &["sweet", "sweetness", "sugar"];
const ACID_POOL: &[&str] = &["acid", "acidity", "tart", "sour"];
const SALT_POOL: &[&str] = &["salt", "salty", "briny"];
const PIQUANT_POOL: &[&str] = &["spicy", "piquant", "pepper", "chili"];
const FAT_POOL: &[&str] = &["fat", "fatty", "rich", "buttery", "creamy"];
const BITTER_POOL: &[&str] = &["bitter", "bitterness", "tannin"];

const FOODS: &[Item] = &[
    // One clearly dominant taste per headline food, so min-max
    // normalization gives each taste a distinct top food.
    Item { name: "burrito", pools: &[SALT_POOL], category: "dish" },
    Item { name: "pizza", pools: &[WEIGHT_POOL], category: "dish" },
    Item { name: "stew", pools: &[FAT_POOL], category: "dish" },
    Item { name: "bacon", pools: &[SALT_POOL, FAT_POOL], category: "meat" },
    Item { name: "mackerel", pools: &[SALT_POOL], category: "meat" },
    Item { name: "cake", pools: &[SWEET_POOL], category: "dessert" },
    Item { name: "tart", pools: &[ACID_POOL], category: "dessert" },
    Item { name: "biscuit", pools: &[FAT_POOL, SWEET_POOL], category: "dessert" },
    Item { name: "pineapple", pools: &[SWEET_POOL, ACID_POOL], category: "fruit;plant" },
    Item { name: "chili", pools: &[PIQUANT_POOL], category: "spice" },
];

const WINES: &[Item] = &[
    // Three "super" wines lead the weight/sweet/acid elimination scales
    // and carry one extra high taste each, so most foods keep at least
    // three candidates after elimination.
    Item {
        name: "Harbor Port, Douro",
        pools: &[WEIGHT_POOL, SWEET_POOL, ACID_POOL, FAT_POOL],
        category: "",
    },
    Item {
        name: "Old Vine Zinfandel, Lodi",
        pools: &[WEIGHT_POOL, SWEET_POOL, ACID_POOL, PIQUANT_POOL],
        category: "",
    },
    Item {
        name: "Velvet Merlot, Columbia",
        pools: &[WEIGHT_POOL, SWEET_POOL, ACID_POOL, BITTER_POOL],
        category: "",
    },
    Item { name: "Golden Sauternes, Bordeaux", pools: &[SWEET_POOL, FAT_POOL], category: "" },
    Item { name: "Midnight Shiraz, Barossa", pools: &[WEIGHT_POOL, FAT_POOL], category: "" },
    Item { name: "Sunrise Riesling, Mosel", pools: &[SWEET_POOL, ACID_POOL], category: "" },
    Item { name: "Coastal Albarino, Rias Baixas", pools: &[ACID_POOL, SALT_POOL], category: "" },
    Item { name: "Sparkling Brut, Reims", pools: &[ACID_POOL], category: "" },
    Item { name: "Stone Gruner, Wachau", pools: &[PIQUANT_POOL], category: "" },
];

pub struct DemoPaths {
    pub dir: PathBuf,
    pub food_reviews: PathBuf,
    pub wine_reviews: PathBuf,
    pub flavor_nodes: PathBuf,
    pub flavor_edges: PathBuf,
    pub aroma_wheel: PathBuf,
}

fn review_text(item: &Item, rng: &mut ChaCha8Rng, wheel_words: bool) -> String {
    let mut words: Vec<&str> = Vec::new();
    for _ in 0..10 {
        let pool = item.pools[rng.random_range(0..item.pools.len())];
        words.push(pool[rng.random_range(0..pool.len())]);
    }
    for _ in 0..4 {
        words.push(FILLER[rng.random_range(0..FILLER.len())]);
    }
    if wheel_words {
        for _ in 0..2 {
            words.push(WHEEL_WORDS[rng.random_range(0..WHEEL_WORDS.len())]);
        }
    }
    // Light shuffle keeps collocations varied.
    for i in (1..words.len()).rev() {
        let j = rng.random_range(0..=i);
        words.swap(i, j);
    }
    words.join(" ")
}

/// Write the full synthetic dataset into `dir` and return the paths.
pub fn write_demo_dataset(dir: &Path, seed: u64) -> Result<DemoPaths> {
    std::fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let food_reviews = dir.join("food_reviews.csv");
    {
        let mut w = csv::Writer::from_path(&food_reviews)?;
        w.write_record([
            "Id", "ProductId", "UserId", "ProfileName", "HelpfulnessNumerator",
            "HelpfulnessDenominator", "Score", "Time", "Summary", "Text",
        ])?;
        let mut id = 0;
        for item in FOODS {
            for _ in 0..8 {
                id += 1;
                let text = review_text(item, &mut rng, false);
                let summary = review_text(item, &mut rng, false);
                w.write_record([
                    &id.to_string(), item.name, "u1", "taster", "0", "0", "5",
                    "1300000000", &summary, &text,
                ])?;
            }
        }
        w.flush()?;
    }

    let wine_reviews = dir.join("wine_reviews.csv");
    {
        let mut w = csv::Writer::from_path(&wine_reviews)?;
        w.write_record([
            "country", "description", "points", "price", "province", "title", "variety", "winery",
        ])?;
        for item in WINES {
            for _ in 0..8 {
                let text = review_text(item, &mut rng, true);
                w.write_record([
                    "Nowhere", &text, "90", "20", "Somewhere", item.name, "Blend", "Demo Cellars",
                ])?;
            }
        }
        w.flush()?;
    }

    let flavor_nodes = dir.join("flavor_nodes.csv");
    let flavor_edges = dir.join("flavor_edges.csv");
    {
        let mut w = csv::Writer::from_path(&flavor_nodes)?;
        w.write_record(["node_id", "name", "id", "node_type", "is_hub", "category"])?;
        let mut node_id = 0;
        let mut write_node = |name: &str, node_type: &str, is_hub: &str, category: &str| {
            let record = [&node_id.to_string(), name, "", node_type, is_hub, category];
            node_id += 1;
            w.write_record(record)
        };
        for item in FOODS {
            write_node(item.name, "ingredient", "no_hub", item.category)?;
        }
        write_node("butter", "ingredient", "hub", "dairy")?;
        write_node("cream", "ingredient", "hub", "dairy")?;
        write_node("tomato", "ingredient", "no_hub", "vegetable")?;
        write_node("cheese", "ingredient", "no_hub", "dairy")?;
        write_node("diacetyl", "compound", "no_hub", "")?;
        write_node("vanillin", "compound", "no_hub", "")?;
        write_node("capsaicin", "compound", "no_hub", "")?;
        w.flush()?;
    }
    {
        // Node ids from the writing order above: foods 0..9, butter=10,
        // cream=11, tomato=12, cheese=13, diacetyl=14, vanillin=15,
        // capsaicin=16.
        let mut w = csv::Writer::from_path(&flavor_edges)?;
        w.write_record(["id_1", "id_2", "score", "edge_type"])?;
        let ingr_ingr: &[(u32, u32)] = &[
            (0, 9),  // burrito - chili
            (0, 12), // burrito - tomato
            (1, 13), // pizza - cheese
            (1, 12), // pizza - tomato
            (2, 10), // stew - butter
            (2, 3),  // stew - bacon
            (5, 10), // cake - butter
            (5, 11), // cake - cream
            (6, 8),  // tart - pineapple
            (7, 10), // biscuit - butter
            (4, 12), // mackerel - tomato
            (13, 11), // cheese - cream
        ];
        for (a, b) in ingr_ingr {
            w.write_record([&a.to_string(), &b.to_string(), "1.0", "ingr-ingr"])?;
        }
        let hub_compound: &[(u32, u32)] = &[
            (10, 14), // butter - diacetyl
            (10, 15), // butter - vanillin
            (11, 14), // cream - diacetyl
            (11, 15), // cream - vanillin
            (9, 16),  // chili is no hub, but capsaicin must attach somewhere:
        ];
        for (i, (a, b)) in hub_compound.iter().enumerate() {
            // The last entry goes through a hub instead.
            let (a, b) = if i == hub_compound.len() - 1 { (10, *b) } else { (*a, *b) };
            w.write_record([&a.to_string(), &b.to_string(), "", "ingr-fcomp"])?;
        }
        w.flush()?;
    }

    let aroma_wheel = dir.join("aroma_wheel.csv");
    {
        let mut w = csv::Writer::from_path(&aroma_wheel)?;
        w.write_record(["specific", "tier2", "tier1"])?;
        for (specific, tier2, tier1) in [
            ("raspberry", "berry", "fruit"),
            ("cherry", "berry", "fruit"),
            ("lemon", "citrus", "fruit"),
        ] {
            w.write_record([specific, tier2, tier1])?;
        }
        w.flush()?;
    }

    Ok(DemoPaths {
        dir: dir.to_path_buf(),
        food_reviews,
        wine_reviews,
        flavor_nodes,
        flavor_edges,
        aroma_wheel,
    })
}

/// Pipeline config sized for the demo dataset: tiny dimensions, low
/// phrase thresholds, deterministic single worker.
pub fn demo_config(paths: &DemoPaths, out_dir: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig {
        out_dir: out_dir.to_path_buf(),
        ..PipelineConfig::default()
    };
    cfg.food_reviews = Some(paths.food_reviews.clone());
    cfg.wine_reviews = Some(paths.wine_reviews.clone());
    cfg.flavor_nodes = Some(paths.flavor_nodes.clone());
    cfg.flavor_edges = Some(paths.flavor_edges.clone());
    cfg.aroma_wheel = Some(paths.aroma_wheel.clone());
    cfg.corpus_min_count = 2;
    cfg.corpus_score_threshold = 2.0;
    cfg.embed.dim = 24;
    cfg.embed.window = 4;
    cfg.embed.negatives = 3;
    cfg.embed.epochs = 4;
    cfg.embed.initial_lr = 0.05;
    cfg.embed.subsample_t = 0.0;
    cfg.walks.walks_per_node = 20;
    cfg.walks.walk_length = 12;
    cfg.dump_walks = true;
    cfg.graph_train.dim = 24;
    cfg.graph_train.window = 3;
    cfg.graph_train.negatives = 3;
    cfg.graph_train.epochs = 4;
    cfg.graph_train.initial_lr = 0.05;
    cfg.graph_train.subsample_t = 0.0;
    cfg.kmeans_restarts = 4;
    cfg.apply_overrides(None, None);
    cfg
}
