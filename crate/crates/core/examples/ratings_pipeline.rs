//! Ratings to a recommendation bandit: filter, factorise, build a kNN item
//! graph from one part of the data, take rewards from another, then play.
//!
//!     cargo run --release --example ratings_pipeline [ratings-file]
//!
//! Without a file a low-rank synthetic MovieLens-style table is used.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use spectral_bandits::bandit::{AlgoConfig, Algorithm};
use spectral_bandits::basis::SpectralBasis;
use spectral_bandits::data::{ingest, load_ratings, parse_ratings, IngestConfig, Thresholds};
use spectral_bandits::effdim::smoothness;
use spectral_bandits::env::{compare, summarize, CompareSpec, EnvSpec};
use spectral_bandits::rng;

fn synthetic() -> String {
    let mut r = rng::seeded(1);
    let taste = |r: &mut rng::SimRng| {
        [
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
        ]
    };
    let users: Vec<[f64; 3]> = (0..300).map(|_| taste(&mut r)).collect();
    let items: Vec<[f64; 3]> = (0..150).map(|_| taste(&mut r)).collect();
    let mut text = String::new();
    for (u, pu) in users.iter().enumerate() {
        for (i, pi) in items.iter().enumerate() {
            if r.random::<f64>() < 0.3 {
                let score: f64 = pu.iter().zip(pi).map(|(a, b)| a * b).sum();
                let stars = (3.0 + 1.5 * score + r.random_range(-0.5..0.5))
                    .round()
                    .clamp(1.0, 5.0);
                writeln!(text, "{}::{}::{stars}::0", u + 1, i + 1).unwrap();
            }
        }
    }
    text
}

fn main() -> spectral_bandits::Result<()> {
    let thresholds = Thresholds {
        min_item_ratings: 20,
        min_user_ratings: 10,
    };
    let table = match std::env::args().nth(1) {
        Some(path) => load_ratings(path, thresholds)?,
        None => parse_ratings(&synthetic(), "synthetic", thresholds)?,
    };
    println!(
        "{} users, {} items, {} ratings",
        table.n_users(),
        table.n_items(),
        table.len()
    );

    let mut cfg = IngestConfig {
        n_users: 20,
        ..IngestConfig::default()
    };
    cfg.als.rank = 5;
    let out = ingest(&table, &cfg)?;
    println!(
        "split model/tuning/graph = {:?}; kNN graph has {} edges; ALS rmse {:.3} (graph part), {:.3} (model part)",
        out.split_sizes,
        out.graph.n_edges(),
        out.graph_factors.rmse(),
        out.reward_factors.rmse()
    );

    let basis = SpectralBasis::from_graph(&out.graph, 0.01, None)?;
    let f = out.rewards[0].clone();
    println!(
        "user {}: reward smoothness fᵀLf = {:.2} over {} items",
        table.user_id(out.users[0]),
        smoothness(&out.graph, f.as_slice())?,
        f.len()
    );
    let spec = CompareSpec {
        env: EnvSpec {
            rewards: Some(Arc::new(f)),
            ..EnvSpec::default()
        },
        horizon: 100,
        seeds: (0..5).collect(),
        configs: vec![
            AlgoConfig::new(Algorithm::SpectralUcb, 0.01, 0.1),
            AlgoConfig::new(Algorithm::SpectralTs, 0.01, 0.1),
            AlgoConfig::new(Algorithm::LinUcb, 0.1, 0.1),
            AlgoConfig::new(Algorithm::LinearTs, 0.1, 0.1),
        ],
        check_invariants: false,
        graph_hash: None,
    };
    for s in summarize(&compare(&basis, &basis, &spec)?) {
        println!(
            "  {:<14} {:>7.2} ± {:.2}",
            s.algorithm, s.mean_regret, s.stderr
        );
    }
    Ok(())
}
