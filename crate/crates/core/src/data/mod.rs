//! Rating datasets: ingestion, low-rank completion and the item graph.

mod als;
mod pipeline;
mod ratings;

pub use als::{als_factorize, user_reward_vector, AlsConfig, Factorization};
pub use pipeline::{ingest, parse_rewards_csv, IngestConfig, IngestOutput};
pub use ratings::{
    load_ratings, parse_ratings, three_way_split, Rating, RatingsTable, Split, Thresholds,
};
