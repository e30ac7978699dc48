//! Ratings → completed matrix → item graph and per-user reward vectors.
//!
//! The ratings are split three ways. Item factors fitted on the graph part
//! define a kNN graph; factors fitted on the model part give the rewards, so
//! the graph and the rewards never share ratings.

use std::fmt::Write as _;

use nalgebra::DVector;
use rand::seq::index;

use super::{
    als_factorize, three_way_split, user_reward_vector, AlsConfig, Factorization, RatingsTable,
};
use crate::error::{Error, Result};
use crate::graph::{knn_graph, WeightedGraph};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestConfig {
    pub als: AlsConfig,
    /// Neighbours per item in the similarity graph.
    pub knn_k: usize,
    /// Users for whom reward vectors are emitted.
    pub n_users: usize,
    pub seed: u64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            als: AlsConfig::default(),
            knn_k: 5,
            n_users: 400,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IngestOutput {
    pub graph: WeightedGraph,
    pub graph_factors: Factorization,
    pub reward_factors: Factorization,
    /// Sampled users, ascending dense indices.
    pub users: Vec<usize>,
    /// One reward vector over items per sampled user.
    pub rewards: Vec<DVector<f64>>,
    /// Sizes of the model, tuning and graph parts.
    pub split_sizes: [usize; 3],
}

pub fn ingest(table: &RatingsTable, config: &IngestConfig) -> Result<IngestOutput> {
    if config.n_users == 0 {
        return Err(Error::param("n_users must be positive"));
    }
    if table.n_items() <= config.knn_k {
        return Err(Error::Data(format!(
            "{} items is too few for a {}-NN graph",
            table.n_items(),
            config.knn_k
        )));
    }
    let split = three_way_split(table, config.seed);
    let graph_factors = als_factorize(
        &split.graph,
        &AlsConfig {
            seed: config.seed.wrapping_add(1),
            ..config.als
        },
    )?;
    let graph = knn_graph(&graph_factors.item_factors, config.knn_k)?;
    let reward_factors = als_factorize(
        &split.model,
        &AlsConfig {
            seed: config.seed.wrapping_add(2),
            ..config.als
        },
    )?;
    let n_users = config.n_users.min(table.n_users());
    let mut users =
        index::sample(&mut rng::stream(config.seed, 3), table.n_users(), n_users).into_vec();
    users.sort_unstable();
    let rewards = users
        .iter()
        .map(|&u| user_reward_vector(&reward_factors, u))
        .collect::<Result<_>>()?;
    Ok(IngestOutput {
        graph,
        graph_factors,
        reward_factors,
        users,
        rewards,
        split_sizes: [split.model.len(), split.tuning.len(), split.graph.len()],
    })
}

impl IngestOutput {
    /// `user,item,reward` over dense indices; items are graph nodes.
    pub fn rewards_csv(&self) -> String {
        let mut out = String::from("user,item,reward\n");
        for (&u, f) in self.users.iter().zip(&self.rewards) {
            for (item, r) in f.iter().enumerate() {
                let _ = writeln!(out, "{u},{item},{r:?}");
            }
        }
        out
    }
}

/// Reads a `user,item,reward` CSV back into per-user reward vectors.
pub fn parse_rewards_csv(text: &str, source: &str) -> Result<Vec<(usize, DVector<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut by_user: std::collections::BTreeMap<usize, Vec<(usize, f64)>> = Default::default();
    for record in reader.records() {
        let record = record.map_err(|e| {
            Error::parse(
                source,
                e.position().map_or(0, |p| p.line() as usize),
                e.to_string(),
            )
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::parse(source, line, "expected user,item,reward"));
        }
        let user: usize = record[0]
            .parse()
            .map_err(|_| Error::parse(source, line, "bad user"))?;
        let item: usize = record[1]
            .parse()
            .map_err(|_| Error::parse(source, line, "bad item"))?;
        let reward: f64 = record[2]
            .parse()
            .map_err(|_| Error::parse(source, line, "bad reward"))?;
        by_user.entry(user).or_default().push((item, reward));
    }
    by_user
        .into_iter()
        .map(|(user, entries)| {
            let n = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
            let mut f = DVector::from_element(n, f64::NAN);
            for (item, r) in entries {
                f[item] = r;
            }
            if f.iter().any(|x| x.is_nan()) {
                return Err(Error::Data(format!(
                    "{source}: user {user} is missing items"
                )));
            }
            Ok((user, f))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Rating;
    use crate::effdim::smoothness;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// Users and items with 2-d latent positions; ratings are noisy inner
    /// products observed at random.
    pub(crate) fn synthetic_table(
        n_users: usize,
        n_items: usize,
        density: f64,
        seed: u64,
    ) -> RatingsTable {
        let mut r = rng::seeded(seed);
        let users: Vec<[f64; 2]> = (0..n_users)
            .map(|_| [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)])
            .collect();
        let items: Vec<[f64; 2]> = (0..n_items)
            .map(|_| [r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)])
            .collect();
        let mut ratings = Vec::new();
        for (u, pu) in users.iter().enumerate() {
            for (i, pi) in items.iter().enumerate() {
                if r.random::<f64>() < density {
                    let value =
                        3.0 + 2.0 * (pu[0] * pi[0] + pu[1] * pi[1]) + r.random_range(-0.1..0.1);
                    ratings.push(Rating {
                        user: u,
                        item: i,
                        value,
                    });
                }
            }
        }
        RatingsTable::from_ratings(n_users, n_items, ratings).unwrap()
    }

    fn config() -> IngestConfig {
        IngestConfig {
            als: AlsConfig {
                rank: 3,
                reg: 0.1,
                sweeps: 10,
                seed: 0,
            },
            knn_k: 5,
            n_users: 10,
            seed: 3,
        }
    }

    #[test]
    fn end_to_end_is_deterministic() {
        let t = synthetic_table(80, 60, 0.5, 1);
        let a = ingest(&t, &config()).unwrap();
        let b = ingest(&t, &config()).unwrap();
        assert_eq!(a.graph.n_nodes(), t.n_items());
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.users, b.users);
        assert_eq!(a.rewards_csv(), b.rewards_csv());
        assert_eq!(a.split_sizes.iter().sum::<usize>(), t.len());
        let parsed = parse_rewards_csv(&a.rewards_csv(), "r").unwrap();
        assert_eq!(parsed.len(), 10);
        assert_eq!(parsed[0].1, a.rewards[0]);
    }

    #[test]
    fn rewards_are_smoother_than_chance() {
        let t = synthetic_table(80, 60, 0.5, 2);
        let out = ingest(&t, &config()).unwrap();
        let mut r = rng::seeded(5);
        for f in &out.rewards {
            let own = smoothness(&out.graph, f.as_slice()).unwrap();
            let mut perm: Vec<f64> = f.iter().copied().collect();
            let mut shuffled: Vec<f64> = (0..100)
                .map(|_| {
                    perm.shuffle(&mut r);
                    smoothness(&out.graph, &perm).unwrap()
                })
                .collect();
            shuffled.sort_by(f64::total_cmp);
            let median = shuffled[50];
            assert!(own <= 10.0 * median, "{own} vs {median}");
        }
    }

    #[test]
    fn too_few_items() {
        let t = synthetic_table(20, 5, 1.0, 3);
        assert!(matches!(ingest(&t, &config()), Err(Error::Data(_))));
    }
}
