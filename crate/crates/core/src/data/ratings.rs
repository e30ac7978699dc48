use std::collections::{HashMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rating {
    pub user: usize,
    pub item: usize,
    pub value: f64,
}

/// Sparse ratings with dense user and item indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsTable {
    ratings: Vec<Rating>,
    user_ids: Vec<String>,
    item_ids: Vec<String>,
}

/// Minimum number of ratings a retained item / user must have.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Thresholds {
    pub min_item_ratings: usize,
    pub min_user_ratings: usize,
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains("::") {
        line.split("::").map(str::trim).collect()
    } else if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

pub fn load_ratings(path: impl AsRef<Path>, thresholds: Thresholds) -> Result<RatingsTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ratings(&text, &path.display().to_string(), thresholds)
}

/// Parses `user<TAB>item<TAB>rating` lines (or MovieLens `::` lines; extra
/// trailing fields such as timestamps are ignored). Repeated `(user, item)`
/// pairs keep their first rating.
pub fn parse_ratings(text: &str, source: &str, thresholds: Thresholds) -> Result<RatingsTable> {
    let mut seen = HashSet::new();
    let mut raw: Vec<(String, String, f64)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed);
        if fields.len() < 3 || fields[..3].iter().any(|f| f.is_empty()) {
            return Err(Error::parse(
                source,
                i + 1,
                "expected user, item and rating fields",
            ));
        }
        let value: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(source, i + 1, format!("bad rating {:?}", fields[2])))?;
        if !value.is_finite() {
            return Err(Error::parse(source, i + 1, "rating is not finite"));
        }
        let key = (fields[0].to_string(), fields[1].to_string());
        if seen.insert(key.clone()) {
            raw.push((key.0, key.1, value));
        }
    }
    let raw = filter_to_fixpoint(raw, thresholds);
    if raw.is_empty() {
        return Err(Error::Data(format!(
            "{source}: no ratings left after filtering"
        )));
    }
    Ok(RatingsTable::from_raw(raw))
}

/// Drops sparse items, then sparse users, until nothing changes.
fn filter_to_fixpoint(
    mut raw: Vec<(String, String, f64)>,
    thresholds: Thresholds,
) -> Vec<(String, String, f64)> {
    loop {
        let before = raw.len();
        let mut item_counts: HashMap<&str, usize> = HashMap::new();
        for (_, item, _) in &raw {
            *item_counts.entry(item).or_default() += 1;
        }
        let keep_item: HashSet<String> = item_counts
            .into_iter()
            .filter(|&(_, c)| c >= thresholds.min_item_ratings)
            .map(|(k, _)| k.to_string())
            .collect();
        raw.retain(|(_, item, _)| keep_item.contains(item));
        let mut user_counts: HashMap<&str, usize> = HashMap::new();
        for (user, _, _) in &raw {
            *user_counts.entry(user).or_default() += 1;
        }
        let keep_user: HashSet<String> = user_counts
            .into_iter()
            .filter(|&(_, c)| c >= thresholds.min_user_ratings)
            .map(|(k, _)| k.to_string())
            .collect();
        raw.retain(|(user, _, _)| keep_user.contains(user));
        if raw.len() == before {
            return raw;
        }
    }
}

impl RatingsTable {
    /// Indices follow first appearance.
    fn from_raw(raw: Vec<(String, String, f64)>) -> Self {
        let mut user_index = HashMap::new();
        let mut item_index = HashMap::new();
        let mut user_ids = Vec::new();
        let mut item_ids = Vec::new();
        let ratings = raw
            .into_iter()
            .map(|(u, i, value)| {
                let user = *user_index.entry(u.clone()).or_insert_with(|| {
                    user_ids.push(u);
                    user_ids.len() - 1
                });
                let item = *item_index.entry(i.clone()).or_insert_with(|| {
                    item_ids.push(i);
                    item_ids.len() - 1
                });
                Rating { user, item, value }
            })
            .collect();
        Self {
            ratings,
            user_ids,
            item_ids,
        }
    }

    /// Table over explicit dense indices.
    pub fn from_ratings(n_users: usize, n_items: usize, ratings: Vec<Rating>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &ratings {
            if r.user >= n_users || r.item >= n_items {
                return Err(Error::param(format!(
                    "rating ({}, {}) out of range",
                    r.user, r.item
                )));
            }
            if !seen.insert((r.user, r.item)) {
                return Err(Error::param(format!(
                    "duplicate rating ({}, {})",
                    r.user, r.item
                )));
            }
        }
        Ok(Self {
            ratings,
            user_ids: (0..n_users).map(|i| i.to_string()).collect(),
            item_ids: (0..n_items).map(|i| i.to_string()).collect(),
        })
    }

    pub fn ratings(&self) -> &[Rating] {
        &self.ratings
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn n_users(&self) -> usize {
        self.user_ids.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_ids.len()
    }

    /// Original identifier of dense user `u`.
    pub fn user_id(&self, u: usize) -> &str {
        &self.user_ids[u]
    }

    pub fn item_id(&self, i: usize) -> &str {
        &self.item_ids[i]
    }

    fn with_ratings(&self, ratings: Vec<Rating>) -> Self {
        Self {
            ratings,
            user_ids: self.user_ids.clone(),
            item_ids: self.item_ids.clone(),
        }
    }
}

/// Disjoint thirds of a table. All parts keep the full index maps.
#[derive(Debug, Clone)]
pub struct Split {
    /// Source of the reward vectors.
    pub model: RatingsTable,
    /// Held out for parameter tuning.
    pub tuning: RatingsTable,
    /// Source of the item similarity graph.
    pub graph: RatingsTable,
}

/// Uniformly random partition into three parts whose sizes differ by at
/// most one.
pub fn three_way_split(table: &RatingsTable, seed: u64) -> Split {
    let mut order: Vec<usize> = (0..table.len()).collect();
    order.shuffle(&mut rng::seeded(seed));
    let mut parts: [Vec<Rating>; 3] = Default::default();
    for (k, &idx) in order.iter().enumerate() {
        parts[k % 3].push(table.ratings[idx]);
    }
    let [model, tuning, graph] = parts;
    Split {
        model: table.with_ratings(model),
        tuning: table.with_ratings(tuning),
        graph: table.with_ratings(graph),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn zero_thresholds_keep_everything() {
        let t = parse_ratings("a\tx\t1\nb\tx\t2\nb\ty\t3\n", "t", Thresholds::default()).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!((t.n_users(), t.n_items()), (2, 2));
    }

    #[test]
    fn drops_sparse_item_and_reindexes() {
        let text = "u0\ti0\t1\nu0\ti1\t2\nu1\ti1\t3\nu1\ti2\t4\nu2\ti2\t5\nu2\ti1\t1\n";
        let th = Thresholds {
            min_item_ratings: 2,
            min_user_ratings: 0,
        };
        let t = parse_ratings(text, "t", th).unwrap();
        assert_eq!(t.n_items(), 2);
        assert_eq!(t.item_id(0), "i1");
        assert_eq!(t.item_id(1), "i2");
        assert!(t.ratings().iter().all(|r| r.item < 2));
        assert_eq!(t.len(), 5);
    }

    #[test]
    fn filtering_cascades_to_fixpoint() {
        // dropping i2 leaves u1 with a single rating, which then drops i1's count
        let text = "u0\ti0\t1\nu0\ti1\t1\nu1\ti1\t1\nu1\ti2\t1\nu2\ti0\t1\nu2\ti3\t1\nu3\ti3\t1\nu3\ti0\t1\n";
        let th = Thresholds {
            min_item_ratings: 2,
            min_user_ratings: 2,
        };
        let t = parse_ratings(text, "t", th).unwrap();
        let mut users: Vec<&str> = (0..t.n_users()).map(|u| t.user_id(u)).collect();
        users.sort();
        assert_eq!(users, ["u2", "u3"]);
        assert_eq!(t.n_items(), 2);
    }

    #[test]
    fn movielens_separator_and_errors() {
        let t = parse_ratings(
            "1::10::5::978300760\n2::10::3::978300761\n",
            "ml",
            Thresholds::default(),
        )
        .unwrap();
        assert_eq!(t.len(), 2);
        let err = parse_ratings("1\t2\t3\n1\t2\n", "bad.txt", Thresholds::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_ratings("1\t2\tfive\n", "bad.txt", Thresholds::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let th = Thresholds {
            min_item_ratings: 5,
            min_user_ratings: 0,
        };
        assert!(matches!(
            parse_ratings("1\t2\t3\n", "x", th),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn thousand_line_sample_recount() {
        let mut rng = rng::seeded(8);
        let mut text = String::new();
        let mut lines = Vec::new();
        for _ in 0..1000 {
            let (u, i) = (rng.random_range(0..60), rng.random_range(0..40));
            let r = rng.random_range(1..=5);
            lines.push((u, i));
            text.push_str(&format!("{u}::{i}::{r}::0\n"));
        }
        let distinct: HashSet<_> = lines.iter().copied().collect();
        let t = parse_ratings(&text, "s", Thresholds::default()).unwrap();
        assert_eq!(t.len(), distinct.len());
    }

    #[test]
    fn split_is_a_partition() {
        let ratings: Vec<Rating> = (0..50)
            .flat_map(|u| {
                (0..7).map(move |i| Rating {
                    user: u,
                    item: i,
                    value: (u * i) as f64,
                })
            })
            .collect();
        let t = RatingsTable::from_ratings(50, 7, ratings).unwrap();
        let s = three_way_split(&t, 5);
        let sizes = [s.model.len(), s.tuning.len(), s.graph.len()];
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 2);
        let mut all: Vec<(usize, usize)> = [&s.model, &s.tuning, &s.graph]
            .iter()
            .flat_map(|p| p.ratings().iter().map(|r| (r.user, r.item)))
            .collect();
        all.sort();
        let mut orig: Vec<(usize, usize)> = t.ratings().iter().map(|r| (r.user, r.item)).collect();
        orig.sort();
        assert_eq!(all, orig);
        let again = three_way_split(&t, 5);
        assert_eq!(again.graph, s.graph);
        assert_ne!(three_way_split(&t, 6).graph, s.graph);
    }
}
