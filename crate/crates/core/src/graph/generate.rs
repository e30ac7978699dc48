use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Random and structured graph families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphModel {
    /// Erdős–Rényi: every pair independently with probability `p`.
    ErdosRenyi { p: f64 },
    /// Barabási–Albert growth from `k0` isolated seed nodes, each new node
    /// attaching to `m` distinct existing nodes.
    BarabasiAlbert { m: usize, k0: usize },
    /// Most-square 2-D grid with 4-neighbourhood edges.
    Lattice,
    /// `k` disjoint cliques of `m` nodes each.
    Blocks { k: usize, m: usize },
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphModel::ErdosRenyi { p } => write!(f, "er(p={p})"),
            GraphModel::BarabasiAlbert { m, k0 } => write!(f, "ba(m={m},k0={k0})"),
            GraphModel::Lattice => write!(f, "lattice"),
            GraphModel::Blocks { k, m } => write!(f, "blocks(K={k},M={m})"),
        }
    }
}

impl FromStr for GraphModel {
    type Err = Error;

    /// Accepts `er`, `ba`, `lattice`, `blocks` with defaults, or the
    /// parameterised forms printed by `Display`-like syntax, e.g.
    /// `er:0.005`, `ba:2:3`, `blocks:5:20`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize, default: f64| -> Result<f64> {
            match args.get(i) {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("bad number {a:?} in graph model {s:?}"))),
            }
        };
        match name {
            "er" => Ok(GraphModel::ErdosRenyi { p: num(0, 0.005)? }),
            "ba" => Ok(GraphModel::BarabasiAlbert {
                m: num(0, 2.0)? as usize,
                k0: num(1, 3.0)? as usize,
            }),
            "lattice" => Ok(GraphModel::Lattice),
            "blocks" => Ok(GraphModel::Blocks {
                k: num(0, 2.0)? as usize,
                m: num(1, 2.0)? as usize,
            }),
            other => Err(Error::param(format!("unknown graph model {other:?}"))),
        }
    }
}

/// Generates a unit-weight graph on `n_nodes` nodes. Deterministic in `seed`.
pub fn generate(model: GraphModel, n_nodes: usize, seed: u64) -> Result<WeightedGraph> {
    if n_nodes < 2 {
        return Err(Error::param(format!(
            "need at least 2 nodes, got {n_nodes}"
        )));
    }
    let edges = match model {
        GraphModel::ErdosRenyi { p } => {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::param(format!(
                    "ER probability must be in (0, 1], got {p}"
                )));
            }
            erdos_renyi(n_nodes, p, seed)
        }
        GraphModel::BarabasiAlbert { m, k0 } => {
            if m < 1 || m > k0 {
                return Err(Error::param(format!(
                    "BA requires 1 <= m <= k0, got m={m}, k0={k0}"
                )));
            }
            if k0 > n_nodes {
                return Err(Error::param(format!(
                    "BA seed core k0={k0} exceeds n={n_nodes}"
                )));
            }
            barabasi_albert(n_nodes, m, k0, seed)
        }
        GraphModel::Lattice => lattice(n_nodes),
        GraphModel::Blocks { k, m } => {
            if k == 0 || m == 0 || k * m != n_nodes {
                return Err(Error::param(format!(
                    "blocks require K*M = n, got K={k}, M={m}, n={n_nodes}"
                )));
            }
            blocks(k, m)
        }
    };
    WeightedGraph::new(n_nodes, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
}

fn erdos_renyi(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

fn barabasi_albert(n: usize, m: usize, k0: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = rng::seeded(seed);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::with_capacity((n - k0) * m);
    let mut chosen = Vec::with_capacity(m);
    for new in k0..n {
        chosen.clear();
        // attachment weight degree+1 so the isolated core is reachable
        let mut total: usize = (0..new).map(|j| degree[j] + 1).sum();
        for _ in 0..m.min(new) {
            let mut target = rng.random_range(0..total);
            let mut pick = 0;
            for (j, d) in degree.iter().enumerate().take(new) {
                if chosen.contains(&j) {
                    continue;
                }
                let w = d + 1;
                if target < w {
                    pick = j;
                    break;
                }
                target -= w;
            }
            total -= degree[pick] + 1;
            chosen.push(pick);
        }
        for &j in &chosen {
            degree[j] += 1;
            degree[new] += 1;
            edges.push((j, new));
        }
    }
    edges
}

/// Grid of width `ceil(sqrt(n))`; the last row may be short.
pub(crate) fn lattice_shape(n: usize) -> (usize, usize) {
    let cols = (n as f64).sqrt().ceil() as usize;
    let cols = if (cols - 1) * (cols - 1) >= n {
        cols - 1
    } else {
        cols
    };
    let cols = cols.max(1);
    (n.div_ceil(cols), cols)
}

fn lattice(n: usize) -> Vec<(usize, usize)> {
    let (_, cols) = lattice_shape(n);
    let mut edges = Vec::new();
    for i in 0..n {
        if (i % cols) + 1 < cols && i + 1 < n {
            edges.push((i, i + 1));
        }
        if i + cols < n {
            edges.push((i, i + cols));
        }
    }
    edges
}

fn blocks(k: usize, m: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(k * m * (m - 1) / 2);
    for b in 0..k {
        let base = b * m;
        for i in 0..m {
            for j in (i + 1)..m {
                edges.push((base + i, base + j));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_two_triangles() {
        let g = generate(GraphModel::Blocks { k: 2, m: 3 }, 6, 0).unwrap();
        assert_eq!(g.n_edges(), 6);
        assert_eq!(g.n_components(), 2);
        assert!(g.degrees().iter().all(|&d| d == 2.0));
    }

    #[test]
    fn blocks_inconsistent_sizes() {
        assert!(generate(GraphModel::Blocks { k: 2, m: 3 }, 7, 0).is_err());
    }

    #[test]
    fn er_p1_is_complete() {
        let g = generate(GraphModel::ErdosRenyi { p: 1.0 }, 4, 9).unwrap();
        assert_eq!(g.n_edges(), 6);
    }

    #[test]
    fn er_rejects_bad_p() {
        assert!(generate(GraphModel::ErdosRenyi { p: 0.0 }, 4, 9).is_err());
        assert!(generate(GraphModel::ErdosRenyi { p: 1.5 }, 4, 9).is_err());
    }

    #[test]
    fn ba_m1_single_seed_is_tree() {
        for seed in 0..20 {
            let g = generate(GraphModel::BarabasiAlbert { m: 1, k0: 1 }, 5, seed).unwrap();
            assert_eq!(g.n_edges(), 4);
            assert_eq!(g.n_components(), 1);
        }
    }

    #[test]
    fn ba_edge_count() {
        let g = generate(GraphModel::BarabasiAlbert { m: 2, k0: 3 }, 100, 4).unwrap();
        assert_eq!(g.n_edges(), 97 * 2);
        assert!(generate(GraphModel::BarabasiAlbert { m: 4, k0: 3 }, 10, 0).is_err());
    }

    #[test]
    fn lattice_shapes() {
        assert_eq!(lattice_shape(500), (22, 23));
        assert_eq!(lattice_shape(16), (4, 4));
        assert_eq!(lattice_shape(2), (1, 2));
        let g = generate(GraphModel::Lattice, 9, 0).unwrap();
        // 3x3 grid: 6 horizontal + 6 vertical
        assert_eq!(g.n_edges(), 12);
        let g = generate(GraphModel::Lattice, 500, 0).unwrap();
        assert_eq!(g.n_components(), 1);
    }

    #[test]
    fn generators_are_reproducible() {
        let models = [
            GraphModel::ErdosRenyi { p: 0.05 },
            GraphModel::BarabasiAlbert { m: 2, k0: 3 },
        ];
        for model in models {
            let a = generate(model, 80, 11).unwrap();
            let b = generate(model, 80, 11).unwrap();
            let c = generate(model, 80, 12).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn model_parsing() {
        assert_eq!(
            "er:0.3".parse::<GraphModel>().unwrap(),
            GraphModel::ErdosRenyi { p: 0.3 }
        );
        assert_eq!(
            "ba".parse::<GraphModel>().unwrap(),
            GraphModel::BarabasiAlbert { m: 2, k0: 3 }
        );
        assert_eq!(
            "blocks:5:20".parse::<GraphModel>().unwrap(),
            GraphModel::Blocks { k: 5, m: 20 }
        );
        assert!("torus".parse::<GraphModel>().is_err());
    }
}
