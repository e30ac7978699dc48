//! Undirected weighted graphs over arm-nodes.
//!
//! A [`WeightedGraph`] is immutable once built: edges are canonicalised to
//! `u < v`, sorted, and validated (positive weights, no self-loops, no
//! duplicate pairs). Everything downstream (Laplacian, spectral basis,
//! smoothness) reads from it.

mod generate;
mod io;
mod knn;

pub use generate::{generate, GraphModel};
pub use io::{
    latent_to_csv, load_graph, load_latent, parse_graph, parse_latent, save_graph, write_graph,
};
pub use knn::{knn_graph, knn_lists};

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_nodes: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Builds a graph from `(u, v, w)` triples in any endpoint order.
    pub fn new(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut out: Vec<Edge> = Vec::new();
        for (a, b, w) in edges {
            out.push(Self::check_edge(n_nodes, a, b, w)?);
        }
        out.sort_by_key(|e| (e.u, e.v));
        if let Some(pair) = out
            .windows(2)
            .find(|p| p[0].u == p[1].u && p[0].v == p[1].v)
        {
            return Err(Error::param(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Self {
            n_nodes,
            edges: out,
        })
    }

    /// Graph with no edges.
    pub fn empty(n_nodes: usize) -> Self {
        Self {
            n_nodes,
            edges: Vec::new(),
        }
    }

    pub(crate) fn check_edge(n_nodes: usize, a: usize, b: usize, w: f64) -> Result<Edge> {
        if a >= n_nodes || b >= n_nodes {
            return Err(Error::param(format!(
                "edge ({a}, {b}) references a node outside 0..{n_nodes}"
            )));
        }
        if a == b {
            return Err(Error::param(format!("self-loop on node {a}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::param(format!(
                "edge ({a}, {b}) has non-positive or non-finite weight {w}"
            )));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge { u, v, w })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n_nodes];
        for e in &self.edges {
            d[e.u] += e.w;
            d[e.v] += e.w;
        }
        d
    }

    /// Combinatorial Laplacian `D - W`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n_nodes;
        let mut lap = DMatrix::zeros(n, n);
        for e in &self.edges {
            lap[(e.u, e.v)] -= e.w;
            lap[(e.v, e.u)] -= e.w;
            lap[(e.u, e.u)] += e.w;
            lap[(e.v, e.v)] += e.w;
        }
        lap
    }

    /// Connected-component label of every node, labels dense from 0 in
    /// order of first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n_nodes);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut label = vec![usize::MAX; self.n_nodes];
        let mut root_label = vec![usize::MAX; self.n_nodes];
        let mut next = 0;
        for (i, slot) in label.iter_mut().enumerate() {
            let r = uf.find(i);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            *slot = root_label[r];
        }
        label
    }

    pub fn n_components(&self) -> usize {
        self.component_labels()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Hex SHA-256 of the canonical text serialisation.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(io::to_text(self).as_bytes());
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}
