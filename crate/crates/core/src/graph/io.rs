//! Plain-text graph files.
//!
//! ```text
//! # optional comment lines
//! 3
//! 0 1 1.0
//! 1 2 0.5
//! ```
//!
//! The first non-comment line is the node count; each following non-empty
//! line is `u v w` with 0-based indices.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::output::write_atomic;

pub fn load_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, &path.display().to_string())
}

/// Parses graph text; `source` names the input in error messages.
pub fn parse_graph(text: &str, source: &str) -> Result<WeightedGraph> {
    let mut n_nodes: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(n) = n_nodes else {
            let n = line.parse::<usize>().map_err(|_| {
                Error::parse(source, lineno, format!("expected node count, got {line:?}"))
            })?;
            n_nodes = Some(n);
            continue;
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                source,
                lineno,
                format!("expected \"u v w\", got {line:?}"),
            ));
        }
        let u = fields[0]
            .parse::<usize>()
            .map_err(|_| Error::parse(source, lineno, format!("bad node index {:?}", fields[0])))?;
        let v = fields[1]
            .parse::<usize>()
            .map_err(|_| Error::parse(source, lineno, format!("bad node index {:?}", fields[1])))?;
        let w = fields[2]
            .parse::<f64>()
            .map_err(|_| Error::parse(source, lineno, format!("bad weight {:?}", fields[2])))?;
        let edge = WeightedGraph::check_edge(n, u, v, w).map_err(|e| match e {
            Error::Parameter(msg) => Error::parse(source, lineno, msg),
            other => other,
        })?;
        edges.push((edge.u, edge.v, edge.w));
    }
    let n = n_nodes.ok_or_else(|| Error::parse(source, 1, "missing node count"))?;
    WeightedGraph::new(n, edges).map_err(|e| match e {
        Error::Parameter(msg) => Error::parse(source, 0, msg),
        other => other,
    })
}

pub(crate) fn to_text(g: &WeightedGraph) -> String {
    let mut out = String::with_capacity(16 * (g.n_edges() + 1));
    let _ = writeln!(out, "{}", g.n_nodes());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {:?}", e.u, e.v, e.w);
    }
    out
}

/// Writes `g` to `path` atomically.
pub fn save_graph(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), to_text(g).as_bytes())
}

pub fn write_graph(g: &WeightedGraph, mut w: impl std::io::Write) -> std::io::Result<()> {
    w.write_all(to_text(g).as_bytes())
}

pub fn load_latent(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_latent(&text, &path.display().to_string())
}

/// Latent-matrix CSV: one row of reals per item, no header.
pub fn parse_latent(text: &str, source: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(source, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if *width.get_or_insert(record.len()) != record.len() {
            return Err(Error::parse(source, line, "ragged row"));
        }
        for field in record.iter() {
            let x: f64 = field
                .parse()
                .map_err(|_| Error::parse(source, line, format!("bad number {field:?}")))?;
            if !x.is_finite() {
                return Err(Error::parse(source, line, "non-finite value"));
            }
            values.push(x);
        }
        rows += 1;
    }
    let cols = width.ok_or_else(|| Error::parse(source, 1, "empty latent matrix"))?;
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

/// CSV text with one matrix row per line.
pub fn latent_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let fields: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}
