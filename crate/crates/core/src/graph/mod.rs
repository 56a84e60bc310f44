//! Graph and dataset representation.
//!
//! Graphs are undirected and weighted, stored as a canonical edge list with
//! `u < v` sorted lexicographically. Self-loops never appear here; isolated
//! vertices are repaired later by [`crate::dynamics::WalkOperator`].

mod diagnostics;
mod generators;
mod synth;
mod tu;
mod weighted;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

pub use diagnostics::{diagnose, GraphDiagnostics};
pub use generators::{generate_topology, Topology};
pub use synth::{generate_fixed_vertex_dataset, generate_planted_signal_dataset, FixedVertexParams, PlantedSignalParams};
pub use tu::{load_tu_dataset, save_tu_dataset};
pub use weighted::{load_weighted_graphs, load_weighted_graphs_with_classes, save_weighted_graphs, sidecar_path};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    node_labels: Option<Vec<i64>>,
    id: String,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Endpoint order is normalized;
    /// self-loops, duplicates, out-of-range endpoints and non-positive
    /// weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::Argument(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::Argument(format!("self-loop on vertex {a}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Argument(format!("edge ({a}, {b}) has non-positive weight {w}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { u, v, weight: w });
        }
        out.sort_by(|x, y| (x.u, x.v).cmp(&(y.u, y.v)));
        if let Some(pair) = out.windows(2).find(|p| p[0].u == p[1].u && p[0].v == p[1].v) {
            return Err(Error::Argument(format!(
                "duplicate edge ({}, {})",
                pair[0].u, pair[0].v
            )));
        }
        Ok(Graph {
            n,
            edges: out,
            node_labels: None,
            id: String::new(),
        })
    }

    /// Unweighted convenience constructor.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Graph::new(n, pairs.iter().map(|&(u, v)| (u, v, 1.0)))
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Argument(format!(
                "{} node labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn node_labels(&self) -> Option<&[i64]> {
        self.node_labels.as_deref()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|e| e.weight != 1.0)
    }

    /// Copy with every weight set to 1.
    pub fn binarized(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge { weight: 1.0, ..*e })
                .collect(),
            node_labels: self.node_labels.clone(),
            id: self.id.clone(),
        }
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Argument("permutation length differs from vertex count".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Argument("not a permutation".into()));
            }
        }
        let mut g = Graph::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.weight)),
        )?;
        if let Some(labels) = &self.node_labels {
            let mut moved = vec![0; self.n];
            for (i, &l) in labels.iter().enumerate() {
                moved[perm[i]] = l;
            }
            g.node_labels = Some(moved);
        }
        g.id = self.id.clone();
        Ok(g)
    }

    /// Sum of incident edge weights per vertex.
    pub fn strengths(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.u] += e.weight;
            d[e.v] += e.weight;
        }
        d
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_graph(self)
    }
}

/// Compressed sparse row adjacency with sorted neighbor lists.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Adjacency {
    fn from_graph(g: &Graph) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); g.n()];
        for e in g.edges() {
            rows[e.u].push((e.v, e.weight));
            rows[e.v].push((e.u, e.weight));
        }
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut targets = Vec::with_capacity(2 * g.num_edges());
        let mut weights = Vec::with_capacity(2 * g.num_edges());
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(j, _)| j);
            for (j, w) in row {
                targets.push(j);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        Adjacency {
            offsets,
            targets,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn weights(&self, i: usize) -> &[f64] {
        &self.weights[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }
}

/// A labeled collection of graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<Graph>,
    /// Class id per graph, in `0..num_classes()`.
    pub class_labels: Vec<usize>,
    /// Sorted node-label values seen anywhere in the dataset.
    pub label_universe: Vec<i64>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, graphs: Vec<Graph>, class_labels: Vec<usize>) -> Result<Self> {
        if graphs.len() != class_labels.len() {
            return Err(Error::Argument(format!(
                "{} graphs but {} class labels",
                graphs.len(),
                class_labels.len()
            )));
        }
        let universe: BTreeSet<i64> = graphs
            .iter()
            .filter_map(|g| g.node_labels())
            .flatten()
            .copied()
            .collect();
        Ok(Dataset {
            name: name.into(),
            graphs,
            class_labels,
            label_universe: universe.into_iter().collect(),
        })
    }

    /// Remaps raw class values to `0..C` following their sorted order.
    pub fn from_raw_classes(name: impl Into<String>, graphs: Vec<Graph>, raw: &[i64]) -> Result<Self> {
        Dataset::new(name, graphs, remap_sorted(raw))
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.class_labels.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn has_node_labels(&self) -> bool {
        !self.graphs.is_empty() && self.graphs.iter().all(|g| g.node_labels().is_some())
    }

    pub fn stats(&self) -> DatasetStats {
        let count = self.graphs.len().max(1) as f64;
        DatasetStats {
            name: self.name.clone(),
            num_graphs: self.graphs.len(),
            classes: self.class_labels.iter().collect::<BTreeSet<_>>().len(),
            node_labels: self.label_universe.len(),
            avg_nodes: self.graphs.iter().map(|g| g.n() as f64).sum::<f64>() / count,
            avg_edges: self.graphs.iter().map(|g| g.num_edges() as f64).sum::<f64>() / count,
        }
    }
}

pub(crate) fn remap_sorted(raw: &[i64]) -> Vec<usize> {
    let sorted: Vec<i64> = raw.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    raw.iter()
        .map(|r| sorted.binary_search(r).expect("value taken from the same slice"))
        .collect()
}

/// Summary statistics in the layout of the usual benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub name: String,
    pub num_graphs: usize,
    pub classes: usize,
    pub node_labels: usize,
    pub avg_nodes: f64,
    pub avg_edges: f64,
}

impl DatasetStats {
    pub const CSV_HEADER: &'static str = "name,num_graphs,classes,node_labels,avg_nodes,avg_edges";
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{:.2},{:.2}",
            self.name, self.num_graphs, self.classes, self.node_labels, self.avg_nodes, self.avg_edges
        )
    }
}

/// Loads dataset `name` from `dir`: the TU layout when `{name}_A.txt`
/// exists, otherwise the weighted edge format `{name}.edges`.
pub fn load_dataset(dir: impl AsRef<Path>, name: &str) -> Result<Dataset> {
    let dir = dir.as_ref();
    let tu = dir.join(format!("{name}_A.txt"));
    let edges = dir.join(format!("{name}.edges"));
    if tu.is_file() {
        load_tu_dataset(dir, name)
    } else if edges.is_file() {
        load_weighted_graphs(&edges)
    } else {
        Err(Error::Format {
            file: tu,
            line: None,
            message: format!("missing required file (nor is there a {name}.edges)"),
        })
    }
}
