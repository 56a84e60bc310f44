//! Per-graph feature vectors and dataset feature matrices.
//!
//! Column names are `<attr>@<t>` for attribute covariances, `num_nodes` and
//! `num_edges` for globals, and `v<k>@<t>` for per-vertex covariances.

mod config;
mod csv;
mod selection;
mod standardize;

pub use config::{Attribute, FeatureConfig, Family, Selection, CONFIG_KEYS};
pub use csv::{export_csv, import_csv, write_csv};
pub use selection::{column_group, columns_for_groups, greedy_forward_selection, SELECTION_MIN_GAIN};
pub use standardize::{fit_standardizer, Standardizer};

use std::collections::BTreeSet;

use crate::attributes::{
    betweenness, AttributeData, degree_attribute, label_indicator, local_clustering, second_left_eigenvector,
    triangles_per_node,
};
use crate::dynamics::{
    categorical_assortativity, identity_assortativity, numeric_assortativity, vertex_assortativities,
    TimeGrid, WalkOperator,
};
use crate::error::{Error, Result};
use crate::graph::{Dataset, Graph};
use crate::parallel::map_ordered;

pub const NUM_NODES: &str = "num_nodes";
pub const NUM_EDGES: &str = "num_edges";

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub graph_id: String,
    pub values: Vec<f64>,
    /// Columns whose value is not uniquely defined for this graph: the
    /// second eigenvector was degenerate or did not converge.
    pub degenerate: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub column_names: Vec<String>,
    pub rows: Vec<FeatureVector>,
    pub classes: Vec<usize>,
    pub standardization: Option<Standardizer>,
}

impl FeatureMatrix {
    pub fn new(column_names: Vec<String>, rows: Vec<FeatureVector>, classes: Vec<usize>) -> Result<Self> {
        if rows.len() != classes.len() {
            return Err(Error::Argument(format!(
                "{} rows but {} class labels",
                rows.len(),
                classes.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.values.len() != column_names.len()) {
            return Err(Error::Argument(format!(
                "row '{}' has {} values for {} columns",
                r.graph_id,
                r.values.len(),
                column_names.len()
            )));
        }
        Ok(FeatureMatrix {
            column_names,
            rows,
            classes,
            standardization: None,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.column_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i].values
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.column_names.iter().position(|c| c == name)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.iter().max().map_or(0, |m| m + 1)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> FeatureMatrix {
        let pick = |v: &[f64]| columns.iter().map(|&c| v[c]).collect();
        let names: Vec<String> = columns.iter().map(|&c| self.column_names[c].clone()).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| FeatureVector {
                graph_id: r.graph_id.clone(),
                values: pick(&r.values),
                degenerate: r.degenerate.iter().filter(|d| names.contains(d)).cloned().collect(),
            })
            .collect();
        FeatureMatrix {
            column_names: names,
            rows,
            classes: self.classes.clone(),
            standardization: self.standardization.as_ref().map(|s| s.select(columns)),
        }
    }
}

/// Column names `extract_features` produces for `cfg` on graphs with `n`
/// vertices (`n` only matters in fixed-vertex mode).
pub fn column_names(cfg: &FeatureConfig, n: usize) -> Vec<String> {
    let mut names = Vec::new();
    if !cfg.fixed_vertex_only {
        for a in &cfg.attributes {
            for t in cfg.ts.times() {
                names.push(format!("{}@{t}", a.prefix()));
            }
        }
        if cfg.include_globals {
            names.push(NUM_NODES.to_string());
            names.push(NUM_EDGES.to_string());
        }
    }
    if cfg.fixed_vertex_mode {
        for k in 0..n {
            for t in cfg.ts.times() {
                names.push(format!("v{k}@{t}"));
            }
        }
    }
    names
}

/// Features of every graph of `ds`, in dataset order.
pub fn extract_features(ds: &Dataset, cfg: &FeatureConfig) -> Result<FeatureMatrix> {
    cfg.validate()?;
    let shared_n = if cfg.fixed_vertex_mode { shared_vertex_count(ds)? } else { 0 };
    if cfg.attributes.contains(&Attribute::NodeLabels) && !cfg.fixed_vertex_only {
        if let Some(g) = ds.graphs.iter().find(|g| g.node_labels().is_none()) {
            return Err(Error::Argument(format!(
                "node_labels requested but dataset '{}' has no node labels (first unlabeled graph '{}')",
                ds.name,
                g.id()
            )));
        }
    }
    let names = column_names(cfg, shared_n);
    let rows = map_ordered(&ds.graphs, |g| graph_features(g, cfg, &ds.label_universe))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(rows.iter().all(|r| r.values.len() == names.len()));
    FeatureMatrix::new(names, rows, ds.class_labels.clone())
}

/// As [`extract_features`] with fixed-vertex mode switched on.
pub fn extract_fixed_vertex_features(ds: &Dataset, cfg: &FeatureConfig) -> Result<FeatureMatrix> {
    let cfg = FeatureConfig {
        fixed_vertex_mode: true,
        ..cfg.clone()
    };
    extract_features(ds, &cfg)
}

fn shared_vertex_count(ds: &Dataset) -> Result<usize> {
    let Some(first) = ds.graphs.first() else {
        return Ok(0);
    };
    let n = first.n();
    if let Some(g) = ds.graphs.iter().find(|g| g.n() != n) {
        return Err(Error::Argument(format!(
            "fixed-vertex features need a shared vertex set: graph '{}' has {} vertices, graph '{}' has {n}",
            g.id(),
            g.n(),
            first.id()
        )));
    }
    Ok(n)
}

/// Features of a single graph; `universe` is the sorted node-label set of
/// its dataset.
pub fn graph_features(g: &Graph, cfg: &FeatureConfig, universe: &[i64]) -> Result<FeatureVector> {
    let binary;
    let g = if cfg.use_weights {
        g
    } else {
        binary = g.binarized();
        &binary
    };
    let op = WalkOperator::new(g)?;
    let ts = &cfg.ts;
    let mut values = Vec::new();
    let mut degenerate = BTreeSet::new();

    if !cfg.fixed_vertex_only {
        for &a in &cfg.attributes {
            let profile = match a {
                Attribute::Degree => numeric_profile(&op, &degree_attribute(&op).data, ts)?,
                Attribute::Clustering => numeric_profile(&op, &local_clustering(g).data, ts)?,
                Attribute::Betweenness => numeric_profile(&op, &betweenness(g).data, ts)?,
                Attribute::Triangles => numeric_profile(&op, &triangles_per_node(g).data, ts)?,
                Attribute::IdentityPartition => identity_assortativity(&op, ts)?,
                Attribute::NodeLabels => {
                    let h = label_indicator(g, universe)?;
                    categorical_assortativity(&op, h.as_indicator().expect("indicator"), ts)?
                }
                Attribute::SecondEigenvector => match second_left_eigenvector(&op, cfg.eigen) {
                    Ok(eig) => {
                        if eig.degenerate {
                            flag(&mut degenerate, a, ts);
                        }
                        numeric_assortativity(&op, eig.vector(), ts)?
                    }
                    Err(Error::Convergence { .. }) | Err(Error::Argument(_)) => {
                        flag(&mut degenerate, a, ts);
                        vec![0.0; ts.len()]
                    }
                    Err(e) => return Err(e),
                },
            };
            values.extend(profile);
        }
        if cfg.include_globals {
            values.push(g.n() as f64);
            values.push(g.num_edges() as f64);
        }
    }
    if cfg.fixed_vertex_mode {
        let per_time = vertex_assortativities(&op, ts)?;
        for k in 0..g.n() {
            values.extend(per_time.iter().map(|row| row[k]));
        }
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Degenerate(format!(
            "graph '{}' produced non-finite feature {}",
            g.id(),
            column_names(cfg, g.n())[bad]
        )));
    }
    Ok(FeatureVector {
        graph_id: g.id().to_string(),
        values,
        degenerate,
    })
}

fn numeric_profile(op: &WalkOperator, data: &AttributeData, ts: &TimeGrid) -> Result<Vec<f64>> {
    match data {
        AttributeData::Numeric(v) => numeric_assortativity(op, v, ts),
        AttributeData::Indicator(h) => categorical_assortativity(op, h, ts),
    }
}

fn flag(set: &mut BTreeSet<String>, a: Attribute, ts: &TimeGrid) {
    for t in ts.times() {
        set.insert(format!("{}@{t}", a.prefix()));
    }
}
