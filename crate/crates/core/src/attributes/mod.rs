//! Node attributes whose walk covariances become graph features.

mod betweenness;
mod spectral;
mod structural;

pub use betweenness::betweenness;
pub use spectral::{second_left_eigenvector, EigenOptions, SecondEigen};
pub use structural::{local_clustering, triangles_per_node};

use crate::dynamics::WalkOperator;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Binary `n × k` matrix with exactly one 1 per row, stored as the column
/// index of each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicator {
    assignment: Vec<usize>,
    columns: usize,
}

impl Indicator {
    pub fn new(assignment: Vec<usize>, columns: usize) -> Result<Self> {
        if columns == 0 {
            return Err(Error::Argument("indicator needs at least one column".into()));
        }
        if let Some(bad) = assignment.iter().find(|&&a| a >= columns) {
            return Err(Error::Argument(format!(
                "category {bad} outside 0..{columns}"
            )));
        }
        Ok(Indicator { assignment, columns })
    }

    /// `H = I`: every vertex is its own category.
    pub fn identity(n: usize) -> Self {
        Indicator {
            assignment: (0..n).collect(),
            columns: n,
        }
    }

    pub fn rows(&self) -> usize {
        self.assignment.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if self.assignment[row] == col {
            1.0
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeData {
    Numeric(Vec<f64>),
    Indicator(Indicator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeValue {
    pub name: String,
    pub data: AttributeData,
}

impl AttributeValue {
    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Self {
        AttributeValue {
            name: name.into(),
            data: AttributeData::Numeric(values),
        }
    }

    pub fn indicator(name: impl Into<String>, h: Indicator) -> Self {
        AttributeValue {
            name: name.into(),
            data: AttributeData::Indicator(h),
        }
    }

    pub fn as_numeric(&self) -> Option<&[f64]> {
        match &self.data {
            AttributeData::Numeric(v) => Some(v),
            AttributeData::Indicator(_) => None,
        }
    }

    pub fn as_indicator(&self) -> Option<&Indicator> {
        match &self.data {
            AttributeData::Indicator(h) => Some(h),
            AttributeData::Numeric(_) => None,
        }
    }
}

/// Vertex strengths of the repaired walk graph. Proportional to `π`, the
/// dominant left eigenvector of `M`.
pub fn degree_attribute(op: &WalkOperator) -> AttributeValue {
    AttributeValue::numeric("deg", op.strengths().to_vec())
}

/// One-hot encoding of node labels; column order follows the sorted,
/// dataset-wide `universe`.
pub fn label_indicator(g: &Graph, universe: &[i64]) -> Result<AttributeValue> {
    let labels = g
        .node_labels()
        .ok_or_else(|| Error::Argument(format!("graph '{}' has no node labels", g.id())))?;
    let assignment = labels
        .iter()
        .map(|l| {
            universe
                .binary_search(l)
                .map_err(|_| Error::Argument(format!("node label {l} not in label universe")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AttributeValue::indicator("lab", Indicator::new(assignment, universe.len())?))
}

pub fn identity_indicator(n: usize) -> Result<AttributeValue> {
    if n == 0 {
        return Err(Error::Argument("identity indicator needs n >= 1".into()));
    }
    Ok(AttributeValue::indicator("id", Indicator::identity(n)))
}
