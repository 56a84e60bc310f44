//! Feature configuration and its `key = value` text form.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::attributes::EigenOptions;
use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};

/// Candidate node attributes, in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attribute {
    Degree,
    SecondEigenvector,
    Clustering,
    Betweenness,
    Triangles,
    IdentityPartition,
    NodeLabels,
}

impl Attribute {
    pub const ALL: [Attribute; 7] = [
        Attribute::Degree,
        Attribute::SecondEigenvector,
        Attribute::Clustering,
        Attribute::Betweenness,
        Attribute::Triangles,
        Attribute::IdentityPartition,
        Attribute::NodeLabels,
    ];

    /// Column prefix, as in `deg@2`.
    pub fn prefix(self) -> &'static str {
        match self {
            Attribute::Degree => "deg",
            Attribute::SecondEigenvector => "eig2",
            Attribute::Clustering => "clust",
            Attribute::Betweenness => "betw",
            Attribute::Triangles => "tri",
            Attribute::IdentityPartition => "id",
            Attribute::NodeLabels => "lab",
        }
    }

    pub fn config_name(self) -> &'static str {
        match self {
            Attribute::Degree => "degree",
            Attribute::SecondEigenvector => "second_eigenvector",
            Attribute::Clustering => "clustering",
            Attribute::Betweenness => "betweenness",
            Attribute::Triangles => "triangles",
            Attribute::IdentityPartition => "identity_partition",
            Attribute::NodeLabels => "node_labels",
        }
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Attribute::ALL
            .into_iter()
            .find(|a| a.config_name() == s || a.prefix() == s)
            .ok_or_else(|| Error::Argument(format!("unknown attribute '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    GreedyForward,
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Selection::All),
            "greedy_forward" => Ok(Selection::GreedyForward),
            _ => Err(Error::Argument(format!("unknown selection '{s}'"))),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selection::All => "all",
            Selection::GreedyForward => "greedy_forward",
        })
    }
}

/// Default attribute pools per dataset family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Bio,
    Social,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bio" => Ok(Family::Bio),
            "social" => Ok(Family::Social),
            _ => Err(Error::Argument(format!("unknown family '{s}' (bio or social)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    pub attributes: BTreeSet<Attribute>,
    pub ts: TimeGrid,
    /// Append `num_nodes` and `num_edges`.
    pub include_globals: bool,
    /// Add one covariance per vertex and lag (graphs must share a vertex set).
    pub fixed_vertex_mode: bool,
    /// With `fixed_vertex_mode`, emit only the per-vertex columns.
    pub fixed_vertex_only: bool,
    /// Use edge weights in the walk; otherwise every edge counts as 1.
    pub use_weights: bool,
    pub selection: Selection,
    pub eigen: EigenOptions,
}

impl FeatureConfig {
    pub fn for_family(family: Family) -> Self {
        use Attribute::*;
        let attributes = match family {
            Family::Bio => [Degree, SecondEigenvector, Clustering, IdentityPartition, NodeLabels]
                .into_iter()
                .collect(),
            Family::Social => [Degree, SecondEigenvector, Clustering, Betweenness, Triangles, IdentityPartition]
                .into_iter()
                .collect(),
        };
        FeatureConfig {
            attributes,
            ts: TimeGrid::default(),
            include_globals: true,
            fixed_vertex_mode: false,
            fixed_vertex_only: false,
            use_weights: true,
            selection: Selection::All,
            eigen: EigenOptions::default(),
        }
    }

    pub fn bio() -> Self {
        Self::for_family(Family::Bio)
    }

    pub fn social() -> Self {
        Self::for_family(Family::Social)
    }

    /// Only the given attributes, default grid, no globals.
    pub fn only(attributes: &[Attribute]) -> Self {
        FeatureConfig {
            attributes: attributes.iter().copied().collect(),
            include_globals: false,
            ..Self::bio()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() && !self.include_globals && !self.fixed_vertex_mode {
            return Err(Error::Argument(
                "feature config selects no attributes, no globals and no per-vertex features".into(),
            ));
        }
        if self.ts.is_empty() && !self.attributes.is_empty() {
            return Err(Error::Argument("time grid is empty".into()));
        }
        if self.fixed_vertex_only && !self.fixed_vertex_mode {
            return Err(Error::Argument("fixed_vertex_only requires fixed_vertex_mode".into()));
        }
        Ok(())
    }

    /// Parses `key = value` lines on top of `base`. A `family` key, wherever
    /// it appears, replaces the base before the other keys are applied.
    pub fn parse(text: &str, base: FeatureConfig) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Argument(format!("config line {}: expected 'key = value'", idx + 1)))?;
            pairs.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
        }
        let mut cfg = base;
        for (_, key, value) in &pairs {
            if key == "family" {
                cfg = FeatureConfig::for_family(value.parse()?);
            }
        }
        for (line, key, value) in pairs {
            let ctx = |e: Error| Error::Argument(format!("config line {line} ({key}): {e}"));
            match key.as_str() {
                "family" => {}
                "attributes" => {
                    cfg.attributes = list(&value)
                        .map(str::parse)
                        .collect::<Result<_>>()
                        .map_err(ctx)?;
                }
                "ts" => {
                    let ts = list(&value)
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|_| Error::Argument(format!("bad time '{t}'")))
                        })
                        .collect::<Result<Vec<_>>>()
                        .map_err(ctx)?;
                    cfg.ts = TimeGrid::new(ts);
                }
                "include_globals" => cfg.include_globals = boolean(&value).map_err(ctx)?,
                "fixed_vertex_mode" => cfg.fixed_vertex_mode = boolean(&value).map_err(ctx)?,
                "fixed_vertex_only" => cfg.fixed_vertex_only = boolean(&value).map_err(ctx)?,
                "use_weights" => cfg.use_weights = boolean(&value).map_err(ctx)?,
                "selection" => cfg.selection = value.parse().map_err(ctx)?,
                "eigen_tol" => {
                    cfg.eigen.tol = value
                        .parse()
                        .map_err(|_| ctx(Error::Argument(format!("bad number '{value}'"))))?
                }
                "eigen_max_iter" => {
                    cfg.eigen.max_iter = value
                        .parse()
                        .map_err(|_| ctx(Error::Argument(format!("bad integer '{value}'"))))?
                }
                "eigen_dense_limit" => {
                    cfg.eigen.dense_limit = value
                        .parse()
                        .map_err(|_| ctx(Error::Argument(format!("bad integer '{value}'"))))?
                }
                other => return Err(Error::Argument(format!("config line {line}: unknown key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let attrs: Vec<&str> = self.attributes.iter().map(|a| a.config_name()).collect();
        let ts: Vec<String> = self.ts.times().iter().map(|t| t.to_string()).collect();
        format!(
            "attributes = {}\nts = {}\ninclude_globals = {}\nfixed_vertex_mode = {}\nfixed_vertex_only = {}\nuse_weights = {}\nselection = {}\neigen_tol = {:e}\neigen_max_iter = {}\neigen_dense_limit = {}\n",
            attrs.join(", "),
            ts.join(", "),
            self.include_globals,
            self.fixed_vertex_mode,
            self.fixed_vertex_only,
            self.use_weights,
            self.selection,
            self.eigen.tol,
            self.eigen.max_iter,
            self.eigen.dense_limit,
        )
    }
}

/// Documentation of every config key, for command-line help.
pub const CONFIG_KEYS: &str = "\
family            = bio | social          preset applied before the other keys
attributes        = comma list of degree, second_eigenvector, clustering,
                    betweenness, triangles, identity_partition, node_labels
ts                = comma list of non-negative lags (default 0, 1, 2, 3)
include_globals   = true | false          append num_nodes and num_edges
fixed_vertex_mode = true | false          per-vertex covariances v<k>@<t>
fixed_vertex_only = true | false          drop the standard columns
use_weights       = true | false          weighted walk (default true)
selection         = all | greedy_forward  attribute-group selection
eigen_tol         = float                 power-iteration residual (1e-10)
eigen_max_iter    = int                   power-iteration cap (10000)
eigen_dense_limit = int                   dense solve up to this many vertices (300)";

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn boolean(value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Argument(format!("expected true or false, got '{value}'"))),
    }
}
