//! Linear SVM and random-forest classifiers and the repeated, stratified
//! cross-validation protocol used to score feature sets.

mod cv;
mod forest;
mod multiclass;
mod svm;

pub use cv::{
    cross_validate, stratified_folds, CvObserver, CvOptions, CvReport, FoldChoice, Phase, RowAccessLog,
};
pub use forest::{bootstrap_indices, train_random_forest, ForestOptions, RandomForest, Tree};
pub use multiclass::{train_classifier, Classifier, OneVsRest};
pub use svm::{train_linear_svm, LinearSvm, SvmOptions};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    LinearSvm,
    RandomForest,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LinearSvm => "svm",
            ModelKind::RandomForest => "rf",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svm" | "linear_svm" => Ok(ModelKind::LinearSvm),
            "rf" | "random_forest" => Ok(ModelKind::RandomForest),
            _ => Err(Error::Argument(format!("unknown model '{s}' (svm or rf)"))),
        }
    }
}

/// One concrete hyperparameter setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hyper {
    C(f64),
    Trees(usize),
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::C(c) => write!(f, "C={c}"),
            Hyper::Trees(t) => write!(f, "trees={t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub c_grid: Vec<f64>,
    pub trees_grid: Vec<usize>,
    pub seed: u64,
}

pub const DEFAULT_C_GRID: [f64; 7] = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];
pub const DEFAULT_TREES_GRID: [usize; 4] = [50, 100, 200, 500];

impl ModelSpec {
    pub fn new(kind: ModelKind, seed: u64) -> Self {
        ModelSpec {
            kind,
            c_grid: DEFAULT_C_GRID.to_vec(),
            trees_grid: DEFAULT_TREES_GRID.to_vec(),
            seed,
        }
    }

    pub fn svm(seed: u64) -> Self {
        Self::new(ModelKind::LinearSvm, seed)
    }

    pub fn random_forest(seed: u64) -> Self {
        Self::new(ModelKind::RandomForest, seed)
    }

    /// The grid for this model kind, in selection order.
    pub fn candidates(&self) -> Vec<Hyper> {
        match self.kind {
            ModelKind::LinearSvm => self.c_grid.iter().map(|&c| Hyper::C(c)).collect(),
            ModelKind::RandomForest => self.trees_grid.iter().map(|&t| Hyper::Trees(t)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ModelKind::LinearSvm => {
                if self.c_grid.is_empty() || self.c_grid.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
                    return Err(Error::Argument("C grid must be non-empty and positive".into()));
                }
            }
            ModelKind::RandomForest => {
                if self.trees_grid.is_empty() || self.trees_grid.contains(&0) {
                    return Err(Error::Argument("trees grid must be non-empty and positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Mixes `parts` into `base`; distinct paths give unrelated seeds.
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    parts.iter().fold(splitmix(base), |acc, &p| splitmix(acc ^ splitmix(p)))
}
