//! Greedy forward selection over attribute groups. A group is every `a@t`
//! column of one attribute; other columns (globals, per-vertex features)
//! are always kept.

use super::{Attribute, FeatureMatrix};
use crate::classify::{cross_validate, CvOptions, Hyper, ModelKind, ModelSpec};
use crate::error::{Error, Result};

/// Smallest accuracy gain that justifies adding another group.
pub const SELECTION_MIN_GAIN: f64 = 0.001;

/// Attribute group of a column, if it belongs to one.
pub fn column_group(name: &str) -> Option<Attribute> {
    let (prefix, t) = name.split_once('@')?;
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Attribute::ALL.into_iter().find(|a| a.prefix() == prefix)
}

fn groups_present(fm: &FeatureMatrix) -> Vec<Attribute> {
    let mut g: Vec<Attribute> = fm.column_names.iter().filter_map(|c| column_group(c)).collect();
    g.sort();
    g.dedup();
    g
}

/// Columns of `fm` that survive when only `groups` are kept.
pub fn columns_for_groups(fm: &FeatureMatrix, groups: &[Attribute]) -> Vec<usize> {
    fm.column_names
        .iter()
        .enumerate()
        .filter(|(_, c)| column_group(c).map_or(true, |g| groups.contains(&g)))
        .map(|(i, _)| i)
        .collect()
}

/// Adds, one at a time, the group whose inclusion gives the best
/// cross-validated accuracy (ties to the earlier attribute), until no group
/// improves on the current set by more than [`SELECTION_MIN_GAIN`]. The
/// first group is always added. Returns the chosen groups in column order.
pub fn greedy_forward_selection(fm: &FeatureMatrix, hyper: Hyper, folds: usize, seed: u64) -> Result<Vec<Attribute>> {
    let pool = groups_present(fm);
    if pool.is_empty() {
        return Err(Error::Argument("no attribute groups to select from".into()));
    }
    let spec = match hyper {
        Hyper::C(c) => ModelSpec {
            c_grid: vec![c],
            ..ModelSpec::new(ModelKind::LinearSvm, seed)
        },
        Hyper::Trees(t) => ModelSpec {
            trees_grid: vec![t],
            ..ModelSpec::new(ModelKind::RandomForest, seed)
        },
    };
    let opts = CvOptions {
        folds,
        repeats: 1,
        seed,
        ..CvOptions::default()
    };
    let score = |groups: &[Attribute]| -> Result<f64> {
        let sub = fm.select_columns(&columns_for_groups(fm, groups));
        Ok(cross_validate(&sub, &spec, &opts, None)?.mean_accuracy)
    };

    let mut selected: Vec<Attribute> = Vec::new();
    let mut current = f64::NEG_INFINITY;
    while selected.len() < pool.len() {
        let mut best: Option<(Attribute, f64)> = None;
        for &g in pool.iter().filter(|g| !selected.contains(g)) {
            let mut trial = selected.clone();
            trial.push(g);
            let acc = score(&trial)?;
            if best.map_or(true, |(_, b)| acc > b) {
                best = Some((g, acc));
            }
        }
        let (g, acc) = best.expect("pool not exhausted");
        if !selected.is_empty() && acc <= current + SELECTION_MIN_GAIN {
            break;
        }
        selected.push(g);
        current = acc;
    }
    selected.sort();
    Ok(selected)
}
