//! Reader and writer for the multi-file TU benchmark layout.
//!
//! `{name}_A.txt` lists 1-indexed directed arcs as `u, v`, one per line, with
//! each undirected edge present in both directions. `{name}_graph_indicator.txt`
//! gives the graph id (1-based) of every vertex and `{name}_graph_labels.txt`
//! one class value per graph. Node labels and edge attributes are optional.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{remap_sorted, Dataset, Graph};
use crate::error::{Error, Result};

fn part(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.is_file() {
        return Err(Error::format(path, None, "missing required file"));
    }
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.is_file() {
        fs::read_to_string(path).map(Some).map_err(|e| Error::io(path, e))
    } else {
        Ok(None)
    }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_field<T: FromStr>(path: &Path, line: usize, token: &str) -> Result<T> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::format(path, Some(line), format!("cannot parse '{}'", token.trim())))
}

/// First comma-separated value of every line.
fn first_column<T: FromStr>(path: &Path, text: &str) -> Result<Vec<T>> {
    lines(text)
        .map(|(no, l)| parse_field(path, no, l.split(',').next().unwrap_or("")))
        .collect()
}

pub fn load_tu_dataset(dir: impl AsRef<Path>, name: &str) -> Result<Dataset> {
    let dir = dir.as_ref();
    let a_path = part(dir, name, "A");
    let ind_path = part(dir, name, "graph_indicator");
    let gl_path = part(dir, name, "graph_labels");
    let nl_path = part(dir, name, "node_labels");
    let ea_path = part(dir, name, "edge_attributes");

    let a_text = read_required(&a_path)?;
    let ind_text = read_required(&ind_path)?;
    let gl_text = read_required(&gl_path)?;

    let raw_classes: Vec<i64> = first_column(&gl_path, &gl_text)?;
    let num_graphs = raw_classes.len();

    // vertex (0-based global) -> (graph index, local index)
    let mut owner = Vec::new();
    let mut sizes = vec![0usize; num_graphs];
    for (no, l) in lines(&ind_text) {
        let gid: usize = parse_field(&ind_path, no, l)?;
        if gid == 0 || gid > num_graphs {
            return Err(Error::format(
                &ind_path,
                Some(no),
                format!("graph id {gid} outside 1..={num_graphs}"),
            ));
        }
        owner.push((gid - 1, sizes[gid - 1]));
        sizes[gid - 1] += 1;
    }

    let weights: Option<Vec<f64>> = read_optional(&ea_path)?
        .map(|t| first_column(&ea_path, &t))
        .transpose()?;

    let mut edge_maps: Vec<BTreeMap<(usize, usize), f64>> = vec![BTreeMap::new(); num_graphs];
    let mut arc_count = 0;
    for (no, l) in lines(&a_text) {
        let mut it = l.split(',');
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::format(&a_path, Some(no), "expected 'u, v'"));
        };
        let a: usize = parse_field(&a_path, no, a)?;
        let b: usize = parse_field(&a_path, no, b)?;
        let lookup = |x: usize| {
            x.checked_sub(1)
                .and_then(|i| owner.get(i).copied())
                .ok_or_else(|| Error::format(&a_path, Some(no), format!("vertex {x} not in graph indicator")))
        };
        let (ga, la) = lookup(a)?;
        let (gb, lb) = lookup(b)?;
        if ga != gb {
            return Err(Error::format(
                &a_path,
                Some(no),
                format!("arc {a}-{b} joins graphs {} and {}", ga + 1, gb + 1),
            ));
        }
        let w = match &weights {
            Some(ws) => {
                let w = *ws.get(arc_count).ok_or_else(|| {
                    Error::format(&ea_path, None, "fewer edge attributes than arcs")
                })?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::format(
                        &ea_path,
                        Some(arc_count + 1),
                        format!("edge weight {w} is not positive"),
                    ));
                }
                w
            }
            None => 1.0,
        };
        arc_count += 1;
        if la == lb {
            continue;
        }
        let key = (la.min(lb), la.max(lb));
        edge_maps[ga].entry(key).or_insert(w);
    }
    if let Some(ws) = &weights {
        if ws.len() != arc_count {
            return Err(Error::format(
                &ea_path,
                None,
                format!("{} edge attributes for {arc_count} arcs", ws.len()),
            ));
        }
    }

    let node_labels: Option<Vec<i64>> = read_optional(&nl_path)?
        .map(|t| first_column(&nl_path, &t))
        .transpose()?;
    if let Some(labels) = &node_labels {
        if labels.len() != owner.len() {
            return Err(Error::format(
                &nl_path,
                None,
                format!("{} node labels for {} vertices", labels.len(), owner.len()),
            ));
        }
    }
    let mut per_graph_labels: Vec<Vec<i64>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    if let Some(labels) = &node_labels {
        for (&(g, _), &l) in owner.iter().zip(labels) {
            per_graph_labels[g].push(l);
        }
    }

    let mut graphs = Vec::with_capacity(num_graphs);
    for (gi, (edges, labels)) in edge_maps.into_iter().zip(per_graph_labels).enumerate() {
        let mut g = Graph::new(sizes[gi], edges.into_iter().map(|((u, v), w)| (u, v, w)))?
            .with_id((gi + 1).to_string());
        if node_labels.is_some() {
            g = g.with_labels(labels)?;
        }
        graphs.push(g);
    }
    Dataset::new(name, graphs, remap_sorted(&raw_classes))
}

/// Writes `ds` in TU layout. Edge attributes are emitted only for weighted
/// datasets, node labels only when every graph carries them.
pub fn save_tu_dataset(ds: &Dataset, dir: impl AsRef<Path>, name: &str) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let weighted = ds.graphs.iter().any(Graph::is_weighted);
    let labeled = ds.has_node_labels();

    let (mut a, mut ind, mut gl, mut nl, mut ea) =
        (String::new(), String::new(), String::new(), String::new(), String::new());
    let mut offset = 1;
    for (gi, (g, &class)) in ds.graphs.iter().zip(&ds.class_labels).enumerate() {
        let mut arcs: Vec<(usize, usize, f64)> = g
            .edges()
            .iter()
            .flat_map(|e| [(e.u, e.v, e.weight), (e.v, e.u, e.weight)])
            .collect();
        arcs.sort_by_key(|&(u, v, _)| (u, v));
        for (u, v, w) in arcs {
            let _ = writeln!(a, "{}, {}", u + offset, v + offset);
            if weighted {
                let _ = writeln!(ea, "{w}");
            }
        }
        for i in 0..g.n() {
            let _ = writeln!(ind, "{}", gi + 1);
            if labeled {
                let _ = writeln!(nl, "{}", g.node_labels().expect("checked")[i]);
            }
        }
        let _ = writeln!(gl, "{class}");
        offset += g.n();
    }

    let mut files = vec![("A", a), ("graph_indicator", ind), ("graph_labels", gl)];
    if labeled {
        files.push(("node_labels", nl));
    }
    if weighted {
        files.push(("edge_attributes", ea));
    }
    for (suffix, body) in files {
        let path = part(dir, name, suffix);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
