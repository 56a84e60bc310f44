//! Whitespace-separated weighted edge records.
//!
//! Edge file: `graph_id u v w` per line, 0-based vertices. A `#n <int>` line
//! fixes the vertex count of every graph; `#n <graph_id> <int>` fixes it for
//! one graph. Other `#` lines are comments. Without a declared count a graph
//! has `1 + max vertex index` vertices.
//!
//! Class sidecar (`<stem>.classes` next to the edge file): `graph_id class`
//! per line. It also fixes graph order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Dataset, Graph};
use crate::error::{Error, Result};

pub fn sidecar_path(edges: &Path) -> PathBuf {
    edges.with_extension("classes")
}

/// Loads `path` together with its `.classes` sidecar.
pub fn load_weighted_graphs(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    load_weighted_graphs_with_classes(path, &sidecar_path(path))
}

#[derive(Default)]
struct Pending {
    records: Vec<(usize, usize, f64)>,
    seen: HashSet<(usize, usize)>,
    declared_n: Option<usize>,
}

pub fn load_weighted_graphs_with_classes(edges: &Path, classes: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(edges).map_err(|e| Error::io(edges, e))?;
    let name = edges
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut global_n = None;
    let mut pending: HashMap<String, Pending> = HashMap::new();
    let mut any_record = false;
    for (idx, raw) in text.lines().enumerate() {
        let no = Some(idx + 1);
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#n") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let parse_n = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::format(edges, no, format!("bad vertex count '{t}'")))
            };
            match toks.as_slice() {
                [n] => global_n = Some(parse_n(n)?),
                [gid, n] => pending.entry(gid.to_string()).or_default().declared_n = Some(parse_n(n)?),
                _ => return Err(Error::format(edges, no, "expected '#n <int>' or '#n <graph_id> <int>'")),
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [gid, u, v, w] = toks.as_slice() else {
            return Err(Error::format(edges, no, "expected 'graph_id u v w'"));
        };
        let u: usize = u
            .parse()
            .map_err(|_| Error::format(edges, no, format!("bad vertex '{u}'")))?;
        let v: usize = v
            .parse()
            .map_err(|_| Error::format(edges, no, format!("bad vertex '{v}'")))?;
        let w: f64 = w
            .parse()
            .map_err(|_| Error::format(edges, no, format!("bad weight '{w}'")))?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::format(edges, no, format!("weight {w} is not positive")));
        }
        if u == v {
            return Err(Error::format(edges, no, format!("self-loop on vertex {u}")));
        }
        let entry = pending.entry(gid.to_string()).or_default();
        if !entry.seen.insert((u.min(v), u.max(v))) {
            return Err(Error::format(edges, no, format!("duplicate edge ({u}, {v}) in graph {gid}")));
        }
        entry.records.push((u, v, w));
        any_record = true;
    }

    if !classes.is_file() {
        if !any_record && pending.is_empty() {
            return Dataset::new(name, Vec::new(), Vec::new());
        }
        return Err(Error::format(classes, None, "missing class sidecar file"));
    }
    let class_text = fs::read_to_string(classes).map_err(|e| Error::io(classes, e))?;
    let mut order = Vec::new();
    let mut raw_classes = Vec::new();
    let mut listed = HashSet::new();
    for (idx, raw) in class_text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [gid, class] = toks.as_slice() else {
            return Err(Error::format(classes, Some(idx + 1), "expected 'graph_id class'"));
        };
        let class: i64 = class
            .parse()
            .map_err(|_| Error::format(classes, Some(idx + 1), format!("bad class '{class}'")))?;
        if !listed.insert(gid.to_string()) {
            return Err(Error::format(classes, Some(idx + 1), format!("graph {gid} listed twice")));
        }
        order.push(gid.to_string());
        raw_classes.push(class);
    }
    if let Some(stray) = pending.keys().filter(|k| !listed.contains(*k)).min() {
        return Err(Error::format(edges, None, format!("graph {stray} has no class")));
    }

    let mut graphs = Vec::with_capacity(order.len());
    for gid in order {
        let p = pending.remove(&gid).unwrap_or_default();
        let inferred = p.records.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
        let n = p.declared_n.or(global_n).unwrap_or(inferred);
        if inferred > n {
            return Err(Error::format(
                edges,
                None,
                format!("graph {gid} uses vertex {} but declares n = {n}", inferred - 1),
            ));
        }
        graphs.push(Graph::new(n, p.records)?.with_id(gid));
    }
    Dataset::from_raw_classes(name, graphs, &raw_classes)
}

/// Writes `ds` to `path` plus the `.classes` sidecar. Graph ids fall back to
/// the 1-based position when a graph has none.
pub fn save_weighted_graphs(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let ids: Vec<String> = ds
        .graphs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            if g.id().is_empty() {
                (i + 1).to_string()
            } else {
                g.id().to_string()
            }
        })
        .collect();
    if ids.iter().collect::<HashSet<_>>().len() != ids.len() {
        return Err(Error::Argument("graph ids are not unique".into()));
    }
    if let Some(bad) = ids.iter().find(|id| id.chars().any(char::is_whitespace)) {
        return Err(Error::Argument(format!("graph id '{bad}' contains whitespace")));
    }

    let sizes: BTreeMap<usize, ()> = ds.graphs.iter().map(|g| (g.n(), ())).collect();
    let shared = if sizes.len() == 1 { sizes.keys().next().copied() } else { None };

    let mut body = String::new();
    if let Some(n) = shared {
        let _ = writeln!(body, "#n {n}");
    }
    for (g, id) in ds.graphs.iter().zip(&ids) {
        if shared.is_none() {
            let _ = writeln!(body, "#n {id} {}", g.n());
        }
        for e in g.edges() {
            let _ = writeln!(body, "{id} {} {} {}", e.u, e.v, e.weight);
        }
    }
    fs::write(path, body).map_err(|e| Error::io(path, e))?;

    let mut classes = String::new();
    for (id, c) in ids.iter().zip(&ds.class_labels) {
        let _ = writeln!(classes, "{id} {c}");
    }
    let side = sidecar_path(path);
    fs::write(&side, classes).map_err(|e| Error::io(&side, e))
}
