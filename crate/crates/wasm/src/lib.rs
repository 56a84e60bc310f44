//! Browser bindings for the demo page in `www/`. Every function returns a
//! JSON string.

use std::str::FromStr;

use dynfeat::attributes::{
    betweenness, degree_attribute, local_clustering, second_left_eigenvector, triangles_per_node, EigenOptions,
};
use dynfeat::dynamics::{identity_assortativity, numeric_assortativity, TimeGrid, WalkOperator};
use dynfeat::features::{column_names, graph_features, Attribute, FeatureConfig, Family};
use dynfeat::graph::Graph;
use dynfeat::profiles::topology_profiles;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_VERTICES: usize = 2000;

/// Second-eigenvector curves `u(t)`, `t = 0..=t_max`, for the six
/// reference topologies on `n` vertices.
#[wasm_bindgen]
pub fn fig1(n: usize, t_max: usize, seed: u32) -> Result<String, String> {
    if n > MAX_VERTICES || t_max > 200 {
        return Err(format!("keep n <= {MAX_VERTICES} and t_max <= 200"));
    }
    let curves = topology_profiles(n, t_max, seed.into()).map_err(|e| e.to_string())?;
    let out: Vec<_> = curves
        .iter()
        .map(|c| {
            json!({
                "topology": c.topology.name(),
                "eigenvalue": c.eigenvalue,
                "degenerate": c.degenerate,
                "values": c.values,
            })
        })
        .collect();
    Ok(json!(out).to_string())
}

/// `u(t)` of one attribute on a pasted edge list.
#[wasm_bindgen]
pub fn profile(edges: &str, attribute: &str, t_max: usize) -> Result<String, String> {
    if t_max > 200 {
        return Err("keep t_max <= 200".into());
    }
    let g = parse_edges(edges)?;
    let attr = Attribute::from_str(attribute).map_err(|e| e.to_string())?;
    let op = WalkOperator::new(&g).map_err(|e| e.to_string())?;
    let ts = TimeGrid::up_to(t_max);
    let mut eigenvalue = None;
    let values = match attr {
        Attribute::Degree => numeric_assortativity(&op, numeric(&degree_attribute(&op)), &ts),
        Attribute::Clustering => numeric_assortativity(&op, numeric(&local_clustering(&g)), &ts),
        Attribute::Betweenness => numeric_assortativity(&op, numeric(&betweenness(&g)), &ts),
        Attribute::Triangles => numeric_assortativity(&op, numeric(&triangles_per_node(&g)), &ts),
        Attribute::IdentityPartition => identity_assortativity(&op, &ts),
        Attribute::SecondEigenvector => {
            let eig = second_left_eigenvector(&op, EigenOptions::default()).map_err(|e| e.to_string())?;
            eigenvalue = Some(eig.eigenvalue);
            numeric_assortativity(&op, eig.vector(), &ts)
        }
        Attribute::NodeLabels => return Err("node labels are not available for pasted graphs".into()),
    }
    .map_err(|e| e.to_string())?;
    Ok(json!({
        "n": g.n(),
        "m": g.num_edges(),
        "attribute": attr.prefix(),
        "eigenvalue": eigenvalue,
        "values": values,
    })
    .to_string())
}

/// Feature vector of a pasted edge list under the `bio` or `social`
/// preset (node labels dropped).
#[wasm_bindgen]
pub fn features(edges: &str, family: &str) -> Result<String, String> {
    let g = parse_edges(edges)?;
    let family = Family::from_str(family).map_err(|e| e.to_string())?;
    let mut cfg = FeatureConfig::for_family(family);
    cfg.attributes.remove(&Attribute::NodeLabels);
    let fv = graph_features(&g, &cfg, &[]).map_err(|e| e.to_string())?;
    let names = column_names(&cfg, g.n());
    Ok(json!({
        "names": names,
        "values": fv.values,
        "degenerate": fv.degenerate,
    })
    .to_string())
}

fn numeric(a: &dynfeat::attributes::AttributeValue) -> &[f64] {
    a.as_numeric().expect("structural attributes are numeric")
}

/// `u v` or `u v w` per line, 0-based; `#` starts a comment.
fn parse_edges(text: &str) -> Result<Graph, String> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        let bad = || format!("line {}: expected 'u v' or 'u v w'", no + 1);
        let (u, v, w) = match toks.as_slice() {
            [u, v] => (u, v, 1.0),
            [u, v, w] => (u, v, w.parse::<f64>().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        let u: usize = u.parse().map_err(|_| bad())?;
        let v: usize = v.parse().map_err(|_| bad())?;
        if u == v {
            continue;
        }
        n = n.max(u.max(v) + 1);
        edges.push((u, v, w));
    }
    if n == 0 {
        return Err("no edges".into());
    }
    if n > MAX_VERTICES {
        return Err(format!("at most {MAX_VERTICES} vertices in the browser demo"));
    }
    edges.sort_by_key(|&(u, v, _)| (u.min(v), u.max(v)));
    edges.dedup_by_key(|&mut (u, v, _)| (u.min(v), u.max(v)));
    Graph::new(n, edges).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig1_has_six_curves() {
        let v: serde_json::Value = serde_json::from_str(&fig1(12, 5, 0).unwrap()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert_eq!(v[2]["topology"], "clique");
        assert_eq!(v[2]["values"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn identity_profile_on_triangle() {
        let v: serde_json::Value = serde_json::from_str(&profile("0 1\n1 2\n2 0\n", "identity_partition", 1).unwrap()).unwrap();
        let u0 = v["values"][0].as_f64().unwrap();
        assert!((u0 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn feature_names_align() {
        let v: serde_json::Value = serde_json::from_str(&features("0 1\n1 2 2.5\n2 3\n3 0\n0 2\n", "social").unwrap()).unwrap();
        assert_eq!(v["names"].as_array().unwrap().len(), v["values"].as_array().unwrap().len());
        assert_eq!(v["names"][0], "deg@0");
    }

    #[test]
    fn bad_input_is_reported() {
        assert!(profile("0 x", "degree", 3).is_err());
        assert!(profile("0 1", "pagerank", 3).is_err());
        assert!(features("", "bio").is_err());
    }
}
