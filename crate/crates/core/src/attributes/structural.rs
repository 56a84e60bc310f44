use super::AttributeValue;
use crate::graph::Graph;

/// Distinct triangles through each vertex. Weights are ignored.
pub fn triangles_per_node(g: &Graph) -> AttributeValue {
    AttributeValue::numeric("tri", triangle_counts(g).into_iter().map(|t| t as f64).collect())
}

fn triangle_counts(g: &Graph) -> Vec<u64> {
    let adj = g.adjacency();
    let n = g.n();
    let mut counts = vec![0u64; n];
    let mut mark = vec![false; n];
    for i in 0..n {
        for &j in adj.neighbors(i) {
            mark[j] = true;
        }
        for &j in adj.neighbors(i).iter().filter(|&&j| j > i) {
            for &k in adj.neighbors(j).iter().filter(|&&k| k > j) {
                if mark[k] {
                    counts[i] += 1;
                    counts[j] += 1;
                    counts[k] += 1;
                }
            }
        }
        for &j in adj.neighbors(i) {
            mark[j] = false;
        }
    }
    counts
}

/// `2 t_i / (d_i (d_i − 1))`, zero when `d_i ≤ 1`. Weights are ignored.
pub fn local_clustering(g: &Graph) -> AttributeValue {
    let deg = g.degrees();
    let values = triangle_counts(g)
        .into_iter()
        .zip(deg)
        .map(|(t, d)| {
            if d <= 1 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1)) as f64
            }
        })
        .collect();
    AttributeValue::numeric("clust", values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Topology};

    fn values(a: AttributeValue) -> Vec<f64> {
        a.as_numeric().unwrap().to_vec()
    }

    /// Checks every vertex triple.
    fn brute_force_triangles(g: &Graph) -> Vec<f64> {
        let n = g.n();
        let mut a = vec![vec![false; n]; n];
        for e in g.edges() {
            a[e.u][e.v] = true;
            a[e.v][e.u] = true;
        }
        let mut t = vec![0.0; n];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if a[i][j] && a[j][k] && a[i][k] {
                        t[i] += 1.0;
                        t[j] += 1.0;
                        t[k] += 1.0;
                    }
                }
            }
        }
        t
    }

    #[test]
    fn clique_and_ring_triangles() {
        let k4 = generate_topology(Topology::Clique, 4, 0.0, 0).unwrap();
        assert_eq!(values(triangles_per_node(&k4)), vec![3.0; 4]);
        let c5 = generate_topology(Topology::Ring, 5, 0.0, 0).unwrap();
        assert_eq!(values(triangles_per_node(&c5)), vec![0.0; 5]);
    }

    #[test]
    fn random_graph_triangles_match_enumeration() {
        for seed in 0..5 {
            let g = generate_topology(Topology::ErdosRenyi, 20, 0.5, seed).unwrap();
            assert_eq!(values(triangles_per_node(&g)), brute_force_triangles(&g));
        }
    }

    #[test]
    fn clustering_examples() {
        let k3 = generate_topology(Topology::Clique, 3, 0.0, 0).unwrap();
        assert_eq!(values(local_clustering(&k3)), vec![1.0; 3]);
        let s4 = generate_topology(Topology::Star, 4, 0.0, 0).unwrap();
        assert_eq!(values(local_clustering(&s4)), vec![0.0; 4]);
        // neighbor pairs of 0: {1,2} linked, {1,3} and {2,3} not
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let c = values(local_clustering(&g));
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(&c[1..], &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn weights_are_ignored() {
        let g = Graph::new(3, [(0, 1, 5.0), (1, 2, 0.5), (0, 2, 2.0)]).unwrap();
        assert_eq!(values(local_clustering(&g)), vec![1.0; 3]);
    }
}
