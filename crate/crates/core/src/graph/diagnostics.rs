use std::collections::VecDeque;

use super::Graph;

/// Checks of the standing assumptions behind the walk features:
/// connectedness, non-bipartiteness and the absence of isolated vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphDiagnostics {
    pub connected: bool,
    pub bipartite: bool,
    pub isolated_vertex_count: usize,
    pub component_count: usize,
}

pub fn diagnose(g: &Graph) -> GraphDiagnostics {
    let adj = g.adjacency();
    let n = g.n();
    // 0 = unvisited, 1/2 = the two colors
    let mut color = vec![0u8; n];
    let mut components = 0;
    let mut bipartite = true;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        components += 1;
        color[start] = 1;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &j in adj.neighbors(i) {
                if color[j] == 0 {
                    color[j] = 3 - color[i];
                    queue.push_back(j);
                } else if color[j] == color[i] {
                    bipartite = false;
                }
            }
        }
    }
    GraphDiagnostics {
        connected: components == 1,
        bipartite,
        isolated_vertex_count: (0..n).filter(|&i| adj.degree(i) == 0).count(),
        component_count: components,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let d = diagnose(&Graph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(d.connected);
        assert!(!d.bipartite);
        assert_eq!(d.isolated_vertex_count, 0);
    }

    #[test]
    fn path() {
        let d = diagnose(&Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap());
        assert!(d.connected && d.bipartite);
    }

    #[test]
    fn two_disjoint_edges() {
        let d = diagnose(&Graph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap());
        assert!(!d.connected);
        assert_eq!(d.component_count, 2);
    }

    #[test]
    fn isolated_vertices_counted() {
        let d = diagnose(&Graph::from_pairs(4, &[(0, 1)]).unwrap());
        assert_eq!(d.isolated_vertex_count, 2);
        assert_eq!(d.component_count, 3);
    }
}
