//! Brandes accumulation over unweighted BFS trees.

use std::collections::VecDeque;

use super::AttributeValue;
use crate::graph::Graph;

/// Unnormalized betweenness, each unordered endpoint pair counted once.
/// Weights are ignored.
pub fn betweenness(g: &Graph) -> AttributeValue {
    let adj = g.adjacency();
    let n = g.n();
    let mut centrality = vec![0.0; n];

    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        for i in order.drain(..) {
            sigma[i] = 0.0;
            dist[i] = usize::MAX;
            delta[i] = 0.0;
            preds[i].clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in adj.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    // every pair was visited from both ends
    centrality.iter_mut().for_each(|c| *c /= 2.0);
    AttributeValue::numeric("betw", centrality)
}
