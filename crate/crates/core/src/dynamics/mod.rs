//! Random-walk operator and generalized assortativities.
//!
//! For a graph with strengths `d`, total `2m = Σ d` and transition matrix
//! `M = D⁻¹W`, the stationary walker's position indicators have lag-`t`
//! autocovariance `ρ(t) = Π Mᵗ − πᵀπ` with `π = d / 2m`. Every feature here
//! is a quadratic form of `ρ(t)`, evaluated by repeated sparse products and
//! never by materializing `ρ(t)` (see [`oracle`] for the dense version).

mod assortativity;
pub mod oracle;

pub use assortativity::{
    categorical_assortativity, identity_assortativity, numeric_assortativity, return_probabilities,
    vertex_assortativities, IDENTITY_CAPACITY,
};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ascending set of non-negative integer lags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimeGrid(Vec<usize>);

impl TimeGrid {
    pub fn new(mut ts: Vec<usize>) -> Self {
        ts.sort_unstable();
        ts.dedup();
        TimeGrid(ts)
    }

    /// `0..=t_max`.
    pub fn up_to(t_max: usize) -> Self {
        TimeGrid((0..=t_max).collect())
    }

    pub fn times(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid(vec![0, 1, 2, 3])
    }
}

/// Transition structure of the (possibly weighted) random walk on a graph.
///
/// Isolated vertices get a synthetic unit self-loop so that `M` stays
/// row-stochastic and every `π_i` is positive.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    strength: Vec<f64>,
    total: f64,
    pi: Vec<f64>,
    repaired: Vec<usize>,
}

impl WalkOperator {
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::Argument("walk operator needs at least one vertex".into()));
        }
        let adj = g.adjacency();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.num_edges());
        let mut weights = Vec::with_capacity(2 * g.num_edges());
        let mut repaired = Vec::new();
        offsets.push(0);
        for i in 0..n {
            if adj.degree(i) == 0 {
                targets.push(i);
                weights.push(1.0);
                repaired.push(i);
            } else {
                targets.extend_from_slice(adj.neighbors(i));
                weights.extend_from_slice(adj.weights(i));
            }
            offsets.push(targets.len());
        }
        let strength: Vec<f64> = (0..n)
            .map(|i| compensated_sum(weights[offsets[i]..offsets[i + 1]].iter().copied()))
            .collect();
        let total = compensated_sum(strength.iter().copied());
        let pi = strength.iter().map(|d| d / total).collect();
        Ok(WalkOperator {
            offsets,
            targets,
            weights,
            strength,
            total,
            pi,
            repaired,
        })
    }

    pub fn n(&self) -> usize {
        self.strength.len()
    }

    /// Vertex strengths `d` after self-loop repair.
    pub fn strengths(&self) -> &[f64] {
        &self.strength
    }

    /// `2m`, the sum of all strengths.
    pub fn total_strength(&self) -> f64 {
        self.total
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn self_loop_repaired(&self) -> bool {
        !self.repaired.is_empty()
    }

    /// Vertices that received a synthetic self-loop.
    pub fn repaired_vertices(&self) -> &[usize] {
        &self.repaired
    }

    /// Nonzero entries `(j, W_ij)` of row `i`, self-loops included.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.targets[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    /// `out = x M` for a row vector `x` (one step of the distribution).
    pub fn apply_right(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let scale = xi / self.strength[i];
            for (j, w) in self.row(i) {
                out[j] += scale * w;
            }
        }
    }

    /// `out = M x` for a column vector `x` (neighborhood averaging).
    pub fn apply_left(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let acc: f64 = self.row(i).map(|(j, w)| w * x[j]).sum();
            *o = acc / self.strength[i];
        }
    }

    /// `out = S x` with the symmetric similarity `S = D^{-1/2} W D^{-1/2}`,
    /// which shares its spectrum with `M`.
    pub fn apply_symmetric(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let acc: f64 = self
                .row(i)
                .map(|(j, w)| w * x[j] / self.strength[j].sqrt())
                .sum();
            *o = acc / self.strength[i].sqrt();
        }
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn compensated_dot(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| x * y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Topology};

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn stationary_distributions() {
        let k3 = Graph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(close(WalkOperator::new(&k3).unwrap().pi(), &[1.0 / 3.0; 3]));
        let p3 = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(close(WalkOperator::new(&p3).unwrap().pi(), &[0.25, 0.5, 0.25]));
        let s4 = generate_topology(Topology::Star, 4, 0.0, 0).unwrap();
        let op = WalkOperator::new(&s4).unwrap();
        assert!(close(op.pi(), &[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]));
    }

    #[test]
    fn empty_graph_rejected() {
        let g = Graph::from_pairs(0, &[]).unwrap();
        assert!(matches!(WalkOperator::new(&g), Err(Error::Argument(_))));
    }

    #[test]
    fn isolated_vertices_get_self_loops() {
        let g = Graph::from_pairs(4, &[(0, 1)]).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        assert_eq!(op.repaired_vertices(), &[2, 3]);
        assert_eq!(op.strengths(), &[1.0, 1.0, 1.0, 1.0]);
        assert!(op.pi().iter().all(|&p| p > 0.0));
        let mut out = vec![0.0; 4];
        op.apply_right(&[0.0, 0.0, 1.0, 0.0], &mut out);
        assert_eq!(out, vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn pi_is_fixed_point_and_mass_preserved() {
        let g = generate_topology(Topology::ErdosRenyi, 25, 0.3, 5).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        assert!((op.pi().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut out = vec![0.0; op.n()];
        op.apply_right(op.pi(), &mut out);
        assert!(close(&out, op.pi()));
        let x: Vec<f64> = (0..op.n()).map(|i| if i == 3 { 1.0 } else { 0.0 }).collect();
        op.apply_right(&x, &mut out);
        assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_grid_sorted_and_distinct() {
        assert_eq!(TimeGrid::new(vec![3, 0, 3, 1]).times(), &[0, 1, 3]);
        assert_eq!(TimeGrid::default().times(), &[0, 1, 2, 3]);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let vals = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(vals), 1.0);
    }
}
