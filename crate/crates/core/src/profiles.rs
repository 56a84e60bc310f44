//! Assortativity-versus-time curves of the second left eigenvector on the
//! reference topologies.

use crate::attributes::{second_left_eigenvector, EigenOptions};
use crate::dynamics::{numeric_assortativity, TimeGrid, WalkOperator};
use crate::error::Result;
use crate::graph::{generate_topology, Graph, Topology};

/// Edge probability of the random reference graph.
pub const REFERENCE_ER_P: f64 = 0.4;

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub topology: Topology,
    pub eigenvalue: f64,
    pub degenerate: bool,
    /// `u(t)` for `t = 0..=t_max`.
    pub values: Vec<f64>,
}

/// `u(t)` of the second left eigenvector of `g` for `t = 0..=t_max`.
pub fn eigenvector_profile(g: &Graph, t_max: usize) -> Result<(f64, bool, Vec<f64>)> {
    let op = WalkOperator::new(g)?;
    let eig = second_left_eigenvector(&op, EigenOptions::default())?;
    let values = numeric_assortativity(&op, eig.vector(), &TimeGrid::up_to(t_max))?;
    Ok((eig.eigenvalue, eig.degenerate, values))
}

/// One profile per topology in [`Topology::ALL`] order, on `n` vertices.
pub fn topology_profiles(n: usize, t_max: usize, seed: u64) -> Result<Vec<Profile>> {
    Topology::ALL
        .into_iter()
        .map(|topology| {
            let g = generate_topology(topology, n, REFERENCE_ER_P, seed)?;
            let (eigenvalue, degenerate, values) = eigenvector_profile(&g, t_max)?;
            Ok(Profile {
                topology,
                eigenvalue,
                degenerate,
                values,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_ratio() {
        let g = generate_topology(Topology::Clique, 12, 0.0, 0).unwrap();
        let (lambda, _, u) = eigenvector_profile(&g, 3).unwrap();
        assert!((lambda + 1.0 / 11.0).abs() < 1e-10);
        assert!(((u[1] / u[0]).abs() - 1.0 / 11.0).abs() < 1e-10);
    }

    #[test]
    fn six_curves() {
        let p = topology_profiles(30, 10, 1).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.iter().all(|c| c.values.len() == 11));
    }
}
