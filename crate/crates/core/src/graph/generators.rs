//! Toy topologies used for the assortativity-vs-time study.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{diagnose, Graph};
use crate::error::{Error, Result};

const ER_MAX_RETRIES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Three equal cliques chained by single bridge edges.
    Communities3,
    Ring,
    Clique,
    ErdosRenyi,
    Star,
    /// Degree-4 circulant: `i ~ i±1, i±2 (mod n)`.
    Regular,
}

impl Topology {
    pub const ALL: [Topology; 6] = [
        Topology::Communities3,
        Topology::Ring,
        Topology::Clique,
        Topology::ErdosRenyi,
        Topology::Star,
        Topology::Regular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Communities3 => "communities3",
            Topology::Ring => "ring",
            Topology::Clique => "clique",
            Topology::ErdosRenyi => "erdos_renyi",
            Topology::Star => "star",
            Topology::Regular => "regular",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Topology::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown topology '{s}'")))
    }
}

/// Deterministic generator; `p` and `seed` only matter for Erdős–Rényi.
pub fn generate_topology(kind: Topology, n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Argument(format!("topology needs n >= 3, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = match kind {
        Topology::Clique => clique_pairs(0, n),
        Topology::Ring => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        Topology::Star => (1..n).map(|i| (0, i)).collect(),
        Topology::Regular => {
            if n < 5 {
                return Err(Error::Argument(format!(
                    "degree-4 circulant needs n >= 5, got {n}"
                )));
            }
            (0..n)
                .flat_map(|i| [(i, (i + 1) % n), (i, (i + 2) % n)])
                .collect()
        }
        Topology::Communities3 => {
            if n % 3 != 0 {
                return Err(Error::Argument(format!(
                    "communities3 needs n divisible by 3, got {n}"
                )));
            }
            let size = n / 3;
            let mut pairs: Vec<_> = (0..3).flat_map(|b| clique_pairs(b * size, size)).collect();
            pairs.push((size - 1, size));
            pairs.push((2 * size - 1, 2 * size));
            pairs
        }
        Topology::ErdosRenyi => return connected_erdos_renyi(n, p, seed),
    };
    Graph::from_pairs(n, &pairs)
}

fn clique_pairs(offset: usize, size: usize) -> Vec<(usize, usize)> {
    (0..size)
        .flat_map(|i| (i + 1..size).map(move |j| (offset + i, offset + j)))
        .collect()
}

/// G(n, p) sample, unconditioned. Pairs are visited in lexicographic order.
pub(crate) fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn connected_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!("erdos_renyi needs 0 < p < 1, got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ER_MAX_RETRIES {
        let g = Graph::from_pairs(n, &erdos_renyi(n, p, &mut rng))?;
        if diagnose(&g).connected {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "G({n}, {p}) not connected after {ER_MAX_RETRIES} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_k5() {
        assert_eq!(generate_topology(Topology::Clique, 5, 0.0, 0).unwrap().num_edges(), 10);
    }

    #[test]
    fn star_degrees() {
        let g = generate_topology(Topology::Star, 4, 0.0, 0).unwrap();
        assert_eq!(g.degrees(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn erdos_renyi_is_deterministic() {
        let a = generate_topology(Topology::ErdosRenyi, 30, 0.4, 7).unwrap();
        let b = generate_topology(Topology::ErdosRenyi, 30, 0.4, 7).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(diagnose(&a).connected);
    }

    #[test]
    fn erdos_renyi_unreachable_connectivity() {
        let err = generate_topology(Topology::ErdosRenyi, 60, 0.001, 1).unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
    }

    #[test]
    fn communities_require_divisible_n() {
        assert!(matches!(
            generate_topology(Topology::Communities3, 10, 0.0, 0),
            Err(Error::Argument(_))
        ));
        let g = generate_topology(Topology::Communities3, 30, 0.0, 0).unwrap();
        assert_eq!(g.num_edges(), 3 * 45 + 2);
        assert!(diagnose(&g).connected);
    }

    #[test]
    fn regular_is_four_regular() {
        let g = generate_topology(Topology::Regular, 12, 0.0, 0).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn ring_is_two_regular() {
        let g = generate_topology(Topology::Ring, 7, 0.0, 0).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn names_round_trip() {
        for t in Topology::ALL {
            assert_eq!(t.name().parse::<Topology>().unwrap(), t);
        }
    }
}
