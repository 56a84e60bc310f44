//! Synthetic datasets with planted class structure.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::generators::erdos_renyi;
use super::{Dataset, Graph};
use crate::error::{Error, Result};

/// Two classes on a shared vertex set. Class 0 is a planted partition with
/// contiguous blocks; class 1 is G(n, p) with `p` chosen so both classes
/// have the same expected edge count. Weights are uniform integers in
/// `1..=max_weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedVertexParams {
    pub n: usize,
    pub class_a: usize,
    pub class_b: usize,
    pub blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub max_weight: u32,
}

impl Default for FixedVertexParams {
    fn default() -> Self {
        FixedVertexParams {
            n: 84,
            class_a: 91,
            class_b: 113,
            blocks: 3,
            p_in: 0.3,
            p_out: 0.05,
            max_weight: 10,
        }
    }
}

impl FixedVertexParams {
    fn block_of(&self, i: usize) -> usize {
        i * self.blocks / self.n
    }

    pub fn expected_edges_a(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                total += if self.block_of(i) == self.block_of(j) { self.p_in } else { self.p_out };
            }
        }
        total
    }

    /// Edge probability of the density-matched class.
    pub fn matched_p(&self) -> f64 {
        self.expected_edges_a() / (self.n * (self.n - 1) / 2) as f64
    }

    fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.n < 2 || self.blocks == 0 || self.blocks > self.n {
            return Err(Error::Argument("need n >= 2 and 1 <= blocks <= n".into()));
        }
        if !prob(self.p_in) || !prob(self.p_out) || self.max_weight == 0 {
            return Err(Error::Argument("probabilities must lie in [0, 1], max_weight >= 1".into()));
        }
        Ok(())
    }
}

pub fn generate_fixed_vertex_dataset(params: &FixedVertexParams, seed: u64) -> Result<Dataset> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_b = params.matched_p();
    let mut graphs = Vec::with_capacity(params.class_a + params.class_b);
    let mut classes = Vec::with_capacity(graphs.capacity());
    for idx in 0..params.class_a + params.class_b {
        let class = usize::from(idx >= params.class_a);
        let mut pairs = Vec::new();
        if class == 0 {
            for i in 0..params.n {
                for j in i + 1..params.n {
                    let p = if params.block_of(i) == params.block_of(j) {
                        params.p_in
                    } else {
                        params.p_out
                    };
                    if rng.gen::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
        } else {
            pairs = erdos_renyi(params.n, p_b, &mut rng);
        }
        let edges: Vec<_> = pairs
            .into_iter()
            .map(|(u, v)| (u, v, f64::from(rng.gen_range(1..=params.max_weight))))
            .collect();
        graphs.push(Graph::new(params.n, edges)?.with_id(format!("g{idx:04}")));
        classes.push(class);
    }
    Dataset::new("fixed_vertex", graphs, classes)
}

/// Unweighted, variably sized graphs with categorical node labels. Class 0
/// is a two-block planted partition, class 1 a density-matched G(n, p).
/// Node labels are uniform noise over `num_labels` values.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSignalParams {
    pub per_class: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub num_labels: i64,
}

impl Default for PlantedSignalParams {
    fn default() -> Self {
        PlantedSignalParams {
            per_class: 60,
            min_n: 20,
            max_n: 40,
            p_in: 0.4,
            p_out: 0.05,
            num_labels: 3,
        }
    }
}

pub fn generate_planted_signal_dataset(params: &PlantedSignalParams, seed: u64) -> Result<Dataset> {
    if params.min_n < 2 || params.min_n > params.max_n || params.num_labels < 1 {
        return Err(Error::Argument("need 2 <= min_n <= max_n and num_labels >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = Vec::new();
    let mut classes = Vec::new();
    for idx in 0..2 * params.per_class {
        let class = usize::from(idx >= params.per_class);
        let n = rng.gen_range(params.min_n..=params.max_n);
        let half = n / 2;
        let same = (half * half.saturating_sub(1) / 2 + (n - half) * (n - half - 1) / 2) as f64;
        let cross = (half * (n - half)) as f64;
        let pairs = if class == 0 {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let p = if (i < half) == (j < half) { params.p_in } else { params.p_out };
                    if rng.gen::<f64>() < p {
                        pairs.push((i, j));
                    }
                }
            }
            pairs
        } else {
            let p = (same * params.p_in + cross * params.p_out) / (same + cross);
            erdos_renyi(n, p, &mut rng)
        };
        let labels = (0..n).map(|_| rng.gen_range(0..params.num_labels)).collect();
        graphs.push(
            Graph::from_pairs(n, &pairs)?
                .with_labels(labels)?
                .with_id((idx + 1).to_string()),
        );
        classes.push(class);
    }
    Dataset::new("planted_signal", graphs, classes)
}
