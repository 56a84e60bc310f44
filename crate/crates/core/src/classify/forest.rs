//! Random forest of bootstrap-sampled, fully grown Gini trees.
//!
//! Each split samples `floor(√p)` features (at least one). A node is split
//! whenever it is impure and some feature separates its rows, even when the
//! best split leaves the Gini impurity unchanged; if none of the sampled
//! features separates the rows, the remaining features are tried. Ties go to
//! the lower feature index, then the lower threshold. Rows go left when
//! `x ≤ threshold`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parallel::map_ordered;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestOptions {
    pub trees: usize,
    /// Features sampled per split; `None` means `floor(√p)`.
    pub max_features: Option<usize>,
    pub min_leaf: usize,
    pub seed: u64,
}

impl ForestOptions {
    pub fn with_trees(trees: usize) -> Self {
        ForestOptions {
            trees,
            ..Self::default()
        }
    }
}

impl Default for ForestOptions {
    fn default() -> Self {
        ForestOptions {
            trees: 100,
            max_features: None,
            min_leaf: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(usize),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(c) => return c,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    pub trees: Vec<Tree>,
    pub num_classes: usize,
}

impl RandomForest {
    /// Majority vote; ties go to the lower class id.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut votes = vec![0usize; self.num_classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        argmax_lowest(&votes)
    }
}

fn argmax_lowest(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &v) in counts.iter().enumerate() {
        if v > counts[best] {
            best = c;
        }
    }
    best
}

fn tree_rng(seed: u64, tree: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tree as u64);
    rng
}

/// Row indices drawn with replacement for tree `tree`.
pub fn bootstrap_indices(n: usize, seed: u64, tree: usize) -> Vec<usize> {
    let mut rng = tree_rng(seed, tree);
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

pub fn train_random_forest(
    x: &[Vec<f64>],
    y: &[usize],
    num_classes: usize,
    opts: ForestOptions,
) -> Result<RandomForest> {
    if opts.trees == 0 {
        return Err(Error::Argument("a forest needs at least one tree".into()));
    }
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Argument(format!("{} rows and {} labels", x.len(), y.len())));
    }
    if let Some(&c) = y.iter().find(|&&c| c >= num_classes) {
        return Err(Error::Argument(format!("class {c} outside 0..{num_classes}")));
    }
    let p = x[0].len();
    if x.iter().any(|r| r.len() != p) {
        return Err(Error::Argument("rows have unequal lengths".into()));
    }
    let mtry = opts
        .max_features
        .unwrap_or_else(|| (p as f64).sqrt().floor() as usize)
        .clamp(1, p.max(1));
    let builder = Builder {
        x,
        y,
        num_classes,
        mtry,
        min_leaf: opts.min_leaf.max(1),
    };
    let ids: Vec<usize> = (0..opts.trees).collect();
    let trees = map_ordered(&ids, |&t| {
        let mut rng = tree_rng(opts.seed, t);
        let rows: Vec<usize> = (0..x.len()).map(|_| rng.gen_range(0..x.len())).collect();
        builder.grow(rows, &mut rng)
    });
    Ok(RandomForest { trees, num_classes })
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [usize],
    num_classes: usize,
    mtry: usize,
    min_leaf: usize,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    impurity: f64,
    /// Rows sorted by the split feature; the first `cut` go left.
    sorted: Vec<usize>,
    cut: usize,
}

impl Builder<'_> {
    fn grow(&self, rows: Vec<usize>, rng: &mut ChaCha8Rng) -> Tree {
        let mut nodes = vec![Node::Leaf(0)];
        let mut stack = vec![(0usize, rows)];
        while let Some((slot, rows)) = stack.pop() {
            let counts = self.counts(&rows);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let split = if pure || rows.len() < 2 * self.min_leaf {
                None
            } else {
                self.best_split(&rows, rng)
            };
            match split {
                None => nodes[slot] = Node::Leaf(argmax_lowest(&counts)),
                Some(mut cand) => {
                    let right_rows = cand.sorted.split_off(cand.cut);
                    let left = nodes.len();
                    nodes.push(Node::Leaf(0));
                    nodes.push(Node::Leaf(0));
                    nodes[slot] = Node::Split {
                        feature: cand.feature,
                        threshold: cand.threshold,
                        left,
                        right: left + 1,
                    };
                    stack.push((left + 1, right_rows));
                    stack.push((left, cand.sorted));
                }
            }
        }
        Tree { nodes }
    }

    fn counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.num_classes];
        for &r in rows {
            c[self.y[r]] += 1;
        }
        c
    }

    fn best_split(&self, rows: &[usize], rng: &mut ChaCha8Rng) -> Option<Candidate> {
        let p = self.x[0].len();
        if p == 0 {
            return None;
        }
        let mut drawn: Vec<usize> = sample(rng, p, self.mtry).into_vec();
        drawn.sort_unstable();
        if let Some(c) = self.search(rows, &drawn) {
            return Some(c);
        }
        let rest: Vec<usize> = (0..p).filter(|f| drawn.binary_search(f).is_err()).collect();
        self.search(rows, &rest)
    }

    /// Lowest weighted Gini impurity over `features` (ascending).
    fn search(&self, rows: &[usize], features: &[usize]) -> Option<Candidate> {
        let total = self.counts(rows);
        let n = rows.len();
        let mut best: Option<Candidate> = None;
        for &f in features {
            let mut sorted = rows.to_vec();
            sorted.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]));
            let mut left = vec![0usize; self.num_classes];
            let mut found: Option<(f64, f64, usize)> = None;
            for i in 0..n - 1 {
                left[self.y[sorted[i]]] += 1;
                let (lo, hi) = (self.x[sorted[i]][f], self.x[sorted[i + 1]][f]);
                let nl = i + 1;
                if lo == hi || nl < self.min_leaf || n - nl < self.min_leaf {
                    continue;
                }
                let imp = gini_mass(&left, nl) + gini_mass_rest(&total, &left, n - nl);
                if found.map_or(true, |(b, _, _)| imp < b) {
                    let mid = lo + (hi - lo) / 2.0;
                    let thr = if mid < hi { mid } else { lo };
                    found = Some((imp, thr, nl));
                }
            }
            if let Some((imp, thr, cut)) = found {
                if best.as_ref().map_or(true, |b| imp < b.impurity) {
                    best = Some(Candidate {
                        feature: f,
                        threshold: thr,
                        impurity: imp,
                        sorted,
                        cut,
                    });
                }
            }
        }
        best
    }
}

/// `n · gini = n − Σ c² / n`.
fn gini_mass(counts: &[usize], n: usize) -> f64 {
    let sq: usize = counts.iter().map(|c| c * c).sum();
    n as f64 - sq as f64 / n as f64
}

fn gini_mass_rest(total: &[usize], left: &[usize], n: usize) -> f64 {
    let sq: usize = total.iter().zip(left).map(|(t, l)| (t - l) * (t - l)).sum();
    n as f64 - sq as f64 / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tree_fits_threshold_rule() {
        let x: Vec<Vec<f64>> = (-5..5).map(|v| vec![v as f64 + 0.5]).collect();
        let y: Vec<usize> = x.iter().map(|r| usize::from(r[0] >= 0.0)).collect();
        let f = train_random_forest(&x, &y, 2, ForestOptions::with_trees(1)).unwrap();
        // any threshold between the sampled extremes of the two classes
        // lies in the gap (−0.5, 0.5)
        for (r, &c) in x.iter().zip(&y) {
            assert_eq!(f.predict(r), c);
        }
    }

    #[test]
    fn xor_is_learned() {
        let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let y = vec![0, 1, 1, 0];
        let f = train_random_forest(&x, &y, 2, ForestOptions::with_trees(100)).unwrap();
        for (r, &c) in x.iter().zip(&y) {
            assert_eq!(f.predict(r), c);
        }
    }

    #[test]
    fn zero_gain_split_on_xor_root() {
        // every single split of XOR leaves Gini unchanged; the tree must
        // still split twice to separate all four points
        let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let y = vec![0, 1, 1, 0];
        let b = Builder {
            x: &x,
            y: &y,
            num_classes: 2,
            mtry: 2,
            min_leaf: 1,
        };
        let t = b.grow(vec![0, 1, 2, 3], &mut tree_rng(1, 0));
        assert_eq!(t.num_nodes(), 7);
        for (r, &c) in x.iter().zip(&y) {
            assert_eq!(t.predict(r), c);
        }
    }

    #[test]
    fn tie_prefers_lower_feature_and_threshold() {
        // both features separate perfectly
        let x = vec![vec![0.0, 5.0], vec![1.0, 6.0]];
        let b = Builder {
            x: &x,
            y: &[0, 1],
            num_classes: 2,
            mtry: 2,
            min_leaf: 1,
        };
        let t = b.grow(vec![0, 1], &mut tree_rng(0, 0));
        assert_eq!(
            t.nodes[0],
            Node::Split {
                feature: 0,
                threshold: 0.5,
                left: 1,
                right: 2
            }
        );
    }

    #[test]
    fn same_seed_same_forest() {
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![(i * 7 % 13) as f64, (i % 5) as f64, i as f64]).collect();
        let y: Vec<usize> = (0..40).map(|i| (i * 3 % 7) % 3).collect();
        let opts = ForestOptions {
            seed: 9,
            ..ForestOptions::with_trees(20)
        };
        let a = train_random_forest(&x, &y, 3, opts).unwrap();
        let b = train_random_forest(&x, &y, 3, opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_bag_fraction() {
        let n = 200;
        let mut missing = 0usize;
        let trees = 500;
        for t in 0..trees {
            let mut seen = vec![false; n];
            for i in bootstrap_indices(n, 4, t) {
                seen[i] = true;
            }
            let oob = seen.iter().filter(|s| !**s).count();
            assert!(oob > 0);
            missing += oob;
        }
        let frac = missing as f64 / (n * trees) as f64;
        let expected = (1.0 - 1.0 / n as f64).powi(n as i32);
        assert!((frac - expected).abs() < 0.05);
        assert!((frac - (-1.0f64).exp()).abs() < 0.05);
    }

    #[test]
    fn vote_tie_goes_to_lower_class() {
        let t0 = Tree { nodes: vec![Node::Leaf(1)] };
        let t1 = Tree { nodes: vec![Node::Leaf(0)] };
        let f = RandomForest {
            trees: vec![t0, t1],
            num_classes: 2,
        };
        assert_eq!(f.predict(&[0.0]), 0);
    }

    #[test]
    fn constant_features_give_majority_leaf() {
        let x = vec![vec![1.0]; 5];
        let y = vec![1, 1, 0, 2, 1];
        let f = train_random_forest(&x, &y, 3, ForestOptions::with_trees(1)).unwrap();
        assert_eq!(f.trees[0].num_nodes(), 1);
    }
}
