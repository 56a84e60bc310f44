//! Multi-class wrappers. SVMs use one-vs-rest with the largest decision
//! value winning; forests vote natively.

use super::forest::{train_random_forest, ForestOptions, RandomForest};
use super::svm::{train_linear_svm, LinearSvm, SvmOptions};
use super::Hyper;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OneVsRest {
    /// Classes present in training, ascending, with their models. Two
    /// classes share one model whose positive side is the second class.
    classes: Vec<usize>,
    models: Vec<LinearSvm>,
}

impl OneVsRest {
    pub fn predict(&self, x: &[f64]) -> usize {
        if self.classes.len() == 2 {
            return if self.models[0].decision(x) > 0.0 {
                self.classes[1]
            } else {
                self.classes[0]
            };
        }
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (k, m) in self.models.iter().enumerate() {
            let s = m.decision(x);
            if s > best_score {
                best = k;
                best_score = s;
            }
        }
        self.classes[best]
    }

    pub fn models(&self) -> &[LinearSvm] {
        &self.models
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    /// Training data had a single class.
    Constant(usize),
    Svm(OneVsRest),
    Forest(RandomForest),
}

impl Classifier {
    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            Classifier::Constant(c) => *c,
            Classifier::Svm(m) => m.predict(x),
            Classifier::Forest(f) => f.predict(x),
        }
    }
}

pub fn train_classifier(
    x: &[Vec<f64>],
    y: &[usize],
    num_classes: usize,
    hyper: Hyper,
    seed: u64,
) -> Result<Classifier> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Argument(format!("{} rows and {} labels", x.len(), y.len())));
    }
    let mut present: Vec<usize> = y.to_vec();
    present.sort_unstable();
    present.dedup();
    if present.len() == 1 {
        return Ok(Classifier::Constant(present[0]));
    }
    match hyper {
        Hyper::C(c) => {
            let opts = SvmOptions {
                seed,
                ..SvmOptions::with_c(c)
            };
            let sides: Vec<usize> = if present.len() == 2 {
                vec![present[1]]
            } else {
                present.clone()
            };
            let models = sides
                .iter()
                .map(|&k| {
                    let yk: Vec<f64> = y.iter().map(|&c| if c == k { 1.0 } else { -1.0 }).collect();
                    train_linear_svm(x, &yk, opts)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Classifier::Svm(OneVsRest {
                classes: present,
                models,
            }))
        }
        Hyper::Trees(trees) => {
            let opts = ForestOptions {
                seed,
                ..ForestOptions::with_trees(trees)
            };
            Ok(Classifier::Forest(train_random_forest(x, y, num_classes, opts)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three_blobs(per: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let centers = [(0.0, 6.0), (-6.0, -3.0), (6.0, -3.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..3 * per {
            let c = i % 3;
            let (cx, cy) = centers[c];
            x.push(vec![cx + rng.gen_range(-1.5..1.5), cy + rng.gen_range(-1.5..1.5)]);
            y.push(c);
        }
        (x, y)
    }

    #[test]
    fn one_vs_rest_three_blobs() {
        let (x, y) = three_blobs(50, 1);
        let m = train_classifier(&x, &y, 3, Hyper::C(1.0), 0).unwrap();
        let (tx, ty) = three_blobs(200, 2);
        let ok = tx.iter().zip(&ty).filter(|(r, c)| m.predict(r) == **c).count();
        assert!(ok as f64 / ty.len() as f64 >= 0.98);
    }

    #[test]
    fn two_classes_match_raw_binary() {
        let (x, y) = three_blobs(30, 5);
        let keep: Vec<usize> = (0..x.len()).filter(|&i| y[i] < 2).collect();
        let x: Vec<Vec<f64>> = keep.iter().map(|&i| x[i].clone()).collect();
        let y: Vec<usize> = keep.iter().map(|&i| y[i]).collect();
        let wrapped = train_classifier(&x, &y, 2, Hyper::C(0.1), 3).unwrap();
        let signs: Vec<f64> = y.iter().map(|&c| if c == 1 { 1.0 } else { -1.0 }).collect();
        let raw = train_linear_svm(
            &x,
            &signs,
            SvmOptions {
                seed: 3,
                ..SvmOptions::with_c(0.1)
            },
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let p = vec![rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0)];
            let want = usize::from(raw.predict(&p) > 0.0);
            assert_eq!(wrapped.predict(&p), want);
        }
    }

    #[test]
    fn all_tie_scores_pick_class_zero() {
        let zero = LinearSvm {
            weights: vec![0.0],
            bias: 0.0,
            epochs: 0,
            converged: true,
            relative_gap: 0.0,
            dual_objective: vec![],
        };
        let m = OneVsRest {
            classes: vec![0, 1, 2],
            models: vec![zero.clone(), zero.clone(), zero.clone()],
        };
        assert_eq!(m.predict(&[3.0]), 0);
        let m2 = OneVsRest {
            classes: vec![0, 1],
            models: vec![zero],
        };
        assert_eq!(m2.predict(&[3.0]), 0);
    }

    #[test]
    fn single_class_training_is_constant() {
        let x = vec![vec![1.0], vec![2.0]];
        assert_eq!(
            train_classifier(&x, &[2, 2], 3, Hyper::C(1.0), 0).unwrap(),
            Classifier::Constant(2)
        );
    }
}
