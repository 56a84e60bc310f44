//! Repeated stratified k-fold cross-validation with hyperparameters chosen
//! by an inner cross-validation on the outer training rows.
//!
//! Every read of feature rows goes through [`FoldAccess::gather`], which
//! reports the row indices and the protocol phase to an optional
//! [`CvObserver`]. That makes leakage of test rows into standardization or
//! hyperparameter selection directly observable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{derive_seed, train_classifier, Hyper, ModelKind, ModelSpec};
use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, Standardizer};
use crate::parallel::map_ordered;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CvOptions {
    pub folds: usize,
    pub repeats: usize,
    pub inner_folds: usize,
    /// Seeds fold assignment and model training.
    pub seed: u64,
    pub standardize: bool,
}

impl Default for CvOptions {
    fn default() -> Self {
        CvOptions {
            folds: 10,
            repeats: 10,
            inner_folds: 5,
            seed: 0,
            standardize: true,
        }
    }
}

impl CvOptions {
    /// Outer fold of every row in repeat `repeat`.
    pub fn fold_assignment(&self, classes: &[usize], repeat: usize) -> Vec<usize> {
        stratified_folds(classes, self.folds, derive_seed(self.seed, &[repeat as u64]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    StandardizerFit,
    HyperparameterSelection,
    FinalTraining,
    Evaluation,
}

/// Receives every row access made while evaluating one outer fold.
pub trait CvObserver: Sync {
    fn rows_accessed(&self, repeat: usize, fold: usize, phase: Phase, rows: &[usize]);
}

/// Observer that records the set of rows touched per (repeat, fold, phase).
#[derive(Debug, Default)]
pub struct RowAccessLog {
    seen: Mutex<BTreeMap<(usize, usize, Phase), BTreeSet<usize>>>,
}

impl RowAccessLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self, repeat: usize, fold: usize, phase: Phase) -> BTreeSet<usize> {
        self.seen
            .lock()
            .expect("log lock")
            .get(&(repeat, fold, phase))
            .cloned()
            .unwrap_or_default()
    }

    pub fn folds(&self) -> BTreeSet<(usize, usize)> {
        self.seen.lock().expect("log lock").keys().map(|&(r, f, _)| (r, f)).collect()
    }
}

impl CvObserver for RowAccessLog {
    fn rows_accessed(&self, repeat: usize, fold: usize, phase: Phase, rows: &[usize]) {
        self.seen
            .lock()
            .expect("log lock")
            .entry((repeat, fold, phase))
            .or_default()
            .extend(rows.iter().copied());
    }
}

/// Assigns each row a fold in `0..k`: rows of each class, shuffled, are
/// dealt round-robin, continuing across classes in ascending class order.
pub fn stratified_folds(classes: &[usize], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in classes.iter().enumerate() {
        by_class.entry(c).or_default().push(i);
    }
    let mut fold = vec![0; classes.len()];
    let mut pos = 0;
    for rows in by_class.values_mut() {
        rows.shuffle(&mut rng);
        for &r in rows.iter() {
            fold[r] = pos % k;
            pos += 1;
        }
    }
    fold
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldChoice {
    pub repeat: usize,
    pub fold: usize,
    pub hyper: Hyper,
    /// Inner cross-validation accuracy of `hyper`; `None` when the grid had
    /// a single value.
    pub inner_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvReport {
    pub dataset: String,
    pub model: ModelKind,
    pub mean_accuracy: f64,
    /// Sample standard deviation of the per-repeat accuracies.
    pub std_accuracy: f64,
    /// Pooled accuracy over all outer folds of each repeat.
    pub per_repeat_accuracies: Vec<f64>,
    pub chosen: Vec<FoldChoice>,
    pub runtime_seconds: f64,
}

impl CvReport {
    pub const CSV_HEADER: &'static str = "dataset,model,mean_acc,std_acc,seconds";

    /// One CSV line; `timing = false` writes `0` seconds so that reruns are
    /// byte-identical.
    pub fn csv_row(&self, timing: bool) -> String {
        let secs = if timing { self.runtime_seconds } else { 0.0 };
        format!(
            "{},{},{:.6},{:.6},{:.3}",
            self.dataset, self.model, self.mean_accuracy, self.std_accuracy, secs
        )
    }
}

impl fmt::Display for CvReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<20} {:<6} {:>16} {:>10}", "dataset", "model", "accuracy (%)", "seconds")?;
        writeln!(
            f,
            "{:<20} {:<6} {:>7.2} ± {:<6.2} {:>10.1}",
            self.dataset,
            self.model.name(),
            100.0 * self.mean_accuracy,
            100.0 * self.std_accuracy,
            self.runtime_seconds
        )?;
        let reps: Vec<String> = self
            .per_repeat_accuracies
            .iter()
            .map(|a| format!("{:.2}", 100.0 * a))
            .collect();
        write!(f, "per repeat: {}", reps.join(" "))
    }
}

/// Row access for one outer fold.
pub(crate) struct FoldAccess<'a> {
    fm: &'a FeatureMatrix,
    observer: Option<&'a dyn CvObserver>,
    repeat: usize,
    fold: usize,
}

impl FoldAccess<'_> {
    fn gather(&self, phase: Phase, rows: &[usize]) -> (Vec<Vec<f64>>, Vec<usize>) {
        if let Some(o) = self.observer {
            o.rows_accessed(self.repeat, self.fold, phase, rows);
        }
        let x = rows.iter().map(|&i| self.fm.row(i).to_vec()).collect();
        let y = rows.iter().map(|&i| self.fm.classes[i]).collect();
        (x, y)
    }
}

struct FoldOutcome {
    correct: usize,
    choice: FoldChoice,
}

pub fn cross_validate(
    fm: &FeatureMatrix,
    spec: &ModelSpec,
    opts: &CvOptions,
    observer: Option<&dyn CvObserver>,
) -> Result<CvReport> {
    spec.validate()?;
    let n = fm.nrows();
    if opts.folds < 2 || opts.repeats == 0 || opts.inner_folds < 2 {
        return Err(Error::Argument(
            "need folds >= 2, inner folds >= 2 and at least one repeat".into(),
        ));
    }
    if n < opts.folds {
        return Err(Error::Argument(format!("{n} samples cannot fill {} folds", opts.folds)));
    }
    let start = Instant::now();
    let num_classes = fm.num_classes();
    let assignments: Vec<Vec<usize>> = (0..opts.repeats)
        .map(|r| opts.fold_assignment(&fm.classes, r))
        .collect();
    let jobs: Vec<(usize, usize)> = (0..opts.repeats)
        .flat_map(|r| (0..opts.folds).map(move |f| (r, f)))
        .collect();

    let outcomes = map_ordered(&jobs, |&(repeat, fold)| {
        let access = FoldAccess {
            fm,
            observer,
            repeat,
            fold,
        };
        let assign = &assignments[repeat];
        let train: Vec<usize> = (0..n).filter(|&i| assign[i] != fold).collect();
        let test: Vec<usize> = (0..n).filter(|&i| assign[i] == fold).collect();
        run_fold(&access, &train, &test, spec, opts, num_classes)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut per_repeat = vec![0usize; opts.repeats];
    let mut chosen = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        per_repeat[o.choice.repeat] += o.correct;
        chosen.push(o.choice);
    }
    let per_repeat_accuracies: Vec<f64> = per_repeat.iter().map(|&c| c as f64 / n as f64).collect();
    let mean_accuracy = per_repeat_accuracies.iter().sum::<f64>() / opts.repeats as f64;
    let std_accuracy = if opts.repeats > 1 {
        let ss: f64 = per_repeat_accuracies.iter().map(|a| (a - mean_accuracy).powi(2)).sum();
        (ss / (opts.repeats - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(CvReport {
        dataset: String::new(),
        model: spec.kind,
        mean_accuracy,
        std_accuracy,
        per_repeat_accuracies,
        chosen,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

fn run_fold(
    access: &FoldAccess<'_>,
    train: &[usize],
    test: &[usize],
    spec: &ModelSpec,
    opts: &CvOptions,
    num_classes: usize,
) -> Result<FoldOutcome> {
    let (repeat, fold) = (access.repeat, access.fold);
    let scaler = if opts.standardize {
        let (x, _) = access.gather(Phase::StandardizerFit, train);
        Some(Standardizer::fit(x.iter().map(Vec::as_slice), access.fm.ncols())?)
    } else {
        None
    };
    let scale = |x: Vec<Vec<f64>>| match &scaler {
        Some(s) => x.iter().map(|r| s.apply(r)).collect(),
        None => x,
    };

    let candidates = spec.candidates();
    let (hyper, inner_accuracy) = if candidates.len() == 1 {
        (candidates[0], None)
    } else {
        let (x, y) = access.gather(Phase::HyperparameterSelection, train);
        let x = scale(x);
        let seed = derive_seed(opts.seed, &[repeat as u64, fold as u64, 1]);
        let (h, acc) = select_hyper(&x, &y, &candidates, opts.inner_folds, seed, spec.seed, num_classes)?;
        (h, Some(acc))
    };

    let model_seed = derive_seed(spec.seed, &[repeat as u64, fold as u64]);
    let (x, y) = access.gather(Phase::FinalTraining, train);
    let model = train_classifier(&scale(x), &y, num_classes, hyper, model_seed)?;

    let (x, y) = access.gather(Phase::Evaluation, test);
    let correct = scale(x)
        .iter()
        .zip(&y)
        .filter(|(r, &c)| model.predict(r) == c)
        .count();
    Ok(FoldOutcome {
        correct,
        choice: FoldChoice {
            repeat,
            fold,
            hyper,
            inner_accuracy,
        },
    })
}

/// First grid value with the highest inner cross-validation accuracy.
fn select_hyper(
    x: &[Vec<f64>],
    y: &[usize],
    candidates: &[Hyper],
    inner_folds: usize,
    fold_seed: u64,
    model_seed: u64,
    num_classes: usize,
) -> Result<(Hyper, f64)> {
    let k = inner_folds.min(x.len());
    let assign = stratified_folds(y, k, fold_seed);
    let mut best = (candidates[0], f64::NEG_INFINITY);
    for &h in candidates {
        let mut correct = 0usize;
        for f in 0..k {
            let (tr, te): (Vec<usize>, Vec<usize>) = (0..x.len()).partition(|&i| assign[i] != f);
            if tr.is_empty() || te.is_empty() {
                continue;
            }
            let xt: Vec<Vec<f64>> = tr.iter().map(|&i| x[i].clone()).collect();
            let yt: Vec<usize> = tr.iter().map(|&i| y[i]).collect();
            let m = train_classifier(&xt, &yt, num_classes, h, derive_seed(model_seed, &[f as u64]))?;
            correct += te.iter().filter(|&&i| m.predict(&x[i]) == y[i]).count();
        }
        let acc = correct as f64 / x.len() as f64;
        if acc > best.1 {
            best = (h, acc);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureVector;
    use rand::Rng;

    fn matrix(x: Vec<Vec<f64>>, y: Vec<usize>) -> FeatureMatrix {
        let p = x[0].len();
        let rows = x
            .into_iter()
            .enumerate()
            .map(|(i, values)| FeatureVector {
                graph_id: i.to_string(),
                values,
                degenerate: Default::default(),
            })
            .collect();
        FeatureMatrix::new((0..p).map(|c| format!("f{c}")).collect(), rows, y).unwrap()
    }

    fn quick() -> CvOptions {
        CvOptions {
            repeats: 3,
            ..CvOptions::default()
        }
    }

    #[test]
    fn folds_are_stratified() {
        let classes: Vec<usize> = (0..103).map(|i| usize::from(i % 3 == 0)).collect();
        let f = stratified_folds(&classes, 10, 7);
        for k in 0..10 {
            let ones = (0..103).filter(|&i| f[i] == k && classes[i] == 1).count();
            let size = f.iter().filter(|&&g| g == k).count();
            assert!((3..=4).contains(&ones), "{ones}");
            assert!((10..=11).contains(&size));
        }
    }

    #[test]
    fn separable_data_scores_perfectly() {
        let x: Vec<Vec<f64>> = (0..60).map(|i| vec![if i % 2 == 0 { -1.0 } else { 1.0 }, (i % 7) as f64]).collect();
        let y: Vec<usize> = (0..60).map(|i| i % 2).collect();
        let r = cross_validate(&matrix(x, y), &ModelSpec::svm(0), &quick(), None).unwrap();
        assert_eq!(r.mean_accuracy, 1.0);
        assert_eq!(r.std_accuracy, 0.0);
        assert_eq!(r.per_repeat_accuracies.len(), 3);
        assert_eq!(r.chosen.len(), 30);
    }

    #[test]
    fn noise_is_near_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x: Vec<Vec<f64>> = (0..500).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let y: Vec<usize> = (0..500).map(|i| i % 2).collect();
        let opts = CvOptions {
            repeats: 2,
            ..CvOptions::default()
        };
        let r = cross_validate(&matrix(x, y), &ModelSpec::svm(1), &opts, None).unwrap();
        assert!((r.mean_accuracy - 0.5).abs() <= 0.07, "{}", r.mean_accuracy);
    }

    #[test]
    fn test_rows_only_seen_at_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let y: Vec<usize> = (0..40).map(|i| i % 3).collect();
        let log = RowAccessLog::new();
        let opts = CvOptions {
            repeats: 2,
            folds: 5,
            ..CvOptions::default()
        };
        let fm = matrix(x, y);
        cross_validate(&fm, &ModelSpec::random_forest(0), &opts, Some(&log)).unwrap();
        for r in 0..2 {
            let assign = opts.fold_assignment(&fm.classes, r);
            for f in 0..5 {
                let test: BTreeSet<usize> = (0..40).filter(|&i| assign[i] == f).collect();
                for phase in [Phase::StandardizerFit, Phase::HyperparameterSelection, Phase::FinalTraining] {
                    assert!(log.rows(r, f, phase).is_disjoint(&test));
                    assert_eq!(log.rows(r, f, phase).len(), 40 - test.len());
                }
                assert_eq!(log.rows(r, f, Phase::Evaluation), test);
            }
        }
    }

    #[test]
    fn reruns_are_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<Vec<f64>> = (0..50).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let y: Vec<usize> = x.iter().map(|r| usize::from(r[0] + 0.3 * r[1] > 0.6)).collect();
        let fm = matrix(x, y);
        let a = cross_validate(&fm, &ModelSpec::svm(9), &quick(), None).unwrap();
        let b = cross_validate(&fm, &ModelSpec::svm(9), &quick(), None).unwrap();
        assert_eq!(a.csv_row(false), b.csv_row(false));
        assert_eq!(a.chosen, b.chosen);
    }

    #[test]
    fn too_few_samples_rejected() {
        let fm = matrix(vec![vec![0.0]; 5], vec![0, 1, 0, 1, 0]);
        assert!(matches!(
            cross_validate(&fm, &ModelSpec::svm(0), &CvOptions::default(), None),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn constant_shift_does_not_change_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let y: Vec<usize> = x.iter().map(|r| usize::from(r[0] > r[1])).collect();
        let shifted: Vec<Vec<f64>> = x.iter().map(|r| vec![r[0] + 3.0, r[1] + 3.0]).collect();
        let a = cross_validate(&matrix(x, y.clone()), &ModelSpec::svm(0), &quick(), None).unwrap();
        let b = cross_validate(&matrix(shifted, y), &ModelSpec::svm(0), &quick(), None).unwrap();
        assert_eq!(a.per_repeat_accuracies, b.per_repeat_accuracies);
    }
}
