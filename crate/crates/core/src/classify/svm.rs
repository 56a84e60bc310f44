//! Linear C-SVM trained by dual coordinate descent.
//!
//! Minimizes `½‖w̃‖² + C Σ max(0, 1 − yᵢ w̃·x̃ᵢ)` where `x̃ = (x, 1)`, so the
//! bias is regularized together with `w`. The dual is
//! `min ½αᵀQα − Σα` over `0 ≤ α ≤ C` with `Q_ij = yᵢyⱼ x̃ᵢ·x̃ⱼ`; each step
//! minimizes it exactly in one coordinate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Projected-gradient spread below which the active set is restored and
/// the duality gap is checked.
const GAP_CHECK_PG: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmOptions {
    pub c: f64,
    /// Stop once the duality gap falls below `tol` times its initial value
    /// `C·n`.
    pub tol: f64,
    pub max_epochs: usize,
    /// Seeds the per-epoch coordinate order.
    pub seed: u64,
}

impl SvmOptions {
    pub fn with_c(c: f64) -> Self {
        SvmOptions {
            c,
            ..Self::default()
        }
    }
}

impl Default for SvmOptions {
    fn default() -> Self {
        SvmOptions {
            c: 1.0,
            tol: 1e-4,
            max_epochs: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub epochs: usize,
    pub converged: bool,
    /// Final duality gap divided by `C·n`.
    pub relative_gap: f64,
    /// Dual objective `½‖w̃‖² − Σα` after each epoch. Non-increasing.
    pub dual_objective: Vec<f64>,
}

impl LinearSvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        if self.decision(x) > 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Trains on rows `x` with labels `y ∈ {−1, +1}`.
pub fn train_linear_svm(x: &[Vec<f64>], y: &[f64], opts: SvmOptions) -> Result<LinearSvm> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Argument(format!("{n} rows but {} labels", y.len())));
    }
    if !(opts.c > 0.0 && opts.c.is_finite()) {
        return Err(Error::Argument(format!("C must be positive, got {}", opts.c)));
    }
    if let Some(bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::Argument(format!("labels must be ±1, got {bad}")));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::Degenerate("SVM training set contains a single class".into()));
    }
    let p = x[0].len();
    if let Some(r) = x.iter().find(|r| r.len() != p) {
        return Err(Error::Argument(format!("row has {} features, expected {p}", r.len())));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Argument("SVM input contains non-finite values".into()));
    }

    let c = opts.c;
    let q: Vec<f64> = x.iter().map(|r| dot(r, r) + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gap0 = c * n as f64;
    let mut dual_objective = Vec::new();
    let mut relative_gap = 1.0;
    let mut epochs = 0;
    let mut converged = false;

    // Coordinates stuck at a bound with a gradient pushing outward are
    // skipped until the active ones look optimal, then all are revisited.
    let mut index: Vec<usize> = (0..n).collect();
    let mut active = n;
    let mut pg_max_old = f64::INFINITY;
    let mut pg_min_old = f64::NEG_INFINITY;

    while epochs < opts.max_epochs {
        index[..active].shuffle(&mut rng);
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;
        let mut s = 0;
        while s < active {
            let i = index[s];
            let g = y[i] * (dot(&w, &x[i]) + b) - 1.0;
            let pg = if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                g.min(0.0)
            } else if alpha[i] == c {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                }
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let next = (alpha[i] - g / q[i]).clamp(0.0, c);
                let step = next - alpha[i];
                if step != 0.0 {
                    alpha[i] = next;
                    let s = step * y[i];
                    for (wj, xj) in w.iter_mut().zip(&x[i]) {
                        *wj += s * xj;
                    }
                    b += s;
                }
            }
            s += 1;
        }
        epochs += 1;

        let half_norm = 0.5 * (dot(&w, &w) + b * b);
        dual_objective.push(half_norm - alpha.iter().sum::<f64>());

        let settled = pg_max - pg_min <= GAP_CHECK_PG;
        if settled || epochs <= 10 || epochs % 10 == 0 || epochs == opts.max_epochs {
            let hinge: f64 = x
                .iter()
                .zip(y)
                .map(|(r, yi)| (1.0 - yi * (dot(&w, r) + b)).max(0.0))
                .sum();
            let dual = *dual_objective.last().expect("pushed above");
            relative_gap = (half_norm + c * hinge + dual) / gap0;
            if relative_gap <= opts.tol {
                converged = true;
                break;
            }
        }
        if settled {
            active = n;
            pg_max_old = f64::INFINITY;
            pg_min_old = f64::NEG_INFINITY;
        } else {
            pg_max_old = if pg_max <= 0.0 { f64::INFINITY } else { pg_max };
            pg_min_old = if pg_min >= 0.0 { f64::NEG_INFINITY } else { pg_min };
        }
    }
    Ok(LinearSvm {
        weights: w,
        bias: b,
        epochs,
        converged,
        relative_gap,
        dual_objective,
    })
}
