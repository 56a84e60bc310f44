//! Second dominant left eigenvector of the transition matrix.
//!
//! Power iteration runs on `S = D^{-1/2} W D^{-1/2}`, deflated against its
//! known leading eigenvector `√d / ‖√d‖`. A left eigenvector of `M` is then
//! `w = D^{1/2} y`. "Second dominant" means second largest in magnitude, so
//! bipartite graphs return `λ₂ = −1`.
//!
//! Graphs up to `EigenOptions::dense_limit` vertices use a dense symmetric
//! eigendecomposition of the deflated `S` instead. Power iteration stalls
//! when `|λ₂|` and `|λ₃|` are close, and there the vector is only as
//! accurate as residual / gap.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AttributeValue;
use crate::dynamics::WalkOperator;
use crate::error::{Error, Result};

/// Bound on `‖wM − λw‖₂` guaranteed for a returned eigenvector.
pub const LEFT_RESIDUAL_BOUND: f64 = 1e-8;

const START_SEED: u64 = 0x5eed_2e16;
/// Must differ from `START_SEED`: the converged vector is the projection of
/// that start onto the eigenspace, so reusing it would deflate away the
/// very multiplicity the probe looks for.
const PROBE_SEED: u64 = 0x9be1_d0c5;
const PAIR_CHECK_EVERY: usize = 8;
const DEGENERACY_GAP: f64 = 1e-6;
/// Polishing continues toward this residual after `tol` is met.
const POLISH_TOL: f64 = 1e-14;
/// Polishing stops after this many iterations without improvement.
const POLISH_PATIENCE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Largest vertex count solved densely.
    pub dense_limit: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            max_iter: 10_000,
            dense_limit: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondEigen {
    /// Unit-norm left eigenvector, largest-magnitude entry positive.
    pub attribute: AttributeValue,
    pub eigenvalue: f64,
    /// Another eigenvalue shares `|λ₂|`, so the returned vector is one
    /// arbitrary member of a larger eigenspace.
    pub degenerate: bool,
    pub residual: f64,
    pub iterations: usize,
}

impl SecondEigen {
    pub fn vector(&self) -> &[f64] {
        self.attribute.as_numeric().expect("numeric by construction")
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate(x: &mut [f64], basis: &[Vec<f64>]) {
    for q in basis {
        let c = dot(x, q);
        x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let nrm = norm(x);
    if nrm > 0.0 {
        x.iter_mut().for_each(|v| *v /= nrm);
    }
    nrm
}

fn residual(op: &WalkOperator, y: &[f64], lambda: f64, scratch: &mut [f64]) -> f64 {
    op.apply_symmetric(y, scratch);
    scratch
        .iter()
        .zip(y)
        .map(|(s, v)| (s - lambda * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn start_vector(n: usize, basis: &[Vec<f64>], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x, basis);
    normalize(&mut x);
    x
}

/// Outcome of one deflated power iteration in S-space.
struct Dominant {
    vector: Vec<f64>,
    eigenvalue: f64,
    iterations: usize,
    magnitude_tie: bool,
}

/// Power iteration for the largest-magnitude eigenpair of `S` orthogonal to
/// `basis`. `accept` decides whether a converged pair is good enough.
fn dominant(
    op: &WalkOperator,
    basis: &[Vec<f64>],
    opts: EigenOptions,
    mut accept: impl FnMut(&[f64], f64) -> bool,
) -> Result<Dominant> {
    let n = op.n();
    let mut x = start_vector(n, basis, START_SEED);
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut last = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        op.apply_symmetric(&x, &mut y);
        deflate(&mut y, basis);
        let lambda = dot(&x, &y);
        let res = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        last = res;
        if res <= opts.tol && accept(&x, lambda) {
            let (vector, eigenvalue, extra) = polish(op, basis, x, lambda, res, opts.max_iter - iter);
            return Ok(Dominant {
                vector,
                eigenvalue,
                iterations: iter + extra,
                magnitude_tie: false,
            });
        }

        // ±μ pairs make plain power iteration oscillate; x then lies in the
        // span of both eigenspaces and splits as x ± Sx/μ.
        let mu = norm(&y);
        if mu > 0.0 && iter % PAIR_CHECK_EVERY == 0 {
            op.apply_symmetric(&y, &mut z);
            deflate(&mut z, basis);
            let two_step = z
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - mu * mu * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if two_step <= opts.tol * mu {
                let mut cands: Vec<(f64, Vec<f64>, f64)> = [1.0, -1.0]
                    .into_iter()
                    .map(|sign| {
                        let mut cand: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + sign * b / mu).collect();
                        deflate(&mut cand, basis);
                        let size = normalize(&mut cand);
                        (sign * mu, cand, size)
                    })
                    .collect();
                // A converged single eigenvector also passes the two-step
                // test; only a real mixture leaves both halves non-zero.
                let tie = cands.iter().all(|c| c.2 >= 1e-3);
                cands.retain(|c| c.2 >= 1e-3);
                for (lam, cand, _) in cands {
                    let r = residual(op, &cand, lam, &mut scratch);
                    if r <= opts.tol && accept(&cand, lam) {
                        let (vector, eigenvalue, extra) = if tie {
                            (cand, lam, 0)
                        } else {
                            polish(op, basis, cand, lam, r, opts.max_iter - iter)
                        };
                        return Ok(Dominant {
                            vector,
                            eigenvalue,
                            iterations: iter + extra,
                            magnitude_tie: tie,
                        });
                    }
                }
            }
        }

        if mu == 0.0 {
            break;
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / mu);
    }
    Err(Error::Convergence {
        iterations: opts.max_iter,
        residual: last,
    })
}

/// Keeps iterating past the stopping tolerance. The eigenvector error is
/// about residual / gap, so a small gap needs a residual far below `tol`
/// for the vector itself to be accurate.
fn polish(
    op: &WalkOperator,
    basis: &[Vec<f64>],
    mut x: Vec<f64>,
    mut lambda: f64,
    mut res: f64,
    budget: usize,
) -> (Vec<f64>, f64, usize) {
    let n = x.len();
    let mut y = vec![0.0; n];
    let mut cur = x.clone();
    let mut stale = 0;
    let mut used = 0;
    while res > POLISH_TOL && stale < POLISH_PATIENCE && used < budget {
        used += 1;
        op.apply_symmetric(&cur, &mut y);
        deflate(&mut y, basis);
        let mu = normalize(&mut y);
        if mu == 0.0 {
            break;
        }
        // Normalizing by |λ| flips sign each step when λ < 0.
        if dot(&y, &cur) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        std::mem::swap(&mut cur, &mut y);
        op.apply_symmetric(&cur, &mut y);
        deflate(&mut y, basis);
        let lam = dot(&cur, &y);
        let r = y
            .iter()
            .zip(&cur)
            .map(|(a, b)| (a - lam * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if r < res {
            res = r;
            lambda = lam;
            x.copy_from_slice(&cur);
            stale = 0;
        } else {
            stale += 1;
        }
    }
    (x, lambda, used)
}

fn to_left(op: &WalkOperator, y: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = y
        .iter()
        .zip(op.strengths())
        .map(|(v, d)| v * d.sqrt())
        .collect();
    normalize(&mut w);
    let pivot = w
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if v.abs() > w[best].abs() { i } else { best });
    if w[pivot] < 0.0 {
        w.iter_mut().for_each(|v| *v = -*v);
    }
    w
}

fn left_residual(op: &WalkOperator, w: &[f64], lambda: f64) -> f64 {
    let mut wm = vec![0.0; w.len()];
    op.apply_right(w, &mut wm);
    wm.iter()
        .zip(w)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Largest remaining `‖Sx‖` once `basis` is deflated; grows monotonically
/// towards the next eigenvalue magnitude.
fn exceeds_magnitude(op: &WalkOperator, basis: &[Vec<f64>], target: f64, max_iter: usize) -> bool {
    let n = op.n();
    if basis.len() >= n {
        return false;
    }
    let mut x = start_vector(n, basis, PROBE_SEED);
    if norm(&x) == 0.0 {
        return false;
    }
    let mut y = vec![0.0; n];
    let mut prev = 0.0;
    for _ in 0..max_iter {
        op.apply_symmetric(&x, &mut y);
        deflate(&mut y, basis);
        let mu = norm(&y);
        if mu >= target * (1.0 - DEGENERACY_GAP) {
            return true;
        }
        if mu == 0.0 || (mu - prev).abs() <= 1e-15 * target.max(1e-300) {
            return false;
        }
        prev = mu;
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / mu);
    }
    false
}

fn dense_second(op: &WalkOperator, lead: &[f64]) -> SecondEigen {
    let n = op.n();
    let d = op.strengths();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, w) in op.row(i) {
            s[(i, j)] = w / (d[i] * d[j]).sqrt();
        }
    }
    // P S P with P = I - q qᵀ; q itself lands on eigenvalue 0.
    let q = nalgebra::DVector::from_column_slice(lead);
    let p = DMatrix::identity(n, n) - &q * q.transpose();
    let deflated = &p * s * &p;
    let deflated = (&deflated + deflated.transpose()) * 0.5;
    let eig = deflated.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    let ev = &eig.eigenvalues;
    order.sort_by(|&a, &b| ev[b].abs().total_cmp(&ev[a].abs()).then(ev[b].total_cmp(&ev[a])));
    let (k, lambda) = (order[0], ev[order[0]]);
    let degenerate = n > 2 && ev[order[1]].abs() >= lambda.abs() * (1.0 - DEGENERACY_GAP);
    let y: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    let w = to_left(op, &y);
    let residual = left_residual(op, &w, lambda);
    SecondEigen {
        attribute: AttributeValue::numeric("eig2", w),
        eigenvalue: lambda,
        degenerate,
        residual,
        iterations: 0,
    }
}

pub fn second_left_eigenvector(op: &WalkOperator, opts: EigenOptions) -> Result<SecondEigen> {
    let n = op.n();
    if n < 2 {
        return Err(Error::Argument("second eigenvector needs n >= 2".into()));
    }
    let mut lead: Vec<f64> = op.strengths().iter().map(|d| d.sqrt()).collect();
    normalize(&mut lead);
    if n <= opts.dense_limit {
        return Ok(dense_second(op, &lead));
    }
    let basis = vec![lead];

    let found = dominant(op, &basis, opts, |y, lambda| {
        left_residual(op, &to_left(op, y), lambda) <= LEFT_RESIDUAL_BOUND
    })?;

    let mut degenerate = found.magnitude_tie;
    if !degenerate {
        let mut extended = basis.clone();
        extended.push(found.vector.clone());
        degenerate = exceeds_magnitude(op, &extended, found.eigenvalue.abs(), opts.max_iter);
    }

    let w = to_left(op, &found.vector);
    let residual = left_residual(op, &w, found.eigenvalue);
    Ok(SecondEigen {
        attribute: AttributeValue::numeric("eig2", w),
        eigenvalue: found.eigenvalue,
        degenerate,
        residual,
        iterations: found.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::oracle::dense_transition;
    use crate::graph::{generate_topology, Graph, Topology};
    use nalgebra::DMatrix;

    /// All eigenvalues of M via the symmetric similarity, sorted by
    /// decreasing magnitude.
    fn dense_spectrum(op: &WalkOperator) -> Vec<f64> {
        let m = dense_transition(op).unwrap();
        let n = op.n();
        let d = op.strengths();
        let s = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * d[i].sqrt() / d[j].sqrt());
        let s = (&s + s.transpose()) * 0.5;
        let mut ev: Vec<f64> = s.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap().then(b.partial_cmp(a).unwrap()));
        ev
    }

    const POWER: EigenOptions = EigenOptions {
        tol: 1e-10,
        max_iter: 10_000,
        dense_limit: 0,
    };

    /// Checks both solvers and returns the default one.
    fn check(g: &Graph) -> SecondEigen {
        let op = WalkOperator::new(g).unwrap();
        let p = check_with(&op, POWER);
        let e = check_with(&op, EigenOptions::default());
        assert_eq!(p.degenerate, e.degenerate);
        assert!((p.eigenvalue - e.eigenvalue).abs() < 1e-8 || e.degenerate);
        if !e.degenerate {
            // Up to sign: the pivot entry can tie in magnitude on symmetric graphs.
            let dist = |s: f64| p.vector().iter().zip(e.vector()).map(|(a, b)| (a - s * b).abs()).fold(0.0, f64::max);
            let dist = dist(1.0).min(dist(-1.0));
            assert!(dist < 1e-6, "solvers disagree by {dist}");
        }
        e
    }

    fn check_with(op: &WalkOperator, opts: EigenOptions) -> SecondEigen {
        let e = second_left_eigenvector(op, opts).unwrap();
        assert!(e.residual <= LEFT_RESIDUAL_BOUND, "residual {}", e.residual);
        assert!((norm(e.vector()) - 1.0).abs() < 1e-12);
        assert!((left_residual(op, e.vector(), e.eigenvalue)) <= LEFT_RESIDUAL_BOUND);
        let spectrum = dense_spectrum(op);
        assert!(
            (e.eigenvalue.abs() - spectrum[1].abs()).abs() < 1e-8,
            "{} vs {:?}",
            e.eigenvalue,
            spectrum
        );
        e
    }

    #[test]
    fn path_is_bipartite() {
        let e = check(&Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap());
        assert!((e.eigenvalue + 1.0).abs() < 1e-8);
        assert!(!e.degenerate);
    }

    #[test]
    fn clique_eigenspace_is_degenerate() {
        let e = check(&generate_topology(Topology::Clique, 4, 0.0, 0).unwrap());
        assert!((e.eigenvalue + 1.0 / 3.0).abs() < 1e-8);
        assert!(e.degenerate);
    }

    #[test]
    fn communities_match_dense_oracle() {
        let g = generate_topology(Topology::Communities3, 30, 0.0, 0).unwrap();
        let e = check(&g);
        let spectrum = dense_spectrum(&WalkOperator::new(&g).unwrap());
        assert!((e.eigenvalue - spectrum[1]).abs() < 1e-8);
    }

    #[test]
    fn random_graphs_match_dense_oracle() {
        for seed in 0..10 {
            check(&generate_topology(Topology::ErdosRenyi, 20, 0.3, seed).unwrap());
        }
    }

    #[test]
    fn plus_minus_pair_is_resolved() {
        // two disjoint edges plus isolated vertex: spectrum {1, 1, 1, -1, -1}
        let g = Graph::from_pairs(5, &[(0, 1), (2, 3)]).unwrap();
        let e = check(&g);
        assert!(e.degenerate);
    }

    #[test]
    fn even_ring_and_star() {
        check(&generate_topology(Topology::Ring, 10, 0.0, 0).unwrap());
        check(&generate_topology(Topology::Star, 7, 0.0, 0).unwrap());
        check(&generate_topology(Topology::Regular, 12, 0.0, 0).unwrap());
    }

    #[test]
    fn three_components_are_degenerate() {
        let g = Graph::from_pairs(5, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        let e = second_left_eigenvector(&op, EigenOptions::default()).unwrap();
        assert!((e.eigenvalue - 1.0).abs() < 1e-10);
        assert!(e.degenerate);
    }

    #[test]
    fn sign_convention() {
        let g = generate_topology(Topology::ErdosRenyi, 15, 0.4, 1).unwrap();
        let e = check(&g);
        let v = e.vector();
        let big = v.iter().fold(0.0f64, |m, x| if x.abs() > m.abs() { *x } else { m });
        assert!(big > 0.0);
    }

    #[test]
    fn non_convergence_reported() {
        let g = generate_topology(Topology::ErdosRenyi, 20, 0.3, 3).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        let err = second_left_eigenvector(&op, EigenOptions { tol: 1e-10, max_iter: 2, dense_limit: 0 }).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }));
    }

    #[test]
    fn single_vertex_rejected() {
        let op = WalkOperator::new(&Graph::from_pairs(1, &[]).unwrap()).unwrap();
        assert!(second_left_eigenvector(&op, EigenOptions::default()).is_err());
    }
}
