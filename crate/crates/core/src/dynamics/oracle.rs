//! Dense reference computations for small graphs.

use nalgebra::{DMatrix, DVector};

use super::WalkOperator;
use crate::error::{Error, Result};

pub const DENSE_LIMIT: usize = 200;

fn guard(op: &WalkOperator) -> Result<()> {
    if op.n() > DENSE_LIMIT {
        return Err(Error::Argument(format!(
            "dense oracle limited to n <= {DENSE_LIMIT}, got {}",
            op.n()
        )));
    }
    Ok(())
}

/// `M = D⁻¹W` as a dense matrix.
pub fn dense_transition(op: &WalkOperator) -> Result<DMatrix<f64>> {
    guard(op)?;
    let n = op.n();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for (j, w) in op.row(i) {
            m[(i, j)] += w / op.strengths()[i];
        }
    }
    Ok(m)
}

/// `ρ(t) = Π Mᵗ − πᵀπ` by explicit matrix powers.
pub fn dense_autocovariance(op: &WalkOperator, t: usize) -> Result<DMatrix<f64>> {
    let m = dense_transition(op)?;
    let n = op.n();
    let mut power = DMatrix::identity(n, n);
    for _ in 0..t {
        power = &power * &m;
    }
    let pi = DVector::from_column_slice(op.pi());
    Ok(DMatrix::from_diagonal(&pi) * power - &pi * pi.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Graph, Topology};

    #[test]
    fn lag_zero_is_diag_minus_outer() {
        let g = generate_topology(Topology::Star, 5, 0.0, 0).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        let rho = dense_autocovariance(&op, 0).unwrap();
        let pi = op.pi();
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { pi[i] } else { 0.0 } - pi[i] * pi[j];
                assert!((rho[(i, j)] - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn entries_sum_to_zero_and_symmetric() {
        let g = generate_topology(Topology::ErdosRenyi, 12, 0.4, 3).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        for t in 0..6 {
            let rho = dense_autocovariance(&op, t).unwrap();
            assert!(rho.sum().abs() < 1e-12);
            assert!((&rho - rho.transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn size_guard() {
        let g = Graph::from_pairs(DENSE_LIMIT + 1, &[]).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        assert!(matches!(dense_autocovariance(&op, 1), Err(Error::Argument(_))));
    }
}
