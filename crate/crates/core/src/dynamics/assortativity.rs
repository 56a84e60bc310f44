use super::{compensated_dot, compensated_sum, TimeGrid, WalkOperator};
use crate::attributes::Indicator;
use crate::error::{Error, Result};

/// Largest graph for which identity-partition features are computed.
pub const IDENTITY_CAPACITY: usize = 4096;

/// `u_v(t) = vᵀ ρ(t) v` for every `t` in `ts`, in grid order.
///
/// `v` is centered by its stationary mean first; this leaves every `u_v(t)`
/// unchanged (`M 1 = 1`, `π M = π`) and keeps constant attributes at exactly
/// zero covariance. One sparse product per unit increase of `t`.
pub fn numeric_assortativity(op: &WalkOperator, v: &[f64], ts: &TimeGrid) -> Result<Vec<f64>> {
    if v.len() != op.n() {
        return Err(Error::Argument(format!(
            "attribute has {} entries for {} vertices",
            v.len(),
            op.n()
        )));
    }
    if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::Argument(format!("attribute contains non-finite value {bad}")));
    }
    Ok(centered_profile(op, v, ts))
}

fn centered_profile(op: &WalkOperator, v: &[f64], ts: &TimeGrid) -> Vec<f64> {
    let pi = op.pi();
    let mean = compensated_dot(pi, v);
    let centered: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let weighted: Vec<f64> = centered.iter().zip(pi).map(|(c, p)| c * p).collect();
    let residual_mean = compensated_sum(weighted.iter().copied());

    let mut x = centered.clone();
    let mut scratch = vec![0.0; x.len()];
    let mut step = 0;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts.times() {
        while step < t {
            op.apply_left(&x, &mut scratch);
            std::mem::swap(&mut x, &mut scratch);
            step += 1;
        }
        out.push(compensated_dot(&weighted, &x) - residual_mean * residual_mean);
    }
    out
}

/// `r(t, H) = Tr[Hᵀ ρ(t) H]`: the sum of `u_h(t)` over the columns of `H`.
pub fn categorical_assortativity(op: &WalkOperator, h: &Indicator, ts: &TimeGrid) -> Result<Vec<f64>> {
    if h.rows() != op.n() {
        return Err(Error::Argument(format!(
            "indicator has {} rows for {} vertices",
            h.rows(),
            op.n()
        )));
    }
    let mut total = vec![0.0; ts.len()];
    let mut column = vec![0.0; op.n()];
    for c in 0..h.columns() {
        let mut any = false;
        for (slot, &a) in column.iter_mut().zip(h.assignment()) {
            *slot = if a == c { 1.0 } else { 0.0 };
            any |= a == c;
        }
        // Empty categories contribute nothing.
        if !any {
            continue;
        }
        for (acc, u) in total.iter_mut().zip(centered_profile(op, &column, ts)) {
            *acc += u;
        }
    }
    Ok(total)
}

/// `(Mᵗ)_kk` for every vertex `k` and every `t` in `ts`, indexed
/// `[time][vertex]`. Each vertex's walk is propagated only over the
/// vertices it has reached so far.
pub fn return_probabilities(op: &WalkOperator, ts: &TimeGrid) -> Result<Vec<Vec<f64>>> {
    let n = op.n();
    if n > IDENTITY_CAPACITY {
        return Err(Error::Capacity(format!(
            "identity-partition features need n <= {IDENTITY_CAPACITY}, got {n}"
        )));
    }
    let mut out = vec![vec![0.0; n]; ts.len()];
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut support: Vec<usize> = Vec::with_capacity(n);
    let mut next_support: Vec<usize> = Vec::with_capacity(n);
    let mut in_next = vec![false; n];
    for k in 0..n {
        support.clear();
        support.push(k);
        cur[k] = 1.0;
        let mut step = 0;
        for (slot, &t) in ts.times().iter().enumerate() {
            while step < t {
                for &i in &support {
                    let scale = cur[i] / op.strengths()[i];
                    for (j, w) in op.row(i) {
                        if !in_next[j] {
                            in_next[j] = true;
                            next_support.push(j);
                        }
                        next[j] += scale * w;
                    }
                }
                for &i in &support {
                    cur[i] = 0.0;
                }
                for &j in &next_support {
                    in_next[j] = false;
                }
                std::mem::swap(&mut cur, &mut next);
                std::mem::swap(&mut support, &mut next_support);
                next_support.clear();
                step += 1;
            }
            out[slot][k] = cur[k];
        }
        for &i in &support {
            cur[i] = 0.0;
        }
    }
    Ok(out)
}

/// `u_{e_k}(t) = π_k (Mᵗ)_kk − π_k²` for every vertex `k`, indexed
/// `[time][vertex]`.
pub fn vertex_assortativities(op: &WalkOperator, ts: &TimeGrid) -> Result<Vec<Vec<f64>>> {
    let pi = op.pi();
    let mut ret = return_probabilities(op, ts)?;
    for row in &mut ret {
        for (x, &p) in row.iter_mut().zip(pi) {
            *x = p * *x - p * p;
        }
    }
    Ok(ret)
}

/// `r(t, I) = Σ_k π_k (Mᵗ)_kk − ‖π‖²`.
pub fn identity_assortativity(op: &WalkOperator, ts: &TimeGrid) -> Result<Vec<f64>> {
    Ok(vertex_assortativities(op, ts)?
        .into_iter()
        .map(compensated_sum)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Graph, Topology};

    fn k(n: usize) -> WalkOperator {
        WalkOperator::new(&generate_topology(Topology::Clique, n, 0.0, 0).unwrap()).unwrap()
    }

    #[test]
    fn constant_attribute_has_zero_covariance() {
        let g = generate_topology(Topology::ErdosRenyi, 20, 0.3, 2).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        for u in numeric_assortativity(&op, &[3.5; 20], &TimeGrid::up_to(6)).unwrap() {
            assert!(u.abs() < 1e-12);
        }
    }

    #[test]
    fn k3_single_vertex_variance() {
        let u = numeric_assortativity(&k(3), &[1.0, 0.0, 0.0], &TimeGrid::new(vec![0])).unwrap();
        assert!((u[0] - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn identity_closed_forms() {
        let r = identity_assortativity(&k(4), &TimeGrid::new(vec![0])).unwrap();
        assert!((r[0] - 0.75).abs() < 1e-15);
        // K3 at t = 2: N/2m − ‖π‖² = 1/2 − 1/3
        let r = identity_assortativity(&k(3), &TimeGrid::new(vec![2])).unwrap();
        assert!((r[0] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn identity_matches_general_categorical() {
        let g = generate_topology(Topology::ErdosRenyi, 15, 0.4, 11).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        let ts = TimeGrid::up_to(5);
        let fast = identity_assortativity(&op, &ts).unwrap();
        let slow = categorical_assortativity(&op, &Indicator::identity(15), &ts).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(matches!(
            numeric_assortativity(&k(3), &[1.0], &TimeGrid::default()),
            Err(Error::Argument(_))
        ));
        let h = Indicator::new(vec![0, 0], 1).unwrap();
        assert!(matches!(
            categorical_assortativity(&k(3), &h, &TimeGrid::default()),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn capacity_guard() {
        let g = Graph::from_pairs(IDENTITY_CAPACITY + 1, &[]).unwrap();
        let op = WalkOperator::new(&g).unwrap();
        assert!(matches!(
            identity_assortativity(&op, &TimeGrid::default()),
            Err(Error::Capacity(_))
        ));
    }
}
