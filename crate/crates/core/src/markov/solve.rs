use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{Error, Result};
use crate::markov::matrix::TransitionMatrix;

/// Stationary distribution of a row-stochastic chain, `pi^T A = pi^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
}

impl StationaryDistribution {
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    /// `max_j |(pi^T A)_j - pi_j|`.
    pub fn invariance_residual(&self, a: &TransitionMatrix) -> f64 {
        left_multiply(&self.pi, a).iter().zip(&self.pi).map(|(x, p)| (x - p).abs()).fold(0.0, f64::max)
    }
}

/// `pi^T A`.
pub fn left_multiply(pi: &[f64], a: &TransitionMatrix) -> Vec<f64> {
    let mut out = vec![0.0; a.dim()];
    for (i, &p) in pi.iter().enumerate() {
        if p != 0.0 {
            for (o, &x) in out.iter_mut().zip(a.row(i)) {
                *o += p * x;
            }
        }
    }
    out
}

/// Solves `(A^T - I + B) pi = b` with `B` all ones and `b` the ones vector.
/// The transpose is needed because `A` is row-stochastic.
pub fn steady_state(a: &TransitionMatrix) -> Result<StationaryDistribution> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::Singular);
    }
    let m = Mat::<f64>::from_fn(n, n, |i, j| a.get(j, i) - if i == j { 1.0 } else { 0.0 } + 1.0);
    let rhs = Mat::<f64>::from_fn(n, 1, |_, _| 1.0);
    let x = m.partial_piv_lu().solve(&rhs);

    let mut pi: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if pi.iter().any(|p| !p.is_finite() || *p < -1e-9) {
        return Err(Error::Singular);
    }
    pi.iter_mut().for_each(|p| *p = p.max(0.0));
    let total: f64 = pi.iter().sum();
    if !(total - 1.0).abs().lt(&1e-6) {
        return Err(Error::Singular);
    }
    pi.iter_mut().for_each(|p| *p /= total);
    let dist = StationaryDistribution { pi };
    if dist.invariance_residual(a) > 1e-9 {
        return Err(Error::Singular);
    }
    Ok(dist)
}

/// `sum_i pi_i A_ii`, the probability the buffer state does not change.
pub fn outage_analytic(a: &TransitionMatrix, pi: &StationaryDistribution) -> f64 {
    assert_eq!(a.dim(), pi.len(), "matrix and distribution dimensions differ");
    pi.pi.iter().enumerate().map(|(i, p)| p * a.get(i, i)).sum::<f64>().clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_two_state() {
        let a = TransitionMatrix::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let pi = steady_state(&a).unwrap();
        assert!((pi.pi[0] - 0.5).abs() < 1e-15 && (pi.pi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_two_state() {
        // pi = (b, a) / (a + b) for flip rates a, b.
        let (x, y) = (0.2, 0.6);
        let a = TransitionMatrix::from_rows(vec![vec![1.0 - x, x], vec![y, 1.0 - y]]).unwrap();
        let pi = steady_state(&a).unwrap();
        assert!((pi.pi[0] - y / (x + y)).abs() < 1e-14);
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let a = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(steady_state(&a), Err(Error::Singular));
    }

    #[test]
    fn outage_edge_cases() {
        let id = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let flip = TransitionMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let pi = StationaryDistribution { pi: vec![0.5, 0.5] };
        assert_eq!(outage_analytic(&id, &pi), 1.0);
        assert_eq!(outage_analytic(&flip, &pi), 0.0);
    }
}
