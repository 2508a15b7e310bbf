use std::collections::VecDeque;

use crate::markov::matrix::TransitionMatrix;

/// Structural checks on a transition matrix. Failures are reported, not raised.
#[derive(Debug, Clone, PartialEq)]
pub struct SiaReport {
    pub max_row_deviation: f64,
    pub min_entry: f64,
    pub max_entry: f64,
    /// Support graph is strongly connected.
    pub irreducible: bool,
    /// Every state has a positive self-loop.
    pub self_loops: bool,
    /// Period of the chain, when irreducible.
    pub period: Option<usize>,
}

impl SiaReport {
    pub fn stochastic(&self, tol: f64) -> bool {
        self.max_row_deviation <= tol && self.min_entry >= 0.0 && self.max_entry <= 1.0
    }

    pub fn aperiodic(&self) -> bool {
        self.self_loops || self.period == Some(1)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.stochastic(tol) && self.irreducible && self.aperiodic()
    }
}

pub fn verify_sia(a: &TransitionMatrix) -> SiaReport {
    let n = a.dim();
    let (mut min_entry, mut max_entry) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        for &p in a.row(i) {
            min_entry = min_entry.min(p);
            max_entry = max_entry.max(p);
        }
    }
    let forward: Vec<Vec<usize>> = (0..n).map(|i| a.support(i).map(|(j, _)| j).collect()).collect();
    let mut backward = vec![Vec::new(); n];
    for (i, out) in forward.iter().enumerate() {
        for &j in out {
            backward[j].push(i);
        }
    }
    let depth = bfs(&forward, 0);
    let irreducible = n > 0 && depth.iter().all(Option::is_some) && bfs(&backward, 0).iter().all(Option::is_some);

    // For a strongly connected graph the period is the gcd of
    // depth(u) + 1 - depth(v) over all edges u -> v.
    let period = irreducible.then(|| {
        let mut g = 0;
        for (u, out) in forward.iter().enumerate() {
            for &v in out {
                let (du, dv) = (depth[u].unwrap(), depth[v].unwrap());
                g = gcd(g, (du + 1).abs_diff(dv));
            }
        }
        g
    });

    SiaReport {
        max_row_deviation: a.max_row_sum_deviation(),
        min_entry,
        max_entry,
        irreducible,
        self_loops: n > 0 && (0..n).all(|i| a.get(i, i) > 0.0),
        period,
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut depth = vec![None; adj.len()];
    if adj.is_empty() {
        return depth;
    }
    depth[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let d = depth[u].unwrap();
        for &v in &adj[u] {
            if depth[v].is_none() {
                depth[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    depth
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_reducible() {
        let a = TransitionMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = verify_sia(&a);
        assert!(r.stochastic(1e-12));
        assert!(!r.irreducible);
        assert!(!r.passes(1e-12));
    }

    #[test]
    fn two_cycle_is_periodic() {
        let a = TransitionMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = verify_sia(&a);
        assert!(r.irreducible);
        assert_eq!(r.period, Some(2));
        assert!(!r.aperiodic());
    }

    #[test]
    fn mixed_cycles_without_self_loops() {
        // Cycles of length 2 and 3 through state 0.
        let a = TransitionMatrix::from_rows(vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let r = verify_sia(&a);
        assert!(!r.self_loops);
        assert_eq!(r.period, Some(1));
        assert!(r.passes(1e-12));
    }

    #[test]
    fn row_deviation_reported() {
        let a = TransitionMatrix::from_rows(vec![vec![0.5, 0.4], vec![0.5, 0.5]]).unwrap();
        let r = verify_sia(&a);
        assert!((r.max_row_deviation - 0.1).abs() < 1e-12);
        assert!(!r.stochastic(1e-12));
    }
}
