//! Exact matching kernels behind the Wasserstein distances: a potential
//! based min-cost assignment (shortest augmenting paths, O(n³)) and a
//! bottleneck assignment (threshold search over candidate costs with a
//! perfect-matching feasibility check).
//!
//! Both are generic over the cost scalar so the same code runs on exact
//! rationals and on floats.

use num_traits::Zero;
use std::ops::{Add, Sub};

/// Ordered additive scalar: satisfied by `Rational64` and by finite `f64`.
pub trait CostScalar: Clone + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Zero {}

impl<T> CostScalar for T where T: Clone + PartialOrd + Add<Output = T> + Sub<Output = T> + Zero {}

/// Minimum-cost perfect assignment on an n×n matrix given as a closure.
/// Returns `assign` with `assign[row] = col` and the total cost.
pub fn min_cost_assignment<T, F>(n: usize, cost: F) -> (Vec<usize>, T)
where
    T: CostScalar,
    F: Fn(usize, usize) -> T,
{
    if n == 0 {
        return (Vec::new(), T::zero());
    }
    // Dual potentials u, v and column matching p, 1-based with a dummy 0.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0].clone() - v[j].clone();
                if minv[j].is_none_or_less(&cur) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                if let Some(mj) = &minv[j] {
                    if delta.as_ref().is_none_or(|d| mj < d) {
                        delta = Some(mj.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta.expect("unused column exists while augmenting");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = u[p[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(mj) = minv[j].take() {
                    minv[j] = Some(mj - delta.clone());
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if p[j] != 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    let mut total = T::zero();
    for (i, &j) in assign.iter().enumerate() {
        total = total + cost(i, j);
    }
    (assign, total)
}

trait OptionOrd<T: PartialOrd> {
    fn is_none_or_less(&self, cur: &T) -> bool;
}

impl<T: PartialOrd> OptionOrd<T> for Option<T> {
    fn is_none_or_less(&self, cur: &T) -> bool {
        self.as_ref().is_none_or(|m| cur < m)
    }
}

/// Smallest threshold c such that a perfect matching exists using only
/// entries with cost ≤ c, plus a witnessing assignment. Exact when the
/// scalar is exact.
pub fn bottleneck_assignment<T, F>(n: usize, cost: F) -> (T, Vec<usize>)
where
    T: CostScalar,
    F: Fn(usize, usize) -> T,
{
    if n == 0 {
        return (T::zero(), Vec::new());
    }
    let mut candidates: Vec<T> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            candidates.push(cost(i, j));
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("costs are comparable"));
    candidates.dedup_by(|a, b| a == b);

    let feasible = |c: &T| -> Option<Vec<usize>> { perfect_matching_under(n, &cost, c) };

    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(&candidates[hi]).is_some(), "full graph must match");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(&candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = candidates[lo].clone();
    let matching = feasible(&threshold).expect("threshold is feasible");
    (threshold, matching)
}

/// Kuhn's augmenting-path perfect matching restricted to edges with
/// cost ≤ c; `None` if no perfect matching exists.
fn perfect_matching_under<T, F>(n: usize, cost: &F, c: &T) -> Option<Vec<usize>>
where
    T: CostScalar,
    F: Fn(usize, usize) -> T,
{
    let mut row_of_col = vec![usize::MAX; n];
    let mut col_of_row = vec![usize::MAX; n];

    fn augment<T: PartialOrd, F: Fn(usize, usize) -> T>(
        i: usize,
        n: usize,
        cost: &F,
        c: &T,
        visited: &mut [bool],
        row_of_col: &mut [usize],
        col_of_row: &mut [usize],
    ) -> bool {
        for j in 0..n {
            if visited[j] || cost(i, j) > *c {
                continue;
            }
            visited[j] = true;
            if row_of_col[j] == usize::MAX
                || augment(row_of_col[j], n, cost, c, visited, row_of_col, col_of_row)
            {
                row_of_col[j] = i;
                col_of_row[i] = j;
                return true;
            }
        }
        false
    }

    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(
            i,
            n,
            cost,
            c,
            &mut visited,
            &mut row_of_col,
            &mut col_of_row,
        ) {
            return None;
        }
    }
    Some(col_of_row)
}
