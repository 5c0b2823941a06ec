//! Independent brute-force references and reproducible random-instance
//! generators.
//!
//! The oracles here deliberately avoid the production kernels: the
//! landscape oracle counts bars directly instead of consulting a
//! [`RankTable`](crate::rank::RankTable), and the matching oracle
//! enumerates every coupling instead of solving an assignment problem.

use crate::barcode::Barcode;
use crate::grid::Grid;
use crate::poset::GridInterval;
use crate::transport::{CostParams, Norm};
use crate::util::coord_to_f64;
use crate::{Coord, Error, PlaneDiagram, Result};

/// Reproducible description of a random barcode instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomModuleSpec {
    pub m: usize,
    pub max_bars: usize,
    pub max_multiplicity: i64,
    pub seed: u64,
}

/// SplitMix64: tiny, stable, and good enough for instance generation.
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}

/// Uniform barcode: the bar count is uniform on `{0, …, max_bars}`, each
/// bar `[s,t)` is uniform over `0 ≤ s < t ≤ m+1`, multiplicities uniform
/// on `{1, …, max_multiplicity}`. Identical spec ⇒ identical output.
pub fn random_barcode(spec: &RandomModuleSpec) -> Barcode {
    let mut rng = SplitMix64(spec.seed ^ 0xA076_1D64_78BD_642F);
    let mut bc = Barcode::empty(spec.m);
    if spec.max_bars == 0 {
        return bc;
    }
    let count = rng.below(spec.max_bars as u64 + 1);
    for _ in 0..count {
        let (s, t) = loop {
            let s = rng.below(spec.m as u64 + 2);
            let t = rng.below(spec.m as u64 + 2);
            if s < t {
                break (s, t);
            }
            if t < s {
                break (t, s);
            }
        };
        let mult = 1 + rng.below(spec.max_multiplicity.max(1) as u64) as i64;
        bc.add(
            GridInterval::new(s as usize, t as usize).expect("s < t"),
            mult,
        )
        .expect("bar in range");
    }
    bc
}

/// Direct evaluation of the landscape definition: the largest `h > 0` such
/// that at least `k` bars cover the real interval `[t−h, t+h)`, taken over
/// the finite candidate set `{|t − ι(i)|} ∪ {|ι(j) − t|}`. Coverage is
/// counted straight from the bars, independent of the rank-table code path.
pub fn brute_rank_sup(bc: &Barcode, grid: &Grid, k: i64, t: Coord) -> Coord {
    assert!(k >= 1);
    let covering_count = |a: Coord, b: Coord| -> i64 {
        bc.bars()
            .filter(|(bar, _)| grid.value(bar.birth()) <= a && grid.value(bar.death()) >= b)
            .map(|(_, mult)| mult)
            .sum()
    };
    let mut candidates: Vec<Coord> = Vec::new();
    for &p in grid.points() {
        let h = if p <= t { t - p } else { p - t };
        if h > Coord::from_integer(0) {
            candidates.push(h);
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut best = Coord::from_integer(0);
    for h in candidates {
        if covering_count(t - h, t + h) >= k {
            best = h;
        }
    }
    best
}

const BRUTE_POINT_LIMIT: usize = 10;

/// Exhaustive minimum over every coupling of two plane diagrams: each point
/// of `d` matches a point of `e` or its diagonal projection, leftovers of
/// `e` go to the diagonal. Factorial in the point count, guarded.
pub fn brute_wasserstein(d: &PlaneDiagram, e: &PlaneDiagram, cp: CostParams) -> Result<f64> {
    d.ensure_non_negative()?;
    e.ensure_non_negative()?;
    let dp = d.expand_multiset();
    let ep = e.expand_multiset();
    let total = dp.len() + ep.len();
    if total > BRUTE_POINT_LIMIT {
        return Err(Error::OracleTooLarge {
            got: total,
            limit: BRUTE_POINT_LIMIT,
        });
    }

    // Local cost formulas, kept separate from the transport module.
    let qn = |dx: f64, dy: f64| -> f64 {
        match cp.q {
            Norm::Finite(q) => {
                if q == 1.0 {
                    dx.abs() + dy.abs()
                } else {
                    (dx.abs().powf(q) + dy.abs().powf(q)).powf(1.0 / q)
                }
            }
            Norm::Infinity => dx.abs().max(dy.abs()),
        }
    };
    let pair_cost = |a: (Coord, Coord), b: (Coord, Coord)| -> f64 {
        qn(
            coord_to_f64(a.0) - coord_to_f64(b.0),
            coord_to_f64(a.1) - coord_to_f64(b.1),
        )
    };
    let diag_cost = |a: (Coord, Coord)| -> f64 {
        let gap = (coord_to_f64(a.1) - coord_to_f64(a.0)) / 2.0;
        qn(gap, gap)
    };
    let combine = |costs: &[f64]| -> f64 {
        match cp.p {
            Norm::Finite(p) => {
                if p == 1.0 {
                    costs.iter().sum()
                } else {
                    costs.iter().map(|c| c.powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
            Norm::Infinity => costs.iter().cloned().fold(0.0, f64::max),
        }
    };

    let mut best = f64::INFINITY;
    let mut used = vec![false; ep.len()];
    let mut costs: Vec<f64> = Vec::with_capacity(total);

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        i: usize,
        dp: &[(Coord, Coord)],
        ep: &[(Coord, Coord)],
        used: &mut [bool],
        costs: &mut Vec<f64>,
        best: &mut f64,
        pair_cost: &dyn Fn((Coord, Coord), (Coord, Coord)) -> f64,
        diag_cost: &dyn Fn((Coord, Coord)) -> f64,
        combine: &dyn Fn(&[f64]) -> f64,
    ) {
        if i == dp.len() {
            let mut all = costs.clone();
            for (j, pt) in ep.iter().enumerate() {
                if !used[j] {
                    all.push(diag_cost(*pt));
                }
            }
            let c = combine(&all);
            if c < *best {
                *best = c;
            }
            return;
        }
        for j in 0..ep.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            costs.push(pair_cost(dp[i], ep[j]));
            recurse(
                i + 1,
                dp,
                ep,
                used,
                costs,
                best,
                pair_cost,
                diag_cost,
                combine,
            );
            costs.pop();
            used[j] = false;
        }
        costs.push(diag_cost(dp[i]));
        recurse(
            i + 1,
            dp,
            ep,
            used,
            costs,
            best,
            pair_cost,
            diag_cost,
            combine,
        );
        costs.pop();
    }

    recurse(
        0, &dp, &ep, &mut used, &mut costs, &mut best, &pair_cost, &diag_cost, &combine,
    );
    Ok(if best.is_finite() { best } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coord {
        Coord::from_integer(n)
    }

    #[test]
    fn random_barcode_is_deterministic() {
        let spec = RandomModuleSpec {
            m: 9,
            max_bars: 7,
            max_multiplicity: 3,
            seed: 12345,
        };
        assert_eq!(random_barcode(&spec), random_barcode(&spec));
        let other = RandomModuleSpec {
            seed: 12346,
            ..spec
        };
        // Overwhelmingly likely to differ.
        assert_ne!(random_barcode(&spec), random_barcode(&other));
    }

    #[test]
    fn random_barcode_zero_bars() {
        let spec = RandomModuleSpec {
            m: 5,
            max_bars: 0,
            max_multiplicity: 1,
            seed: 1,
        };
        assert!(random_barcode(&spec).is_empty());
    }

    #[test]
    fn random_barcode_mean_count() {
        let max_bars = 10usize;
        let mut total = 0usize;
        let draws = 1000;
        for seed in 0..draws {
            let spec = RandomModuleSpec {
                m: 8,
                max_bars,
                max_multiplicity: 1,
                seed,
            };
            total += random_barcode(&spec).bars().count();
        }
        let mean = total as f64 / draws as f64;
        // Uniform count on {0..10} has mean 5; merged duplicate bars can
        // shave a little off.
        assert!((mean - 5.0).abs() < 0.6, "mean bar count {mean}");
    }

    #[test]
    fn brute_sup_on_single_bar_is_tent() {
        let bc = Barcode::new(5, &[(1, 5, 1)]).unwrap();
        let grid = Grid::identity(5);
        assert_eq!(brute_rank_sup(&bc, &grid, 1, c(3)), c(2));
        assert_eq!(brute_rank_sup(&bc, &grid, 1, c(2)), c(1));
        assert_eq!(brute_rank_sup(&bc, &grid, 2, c(3)), c(0));
    }

    #[test]
    fn brute_sup_three_bar_level2_at_7() {
        let bc = Barcode::new(11, &[(2, 8, 1), (4, 12, 1), (6, 10, 1)]).unwrap();
        let grid = Grid::identity(11);
        assert_eq!(brute_rank_sup(&bc, &grid, 2, c(7)), c(1));
    }

    #[test]
    fn brute_wasserstein_simple_values() {
        let d = PlaneDiagram::from_points(&[(c(3), c(9), 1)]);
        let e = PlaneDiagram::from_points(&[(c(4), c(9), 1)]);
        let w = brute_wasserstein(
            &d,
            &e,
            CostParams::new(Norm::Finite(1.0), Norm::Finite(1.0)).unwrap(),
        )
        .unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        let same = brute_wasserstein(
            &d,
            &d,
            CostParams::new(Norm::Finite(1.0), Norm::Finite(1.0)).unwrap(),
        )
        .unwrap();
        assert_eq!(same, 0.0);
    }

    #[test]
    fn brute_wasserstein_guards_size() {
        let pts: Vec<_> = (0..11).map(|i| (c(i), c(i + 1), 1)).collect();
        let d = PlaneDiagram::from_points(&pts);
        let e = PlaneDiagram::empty();
        assert!(matches!(
            brute_wasserstein(
                &d,
                &e,
                CostParams::new(Norm::Finite(1.0), Norm::Finite(1.0)).unwrap()
            ),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
