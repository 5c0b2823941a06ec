//! Persistence landscapes stored by their critical points, the step
//! function that is their derivative, and exact integration back.
//!
//! The critical points of level k are exactly the points of `pd_k` in
//! (midpoint, half-width) coordinates, plus the zeros at the ends of each
//! staircase component, so the landscape encoding and the graded diagram
//! carry the same data.

use crate::diagram::SignedDiagram;
use crate::grading::{staircase_decompose, GradedDiagram, StaircaseComponent};
use crate::grid::Grid;
use crate::poset::GridInterval;
use crate::{Coord, Error, Result};
use num_traits::Zero;

/// A continuous piecewise-linear function given by critical points
/// `(t, h)` with strictly increasing `t`; identically 0 outside them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Coord, Coord)>,
}

impl PiecewiseLinear {
    pub fn zero() -> Self {
        PiecewiseLinear { points: Vec::new() }
    }

    pub fn points(&self) -> &[(Coord, Coord)] {
        &self.points
    }

    pub fn eval(&self, t: Coord) -> Coord {
        let pts = &self.points;
        if pts.is_empty() || t <= pts[0].0 || t >= pts[pts.len() - 1].0 {
            // Endpoints are zeros by construction.
            return Coord::zero();
        }
        let idx = pts.partition_point(|&(ti, _)| ti <= t);
        let (t0, h0) = pts[idx - 1];
        if t0 == t {
            return h0;
        }
        let (t1, h1) = pts[idx];
        h0 + (h1 - h0) * (t - t0) / (t1 - t0)
    }

    /// Every stored segment must have slope in {−1, 0, +1}, and slope 0
    /// only at height 0.
    pub fn slopes_valid(&self) -> bool {
        self.points.windows(2).all(|w| {
            let (t0, h0) = w[0];
            let (t1, h1) = w[1];
            let slope = (h1 - h0) / (t1 - t0);
            let one = Coord::from_integer(1);
            slope == one || slope == -one || (slope.is_zero() && h0.is_zero() && h1.is_zero())
        })
    }
}

/// The landscape of a module: one piecewise-linear level per k = 1..K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Landscape {
    levels: Vec<PiecewiseLinear>,
}

impl Landscape {
    pub fn levels(&self) -> &[PiecewiseLinear] {
        &self.levels
    }

    pub fn max_rank(&self) -> usize {
        self.levels.len()
    }

    /// λ_k(t); 0 for k > K.
    pub fn eval(&self, k: usize, t: Coord) -> Coord {
        assert!(k >= 1, "landscape level must be positive");
        self.levels
            .get(k - 1)
            .map_or_else(Coord::zero, |level| level.eval(t))
    }
}

fn midpoint(grid: &Grid, p: GridInterval) -> (Coord, Coord) {
    let a = grid.value(p.birth());
    let b = grid.value(p.death());
    let two = Coord::from_integer(2);
    ((a + b) / two, (b - a) / two)
}

fn component_critical_points(grid: &Grid, comp: &StaircaseComponent) -> Vec<(Coord, Coord)> {
    let mut pts = Vec::with_capacity(2 * comp.maxima.len() + 1);
    let start = grid.value(comp.maxima[0].birth());
    pts.push((start, Coord::zero()));
    for (j, &apex) in comp.maxima.iter().enumerate() {
        pts.push(midpoint(grid, apex));
        if j < comp.meets.len() {
            pts.push(midpoint(grid, comp.meets[j]));
        }
    }
    let end = grid.value(comp.maxima[comp.maxima.len() - 1].death());
    pts.push((end, Coord::zero()));
    pts
}

/// Build the landscape of a graded diagram over a grid. Level k's critical
/// points are the ± points of `pd_k` in (midpoint, half-width) coordinates
/// together with the component-end zeros; unrealizable levels are
/// rejected.
pub fn landscape_from_graded(gd: &GradedDiagram, grid: &Grid) -> Result<Landscape> {
    if grid.m() != gd.m() {
        return Err(Error::GridMismatch {
            expected: gd.m(),
            got: grid.m(),
        });
    }
    let mut levels = Vec::with_capacity(gd.max_rank());
    for level in gd.levels() {
        levels.push(landscape_level(level, grid)?);
    }
    Ok(Landscape { levels })
}

fn landscape_level(level: &SignedDiagram, grid: &Grid) -> Result<PiecewiseLinear> {
    let check = crate::grading::realizability_check(level);
    if !check.realizable {
        let (p, v) = level
            .points()
            .next()
            .unwrap_or((GridInterval::new(0, 1).unwrap(), 0));
        return Err(Error::NotRealizable {
            birth: p.birth(),
            death: p.death(),
            reason: check
                .diagnostics
                .unwrap_or_else(|| format!("level value {v} not realizable")),
        });
    }
    let staircase = staircase_decompose(level)?;
    let mut pts: Vec<(Coord, Coord)> = Vec::new();
    for comp in &staircase.components {
        for p in component_critical_points(grid, comp) {
            // Touching components share their zero; store it once.
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
    }
    Ok(PiecewiseLinear { points: pts })
}

/// A compactly supported step function with values in {−1, 0, +1} on open
/// intervals, 0 at breakpoints and outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    /// Disjoint `(start, end, sign)` pieces in increasing order.
    pieces: Vec<(Coord, Coord, i8)>,
}

impl StepFunction {
    pub fn pieces(&self) -> &[(Coord, Coord, i8)] {
        &self.pieces
    }

    /// Value on the open interval containing `t`; 0 at breakpoints.
    pub fn eval(&self, t: Coord) -> i64 {
        for &(start, end, sign) in &self.pieces {
            if start < t && t < end {
                return i64::from(sign);
            }
        }
        0
    }
}

/// The derivative ρ_k of level k over a grid: within each staircase
/// component, alternating ±1 pieces split at the midpoints of the
/// component's points, starting with +1 after the left end.
pub fn derivative(level: &SignedDiagram, grid: &Grid) -> Result<StepFunction> {
    if grid.m() != level.m() {
        return Err(Error::GridMismatch {
            expected: level.m(),
            got: grid.m(),
        });
    }
    let staircase = staircase_decompose(level)?;
    let mut pieces = Vec::new();
    for comp in &staircase.components {
        let critical = component_critical_points(grid, comp);
        // critical = [(start,0), m_1, …, m_{2m_i−1}, (end,0)] in t-order.
        let mut sign = 1i8;
        for w in critical.windows(2) {
            pieces.push((w[0].0, w[1].0, sign));
            sign = -sign;
        }
    }
    Ok(StepFunction { pieces })
}

/// Exact cumulative integral `∫_{−∞}^{t}` of a step function.
pub fn integrate(sf: &StepFunction, t: Coord) -> Coord {
    let mut acc = Coord::zero();
    for &(start, end, sign) in sf.pieces() {
        if t <= start {
            break;
        }
        let upper = if t < end { t } else { end };
        acc += Coord::from_integer(i64::from(sign)) * (upper - start);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Barcode;
    use crate::grading::{graded_diagram, graded_rank};
    use crate::oracles::{brute_rank_sup, random_barcode, RandomModuleSpec, SplitMix64};
    use crate::rank::rank_from_barcode;

    fn c(n: i64) -> Coord {
        Coord::from_integer(n)
    }

    fn half(n: i64) -> Coord {
        Coord::new(n, 2)
    }

    fn landscape_of(bc: &Barcode) -> Landscape {
        let gd = graded_diagram(&graded_rank(&rank_from_barcode(bc))).unwrap();
        landscape_from_graded(&gd, &Grid::identity(bc.m())).unwrap()
    }

    #[test]
    fn three_bar_level2_critical_points() {
        let bc = Barcode::new(11, &[(2, 8, 1), (4, 12, 1), (6, 10, 1)]).unwrap();
        let ls = landscape_of(&bc);
        let pts = ls.levels()[1].points();
        assert_eq!(
            pts,
            &[
                (c(4), c(0)),
                (c(6), c(2)),
                (c(7), c(1)),
                (c(8), c(2)),
                (c(10), c(0)),
            ]
        );
        assert_eq!(ls.eval(2, c(7)), c(1));
    }

    #[test]
    fn single_bar_is_a_tent() {
        let bc = Barcode::new(9, &[(2, 8, 1)]).unwrap();
        let ls = landscape_of(&bc);
        assert_eq!(ls.max_rank(), 1);
        assert_eq!(
            ls.levels()[0].points(),
            &[(c(2), c(0)), (c(5), c(3)), (c(8), c(0))]
        );
        assert_eq!(ls.eval(1, c(5)), c(3));
        assert_eq!(ls.eval(1, c(4)), c(2));
        assert_eq!(ls.eval(1, half(5)), half(1));
        assert_eq!(ls.eval(2, c(5)), c(0));
        assert_eq!(ls.eval(1, c(100)), c(0));
    }

    #[test]
    fn empty_barcode_has_no_levels() {
        let ls = landscape_of(&Barcode::empty(4));
        assert_eq!(ls.max_rank(), 0);
        assert_eq!(ls.eval(1, c(2)), c(0));
    }

    #[test]
    fn slopes_are_unit_and_levels_nested() {
        for seed in 0..40 {
            let spec = RandomModuleSpec {
                m: 2 + (seed as usize % 9),
                max_bars: 7,
                max_multiplicity: 2,
                seed: 4000 + seed,
            };
            let bc = random_barcode(&spec);
            let ls = landscape_of(&bc);
            for level in ls.levels() {
                assert!(level.slopes_valid(), "seed {seed}");
            }
            // λ_k ≥ λ_{k+1} pointwise at quarter-grid samples.
            for k in 1..ls.max_rank() {
                for i in 0..=(4 * (bc.m() + 1)) {
                    let t = Coord::new(i as i64, 4);
                    assert!(
                        ls.eval(k, t) >= ls.eval(k + 1, t),
                        "seed {seed}, k {k}, t {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn eval_matches_brute_sup_oracle() {
        let mut rng = SplitMix64(77);
        for seed in 0..60 {
            let m = 2 + (seed as usize % 9);
            let spec = RandomModuleSpec {
                m,
                max_bars: 8,
                max_multiplicity: 2,
                seed: 6000 + seed,
            };
            let bc = random_barcode(&spec);
            let grid = Grid::identity(m);
            let ls = landscape_of(&bc);
            for _ in 0..20 {
                let k = 1 + rng.below(5) as i64;
                let t = Coord::new(rng.below(4 * (m as u64 + 4)) as i64, 4) - c(1);
                let expected = brute_rank_sup(&bc, &grid, k, t);
                assert_eq!(
                    ls.eval(k as usize, t),
                    expected,
                    "seed {seed}, k {k}, t {t}"
                );
            }
        }
    }

    #[test]
    fn overlapping_pair_derivative_steps() {
        // Level 1 of {[1,7), [3,13)}: +[1,7) − [3,7) + [3,13), midpoints 4, 5, 8.
        let bc = Barcode::new(12, &[(1, 7, 1), (3, 13, 1)]).unwrap();
        let gd = graded_diagram(&graded_rank(&rank_from_barcode(&bc))).unwrap();
        let rho = derivative(gd.level(1).unwrap(), &Grid::identity(12)).unwrap();
        assert_eq!(
            rho.pieces(),
            &[
                (c(1), c(4), 1),
                (c(4), c(5), -1),
                (c(5), c(8), 1),
                (c(8), c(13), -1),
            ]
        );
        assert_eq!(rho.eval(c(4)), 0);
        assert_eq!(rho.eval(half(9)), -1);
        assert_eq!(integrate(&rho, c(4)), c(3));
        assert_eq!(integrate(&rho, c(100)), c(0));
    }

    #[test]
    fn single_tent_derivative() {
        let bc = Barcode::new(9, &[(2, 8, 1)]).unwrap();
        let gd = graded_diagram(&graded_rank(&rank_from_barcode(&bc))).unwrap();
        let rho = derivative(gd.level(1).unwrap(), &Grid::identity(9)).unwrap();
        assert_eq!(rho.pieces(), &[(c(2), c(5), 1), (c(5), c(8), -1)]);
    }

    /// Raw signed sum of indicator terms: Σ c_i (χ_(a_i,m_i) − χ_(m_i,b_i)).
    fn raw_rho(level: &SignedDiagram, grid: &Grid, t: Coord) -> i64 {
        let two = Coord::from_integer(2);
        let mut acc = 0i64;
        for (p, sign) in level.points() {
            let a = grid.value(p.birth());
            let b = grid.value(p.death());
            let mid = (a + b) / two;
            if a < t && t < mid {
                acc += sign;
            }
            if mid < t && t < b {
                acc -= sign;
            }
        }
        acc
    }

    #[test]
    fn raw_and_simplified_derivative_agree() {
        let bc = Barcode::new(12, &[(1, 7, 1), (3, 13, 1)]).unwrap();
        let gd = graded_diagram(&graded_rank(&rank_from_barcode(&bc))).unwrap();
        let grid = Grid::identity(12);
        let level = gd.level(1).unwrap();
        let rho = derivative(level, &grid).unwrap();
        for i in 0..=1000 {
            let t = Coord::new(13 * i, 1000);
            assert_eq!(rho.eval(t), raw_rho(level, &grid, t), "t = {t}");
        }
        for seed in 0..10 {
            let spec = RandomModuleSpec {
                m: 6,
                max_bars: 6,
                max_multiplicity: 2,
                seed: 31 + seed,
            };
            let bc = random_barcode(&spec);
            let grid = Grid::identity(6);
            let gd = graded_diagram(&graded_rank(&rank_from_barcode(&bc))).unwrap();
            for level in gd.levels() {
                let rho = derivative(level, &grid).unwrap();
                for i in 0..200 {
                    let t = Coord::new(i * 7 + 1, 100);
                    assert_eq!(rho.eval(t), raw_rho(level, &grid, t), "seed {seed} t {t}");
                }
            }
        }
    }

    #[test]
    fn integral_of_derivative_is_landscape() {
        let mut rng = SplitMix64(99);
        for seed in 0..30 {
            let m = 2 + (seed as usize % 9);
            let spec = RandomModuleSpec {
                m,
                max_bars: 7,
                max_multiplicity: 2,
                seed: 7700 + seed,
            };
            let bc = random_barcode(&spec);
            let grid = Grid::identity(m);
            let gd = graded_diagram(&graded_rank(&rank_from_barcode(&bc))).unwrap();
            let ls = landscape_from_graded(&gd, &grid).unwrap();
            for (idx, level) in gd.levels().iter().enumerate() {
                let rho = derivative(level, &grid).unwrap();
                for _ in 0..30 {
                    let t = Coord::new(rng.below(8 * (m as u64 + 3)) as i64, 8) - c(1);
                    assert_eq!(
                        integrate(&rho, t),
                        ls.eval(idx + 1, t),
                        "seed {seed}, k {}, t {t}",
                        idx + 1
                    );
                }
            }
        }
    }

    #[test]
    fn unrealizable_level_rejected() {
        let mut bad = SignedDiagram::empty(5);
        bad.set(GridInterval::new(1, 3).unwrap(), -1).unwrap();
        let gd_err = landscape_level(&bad, &Grid::identity(5));
        assert!(gd_err.is_err());
    }

    #[test]
    fn touching_components_share_one_zero() {
        let mut dk = SignedDiagram::empty(7);
        dk.set(GridInterval::new(1, 4).unwrap(), 1).unwrap();
        dk.set(GridInterval::new(4, 6).unwrap(), 1).unwrap();
        let pl = landscape_level(&dk, &Grid::identity(7)).unwrap();
        assert_eq!(
            pl.points(),
            &[
                (c(1), c(0)),
                (half(5), half(3)),
                (c(4), c(0)),
                (c(5), c(1)),
                (c(6), c(0)),
            ]
        );
        assert!(pl.slopes_valid());
    }
}
