//! Grids: an injective order-preserving placement `ι: [m+1] → R` of the
//! discrete index set on the real line, and the extension of a rank table
//! to an evaluator over real half-open intervals.

use crate::rank::RankTable;
use crate::{Coord, Error, Result};

/// Strictly increasing real values `ι(0) < ι(1) < … < ι(m+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    points: Vec<Coord>,
}

impl Grid {
    pub fn new(points: Vec<Coord>) -> Result<Self> {
        assert!(points.len() >= 2, "a grid needs at least ι(0) and ι(1)");
        for i in 1..points.len() {
            if points[i - 1] >= points[i] {
                return Err(Error::GridNotIncreasing { index: i });
            }
        }
        Ok(Grid { points })
    }

    /// ι(j) = j.
    pub fn identity(m: usize) -> Self {
        Grid {
            points: (0..=m as i64 + 1).map(Coord::from_integer).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.points.len() - 2
    }

    /// ι(index).
    pub fn value(&self, index: usize) -> Coord {
        self.points[index]
    }

    pub fn points(&self) -> &[Coord] {
        &self.points
    }

    /// Largest index i with ι(i) ≤ a, if any.
    pub fn floor_index(&self, a: Coord) -> Option<usize> {
        self.points.iter().rposition(|&p| p <= a)
    }

    /// Smallest index j with ι(j) ≥ b, if any.
    pub fn ceil_index(&self, b: Coord) -> Option<usize> {
        self.points.iter().position(|&p| p >= b)
    }
}

/// A rank table extended over real intervals: the value at `[a,b)` is the
/// table at `[i,j)` where `i` is the largest index with `ι(i) ≤ a` and `j`
/// the smallest with `ι(j) ≥ b`, and 0 when either index is missing.
#[derive(Debug, Clone)]
pub struct RankEvaluator {
    table: RankTable,
    grid: Grid,
}

impl RankEvaluator {
    pub fn new(table: RankTable, grid: Grid) -> Result<Self> {
        if table.m() != grid.m() {
            return Err(Error::GridMismatch {
                expected: table.m(),
                got: grid.m(),
            });
        }
        Ok(RankEvaluator { table, grid })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn table(&self) -> &RankTable {
        &self.table
    }

    /// `Rank(M̄)[a,b)` for real `a < b`.
    pub fn eval(&self, a: Coord, b: Coord) -> i64 {
        assert!(a < b, "half-open interval needs a < b");
        let (Some(i), Some(j)) = (self.grid.floor_index(a), self.grid.ceil_index(b)) else {
            return 0;
        };
        debug_assert!(i < j);
        self.table.get(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Barcode;
    use crate::rank::rank_from_barcode;

    fn c(n: i64) -> Coord {
        Coord::from_integer(n)
    }

    fn half(n: i64) -> Coord {
        Coord::new(n, 2)
    }

    fn three_bar_evaluator() -> RankEvaluator {
        let bc = Barcode::new(11, &[(2, 8, 1), (4, 12, 1), (6, 10, 1)]).unwrap();
        RankEvaluator::new(rank_from_barcode(&bc), Grid::identity(11)).unwrap()
    }

    #[test]
    fn identity_grid_agrees_on_grid_points() {
        let ev = three_bar_evaluator();
        assert_eq!(ev.eval(c(6), c(8)), 3);
        assert_eq!(ev.eval(c(4), c(8)), 2);
        assert_eq!(ev.eval(c(0), c(12)), 0);
    }

    #[test]
    fn real_query_rounds_to_enclosing_cell() {
        // a = 6.5, b = 7.5 → i = 6, j = 8 → Rank[6,8) = 3.
        let ev = three_bar_evaluator();
        assert_eq!(ev.eval(half(13), half(15)), 3);
    }

    #[test]
    fn out_of_range_reads_zero() {
        let ev = three_bar_evaluator();
        assert_eq!(ev.eval(c(-5), c(3)), 0);
        assert_eq!(ev.eval(c(3), c(40)), 0);
    }

    #[test]
    fn constant_on_grid_cells() {
        // The evaluator is constant for a ∈ [ι(i), ι(i+1)) and b ∈ (ι(j−1), ι(j)].
        let ev = three_bar_evaluator();
        for i in 0..=10usize {
            for j in i + 2..=11usize {
                let base = ev.eval(c(i as i64), c(j as i64));
                for da in [Coord::new(1, 4), Coord::new(3, 4)] {
                    for db in [Coord::new(-3, 4), Coord::new(-1, 4), Coord::new(0, 1)] {
                        let a = c(i as i64) + da;
                        let b = c(j as i64) + db;
                        if a < b {
                            assert_eq!(ev.eval(a, b), base, "cell ({i},{j}) offset ({da},{db})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_m_rejected() {
        let bc = Barcode::new(3, &[(0, 2, 1)]).unwrap();
        let rt = rank_from_barcode(&bc);
        assert!(RankEvaluator::new(rt, Grid::identity(5)).is_err());
    }

    #[test]
    fn non_monotone_grid_rejected() {
        assert!(Grid::new(vec![c(0), c(2), c(2)]).is_err());
        assert!(Grid::new(vec![c(0), half(1), c(1)]).is_ok());
    }
}
