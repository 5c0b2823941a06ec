//! Signed diagrams: finitely supported integer-valued functions on
//! half-open intervals, at grid level ([`SignedDiagram`]) and in the real
//! plane ([`PlaneDiagram`]). Persistence diagrams are the non-negative
//! ones; graded levels take values in {−1, 0, 1}.

use crate::grid::Grid;
use crate::poset::{GridInterval, IntervalFunction};
use crate::{Coord, Error, Result};
use std::collections::BTreeMap;

/// Finitely supported map `[m+1]²_< → Z` on grid indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDiagram {
    m: usize,
    points: BTreeMap<GridInterval, i64>,
}

impl SignedDiagram {
    pub fn empty(m: usize) -> Self {
        SignedDiagram {
            m,
            points: BTreeMap::new(),
        }
    }

    /// Collect the support of an interval function.
    pub fn from_function(f: &IntervalFunction) -> Self {
        let mut points = BTreeMap::new();
        for ((a, b), v) in f.support() {
            points.insert(GridInterval::new(a, b).expect("support cell"), v);
        }
        SignedDiagram { m: f.m(), points }
    }

    pub fn to_function(&self) -> IntervalFunction {
        let mut f = IntervalFunction::zeros(self.m);
        for (&bar, &v) in &self.points {
            f.set(bar.birth(), bar.death(), v).expect("domain cell");
        }
        f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set(&mut self, bar: GridInterval, value: i64) -> Result<()> {
        if bar.death() > self.m + 1 {
            return Err(Error::OutOfDomain {
                birth: bar.birth(),
                death: bar.death(),
                max: self.m + 1,
            });
        }
        if value == 0 {
            self.points.remove(&bar);
        } else {
            self.points.insert(bar, value);
        }
        Ok(())
    }

    pub fn get(&self, bar: GridInterval) -> i64 {
        self.points.get(&bar).copied().unwrap_or(0)
    }

    /// Support in (birth, death) order.
    pub fn points(&self) -> impl Iterator<Item = (GridInterval, i64)> + '_ {
        self.points.iter().map(|(&bar, &v)| (bar, v))
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values_in_unit_range(&self) -> bool {
        self.points.values().all(|v| (-1..=1).contains(v))
    }

    pub fn is_non_negative(&self) -> bool {
        self.points.values().all(|&v| v >= 0)
    }

    /// Pointwise sum over a common grid.
    pub fn add(&self, other: &SignedDiagram) -> Result<SignedDiagram> {
        if self.m != other.m {
            return Err(Error::GridMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let mut out = self.clone();
        for (bar, v) in other.points() {
            let merged = out.get(bar) + v;
            out.set(bar, merged)?;
        }
        Ok(out)
    }

    /// Relabel support points through ι (mismatched grid size is an error).
    pub fn embed(&self, grid: &Grid) -> Result<PlaneDiagram> {
        if grid.m() != self.m {
            return Err(Error::GridMismatch {
                expected: self.m,
                got: grid.m(),
            });
        }
        let mut out = PlaneDiagram::empty();
        for (bar, v) in self.points() {
            out.set(grid.value(bar.birth()), grid.value(bar.death()), v);
        }
        Ok(out)
    }
}

/// Finitely supported map `R²_< → Z`: points `(birth, death)` in the real
/// plane above the diagonal, with integer values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlaneDiagram {
    points: BTreeMap<(Coord, Coord), i64>,
}

impl PlaneDiagram {
    pub fn empty() -> Self {
        PlaneDiagram::default()
    }

    pub fn from_points(pts: &[(Coord, Coord, i64)]) -> Self {
        let mut d = PlaneDiagram::empty();
        for &(x, y, v) in pts {
            d.add_value(x, y, v);
        }
        d
    }

    pub fn set(&mut self, birth: Coord, death: Coord, value: i64) {
        assert!(
            birth < death,
            "plane points live strictly above the diagonal"
        );
        if value == 0 {
            self.points.remove(&(birth, death));
        } else {
            self.points.insert((birth, death), value);
        }
    }

    pub fn add_value(&mut self, birth: Coord, death: Coord, delta: i64) {
        let v = self.get(birth, death) + delta;
        self.set(birth, death, v);
    }

    pub fn get(&self, birth: Coord, death: Coord) -> i64 {
        self.points.get(&(birth, death)).copied().unwrap_or(0)
    }

    pub fn points(&self) -> impl Iterator<Item = ((Coord, Coord), i64)> + '_ {
        self.points.iter().map(|(&p, &v)| (p, v))
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_non_negative(&self) -> bool {
        self.points.values().all(|&v| v >= 0)
    }

    /// Total mass counted with multiplicity (of the absolute values).
    pub fn total_multiplicity(&self) -> i64 {
        self.points.values().map(|v| v.abs()).sum()
    }

    /// The unique decomposition `self = pos − neg` into persistence
    /// diagrams with disjoint support.
    pub fn split_signs(&self) -> (PlaneDiagram, PlaneDiagram) {
        let mut pos = PlaneDiagram::empty();
        let mut neg = PlaneDiagram::empty();
        for (&(x, y), &v) in &self.points {
            if v > 0 {
                pos.set(x, y, v);
            } else {
                neg.set(x, y, -v);
            }
        }
        (pos, neg)
    }

    pub fn add(&self, other: &PlaneDiagram) -> PlaneDiagram {
        let mut out = self.clone();
        for ((x, y), v) in other.points() {
            out.add_value(x, y, v);
        }
        out
    }

    pub fn ensure_non_negative(&self) -> Result<()> {
        for (&(x, y), &v) in &self.points {
            if v < 0 {
                return Err(Error::NegativePoint {
                    birth: x.to_string(),
                    death: y.to_string(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Expand into one entry per unit of (non-negative) multiplicity.
    pub fn expand_multiset(&self) -> Vec<(Coord, Coord)> {
        let mut out = Vec::new();
        for (&(x, y), &v) in &self.points {
            debug_assert!(v >= 0);
            for _ in 0..v {
                out.push((x, y));
            }
        }
        out
    }
}
