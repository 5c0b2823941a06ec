//! Incidence-algebra primitives on the poset of half-open intervals of
//! `[m+1] = {0, …, m+1}`.
//!
//! A half-open interval `[a,b)` with `0 ≤ a < b ≤ m+1` is identified with
//! the pair `(a,b)`; inclusion `[a,b) ⊆ [a',b')` holds iff `a' ≤ a` and
//! `b ≤ b'`. The Möbius function of this poset collapses to a four-point
//! stencil, so Möbius convolution is the familiar inclusion-exclusion of
//! persistence and zeta convolution is the "sum up and to the left" that
//! recovers a rank table from a diagram.

use crate::{Error, Result};

/// A half-open interval `[birth, death)` of grid indices, `birth < death`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridInterval {
    birth: usize,
    death: usize,
}

impl GridInterval {
    pub fn new(birth: usize, death: usize) -> Result<Self> {
        if birth >= death {
            return Err(Error::InvalidInterval {
                birth: birth as i64,
                death: death as i64,
            });
        }
        Ok(GridInterval { birth, death })
    }

    pub fn birth(&self) -> usize {
        self.birth
    }

    pub fn death(&self) -> usize {
        self.death
    }

    /// Containment `self ⊆ other`, the partial order of the interval poset.
    pub fn is_contained_in(&self, other: &GridInterval) -> bool {
        other.birth <= self.birth && self.death <= other.death
    }
}

impl std::fmt::Display for GridInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{})", self.birth, self.death)
    }
}

/// Storage switches to a sparse map above this grid size; `(m+2)²` dense
/// cells are the working set below it.
const DENSE_LIMIT_M: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Dense(Vec<i64>),
    Sparse(std::collections::BTreeMap<(usize, usize), i64>),
}

/// A total integer-valued function on `{ [a,b) : 0 ≤ a < b ≤ m+1 }`,
/// defaulting to 0. Houses rank tables, diagrams under convolution, and
/// every ζ/μ operand.
#[derive(Debug, Clone)]
pub struct IntervalFunction {
    m: usize,
    storage: Storage,
}

impl IntervalFunction {
    pub fn zeros(m: usize) -> Self {
        let storage = if m <= DENSE_LIMIT_M {
            Storage::Dense(vec![0; (m + 2) * (m + 2)])
        } else {
            Storage::Sparse(std::collections::BTreeMap::new())
        };
        IntervalFunction { m, storage }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest legal death index, `m + 1`.
    pub fn max_index(&self) -> usize {
        self.m + 1
    }

    fn in_domain(&self, birth: usize, death: usize) -> bool {
        birth < death && death <= self.m + 1
    }

    /// Value at `[birth, death)`; out-of-domain lookups read as 0, matching
    /// the boundary cases of the inversion formula.
    pub fn get(&self, birth: usize, death: usize) -> i64 {
        if !self.in_domain(birth, death) {
            return 0;
        }
        match &self.storage {
            Storage::Dense(v) => v[birth * (self.m + 2) + death],
            Storage::Sparse(map) => map.get(&(birth, death)).copied().unwrap_or(0),
        }
    }

    /// Signed-offset lookup used by the inversion stencil: any index
    /// outside `0 ≤ a < b ≤ m+1` reads as 0.
    pub fn get_signed(&self, birth: i64, death: i64) -> i64 {
        if birth < 0 || death < 0 {
            return 0;
        }
        self.get(birth as usize, death as usize)
    }

    pub fn set(&mut self, birth: usize, death: usize, value: i64) -> Result<()> {
        if !self.in_domain(birth, death) {
            return Err(Error::OutOfDomain {
                birth,
                death,
                max: self.m + 1,
            });
        }
        match &mut self.storage {
            Storage::Dense(v) => v[birth * (self.m + 2) + death] = value,
            Storage::Sparse(map) => {
                if value == 0 {
                    map.remove(&(birth, death));
                } else {
                    map.insert((birth, death), value);
                }
            }
        }
        Ok(())
    }

    /// Iterate the full triangular domain in (birth, death) order.
    pub fn domain(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.m;
        (0..=m).flat_map(move |a| (a + 1..=m + 1).map(move |b| (a, b)))
    }

    /// Support (non-zero cells) in (birth, death) order.
    pub fn support(&self) -> Vec<((usize, usize), i64)> {
        match &self.storage {
            Storage::Dense(_) => self
                .domain()
                .filter_map(|(a, b)| {
                    let v = self.get(a, b);
                    (v != 0).then_some(((a, b), v))
                })
                .collect(),
            Storage::Sparse(map) => map.iter().map(|(&cell, &v)| (cell, v)).collect(),
        }
    }

    pub fn max_value(&self) -> i64 {
        match &self.storage {
            Storage::Dense(_) => self
                .domain()
                .map(|(a, b)| self.get(a, b))
                .max()
                .unwrap_or(0),
            Storage::Sparse(map) => {
                let cells = (self.m + 1) * (self.m + 2) / 2;
                let sparse_max = map.values().copied().max().unwrap_or(0);
                if map.len() == cells {
                    sparse_max
                } else {
                    sparse_max.max(0)
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.storage {
            Storage::Dense(_) => self.domain().all(|(a, b)| self.get(a, b) == 0),
            Storage::Sparse(map) => map.is_empty(),
        }
    }

    /// Pointwise sum; both operands must share the same grid size.
    pub fn add(&self, other: &IntervalFunction) -> Result<IntervalFunction> {
        if self.m != other.m {
            return Err(Error::GridMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let mut out = IntervalFunction::zeros(self.m);
        for (a, b) in self.domain() {
            let v = self.get(a, b) + other.get(a, b);
            if v != 0 {
                out.set(a, b, v)?;
            }
        }
        Ok(out)
    }

    /// True iff `[a',b') ⊆ [a,b)` implies `f[a',b') ≥ f[a,b)`; rank tables
    /// and graded rank functions satisfy this.
    pub fn is_order_reversing(&self) -> bool {
        // Containment is generated by the two one-step moves birth+1 and
        // death-1, so checking neighbours suffices.
        for (a, b) in self.domain() {
            let v = self.get(a, b);
            if a + 1 < b && self.get(a + 1, b) < v {
                return false;
            }
            if b - a > 1 && self.get(a, b - 1) < v {
                return false;
            }
        }
        true
    }
}

impl PartialEq for IntervalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self
                .domain()
                .all(|(a, b)| self.get(a, b) == other.get(a, b))
    }
}

impl Eq for IntervalFunction {}

/// Closed-form Möbius function of the interval poset: with `lower = [x,y)`,
/// the value is +1 at `upper = [x,y)` or `[x−1,y+1)`, −1 at `[x−1,y)` or
/// `[x,y+1)`, and 0 at every other interval containing `lower`.
pub fn mobius_value(lower: GridInterval, upper: GridInterval) -> Result<i64> {
    if !lower.is_contained_in(&upper) {
        return Err(Error::NotNested {
            lo_birth: lower.birth,
            lo_death: lower.death,
            hi_birth: upper.birth,
            hi_death: upper.death,
        });
    }
    let db = lower.birth - upper.birth;
    let dd = upper.death - lower.death;
    Ok(match (db, dd) {
        (0, 0) | (1, 1) => 1,
        (1, 0) | (0, 1) => -1,
        _ => 0,
    })
}

/// Möbius convolution `μ ∗ h`, the four-point inclusion-exclusion
/// `(μ∗h)[x,y) = h[x,y) − h[x−1,y) − h[x,y+1) + h[x−1,y+1)`
/// with out-of-range neighbours reading as 0.
pub fn mobius_convolve(h: &IntervalFunction) -> IntervalFunction {
    let mut out = IntervalFunction::zeros(h.m);
    for (a, b) in h.domain() {
        let x = a as i64;
        let y = b as i64;
        let v = h.get_signed(x, y) - h.get_signed(x - 1, y) - h.get_signed(x, y + 1)
            + h.get_signed(x - 1, y + 1);
        if v != 0 {
            out.set(a, b, v).expect("domain cell");
        }
    }
    out
}

/// Zeta convolution `(ζ∗g)[x,y) = Σ_{x' ≤ x, y' ≥ y} g[x',y')`, summing
/// over every interval containing `[x,y)`.
pub fn zeta_convolve(g: &IntervalFunction) -> IntervalFunction {
    let m = g.m;
    let mut out = IntervalFunction::zeros(m);
    // S[x][y] = g[x][y] + S[x-1][y] + S[x][y+1] - S[x-1][y+1]
    for a in 0..=m {
        for b in (a + 1..=m + 1).rev() {
            let x = a as i64;
            let y = b as i64;
            let v = g.get(a, b) + out.get_signed(x - 1, y) + out.get_signed(x, y + 1)
                - out.get_signed(x - 1, y + 1);
            if v != 0 {
                out.set(a, b, v).expect("domain cell");
            }
        }
    }
    out
}
