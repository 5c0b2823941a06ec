//! Unary grading of the rank function and the graded persistence diagrams.
//!
//! `Rank_k = u_k ∘ Rank` is a 0/1 order-reversing function whose support is
//! a down-set; its Möbius inversion `pd_k` takes values in {−1, 0, 1}, with
//! +1 exactly at the maximal elements of the support and −1 at greatest
//! lower bounds of adjacent maxima. The levels sum back to `Rank` and `pd`.

use crate::diagram::{PlaneDiagram, SignedDiagram};
use crate::grid::Grid;
use crate::poset::{mobius_convolve, zeta_convolve, GridInterval, IntervalFunction};
use crate::rank::RankTable;
use crate::{Error, Result};

/// `u_k(n) = 1` iff `n ≥ k`; the k-th digit of the unary representation.
pub fn unary(n: i64, k: i64) -> i64 {
    assert!(n >= 0, "unary input must be non-negative");
    assert!(k >= 1, "unary level must be positive");
    i64::from(n >= k)
}

/// The sequence `Rank_1, …, Rank_K` of 0/1 graded rank functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRank {
    m: usize,
    levels: Vec<IntervalFunction>,
}

impl GradedRank {
    pub fn m(&self) -> usize {
        self.m
    }

    /// K, the number of non-zero levels; levels above K are implicitly 0.
    pub fn max_rank(&self) -> usize {
        self.levels.len()
    }

    /// 1-based level access; `None` above K.
    pub fn level(&self, k: usize) -> Option<&IntervalFunction> {
        (k >= 1).then(|| self.levels.get(k - 1)).flatten()
    }

    pub fn levels(&self) -> &[IntervalFunction] {
        &self.levels
    }
}

/// The sequence `pd_1, …, pd_K` of graded persistence diagrams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDiagram {
    m: usize,
    levels: Vec<SignedDiagram>,
}

impl GradedDiagram {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_rank(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> Option<&SignedDiagram> {
        (k >= 1).then(|| self.levels.get(k - 1)).flatten()
    }

    pub fn levels(&self) -> &[SignedDiagram] {
        &self.levels
    }

    /// Pointwise sum of the levels (equals `pd` by the consistency theorem).
    pub fn sum(&self) -> Result<SignedDiagram> {
        let mut acc = SignedDiagram::empty(self.m);
        for level in &self.levels {
            acc = acc.add(level)?;
        }
        Ok(acc)
    }

    /// Relabel every level through ι.
    pub fn embed(&self, grid: &Grid) -> Result<Vec<PlaneDiagram>> {
        self.levels.iter().map(|level| level.embed(grid)).collect()
    }
}

/// `Rank_k = u_k ∘ Rank` for k = 1..K, K the maximal rank value.
pub fn graded_rank(rt: &RankTable) -> GradedRank {
    let m = rt.m();
    let max = rt.max_rank();
    let mut levels = Vec::with_capacity(max.max(0) as usize);
    for k in 1..=max {
        let mut level = IntervalFunction::zeros(m);
        for (a, b) in rt.as_function().domain() {
            let v = unary(rt.get(a, b), k);
            if v != 0 {
                level.set(a, b, v).expect("domain cell");
            }
        }
        levels.push(level);
    }
    GradedRank { m, levels }
}

/// `pd_k = μ ∗ Rank_k` for every level; a value outside {−1, 0, 1} means
/// the input level was not an order-reversing 0/1 function.
pub fn graded_diagram(gr: &GradedRank) -> Result<GradedDiagram> {
    let mut levels = Vec::with_capacity(gr.levels.len());
    for level in &gr.levels {
        let inv = mobius_convolve(level);
        for ((a, b), v) in inv.support() {
            if !(-1..=1).contains(&v) {
                return Err(Error::NotGradedValue {
                    birth: a,
                    death: b,
                    value: v,
                });
            }
        }
        levels.push(SignedDiagram::from_function(&inv));
    }
    Ok(GradedDiagram { m: gr.m, levels })
}

/// One connected component of the support graph of a graded level: its
/// maximal elements in staircase order and the meets between neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaircaseComponent {
    pub maxima: Vec<GridInterval>,
    pub meets: Vec<GridInterval>,
}

/// The staircase decomposition of a k-th graded diagram: ordered
/// components, each an alternating chain of maxima and meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Staircase {
    pub components: Vec<StaircaseComponent>,
    /// Notes about borderline junctions (touching components).
    pub diagnostics: Vec<String>,
}

impl Staircase {
    /// Signed sum of indicator points: +1 on maxima, −1 on meets.
    pub fn reconstruct(&self, m: usize) -> SignedDiagram {
        let mut d = SignedDiagram::empty(m);
        for comp in &self.components {
            for &p in &comp.maxima {
                d.set(p, 1).expect("in range");
            }
            for &p in &comp.meets {
                d.set(p, -1).expect("in range");
            }
        }
        d
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

fn not_realizable(p: GridInterval, reason: &str) -> Error {
    Error::NotRealizable {
        birth: p.birth(),
        death: p.death(),
        reason: reason.into(),
    }
}

/// Decompose a graded level into staircase components.
///
/// Rejects inputs whose +1 points do not form a strict antichain or whose
/// −1 points are not exactly the meets of adjacent maxima.
pub fn staircase_decompose(dk: &SignedDiagram) -> Result<Staircase> {
    let mut maxima = Vec::new();
    let mut negatives = Vec::new();
    for (p, v) in dk.points() {
        match v {
            1 => maxima.push(p),
            -1 => negatives.push(p),
            other => {
                return Err(Error::NotGradedValue {
                    birth: p.birth(),
                    death: p.death(),
                    value: other,
                })
            }
        }
    }
    // BTreeMap order sorts by (birth, death) already.
    for pair in maxima.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        if next.birth() <= prev.birth() || next.death() <= prev.death() {
            return Err(not_realizable(
                next,
                "+1 points must form a strict antichain (births and deaths both increasing)",
            ));
        }
    }

    let mut expected_meets = Vec::new();
    let mut components = Vec::new();
    let mut diagnostics = Vec::new();
    let mut current = StaircaseComponent {
        maxima: Vec::new(),
        meets: Vec::new(),
    };
    for (idx, &p) in maxima.iter().enumerate() {
        if idx == 0 {
            current.maxima.push(p);
            continue;
        }
        let prev = maxima[idx - 1];
        if p.birth() < prev.death() {
            // Overlapping supports: the meet [a_{j+1}, b_j) joins them.
            let meet = GridInterval::new(p.birth(), prev.death()).expect("birth < death");
            expected_meets.push(meet);
            current.meets.push(meet);
            current.maxima.push(p);
        } else {
            if p.birth() == prev.death() {
                diagnostics.push(format!(
                    "components touch at {}: treated as a boundary (no meet point)",
                    prev.death()
                ));
            }
            components.push(std::mem::replace(
                &mut current,
                StaircaseComponent {
                    maxima: vec![p],
                    meets: Vec::new(),
                },
            ));
        }
    }
    if !current.maxima.is_empty() {
        components.push(current);
    }

    expected_meets.sort();
    let mut found = negatives.clone();
    found.sort();
    if found != expected_meets {
        let witness = found
            .iter()
            .find(|p| !expected_meets.contains(p))
            .or_else(|| expected_meets.iter().find(|p| !found.contains(p)))
            .copied()
            .unwrap_or_else(|| GridInterval::new(0, 1).unwrap());
        return Err(not_realizable(
            witness,
            "-1 points must be exactly the meets of adjacent maxima",
        ));
    }

    let staircase = Staircase {
        components,
        diagnostics,
    };
    debug_assert_eq!(&staircase.reconstruct(dk.m()), dk);
    Ok(staircase)
}

/// Result of the realizability test for a would-be graded level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realizability {
    pub realizable: bool,
    /// Names the first violating cell when not realizable.
    pub diagnostics: Option<String>,
}

/// A signed diagram is the Möbius inversion of some k-th graded rank
/// function iff its zeta image is a {0,1}-valued order-reversing function.
pub fn realizability_check(dk: &SignedDiagram) -> Realizability {
    let g = zeta_convolve(&dk.to_function());
    for (a, b) in g.domain() {
        let v = g.get(a, b);
        if v != 0 && v != 1 {
            return Realizability {
                realizable: false,
                diagnostics: Some(format!("ζ∗dk = {v} ∉ {{0,1}} at [{a},{b})")),
            };
        }
    }
    for (a, b) in g.domain() {
        let v = g.get(a, b);
        if a + 1 < b && g.get(a + 1, b) < v {
            return Realizability {
                realizable: false,
                diagnostics: Some(format!(
                    "support of ζ∗dk is not a down-set: [{},{}) ⊂ [{a},{b}) missing",
                    a + 1,
                    b
                )),
            };
        }
        if b - a > 1 && g.get(a, b - 1) < v {
            return Realizability {
                realizable: false,
                diagnostics: Some(format!(
                    "support of ζ∗dk is not a down-set: [{a},{}) ⊂ [{a},{b}) missing",
                    b - 1
                )),
            };
        }
    }
    Realizability {
        realizable: true,
        diagnostics: None,
    }
}
