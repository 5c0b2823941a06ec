//! Rank tables on half-open intervals and their Möbius inversion, the
//! persistence diagram.
//!
//! `table[a,b)` is the rank of the structure map from index `a` to index
//! `b−1`; equivalently the number of bars whose support contains the
//! closed interval `[a, b−1]`.

use crate::barcode::Barcode;
use crate::diagram::SignedDiagram;
use crate::mapchain::MapChain;
use crate::poset::{mobius_convolve, zeta_convolve, IntervalFunction};
use crate::{Error, Result};

/// An order-reversing table of non-negative ranks over the interval grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    table: IntervalFunction,
}

impl RankTable {
    /// Wrap a table, verifying non-negativity and order reversal.
    pub fn new(table: IntervalFunction) -> Result<Self> {
        for (a, b) in table.domain() {
            if table.get(a, b) < 0 {
                return Err(Error::NegativeDiagramValue {
                    birth: a,
                    death: b,
                    value: table.get(a, b),
                });
            }
        }
        if !table.is_order_reversing() {
            let (a, b) = table
                .domain()
                .find(|&(a, b)| {
                    (a + 1 < b && table.get(a + 1, b) < table.get(a, b))
                        || (b - a > 1 && table.get(a, b - 1) < table.get(a, b))
                })
                .unwrap();
            return Err(Error::NotRealizable {
                birth: a,
                death: b,
                reason: "table is not order-reversing".into(),
            });
        }
        Ok(RankTable { table })
    }

    pub fn m(&self) -> usize {
        self.table.m()
    }

    pub fn get(&self, birth: usize, death: usize) -> i64 {
        self.table.get(birth, death)
    }

    pub fn as_function(&self) -> &IntervalFunction {
        &self.table
    }

    /// K, the maximal rank value.
    pub fn max_rank(&self) -> i64 {
        self.table.max_value()
    }
}

/// Rank of a barcode: `table[a,b)` counts bars `[s,t)` with `s ≤ a, t ≥ b`,
/// with multiplicity.
pub fn rank_from_barcode(bc: &Barcode) -> RankTable {
    let m = bc.m();
    let mut diagram = IntervalFunction::zeros(m);
    for (bar, mult) in bc.bars() {
        let v = diagram.get(bar.birth(), bar.death()) + mult;
        diagram
            .set(bar.birth(), bar.death(), v)
            .expect("bar in domain");
    }
    // Counting bars containing [a,b) is exactly ζ ∗ (bar multiset).
    RankTable {
        table: zeta_convolve(&diagram),
    }
}

/// Rank of a map chain: `table[a,b)` is the rank of the composite from `a`
/// to `b−1` (the identity when `b−1 = a`), computed exactly in the chain's
/// field.
pub fn rank_from_mapchain(mc: &MapChain) -> RankTable {
    let m = mc.m();
    let mut table = IntervalFunction::zeros(m);
    for a in 0..=m {
        for b in a + 1..=m + 1 {
            let r = mc.composite_rank(a, b - 1) as i64;
            if r != 0 {
                table.set(a, b, r).expect("domain cell");
            }
        }
    }
    RankTable { table }
}

/// The persistence diagram `pd = μ ∗ Rank`. Reports (rather than clamps) a
/// negative output value, which signals that the table was not the rank
/// function of any module.
pub fn diagram_from_rank(rt: &RankTable) -> Result<SignedDiagram> {
    let inv = mobius_convolve(rt.as_function());
    for ((a, b), v) in inv.support() {
        if v < 0 {
            return Err(Error::NegativeDiagramValue {
                birth: a,
                death: b,
                value: v,
            });
        }
    }
    Ok(SignedDiagram::from_function(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapchain::{FieldSpec, Matrix};
    use crate::oracles::{random_barcode, RandomModuleSpec};
    use crate::poset::GridInterval;
    use crate::Coord;

    fn three_bars() -> Barcode {
        Barcode::new(11, &[(2, 8, 1), (4, 12, 1), (6, 10, 1)]).unwrap()
    }

    #[test]
    fn three_bar_rank_values() {
        let rt = rank_from_barcode(&three_bars());
        assert_eq!(rt.get(6, 8), 3);
        assert_eq!(rt.get(4, 8), 2);
        assert_eq!(rt.get(2, 8), 1);
        assert_eq!(rt.get(2, 9), 0);
        assert_eq!(rt.get(4, 12), 1);
        assert_eq!(rt.get(3, 12), 0);
        assert_eq!(rt.get(6, 10), 2);
        assert_eq!(rt.get(0, 12), 0);
        assert_eq!(rt.max_rank(), 3);
    }

    #[test]
    fn inclusion_exclusion_at_6_10() {
        let rt = rank_from_barcode(&three_bars());
        let a = rt.get(6, 10);
        let b = rt.get(5, 10);
        let c = rt.get(6, 11);
        let d = rt.get(5, 11);
        assert_eq!((a, b, c, d), (2, 1, 1, 1));
        let pd = diagram_from_rank(&rt).unwrap();
        assert_eq!(pd.get(GridInterval::new(6, 10).unwrap()), a - b - c + d);
        assert_eq!(pd.get(GridInterval::new(6, 10).unwrap()), 1);
    }

    #[test]
    fn three_bar_diagram_support() {
        let pd = diagram_from_rank(&rank_from_barcode(&three_bars())).unwrap();
        let support: Vec<_> = pd.points().collect();
        assert_eq!(
            support,
            vec![
                (GridInterval::new(2, 8).unwrap(), 1),
                (GridInterval::new(4, 12).unwrap(), 1),
                (GridInterval::new(6, 10).unwrap(), 1),
            ]
        );
    }

    #[test]
    fn empty_barcode_yields_zero_table_and_empty_diagram() {
        let bc = Barcode::empty(5);
        let rt = rank_from_barcode(&bc);
        assert!(rt.as_function().is_zero());
        assert!(diagram_from_rank(&rt).unwrap().is_empty());
    }

    #[test]
    fn order_reversing_exhaustive_small() {
        // All nested pairs, not just one-step neighbours, for m ≤ 8.
        for seed in 0..40 {
            let m = 2 + (seed as usize % 7);
            let spec = RandomModuleSpec {
                m,
                max_bars: 6,
                max_multiplicity: 3,
                seed,
            };
            let rt = rank_from_barcode(&random_barcode(&spec));
            assert!(rt.as_function().is_order_reversing(), "seed {seed}");
            for a in 0..=m {
                for b in a + 1..=m + 1 {
                    for a2 in a..=m {
                        for b2 in a2 + 1..=b {
                            // [a2,b2) ⊆ [a,b) ⇒ table[a2,b2) ≥ table[a,b).
                            assert!(
                                rt.get(a2, b2) >= rt.get(a, b),
                                "seed {seed}: [{a2},{b2}) ⊆ [{a},{b})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mobius_inversion_recovers_barcode() {
        for seed in 100..160 {
            let spec = RandomModuleSpec {
                m: 1 + (seed as usize % 10),
                max_bars: 8,
                max_multiplicity: 3,
                seed,
            };
            let bc = random_barcode(&spec);
            let pd = diagram_from_rank(&rank_from_barcode(&bc)).unwrap();
            let as_pairs: Vec<_> = pd
                .points()
                .map(|(bar, v)| (bar.birth(), bar.death(), v))
                .collect();
            let expected: Vec<_> = bc
                .bars()
                .map(|(bar, mult)| (bar.birth(), bar.death(), mult))
                .collect();
            assert_eq!(as_pairs, expected, "seed {seed}");
        }
    }

    #[test]
    fn zeta_round_trip_from_diagram() {
        let rt = rank_from_barcode(&three_bars());
        let pd = diagram_from_rank(&rt).unwrap();
        assert_eq!(&zeta_convolve(&pd.to_function()), rt.as_function());
    }

    #[test]
    fn identity_chain_table() {
        // Constant module K^d: rank d on every [a,b), including b = m+1
        // (the composite a→m is the identity).
        let d = 3;
        let m = 4;
        let dims = vec![d; m + 1];
        let maps = vec![Matrix::identity(d); m];
        let mc = MapChain::new(dims, maps, FieldSpec::Gf(2)).unwrap();
        let rt = rank_from_mapchain(&mc);
        for a in 0..=m {
            for b in a + 1..=m + 1 {
                assert_eq!(rt.get(a, b), d as i64);
            }
        }
        // Equivalently, d copies of the full bar [0, m+1).
        let bc = Barcode::new(m, &[(0, m + 1, d as i64)]).unwrap();
        assert_eq!(rt, rank_from_barcode(&bc));
    }

    #[test]
    fn zero_map_kills_rank_across_it() {
        // d = 1 everywhere, map 1→2 is zero.
        let m = 3;
        let mut maps = vec![Matrix::identity(1); m];
        maps[1] = Matrix::zeros(1, 1);
        let mc = MapChain::new(vec![1; m + 1], maps, FieldSpec::Gf(2)).unwrap();
        let rt = rank_from_mapchain(&mc);
        assert_eq!(rt.get(0, 2), 1);
        assert_eq!(rt.get(1, 2), 1);
        assert_eq!(rt.get(0, 3), 0);
        assert_eq!(rt.get(1, 4), 0);
        assert_eq!(rt.get(2, 4), 1);
    }

    #[test]
    fn mapchain_interval_sum_matches_barcode_rank() {
        for seed in 0..30 {
            let spec = RandomModuleSpec {
                m: 5,
                max_bars: 6,
                max_multiplicity: 2,
                seed: 7000 + seed,
            };
            let bc = random_barcode(&spec);
            let gf2 = MapChain::interval_sum(&bc, FieldSpec::Gf(2)).unwrap();
            assert_eq!(
                rank_from_mapchain(&gf2),
                rank_from_barcode(&bc),
                "seed {seed}"
            );
        }
        // One rational-field pass.
        let bc = random_barcode(&RandomModuleSpec {
            m: 5,
            max_bars: 5,
            max_multiplicity: 2,
            seed: 99,
        });
        let mc = MapChain::interval_sum(&bc, FieldSpec::Rational).unwrap();
        assert_eq!(rank_from_mapchain(&mc), rank_from_barcode(&bc));
    }

    #[test]
    fn random_gf2_chain_rank_is_realizable() {
        // A random chain's table must be order-reversing, invert to a
        // non-negative diagram, and ζ-round-trip back.
        let mut state = 0xDEADBEEFu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..20 {
            let m = 5;
            let dims: Vec<usize> = (0..=m).map(|_| (next() % 5) as usize).collect();
            let maps: Vec<Matrix> = (0..m)
                .map(|i| {
                    let mut mat = Matrix::zeros(dims[i + 1], dims[i]);
                    for r in 0..dims[i + 1] {
                        for c in 0..dims[i] {
                            if next() % 2 == 1 {
                                mat.set(r, c, Coord::from_integer(1));
                            }
                        }
                    }
                    mat
                })
                .collect();
            let mc = MapChain::new(dims, maps, FieldSpec::Gf(2)).unwrap();
            let rt = rank_from_mapchain(&mc);
            assert!(rt.as_function().is_order_reversing());
            let pd = diagram_from_rank(&rt).expect("chain rank must invert non-negatively");
            assert_eq!(&zeta_convolve(&pd.to_function()), rt.as_function());
        }
    }

    #[test]
    fn non_realizable_table_reported() {
        // Zero everywhere except an isolated 1 away from the diagonal:
        // not order-reversing, rejected at construction.
        let mut f = IntervalFunction::zeros(4);
        f.set(0, 5, 1).unwrap();
        assert!(RankTable::new(f).is_err());

        // Order-reversing but not a rank function: the union of the
        // down-sets of (0,2) and (1,3) inverts to −1 at their meet (1,2).
        let mut g = IntervalFunction::zeros(2);
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2), (1, 3), (2, 3)] {
            g.set(a, b, 1).unwrap();
        }
        let rt = RankTable::new(g).unwrap();
        assert!(matches!(
            diagram_from_rank(&rt),
            Err(Error::NegativeDiagramValue {
                birth: 1,
                death: 2,
                value: -1
            })
        ));
    }
}
