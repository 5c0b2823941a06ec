//! Barcodes: multisets of half-open grid intervals with positive
//! multiplicity, the canonical input representation of a persistence module.

use crate::poset::GridInterval;
use crate::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Barcode {
    m: usize,
    bars: BTreeMap<GridInterval, i64>,
}

impl Barcode {
    pub fn empty(m: usize) -> Self {
        Barcode {
            m,
            bars: BTreeMap::new(),
        }
    }

    /// Build from `(birth, death, multiplicity)` triples on a grid of size
    /// `m`; every bar must satisfy `0 ≤ birth < death ≤ m+1`.
    pub fn new(m: usize, bars: &[(usize, usize, i64)]) -> Result<Self> {
        let mut bc = Barcode::empty(m);
        for &(birth, death, mult) in bars {
            bc.add(GridInterval::new(birth, death)?, mult)?;
        }
        Ok(bc)
    }

    pub fn add(&mut self, bar: GridInterval, mult: i64) -> Result<()> {
        if mult < 1 {
            return Err(Error::BadMultiplicity(mult));
        }
        if bar.death() > self.m + 1 {
            return Err(Error::OutOfDomain {
                birth: bar.birth(),
                death: bar.death(),
                max: self.m + 1,
            });
        }
        *self.bars.entry(bar).or_insert(0) += mult;
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Bars with multiplicities, sorted by (birth, death).
    pub fn bars(&self) -> impl Iterator<Item = (GridInterval, i64)> + '_ {
        self.bars.iter().map(|(&bar, &mult)| (bar, mult))
    }

    /// Total number of bars counted with multiplicity.
    pub fn size(&self) -> i64 {
        self.bars.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }
}
