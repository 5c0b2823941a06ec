//! Persistence modules given as an explicit chain of linear maps
//! `K^{d_0} → K^{d_1} → ⋯ → K^{d_m}` over GF(p) or the rationals, with
//! exact rank computation by Gaussian elimination.

use crate::barcode::Barcode;
use crate::{Coord, Error, Result};
use num_traits::Zero;

/// Coefficient field of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    /// GF(p) for prime p; persistent homology is typically over GF(2).
    Gf(u64),
    /// Exact rationals.
    Rational,
}

impl FieldSpec {
    pub fn gf(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Gf(p))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense matrix with exact rational entries; for GF(p) chains the entries
/// are integers reduced mod p and arithmetic is performed mod p.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coord>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Coord::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Coord::from_integer(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coord>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Coord {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coord) {
        self.data[i * self.cols + j] = v;
    }
}

fn gf_reduce(v: Coord, p: u64) -> i64 {
    debug_assert_eq!(*v.denom(), 1, "GF entries must be integers");
    v.numer().rem_euclid(p as i64)
}

fn gf_inv(a: i64, p: u64) -> i64 {
    // Fermat: a^(p-2) mod p.
    let p = p as i64;
    let mut base = a.rem_euclid(p);
    let mut exp = p - 2;
    let mut acc = 1i64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn matmul(field: FieldSpec, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.rows);
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let av = a.get(i, k);
            if av.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let v = out.get(i, j) + av * b.get(k, j);
                out.set(i, j, v);
            }
        }
    }
    if let FieldSpec::Gf(p) = field {
        for v in &mut out.data {
            *v = Coord::from_integer(gf_reduce(*v, p));
        }
    }
    out
}

/// Rank by Gaussian elimination, exact in the chain's field.
fn rank(field: FieldSpec, mat: &Matrix) -> usize {
    let mut m = mat.clone();
    if let FieldSpec::Gf(p) = field {
        for v in &mut m.data {
            *v = Coord::from_integer(gf_reduce(*v, p));
        }
    }
    let mut rank = 0;
    let mut row = 0;
    for col in 0..m.cols {
        let pivot = (row..m.rows).find(|&r| !m.get(r, col).is_zero());
        let Some(pr) = pivot else { continue };
        for j in 0..m.cols {
            let tmp = m.get(row, j);
            m.set(row, j, m.get(pr, j));
            m.set(pr, j, tmp);
        }
        let pv = m.get(row, col);
        let inv = match field {
            FieldSpec::Gf(p) => Coord::from_integer(gf_inv(*pv.numer(), p)),
            FieldSpec::Rational => pv.recip(),
        };
        for r in row + 1..m.rows {
            let factor = m.get(r, col) * inv;
            if factor.is_zero() {
                continue;
            }
            for j in col..m.cols {
                let mut v = m.get(r, j) - factor * m.get(row, j);
                if let FieldSpec::Gf(p) = field {
                    v = Coord::from_integer(gf_reduce(v, p));
                }
                m.set(r, j, v);
            }
        }
        rank += 1;
        row += 1;
        if row == m.rows {
            break;
        }
    }
    rank
}

/// A persistence module on `[m]` given by dimensions `d_0, …, d_m` and the
/// maps `d_{i+1} × d_i` between consecutive spaces.
#[derive(Debug, Clone)]
pub struct MapChain {
    m: usize,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
    field: FieldSpec,
}

impl MapChain {
    pub fn new(dims: Vec<usize>, maps: Vec<Matrix>, field: FieldSpec) -> Result<Self> {
        assert!(!dims.is_empty(), "dims must list d_0..d_m");
        let m = dims.len() - 1;
        if maps.len() != m {
            return Err(Error::ShapeMismatch {
                index: maps.len(),
                rows: 0,
                cols: 0,
                expected_rows: m,
                expected_cols: 0,
            });
        }
        for (i, mat) in maps.iter().enumerate() {
            if mat.rows != dims[i + 1] || mat.cols != dims[i] {
                return Err(Error::ShapeMismatch {
                    index: i,
                    rows: mat.rows,
                    cols: mat.cols,
                    expected_rows: dims[i + 1],
                    expected_cols: dims[i],
                });
            }
        }
        if let FieldSpec::Gf(p) = field {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(MapChain {
            m,
            dims,
            maps,
            field,
        })
    }

    /// Direct sum of interval modules for a barcode: each bar contributes a
    /// basis line alive on its support, maps send it identically forward.
    pub fn interval_sum(bc: &Barcode, field: FieldSpec) -> Result<Self> {
        let m = bc.m();
        // One slot per bar instance alive at each index.
        let mut alive: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
        let mut instances = Vec::new();
        for (bar, mult) in bc.bars() {
            for _ in 0..mult {
                let id = instances.len();
                instances.push(bar);
                for (i, slots) in alive.iter_mut().enumerate().take(m + 1) {
                    if bar.birth() <= i && i < bar.death() {
                        slots.push(id);
                    }
                }
            }
        }
        let dims: Vec<usize> = alive.iter().map(Vec::len).collect();
        let mut maps = Vec::with_capacity(m);
        for i in 0..m {
            let mut mat = Matrix::zeros(dims[i + 1], dims[i]);
            for (col, id) in alive[i].iter().enumerate() {
                if let Some(row) = alive[i + 1].iter().position(|other| other == id) {
                    mat.set(row, col, Coord::from_integer(1));
                }
            }
            maps.push(mat);
        }
        MapChain::new(dims, maps, field)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Rank of the composite map from index `a` to index `b` (`a ≤ b ≤ m`);
    /// the identity when `a = b`.
    pub fn composite_rank(&self, a: usize, b: usize) -> usize {
        assert!(a <= b && b <= self.m);
        if a == b {
            return self.dims[a];
        }
        let mut acc = self.maps[a].clone();
        for i in a + 1..b {
            acc = matmul(self.field, &self.maps[i], &acc);
        }
        rank(self.field, &acc)
    }
}
