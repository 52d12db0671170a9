//! Linear algebra over F2 and Z for the Khovanov complex: bit-packed
//! elimination, homology bases with projection onto homology, integral
//! homology via sparse elimination, and the Bockstein.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::KhComplex;
use crate::error::LinAlgError;

/// A bit vector over F2, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for k in ones {
            v.flip(k);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> bool {
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, k: usize, value: bool) {
        if self.get(k) != value {
            self.flip(k);
        }
    }

    pub fn flip(&mut self, k: usize) {
        self.words[k / 64] ^= 1 << (k % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|k| u8::from(self.get(k))).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for k in 0..self.len {
            write!(f, "{}", u8::from(self.get(k)))?;
        }
        write!(f, "]")
    }
}

/// A dense matrix over F2 stored as packed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    pub rows: Vec<BitVec>,
    pub cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for k in 0..n {
            m.rows[k].set(k, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self, LinAlgError> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinAlgError::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
        }
        Ok(BitMatrix { rows, cols })
    }

    /// Builds a matrix from 0/1 entries; every row must have the same length.
    pub fn from_u8(rows: &[Vec<u8>]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(LinAlgError::Dimension("ragged rows".into()));
                }
                Ok(BitVec::from_ones(cols, r.iter().enumerate().filter(|(_, &b)| b & 1 == 1).map(|(k, _)| k)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitMatrix { rows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].flip(r);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok(BitVec::from_ones(self.nrows(), (0..self.nrows()).filter(|&r| self.rows[r].dot(v))))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, LinAlgError> {
        if self.cols != other.nrows() {
            return Err(LinAlgError::Dimension(format!("{}x{} times {}x{}", self.nrows(), self.cols, other.nrows(), other.cols)));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { rows, cols: other.cols })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn to_u8(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(BitVec::to_bits).collect()
    }

    /// Columns as vectors.
    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().rows
    }

    /// Row-reduced echelon form and its pivot columns.
    fn rref(&self) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            let Some(p) = (top..rows.len()).find(|&r| rows[r].get(c)) else { continue };
            rows.swap(top, p);
            let pivot_row = rows[top].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != top && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            top += 1;
            if top == rows.len() {
                break;
            }
        }
        rows.truncate(top);
        (rows, pivots)
    }
}

pub fn f2_rank(m: &BitMatrix) -> usize {
    let mut e = Echelon::new(m.cols);
    m.rows.iter().filter(|r| e.insert((*r).clone(), BitVec::default()).is_some()).count()
}

/// Basis of `{v : M v = 0}`, one vector per non-pivot column.
pub fn f2_kernel(m: &BitMatrix) -> Vec<BitVec> {
    let (rows, pivots) = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = BitVec::zeros(m.cols);
            v.set(free, true);
            for (row, &p) in rows.iter().zip(&pivots) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Some `x` with `M x = b`, if one exists.
pub fn f2_solve(m: &BitMatrix, b: &BitVec) -> Result<Option<BitVec>, LinAlgError> {
    if b.len() != m.nrows() {
        return Err(LinAlgError::Dimension(format!("right-hand side of length {} for {} rows", b.len(), m.nrows())));
    }
    // Reduce the columns, tagging each with the combination of original columns it is.
    let mut e = Echelon::new(m.nrows());
    for (k, col) in m.columns().into_iter().enumerate() {
        e.insert(col, BitVec::from_ones(m.cols, [k]));
    }
    Ok(e.express(b, m.cols))
}

/// Incremental echelon basis keyed by lowest set bit; every stored vector
/// carries a tag that is updated alongside it.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    /// `slot[p]` is the stored vector with lowest bit `p`.
    slot: Vec<Option<usize>>,
    vecs: Vec<(BitVec, BitVec)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon { len, slot: vec![None; len], vecs: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    /// Reduces `v` (and its `tag`) against the basis. Returns the residual and accumulated tag.
    fn reduce(&self, mut v: BitVec, mut tag: BitVec) -> (BitVec, BitVec) {
        while let Some(p) = v.first_one() {
            let Some(k) = self.slot[p] else { break };
            let (bv, bt) = &self.vecs[k];
            v.xor_assign(bv);
            if !bt.is_empty() {
                if tag.is_empty() {
                    tag = BitVec::zeros(bt.len());
                }
                tag.xor_assign(bt);
            }
        }
        (v, tag)
    }

    /// Adds `v` if independent; returns its pivot.
    pub fn insert(&mut self, v: BitVec, tag: BitVec) -> Option<usize> {
        debug_assert_eq!(v.len(), self.len);
        let (r, t) = self.reduce(v, tag);
        let p = r.first_one()?;
        self.slot[p] = Some(self.vecs.len());
        self.vecs.push((r, t));
        Some(p)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone(), BitVec::default()).0.is_zero()
    }

    /// The accumulated tag of a combination equal to `v`, if `v` lies in the span.
    pub fn express(&self, v: &BitVec, tag_len: usize) -> Option<BitVec> {
        let (r, t) = self.reduce(v.clone(), BitVec::zeros(tag_len));
        r.is_zero().then(|| if t.is_empty() { BitVec::zeros(tag_len) } else { t })
    }
}

/// Span dimension of a list of vectors.
pub fn span_rank(vectors: &[BitVec], len: usize) -> usize {
    let mut e = Echelon::new(len);
    vectors.iter().filter(|v| e.insert((*v).clone(), BitVec::default()).is_some()).count()
}

/// The F2 differential out of `(i, j)` as a matrix with rows indexed by
/// `(i + 1, j)` and columns by `(i, j)`.
pub fn differential_f2(complex: &KhComplex, i: i32, j: i32) -> BitMatrix {
    let src = complex.dim(i, j);
    let dst = complex.dim(i + 1, j);
    let mut m = BitMatrix::zeros(dst, src);
    if let Some(level) = complex.level(i, j) {
        for (y, incs) in level.delta.iter().enumerate() {
            for inc in incs {
                m.rows[inc.target as usize].flip(y);
            }
        }
    }
    m
}

/// Images `δy` of the generators of `(i, j)` as vectors in `(i + 1, j)`.
fn boundary_columns(complex: &KhComplex, i: i32, j: i32) -> Vec<BitVec> {
    let dst = complex.dim(i + 1, j);
    complex.level(i, j).map_or(Vec::new(), |level| {
        level
            .delta
            .iter()
            .map(|incs| BitVec::from_ones(dst, incs.iter().map(|inc| inc.target as usize)))
            .collect()
    })
}

/// A basis of `Kh^{i,j}` over F2 by cycle representatives, with projection.
#[derive(Clone, Debug)]
pub struct F2HomologyBasis {
    pub i: i32,
    pub j: i32,
    pub chain_dim: usize,
    pub reps: Vec<BitVec>,
    /// Spans all cycles; boundaries carry tag zero, representatives their unit tags.
    cycles: Echelon,
}

impl F2HomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Homology coordinates of a cycle.
    pub fn project(&self, c: &BitVec) -> Result<BitVec, LinAlgError> {
        if c.len() != self.chain_dim {
            return Err(LinAlgError::Dimension(format!("chain of length {} in a {}-dimensional group", c.len(), self.chain_dim)));
        }
        self.cycles
            .express(c, self.dim())
            .ok_or_else(|| LinAlgError::Dimension(format!("chain is not a cycle in ({}, {})", self.i, self.j)))
    }

    pub fn is_boundary(&self, c: &BitVec) -> Result<bool, LinAlgError> {
        Ok(self.project(c)?.is_zero())
    }
}

pub fn kh_f2_basis(complex: &KhComplex, i: i32, j: i32) -> F2HomologyBasis {
    let dim = complex.dim(i, j);
    let mut cycles = Echelon::new(dim);
    for b in boundary_columns(complex, i - 1, j) {
        cycles.insert(b, BitVec::default());
    }
    let kernel = f2_kernel(&differential_f2(complex, i, j));
    let mut candidates = Vec::new();
    let mut probe = cycles.clone();
    for v in kernel {
        if probe.insert(v.clone(), BitVec::default()).is_some() {
            candidates.push(v);
        }
    }
    let h = candidates.len();
    for (k, v) in candidates.iter().enumerate() {
        cycles.insert(v.clone(), BitVec::from_ones(h, [k]));
    }
    // Boundary vectors were inserted before any tag existed; give them explicit zero tags.
    for (_, t) in cycles.vecs.iter_mut() {
        if t.is_empty() {
            *t = BitVec::zeros(h);
        }
    }
    F2HomologyBasis { i, j, chain_dim: dim, reps: candidates, cycles }
}

/// A finitely generated abelian group `Z^free ⊕ torsion`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Prime-power orders of the cyclic torsion summands, ascending.
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of `Z/2^k` summands.
    pub fn two_torsion(&self) -> usize {
        self.torsion.iter().filter(|&&t| t.is_power_of_two()).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Sparse integer matrix, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LinAlgError::Dimension("ragged rows".into()));
        }
        let rows: Vec<Vec<(usize, i64)>> = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, v)).collect())
            .collect();
        Ok(IntMatrix { nrows: rows.len(), ncols, rows })
    }
}

/// Integral differential out of `(i, j)`; rows indexed by `(i + 1, j)`.
pub fn differential_z(complex: &KhComplex, i: i32, j: i32) -> IntMatrix {
    let nrows = complex.dim(i + 1, j);
    let ncols = complex.dim(i, j);
    let mut rows = vec![Vec::new(); nrows];
    if let Some(level) = complex.level(i, j) {
        for (y, incs) in level.delta.iter().enumerate() {
            for inc in incs {
                rows[inc.target as usize].push((y, if inc.sign == 0 { 1 } else { -1 }));
            }
        }
    }
    IntMatrix { nrows, ncols, rows }
}

/// Coefficient ring for the sparse elimination; `i64` reports overflow.
trait Coeff: Clone + PartialEq + fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit_coeff(&self) -> bool;
    /// `a - f * b`, or `None` on overflow.
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit_coeff(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        a.checked_mul(*b)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit_coeff(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(a: &Self, f: &Self, b: &Self) -> Option<Self> {
        Some(a - f * b)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Eliminates unit pivots (Markowitz order), then returns the pivot count and
/// the remaining nonzero block as dense rows.
fn eliminate_units<T: Coeff>(m: &IntMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut rows: Vec<BTreeMap<usize, T>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|&(c, v)| (c, T::from_i64(v))).collect())
        .collect();
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); m.ncols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut alive = vec![true; m.nrows];
    let mut pivots = 0;
    loop {
        // Unit entry minimising (row length - 1) * (column length - 1).
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !alive[r] {
                continue;
            }
            for (&c, v) in row {
                if v.is_unit_coeff() {
                    let cost = (row.len() - 1) * (col_rows[c].len() - 1);
                    if best.map_or(true, |(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                    }
                    if cost == 0 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(b, _, _)| b == 0) {
                break;
            }
        }
        let Some((_, pr, pc)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let p = pivot_row[&pc].clone();
        alive[pr] = false;
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            // Unit pivot: its inverse is itself.
            let f = T::mul(&rows[r][&pc], &p)?;
            for (&c, v) in &pivot_row {
                let cur = rows[r].get(&c).cloned().unwrap_or_else(|| T::from_i64(0));
                let new = T::sub_mul(&cur, &f, v)?;
                if new.is_nil() {
                    if rows[r].remove(&c).is_some() {
                        col_rows[c].remove(&r);
                    }
                } else {
                    if !rows[r].contains_key(&c) {
                        col_rows[c].insert(r);
                    }
                    rows[r].insert(c, new);
                }
            }
        }
        // Column `pc` is now cleared below the pivot; the pivot row is gone.
        debug_assert!(col_rows[pc].is_empty());
        pivots += 1;
    }
    let live_rows: Vec<usize> = (0..m.nrows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| rows[r].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let dense = live_rows
        .iter()
        .map(|&r| {
            let mut d = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in &rows[r] {
                d[col_pos[c]] = v.to_big();
            }
            d
        })
        .collect();
    Some((pivots, dense))
}

/// Diagonalises a dense integer matrix by row and column operations and
/// returns the nonzero diagonal entries (absolute values).
fn diagonalize(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..nr {
            for c in t..nc {
                if !a[r][c].is_zero() && best.map_or(true, |(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(t, br);
        for row in a.iter_mut() {
            row.swap(t, bc);
        }
        let mut clean = true;
        for r in t + 1..nr {
            if a[r][t].is_zero() {
                continue;
            }
            let q = &a[r][t] / &a[t][t];
            for c in t..nc {
                let v = &q * &a[t][c];
                a[r][c] -= v;
            }
            clean &= a[r][t].is_zero();
        }
        for c in t + 1..nc {
            if a[t][c].is_zero() {
                continue;
            }
            let q = &a[t][c] / &a[t][t];
            for r in t..nr {
                let v = &q * &a[r][t];
                a[r][c] -= v;
            }
            clean &= a[t][c].is_zero();
        }
        if clean {
            diag.push(a[t][t].abs());
            t += 1;
        }
    }
    diag
}

/// Rank and nontrivial elementary divisors (as nonzero diagonal entries > 1).
fn integer_reduction(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let (pivots, rest) = eliminate_units::<i64>(m).unwrap_or_else(|| {
        eliminate_units::<BigInt>(m).expect("arbitrary-precision elimination cannot overflow")
    });
    let diag = diagonalize(rest);
    let rank = pivots + diag.len();
    (rank, diag.into_iter().filter(|d| !d.is_one()).collect())
}

/// Invariant factors `d1 | d2 | ...` of an integer matrix (nonzero ones only).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let (rank, nontrivial) = integer_reduction(m);
    let mut d: Vec<BigInt> = vec![BigInt::one(); rank - nontrivial.len()];
    d.extend(nontrivial);
    // Turn the diagonal into a divisibility chain: (a, b) -> (gcd, lcm).
    for x in 0..d.len() {
        for y in x + 1..d.len() {
            let g = gcd(&d[x], &d[y]);
            let l = &d[x] / &g * &d[y];
            d[x] = g;
            d[y] = l;
        }
    }
    d
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Largest trial divisor used when splitting torsion orders into prime powers.
const TRIAL_LIMIT: u64 = 1 << 20;

/// `(p, p^k)` for each prime dividing `d`, by trial division; `None` if `d`
/// has a cofactor that trial division up to the limit cannot certify as prime.
fn prime_power_parts(d: &BigInt) -> Option<Vec<(BigInt, BigInt)>> {
    let mut n = d.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut pk = BigInt::one();
            while (&n % &p).is_zero() {
                n /= &p;
                pk *= &p;
            }
            out.push((p.clone(), pk));
        }
        p += 1;
        if p > BigInt::from(TRIAL_LIMIT) {
            return None;
        }
    }
    if n > BigInt::one() {
        out.push((n.clone(), n));
    }
    Some(out)
}

/// Integral Khovanov homology at `(i, j)`.
pub fn kh_z(complex: &KhComplex, i: i32, j: i32) -> Result<HomologyGroup, LinAlgError> {
    let (rank_out, _) = integer_reduction(&differential_z(complex, i, j));
    let (rank_in, divisors) = integer_reduction(&differential_z(complex, i - 1, j));
    let mut torsion = Vec::new();
    for d in &divisors {
        let parts = prime_power_parts(d).ok_or_else(|| LinAlgError::Dimension(format!("cannot factor torsion order {d}")))?;
        for (_, pk) in parts {
            torsion.push(pk.to_u64().ok_or_else(|| LinAlgError::Dimension(format!("torsion order {pk} exceeds u64")))?);
        }
    }
    torsion.sort_unstable();
    Ok(HomologyGroup { free_rank: complex.dim(i, j) - rank_out - rank_in, torsion })
}

/// The full integral Khovanov homology, nonzero groups only.
pub fn kh_z_table(complex: &KhComplex) -> Result<BTreeMap<(i32, i32), HomologyGroup>, LinAlgError> {
    let keys: Vec<(i32, i32)> = complex.levels.keys().copied().collect();
    let groups: Vec<((i32, i32), HomologyGroup)> = keys
        .par_iter()
        .map(|&(i, j)| kh_z(complex, i, j).map(|g| ((i, j), g)))
        .collect::<Result<_, _>>()?;
    Ok(groups.into_iter().filter(|(_, g)| !g.is_zero()).collect())
}

/// F2 homology bases for every bigrading with generators.
pub fn kh_f2_bases(complex: &KhComplex) -> BTreeMap<(i32, i32), F2HomologyBasis> {
    let keys: Vec<(i32, i32)> = complex.levels.keys().copied().collect();
    keys.par_iter().map(|&(i, j)| ((i, j), kh_f2_basis(complex, i, j))).collect::<Vec<_>>().into_iter().collect()
}

/// `r ∘ β` applied to the class of the cycle `c` in `(i, j)`: lift to an
/// integral chain, apply the integral differential, halve, reduce, project.
pub fn bockstein_chain(complex: &KhComplex, i: i32, j: i32, c: &BitVec) -> Result<BitVec, LinAlgError> {
    let dst = complex.dim(i + 1, j);
    let mut coeffs = vec![0i64; dst];
    if let Some(level) = complex.level(i, j) {
        for y in c.ones() {
            for inc in &level.delta[y] {
                coeffs[inc.target as usize] += if inc.sign == 0 { 1 } else { -1 };
            }
        }
    }
    if let Some(bad) = coeffs.iter().position(|v| v % 2 != 0) {
        return Err(LinAlgError::Dimension(format!("integral boundary has odd coefficient at {bad}; not an F2 cycle")));
    }
    Ok(BitVec::from_ones(dst, coeffs.iter().enumerate().filter(|(_, v)| (*v / 2) % 2 != 0).map(|(k, _)| k)))
}

/// Bockstein on homology coordinates: the image of basis class `class` of
/// `source`, in the coordinates of `target` (which must be at `(i + 1, j)`).
pub fn bockstein_sq1(
    complex: &KhComplex,
    source: &F2HomologyBasis,
    target: &F2HomologyBasis,
    class: usize,
) -> Result<BitVec, LinAlgError> {
    let chain = bockstein_chain(complex, source.i, source.j, &source.reps[class])?;
    target.project(&chain)
}
