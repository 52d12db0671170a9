//! The n-cube {0,1}^n: partial order, the standard sign assignment `s`
//! (a 1-cochain with coboundary 1) and the standard frame assignment `f`
//! (a 2-cochain), together with exhaustive checks of their cochain identities.
//!
//! Coordinate `k` (0-based) of a vertex is bit `k` of its word, so the
//! "coordinates before position i" are the low bits.

use serde::{Deserialize, Serialize};

use crate::error::CubeError;

/// A vertex of the n-cube stored as a bit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub bits: u64,
    pub len: usize,
}

impl Vertex {
    pub fn new(bits: u64, len: usize) -> Self {
        debug_assert!(len <= 64 && (len == 64 || bits >> len == 0));
        Vertex { bits, len }
    }

    /// Builds a vertex from coordinates `(v_1, ..., v_n)`.
    pub fn from_coords(coords: &[u8]) -> Self {
        let bits = coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (k, &c)| acc | ((c as u64 & 1) << k));
        Vertex::new(bits, coords.len())
    }

    pub fn coord(&self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    /// Manhattan norm `|v|`.
    pub fn norm(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn with(&self, k: usize) -> Vertex {
        Vertex::new(self.bits | 1 << k, self.len)
    }
}

/// Returns `k` with `v <=_k u`, or `None` if `v` is not below `u`.
pub fn leq(u: Vertex, v: Vertex) -> Result<Option<usize>, CubeError> {
    if u.len != v.len {
        return Err(CubeError::LengthMismatch(u.len, v.len));
    }
    Ok((v.bits & !u.bits == 0).then(|| (u.bits ^ v.bits).count_ones() as usize))
}

/// A pair `v <=_k u` describing the k-cell `C_{u,v}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellPair {
    pub u: Vertex,
    pub v: Vertex,
}

impl CellPair {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self, CubeError> {
        leq(u, v)?.ok_or(CubeError::NotComparable)?;
        Ok(CellPair { u, v })
    }

    pub fn dim(&self) -> usize {
        (self.u.bits ^ self.v.bits).count_ones() as usize
    }
}

#[inline]
fn low_parity(bits: u64, below: usize) -> u8 {
    let mask = if below >= 64 { u64::MAX } else { (1u64 << below) - 1 };
    ((bits & mask).count_ones() & 1) as u8
}

/// `s(C_{u,v})` for an edge given by the lower vertex bits and flipped coordinate.
#[inline]
pub fn edge_sign(lower_bits: u64, flipped: usize) -> u8 {
    low_parity(lower_bits, flipped)
}

/// `f(C_{u,v})` for a 2-face given by the lower vertex bits and flipped coordinates `i < j`.
#[inline]
pub fn face_frame(lower_bits: u64, i: usize, j: usize) -> u8 {
    debug_assert!(i < j);
    let before_i = low_parity(lower_bits, i);
    let between = low_parity(lower_bits, j) ^ low_parity(lower_bits, i + 1);
    before_i & between
}

/// The standard sign assignment on a 1-cell.
pub fn sign_s(pair: CellPair) -> Result<u8, CubeError> {
    let diff = pair.u.bits ^ pair.v.bits;
    if diff.count_ones() != 1 {
        return Err(CubeError::WrongCodimension { expected: 1, got: diff.count_ones() as usize });
    }
    Ok(edge_sign(pair.v.bits, diff.trailing_zeros() as usize))
}

/// The standard frame assignment on a 2-cell.
pub fn frame_f(pair: CellPair) -> Result<u8, CubeError> {
    let diff = pair.u.bits ^ pair.v.bits;
    if diff.count_ones() != 2 {
        return Err(CubeError::WrongCodimension { expected: 2, got: diff.count_ones() as usize });
    }
    let i = diff.trailing_zeros() as usize;
    let j = 63 - diff.leading_zeros() as usize;
    Ok(face_frame(pair.v.bits, i, j))
}

/// Outcome of an exhaustive cochain check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    pub faces_checked: usize,
    /// Offending cells as `(u, v)` bit pairs.
    pub violations: Vec<(u64, u64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Enumerates all k-cells `(lower bits, flipped coordinates)` of the n-cube.
fn for_each_cell(n: usize, k: usize, mut visit: impl FnMut(u64, &[usize])) {
    let mut dirs = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, dirs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if dirs.len() == k {
            visit(dirs);
            return;
        }
        for d in start..n {
            dirs.push(d);
            rec(n, k, d + 1, dirs, visit);
            dirs.pop();
        }
    }
    rec(n, k, 0, &mut dirs, &mut |dirs: &[usize]| {
        let mask: u64 = dirs.iter().fold(0, |m, &d| m | 1 << d);
        for bits in 0u64..1 << n {
            if bits & mask == 0 {
                visit(bits, dirs);
            }
        }
    });
}

/// Checks `δs = 1` on every 2-face of the n-cube.
pub fn validate_sign_cocycle(n: usize) -> ValidationReport {
    validate_sign_cocycle_with(n, edge_sign)
}

/// As [`validate_sign_cocycle`] with a caller-supplied sign function.
pub fn validate_sign_cocycle_with(n: usize, sign: impl Fn(u64, usize) -> u8) -> ValidationReport {
    let mut report = ValidationReport { n, ..Default::default() };
    for_each_cell(n, 2, |v, dirs| {
        let (i, j) = (dirs[0], dirs[1]);
        let total = sign(v, i) ^ sign(v, j) ^ sign(v | 1 << i, j) ^ sign(v | 1 << j, i);
        report.faces_checked += 1;
        if total != 1 {
            report.violations.push((v | 1 << i | 1 << j, v));
        }
    });
    report
}

/// Checks `(δf)(C_{u,v}) = Σ_{v <=_1 w <=_2 u} s(C_{w,v})` on every 3-face.
pub fn validate_frame_sum(n: usize) -> ValidationReport {
    validate_frame_sum_with(n, edge_sign, face_frame)
}

pub fn validate_frame_sum_with(
    n: usize,
    sign: impl Fn(u64, usize) -> u8,
    frame: impl Fn(u64, usize, usize) -> u8,
) -> ValidationReport {
    let mut report = ValidationReport { n, ..Default::default() };
    for_each_cell(n, 3, |v, dirs| {
        let (a, b, c) = (dirs[0], dirs[1], dirs[2]);
        // Six 2-faces of the 3-cell: for each pair of directions, the bottom
        // face (third coordinate 0) and the top face (third coordinate 1).
        let mut df = 0;
        for (i, j, other) in [(a, b, c), (a, c, b), (b, c, a)] {
            df ^= frame(v, i, j) ^ frame(v | 1 << other, i, j);
        }
        let rhs = sign(v, a) ^ sign(v, b) ^ sign(v, c);
        report.faces_checked += 1;
        if df != rhs {
            report.violations.push((v | 1 << a | 1 << b | 1 << c, v));
        }
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[u8]) -> Vertex {
        Vertex::from_coords(c)
    }

    #[test]
    fn leq_examples() {
        assert_eq!(leq(v(&[1, 1, 0]), v(&[0, 1, 0])).unwrap(), Some(1));
        assert_eq!(leq(v(&[1, 0]), v(&[0, 1])).unwrap(), None);
        assert_eq!(leq(v(&[0, 0, 0]), v(&[0, 0, 0])).unwrap(), Some(0));
        assert!(leq(v(&[0, 0]), v(&[0, 0, 0])).is_err());
    }

    #[test]
    fn sign_examples() {
        let s = |u: &[u8], w: &[u8]| sign_s(CellPair::new(v(u), v(w)).unwrap()).unwrap();
        assert_eq!(s(&[1, 0], &[0, 0]), 0);
        assert_eq!(s(&[1, 1], &[1, 0]), 1);
        assert_eq!(s(&[1, 0, 1], &[1, 0, 0]), 1);
        assert!(sign_s(CellPair::new(v(&[1, 1]), v(&[0, 0])).unwrap()).is_err());
    }

    #[test]
    fn frame_examples() {
        let f = |u: &[u8], w: &[u8]| frame_f(CellPair::new(v(u), v(w)).unwrap()).unwrap();
        assert_eq!(f(&[1, 1], &[0, 0]), 0);
        assert_eq!(f(&[1, 1, 1, 1], &[1, 0, 1, 0]), 1);
        assert_eq!(f(&[1, 1, 0, 1], &[1, 0, 0, 0]), 0);
        assert!(frame_f(CellPair::new(v(&[1, 0]), v(&[0, 0])).unwrap()).is_err());
    }

    /// Direct transcription of the defining formula on coordinate vectors.
    fn naive_frame(u: &[u8], w: &[u8]) -> u8 {
        let flipped: Vec<usize> = (0..u.len()).filter(|&k| u[k] != w[k]).collect();
        let (i, j) = (flipped[0], flipped[1]);
        let a: u8 = w[..i].iter().sum::<u8>() % 2;
        let b: u8 = w[i + 1..j].iter().sum::<u8>() % 2;
        a * b
    }

    #[test]
    fn frame_matches_naive_formula() {
        let n = 5;
        for_each_cell(n, 2, |bits, dirs| {
            let lower: Vec<u8> = (0..n).map(|k| (bits >> k & 1) as u8).collect();
            let mut upper = lower.clone();
            upper[dirs[0]] = 1;
            upper[dirs[1]] = 1;
            assert_eq!(face_frame(bits, dirs[0], dirs[1]), naive_frame(&upper, &lower));
        });
    }

    #[test]
    fn sign_cocycle_counts() {
        for (n, faces) in [(2, 1), (3, 6), (5, 80)] {
            let r = validate_sign_cocycle(n);
            assert_eq!(r.faces_checked, faces);
            assert!(r.passed());
        }
    }

    #[test]
    fn frame_sum_counts() {
        for (n, faces) in [(3, 1), (4, 8), (6, 160)] {
            let r = validate_frame_sum(n);
            assert_eq!(r.faces_checked, faces);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn injected_sign_fault_is_reported() {
        let faulty = |bits: u64, k: usize| edge_sign(bits, k) ^ u8::from(bits == 0 && k == 0);
        let r = validate_sign_cocycle_with(3, faulty);
        assert!(!r.passed());
    }
}
