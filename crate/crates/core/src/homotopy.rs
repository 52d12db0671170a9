//! Stable homotopy types of width-three links: decomposition of the
//! `Sq1`/`Sq2` quiver into its nine indecomposable summands, the
//! hypotheses on `Kh_Z` under which that quiver determines the space, and
//! the resulting wedge sums.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::HomotopyError;
use crate::homology::{f2_kernel, f2_rank, span_rank, BitMatrix, BitVec, HomologyGroup};
use crate::steenrod::SqMaps;

/// A quiver `A --f--> B --g--> C` with an extra arrow `s: A -> C`.
/// Matrices act on column vectors, so `f` is `dim B x dim A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub f: BitMatrix,
    pub g: BitMatrix,
    pub s: BitMatrix,
}

/// The nine numbers that determine a quiver up to isomorphism.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverRanks {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub rf: usize,
    pub rg: usize,
    /// `dim im s`.
    pub r1: usize,
    /// `dim im s|ker f`.
    pub r2: usize,
    /// `dim (im g ∩ im s)`.
    pub r3: usize,
    /// `dim (im g ∩ im s|ker f)`.
    pub r4: usize,
}

impl QuiverRanks {
    pub fn to_array(self) -> [i64; 9] {
        [self.d1, self.d2, self.d3, self.rf, self.rg, self.r1, self.r2, self.r3, self.r4].map(|v| v as i64)
    }
}

/// Multiplicities of the indecomposable summands S-1..S-3, P-1, P-2, X-1..X-4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecompositionCounts {
    pub s: [u32; 3],
    pub p: [u32; 2],
    pub x: [u32; 4],
}

/// Rows: `(d1, d2, d3, rf, rg, r1, r2, r3, r4)`; columns: `(s1, s2, s3, p1, p2, x1, x2, x3, x4)`.
const FORWARD: [[i64; 9]; 9] = [
    [1, 0, 0, 1, 0, 1, 1, 1, 1],
    [0, 1, 0, 1, 1, 0, 1, 1, 2],
    [0, 0, 1, 0, 1, 1, 1, 1, 1],
    [0, 0, 0, 1, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 0],
];

/// Inverse of [`FORWARD`].
const INVERSE: [[i64; 9]; 9] = [
    [1, 0, 0, -1, 0, 0, -1, 0, 0],
    [0, 1, 0, -1, -1, 0, 0, 0, 0],
    [0, 0, 1, 0, -1, -1, 0, 1, 0],
    [0, 0, 0, 1, 0, -1, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, -1],
    [0, 0, 0, 0, 0, 1, -1, -1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, -1],
];

fn apply(m: &[[i64; 9]; 9], v: [i64; 9]) -> [i64; 9] {
    let mut out = [0; 9];
    for (r, row) in m.iter().enumerate() {
        out[r] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

impl DecompositionCounts {
    pub fn to_array(self) -> [i64; 9] {
        let [s1, s2, s3] = self.s;
        let [p1, p2] = self.p;
        let [x1, x2, x3, x4] = self.x;
        [s1, s2, s3, p1, p2, x1, x2, x3, x4].map(i64::from)
    }

    /// The ranks of the direct sum of the summands these counts describe.
    pub fn forward(self) -> QuiverRanks {
        let v = apply(&FORWARD, self.to_array()).map(|v| v as usize);
        QuiverRanks { d1: v[0], d2: v[1], d3: v[2], rf: v[3], rg: v[4], r1: v[5], r2: v[6], r3: v[7], r4: v[8] }
    }

    /// Whether every summand is a sphere or a Moore space.
    pub fn is_moore(&self) -> bool {
        self.x == [0; 4]
    }
}

/// `dim (span U ∩ span V)`.
fn intersection_dim(u: &[BitVec], v: &[BitVec], len: usize) -> usize {
    let both: Vec<BitVec> = u.iter().chain(v).cloned().collect();
    span_rank(u, len) + span_rank(v, len) - span_rank(&both, len)
}

impl Quiver {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.f.cols, self.f.nrows(), self.g.nrows())
    }

    fn check_shapes(&self) -> Result<(), HomotopyError> {
        let (d1, d2, d3) = self.dims();
        if self.g.cols != d2 || self.s.cols != d1 || self.s.nrows() != d3 {
            return Err(HomotopyError::NotAQuiver);
        }
        Ok(())
    }

    /// Whether `g f = 0`.
    pub fn composes_to_zero(&self) -> bool {
        self.check_shapes().is_ok() && self.g.mul(&self.f).map_or(false, |m| m.is_zero())
    }

    pub fn ranks(&self) -> QuiverRanks {
        let (d1, d2, d3) = self.dims();
        let image_s = self.s.columns();
        let image_g = self.g.columns();
        let restricted: Vec<BitVec> =
            f2_kernel(&self.f).iter().map(|k| self.s.mul_vec(k).expect("kernel vector has the domain length")).collect();
        QuiverRanks {
            d1,
            d2,
            d3,
            rf: f2_rank(&self.f),
            rg: f2_rank(&self.g),
            r1: span_rank(&image_s, d3),
            r2: span_rank(&restricted, d3),
            r3: intersection_dim(&image_g, &image_s, d3),
            r4: intersection_dim(&image_g, &restricted, d3),
        }
    }

    /// Multiplicities of the nine indecomposable summands.
    pub fn decompose(&self) -> Result<DecompositionCounts, HomotopyError> {
        if !self.composes_to_zero() {
            return Err(HomotopyError::NotAQuiver);
        }
        let ranks = self.ranks();
        let v = apply(&INVERSE, ranks.to_array());
        if let Some(k) = v.iter().position(|&c| c < 0) {
            return Err(HomotopyError::NegativeCount(format!("summand {k} has count {} for ranks {ranks:?}", v[k])));
        }
        let c = v.map(|c| c as u32);
        let counts = DecompositionCounts { s: [c[0], c[1], c[2]], p: [c[3], c[4]], x: [c[5], c[6], c[7], c[8]] };
        debug_assert_eq!(counts.forward(), ranks);
        Ok(counts)
    }

    /// The direct sum of the indecomposable quivers with these multiplicities.
    pub fn from_counts(counts: &DecompositionCounts) -> Quiver {
        let mut pieces: Vec<(usize, usize, usize, Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<(usize, usize)>)> = Vec::new();
        let mut push = |n: u32, piece: (usize, usize, usize, Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<(usize, usize)>)| {
            for _ in 0..n {
                pieces.push(piece.clone());
            }
        };
        push(counts.s[0], (1, 0, 0, vec![], vec![], vec![]));
        push(counts.s[1], (0, 1, 0, vec![], vec![], vec![]));
        push(counts.s[2], (0, 0, 1, vec![], vec![], vec![]));
        push(counts.p[0], (1, 1, 0, vec![(0, 0)], vec![], vec![]));
        push(counts.p[1], (0, 1, 1, vec![], vec![(0, 0)], vec![]));
        push(counts.x[0], (1, 0, 1, vec![], vec![], vec![(0, 0)]));
        push(counts.x[1], (1, 1, 1, vec![(0, 0)], vec![], vec![(0, 0)]));
        push(counts.x[2], (1, 1, 1, vec![], vec![(0, 0)], vec![(0, 0)]));
        push(counts.x[3], (1, 2, 1, vec![(0, 0)], vec![(0, 1)], vec![(0, 0)]));
        let total = |k: usize| pieces.iter().map(|p| [p.0, p.1, p.2][k]).sum::<usize>();
        let (d1, d2, d3) = (total(0), total(1), total(2));
        let mut q = Quiver { f: BitMatrix::zeros(d2, d1), g: BitMatrix::zeros(d3, d2), s: BitMatrix::zeros(d3, d1) };
        let (mut o1, mut o2, mut o3) = (0, 0, 0);
        for (a, b, c, f, g, s) in pieces {
            // Entries are (row, column) pairs inside the block.
            for (r, col) in f {
                q.f.set(o2 + r, o1 + col, true);
            }
            for (r, col) in g {
                q.g.set(o3 + r, o2 + col, true);
            }
            for (r, col) in s {
                q.s.set(o3 + r, o1 + col, true);
            }
            o1 += a;
            o2 += b;
            o3 += c;
        }
        q
    }
}

/// One indecomposable piece of a wedge sum, with its suspension exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Summand {
    /// `S^k`.
    Sphere(i32),
    /// `Σ^k RP2`.
    SuspRP2(i32),
    /// `Σ^k CP2`.
    SuspCP2(i32),
    /// `Σ^k (RP5/RP2)`.
    SuspRP5modRP2(i32),
    /// `Σ^k (RP4/RP1)`.
    SuspRP4modRP1(i32),
    /// `Σ^k (RP2^RP2)`.
    SuspSmashRP2(i32),
}

impl Summand {
    pub fn suspension(&self) -> i32 {
        match *self {
            Summand::Sphere(k)
            | Summand::SuspRP2(k)
            | Summand::SuspCP2(k)
            | Summand::SuspRP5modRP2(k)
            | Summand::SuspRP4modRP1(k)
            | Summand::SuspSmashRP2(k) => k,
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Summand::Sphere(_) => 0,
            Summand::SuspRP2(_) => 1,
            Summand::SuspCP2(_) => 2,
            Summand::SuspRP5modRP2(_) => 3,
            Summand::SuspRP4modRP1(_) => 4,
            Summand::SuspSmashRP2(_) => 5,
        }
    }

    /// Reduced F2 cohomology `(degree, dimension)` of the summand.
    pub fn f2_cohomology(&self) -> Vec<(i32, usize)> {
        match *self {
            Summand::Sphere(k) => vec![(k, 1)],
            Summand::SuspRP2(k) => vec![(k + 1, 1), (k + 2, 1)],
            Summand::SuspCP2(k) => vec![(k + 2, 1), (k + 4, 1)],
            Summand::SuspRP5modRP2(k) => vec![(k + 3, 1), (k + 4, 1), (k + 5, 1)],
            Summand::SuspRP4modRP1(k) => vec![(k + 2, 1), (k + 3, 1), (k + 4, 1)],
            Summand::SuspSmashRP2(k) => vec![(k + 2, 1), (k + 3, 2), (k + 4, 1)],
        }
    }

    /// Canonical text form such as `S^-9`, `Σ^-10 RP2` or `Σ^-6 (RP2^RP2)`.
    pub fn text(&self) -> String {
        let susp = |k: i32, body: &str| if k == 0 { body.to_string() } else { format!("Σ^{k} {body}") };
        match *self {
            Summand::Sphere(k) => format!("S^{k}"),
            Summand::SuspRP2(k) => susp(k, "RP2"),
            Summand::SuspCP2(k) => susp(k, "CP2"),
            Summand::SuspRP5modRP2(k) => susp(k, "(RP5/RP2)"),
            Summand::SuspRP4modRP1(k) => susp(k, "(RP4/RP1)"),
            Summand::SuspSmashRP2(k) => susp(k, "(RP2^RP2)"),
        }
    }
}

/// A formal wedge sum, kept sorted by suspension and then summand kind.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WedgeExpr {
    pub summands: Vec<Summand>,
}

impl WedgeExpr {
    pub fn new(mut summands: Vec<Summand>) -> Self {
        summands.sort_by_key(|s| (s.suspension(), s.kind_rank()));
        WedgeExpr { summands }
    }

    /// The wedge sum attached to the quiver counts in cohomological degree `i`.
    pub fn from_counts(counts: &DecompositionCounts, i: i32) -> Self {
        let mut out = Vec::new();
        let mut add = |n: u32, s: Summand| out.extend(std::iter::repeat(s).take(n as usize));
        for k in 0..3 {
            add(counts.s[k], Summand::Sphere(i + k as i32));
        }
        for k in 0..2 {
            add(counts.p[k], Summand::SuspRP2(i + k as i32 - 1));
        }
        add(counts.x[0], Summand::SuspCP2(i - 2));
        add(counts.x[1], Summand::SuspRP5modRP2(i - 3));
        add(counts.x[2], Summand::SuspRP4modRP1(i - 2));
        add(counts.x[3], Summand::SuspSmashRP2(i - 2));
        WedgeExpr::new(out)
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Text form of each summand, in order.
    pub fn texts(&self) -> Vec<String> {
        self.summands.iter().map(Summand::text).collect()
    }

    /// Reduced F2 cohomology of the wedge, by degree.
    pub fn f2_cohomology(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for s in &self.summands {
            for (d, n) in s.f2_cohomology() {
                *out.entry(d).or_insert(0) += n;
            }
        }
        out
    }

    /// Whether every summand is a sphere or a suspended `RP2`.
    pub fn is_moore(&self) -> bool {
        self.summands.iter().all(|s| matches!(s, Summand::Sphere(_) | Summand::SuspRP2(_)))
    }
}

impl fmt::Display for WedgeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "*");
        }
        write!(f, "{}", self.texts().join(" ∨ "))
    }
}

/// Which hypothesis of the width-three classification fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateFailure {
    /// Support spreads over these diagonals `2i - j`.
    Diagonals(Vec<i32>),
    /// A torsion summand of order other than 2 at `(i, j)`.
    Torsion { i: i32, j: i32, order: u64 },
    /// Torsion on the lowest diagonal at `(i, j)`.
    TorsionOnLowestDiagonal { i: i32, j: i32 },
}

impl fmt::Display for GateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateFailure::Diagonals(d) => write!(f, "support on diagonals {d:?}"),
            GateFailure::Torsion { i, j, order } => write!(f, "torsion of order {order} at ({i}, {j})"),
            GateFailure::TorsionOnLowestDiagonal { i, j } => write!(f, "torsion on the lowest diagonal at ({i}, {j})"),
        }
    }
}

/// Outcome of checking the width-three hypotheses on `Kh_Z`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateReport {
    /// Lowest diagonal `2i - j` carrying homology.
    pub sigma: Option<i32>,
    pub failures: Vec<GateFailure>,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `Kh_Z` lies on diagonals `σ, σ + 2, σ + 4`, that all torsion
/// is `Z/2`, and that the diagonal `σ` is torsion-free.
pub fn check_width3(table: &BTreeMap<(i32, i32), HomologyGroup>) -> GateReport {
    let support: Vec<(&(i32, i32), &HomologyGroup)> = table.iter().filter(|(_, g)| !g.is_zero()).collect();
    let Some(sigma) = support.iter().map(|(&(i, j), _)| 2 * i - j).min() else {
        return GateReport::default();
    };
    let mut failures = Vec::new();
    let mut diagonals: Vec<i32> = support.iter().map(|(&(i, j), _)| 2 * i - j).collect();
    diagonals.sort_unstable();
    diagonals.dedup();
    if diagonals.iter().any(|&d| d > sigma + 4 || (d - sigma) % 2 != 0) {
        failures.push(GateFailure::Diagonals(diagonals));
    }
    for (&(i, j), g) in &support {
        for &order in &g.torsion {
            if order != 2 {
                failures.push(GateFailure::Torsion { i, j, order });
            }
        }
        if 2 * i - j == sigma && !g.torsion.is_empty() {
            failures.push(GateFailure::TorsionOnLowestDiagonal { i, j });
        }
    }
    GateReport { sigma: Some(sigma), failures }
}

/// Homotopy type of the stable space in quantum grading `maps.j`, for a
/// table that passed the width-three gate with lowest diagonal `sigma`.
pub fn homotopy_type(gate: &GateReport, maps: &SqMaps) -> Result<(WedgeExpr, DecompositionCounts), HomotopyError> {
    if !gate.passed() {
        let reasons: Vec<String> = gate.failures.iter().map(ToString::to_string).collect();
        return Err(HomotopyError::Gate(reasons.join("; ")));
    }
    let Some(sigma) = gate.sigma else {
        return Ok((WedgeExpr::default(), DecompositionCounts::default()));
    };
    if (maps.j + sigma) % 2 != 0 {
        return Err(HomotopyError::Gate(format!("quantum grading {} has the wrong parity", maps.j)));
    }
    let i = (maps.j + sigma) / 2;
    if let Some((&k, _)) = maps.dims.iter().find(|(&k, &d)| d > 0 && !(i..=i + 2).contains(&k)) {
        return Err(HomotopyError::Gate(format!("F2 homology at ({k}, {}) outside degrees {i}..{}", maps.j, i + 2)));
    }
    let counts = maps.quiver(i).decompose()?;
    Ok((WedgeExpr::from_counts(&counts, i), counts))
}

/// Whether the wedge's F2 cohomology matches the given dimensions by degree.
pub fn cohomology_consistent(expr: &WedgeExpr, dims: &BTreeMap<i32, usize>) -> bool {
    let mut want: BTreeMap<i32, usize> = dims.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect();
    want.retain(|_, d| *d > 0);
    expr.f2_cohomology() == want
}
