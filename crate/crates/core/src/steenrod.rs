//! Chain-level Steenrod squares `sq1` and `sq2` via boundary matchings and
//! match graphs, and the induced maps on Khovanov homology.
//!
//! The chain-level constructions run against [`SquareInput`], an abstract
//! three-level slice `A -> B -> C` of a chain complex carrying signs, frames
//! and a ladybug matching. [`KhSquare`] supplies it from a [`KhComplex`];
//! [`ExplicitSquare`] lets small hand-made examples be written down directly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::KhComplex;
use crate::error::SteenrodError;
use crate::homology::{BitMatrix, BitVec, F2HomologyBasis};
use crate::homotopy::Quiver;

/// A slice `A -> B -> C` of a chain complex with the data sq1 and sq2 need.
///
/// Generators of each level are numbered `0..dim`. Incidences carry the cube
/// sign `s` of their edge.
pub trait SquareInput: Sync {
    fn dims(&self) -> (usize, usize, usize);

    /// Incidences `y -> z` from `A` into `B`, sorted by `z`.
    fn delta_a(&self, y: usize) -> Vec<(usize, u8)>;

    /// Incidences `z -> x` from `B` into `C`, sorted by `x`.
    fn delta_b(&self, z: usize) -> Vec<(usize, u8)>;

    /// Frame value on the 2-cell between `y` in `A` and `x` in `C`.
    fn frame(&self, x: usize, y: usize) -> u8;

    /// The ladybug partner of each element of the between-set `zs` of `(x, y)`.
    fn ladybug(&self, x: usize, y: usize, zs: &[usize]) -> Vec<usize>;

    /// Sign of the incidence `z -> x`, if present.
    fn sign_b(&self, x: usize, z: usize) -> Option<u8> {
        let d = self.delta_b(z);
        d.binary_search_by_key(&x, |&(t, _)| t).ok().map(|k| d[k].1)
    }

    /// Generators `z` of `B` with `z` in `δy` and `x` in `δz`.
    fn between(&self, x: usize, y: usize) -> Vec<usize> {
        self.delta_a(y).into_iter().map(|(z, _)| z).filter(|&z| self.sign_b(x, z).is_some()).collect()
    }
}

/// Checks the structural invariants of a square input on every pair
/// `(x, y)` with nonempty between-set: even size, a fixed-point-free
/// involution, and the sign change `s(x,z)+s(z,y)+s(x,z')+s(z',y) = 1`
/// across every matched pair.
pub fn validate_square(input: &dyn SquareInput) -> Result<usize, SteenrodError> {
    let (da, _, _) = input.dims();
    let mut pairs = 0;
    for y in 0..da {
        let out = input.delta_a(y);
        let mut xs: Vec<usize> = out.iter().flat_map(|&(z, _)| input.delta_b(z).into_iter().map(|(x, _)| x)).collect();
        xs.sort_unstable();
        xs.dedup();
        for x in xs {
            let zs = input.between(x, y);
            if zs.len() % 2 != 0 {
                return Err(SteenrodError::InvalidInput(format!("between-set of ({x}, {y}) has odd size {}", zs.len())));
            }
            let partners = input.ladybug(x, y, &zs);
            for (k, &z) in zs.iter().enumerate() {
                let w = partners[k];
                let back = zs.iter().position(|&t| t == w).map(|p| partners[p]);
                if w == z || back != Some(z) {
                    return Err(SteenrodError::InvalidInput(format!("ladybug matching of ({x}, {y}) is not a fixed-point-free involution")));
                }
                let weight = |t: usize| {
                    let s_zy = out.iter().find(|&&(u, _)| u == t).map_or(0, |&(_, s)| s);
                    s_zy ^ input.sign_b(x, t).unwrap_or(0)
                };
                if weight(z) ^ weight(w) != 1 {
                    return Err(SteenrodError::InvalidInput(format!("ladybug pair {z}, {w} of ({x}, {y}) does not change sign")));
                }
                pairs += 1;
            }
        }
    }
    Ok(pairs / 2)
}

/// A square input given by explicit tables.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ExplicitSquare {
    pub dims: (usize, usize, usize),
    /// `delta_a[y]`: `(z, s)` incidences.
    pub delta_a: Vec<Vec<(usize, u8)>>,
    /// `delta_b[z]`: `(x, s)` incidences.
    pub delta_b: Vec<Vec<(usize, u8)>>,
    /// Frame values keyed by `(x, y)`.
    pub frames: BTreeMap<(usize, usize), u8>,
    /// Ladybug pairs keyed by `(x, y)`. Between-sets of size two need no entry.
    pub ladybug: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl ExplicitSquare {
    /// Sorts incidences, then validates the result.
    pub fn new(mut square: ExplicitSquare) -> Result<Self, SteenrodError> {
        let (da, db, dc) = square.dims;
        if square.delta_a.len() != da || square.delta_b.len() != db {
            return Err(SteenrodError::InvalidInput("incidence tables do not match the level sizes".into()));
        }
        for row in &mut square.delta_a {
            row.sort_unstable();
            if row.iter().any(|&(z, _)| z >= db) {
                return Err(SteenrodError::InvalidInput("incidence into B out of range".into()));
            }
        }
        for row in &mut square.delta_b {
            row.sort_unstable();
            if row.iter().any(|&(x, _)| x >= dc) {
                return Err(SteenrodError::InvalidInput("incidence into C out of range".into()));
            }
        }
        for y in 0..da {
            for x in 0..dc {
                let zs = square.between(x, y);
                if !zs.is_empty() && !square.frames.contains_key(&(x, y)) {
                    return Err(SteenrodError::InvalidInput(format!("missing frame value for ({x}, {y})")));
                }
                if zs.len() > 2 && !square.ladybug.contains_key(&(x, y)) {
                    return Err(SteenrodError::InvalidInput(format!("missing ladybug matching for ({x}, {y})")));
                }
            }
        }
        validate_square(&square)?;
        Ok(square)
    }
}

impl SquareInput for ExplicitSquare {
    fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    fn delta_a(&self, y: usize) -> Vec<(usize, u8)> {
        self.delta_a[y].clone()
    }

    fn delta_b(&self, z: usize) -> Vec<(usize, u8)> {
        self.delta_b[z].clone()
    }

    fn frame(&self, x: usize, y: usize) -> u8 {
        self.frames.get(&(x, y)).copied().unwrap_or(0)
    }

    fn ladybug(&self, x: usize, y: usize, zs: &[usize]) -> Vec<usize> {
        if zs.len() == 2 {
            return vec![zs[1], zs[0]];
        }
        let pairs = self.ladybug.get(&(x, y)).map_or(&[][..], Vec::as_slice);
        zs.iter()
            .map(|&z| {
                pairs
                    .iter()
                    .find_map(|&(a, b)| if a == z { Some(b) } else if b == z { Some(a) } else { None })
                    .unwrap_or(z)
            })
            .collect()
    }
}

/// The slice `(i, j) -> (i + 1, j) -> (i + 2, j)` of a Khovanov complex.
#[derive(Clone, Copy)]
pub struct KhSquare<'a> {
    pub complex: &'a KhComplex,
    pub i: i32,
    pub j: i32,
}

impl<'a> KhSquare<'a> {
    pub fn new(complex: &'a KhComplex, i: i32, j: i32) -> Self {
        KhSquare { complex, i, j }
    }

    fn incidences(&self, level: i32, k: usize) -> Vec<(usize, u8)> {
        self.complex
            .level(level, self.j)
            .map_or(Vec::new(), |l| l.delta[k].iter().map(|inc| (inc.target as usize, inc.sign)).collect())
    }
}

impl SquareInput for KhSquare<'_> {
    fn dims(&self) -> (usize, usize, usize) {
        let c = self.complex;
        (c.dim(self.i, self.j), c.dim(self.i + 1, self.j), c.dim(self.i + 2, self.j))
    }

    fn delta_a(&self, y: usize) -> Vec<(usize, u8)> {
        self.incidences(self.i, y)
    }

    fn delta_b(&self, z: usize) -> Vec<(usize, u8)> {
        self.incidences(self.i + 1, z)
    }

    fn frame(&self, x: usize, y: usize) -> u8 {
        let gx = &self.complex.generators(self.i + 2, self.j)[x];
        let gy = &self.complex.generators(self.i, self.j)[y];
        self.complex.frame(gx, gy)
    }

    fn ladybug(&self, x: usize, y: usize, zs: &[usize]) -> Vec<usize> {
        let zs32: Vec<u32> = zs.iter().map(|&z| z as u32).collect();
        self.complex
            .ladybug_involution(self.i, self.j, x as u32, y as u32, &zs32)
            .into_iter()
            .map(|z| z as usize)
            .collect()
    }

    fn between(&self, x: usize, y: usize) -> Vec<usize> {
        self.complex.between(self.i, self.j, x as u32, y as u32).into_iter().map(|z| z as usize).collect()
    }
}

/// The matching data `(μ_z, h_z)` on `Pre(z)` for one `z`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreMatching {
    /// `Pre(z)` in ascending order.
    pub ys: Vec<usize>,
    /// Sign `s(z, y)` of each element of `ys`.
    pub signs: Vec<u8>,
    /// Position in `ys` of the partner of each element.
    pub partner: Vec<usize>,
    pub h: Vec<u8>,
}

impl PreMatching {
    fn position(&self, y: usize) -> Option<usize> {
        self.ys.binary_search(&y).ok()
    }
}

/// A boundary matching for a cycle: one [`PreMatching`] per `z` with
/// nonempty `Pre(z)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryMatching {
    pub per_z: BTreeMap<usize, PreMatching>,
}

impl BoundaryMatching {
    /// `μ_z(y)`.
    pub fn partner(&self, z: usize, y: usize) -> Option<usize> {
        let m = self.per_z.get(&z)?;
        m.position(y).map(|k| m.ys[m.partner[k]])
    }

    /// `h_z(y)`.
    pub fn h(&self, z: usize, y: usize) -> Option<u8> {
        let m = self.per_z.get(&z)?;
        m.position(y).map(|k| m.h[k])
    }

    /// Builds a matching from explicit `(z, [(y, h(y), y', h(y'))])` pairs and validates it.
    pub fn from_pairs(
        input: &dyn SquareInput,
        c: &BitVec,
        table: &[(usize, Vec<(usize, u8, usize, u8)>)],
    ) -> Result<Self, SteenrodError> {
        let pre = pre_sets(input, c)?;
        let mut per_z = BTreeMap::new();
        for (z, pairs) in table {
            let Some(entries) = pre.get(z) else {
                return Err(SteenrodError::InvalidMatching(format!("z = {z} has empty preimage")));
            };
            let ys: Vec<usize> = entries.iter().map(|&(y, _)| y).collect();
            let signs: Vec<u8> = entries.iter().map(|&(_, s)| s).collect();
            let mut partner = vec![usize::MAX; ys.len()];
            let mut h = vec![0; ys.len()];
            for &(a, ha, b, hb) in pairs {
                let (Ok(pa), Ok(pb)) = (ys.binary_search(&a), ys.binary_search(&b)) else {
                    return Err(SteenrodError::InvalidMatching(format!("pair ({a}, {b}) at z = {z} is outside the preimage")));
                };
                partner[pa] = pb;
                partner[pb] = pa;
                h[pa] = ha;
                h[pb] = hb;
            }
            per_z.insert(*z, PreMatching { ys, signs, partner, h });
        }
        let m = BoundaryMatching { per_z };
        m.validate(input, c)?;
        Ok(m)
    }

    /// Checks that this is a boundary matching for `c`.
    pub fn validate(&self, input: &dyn SquareInput, c: &BitVec) -> Result<(), SteenrodError> {
        let pre = pre_sets(input, c)?;
        if pre.len() != self.per_z.len() {
            return Err(SteenrodError::InvalidMatching("matching does not cover the preimages of the cycle".into()));
        }
        for (z, entries) in &pre {
            let Some(m) = self.per_z.get(z) else {
                return Err(SteenrodError::InvalidMatching(format!("no matching at z = {z}")));
            };
            let ys: Vec<usize> = entries.iter().map(|&(y, _)| y).collect();
            if m.ys != ys {
                return Err(SteenrodError::InvalidMatching(format!("matching at z = {z} is on the wrong preimage")));
            }
            for k in 0..ys.len() {
                let p = m.partner[k];
                if p >= ys.len() || p == k || m.partner[p] != k {
                    return Err(SteenrodError::InvalidMatching(format!("μ at z = {z} is not a fixed-point-free involution")));
                }
                let same_sign = entries[k].1 == entries[p].1;
                let (a, b) = (m.h[k], m.h[p]);
                let ok = if same_sign { a ^ b == 1 } else { a == 0 && b == 0 };
                if !ok || a > 1 || b > 1 {
                    return Err(SteenrodError::InvalidMatching(format!("h at z = {z} violates the sign rule")));
                }
            }
        }
        Ok(())
    }
}

/// `Pre(z) = {y in c : z in δy}` with signs `s(z, y)`, for every `z`.
fn pre_sets(input: &dyn SquareInput, c: &BitVec) -> Result<BTreeMap<usize, Vec<(usize, u8)>>, SteenrodError> {
    let (da, _, _) = input.dims();
    if c.len() != da {
        return Err(SteenrodError::InvalidInput(format!("chain of length {} for a level of size {da}", c.len())));
    }
    let mut pre: BTreeMap<usize, Vec<(usize, u8)>> = BTreeMap::new();
    for y in c.ones() {
        for (z, s) in input.delta_a(y) {
            pre.entry(z).or_default().push((y, s));
        }
    }
    Ok(pre)
}

/// A boundary matching for the cycle `c`. Seed 0 pairs each preimage in
/// ascending order and gives `h = 1` to the later element of an equal-sign
/// pair; other seeds shuffle the pairing and the orientation.
pub fn make_boundary_matching(input: &dyn SquareInput, c: &BitVec, seed: u64) -> Result<BoundaryMatching, SteenrodError> {
    let pre = pre_sets(input, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_z = BTreeMap::new();
    for (z, entries) in pre {
        if entries.len() % 2 != 0 {
            return Err(SteenrodError::NotACycle);
        }
        let mut order: Vec<usize> = (0..entries.len()).collect();
        if seed != 0 {
            order.shuffle(&mut rng);
        }
        let mut partner = vec![0; entries.len()];
        let mut h = vec![0; entries.len()];
        for pair in order.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            partner[a] = b;
            partner[b] = a;
            if entries[a].1 == entries[b].1 {
                let later_gets_one = seed == 0 || rng.gen::<bool>();
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                if later_gets_one {
                    h[hi] = 1;
                } else {
                    h[lo] = 1;
                }
            }
        }
        let ys = entries.iter().map(|&(y, _)| y).collect();
        let signs = entries.iter().map(|&(_, s)| s).collect();
        per_z.insert(z, PreMatching { ys, signs, partner, h });
    }
    Ok(BoundaryMatching { per_z })
}

/// `sq1_m(c) = Σ_z (Σ_{y in Pre(z)} h_z(y)) z`.
pub fn sq1_chain(input: &dyn SquareInput, c: &BitVec, m: &BoundaryMatching) -> Result<BitVec, SteenrodError> {
    m.validate(input, c)?;
    let (_, db, _) = input.dims();
    Ok(BitVec::from_ones(
        db,
        m.per_z.iter().filter(|(_, pm)| pm.h.iter().fold(0, |acc, &b| acc ^ b) == 1).map(|(&z, _)| z),
    ))
}

/// The match graph `G_c(x)`. Vertices are pairs `(z, y)`; each vertex has
/// one edge of each type, stored as the index of the other end.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchGraph {
    pub x: usize,
    /// `(z, y)` pairs in ascending order.
    pub vertices: Vec<(usize, usize)>,
    /// Other end of the ladybug (e-1) edge.
    pub e1: Vec<usize>,
    /// Frame label of the e-1 edge at each vertex.
    pub e1_label: Vec<u8>,
    /// Other end of the boundary-matching (e-2) edge.
    pub e2: Vec<usize>,
    /// Orientation of the e-2 edge seen from each vertex: `1` pointing
    /// away, `-1` pointing in, `0` unoriented.
    pub e2_dir: Vec<i8>,
}

/// The three numbers entering the sq2 coefficient of one `x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCounts {
    pub components: usize,
    pub f: u8,
    pub g: u8,
}

impl GraphCounts {
    pub fn coefficient(&self) -> u8 {
        (self.components as u8 & 1) ^ self.f ^ self.g
    }
}

/// Vertices `(z, y)` of every match graph, grouped by `x`.
fn graph_vertices(input: &dyn SquareInput, c: &BitVec) -> BTreeMap<usize, Vec<(usize, usize)>> {
    let mut out: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for y in c.ones() {
        for (z, _) in input.delta_a(y) {
            for (x, _) in input.delta_b(z) {
                out.entry(x).or_default().push((z, y));
            }
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

fn assemble_graph(
    input: &dyn SquareInput,
    m: &BoundaryMatching,
    x: usize,
    vertices: Vec<(usize, usize)>,
) -> Result<MatchGraph, SteenrodError> {
    let n = vertices.len();
    let find = |z: usize, y: usize| vertices.binary_search(&(z, y)).ok();
    let mut e1 = vec![usize::MAX; n];
    let mut e1_label = vec![0; n];
    let mut e2 = vec![usize::MAX; n];
    let mut e2_dir = vec![0i8; n];

    let mut by_y: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &(_, y)) in vertices.iter().enumerate() {
        by_y.entry(y).or_default().push(k);
    }
    for (y, ks) in by_y {
        let zs: Vec<usize> = ks.iter().map(|&k| vertices[k].0).collect();
        let partners = input.ladybug(x, y, &zs);
        let label = input.frame(x, y);
        for (k, w) in ks.iter().zip(partners) {
            let other = find(w, y).ok_or_else(|| SteenrodError::InvalidGraph(format!("ladybug partner ({w}, {y}) is not a vertex")))?;
            e1[*k] = other;
            e1_label[*k] = label;
        }
    }
    for (k, &(z, y)) in vertices.iter().enumerate() {
        let (Some(y2), Some(h)) = (m.partner(z, y), m.h(z, y)) else {
            return Err(SteenrodError::InvalidGraph(format!("no boundary matching at ({z}, {y})")));
        };
        let other = find(z, y2).ok_or_else(|| SteenrodError::InvalidGraph(format!("matched vertex ({z}, {y2}) is missing")))?;
        let h2 = m.h(z, y2).unwrap_or(0);
        e2[k] = other;
        e2_dir[k] = match (h, h2) {
            (0, 1) => 1,
            (1, 0) => -1,
            _ => 0,
        };
    }
    Ok(MatchGraph { x, vertices, e1, e1_label, e2, e2_dir })
}

/// The match graph `G_c(x)` for the matching `m`.
pub fn build_graph(input: &dyn SquareInput, c: &BitVec, m: &BoundaryMatching, x: usize) -> Result<MatchGraph, SteenrodError> {
    m.validate(input, c)?;
    let vertices = graph_vertices(input, c).remove(&x).unwrap_or_default();
    assemble_graph(input, m, x, vertices)
}

/// Cycle lengths and oriented-edge parities of each component, walking
/// from the lowest vertex and leaving it along its e-2 edge (or its e-1
/// edge when `e1_first`). Each entry is `(length, oriented edges, edges
/// agreeing with the walk)`.
pub fn graph_cycles(g: &MatchGraph, e1_first: bool) -> Result<Vec<(usize, usize, usize)>, SteenrodError> {
    let n = g.vertices.len();
    for k in 0..n {
        let ok = g.e1[k] < n && g.e2[k] < n && g.e1[k] != k && g.e2[k] != k && g.e1[g.e1[k]] == k && g.e2[g.e2[k]] == k;
        if !ok || g.e2_dir[g.e2[k]] != -g.e2_dir[k] || g.e1_label[g.e1[k]] != g.e1_label[k] {
            return Err(SteenrodError::InvalidGraph(format!("vertex {:?} does not have one edge of each type", g.vertices[k])));
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut len, mut oriented, mut agree) = (0, 0, 0);
        let mut cur = start;
        let mut along_e2 = !e1_first;
        loop {
            seen[cur] = true;
            let next = if along_e2 {
                if g.e2_dir[cur] != 0 {
                    oriented += 1;
                    if g.e2_dir[cur] == 1 {
                        agree += 1;
                    }
                }
                g.e2[cur]
            } else {
                g.e1[cur]
            };
            len += 1;
            cur = next;
            along_e2 = !along_e2;
            if cur == start {
                break;
            }
        }
        if len % 2 != 0 || oriented % 2 != 0 {
            return Err(SteenrodError::InvalidGraph(format!("component of length {len} with {oriented} oriented edges")));
        }
        out.push((len, oriented, agree));
    }
    Ok(out)
}

/// Components, sum of e-1 labels and orientation number of a match graph.
pub fn graph_counts(g: &MatchGraph) -> Result<GraphCounts, SteenrodError> {
    let cycles = graph_cycles(g, false)?;
    let f = (0..g.vertices.len()).filter(|&k| k < g.e1[k]).fold(0, |acc, k| acc ^ g.e1_label[k]);
    let g_count = cycles.iter().map(|&(_, _, agree)| agree).sum::<usize>() % 2;
    Ok(GraphCounts { components: cycles.len(), f, g: g_count as u8 })
}

/// The match graphs of every `x` reached from `c`.
pub fn match_graphs(input: &dyn SquareInput, c: &BitVec, m: &BoundaryMatching) -> Result<Vec<MatchGraph>, SteenrodError> {
    m.validate(input, c)?;
    graph_vertices(input, c)
        .into_iter()
        .map(|(x, vertices)| assemble_graph(input, m, x, vertices))
        .collect()
}

/// `sq2_m(c) = Σ_x (#components + f + g) x`.
pub fn sq2_chain(input: &dyn SquareInput, c: &BitVec, m: &BoundaryMatching) -> Result<BitVec, SteenrodError> {
    let (_, _, dc) = input.dims();
    let mut out = BitVec::zeros(dc);
    for g in match_graphs(input, c, m)? {
        if graph_counts(&g)?.coefficient() == 1 {
            out.set(g.x, true);
        }
    }
    Ok(out)
}

/// Sq1 and Sq2 on `Kh^{*,j}` over F2, as matrices acting on column vectors
/// of homology coordinates: `sq1[i]` maps `Kh^{i,j}` to `Kh^{i+1,j}` and
/// `sq2[i]` maps `Kh^{i,j}` to `Kh^{i+2,j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SqMaps {
    pub j: i32,
    /// `dims[i] = dim Kh^{i,j}` over F2, for every `i` with generators.
    pub dims: BTreeMap<i32, usize>,
    pub sq1: BTreeMap<i32, BitMatrix>,
    pub sq2: BTreeMap<i32, BitMatrix>,
}

impl SqMaps {
    pub fn dim(&self, i: i32) -> usize {
        self.dims.get(&i).copied().unwrap_or(0)
    }

    /// `Sq1` out of degree `i`, zero where no generators exist.
    pub fn sq1_at(&self, i: i32) -> BitMatrix {
        self.sq1.get(&i).cloned().unwrap_or_else(|| BitMatrix::zeros(self.dim(i + 1), self.dim(i)))
    }

    pub fn sq2_at(&self, i: i32) -> BitMatrix {
        self.sq2.get(&i).cloned().unwrap_or_else(|| BitMatrix::zeros(self.dim(i + 2), self.dim(i)))
    }

    /// The quiver `Kh^i -> Kh^{i+1} -> Kh^{i+2}` with `f, g = Sq1` and `s = Sq2`.
    pub fn quiver(&self, i: i32) -> Quiver {
        Quiver { f: self.sq1_at(i), g: self.sq1_at(i + 1), s: self.sq2_at(i) }
    }
}

fn project_into(target: Option<&F2HomologyBasis>, chain: &BitVec) -> Result<BitVec, SteenrodError> {
    match target {
        Some(b) => b.project(chain).map_err(|e| SteenrodError::InvalidInput(format!("image is not a cycle: {e}"))),
        None if chain.is_zero() => Ok(BitVec::zeros(0)),
        None => Err(SteenrodError::NotACycle),
    }
}

/// Homology images of one class under Sq1 and Sq2.
pub fn sq_of_class(
    complex: &KhComplex,
    bases: &BTreeMap<(i32, i32), F2HomologyBasis>,
    i: i32,
    j: i32,
    class: usize,
    seed: u64,
) -> Result<(BitVec, BitVec), SteenrodError> {
    let basis = &bases[&(i, j)];
    sq_of_cycle(complex, bases, i, j, &basis.reps[class], seed)
}

/// Homology images of the class of an arbitrary cycle under Sq1 and Sq2.
pub fn sq_of_cycle(
    complex: &KhComplex,
    bases: &BTreeMap<(i32, i32), F2HomologyBasis>,
    i: i32,
    j: i32,
    cycle: &BitVec,
    seed: u64,
) -> Result<(BitVec, BitVec), SteenrodError> {
    let input = KhSquare::new(complex, i, j);
    let m = make_boundary_matching(&input, cycle, seed)?;
    let a = sq1_chain(&input, cycle, &m)?;
    let b = sq2_chain(&input, cycle, &m)?;
    Ok((project_into(bases.get(&(i + 1, j)), &a)?, project_into(bases.get(&(i + 2, j)), &b)?))
}

/// Sq1 and Sq2 matrices in quantum grading `j`, using the matching with the given seed.
pub fn sq_maps(
    complex: &KhComplex,
    bases: &BTreeMap<(i32, i32), F2HomologyBasis>,
    j: i32,
    seed: u64,
) -> Result<SqMaps, SteenrodError> {
    let mut maps = SqMaps { j, ..SqMaps::default() };
    for i in complex.h_gradings(j) {
        maps.dims.insert(i, bases.get(&(i, j)).map_or(0, F2HomologyBasis::dim));
    }
    let dim = |i: i32| bases.get(&(i, j)).map_or(0, F2HomologyBasis::dim);
    for i in complex.h_gradings(j) {
        let n = dim(i);
        if n == 0 {
            continue;
        }
        let images: Vec<(BitVec, BitVec)> =
            (0..n).into_par_iter().map(|k| sq_of_class(complex, bases, i, j, k, seed)).collect::<Result<_, _>>()?;
        let (d1, d2) = (dim(i + 1), dim(i + 2));
        let mut m1 = BitMatrix::zeros(d1, n);
        let mut m2 = BitMatrix::zeros(d2, n);
        for (k, (a, b)) in images.iter().enumerate() {
            for r in a.ones() {
                m1.set(r, k, true);
            }
            for r in b.ones() {
                m2.set(r, k, true);
            }
        }
        maps.sq1.insert(i, m1);
        maps.sq2.insert(i, m2);
    }
    Ok(maps)
}

/// Sq maps for every quantum grading, keyed by `j`.
pub fn sq_maps_all(
    complex: &KhComplex,
    bases: &BTreeMap<(i32, i32), F2HomologyBasis>,
    seed: u64,
) -> Result<BTreeMap<i32, SqMaps>, SteenrodError> {
    complex
        .q_gradings()
        .into_par_iter()
        .map(|j| sq_maps(complex, bases, j, seed).map(|m| (j, m)))
        .collect::<Result<Vec<_>, _>>()
        .map(|v| v.into_iter().collect())
}

/// `St(i, j) = (r2 - r4, r1 - r2 - r3 + r4, r4, r3 - r4)` from the ranks
/// of `Sq2`, `Sq2` restricted to `ker Sq1`, and their intersections with
/// the image of `Sq1` out of degree `i + 1`.
pub fn st_invariant(maps: &SqMaps, i: i32) -> [u32; 4] {
    let r = maps.quiver(i).ranks();
    let (r1, r2, r3, r4) = (r.r1 as i64, r.r2 as i64, r.r3 as i64, r.r4 as i64);
    [r2 - r4, r1 - r2 - r3 + r4, r4, r3 - r4].map(|v| v as u32)
}

/// All nonzero values of `St`, keyed by `(i, j)`.
pub fn st_table(maps: &BTreeMap<i32, SqMaps>) -> BTreeMap<(i32, i32), [u32; 4]> {
    let mut out = BTreeMap::new();
    for (&j, m) in maps {
        for &i in m.dims.keys() {
            let st = st_invariant(m, i);
            if st != [0; 4] {
                out.insert((i, j), st);
            }
        }
    }
    out
}

/// A small hand-made slice with five generators in `A`, six in `B` and two
/// in `C` (all indices zero-based). For the cycle `c = y0 + ... + y4` and
/// the matching of [`sample_matching`], `sq1(c) = z0 + z2 + z5` and
/// `sq2(c) = x0`.
pub fn sample_square() -> ExplicitSquare {
    let delta_a = vec![
        vec![(0, 1), (1, 1), (2, 0), (3, 0)],
        vec![(0, 1), (2, 0), (4, 0)],
        vec![(1, 0), (3, 1), (4, 0)],
        vec![(4, 0), (5, 0)],
        vec![(4, 0), (5, 0)],
    ];
    let delta_b = vec![vec![(0, 0), (1, 0)], vec![(0, 0)], vec![(0, 0)], vec![(0, 0), (1, 0)], vec![(1, 0)], vec![(1, 1)]];
    let frames = [((0, 0), 1), ((1, 0), 0), ((0, 1), 0), ((1, 1), 1), ((0, 2), 1), ((1, 2), 0), ((1, 3), 1), ((1, 4), 1)]
        .into_iter()
        .collect();
    let ladybug = [((0, 0), vec![(0, 3), (1, 2)])].into_iter().collect();
    ExplicitSquare::new(ExplicitSquare { dims: (5, 6, 2), delta_a, delta_b, frames, ladybug })
        .expect("sample square is consistent")
}

/// The boundary matching used with [`sample_square`] and the cycle `c = y0 + ... + y4`.
pub fn sample_matching(square: &ExplicitSquare, c: &BitVec) -> Result<BoundaryMatching, SteenrodError> {
    BoundaryMatching::from_pairs(
        square,
        c,
        &[
            (0, vec![(0, 0, 1, 1)]),
            (1, vec![(0, 0, 2, 0)]),
            (2, vec![(0, 0, 1, 1)]),
            (3, vec![(0, 0, 2, 0)]),
            (4, vec![(1, 0, 2, 1), (3, 0, 4, 1)]),
            (5, vec![(3, 0, 4, 1)]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{bockstein_sq1, differential_f2, kh_f2_bases};
    use crate::pd::{orient_and_sign, parse_pd};

    fn toy() -> ExplicitSquare {
        sample_square()
    }

    fn toy_matching(sq: &ExplicitSquare, c: &BitVec) -> BoundaryMatching {
        sample_matching(sq, c).unwrap()
    }

    #[test]
    fn toy_example_squares() {
        let sq = toy();
        let c = BitVec::from_ones(5, 0..5);
        let m = toy_matching(&sq, &c);
        assert_eq!(sq1_chain(&sq, &c, &m).unwrap(), BitVec::from_ones(6, [0, 2, 5]));
        assert_eq!(sq2_chain(&sq, &c, &m).unwrap(), BitVec::from_ones(2, [0]));
    }

    #[test]
    fn toy_example_graphs() {
        let sq = toy();
        let c = BitVec::from_ones(5, 0..5);
        let m = toy_matching(&sq, &c);
        let g1 = build_graph(&sq, &c, &m, 0).unwrap();
        let g2 = build_graph(&sq, &c, &m, 1).unwrap();
        assert_eq!(graph_counts(&g1).unwrap(), GraphCounts { components: 1, f: 1, g: 1 });
        assert_eq!(graph_counts(&g2).unwrap(), GraphCounts { components: 2, f: 1, g: 1 });
        let lengths = |g: &MatchGraph| {
            let mut l: Vec<usize> = graph_cycles(g, false).unwrap().iter().map(|c| c.0).collect();
            l.sort_unstable();
            l
        };
        assert_eq!(lengths(&g1), vec![8]);
        assert_eq!(lengths(&g2), vec![4, 6]);
    }

    #[test]
    fn toy_matching_rejects_bad_h() {
        let sq = toy();
        let c = BitVec::from_ones(5, 0..5);
        // z2's preimages have different signs, so both must get h = 0.
        let bad = BoundaryMatching::from_pairs(&sq, &c, &[(1, vec![(0, 0, 2, 1)])]);
        assert!(bad.is_err());
    }

    #[test]
    fn toy_rejects_sign_preserving_ladybug() {
        let mut raw = toy();
        raw.ladybug.insert((0, 0), vec![(0, 1), (2, 3)]);
        assert!(ExplicitSquare::new(raw).is_err());
    }

    #[test]
    fn zero_chain_gives_empty_matching() {
        let sq = toy();
        let c = BitVec::zeros(5);
        let m = make_boundary_matching(&sq, &c, 0).unwrap();
        assert!(m.per_z.is_empty());
        assert!(sq1_chain(&sq, &c, &m).unwrap().is_zero());
        assert!(sq2_chain(&sq, &c, &m).unwrap().is_zero());
        assert!(build_graph(&sq, &c, &m, 0).unwrap().vertices.is_empty());
    }

    #[test]
    fn two_cycle_counts() {
        let g = MatchGraph {
            x: 0,
            vertices: vec![(0, 0), (1, 0)],
            e1: vec![1, 0],
            e1_label: vec![0, 0],
            e2: vec![1, 0],
            e2_dir: vec![0, 0],
        };
        assert_eq!(graph_counts(&g).unwrap(), GraphCounts { components: 1, f: 0, g: 0 });
    }

    #[test]
    fn toy_results_independent_of_seed() {
        let sq = toy();
        let c = BitVec::from_ones(5, 0..5);
        let reference = toy_matching(&sq, &c);
        let a0 = sq1_chain(&sq, &c, &reference).unwrap();
        for seed in 0..100 {
            let m = make_boundary_matching(&sq, &c, seed).unwrap();
            m.validate(&sq, &c).unwrap();
            // The toy slice has no level above C and no boundaries into B, so
            // classes are chains here only up to the images of A.
            let a = sq1_chain(&sq, &c, &m).unwrap();
            let mut diff = a.clone();
            diff.xor_assign(&a0);
            let da: Vec<BitVec> = (0..5).map(|y| BitVec::from_ones(6, sq.delta_a(y).into_iter().map(|(z, _)| z))).collect();
            let mut e = crate::homology::Echelon::new(6);
            for v in da {
                e.insert(v, BitVec::default());
            }
            assert!(e.contains(&diff), "seed {seed}");
            for g in match_graphs(&sq, &c, &m).unwrap() {
                let fwd = graph_cycles(&g, false).unwrap();
                let rev = graph_cycles(&g, true).unwrap();
                let parity = |v: &[(usize, usize, usize)]| v.iter().map(|c| c.2).sum::<usize>() % 2;
                assert_eq!(parity(&fwd), parity(&rev));
            }
        }
    }

    fn complex(pd: &str) -> KhComplex {
        KhComplex::new(orient_and_sign(&parse_pd(pd).unwrap()).unwrap())
    }

    const TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    #[test]
    fn khovanov_slices_satisfy_ladybug_sign_change() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let c = complex(pd);
            for &(i, j) in c.levels.keys() {
                validate_square(&KhSquare::new(&c, i, j)).unwrap();
            }
        }
    }

    #[test]
    fn sq1_matches_bockstein() {
        for pd in [TREFOIL, FIGURE_EIGHT] {
            let c = complex(pd);
            let bases = kh_f2_bases(&c);
            for (&(i, j), b) in &bases {
                for k in 0..b.dim() {
                    let (a, _) = sq_of_class(&c, &bases, i, j, k, 0).unwrap();
                    let expected = match bases.get(&(i + 1, j)) {
                        Some(t) => bockstein_sq1(&c, b, t, k).unwrap(),
                        None => BitVec::zeros(0),
                    };
                    assert_eq!(a, expected, "({i}, {j}) class {k}");
                }
            }
        }
    }

    #[test]
    fn sq_chains_are_cycles_for_many_seeds() {
        let c = complex(FIGURE_EIGHT);
        let bases = kh_f2_bases(&c);
        for (&(i, j), b) in &bases {
            let input = KhSquare::new(&c, i, j);
            for rep in &b.reps {
                for seed in 0..20 {
                    let m = make_boundary_matching(&input, rep, seed).unwrap();
                    let a = sq1_chain(&input, rep, &m).unwrap();
                    let s = sq2_chain(&input, rep, &m).unwrap();
                    assert!(differential_f2(&c, i + 1, j).mul_vec(&a).unwrap().is_zero());
                    assert!(differential_f2(&c, i + 2, j).mul_vec(&s).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn unknot_squares_vanish() {
        let c = complex("X(1,1,2,2)");
        let bases = kh_f2_bases(&c);
        let maps = sq_maps_all(&c, &bases, 0).unwrap();
        for m in maps.values() {
            assert!(m.sq1.values().all(BitMatrix::is_zero));
            assert!(m.sq2.values().all(BitMatrix::is_zero));
        }
        assert!(st_table(&maps).is_empty());
    }
}
