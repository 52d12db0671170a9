//! The bigraded Khovanov chain complex of a diagram.
//!
//! A generator is a cube vertex together with an `x+`/`x-` labelling of the
//! circles of the resolution there (bit `k` of `labels` set means circle `k`
//! carries `x+`). Generators are grouped by bigrading `(i, j)`; each group is
//! stored as a flat array together with its outgoing incidences into
//! `(i + 1, j)`, each carrying the cube sign `s` of its edge.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{edge_sign, face_frame, Vertex};
use crate::pd::LinkDiagram;
use crate::resolve::{ladybug_data, resolve_all, surgery, ResolutionConfig, SurgeryKind, SurgeryResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub vertex: u64,
    pub labels: u64,
}

impl Generator {
    pub fn is_plus(&self, circle: usize) -> bool {
        self.labels >> circle & 1 == 1
    }

    pub fn plus_count(&self) -> u32 {
        self.labels.count_ones()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrading {
    pub gr_h: i32,
    pub gr_q: i32,
}

/// Which of the two planar pairings is used on four-element between-sets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LadybugConvention {
    /// Pair the generators whose `x+` circles share the segment running,
    /// along the circle's traversal, from an outside-arc endpoint to the
    /// next inside-arc endpoint.
    #[default]
    Right,
    /// The mirror choice: share the segment from an inside-arc endpoint to
    /// the next outside-arc endpoint.
    Left,
}

/// One incidence `y -> x` of the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    /// Index of `x` in the next homological level.
    pub target: u32,
    /// `s(C_{F(x),F(y)})`: the integral coefficient is `(-1)^sign`.
    pub sign: u8,
}

/// Generators of one bigrading and the differential leaving them.
#[derive(Clone, Debug, Default)]
pub struct Level {
    pub gens: Vec<Generator>,
    pub index: HashMap<Generator, u32>,
    /// `delta[k]`: incidences from `gens[k]`, sorted by target.
    pub delta: Vec<Vec<Incidence>>,
    /// `codelta[k]`: sources (in the previous level) of incidences into `gens[k]`, sorted.
    pub codelta: Vec<Vec<u32>>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

/// Canonical order: vertices lexicographic in their coordinates, then labels
/// lexicographic over the canonically ordered circles.
fn canonical_key(g: &Generator, n: usize, circles: usize) -> (u64, u64) {
    let rev = |w: u64, len: usize| if len == 0 { 0 } else { w.reverse_bits() >> (64 - len) };
    (rev(g.vertex, n), rev(g.labels, circles))
}

pub struct KhComplex {
    pub diagram: LinkDiagram,
    pub configs: Vec<ResolutionConfig>,
    /// `surgeries[v][c]`: surgery at crossing `c` out of vertex `v` (when `c` is 0 there).
    surgeries: Vec<Vec<Option<SurgeryResult>>>,
    pub levels: BTreeMap<(i32, i32), Level>,
    pub ladybug: LadybugConvention,
}

impl KhComplex {
    pub fn new(diagram: LinkDiagram) -> Self {
        Self::with_convention(diagram, LadybugConvention::default())
    }

    pub fn with_convention(diagram: LinkDiagram, ladybug: LadybugConvention) -> Self {
        let n = diagram.n();
        let configs = resolve_all(&diagram);
        let surgeries: Vec<Vec<Option<SurgeryResult>>> = (0..configs.len())
            .into_par_iter()
            .map(|v| {
                (0..n)
                    .map(|c| {
                        if v >> c & 1 == 1 {
                            None
                        } else {
                            surgery(&diagram, &configs[v], &configs[v | 1 << c], c)
                        }
                    })
                    .collect()
            })
            .collect();

        let mut groups: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
        for (v, cfg) in configs.iter().enumerate() {
            let k = cfg.circle_count();
            for labels in 0u64..1 << k {
                let g = Generator { vertex: v as u64, labels };
                groups.entry(bigrading_of(&diagram, k, &g).key()).or_default().push(g);
            }
        }
        for gens in groups.values_mut() {
            gens.sort_by_key(|g| canonical_key(g, n, configs[g.vertex as usize].circle_count()));
        }
        let mut levels: BTreeMap<(i32, i32), Level> = groups
            .into_iter()
            .map(|(key, gens)| {
                let index = gens.iter().enumerate().map(|(k, g)| (*g, k as u32)).collect();
                (key, Level { gens, index, ..Default::default() })
            })
            .collect();

        let mut complex = KhComplex { diagram, configs, surgeries, levels: BTreeMap::new(), ladybug };
        let keys: Vec<(i32, i32)> = levels.keys().copied().collect();
        let deltas: Vec<Vec<Vec<Incidence>>> = keys
            .par_iter()
            .map(|&(i, j)| {
                let level = &levels[&(i, j)];
                let next = levels.get(&(i + 1, j));
                level
                    .gens
                    .iter()
                    .map(|g| {
                        let Some(next) = next else { return Vec::new() };
                        let mut out: Vec<Incidence> = complex
                            .delta_gens(g)
                            .into_iter()
                            .map(|(x, sign)| Incidence { target: next.index[&x], sign })
                            .collect();
                        out.sort_unstable_by_key(|inc| inc.target);
                        out
                    })
                    .collect()
            })
            .collect();
        for (key, delta) in keys.iter().zip(deltas) {
            let len_next = levels.get(&(key.0 + 1, key.1)).map_or(0, |l| l.len());
            let mut codelta = vec![Vec::new(); len_next];
            for (y, incs) in delta.iter().enumerate() {
                for inc in incs {
                    codelta[inc.target as usize].push(y as u32);
                }
            }
            levels.get_mut(key).unwrap().delta = delta;
            if let Some(next) = levels.get_mut(&(key.0 + 1, key.1)) {
                next.codelta = codelta;
            }
        }
        complex.levels = levels;
        complex
    }

    pub fn n(&self) -> usize {
        self.diagram.n()
    }

    pub fn n_minus(&self) -> usize {
        self.diagram.n_minus
    }

    pub fn level(&self, i: i32, j: i32) -> Option<&Level> {
        self.levels.get(&(i, j))
    }

    /// Generators of bigrading `(i, j)` in canonical order.
    pub fn generators(&self, i: i32, j: i32) -> &[Generator] {
        self.level(i, j).map_or(&[], |l| &l.gens)
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.level(i, j).map_or(0, Level::len)
    }

    pub fn circle_count(&self, vertex: u64) -> usize {
        self.configs[vertex as usize].circle_count()
    }

    pub fn bigrading(&self, g: &Generator) -> Bigrading {
        bigrading_of(&self.diagram, self.circle_count(g.vertex), g)
    }

    /// Quantum gradings that carry generators, ascending.
    pub fn q_gradings(&self) -> Vec<i32> {
        let mut js: Vec<i32> = self.levels.keys().map(|&(_, j)| j).collect();
        js.sort_unstable();
        js.dedup();
        js
    }

    /// Homological gradings present in quantum grading `j`, ascending.
    pub fn h_gradings(&self, j: i32) -> Vec<i32> {
        self.levels.keys().filter(|&&(_, jj)| jj == j).map(|&(i, _)| i).collect()
    }

    /// The differential of one generator: targets with their cube signs.
    pub fn delta_gens(&self, y: &Generator) -> Vec<(Generator, u8)> {
        let mut out = Vec::new();
        let v = y.vertex;
        for c in 0..self.n() {
            let Some(s) = &self.surgeries[v as usize][c] else { continue };
            let w = v | 1 << c;
            let sign = edge_sign(v, c);
            // Labels on circles untouched by the surgery carry over.
            let mut base = 0u64;
            for (z, &img) in s.map.iter().enumerate() {
                if !s.before.contains(&z) && y.is_plus(z) {
                    base |= 1 << img;
                }
            }
            match s.kind {
                SurgeryKind::Merge => {
                    let (a, b) = (y.is_plus(s.before[0]), y.is_plus(s.before[1]));
                    let m = 1u64 << s.after[0];
                    match (a, b) {
                        (true, true) => out.push((Generator { vertex: w, labels: base | m }, sign)),
                        (true, false) | (false, true) => out.push((Generator { vertex: w, labels: base }, sign)),
                        (false, false) => {}
                    }
                }
                SurgeryKind::Split => {
                    let (p, q) = (1u64 << s.after[0], 1u64 << s.after[1]);
                    if y.is_plus(s.before[0]) {
                        out.push((Generator { vertex: w, labels: base | p }, sign));
                        out.push((Generator { vertex: w, labels: base | q }, sign));
                    } else {
                        out.push((Generator { vertex: w, labels: base }, sign));
                    }
                }
            }
        }
        out
    }

    /// Whether `x` appears in the F2 differential of `y`.
    pub fn differential_edge(&self, y: &Generator, x: &Generator) -> bool {
        self.delta_gens(y).iter().any(|(g, _)| g == x)
    }

    /// Indices (in level `(i + 1, j)`) of the generators between `x` in
    /// `(i + 2, j)` and `y` in `(i, j)`.
    pub fn between(&self, i: i32, j: i32, x: u32, y: u32) -> Vec<u32> {
        let (Some(lo), Some(mid)) = (self.level(i, j), self.level(i + 1, j)) else {
            return Vec::new();
        };
        lo.delta[y as usize]
            .iter()
            .map(|inc| inc.target)
            .filter(|&z| mid.delta[z as usize].binary_search_by_key(&x, |inc| inc.target).is_ok())
            .collect()
    }

    /// Frame value `f(C_{F(x),F(y)})` for generators two levels apart.
    pub fn frame(&self, x: &Generator, y: &Generator) -> u8 {
        let diff = x.vertex ^ y.vertex;
        debug_assert_eq!(diff.count_ones(), 2);
        let i = diff.trailing_zeros() as usize;
        let j = 63 - diff.leading_zeros() as usize;
        face_frame(y.vertex, i, j)
    }

    /// The ladybug matching on `between(x, y)`, returned as the partner of
    /// each element of `zs` (indices into level `(i + 1, j)`).
    pub fn ladybug_involution(&self, i: i32, j: i32, x: u32, y: u32, zs: &[u32]) -> Vec<u32> {
        match zs.len() {
            0 => Vec::new(),
            2 => vec![zs[1], zs[0]],
            4 => {
                let gx = self.level(i + 2, j).unwrap().gens[x as usize];
                let gy = self.level(i, j).unwrap().gens[y as usize];
                let mid = &self.level(i + 1, j).unwrap().gens;
                let diff = gx.vertex ^ gy.vertex;
                let c1 = diff.trailing_zeros() as usize;
                let c2 = 63 - diff.leading_zeros() as usize;
                let cfg = &self.configs[gy.vertex as usize];
                let frame = ladybug_data(cfg, c1, c2).expect("four-element between-set without a ladybug");
                let circle = &cfg.circles[frame.circle];
                let [a, b, _, _] = frame.order;
                let after = |t: usize| circle.edges[(t + 1) % circle.edges.len()];
                let edge = match self.ladybug {
                    LadybugConvention::Right => after(b),
                    LadybugConvention::Left => after(a),
                };
                // Each z carries x+ on exactly one of the two circles split off from Z1;
                // two z's are matched when that circle contains the chosen segment
                // in both or in neither.
                let on_segment = |z: u32| {
                    let g = mid[z as usize];
                    g.is_plus(self.configs[g.vertex as usize].circle_of_edge[edge])
                };
                zs.iter()
                    .map(|&z| {
                        let gz = mid[z as usize];
                        *zs.iter()
                            .find(|&&w| mid[w as usize].vertex != gz.vertex && on_segment(w) == on_segment(z))
                            .expect("ladybug partner")
                    })
                    .collect()
            }
            k => panic!("between-set of size {k}"),
        }
    }

    /// Graded Euler characteristic as `(j, coefficient)` pairs.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, i64> {
        let mut chi = BTreeMap::new();
        for (&(i, j), level) in &self.levels {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *chi.entry(j).or_insert(0) += sign * level.len() as i64;
        }
        chi.retain(|_, c| *c != 0);
        chi
    }

    pub fn total_generators(&self) -> usize {
        self.levels.values().map(Level::len).sum()
    }
}

impl Bigrading {
    fn key(self) -> (i32, i32) {
        (self.gr_h, self.gr_q)
    }
}

fn bigrading_of(diagram: &LinkDiagram, circles: usize, g: &Generator) -> Bigrading {
    let n = diagram.n() as i32;
    let nm = diagram.n_minus as i32;
    let u = g.vertex.count_ones() as i32;
    let plus = g.plus_count() as i32;
    let minus = circles as i32 - plus;
    Bigrading { gr_h: u - nm, gr_q: n - 3 * nm + u + plus - minus }
}

/// Vertex of a generator as a cube vertex.
pub fn vertex_of(complex: &KhComplex, g: &Generator) -> Vertex {
    Vertex::new(g.vertex, complex.n())
}
