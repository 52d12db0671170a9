//! Complete resolutions of a diagram at cube vertices.
//!
//! Circles are found by following corners: at a 0-resolved crossing slot 0
//! joins slot 1 and slot 2 joins slot 3; at a 1-resolved crossing slot 0
//! joins slot 3 and slot 1 joins slot 2. Slots are counterclockwise, so a
//! circle that turns from slot `p` to slot `p + 1` has the crossing (and the
//! surgery arc there) on its left.

use crate::cube::Vertex;
use crate::pd::LinkDiagram;

/// Side of an oriented circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One pass of a circle through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CornerPass {
    pub crossing: usize,
    /// Slot the circle enters from and leaves to.
    pub from: usize,
    pub to: usize,
}

impl CornerPass {
    /// Which side of the circle the crossing's centre lies on.
    pub fn centre_side(&self) -> Side {
        if self.to == (self.from + 1) % 4 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// A circle in a complete resolution, with a canonical traversal.
///
/// `edges[t]` is followed by `passes[t]`, then `edges[t + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circle {
    pub edges: Vec<usize>,
    pub passes: Vec<CornerPass>,
}

impl Circle {
    pub fn min_edge(&self) -> usize {
        self.edges.iter().copied().min().unwrap_or(usize::MAX)
    }
}

/// Where an arc touches a circle: circle id and index of the corner pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEnd {
    pub circle: usize,
    pub position: usize,
}

/// Surgery arc at a 0-resolved crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub crossing: usize,
    pub ends: [ArcEnd; 2],
    /// For arcs with both ends on one circle, the side of that circle's
    /// canonical traversal the arc lies on.
    pub side: Option<Side>,
}

#[derive(Clone, Debug)]
pub struct ResolutionConfig {
    pub vertex: Vertex,
    /// Circles sorted by their minimal edge id.
    pub circles: Vec<Circle>,
    pub arcs: Vec<Arc>,
    /// Circle containing each diagram edge.
    pub circle_of_edge: Vec<usize>,
    /// Crossing-free loops (empty diagram only); they come after `circles`.
    pub free_loops: usize,
}

impl ResolutionConfig {
    pub fn circle_count(&self) -> usize {
        self.circles.len() + self.free_loops
    }

    pub fn arc_at(&self, crossing: usize) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.crossing == crossing)
    }
}

/// Partner slot under the given resolution.
#[inline]
pub fn joined_slot(slot: usize, one_resolved: bool) -> usize {
    match (one_resolved, slot) {
        (false, 0) => 1,
        (false, 1) => 0,
        (false, 2) => 3,
        (false, 3) => 2,
        (true, 0) => 3,
        (true, 3) => 0,
        (true, 1) => 2,
        (true, 2) => 1,
        _ => unreachable!(),
    }
}

/// Complete resolution of `diagram` at vertex `u`.
pub fn resolve(diagram: &LinkDiagram, u: Vertex) -> ResolutionConfig {
    assert_eq!(u.len, diagram.n(), "vertex length must equal crossing count");
    let m = diagram.edge_count();
    let mut circle_of_edge = vec![usize::MAX; m];
    let mut circles = Vec::new();
    for start in 0..m {
        if circle_of_edge[start] != usize::MAX {
            continue;
        }
        let id = circles.len();
        let mut edges = Vec::new();
        let mut passes = Vec::new();
        // Enter through the second recorded end of the starting edge.
        let mut e = start;
        let mut arrive = diagram.edge_ends[start][1];
        loop {
            circle_of_edge[e] = id;
            edges.push(e);
            let (c, p) = arrive;
            let q = joined_slot(p, u.coord(c));
            passes.push(CornerPass { crossing: c, from: p, to: q });
            let leave = (c, q);
            e = diagram.edge_at(leave);
            if e == start && leave == diagram.edge_ends[start][0] {
                break;
            }
            arrive = diagram.across_edge(leave);
        }
        circles.push(Circle { edges, passes });
    }
    // Edges are scanned in increasing id, so circles are already ordered by
    // their minimal edge and each traversal starts at that edge.
    debug_assert!(circles.windows(2).all(|w| w[0].min_edge() < w[1].min_edge()));

    let mut arcs = Vec::new();
    for c in 0..diagram.n() {
        if u.coord(c) {
            continue;
        }
        let mut ends = Vec::with_capacity(2);
        let mut sides = Vec::with_capacity(2);
        for (z, circle) in circles.iter().enumerate() {
            for (t, pass) in circle.passes.iter().enumerate() {
                if pass.crossing == c {
                    ends.push(ArcEnd { circle: z, position: t });
                    sides.push(pass.centre_side());
                }
            }
        }
        debug_assert_eq!(ends.len(), 2);
        let side = (ends[0].circle == ends[1].circle).then(|| {
            debug_assert_eq!(sides[0], sides[1]);
            sides[0]
        });
        arcs.push(Arc { crossing: c, ends: [ends[0], ends[1]], side });
    }
    ResolutionConfig { vertex: u, circles, arcs, circle_of_edge, free_loops: diagram.free_loops }
}

/// Resolutions at every vertex, indexed by vertex bits.
pub fn resolve_all(diagram: &LinkDiagram) -> Vec<ResolutionConfig> {
    let n = diagram.n();
    (0u64..1 << n).map(|bits| resolve(diagram, Vertex::new(bits, n))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurgeryKind {
    Merge,
    Split,
}

/// Effect of surgery along one arc of a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryResult {
    pub kind: SurgeryKind,
    /// Circles of the source touched by the arc (one for a split, two for a merge).
    pub before: Vec<usize>,
    /// Circles of the target they become (two for a split, one for a merge).
    pub after: Vec<usize>,
    /// Image of every source circle in the target.
    pub map: Vec<usize>,
}

/// Surgery along the arc at `crossing`; `target` must be the resolution with that
/// crossing 1-resolved and everything else unchanged.
pub fn surgery(
    diagram: &LinkDiagram,
    source: &ResolutionConfig,
    target: &ResolutionConfig,
    crossing: usize,
) -> Option<SurgeryResult> {
    let arc = source.arc_at(crossing)?;
    debug_assert_eq!(target.vertex, source.vertex.with(crossing));
    let map: Vec<usize> = source
        .circles
        .iter()
        .map(|z| target.circle_of_edge[z.edges[0]])
        .collect();
    let slots = diagram.crossings[crossing].edges;
    let kind;
    let before;
    let mut after;
    if arc.ends[0].circle == arc.ends[1].circle {
        kind = SurgeryKind::Split;
        before = vec![arc.ends[0].circle];
        // After 1-resolution, slot 0 joins 3 and slot 1 joins 2.
        after = vec![target.circle_of_edge[slots[0]], target.circle_of_edge[slots[1]]];
        after.sort_unstable();
    } else {
        kind = SurgeryKind::Merge;
        let mut b = vec![arc.ends[0].circle, arc.ends[1].circle];
        b.sort_unstable();
        before = b;
        after = vec![map[before[0]]];
    }
    Some(SurgeryResult { kind, before, after, map })
}

/// Planar data of a ladybug configuration: two arcs whose four endpoints lie
/// on one circle and alternate along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadybugFrame {
    pub circle: usize,
    /// Arc on the left of the circle's canonical traversal ("inside" when the
    /// traversal is counterclockwise).
    pub inside_arc: usize,
    pub outside_arc: usize,
    /// Corner positions `(a, b, a', b')` in traversal order, `a, a'` on the
    /// inside arc and `b, b'` on the outside arc.
    pub order: [usize; 4],
}

/// Ladybug data for the arcs at two crossings, if they form a ladybug configuration.
pub fn ladybug_data(config: &ResolutionConfig, crossing1: usize, crossing2: usize) -> Option<LadybugFrame> {
    if crossing1 == crossing2 {
        return None;
    }
    let a1 = config.arc_at(crossing1)?;
    let a2 = config.arc_at(crossing2)?;
    let z = a1.ends[0].circle;
    if a1.ends.iter().chain(&a2.ends).any(|e| e.circle != z) {
        return None;
    }
    let (inside, outside) = match (a1.side?, a2.side?) {
        (Side::Left, Side::Right) => (a1, a2),
        (Side::Right, Side::Left) => (a2, a1),
        // Same side: planar arcs on one side cannot be linked.
        _ => return None,
    };
    let mut points: Vec<(usize, bool)> = inside
        .ends
        .iter()
        .map(|e| (e.position, true))
        .chain(outside.ends.iter().map(|e| (e.position, false)))
        .collect();
    points.sort_unstable();
    let alternating = (0..4).all(|k| points[k].1 != points[(k + 1) % 4].1);
    if !alternating {
        return None;
    }
    // Rotate so that the sequence starts on the inside arc.
    let start = if points[0].1 { 0 } else { 1 };
    let order = [0, 1, 2, 3].map(|k| points[(start + k) % 4].0);
    Some(LadybugFrame {
        circle: z,
        inside_arc: inside.crossing,
        outside_arc: outside.crossing,
        order,
    })
}
