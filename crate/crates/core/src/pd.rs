//! Planar-diagram codes and oriented link diagrams.
//!
//! A PD code lists, for every crossing, the four edge labels meeting there in
//! counterclockwise order, starting from the incoming under-strand (the
//! KnotTheory/Knot Atlas convention). Crossings are numbered in the order
//! they are written.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::PdError;

/// Largest crossing count a diagram may have; vertices of the cube are `u64` bit sets.
pub const MAX_CROSSINGS: usize = 63;

/// Raw PD code: one `[a, b, c, d]` quadruple per crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PdCode {
    pub crossings: Vec<[u32; 4]>,
}

/// A slot is one of the four corners of a crossing: `(crossing, position)`.
pub type Slot = (usize, usize);

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, PdError> {
        let code = PdCode { crossings };
        code.validate()?;
        Ok(code)
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    fn validate(&self) -> Result<(), PdError> {
        if self.crossings.len() > MAX_CROSSINGS {
            return Err(PdError::TooManyCrossings(self.crossings.len()));
        }
        let mut counts = std::collections::BTreeMap::<u32, usize>::new();
        for x in &self.crossings {
            for &l in x {
                if l == 0 {
                    return Err(PdError::Syntax("edge labels must be positive".into()));
                }
                *counts.entry(l).or_default() += 1;
            }
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(PdError::LabelCount { label, count });
        }
        Ok(())
    }

    /// The mirror image: every crossing switches which strand passes over.
    /// The old over-strand becomes the new under-strand, listed from its
    /// incoming end.
    pub fn mirror(&self) -> Result<PdCode, PdError> {
        let d = orient_and_sign(self)?;
        let crossings = d
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, e] = x.edges.map(|k| d.edge_labels[k]);
                match x.sign {
                    // The over-strand runs from the fourth slot to the second.
                    Sign::Positive => [e, a, b, c],
                    Sign::Negative => [b, c, e, a],
                }
            })
            .collect();
        PdCode::new(crossings)
    }

    /// Renders the code in `X(a,b,c,d) ...` form; `parse_pd` inverts this.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

/// Parses a PD code.
///
/// Accepts `X(a,b,c,d)` / `X[a,b,c,d]` terms separated by whitespace or commas,
/// optionally wrapped in `PD[...]`, as well as the nested-list form
/// `[[a,b,c,d],[...]]`.
pub fn parse_pd(text: &str) -> Result<PdCode, PdError> {
    let mut s = text.trim();
    if let Some(rest) = s.strip_prefix("PD") {
        let rest = rest.trim();
        s = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| PdError::Syntax("unbalanced PD[...] wrapper".into()))?
            .trim();
    }
    if s.starts_with("[[") || s.starts_with("{{") || s == "[]" || s == "{}" {
        return parse_nested(s);
    }
    let mut crossings = Vec::new();
    let bytes = s.as_bytes();
    let mut pos = 0;
    while pos < bytes.len() {
        let ch = bytes[pos] as char;
        if ch.is_whitespace() || ch == ',' {
            pos += 1;
            continue;
        }
        if ch != 'X' && ch != 'x' {
            return Err(PdError::Syntax(format!("unexpected '{ch}' at offset {pos}")));
        }
        pos += 1;
        let open = bytes.get(pos).map(|&b| b as char);
        let close = match open {
            Some('(') => ')',
            Some('[') => ']',
            _ => return Err(PdError::Syntax(format!("expected '(' after X at offset {pos}"))),
        };
        let end = s[pos..]
            .find(close)
            .map(|e| pos + e)
            .ok_or_else(|| PdError::Syntax(format!("unterminated crossing at offset {pos}")))?;
        crossings.push(parse_quad(&s[pos + 1..end])?);
        pos = end + 1;
    }
    PdCode::new(crossings)
}

fn parse_nested(s: &str) -> Result<PdCode, PdError> {
    let inner = &s[1..s.len() - 1];
    let mut crossings = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
        if rest.is_empty() {
            break;
        }
        let open = rest.chars().next().unwrap();
        let close = match open {
            '[' => ']',
            '{' => '}',
            c => return Err(PdError::Syntax(format!("unexpected '{c}' in nested PD list"))),
        };
        let end = rest
            .find(close)
            .ok_or_else(|| PdError::Syntax("unterminated crossing in nested PD list".into()))?;
        crossings.push(parse_quad(&rest[1..end])?);
        rest = &rest[end + 1..];
    }
    PdCode::new(crossings)
}

fn parse_quad(body: &str) -> Result<[u32; 4], PdError> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(PdError::Syntax(format!(
            "crossing ({body}) has {} labels, expected 4",
            parts.len()
        )));
    }
    let mut quad = [0u32; 4];
    for (q, p) in quad.iter_mut().zip(&parts) {
        *q = p
            .parse()
            .map_err(|_| PdError::Syntax(format!("bad edge label '{p}'")))?;
    }
    Ok(quad)
}

/// Crossing sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub sign: Sign,
    /// Dense edge ids at the four corner slots, counterclockwise from the incoming under-strand.
    pub edges: [usize; 4],
}

/// A validated, oriented link diagram.
#[derive(Clone, Debug)]
pub struct LinkDiagram {
    pub crossings: Vec<Crossing>,
    pub n_minus: usize,
    pub components: usize,
    /// Original label of each dense edge id.
    pub edge_labels: Vec<u32>,
    /// The two slots each edge is attached to.
    pub edge_ends: Vec<[Slot; 2]>,
    /// Number of crossing-free circle components (only for the empty diagram).
    pub free_loops: usize,
}

impl LinkDiagram {
    pub fn n(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_labels.len()
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    /// Edge at a slot.
    pub fn edge_at(&self, (c, p): Slot) -> usize {
        self.crossings[c].edges[p]
    }

    /// The other end of the edge leaving through `slot`.
    pub fn across_edge(&self, slot: Slot) -> Slot {
        let e = self.edge_at(slot);
        let [s0, s1] = self.edge_ends[e];
        if s0 == slot {
            s1
        } else {
            s0
        }
    }

    /// The 0-crossing diagram of an unlink with `components` circles.
    pub fn unlink(components: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            n_minus: 0,
            components,
            edge_labels: Vec::new(),
            edge_ends: Vec::new(),
            free_loops: components,
        }
    }

    /// Diagram obtained by applying a permutation to the crossing order.
    /// `order[k]` is the old index of the new crossing `k`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.n());
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let crossings = order.iter().map(|&old| self.crossings[old].clone()).collect();
        let edge_ends = self
            .edge_ends
            .iter()
            .map(|ends| ends.map(|(c, p)| (inverse[c], p)))
            .collect();
        LinkDiagram {
            crossings,
            n_minus: self.n_minus,
            components: self.components,
            edge_labels: self.edge_labels.clone(),
            edge_ends,
            free_loops: self.free_loops,
        }
    }
}

/// Orients every component, assigns crossing signs and counts `n_minus`.
///
/// A component's direction comes from its under-passes (`a -> c` at each
/// crossing where it runs underneath); components with no under-pass follow
/// the label successor rule.
pub fn orient_and_sign(code: &PdCode) -> Result<LinkDiagram, PdError> {
    code.validate()?;
    let n = code.len();
    if n == 0 {
        return Ok(LinkDiagram::unlink(1));
    }
    // Dense edge ids in increasing label order.
    let mut labels: Vec<u32> = code.crossings.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let id_of = |l: u32| labels.binary_search(&l).unwrap();
    let mut edge_ends: Vec<Vec<Slot>> = vec![Vec::with_capacity(2); labels.len()];
    let mut slot_edges = vec![[0usize; 4]; n];
    for (c, x) in code.crossings.iter().enumerate() {
        for p in 0..4 {
            let e = id_of(x[p]);
            slot_edges[c][p] = e;
            edge_ends[e].push((c, p));
        }
    }
    let edge_ends: Vec<[Slot; 2]> = edge_ends.into_iter().map(|v| [v[0], v[1]]).collect();
    let other_end = |slot: Slot| -> Slot {
        let e = slot_edges[slot.0][slot.1];
        let [s0, s1] = edge_ends[e];
        if s0 == slot {
            s1
        } else {
            s0
        }
    };

    // Strand traversal: enter a crossing at slot p, leave through p+2.
    // `passes[c][strand]` records the traversal direction of the strand through
    // crossing c (strand 0 = slots 0/2, strand 1 = slots 1/3) as `entered at
    // the even/odd-low slot`.
    let mut visited = vec![[false; 2]; n];
    // For each crossing/strand: Some(true) if oriented from slot p to p+2 with p in {0,1}.
    let mut forward = vec![[None::<bool>; 2]; n];
    let mut components = 0;
    for c0 in 0..n {
        for strand0 in 0..2 {
            if visited[c0][strand0] {
                continue;
            }
            components += 1;
            // Collect passes as (crossing, entry slot) following one direction.
            let mut passes: Vec<(usize, usize)> = Vec::new();
            let mut entry = (c0, strand0);
            loop {
                let (c, p) = entry;
                let strand = p % 2;
                if visited[c][strand] {
                    break;
                }
                visited[c][strand] = true;
                passes.push((c, p));
                let exit = (c, (p + 2) % 4);
                entry = other_end(exit);
            }
            // Decide the direction of this traversal.
            let mut votes = passes.iter().filter(|&&(_, p)| p % 2 == 0).map(|&(_, p)| p == 0);
            let along = match votes.next() {
                Some(first) => {
                    if votes.any(|v| v != first) {
                        return Err(PdError::AmbiguousOrientation(format!(
                            "component through crossing {} passes under in both directions",
                            c0 + 1
                        )));
                    }
                    first
                }
                None => successor_direction(&passes, &slot_edges, &labels)?,
            };
            for &(c, p) in &passes {
                forward[c][p % 2] = Some((p < 2) == along);
            }
        }
    }

    check_planar(n, &slot_edges, &edge_ends)?;

    let mut crossings = Vec::with_capacity(n);
    let mut n_minus = 0;
    for c in 0..n {
        // Under-strand always runs 0 -> 2 by convention.
        debug_assert_eq!(forward[c][0], Some(true));
        let over_b_to_d = forward[c][1].expect("every strand is traversed");
        let sign = if over_b_to_d { Sign::Negative } else { Sign::Positive };
        if sign == Sign::Negative {
            n_minus += 1;
        }
        crossings.push(Crossing { sign, edges: slot_edges[c] });
    }
    Ok(LinkDiagram {
        crossings,
        n_minus,
        components,
        edge_labels: labels,
        edge_ends,
        free_loops: 0,
    })
}

/// Euler-characteristic check of the 4-valent map given by the slot rotation:
/// every connected piece must be a sphere.
fn check_planar(n: usize, slot_edges: &[[usize; 4]], edge_ends: &[[Slot; 2]]) -> Result<(), PdError> {
    let other_end = |(c, p): Slot| -> Slot {
        let [s0, s1] = edge_ends[slot_edges[c][p]];
        if s0 == (c, p) {
            s1
        } else {
            s0
        }
    };
    // Faces: leave along the edge at (c, p), arrive at (c', p'), turn to (c', p' - 1).
    let mut seen = vec![[false; 4]; n];
    let mut faces = 0;
    for c in 0..n {
        for p in 0..4 {
            if seen[c][p] {
                continue;
            }
            faces += 1;
            let mut dart = (c, p);
            while !seen[dart.0][dart.1] {
                seen[dart.0][dart.1] = true;
                let (c2, p2) = other_end(dart);
                dart = (c2, (p2 + 3) % 4);
            }
        }
    }
    // Connected pieces of the crossing graph.
    let mut piece = vec![usize::MAX; n];
    let mut pieces = 0;
    for start in 0..n {
        if piece[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        piece[start] = pieces;
        while let Some(c) = stack.pop() {
            for p in 0..4 {
                let (c2, _) = other_end((c, p));
                if piece[c2] == usize::MAX {
                    piece[c2] = pieces;
                    stack.push(c2);
                }
            }
        }
        pieces += 1;
    }
    // V - E + F = 2 per piece, with E = 2V.
    if faces != n + 2 * pieces {
        return Err(PdError::NonPlanar { faces, crossings: n, pieces });
    }
    Ok(())
}

/// Direction of an over-only component from its edge labels: `true` when
/// traversing the passes as listed makes labels increase.
fn successor_direction(
    passes: &[(usize, usize)],
    slot_edges: &[[usize; 4]],
    labels: &[u32],
) -> Result<bool, PdError> {
    // Label sequence along the traversal: the edge we leave each crossing on.
    let seq: Vec<u32> = passes
        .iter()
        .map(|&(c, p)| labels[slot_edges[c][(p + 2) % 4]])
        .collect();
    if seq.len() < 3 {
        // Too short to tell; either direction is the same up to relabelling.
        return Ok(seq.len() < 2 || seq[1] == seq[0] + 1 || seq[0] > seq[1] + 1);
    }
    let k = seq.len();
    let (min, max) = (*seq.iter().min().unwrap(), *seq.iter().max().unwrap());
    let step_up = |a: u32, b: u32| b == a + 1 || (a == max && b == min);
    let up = (0..k).all(|t| step_up(seq[t], seq[(t + 1) % k]));
    let down = (0..k).all(|t| step_up(seq[(t + 1) % k], seq[t]));
    match (up, down) {
        (true, false) => Ok(true),
        (false, true) => Ok(false),
        _ => Err(PdError::BrokenStrand(format!(
            "labels {seq:?} do not follow the successor rule"
        ))),
    }
}

/// One record of a corpus file: `<link_id>\t<pd_code>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRecord {
    pub line: usize,
    pub link_id: String,
    pub pd: String,
}

/// Splits a corpus file into records; blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Vec<Result<CorpusRecord, PdError>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(k, l)| match l.split_once('\t') {
            Some((id, pd)) => Ok(CorpusRecord {
                line: k + 1,
                link_id: id.trim().to_string(),
                pd: pd.trim().to_string(),
            }),
            None => Err(PdError::Syntax(format!("line {}: expected <link_id>\\t<pd_code>", k + 1))),
        })
        .collect()
}

/// PD code of the closure of a braid on `strands` strands, read bottom to
/// top. Letter `k > 0` crosses positions `k - 1` and `k` with the strand
/// coming from the left passing over; `-k` has it passing under. Every
/// generator `1..strands` must occur so that no strand closes up into a
/// crossingless circle.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PdCode, PdError> {
    for k in 1..strands {
        if !word.iter().any(|&g| g.unsigned_abs() as usize == k) {
            return Err(PdError::BrokenStrand(format!("generator {k} does not occur; a strand would close up alone")));
        }
    }
    if let Some(g) = word.iter().find(|g| g.unsigned_abs() as usize >= strands || **g == 0) {
        return Err(PdError::Syntax(format!("generator {g} out of range for {strands} strands")));
    }
    let mut current: Vec<u32> = (1..=strands as u32).collect();
    let mut next = strands as u32 + 1;
    let mut crossings = Vec::with_capacity(word.len());
    for &g in word {
        let k = g.unsigned_abs() as usize;
        let (a, b) = (current[k - 1], current[k]);
        let (c, d) = (next, next + 1);
        next += 2;
        // Corners: a lower left, b lower right, c upper left, d upper right.
        // The a-strand leaves at d and the b-strand at c.
        crossings.push(if g > 0 { [b, d, c, a] } else { [a, b, d, c] });
        current[k - 1] = c;
        current[k] = d;
    }
    // Glue the top of each position to its bottom.
    let rename: std::collections::HashMap<u32, u32> =
        current.iter().enumerate().map(|(p, &top)| (top, p as u32 + 1)).collect();
    for x in &mut crossings {
        for l in x.iter_mut() {
            if let Some(&r) = rename.get(l) {
                *l = r;
            }
        }
    }
    // Relabel so that labels increase along every component, which fixes
    // the orientation of components that never pass underneath.
    let successor: std::collections::BTreeMap<u32, u32> = crossings
        .iter()
        .zip(word)
        .flat_map(|(x, &g)| if g > 0 { [(x[3], x[1]), (x[0], x[2])] } else { [(x[0], x[2]), (x[1], x[3])] })
        .collect();
    let mut relabel = std::collections::HashMap::new();
    for &start in successor.keys() {
        let mut l = start;
        while !relabel.contains_key(&l) {
            relabel.insert(l, relabel.len() as u32 + 1);
            l = successor[&l];
        }
    }
    for x in &mut crossings {
        for l in x.iter_mut() {
            *l = relabel[l];
        }
    }
    PdCode::new(crossings)
}

/// Closure of a random braid with at most `max_crossings` letters (and at
/// least one). Strand counts range over `2..=4` as the budget allows.
pub fn random_braid_closure(rng: &mut impl rand::Rng, max_crossings: usize) -> PdCode {
    use rand::seq::SliceRandom;
    let max_crossings = max_crossings.max(1);
    let strands = rng.gen_range(2..=(max_crossings + 1).min(4));
    let len = rng.gen_range(strands - 1..=max_crossings);
    let mut word: Vec<i32> = (1..strands as i32).collect();
    while word.len() < len {
        word.push(rng.gen_range(1..strands as i32));
    }
    word.shuffle(rng);
    for g in &mut word {
        if rng.gen::<bool>() {
            *g = -*g;
        }
    }
    braid_closure(strands, &word).expect("every generator occurs")
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEFT_TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const RIGHT_TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";

    #[test]
    fn parses_trefoil() {
        let code = parse_pd(LEFT_TREFOIL).unwrap();
        assert_eq!(code.len(), 3);
        let d = orient_and_sign(&code).unwrap();
        assert_eq!(d.components, 1);
        assert_eq!(d.n_minus, 3);
        assert_eq!(d.writhe(), -3);
    }

    #[test]
    fn right_trefoil_is_positive() {
        let d = orient_and_sign(&parse_pd(RIGHT_TREFOIL).unwrap()).unwrap();
        assert_eq!(d.n_minus, 0);
        assert!(d.crossings.iter().all(|c| c.sign == Sign::Positive));
    }

    #[test]
    fn reflected_and_crossing_changed_keeps_signs() {
        let d = orient_and_sign(&parse_pd("X(4,1,5,2) X(6,3,1,4) X(2,5,3,6)").unwrap()).unwrap();
        assert_eq!(d.n_minus, 3);
    }

    #[test]
    fn alternative_syntaxes() {
        let a = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]").unwrap();
        let b = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap();
        let c = parse_pd("{{1, 5, 2, 4}, {3, 1, 4, 6}, {5, 3, 6, 2}}").unwrap();
        let d = parse_pd(RIGHT_TREFOIL).unwrap();
        assert_eq!(a, d);
        assert_eq!(b, d);
        assert_eq!(c, d);
    }

    #[test]
    fn empty_code() {
        let code = parse_pd("").unwrap();
        assert!(code.is_empty());
        let d = orient_and_sign(&code).unwrap();
        assert_eq!((d.n(), d.n_minus, d.components), (0, 0, 1));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_pd("X(1,2,3)"), Err(PdError::Syntax(_))));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(PdError::Syntax(_))));
        assert!(matches!(parse_pd("X(1,2,3,4"), Err(PdError::Syntax(_))));
        assert!(matches!(parse_pd("X(1,a,3,4)"), Err(PdError::Syntax(_))));
    }

    #[test]
    fn label_count_error() {
        assert!(matches!(
            parse_pd("X(1,2,3,4) X(1,2,3,5)"),
            Err(PdError::LabelCount { .. })
        ));
    }

    #[test]
    fn hopf_links() {
        let neg = orient_and_sign(&parse_pd("X(4,1,3,2) X(2,3,1,4)").unwrap()).unwrap();
        assert_eq!((neg.components, neg.n_minus), (2, 2));
        let pos = orient_and_sign(&parse_pd("X(4,2,3,1) X(2,4,1,3)").unwrap()).unwrap();
        assert_eq!((pos.components, pos.n_minus), (2, 0));
    }

    #[test]
    fn kinked_unknot() {
        let d = orient_and_sign(&parse_pd("X(1,1,2,2)").unwrap()).unwrap();
        assert_eq!(d.components, 1);
        assert_eq!(d.n(), 1);
    }

    #[test]
    fn non_planar_code_is_rejected() {
        let err = orient_and_sign(&parse_pd("X(1,3,2,4) X(4,1,3,2)").unwrap()).unwrap_err();
        assert!(matches!(err, PdError::NonPlanar { .. }));
    }

    #[test]
    fn render_round_trip() {
        let code = parse_pd(LEFT_TREFOIL).unwrap();
        assert_eq!(parse_pd(&code.render()).unwrap(), code);
    }

    #[test]
    fn corpus_lines() {
        let recs = parse_corpus("# comment\n3_1\tX(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\n\nbad line\n");
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].as_ref().unwrap().link_id, "3_1");
        assert!(recs[1].is_err());
    }

    #[test]
    fn braid_closures() {
        let d = orient_and_sign(&braid_closure(2, &[1, 1, 1]).unwrap()).unwrap();
        assert_eq!((d.n(), d.n_minus, d.components, d.writhe()), (3, 0, 1, 3));
        let d = orient_and_sign(&braid_closure(2, &[-1, -1, -1]).unwrap()).unwrap();
        assert_eq!((d.n_minus, d.writhe()), (3, -3));
        let d = orient_and_sign(&braid_closure(3, &[1, -2, 1, -2]).unwrap()).unwrap();
        assert_eq!((d.n(), d.components, d.writhe()), (4, 1, 0));
        let hopf = orient_and_sign(&braid_closure(2, &[1, 1]).unwrap()).unwrap();
        assert_eq!(hopf.components, 2);
        let mirror = parse_pd(RIGHT_TREFOIL).unwrap().mirror().unwrap();
        assert_eq!(mirror.render(), "X(4,1,5,2) X(6,3,1,4) X(2,5,3,6)");
        assert_eq!(orient_and_sign(&mirror).unwrap().n_minus, 3);
        let mixed = braid_closure(3, &[1, -2, 1, -2, -2]).unwrap();
        let (d, m) = (orient_and_sign(&mixed).unwrap(), orient_and_sign(&mixed.mirror().unwrap()).unwrap());
        assert_eq!(m.writhe(), -d.writhe());
        assert_eq!(mixed.mirror().unwrap().mirror().unwrap(), mixed);
        // The fourth strand only ever passes over.
        let d = orient_and_sign(&braid_closure(4, &[-1, 3, -3, -2, 2]).unwrap()).unwrap();
        assert_eq!((d.components, d.writhe()), (3, -1));
        assert!(braid_closure(3, &[1, 1]).is_err());
        assert!(braid_closure(2, &[2]).is_err());
    }
}
