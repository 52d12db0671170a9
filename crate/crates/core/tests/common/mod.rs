//! Helpers shared by the integration tests: corpus loading, random
//! diagrams and a state-sum oracle for the graded Euler characteristic.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use khsq::complex::KhComplex;
use khsq::homology::HomologyGroup;
use khsq::pd::{orient_and_sign, parse_corpus, parse_pd, random_braid_closure, PdCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS: &str = include_str!("../../../../data/acceptance_corpus.tsv");

pub const RIGHT_TREFOIL: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

/// PD code of a corpus link.
pub fn corpus_pd(id: &str) -> String {
    parse_corpus(CORPUS)
        .into_iter()
        .map(Result::unwrap)
        .find(|r| r.link_id == id)
        .unwrap_or_else(|| panic!("{id} missing from corpus"))
        .pd
}

pub fn complex(pd: &str) -> KhComplex {
    KhComplex::new(orient_and_sign(&parse_pd(pd).unwrap()).unwrap())
}

/// Closures of random braids with at most `max_crossings` crossings.
pub fn random_diagrams(seed: u64, count: usize, max_crossings: usize) -> Vec<PdCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_braid_closure(&mut rng, max_crossings)).collect()
}

pub fn group(free: usize, torsion: &[u64]) -> HomologyGroup {
    HomologyGroup { free_rank: free, torsion: torsion.to_vec() }
}

/// Integral Khovanov homology of 10_145 as tabulated in the Knot Atlas.
pub fn kh_10_145() -> BTreeMap<(i32, i32), HomologyGroup> {
    [
        ((0, -3), group(1, &[])),
        ((0, -5), group(1, &[])),
        ((-3, -7), group(1, &[])),
        ((-2, -7), group(1, &[])),
        ((-3, -9), group(0, &[2])),
        ((-2, -9), group(0, &[2])),
        ((-5, -11), group(1, &[])),
        ((-4, -11), group(2, &[])),
        ((-3, -11), group(1, &[])),
        ((-6, -13), group(1, &[])),
        ((-5, -13), group(0, &[2])),
        ((-4, -13), group(0, &[2])),
        ((-6, -15), group(1, &[2])),
        ((-5, -15), group(1, &[])),
        ((-8, -17), group(1, &[])),
        ((-7, -17), group(1, &[])),
        ((-8, -19), group(0, &[2])),
        ((-9, -21), group(1, &[])),
    ]
    .into_iter()
    .collect()
}

/// Graded Euler characteristic from a Kauffman-bracket style state sum:
/// circles are counted with union-find directly on the PD labels, and each
/// state contributes `(-1)^r q^r (q + q^-1)^k`, shifted by `n+ - 2 n-`.
pub fn jones_oracle(pd: &str) -> BTreeMap<i32, i64> {
    let code = parse_pd(pd).unwrap();
    let d = orient_and_sign(&code).unwrap();
    let n = code.crossings.len();
    let mut poly: BTreeMap<i32, i64> = BTreeMap::new();
    for state in 0u64..1 << n {
        let mut parent: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        fn find(p: &mut HashMap<(usize, usize), (usize, usize)>, x: (usize, usize)) -> (usize, usize) {
            let px = *p.entry(x).or_insert(x);
            if px == x {
                return x;
            }
            let r = find(p, px);
            p.insert(x, r);
            r
        }
        let join = |a: (usize, usize), b: (usize, usize), p: &mut HashMap<_, _>| {
            let (ra, rb) = (find(p, a), find(p, b));
            p.insert(ra, rb);
        };
        let mut first: HashMap<u32, (usize, usize)> = HashMap::new();
        for (c, x) in code.crossings.iter().enumerate() {
            for (p, &l) in x.iter().enumerate() {
                if let Some(&other) = first.get(&l) {
                    join(other, (c, p), &mut parent);
                } else {
                    first.insert(l, (c, p));
                }
            }
        }
        for c in 0..n {
            let pairs = if state >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (p, q) in pairs {
                join((c, p), (c, q), &mut parent);
            }
        }
        let mut roots: Vec<_> = (0..n).flat_map(|c| (0..4).map(move |p| (c, p))).map(|s| find(&mut parent, s)).collect();
        roots.sort_unstable();
        roots.dedup();
        let k = if n == 0 { 1 } else { roots.len() };
        let r = state.count_ones() as i32;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for t in 0..=k {
            let binom = (0..t).fold(1i64, |acc, m| acc * (k - m) as i64 / (m + 1) as i64);
            *poly.entry(r + k as i32 - 2 * t as i32).or_insert(0) += sign * binom;
        }
    }
    let nm = d.n_minus as i32;
    let shift = (n as i32 - nm) - 2 * nm;
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    poly.into_iter().filter(|&(_, c)| c != 0).map(|(e, c)| (e + shift, sign * c)).collect()
}
