mod common;

use std::collections::BTreeMap;

use common::*;
use khsq::complex::KhComplex;
use khsq::cube::{validate_frame_sum, validate_sign_cocycle};
use khsq::homology::{
    bockstein_sq1, differential_f2, differential_z, kh_f2_bases, kh_z_table, BitVec, F2HomologyBasis,
};
use khsq::homotopy::{check_width3, homotopy_type, Quiver};
use khsq::pd::{braid_closure, orient_and_sign, PdCode};
use khsq::steenrod::{
    build_graph, graph_cycles, make_boundary_matching, sq_maps_all, sq_of_cycle, st_table, validate_square, KhSquare,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample_complexes() -> Vec<(String, KhComplex)> {
    let mut out = vec![("3_1".to_string(), complex(RIGHT_TREFOIL)), ("4_1".to_string(), complex(FIGURE_EIGHT))];
    for (k, code) in random_diagrams(7, 10, 7).into_iter().enumerate() {
        out.push((format!("braid{k}"), KhComplex::new(orient_and_sign(&code).unwrap())));
    }
    out
}

fn int_product_is_zero(a: &khsq::homology::IntMatrix, b: &khsq::homology::IntMatrix) -> bool {
    // (a * b)[r][c] for a: (i+2 <- i+1), b: (i+1 <- i)
    let mut dense_b = vec![vec![0i64; b.ncols]; b.nrows];
    for (r, row) in b.rows.iter().enumerate() {
        for &(c, v) in row {
            dense_b[r][c] = v;
        }
    }
    a.rows.iter().all(|row| {
        (0..b.ncols).all(|c| row.iter().map(|&(k, v)| v * dense_b[k][c]).sum::<i64>() == 0)
    })
}

#[test]
fn differential_squares_to_zero() {
    for (name, c) in sample_complexes() {
        for j in c.q_gradings() {
            for i in c.h_gradings(j) {
                let d0 = differential_f2(&c, i, j);
                let d1 = differential_f2(&c, i + 1, j);
                if d0.cols > 0 && d1.nrows() > 0 {
                    assert!(d1.mul(&d0).unwrap().is_zero(), "{name}: F2 d^2 at ({i},{j})");
                }
                let z0 = differential_z(&c, i, j);
                let z1 = differential_z(&c, i + 1, j);
                assert!(int_product_is_zero(&z1, &z0), "{name}: Z d^2 at ({i},{j})");
                for (r, row) in z0.rows.iter().enumerate() {
                    for &(col, v) in row {
                        assert_eq!(v.rem_euclid(2) == 1, d0.get(r, col), "{name}: reduction mod 2");
                    }
                }
            }
        }
    }
}

#[test]
fn cube_sign_and_frame_checks() {
    for n in 2..=8 {
        assert!(validate_sign_cocycle(n).passed(), "sign cocycle n={n}");
        assert!(validate_frame_sum(n).passed(), "frame sum n={n}");
    }
}

#[test]
fn euler_characteristic_matches_state_sum() {
    for pd in [RIGHT_TREFOIL, FIGURE_EIGHT] {
        assert_eq!(complex(pd).euler_characteristic(), jones_oracle(pd));
    }
    for code in random_diagrams(11, 20, 8) {
        let text = code.render();
        let c = KhComplex::new(orient_and_sign(&code).unwrap());
        assert_eq!(c.euler_characteristic(), jones_oracle(&text), "{text}");
    }
}

#[test]
fn squares_satisfy_structural_invariants() {
    for (name, c) in sample_complexes() {
        for j in c.q_gradings() {
            for i in c.h_gradings(j) {
                let sq = KhSquare::new(&c, i, j);
                validate_square(&sq).unwrap_or_else(|e| panic!("{name} ({i},{j}): {e}"));
            }
        }
    }
}

#[test]
fn matching_graphs_are_unions_of_even_cycles() {
    for (name, c) in sample_complexes() {
        let bases = kh_f2_bases(&c);
        for (&(i, j), basis) in &bases {
            let sq = KhSquare::new(&c, i, j);
            for rep in &basis.reps {
                for seed in 0..4 {
                    let m = make_boundary_matching(&sq, rep, seed).unwrap();
                    m.validate(&sq, rep).unwrap();
                    for x in 0..c.dim(i + 2, j) {
                        let g = build_graph(&sq, rep, &m, x).unwrap();
                        for e1_first in [true, false] {
                            let cycles = graph_cycles(&g, e1_first).unwrap_or_else(|e| panic!("{name}: {e}"));
                            let total: usize = cycles.iter().map(|&(len, _, _)| len).sum();
                            assert_eq!(total, g.vertices.len(), "{name}: the cycles cover every vertex once");
                        }
                    }
                }
            }
        }
    }
}

/// Images of every class under both operations, checked for every seed in `seeds`.
fn check_seed_independence(c: &KhComplex, bases: &BTreeMap<(i32, i32), F2HomologyBasis>, seeds: std::ops::Range<u64>) {
    for (&(i, j), basis) in bases {
        for rep in &basis.reps {
            let reference = sq_of_cycle(c, bases, i, j, rep, 0).unwrap();
            for seed in seeds.clone() {
                assert_eq!(sq_of_cycle(c, bases, i, j, rep, seed).unwrap(), reference, "({i},{j}) seed {seed}");
            }
        }
    }
}

#[test]
fn squares_do_not_depend_on_the_matching_seed() {
    for pd in [RIGHT_TREFOIL, FIGURE_EIGHT] {
        let c = complex(pd);
        check_seed_independence(&c, &kh_f2_bases(&c), 0..128);
    }
    let c = complex(&corpus_pd("8_19"));
    check_seed_independence(&c, &kh_f2_bases(&c), 0..100);
    for code in random_diagrams(5, 4, 6) {
        let c = KhComplex::new(orient_and_sign(&code).unwrap());
        check_seed_independence(&c, &kh_f2_bases(&c), 0..100);
    }
}

#[test]
fn squares_do_not_depend_on_the_representative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, c) in sample_complexes().into_iter().chain([("8_19".to_string(), complex(&corpus_pd("8_19")))]) {
        let bases = kh_f2_bases(&c);
        for (&(i, j), basis) in &bases {
            let below = differential_f2(&c, i - 1, j);
            if below.cols == 0 {
                continue;
            }
            for rep in &basis.reps {
                let reference = sq_of_cycle(&c, &bases, i, j, rep, 0).unwrap();
                for _ in 0..8 {
                    let b = BitVec::from_ones(below.cols, (0..below.cols).filter(|_| rng.gen_bool(0.5)));
                    let mut shifted = rep.clone();
                    shifted.xor_assign(&below.mul_vec(&b).unwrap());
                    let seed = rng.gen_range(0..1000);
                    assert_eq!(sq_of_cycle(&c, &bases, i, j, &shifted, seed).unwrap(), reference, "{name} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn sq1_is_the_bockstein_and_squares_to_zero() {
    for (name, c) in sample_complexes().into_iter().chain([("8_19".to_string(), complex(&corpus_pd("8_19")))]) {
        let bases = kh_f2_bases(&c);
        let maps = sq_maps_all(&c, &bases, 0).unwrap();
        for (&j, m) in &maps {
            for (&i, sq1) in &m.sq1 {
                if let Some(target) = bases.get(&(i + 1, j)) {
                    for k in 0..sq1.cols {
                        let b = bockstein_sq1(&c, &bases[&(i, j)], target, k).unwrap();
                        let column: Vec<u8> = (0..sq1.nrows()).map(|r| sq1.get(r, k) as u8).collect();
                        assert_eq!(b.to_bits(), column, "{name} ({i},{j}) class {k}");
                    }
                }
                let next = m.sq1_at(i + 1);
                if next.cols > 0 && next.nrows() > 0 && sq1.cols > 0 {
                    assert!(next.mul(sq1).unwrap().is_zero(), "{name}: Sq1 Sq1 at ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn quiver_decomposition_reproduces_ranks() {
    for (name, c) in sample_complexes().into_iter().chain([("8_19".to_string(), complex(&corpus_pd("8_19")))]) {
        let bases = kh_f2_bases(&c);
        for m in sq_maps_all(&c, &bases, 0).unwrap().values() {
            for &i in m.dims.keys() {
                let q = m.quiver(i);
                assert!(q.composes_to_zero(), "{name}");
                let counts = q.decompose().unwrap_or_else(|e| panic!("{name} ({i},{}): {e}", m.j));
                assert_eq!(counts.forward(), q.ranks(), "{name} ({i},{})", m.j);
                assert_eq!(Quiver::from_counts(&counts).ranks(), q.ranks());
            }
        }
    }
}

#[test]
fn homotopy_types_match_cohomology() {
    for (name, c) in sample_complexes() {
        let kh = kh_z_table(&c).unwrap();
        let gate = check_width3(&kh);
        if !gate.passed() {
            continue;
        }
        let bases = kh_f2_bases(&c);
        for m in sq_maps_all(&c, &bases, 0).unwrap().values() {
            let (expr, _) = homotopy_type(&gate, m).unwrap();
            let dims: BTreeMap<i32, usize> = m.dims.iter().filter(|(_, &d)| d > 0).map(|(&i, &d)| (i, d)).collect();
            assert_eq!(expr.f2_cohomology(), dims, "{name} j={}", m.j);
        }
    }
}

fn tables(c: &KhComplex) -> (BTreeMap<(i32, i32), khsq::homology::HomologyGroup>, BTreeMap<(i32, i32), [u32; 4]>) {
    let bases = kh_f2_bases(c);
    (kh_z_table(c).unwrap(), st_table(&sq_maps_all(c, &bases, 0).unwrap()))
}

#[test]
fn invariants_do_not_depend_on_crossing_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for code in random_diagrams(23, 6, 7).into_iter().chain([parse(&corpus_pd("8_19"))]) {
        let d = orient_and_sign(&code).unwrap();
        let reference = tables(&KhComplex::new(d.clone()));
        for _ in 0..2 {
            let mut order: Vec<usize> = (0..d.n()).collect();
            for k in (1..order.len()).rev() {
                order.swap(k, rng.gen_range(0..=k));
            }
            assert_eq!(tables(&KhComplex::new(d.permuted(&order))), reference, "{}", code.render());
        }
    }
}

fn parse(text: &str) -> PdCode {
    khsq::pd::parse_pd(text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn braid_closures_have_the_state_sum_euler_characteristic(
        word in prop::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 1..=7)
    ) {
        let strands = word.iter().map(|k| k.unsigned_abs() as usize).max().unwrap() + 1;
        prop_assume!((1..strands as i32).all(|g| word.iter().any(|k| k.abs() == g)));
        let code = braid_closure(strands, &word).unwrap();
        let text = code.render();
        let c = KhComplex::new(orient_and_sign(&code).unwrap());
        prop_assert_eq!(c.euler_characteristic(), jones_oracle(&text));
        let bases = kh_f2_bases(&c);
        prop_assert!(sq_maps_all(&c, &bases, 0).is_ok());
    }
}
