mod common;

use std::collections::BTreeMap;

use common::*;
use khsq::homology::{kh_f2_bases, kh_z_table};
use khsq::homotopy::{check_width3, homotopy_type};
use khsq::steenrod::{sq_maps_all, st_table, SqMaps};

struct Computed {
    kh: BTreeMap<(i32, i32), khsq::homology::HomologyGroup>,
    maps: BTreeMap<i32, SqMaps>,
}

fn compute(id: &str) -> Computed {
    let c = complex(&corpus_pd(id));
    let kh = kh_z_table(&c).unwrap().into_iter().filter(|(_, g)| !g.is_zero()).collect();
    let maps = sq_maps_all(&c, &kh_f2_bases(&c), 0).unwrap();
    Computed { kh, maps }
}

fn wedges(data: &Computed) -> BTreeMap<i32, String> {
    let gate = check_width3(&data.kh);
    assert!(gate.passed(), "{:?}", gate.failures);
    data.maps
        .iter()
        .map(|(&j, m)| (j, homotopy_type(&gate, m).unwrap().0))
        .filter(|(_, w)| !w.is_empty())
        .map(|(j, w)| (j, w.to_string()))
        .collect()
}

#[test]
fn khovanov_homology_of_10_145() {
    let data = compute("10_145");
    assert_eq!(data.kh, kh_10_145());
    assert_eq!(data.kh.len(), 18);
    let summands: usize = data.kh.values().map(|g| g.free_rank + g.torsion.len()).sum();
    assert_eq!(summands, 20);
}

#[test]
fn steenrod_squares_of_10_145() {
    let data = compute("10_145");
    let st = st_table(&data.maps);
    assert_eq!(st.get(&(-7, -15)), Some(&[0, 1, 0, 0]));
    assert_eq!(st.get(&(-6, -13)), Some(&[0, 0, 1, 0]));
    assert_eq!(st.get(&(-4, -9)), Some(&[0, 0, 0, 1]));
    assert_eq!(st.len(), 3);
}

#[test]
fn homotopy_types_of_10_145() {
    let data = compute("10_145");
    assert_eq!(check_width3(&data.kh).sigma, Some(1));
    let expected: BTreeMap<i32, String> = [
        (-21, "S^-9"),
        (-19, "Σ^-10 RP2"),
        (-17, "S^-8 ∨ S^-7"),
        (-15, "Σ^-10 (RP5/RP2) ∨ S^-6"),
        (-13, "Σ^-8 (RP4/RP1) ∨ Σ^-7 RP2"),
        (-11, "S^-5 ∨ S^-4 ∨ S^-4 ∨ S^-3"),
        (-9, "Σ^-6 (RP2^RP2)"),
        (-7, "S^-3 ∨ S^-2"),
        (-5, "S^0"),
        (-3, "S^0"),
    ]
    .into_iter()
    .map(|(j, s)| (j, s.to_string()))
    .collect();
    assert_eq!(wedges(&data), expected);
}

#[test]
fn sq2_of_8_19_is_not_moore() {
    let data = compute("8_19");
    let st = st_table(&data.maps);
    assert_eq!(st, BTreeMap::from([((2, 11), [0, 1, 0, 0])]));
    let gate = check_width3(&data.kh);
    let (w, _) = homotopy_type(&gate, &data.maps[&11]).unwrap();
    assert!(!w.is_moore());
    assert_eq!(data.maps[&11].sq2_at(2).to_u8(), vec![vec![1]]);
}

#[test]
fn l11n383_and_l11n393_share_kh_at_minus_3_but_not_st() {
    let a = compute("L11n383");
    let b = compute("L11n393");
    let at = |kh: &BTreeMap<(i32, i32), khsq::homology::HomologyGroup>| -> Vec<_> {
        kh.iter().filter(|(&(_, j), _)| j == -3).map(|(k, g)| (*k, g.clone())).collect()
    };
    assert_eq!(at(&a.kh), at(&b.kh));
    assert_eq!(a.kh[&(-2, -3)], group(3, &[]));
    assert_eq!(a.kh[&(-1, -3)], group(3, &[2, 2, 2, 2]));
    assert_eq!(a.kh[&(0, -3)], group(2, &[]));
    let (sa, sb) = (st_table(&a.maps), st_table(&b.maps));
    assert_eq!(sa[&(-2, -3)], [0, 2, 0, 0]);
    assert_eq!(sb[&(-2, -3)], [0, 1, 0, 0]);
}

#[test]
fn k11n34_and_k11n42_are_not_distinguished() {
    let a = compute("K11n34");
    let b = compute("K11n42");
    assert_eq!(a.kh, b.kh);
    assert_eq!(st_table(&a.maps), st_table(&b.maps));
    assert_eq!(wedges(&a), wedges(&b));
}
