//! Report assembly, text rendering and self-checks behind the `khsq` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use khsq::complex::{KhComplex, LadybugConvention};
use khsq::cube::{edge_sign, face_frame, validate_frame_sum_with, validate_sign_cocycle_with};
use khsq::error::SteenrodError;
use khsq::homology::{bockstein_sq1, differential_f2, f2_rank, kh_f2_bases, kh_z_table, BitVec};
use khsq::homotopy::{check_width3, cohomology_consistent, homotopy_type};
use khsq::pd::{orient_and_sign, parse_pd, random_braid_closure};
use khsq::steenrod::{
    make_boundary_matching, sample_matching, sample_square, sq1_chain, sq2_chain, sq_maps_all, st_table,
    validate_square, KhSquare,
};
use khsq::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Which stages of the pipeline to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub sq: bool,
    pub homotopy: bool,
    /// Number of boundary-matching seeds whose Sq maps must agree (at least 1).
    pub matching_seeds: u64,
    pub ladybug: LadybugConvention,
}

impl Default for Options {
    fn default() -> Self {
        Options { sq: true, homotopy: true, matching_seeds: 1, ladybug: LadybugConvention::Right }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KhEntry {
    pub i: i32,
    pub j: i32,
    pub free: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimEntry {
    pub i: i32,
    pub j: i32,
    pub dim: usize,
}

/// One Sq matrix: rows are coordinates of the target group, columns of the source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixEntry {
    pub i: i32,
    pub j: i32,
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StEntry {
    pub i: i32,
    pub j: i32,
    pub t: [u32; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateEntry {
    pub passed: bool,
    pub sigma: Option<i32>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyEntry {
    pub j: i32,
    pub wedge: Vec<String>,
}

/// Everything computed for one link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputationReport {
    pub link_id: String,
    pub n: usize,
    pub n_minus: usize,
    pub kh: Vec<KhEntry>,
    pub kh_f2: Vec<DimEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq1: Option<Vec<MatrixEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sq2: Option<Vec<MatrixEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub st: Option<Vec<StEntry>>,
    pub gate: GateEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homotopy: Option<Vec<HomotopyEntry>>,
    /// Wall-clock time per stage; left out of JSON so output is reproducible.
    #[serde(skip)]
    pub timings: Vec<(&'static str, Duration)>,
}

impl ComputationReport {
    pub fn st_at(&self, i: i32, j: i32) -> [u32; 4] {
        self.st.iter().flatten().find(|e| e.i == i && e.j == j).map_or([0; 4], |e| e.t)
    }

    pub fn homotopy_at(&self, j: i32) -> Option<String> {
        self.homotopy.iter().flatten().find(|e| e.j == j).map(|e| e.wedge.join(" ∨ "))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs the pipeline on one PD code.
pub fn compute(link_id: &str, pd: &str, opts: &Options) -> Result<ComputationReport, Error> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };

    let diagram = orient_and_sign(&parse_pd(pd)?)?;
    let complex = KhComplex::with_convention(diagram, opts.ladybug);
    lap("complex", &mut timings);
    let table = kh_z_table(&complex)?;
    let kh = table
        .iter()
        .map(|(&(i, j), g)| KhEntry { i, j, free: g.free_rank, torsion: g.torsion.clone() })
        .collect();
    lap("kh_z", &mut timings);
    let bases = kh_f2_bases(&complex);
    let kh_f2 = bases.iter().filter(|(_, b)| b.dim() > 0).map(|(&(i, j), b)| DimEntry { i, j, dim: b.dim() }).collect();
    lap("kh_f2", &mut timings);
    let gate = check_width3(&table);

    let mut report = ComputationReport {
        link_id: link_id.to_string(),
        n: complex.n(),
        n_minus: complex.n_minus(),
        kh,
        kh_f2,
        sq1: None,
        sq2: None,
        st: None,
        gate: GateEntry {
            passed: gate.passed(),
            sigma: gate.sigma,
            failures: gate.failures.iter().map(ToString::to_string).collect(),
        },
        homotopy: None,
        timings: Vec::new(),
    };

    if opts.sq || opts.homotopy {
        let maps = sq_maps_all(&complex, &bases, 0)?;
        for seed in 1..opts.matching_seeds.max(1) {
            if sq_maps_all(&complex, &bases, seed)? != maps {
                return Err(SteenrodError::InvalidMatching(format!("Sq maps change with matching seed {seed}")).into());
            }
        }
        lap("sq", &mut timings);
        let entries = |which: u8| {
            let mut out = Vec::new();
            for (&j, m) in &maps {
                let source = if which == 1 { &m.sq1 } else { &m.sq2 };
                for (&i, mat) in source {
                    if mat.nrows() > 0 && mat.cols > 0 {
                        out.push(MatrixEntry { i, j, matrix: mat.to_u8() });
                    }
                }
            }
            out.sort_by_key(|e| (e.j, e.i));
            out
        };
        report.sq1 = Some(entries(1));
        report.sq2 = Some(entries(2));
        let mut st: Vec<StEntry> = st_table(&maps).into_iter().map(|((i, j), t)| StEntry { i, j, t }).collect();
        st.sort_by_key(|e| (e.j, e.i));
        report.st = Some(st);

        if opts.homotopy && gate.passed() {
            let mut types = Vec::new();
            for m in maps.values() {
                let (wedge, _) = homotopy_type(&gate, m)?;
                if !cohomology_consistent(&wedge, &m.dims) {
                    return Err(khsq::error::HomotopyError::Gate(format!(
                        "wedge {wedge} disagrees with Kh over F2 in quantum grading {}",
                        m.j
                    ))
                    .into());
                }
                if !wedge.is_empty() {
                    types.push(HomotopyEntry { j: m.j, wedge: wedge.texts() });
                }
            }
            report.homotopy = Some(types);
            lap("homotopy", &mut timings);
        }
    }
    report.timings = timings;
    Ok(report)
}

/// Ranks of one operation on a link and on its mirror, at dual positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorLine {
    /// 1 for Sq1, 2 for Sq2.
    pub op: u8,
    pub i: i32,
    pub j: i32,
    pub rank: usize,
    /// Rank of the same operation out of `(-i - op, -j)` on the mirror.
    pub mirror_rank: usize,
}

/// Compares the ranks of `Sq1` and `Sq2` on a link with those on its
/// mirror at the positions where a duality between the two would put them.
/// This is a diagnostic only: a mismatch is reported, never treated as an error.
pub fn mirror_diagnostic(pd: &str) -> Result<Vec<MirrorLine>, Error> {
    let code = parse_pd(pd)?;
    let ranks = |code: &khsq::pd::PdCode| -> Result<BTreeMap<(u8, i32, i32), usize>, Error> {
        let complex = KhComplex::new(orient_and_sign(code)?);
        let maps = sq_maps_all(&complex, &kh_f2_bases(&complex), 0)?;
        let mut out = BTreeMap::new();
        for (&j, m) in &maps {
            for (op, source) in [(1u8, &m.sq1), (2, &m.sq2)] {
                for (&i, mat) in source {
                    out.insert((op, i, j), if mat.cols == 0 || mat.nrows() == 0 { 0 } else { f2_rank(mat) });
                }
            }
        }
        Ok(out)
    };
    let (here, there) = (ranks(&code)?, ranks(&code.mirror()?)?);
    let mut keys: Vec<(u8, i32, i32)> = here.keys().copied().collect();
    keys.extend(there.keys().map(|&(op, i, j)| (op, -i - op as i32, -j)));
    keys.sort_unstable();
    keys.dedup();
    Ok(keys
        .into_iter()
        .map(|(op, i, j)| MirrorLine {
            op,
            i,
            j,
            rank: here.get(&(op, i, j)).copied().unwrap_or(0),
            mirror_rank: there.get(&(op, -i - op as i32, -j)).copied().unwrap_or(0),
        })
        .filter(|l| l.rank + l.mirror_rank > 0)
        .collect())
}

/// Human-readable rendering of a report.
pub fn render_table(r: &ComputationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  ({} crossings, {} negative)", r.link_id, r.n, r.n_minus);
    let _ = writeln!(out, "Kh over Z:");
    for e in &r.kh {
        let mut parts = Vec::new();
        if e.free > 0 {
            parts.push(if e.free == 1 { "Z".to_string() } else { format!("Z^{}", e.free) });
        }
        parts.extend(e.torsion.iter().map(|t| format!("Z/{t}")));
        let _ = writeln!(out, "  ({:>3},{:>4})  {}", e.i, e.j, parts.join(" + "));
    }
    match (&r.gate.passed, &r.gate.sigma) {
        (true, Some(s)) => {
            let _ = writeln!(out, "width three: yes (lowest diagonal 2i-j = {s})");
        }
        (true, None) => {
            let _ = writeln!(out, "width three: yes (empty)");
        }
        (false, _) => {
            let _ = writeln!(out, "width three: no ({})", r.gate.failures.join("; "));
        }
    }
    if let Some(st) = &r.st {
        let _ = writeln!(out, "Nonzero St:");
        if st.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for e in st {
            let [a, b, c, d] = e.t;
            let _ = writeln!(out, "  St({},{}) = ({a},{b},{c},{d})", e.i, e.j);
        }
    }
    if let Some(h) = &r.homotopy {
        let _ = writeln!(out, "Homotopy types:");
        for e in h {
            let _ = writeln!(out, "  j = {:>4}: {}", e.j, e.wedge.join(" ∨ "));
        }
    }
    if !r.timings.is_empty() {
        let t: Vec<String> = r.timings.iter().map(|(n, d)| format!("{n} {:.3}s", d.as_secs_f64())).collect();
        let _ = writeln!(out, "time: {}", t.join(", "));
    }
    out
}

/// Table of the nonzero St values of several reports.
pub fn st_summary(reports: &[ComputationReport]) -> String {
    let mut out = String::from("link\t(i,j)\tSt\n");
    for r in reports {
        for e in r.st.iter().flatten() {
            let [a, b, c, d] = e.t;
            let _ = writeln!(out, "{}\t({},{})\t({a},{b},{c},{d})", r.link_id, e.i, e.j);
        }
    }
    out
}

/// Deliberate corruptions used to check that the self-test notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the edge leaving the origin in direction 0.
    SignFlip,
}

/// One self-test check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), passed, detail: detail.into() }
}

/// Runs cube validations up to `n_max`, the sample-square example and
/// invariant sweeps over a fixed family of small diagrams.
pub fn selftest(n_max: usize, fault: Option<Fault>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let sign = |v: u64, k: usize| {
        let s = edge_sign(v, k);
        if fault == Some(Fault::SignFlip) && v == 0 && k == 0 {
            s ^ 1
        } else {
            s
        }
    };
    for n in 2..=n_max {
        let r = validate_sign_cocycle_with(n, sign);
        out.push(check(
            format!("sign cocycle n={n}"),
            r.passed(),
            format!("{} faces, {} violations {:?}", r.faces_checked, r.violations.len(), r.violations.iter().take(3).collect::<Vec<_>>()),
        ));
        if n >= 3 {
            let r = validate_frame_sum_with(n, sign, face_frame);
            out.push(check(
                format!("frame sum n={n}"),
                r.passed(),
                format!("{} cells, {} violations", r.faces_checked, r.violations.len()),
            ));
        }
    }

    let square = sample_square();
    let c = BitVec::from_ones(5, 0..5);
    let sample = sample_matching(&square, &c).and_then(|m| Ok((sq1_chain(&square, &c, &m)?, sq2_chain(&square, &c, &m)?)));
    out.push(match sample {
        Ok((a, b)) => check(
            "sample square",
            a == BitVec::from_ones(6, [0, 2, 5]) && b == BitVec::from_ones(2, [0]),
            format!("sq1 {:?}, sq2 {:?}", a.to_bits(), b.to_bits()),
        ),
        Err(e) => check("sample square", false, e.to_string()),
    });

    let mut diagrams = vec![
        ("3_1".to_string(), "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)".to_string()),
        ("4_1".to_string(), "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)".to_string()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..6 {
        diagrams.push((format!("braid#{k}"), random_braid_closure(&mut rng, 6).to_string()));
    }
    for (name, pd) in diagrams {
        out.push(match sweep(&pd) {
            Ok(detail) => check(format!("sweep {name}"), true, detail),
            Err(e) => check(format!("sweep {name}"), false, e),
        });
    }
    out
}

/// Invariant checks on one diagram: `δ² = 0`, ladybug sign change, sq
/// outputs are cycles, sq1 equals the Bockstein, and seed independence.
fn sweep(pd: &str) -> Result<String, String> {
    let diagram = orient_and_sign(&parse_pd(pd).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let complex = KhComplex::new(diagram);
    let bases = kh_f2_bases(&complex);
    let mut classes = 0;
    for &(i, j) in complex.levels.keys() {
        let d0 = differential_f2(&complex, i, j);
        let d1 = differential_f2(&complex, i + 1, j);
        if !d1.mul(&d0).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("δ² ≠ 0 at ({i}, {j})"));
        }
        let input = KhSquare::new(&complex, i, j);
        validate_square(&input).map_err(|e| e.to_string())?;
        let basis = &bases[&(i, j)];
        for (k, rep) in basis.reps.iter().enumerate() {
            classes += 1;
            let mut images: BTreeMap<(Vec<u8>, Vec<u8>), u64> = BTreeMap::new();
            for seed in 0..8 {
                let m = make_boundary_matching(&input, rep, seed).map_err(|e| e.to_string())?;
                let a = sq1_chain(&input, rep, &m).map_err(|e| e.to_string())?;
                let b = sq2_chain(&input, rep, &m).map_err(|e| e.to_string())?;
                if !d1.mul_vec(&a).map_err(|e| e.to_string())?.is_zero() {
                    return Err(format!("sq1 of class {k} at ({i}, {j}) is not a cycle"));
                }
                let pa = bases.get(&(i + 1, j)).map(|t| t.project(&a)).transpose().map_err(|e| e.to_string())?;
                let pb = bases.get(&(i + 2, j)).map(|t| t.project(&b)).transpose().map_err(|e| e.to_string())?;
                let key = (pa.map(|v| v.to_bits()).unwrap_or_default(), pb.map(|v| v.to_bits()).unwrap_or_default());
                *images.entry(key).or_default() += 1;
            }
            if images.len() != 1 {
                return Err(format!("class {k} at ({i}, {j}) has seed-dependent squares"));
            }
            if let Some(t) = bases.get(&(i + 1, j)) {
                let beta = bockstein_sq1(&complex, basis, t, k).map_err(|e| e.to_string())?.to_bits();
                if images.keys().next().map(|(a, _)| a) != Some(&beta) {
                    return Err(format!("sq1 differs from the Bockstein on class {k} at ({i}, {j})"));
                }
            }
        }
    }
    Ok(format!("{} crossings, {classes} classes", complex.n()))
}
