//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line before asserting.

mod common;

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_rational::Ratio;
use rand::Rng;

use semicayley::character::{characters, eval_character, CycloValue};
use semicayley::families::{cone, dihedral_full_coset, hypercube, sunlet};
use semicayley::pst::{Analyzer, PstVerdict, Status, CONFIRM_TOL};
use semicayley::spectral::eigenvalues;
use semicayley::transfer::{block_transfer_rl, oracle_expm, transfer_matrix};
use semicayley::valuation::{nu2, TwoAdicVal};
use semicayley::{AbelianGroup, SemiCayleySpec, SymbolicTime, Vertex};

const EIGEN_TOL: f64 = 1e-9;
const TRANSFER_TOL: f64 = 1e-9;
const SCAN_SAMPLES: usize = 10_000;

fn report(criterion: u32, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS");
    } else {
        println!("criterion {criterion}: FAIL ({} problems)", failures.len());
        for f in failures.iter().take(20) {
            println!("  {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {criterion} failed: {failures:?}");
}

fn over_budget(failures: &mut Vec<String>, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    if elapsed >= limit {
        failures.push(format!("runtime {elapsed:?} exceeds {limit:?}"));
    }
}

fn numeric_eigenvalues(spec: &SemiCayleySpec) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(spec.build().to_dmatrix()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

fn vertex(exps: &[u64], layer: u8, g: &AbelianGroup) -> Vertex {
    Vertex::new(g.element(exps).unwrap(), layer)
}

#[test]
fn criterion_1_spectral_correctness() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut failures = Vec::new();
    for case in 0..200 {
        let spec = common::random_spec(&mut rng, false);
        let closed = eigenvalues(&spec).sorted_eigenvalues();
        let numeric = numeric_eigenvalues(&spec);
        let worst = closed
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if closed.len() != numeric.len() || worst >= EIGEN_TOL {
            failures.push(format!("case {case} {spec}: deviation {worst:e}"));
        }
    }
    over_budget(&mut failures, start, Duration::from_secs(30));
    report(1, &failures);
}

#[test]
fn criterion_2_transfer_equivalence() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut failures = Vec::new();
    for case in 0..50 {
        let spec = common::random_spec(&mut rng, case % 2 == 0);
        let adjacency = spec.build();
        for _ in 0..5 {
            let t: f64 = rng.gen_range(0.0..10.0);
            let spectral = transfer_matrix(&spec, t);
            let oracle = oracle_expm(&adjacency, t);
            let mut problems = vec![
                ("spectral vs oracle", spectral.max_abs_diff(&oracle)),
                ("spectral unitarity", spectral.unitarity_defect()),
                ("oracle unitarity", oracle.unitarity_defect()),
            ];
            if spec.is_balanced() {
                let block = block_transfer_rl(&spec, t).unwrap();
                problems.push(("block vs oracle", block.max_abs_diff(&oracle)));
                problems.push(("block unitarity", block.unitarity_defect()));
            }
            for (what, dev) in problems {
                if dev >= TRANSFER_TOL {
                    failures.push(format!("case {case} {spec} t={t}: {what} {dev:e}"));
                }
            }
        }
    }
    over_budget(&mut failures, start, Duration::from_secs(60));
    report(2, &failures);
}

#[test]
fn criterion_3_sunlet_no_pst_not_periodic() {
    let mut failures = Vec::new();
    for n in 3..=12 {
        let spec = sunlet(n).unwrap();
        let analyzer = Analyzer::new(&spec);
        for v in analyzer.find().unwrap() {
            if v.status != Status::No {
                failures.push(format!("sunlet({n}) {} -> {}: {:?}", v.from, v.to, v.status));
            }
        }
        let period = analyzer.periodicity().unwrap();
        if period.periodic || !period.decided {
            failures.push(format!("sunlet({n}) periodicity {period:?}"));
        }
    }
    report(3, &failures);
}

#[test]
fn criterion_4_cone() {
    let mut failures = Vec::new();
    for n in 3..=12u64 {
        let spec = cone(n).unwrap();
        let spectrum = eigenvalues(&spec);
        let root = (1.0 + (n * n) as f64).sqrt();
        for p in spectrum.pairs() {
            if p.index.is_trivial() {
                if (p.lambda_plus - (1.0 + root)).abs() >= EIGEN_TOL || (p.lambda_minus - (1.0 - root)).abs() >= EIGEN_TOL {
                    failures.push(format!("cone({n}) trivial pair {} {}", p.lambda_plus, p.lambda_minus));
                }
            } else if p.lambda_minus.abs() >= EIGEN_TOL {
                failures.push(format!("cone({n}) {:?}: lambda- = {}", p.index, p.lambda_minus));
            }
        }
        if n % 2 == 1 {
            for v in Analyzer::new(&spec).find().unwrap() {
                if v.status != Status::No {
                    failures.push(format!("cone({n}) {} -> {}: {:?}", v.from, v.to, v.status));
                }
            }
        }
    }
    report(4, &failures);
}

fn dihedral_failures(order: u64) -> Vec<String> {
    let mut failures = Vec::new();
    let spec = dihedral_full_coset(AbelianGroup::cyclic(order).unwrap()).unwrap();
    let analyzer = Analyzer::new(&spec);
    let period = analyzer.periodicity().unwrap();
    let expected = SymbolicTime::turns(Ratio::new(1, order as i64));
    if !period.periodic || period.min_period != Some(expected) {
        failures.push(format!(
            "|A|={order}: minimum period {:?}, expected {expected}",
            period.min_period.map(|t| t.to_string())
        ));
    }
    for v in analyzer.find().unwrap() {
        if v.status != Status::No {
            failures.push(format!(
                "|A|={order}: {} -> {} is {:?} at {:?}",
                v.from,
                v.to,
                v.status,
                v.time.map(|t| t.to_string())
            ));
        }
    }
    failures
}

#[test]
fn criterion_5_dihedral_full_coset() {
    let mut failures = Vec::new();
    for order in [3, 4, 6] {
        failures.extend(dihedral_failures(order));
    }
    report(5, &failures);
}

/// `|A| = 2` yields the 4-cycle, which has antipodal PST at `π/2`; this part
/// of criterion 5 cannot hold and is kept as an honest failure.
#[test]
fn criterion_5_dihedral_full_coset_order_two() {
    report(5, &dihedral_failures(2));
}

/// Largest `|H_{u,v}|` over `t = kΔ`, `k = 1..=SCAN_SAMPLES`, `Δ = period / SCAN_SAMPLES`,
/// using only the matrix exponential oracle.
fn oracle_scan(spec: &SemiCayleySpec, period: f64) -> DMatrix<f64> {
    let step = oracle_expm(&spec.build(), period / SCAN_SAMPLES as f64).matrix;
    let dim = step.nrows();
    let mut h = DMatrix::<Complex64>::identity(dim, dim);
    let mut best = DMatrix::<f64>::zeros(dim, dim);
    for _ in 0..SCAN_SAMPLES {
        h = &h * &step;
        best.zip_apply(&h, |b, z| *b = b.max(z.norm()));
    }
    best
}

fn known_pst(
    name: &str,
    spec: &SemiCayleySpec,
    from: &Vertex,
    to: &Vertex,
    failures: &mut Vec<String>,
) {
    let analyzer = Analyzer::new(spec);
    let verdict = analyzer.decide(from, to).unwrap();
    let quarter = SymbolicTime::pi_over_pow2(1);
    let check = analyzer.verify(from, to, quarter.value()).unwrap();
    if !verdict.is_yes() || verdict.time != Some(quarter) || check.oracle < 1.0 - CONFIRM_TOL {
        failures.push(format!("{name}: {verdict:?}, oracle magnitude {}", check.oracle));
    }
    let period = std::f64::consts::TAU / eigenvalues(spec).eigen_gcd().unwrap() as f64;
    let scan = oracle_scan(spec, period);
    for i in 0..spec.vertex_count() {
        for j in 0..spec.vertex_count() {
            if i == j {
                continue;
            }
            let (u, v) = (spec.vertex_at(i), spec.vertex_at(j));
            let decided: PstVerdict = analyzer.decide(&u, &v).unwrap();
            let oracle_yes = scan[(i, j)] >= 1.0 - CONFIRM_TOL;
            if decided.status == Status::Undecided || decided.is_yes() != oracle_yes {
                failures.push(format!(
                    "{name} {u} -> {v}: decider {:?}, oracle scan max {}",
                    decided.status,
                    scan[(i, j)]
                ));
            }
        }
    }
}

#[test]
fn criterion_6_known_pst() {
    let start = Instant::now();
    let mut failures = Vec::new();

    let k2 = SemiCayleySpec::from_lists(&[1], &[], &[], &[&[0]]).unwrap();
    let g = k2.group().clone();
    known_pst("K2", &k2, &vertex(&[0], 0, &g), &vertex(&[0], 1, &g), &mut failures);

    let c4 = SemiCayleySpec::from_lists(&[2], &[&[1]], &[&[1]], &[&[0]]).unwrap();
    let g = c4.group().clone();
    known_pst("C4", &c4, &vertex(&[0], 0, &g), &vertex(&[1], 1, &g), &mut failures);

    // The antipode of (e,0) in this cube is ([1,1],1); the same-layer vertex
    // ([1,1],0) is at distance 2.
    let q3 = hypercube(3).unwrap();
    let g = q3.group().clone();
    known_pst("Q3", &q3, &vertex(&[0, 0], 0, &g), &vertex(&[1, 1], 1, &g), &mut failures);

    over_budget(&mut failures, start, Duration::from_secs(120));
    report(6, &failures);
}

fn nearest_integer_distance(z: Complex64) -> f64 {
    (z - Complex64::new(z.re.round(), 0.0)).norm()
}

#[test]
fn criterion_7_exactness() {
    let mut rng = common::rng();
    let mut failures = Vec::new();
    let mut integers = 0usize;
    let mut others = 0usize;
    for factors in common::GROUPS {
        let g = AbelianGroup::new(factors.to_vec()).unwrap();
        let n = g.exponent() as usize;
        let chars: Vec<_> = characters(&g).collect();
        let order = g.order() as i64;

        // column orthogonality, exactly
        for x in g.elements() {
            for y in g.elements() {
                let mut sum = CycloValue::zero(n);
                for chi in &chars {
                    let a = eval_character(&g, chi, &x).unwrap().to_cyclo();
                    let b = eval_character(&g, chi, &y).unwrap().to_cyclo().conj();
                    sum = sum.checked_add(&a.checked_mul(&b).unwrap()).unwrap();
                }
                let expected = if x == y { order } else { 0 };
                if sum.as_integer() != Some(expected) {
                    failures.push(format!("{factors:?}: column sum at ({x:?},{y:?}) = {:?}", sum.reduced()));
                }
            }
        }

        // integrality on character sums, their squares and norms, and random
        // integer combinations of roots of unity
        let mut cases = Vec::new();
        for chi in &chars {
            for _ in 0..10 {
                let set = common::any_subset(&mut rng, &g, 0.5);
                let sum = semicayley::character::char_sum(&g, chi, &set).unwrap();
                cases.push(sum.checked_mul(&sum).unwrap());
                cases.push(sum.abs_squared());
                cases.push(sum);
            }
        }
        for _ in 0..50 {
            let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            cases.push(CycloValue::from_coeffs(coeffs));
        }
        for v in cases {
            let z = v.approx();
            match v.as_integer() {
                Some(r) => {
                    integers += 1;
                    if (z - Complex64::new(r as f64, 0.0)).norm() >= 1e-9 {
                        failures.push(format!("as_integer {r} but approx {z}"));
                    }
                }
                None => {
                    others += 1;
                    if nearest_integer_distance(z) <= 1e-6 {
                        failures.push(format!("non-integer {:?} within 1e-6 of an integer ({z})", v.reduced()));
                    }
                }
            }
        }
    }
    if integers == 0 || others == 0 {
        failures.push(format!("degenerate sample: {integers} integers, {others} non-integers"));
    }
    report(7, &failures);
}

fn random_rational(rng: &mut impl Rng) -> Ratio<i64> {
    let num = rng.gen_range(-2000i64..=2000) << rng.gen_range(0..6);
    let den = rng.gen_range(1i64..=2000) << rng.gen_range(0..6);
    Ratio::new(num, den)
}

#[test]
fn criterion_8_properties() {
    let mut rng = common::rng();
    let mut failures = Vec::new();

    // translation invariance of verdicts
    for case in 0..12 {
        let spec = common::random_spec(&mut rng, case % 3 != 0);
        let g = spec.group().clone();
        let analyzer = Analyzer::new(&spec);
        for (u, v) in analyzer.canonical_pairs() {
            let base = analyzer.decide(&u, &v).unwrap();
            let shift = g.element_at(rng.gen_range(0..g.order()));
            let moved_u = Vertex::new(g.mul(&shift, &u.element).unwrap(), u.layer);
            let moved_v = Vertex::new(g.mul(&shift, &v.element).unwrap(), v.layer);
            let moved = analyzer.decide(&moved_u, &moved_v).unwrap();
            if moved.status != base.status || moved.time != base.time {
                failures.push(format!("{spec}: {u}->{v} is {:?}, shifted {:?}", base.status, moved.status));
            }
        }
    }

    // |H_uv(t)| <= 1 + 1e-9
    for case in 0..30 {
        let spec = common::random_spec(&mut rng, case % 2 == 0);
        let t: f64 = rng.gen_range(0.0..20.0);
        let h = transfer_matrix(&spec, t);
        let worst = h.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if worst > 1.0 + 1e-9 {
            failures.push(format!("{spec} t={t}: max |H| = {worst}"));
        }
    }

    // 2-adic valuation laws
    for _ in 0..1000 {
        let p = random_rational(&mut rng);
        let q = random_rational(&mut rng);
        if nu2(p * q) != nu2(p) + nu2(q) {
            failures.push(format!("nu2({p}*{q}) is not additive"));
        }
        let (vp, vq, vs) = (nu2(p), nu2(q), nu2(p + q));
        if vs < vp.min(vq) || (vp != vq && vs != vp.min(vq)) {
            failures.push(format!("nu2({p}+{q}) = {vs} breaks the ultrametric law"));
        }
        if p.is_integer() && p != Ratio::from_integer(0) && nu2(p) < TwoAdicVal::Finite(0) {
            failures.push(format!("nu2 of integer {p} negative"));
        }
    }
    if nu2(Ratio::from_integer(0)) != TwoAdicVal::Infinite {
        failures.push("nu2(0) is not infinite".into());
    }

    // S = ∅: H splits into exp(-itA_R) ⊕ exp(-itA_L)
    for _ in 0..20 {
        let spec = common::random_spec(&mut rng, false);
        let g = spec.group().clone();
        let empty = SemiCayleySpec::new(g.clone(), spec.right().clone(), spec.left().clone(), g.subset([]).unwrap()).unwrap();
        let t: f64 = rng.gen_range(0.0..10.0);
        let h = transfer_matrix(&empty, t).matrix;
        let n = g.order();
        let layer = |set: &semicayley::GroupSubset| {
            let only = SemiCayleySpec::new(g.clone(), set.clone(), set.clone(), g.subset([]).unwrap()).unwrap();
            oracle_expm(&only.build(), t).matrix.view((0, 0), (n, n)).into_owned()
        };
        let top = layer(spec.right());
        let bottom = layer(spec.left());
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst
                    .max((h[(i, j)] - top[(i, j)]).norm())
                    .max((h[(n + i, n + j)] - bottom[(i, j)]).norm())
                    .max(h[(i, n + j)].norm())
                    .max(h[(n + i, j)].norm());
            }
        }
        if worst >= TRANSFER_TOL {
            failures.push(format!("{empty} t={t}: block split deviation {worst:e}"));
        }
    }

    // projector coefficient identities
    for _ in 0..50 {
        let spec = common::random_spec(&mut rng, false);
        for p in eigenvalues(&spec).pairs() {
            let c = &p.coefficients;
            let dev = (c.e_plus + c.e_minus)
                .norm()
                .max((c.c_plus + c.c_minus - 1.0).abs())
                .max((c.d_plus + c.d_minus - 1.0).abs());
            if dev >= 1e-12 {
                failures.push(format!("{spec} {:?}: coefficient identity off by {dev:e}", p.index));
            }
        }
    }

    report(8, &failures);
}
