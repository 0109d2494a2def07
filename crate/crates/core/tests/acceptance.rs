//! One line per acceptance criterion. Criteria 2 and 6 fail on published
//! table entries that the independent checks refute; the failing instances
//! are pinned below so any change to them is caught.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use elusive_core::classes::{enumerate_element_classes, enumerate_subgroup_classes, ClassLabel};
use elusive_core::decide::tables::Tables;
use elusive_core::decide::{
    a_collection_coverage, a_target, decide_elusive, decide_kappa_corollary, kappa_is_one, SubgroupCase,
};
use elusive_core::delperm::{build, epsilon_type, fuse_cycle_type, CycleType};
use elusive_core::groups::{c_value, group_order, kappa_rules, Family, GroupSpec};
use elusive_core::numth::{prime_power, primes_up_to, valuation_big};
use elusive_core::oracle::{
    classify_quadratic_form, derangement_search, find_a5, find_isometry, jordan_partition, psl2_generators,
    small_group_closure, FormData, FormType, Matrix, DEFAULT_CAP,
};

const C1_LIMIT: Duration = Duration::from_secs(120);
const C2_LIMIT: Duration = Duration::from_secs(300);
const C3_LIMIT: Duration = Duration::from_secs(60);

/// Instances where the A-collection r-clause claims elusivity but some
/// class [X1^h, I_e] with h r > d meets no element of H.
const C2_EXPECTED: usize = 122;
/// A-collection instances with r = 3 and c = 2: the theorem says elusive,
/// the counting corollary does not.
const C6_EXPECTED_A: usize = 84;
/// Table rows whose theorem and corollary verdicts differ.
/// Instances with r = p that come out elusive. Only the first is expected
/// in the literature, but PSL3(4) has a single class of involutions and A6
/// contains involutions, so the second is genuine.
const C5_P_ELUSIVE: [&str; 2] = ["B:15 PSU(6, 2)", "lowdim:L3/A6 PSL(3, 4)"];
const C6_EXPECTED_ROWS: [&str; 9] = [
    "B:4 POmegaPlus(8, 43) r=5",
    "B:4 POmegaPlus(8, 7) r=5",
    "lowdim:L4/A7 PSL(4, 29) r=2",
    "lowdim:L4/A7 PSL(4, 37) r=2",
    "lowdim:L4/A7 PSU(4, 19) r=2",
    "lowdim:L4/A7 PSU(4, 3) r=2",
    "lowdim:L4/U4(2) PSL(4, 13) r=2",
    "lowdim:L4/U4(2) PSL(4, 37) r=2",
    "lowdim:L4/U4(2) PSU(4, 11) r=2",
];

struct Outcome {
    pass: bool,
    detail: String,
    /// Whether the outcome matches what is pinned for this criterion.
    expected: bool,
}

fn a_sweep() -> Vec<(u32, u64, u64)> {
    let mut out = Vec::new();
    for d in 8..=24u32 {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for r in primes_up_to(23) {
                if r as u32 <= d && a_target(d, p).is_ok() {
                    out.push((d, p, r));
                }
            }
        }
    }
    out
}

/// Primes dividing `|T|` for a group of rank at most five.
fn order_primes(spec: &GroupSpec) -> Vec<u64> {
    let q = spec.q();
    let mut cands = BTreeSet::from([spec.p]);
    for k in 1..=spec.n {
        for m in [q.pow(k) - 1, q.pow(k) + 1] {
            let mut m = m;
            let mut f = 2;
            while f * f <= m {
                while m % f == 0 {
                    cands.insert(f);
                    m /= f;
                }
                f += 1;
            }
            if m > 1 {
                cands.insert(m);
            }
        }
    }
    let order = group_order(spec).unwrap();
    cands.into_iter().filter(|&r| valuation_big(&order, r) > 0).collect()
}

fn prime_powers(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| prime_power(q).is_some()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = Tables::global().unwrap();
    let mut checked = 0;
    let mut bad = Vec::new();
    for row in &t.lowdim {
        let case = SubgroupCase::LowDim { row: row.id.clone() };
        for &f in &row.families {
            for q in prime_powers(49) {
                let Ok(spec) = GroupSpec::with_q(f, row.n, q) else { continue };
                let env = elusive_core::decide::group_env(&spec);
                if !row.exists.eval(&env).unwrap() {
                    continue;
                }
                for r in order_primes(&spec) {
                    let want = row.elusive.get(&r).map(|c| c.eval(&env).unwrap()).unwrap_or(false);
                    let agree = match decide_elusive(&spec, &case, r) {
                        Ok(v) => v.elusive == want,
                        Err(e) => e.is_rejection() && !want,
                    };
                    checked += 1;
                    if !agree {
                        bad.push(format!("{case} {spec} r={r}"));
                    }
                }
            }
        }
    }
    let mut brute = 0;
    for q in [11u64, 19, 29, 31, 41] {
        let t = small_group_closure(&psl2_generators(q), DEFAULT_CAP).unwrap();
        let h = find_a5(&t).unwrap();
        let spec = GroupSpec::with_q(Family::Psl, 2, q).unwrap();
        let index = (t.order() / h.order()) as u64;
        for r in primes_up_to(index).into_iter().filter(|r| index % r == 0) {
            let oracle = derangement_search(&t, &h, r).unwrap().is_empty();
            let engine = decide_elusive(&spec, &SubgroupCase::LowDim { row: "L2/A5".into() }, r).unwrap().elusive;
            brute += 1;
            if oracle != engine {
                bad.push(format!("brute force PSL(2,{q}) r={r}: oracle {oracle}, engine {engine}"));
            }
        }
    }
    let took = start.elapsed();
    let pass = bad.is_empty() && took <= C1_LIMIT;
    Outcome {
        pass,
        expected: pass,
        detail: format!(
            "{checked} table instances, {brute} brute-force checks, {} disagreements {bad:?}, {took:.1?}",
            bad.len()
        ),
    }
}

/// Whether every uncovered class is [X1^h, I_e] with more r-cycles than
/// the degree allows.
fn beyond_degree(labels: &[ClassLabel], d: u32) -> bool {
    !labels.is_empty()
        && labels.iter().all(|l| match l {
            ClassLabel::Semisimple { r, mult, .. } => {
                mult.len() == 1 && mult[0].0 == 0 && mult[0].1 as u64 * r > d as u64
            }
            _ => false,
        })
}

/// An element of order 3 in Ω7(5) with a one-dimensional fixed space. The
/// module for A8 over F5 is the sum-zero part of F5^8 with the dot product;
/// every order-3 element of A8 fixes at least three dimensions there.
fn omega7_certificate() -> bool {
    let p = 5;
    let vec8 = |c: &[i64]| c.to_vec();
    // Basis: sum-zero vectors inside each 3-cycle support, then a basis of
    // the fixed space of (123)(456).
    let basis = [
        vec8(&[1, -1, 0, 0, 0, 0, 0, 0]),
        vec8(&[0, 1, -1, 0, 0, 0, 0, 0]),
        vec8(&[0, 0, 0, 1, -1, 0, 0, 0]),
        vec8(&[0, 0, 0, 0, 1, -1, 0, 0]),
        vec8(&[1, 1, 1, -1, -1, -1, 0, 0]),
        vec8(&[0, 0, 0, 0, 0, 0, 1, -1]),
        vec8(&[1, 1, 1, 0, 0, 0, -3, 0]),
    ];
    let dot = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<i64>();
    let gram =
        Matrix::from_rows(p, &basis.iter().map(|u| basis.iter().map(|v| dot(u, v)).collect()).collect::<Vec<_>>());
    let fixed = Matrix::from_rows(
        p,
        &basis[4..].iter().map(|u| basis[4..].iter().map(|v| dot(u, v)).collect()).collect::<Vec<_>>(),
    );
    let Some(y) = find_isometry(&FormData::Symmetric(fixed), 3, 1) else { return false };
    let mut z = Matrix::zero(p, 7);
    for (i, row) in [[0i64, 1], [-1, -1]].iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            z.set(i, j, x.rem_euclid(p as i64) as u64);
            z.set(i + 2, j + 2, x.rem_euclid(p as i64) as u64);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            z.set(4 + i, 4 + j, y.get(i, j));
        }
    }
    let id = Matrix::identity(p, 7);
    gram.rank() == 7
        && FormData::Symmetric(gram).preserved_by(&z)
        && z.pow(3).is_identity()
        && z.det() == 1
        && z.sub(&id).rank() == 6
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut disagreements = Vec::new();
    let mut unexplained = Vec::new();
    for (d, p, r) in a_sweep() {
        let spec = a_target(d, p).unwrap();
        let Ok(v) = decide_elusive(&spec, &SubgroupCase::A { d }, r) else { continue };
        let cov = a_collection_coverage(d, p, r).unwrap();
        checked += 1;
        if !cov.unmatched.is_empty() {
            unexplained.push(format!("unmatched images d={d} p={p} r={r}"));
        }
        if cov.elusive != v.elusive {
            disagreements.push((d, p, r));
            if !(v.elusive && v.rule == "thm1.ii.c" && beyond_degree(&cov.uncovered, d)) {
                unexplained.push(format!("d={d} p={p} r={r}"));
            }
        }
    }
    let mut jordan = 0;
    for d in 8..=20u32 {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let Ok(spec) = a_target(d, p) else { continue };
            let dm = build(d, p).unwrap();
            for h in 1..=d / p as u32 {
                let ct = CycleType::new(p, h, d - h * p as u32).unwrap();
                let Ok(label) = fuse_cycle_type(&ct, d, p, &spec) else { continue };
                let ClassLabel::Unipotent { jordan: want, .. } = label else { unreachable!() };
                let got = jordan_partition(&dm.permutation_matrix(&ct.representative()).unwrap()).unwrap();
                jordan += 1;
                if got != want {
                    unexplained.push(format!("jordan d={d} p={p} h={h}: {got:?} vs {want:?}"));
                }
            }
        }
    }
    let certificate = omega7_certificate();
    let took = start.elapsed();
    let pass = disagreements.is_empty() && unexplained.is_empty() && took <= C2_LIMIT;
    let expected = disagreements.len() == C2_EXPECTED && unexplained.is_empty() && certificate && took <= C2_LIMIT;
    Outcome {
        pass,
        expected,
        detail: format!(
            "{checked} instances, {} disagreements (all r-clause claims refuted by uncovered classes beyond the degree), \
             {} unexplained {unexplained:?}, {jordan} Jordan forms confirmed, Omega7(5) certificate {}, {took:.1?}",
            disagreements.len(),
            unexplained.len(),
            if certificate { "found" } else { "missing" },
        ),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut skipped = 0;
    let mut bad = Vec::new();
    for f in [Family::Psl, Family::Psu, Family::Psp] {
        for n in 2..=8u32 {
            for q in [2u64, 3, 4, 5, 7, 8, 9] {
                let Ok(spec) = GroupSpec::with_q(f, n, q) else { continue };
                for r in [3u64, 5, 7, 11, 13] {
                    if r == spec.p || valuation_big(&group_order(&spec).unwrap(), r) == 0 {
                        continue;
                    }
                    if c_value(&spec, r).unwrap() < 2 {
                        continue;
                    }
                    let kappa = match enumerate_subgroup_classes(&spec, r) {
                        Ok(v) => v.len() as u64,
                        Err(_) => {
                            skipped += 1;
                            continue;
                        }
                    };
                    let rules = kappa_rules(&spec, r).unwrap();
                    let floor = (n as u64 / (r - 1)).saturating_sub(1);
                    checked += 1;
                    if (kappa == 1) != kappa_is_one(&spec, r).unwrap() || !rules.contains(kappa) || kappa < floor {
                        bad.push(format!("{spec} r={r} kappa={kappa}"));
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    let pass = bad.is_empty() && took <= C3_LIMIT;
    Outcome {
        pass,
        expected: pass,
        detail: format!("{checked} groups, {skipped} skipped, {} violations {bad:?}, {took:.1?}", bad.len()),
    }
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut special = 0;
    let mut bad = Vec::new();
    for d in 5..=20u32 {
        for p in primes_up_to(13) {
            let dm = build(d, p).unwrap();
            let eps = epsilon_type(d, p);
            let agree = match (dm.form_data(), eps) {
                (None, Err(_)) => true,
                (Some(fd), Ok(e)) => {
                    let want = match e {
                        Some(1) => FormType::Plus,
                        Some(_) => FormType::Minus,
                        None => FormType::OddDim,
                    };
                    classify_quadratic_form(&fd).unwrap() == want
                }
                _ => false,
            };
            checked += 1;
            if p > 2 && d as u64 % p == 0 && dm.n % 2 == 0 {
                special += 1;
            }
            if !agree {
                bad.push(format!("d={d} p={p}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        expected: bad.is_empty(),
        detail: format!("{checked} modules ({special} with p | d in even dimension), {} mismatches {bad:?}", bad.len()),
    }
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let least = primes_up_to(1000).into_iter().find(|&p| (p * (p - 1) + 1) % 49 == 0);
    if least != Some(19) {
        bad.push(format!("least prime with p(p-1) = -1 mod 49 is {least:?}"));
    }
    let omega = GroupSpec::with_q(Family::OmegaOdd, 15, 19).unwrap();
    let v = decide_elusive(&omega, &"A:d=16".parse().unwrap(), 7).unwrap();
    let kappa = kappa_rules(&omega, 7).unwrap();
    if !v.elusive || kappa.exact.or(kappa.upper.filter(|&u| u == kappa.lower)) != Some(2) {
        bad.push(format!("Omega(15, 19) r=7: elusive {} kappa {kappa:?}", v.elusive));
    }
    if 3u64.pow(5) % 121 != 1 {
        bad.push("3^5 != 1 mod 121".into());
    }
    let psp = GroupSpec::with_q(Family::Psp, 10, 3).unwrap();
    if !decide_elusive(&psp, &"B:1".parse().unwrap(), 11).unwrap().elusive {
        bad.push("PSp(10,3) B1 r=11 not elusive".into());
    }
    let psu = GroupSpec::with_q(Family::Psu, 6, 2).unwrap();
    if !decide_elusive(&psu, &"B:15".parse().unwrap(), 2).unwrap().elusive {
        bad.push("PSU(6,2) B15 r=2 not elusive".into());
    }
    let mut p_elusive = Vec::new();
    for (spec, case) in common::table_instances() {
        if let Ok(v) = decide_elusive(&spec, &case, spec.p) {
            if v.elusive {
                p_elusive.push(format!("{case} {spec}"));
            }
        }
    }
    for (d, p, r) in a_sweep().into_iter().filter(|&(_, p, r)| p == r) {
        if let Ok(v) = decide_elusive(&a_target(d, p).unwrap(), &SubgroupCase::A { d }, r) {
            if v.elusive {
                p_elusive.push(format!("A:d={d} p={p}"));
            }
        }
    }
    let psl34 = GroupSpec::with_q(Family::Psl, 3, 4).unwrap();
    let one_class = enumerate_element_classes(&psl34, 2).unwrap().len() == 1;
    let unique = p_elusive == ["B:15 PSU(6, 2)"];
    Outcome {
        pass: bad.is_empty() && unique,
        expected: bad.is_empty() && p_elusive == C5_P_ELUSIVE && one_class,
        detail: format!(
            "worked examples {}, p-elusive instances {p_elusive:?} (PSL(3, 4) has {} involution class), {} failures {bad:?}",
            if bad.is_empty() { "hold" } else { "fail" },
            if one_class { "one" } else { "more than one" },
            bad.len()
        ),
    }
}

fn criterion_6() -> Outcome {
    let t = Tables::global().unwrap();
    let mut checked = 0;
    let mut a_bad = Vec::new();
    let mut unexplained = Vec::new();
    for (d, p, r) in a_sweep() {
        let spec = a_target(d, p).unwrap();
        let case = SubgroupCase::A { d };
        let Ok(v) = decide_elusive(&spec, &case, r) else { continue };
        let cor = decide_kappa_corollary(&spec, &case, r);
        checked += 1;
        match cor {
            Ok(k) if k.elusive == v.elusive => {}
            Ok(k) => {
                a_bad.push((d, p, r));
                if !(r == 3 && v.elusive && !k.elusive && c_value(&spec, r).unwrap() == 2) {
                    unexplained.push(format!("A:d={d} p={p} r={r}"));
                }
            }
            Err(e) => unexplained.push(format!("A:d={d} p={p} r={r}: {e}")),
        }
    }
    let table6: BTreeSet<String> =
        t.small_r.iter().filter_map(|row| row.id.strip_prefix("lowdim:")).map(String::from).collect();
    let mut rows_bad = Vec::new();
    let mut info = Vec::new();
    for (spec, case) in common::table_instances() {
        let in_scope = match &case {
            SubgroupCase::LowDim { row } => table6.contains(row),
            _ => true,
        };
        for r in primes_up_to(1000) {
            let Ok(v) = decide_elusive(&spec, &case, r) else { continue };
            let key = format!("{case} {spec} r={r}");
            let agree = match decide_kappa_corollary(&spec, &case, r) {
                Ok(k) => k.elusive == v.elusive,
                Err(_) => !v.elusive,
            };
            if in_scope {
                checked += 1;
            }
            match (agree, in_scope) {
                (true, _) => {}
                (false, true) => rows_bad.push(key),
                (false, false) => info.push(key),
            }
        }
    }
    rows_bad.sort();
    let pass = a_bad.is_empty() && rows_bad.is_empty() && unexplained.is_empty();
    let expected = a_bad.len() == C6_EXPECTED_A && unexplained.is_empty() && rows_bad == C6_EXPECTED_ROWS;
    Outcome {
        pass,
        expected,
        detail: format!(
            "{checked} instances, {} A-collection disagreements (r = 3, c = 2), {} table-row disagreements {rows_bad:?}, \
             {} unexplained {unexplained:?}; outside the small-prime table: {info:?}",
            a_bad.len(),
            rows_bad.len(),
            unexplained.len(),
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    for (name, run) in common::ALL {
        if let Err(e) = run() {
            bad.push(format!("{name}: {e}"));
        }
    }
    Outcome {
        pass: bad.is_empty(),
        expected: bad.is_empty(),
        detail: format!(
            "{} properties x {} cases, seed {:#x}, {} failures {bad:?}",
            common::ALL.len(),
            common::CASES,
            common::SEED,
            bad.len()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 7] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7];
    let mut ok = true;
    for (i, run) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {}: {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.expected {
            println!("criterion {}: outcome differs from the pinned analysis", i + 1);
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
