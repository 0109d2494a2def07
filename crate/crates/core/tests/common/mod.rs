//! Seeded property checks shared by the property suite and the acceptance
//! report. Each check runs `CASES` cases from a fixed seed.

#![allow(dead_code)]

use std::collections::BTreeSet;

use elusive_core::classes::{enumerate_element_classes, nu_of_label, BlockSystem, ClassLabel};
use elusive_core::decide::dsl::{parse_condition, Arith, Atom, Env, Expr, Rel, Rhs, Var};
use elusive_core::decide::tables::Tables;
use elusive_core::decide::{decide_elusive, group_env, SubgroupCase};
use elusive_core::delperm::{build, compose};
use elusive_core::groups::{kappa_rules, Family, GroupSpec};
use elusive_core::numth::{
    legendre, p_bounded_partitions, phi_rq, phi_rq_naive, prime_power, primes_up_to, rem_euclid,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;
pub const SEED: u64 = 0x00e1_5e5e;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        ..Config::default()
    })
}

pub fn check<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

fn odd_primes(limit: u64) -> Vec<u64> {
    primes_up_to(limit).into_iter().filter(|&p| p > 2).collect()
}

pub fn legendre_multiplicative() -> Result<(), String> {
    check((prop::sample::select(odd_primes(50)), any::<i32>(), any::<i32>()), |(p, a, b)| {
        let (a, b) = (a as i64, b as i64);
        prop_assume!(a.rem_euclid(p as i64) != 0 && b.rem_euclid(p as i64) != 0);
        let ab = (a as i128 * b as i128).rem_euclid(p as i128) as i64;
        prop_assert_eq!(legendre(ab, p).unwrap(), legendre(a, p).unwrap() * legendre(b, p).unwrap());
        Ok(())
    })
}

pub fn phi_divides_r_minus_one() -> Result<(), String> {
    check((prop::sample::select(primes_up_to(2000)), 2u64..1_000_000), |(r, q)| {
        prop_assume!(q % r != 0);
        let i = phi_rq(r, q).unwrap();
        prop_assert_eq!((r - 1) % i as u64, 0);
        prop_assert_eq!(Some(i), phi_rq_naive(r, q));
        Ok(())
    })
}

/// Partitions of `n` into parts at most `k`, by the usual table.
pub fn partition_count_dp(n: u32, k: u32) -> u64 {
    let mut ways = vec![0u64; n as usize + 1];
    ways[0] = 1;
    for part in 1..=k.min(n) as usize {
        for total in part..=n as usize {
            ways[total] += ways[total - part];
        }
    }
    ways[n as usize]
}

pub fn partition_count() -> Result<(), String> {
    check((1u32..=30, prop::sample::select(primes_up_to(31))), |(n, p)| {
        prop_assert_eq!(p_bounded_partitions(n, p as u32).len() as u64, partition_count_dp(n, p as u32));
        Ok(())
    })
}

fn perm_pair() -> impl Strategy<Value = (u32, u64, Vec<usize>, Vec<usize>)> {
    (5u32..=20, prop::sample::select(primes_up_to(13))).prop_flat_map(|(d, p)| {
        let base: Vec<usize> = (0..d as usize).collect();
        (Just(d), Just(p), Just(base.clone()).prop_shuffle(), Just(base).prop_shuffle())
    })
}

pub fn homomorphism() -> Result<(), String> {
    check(perm_pair(), |(d, p, s, t)| {
        let dm = build(d, p).unwrap();
        let lhs = dm.permutation_matrix(&compose(&s, &t)).unwrap();
        let rhs = dm.permutation_matrix(&s).unwrap().mul(&dm.permutation_matrix(&t).unwrap());
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn form_preservation() -> Result<(), String> {
    check(perm_pair(), |(d, p, s, _)| {
        let dm = build(d, p).unwrap();
        let y = dm.permutation_matrix(&s).unwrap();
        match dm.form_data() {
            Some(f) => prop_assert!(f.preserved_by(&y)),
            None => prop_assert_eq!(y.mul(&dm.gram).mul(&y.transpose()), dm.gram.clone()),
        }
        Ok(())
    })
}

fn small_class_inputs() -> impl Strategy<Value = (GroupSpec, u64)> {
    let fams = vec![Family::Psl, Family::Psu, Family::Psp, Family::POmegaPlus, Family::POmegaMinus, Family::OmegaOdd];
    (
        prop::sample::select(fams),
        2u32..=10,
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]),
        prop::sample::select(vec![3u64, 5, 7, 11, 13]),
    )
        .prop_filter_map("valid spec with r | |T|", |(f, n, q, r)| {
            let spec = GroupSpec::with_q(f, n, q).ok()?;
            (spec.p != r).then_some((spec, r))
        })
}

fn scale(label: &ClassLabel, perm: &[usize]) -> ClassLabel {
    match label {
        ClassLabel::Semisimple { r, c, mult, e, splits } => {
            let mut m: Vec<(u32, u32)> = mult.iter().map(|&(b, a)| (perm[b as usize] as u32, a)).collect();
            m.sort();
            ClassLabel::Semisimple { r: *r, c: *c, mult: m, e: *e, splits: *splits }
        }
        other => other.clone(),
    }
}

pub fn power_map_closure() -> Result<(), String> {
    check((small_class_inputs(), 1u64..13), |((spec, r), k)| {
        prop_assume!(k % r != 0);
        let Ok(labels) = enumerate_element_classes(&spec, r) else { return Ok(()) };
        let bs = BlockSystem::new(&spec, r).unwrap();
        let perm = bs.scale(k);
        let set: BTreeSet<ClassLabel> = labels.iter().cloned().collect();
        let image: BTreeSet<ClassLabel> = labels.iter().map(|l| scale(l, &perm)).collect();
        prop_assert_eq!(set, image);
        Ok(())
    })
}

pub fn label_dimension() -> Result<(), String> {
    check(small_class_inputs(), |(spec, r)| {
        let Ok(labels) = enumerate_element_classes(&spec, r) else { return Ok(()) };
        for l in labels {
            prop_assert_eq!(l.dim(), spec.n, "{}", l);
            prop_assert_eq!(l.order(), r);
        }
        Ok(())
    })
}

fn arith() -> impl Strategy<Value = Arith> {
    let leaf =
        prop_oneof![(0i128..1000).prop_map(Arith::Num), prop::sample::select(Var::ALL.to_vec()).prop_map(Arith::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |x: Arith| Box::new(x);
        prop_oneof![
            inner.clone().prop_map(move |a| Arith::Neg(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Arith::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Arith::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Arith::Mul(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Arith::Div(b(x), b(y))),
            (inner.clone(), inner).prop_map(move |(x, y)| Arith::Pow(b(x), b(y))),
        ]
    })
}

fn atom() -> impl Strategy<Value = Atom> {
    let rel = prop::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge]);
    prop_oneof![
        any::<bool>().prop_map(Atom::Bool),
        (arith(), rel.clone(), any::<bool>(), arith(), prop::option::of(arith())).prop_map(
            |(lhs, rel, pm, value, m)| {
                let congruence = matches!(rel, Rel::Eq | Rel::Ne);
                Atom::Cmp { lhs, rel, rhs: Rhs { pm: pm && congruence, value }, modulus: m.filter(|_| congruence) }
            }
        ),
        (arith(), arith(), rel, any::<bool>(), arith()).prop_map(|(a, p, rel, pm, value)| {
            let pm = pm && matches!(rel, Rel::Eq | Rel::Ne);
            Atom::Legendre { a, p, rel, rhs: Rhs { pm, value } }
        }),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    atom().prop_map(Expr::Atom).prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::And),
            prop::collection::vec(inner, 2..4).prop_map(Expr::Or),
        ]
    })
}

pub fn dsl_round_trip() -> Result<(), String> {
    check(expr(), |e| {
        let text = e.to_string();
        let back = parse_condition(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
        Ok(())
    })
}

pub fn eval_mod_matches_exact() -> Result<(), String> {
    let vals = prop::collection::vec(-50i128..50, 7);
    check((arith(), vals, 1u64..1000), |(a, vals, m)| {
        let mut env = Env::new();
        for (v, x) in Var::ALL.iter().zip(vals) {
            env.set(*v, x);
        }
        if let (Ok(x), Ok(y)) = (a.eval(&env), a.eval_mod(&env, m)) {
            prop_assert_eq!(rem_euclid(x, m), y, "{}", a);
        }
        Ok(())
    })
}

/// `(spec, case)` pairs from every encoded B and low-dimensional row with
/// `q <= 50`.
pub fn table_instances() -> Vec<(GroupSpec, SubgroupCase)> {
    let t = Tables::global().unwrap();
    let qs: Vec<u64> = (2..=50).filter(|&q| prime_power(q).is_some()).collect();
    let mut out = Vec::new();
    let mut push = |f: Family, n: u32, case: SubgroupCase, exists: &Expr| {
        for &q in &qs {
            if let Ok(spec) = GroupSpec::with_q(f, n, q) {
                if exists.eval(&group_env(&spec)).unwrap_or(false) {
                    out.push((spec, case.clone()));
                }
            }
        }
    };
    for row in &t.b {
        for &(f, n) in &row.targets {
            push(f, n, SubgroupCase::B { id: row.id.clone() }, &row.exists);
        }
    }
    for row in &t.lowdim {
        for &f in &row.families {
            push(f, row.n, SubgroupCase::LowDim { row: row.id.clone() }, &row.exists);
        }
    }
    out
}

pub fn witnesses_are_consistent() -> Result<(), String> {
    let inst = table_instances();
    let strategy = (0..inst.len(), prop::sample::select(primes_up_to(50)));
    check(strategy, |(k, r)| {
        let (spec, case) = &inst[k];
        let Ok(v) = decide_elusive(spec, case, r) else { return Ok(()) };
        prop_assert!(!(v.elusive && v.witness.is_some()));
        if let Some(w) = v.witness {
            prop_assert_eq!(w.order(), r);
            prop_assert_eq!(w.dim(), spec.n);
            prop_assert!(nu_of_label(&w, spec) >= 1);
        }
        Ok(())
    })
}

pub fn star_implies_kappa_one() -> Result<(), String> {
    let fams = vec![Family::Psl, Family::Psu, Family::Psp, Family::POmegaPlus, Family::POmegaMinus, Family::OmegaOdd];
    let strategy = (
        prop::sample::select(fams),
        6u32..=14,
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13]),
        prop::sample::select(odd_primes(31)),
        0u32..3,
    );
    check(strategy, |(f, n, q, r, extra)| {
        let Ok(spec) = GroupSpec::with_q(f, n, q) else { return Ok(()) };
        let order = BigUint::from(r).pow(1 + extra) * 2u32;
        let case = SubgroupCase::S { name: "H".into(), order };
        let Ok(v) = decide_elusive(&spec, &case, r) else { return Ok(()) };
        if v.elusive {
            prop_assert_eq!(v.rule.as_str(), "thm1.iv");
            prop_assert_eq!(kappa_rules(&spec, r).unwrap().exact, Some(1));
        }
        Ok(())
    })
}

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const ALL: [Property; 12] = [
    ("legendre multiplicativity", legendre_multiplicative),
    ("phi divides r - 1", phi_divides_r_minus_one),
    ("partition count against DP", partition_count),
    ("permutation action is a homomorphism", homomorphism),
    ("permutation images preserve the form", form_preservation),
    ("power-map closure of class labels", power_map_closure),
    ("class labels have dimension n", label_dimension),
    ("condition DSL round-trips through Display", dsl_round_trip),
    ("modular evaluation matches exact", eval_mod_matches_exact),
    ("witnesses are consistent", witnesses_are_consistent),
    ("(star) implies a single subgroup class", star_implies_kappa_one),
    ("legendre via condition language", legendre_condition),
];

pub fn legendre_condition() -> Result<(), String> {
    check((prop::sample::select(odd_primes(50)), 0i64..10_000), |(p, a)| {
        let env = Env::new().with(Var::P, p as i128).with(Var::Q, a as i128);
        let want = legendre(a, p).unwrap();
        let got = parse_condition(&format!("legendre(q, p) = {want}")).unwrap().eval(&env).unwrap();
        prop_assert!(got);
        Ok(())
    })
}
