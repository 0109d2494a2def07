//! Shared fixtures for the benchmarks.

use elusive_core::{Family, GroupSpec, SubgroupCase};

/// Decision queries spanning every kind of subgroup case.
pub fn decide_cases() -> Vec<(&'static str, GroupSpec, SubgroupCase, u64)> {
    let g = |f, n, q| GroupSpec::with_q(f, n, q).expect("valid group");
    vec![
        ("a-collection", g(Family::OmegaOdd, 15, 19), "A:d=16".parse().unwrap(), 7),
        ("b-row", g(Family::Psp, 10, 3), "B:1".parse().unwrap(), 11),
        ("lowdim", g(Family::Psl, 2, 31), "lowdim:L2/A5".parse().unwrap(), 2),
        ("generic", g(Family::Psl, 8, 3), "S:H,order=440".parse().unwrap(), 2),
    ]
}

/// Groups and primes whose class lists are a few hundred labels long.
pub fn class_cases() -> Vec<(GroupSpec, u64)> {
    vec![
        (GroupSpec::with_q(Family::Psl, 8, 3).unwrap(), 13),
        (GroupSpec::with_q(Family::POmegaPlus, 12, 5).unwrap(), 13),
        (GroupSpec::with_q(Family::Psp, 12, 2).unwrap(), 2),
    ]
}
