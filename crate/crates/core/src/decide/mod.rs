//! The elusivity decision engine.
//!
//! Every table row comes from `data/` through [`tables::Tables`]; the code
//! here only walks the case analysis. Rule names in [`Verdict::rule`] are
//! `thm1.i:<row>`, `thm1.ii.a`, `thm1.ii.b`, `thm1.ii.c`, `thm1.ii`,
//! `thm1.iii:<row>`, `thm1.iv` for the classification and `cor1.2.i`,
//! `cor1.2.ii`, `cor1.2.iii:<row>`, `cor1.2` for the counting criterion.

pub mod dsl;
pub mod tables;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::classes::{enumerate_element_classes_bounded, enumeration_feasible, guralnick_saxl_witness, ClassLabel};
use crate::delperm::{fuse_cycle_type, h0_structure, CycleType, H0};
use crate::error::{Error, Result};
use crate::groups::{c_value, group_order, Family, GroupSpec};
use crate::numth::{gcd, is_prime, legendre, p_bounded_partitions, pow_mod, valuation_big};
use dsl::{Env, Var};
use tables::{BRow, LowRow, Tables};

/// The point-stabiliser case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubgroupCase {
    /// Socle `A_d` on the fully deleted permutation module.
    A { d: u32 },
    /// A row of the B collection, by id (`B1` .. `B18`).
    B { id: String },
    /// A low-dimensional row, by id (for example `L2/A5`).
    LowDim { row: String },
    /// Any other almost simple irreducible subgroup, given by the name and
    /// order of `H ∩ T`. The caller asserts it lies outside A and B.
    S {
        name: String,
        #[serde(with = "big_string")]
        order: BigUint,
    },
}

mod big_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl FromStr for SubgroupCase {
    type Err = Error;

    /// `A:d=16`, `B:5` (or `B:B5`), `lowdim:L2/A5`, `S:<name>,order=<int>`.
    fn from_str(s: &str) -> Result<SubgroupCase> {
        let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("case `{s}`: {msg}") };
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected `kind:...`"))?;
        match kind {
            "A" => {
                let d = rest.strip_prefix("d=").ok_or_else(|| bad("expected d=<int>"))?;
                Ok(SubgroupCase::A { d: d.parse().map_err(|_| bad("bad d"))? })
            }
            "B" => {
                let id = rest.strip_prefix('B').unwrap_or(rest);
                let k: u32 = id.parse().map_err(|_| bad("bad row number"))?;
                Ok(SubgroupCase::B { id: format!("B{k}") })
            }
            "lowdim" => Ok(SubgroupCase::LowDim { row: rest.to_string() }),
            "S" => {
                let (name, order) = rest.rsplit_once(",order=").ok_or_else(|| bad("expected <name>,order=<int>"))?;
                Ok(SubgroupCase::S { name: name.to_string(), order: order.parse().map_err(|_| bad("bad order"))? })
            }
            _ => Err(bad("unknown kind")),
        }
    }
}

impl fmt::Display for SubgroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupCase::A { d } => write!(f, "A:d={d}"),
            SubgroupCase::B { id } => write!(f, "B:{}", id.trim_start_matches('B')),
            SubgroupCase::LowDim { row } => write!(f, "lowdim:{row}"),
            SubgroupCase::S { name, order } => write!(f, "S:{name},order={order}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub elusive: bool,
    pub rule: String,
    /// A class of derangements of order `r`, when one is known.
    pub witness: Option<ClassLabel>,
    /// How the witness was found (`order`, `coverage`, `nu-bound`), or why
    /// there is none (`table`, `counting`, `corollary`, `unavailable`).
    pub witness_basis: Option<String>,
    pub degree_divisible: bool,
}

/// The subgroup case resolved against a group: which row applies and the
/// order of `H ∩ T`.
#[derive(Debug, Clone)]
struct Resolved<'t> {
    kind: Kind<'t>,
    h0_order: BigUint,
    env: Env,
}

#[derive(Debug, Clone)]
enum Kind<'t> {
    A {
        d: u32,
    },
    B(&'t BRow),
    Low(&'t LowRow),
    /// Generic, with `n >= 6` or no matching low-dimensional row.
    S,
}

/// Bindings for a group: `p`, `q`, `f`, `n`, and `e` where the family has
/// a sign.
pub fn group_env(spec: &GroupSpec) -> Env {
    let mut env = Env::new()
        .with(Var::P, spec.p as i128)
        .with(Var::Q, spec.q() as i128)
        .with(Var::F, spec.f as i128)
        .with(Var::N, spec.n as i128);
    if let Some(e) = spec.epsilon() {
        env.set(Var::E, e as i128);
    }
    if spec.f % 3 == 0 {
        env.set(Var::Q0, spec.p.pow(spec.f / 3) as i128);
    }
    env
}

fn factorial(d: u32) -> BigUint {
    (1..=d as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// The group `T` attached to the A row for `(d, p)`.
pub fn a_target(d: u32, p: u64) -> Result<GroupSpec> {
    a_target_in(Tables::global()?, d, p)
}

fn a_target_in(t: &Tables, d: u32, p: u64) -> Result<GroupSpec> {
    if !is_prime(p) {
        return Err(Error::pre(format!("p = {p} is not prime")));
    }
    let env = Env::new().with(Var::P, p as i128).with(Var::D, d as i128);
    for row in &t.a {
        if !row.when.eval(&env)? {
            continue;
        }
        let n =
            u32::try_from(row.n.eval(&env)?).map_err(|_| Error::Table { row: row.id.clone(), msg: "bad n".into() })?;
        let family = match (&row.family, &row.plus_if) {
            (Some(f), _) => *f,
            (None, Some(c)) => {
                if c.eval(&env)? {
                    Family::POmegaPlus
                } else {
                    Family::POmegaMinus
                }
            }
            (None, None) => unreachable!("validated on load"),
        };
        return GroupSpec::new(family, n, p, 1);
    }
    Err(Error::pre(format!("(d, p) = ({d}, {p}) is not a row of the A collection")))
}

fn resolve<'t>(t: &'t Tables, spec: &GroupSpec, case: &SubgroupCase) -> Result<Resolved<'t>> {
    spec.validate()?;
    let mut env = group_env(spec);
    let eps = spec.epsilon().unwrap_or(1);
    let q = spec.q();
    let q0 = (spec.f % 3 == 0).then(|| spec.p.pow(spec.f / 3));
    let (kind, h0_order) = match case {
        SubgroupCase::A { d } => {
            let target = a_target_in(t, *d, spec.p)?;
            if target.canonical() != spec.canonical() {
                return Err(Error::pre(format!("A_{d} over F_{} lies in {target}, not {spec}", spec.p)));
            }
            env.set(Var::D, *d as i128);
            let order = match h0_structure(*d, spec.p)? {
                H0::Symmetric => factorial(*d),
                H0::Alternating => factorial(*d) / 2u32,
            };
            (Kind::A { d: *d }, order)
        }
        SubgroupCase::B { id } => {
            let row = t.b_row(id).ok_or_else(|| Error::pre(format!("unknown B row `{id}`")))?;
            check_b_row(row, spec, &env)?;
            let name = match (&row.socle_p2, spec.p) {
                (Some(s), 2) => s,
                _ => &row.socle,
            };
            let mut order = t.socles.order(name, q, q0, eps)?;
            if let Some(c) = &row.ext2 {
                if c.eval(&env)? {
                    order *= 2u32;
                }
            }
            (Kind::B(row), order)
        }
        SubgroupCase::LowDim { row } => {
            let row = t.lowdim_row(row).ok_or_else(|| Error::pre(format!("unknown low-dimensional row `{row}`")))?;
            check_low_row(row, spec, &env)?;
            (Kind::Low(row), low_order(t, row, &env, q, eps)?)
        }
        SubgroupCase::S { name, order } => {
            let mut kind = Kind::S;
            if spec.n < 6 {
                for row in t.lowdim.iter().filter(|r| &r.socle == name) {
                    if check_low_row(row, spec, &env).is_ok() {
                        kind = Kind::Low(row);
                        break;
                    }
                }
            }
            (kind, order.clone())
        }
    };
    Ok(Resolved { kind, h0_order, env })
}

fn low_order(t: &Tables, row: &LowRow, env: &Env, q: u64, eps: i8) -> Result<BigUint> {
    let mut order = t.socles.order(&row.socle, q, None, eps)?;
    if let Some(c) = &row.ext2 {
        if c.eval(env)? {
            order *= 2u32;
        }
    }
    Ok(order)
}

fn check_b_row(row: &BRow, spec: &GroupSpec, env: &Env) -> Result<()> {
    if !row.targets.contains(&(spec.family, spec.n)) {
        return Err(Error::pre(format!("{spec} is not a group of row {}", row.id)));
    }
    if !row.exists.eval(env)? {
        return Err(Error::pre(format!("row {} needs {}", row.id, row.exists)));
    }
    Ok(())
}

fn check_low_row(row: &LowRow, spec: &GroupSpec, env: &Env) -> Result<()> {
    if !row.families.contains(&spec.family) || row.n != spec.n {
        return Err(Error::pre(format!("{spec} is not a group of row {}", row.id)));
    }
    if !row.exists.eval(env)? {
        return Err(Error::pre(format!("row {} needs {}", row.id, row.exists)));
    }
    Ok(())
}

/// Checks `r` prime and `r | |Ω|`, returning whether `r | |H ∩ T|`.
fn check_degree(spec: &GroupSpec, res: &Resolved, r: u64) -> Result<bool> {
    if !is_prime(r) {
        return Err(Error::pre(format!("r = {r} is not prime")));
    }
    let vt = valuation_big(&group_order(spec)?, r);
    let vh = valuation_big(&res.h0_order, r);
    if vt <= vh {
        return Err(Error::pre(format!("{r} does not divide the degree |T : H ∩ T|")));
    }
    Ok(vh > 0)
}

/// Whether `r` divides the degree `|T : H ∩ T|`.
pub fn degree_divisible(spec: &GroupSpec, case: &SubgroupCase, r: u64) -> Result<bool> {
    let t = Tables::global()?;
    let res = resolve(t, spec, case)?;
    match check_degree(spec, &res, r) {
        Ok(_) => Ok(true),
        Err(Error::Precondition(_)) if is_prime(r) => Ok(false),
        Err(e) => Err(e),
    }
}

fn c_clause(spec: &GroupSpec, r: u64) -> Option<u32> {
    if r == 2 || r == spec.p {
        None
    } else {
        c_value(spec, r).ok()
    }
}

/// `r != p`, `r > 2`, `r | |H ∩ T|`, and either `c > n/2`, or `c = n/2`
/// with `T` of minus type.
pub fn conditions_star(spec: &GroupSpec, case: &SubgroupCase, r: u64) -> Result<bool> {
    let t = Tables::global()?;
    let res = resolve(t, spec, case)?;
    Ok(star(spec, &res, r))
}

fn star(spec: &GroupSpec, res: &Resolved, r: u64) -> bool {
    let Some(c) = c_clause(spec, r) else { return false };
    let in_h = valuation_big(&res.h0_order, r) > 0;
    in_h && (2 * c > spec.n || (2 * c == spec.n && spec.family == Family::POmegaMinus))
}

fn require_n6(spec: &GroupSpec) -> Result<()> {
    if spec.n < 6 {
        return Err(Error::pre("the bound needs n >= 6"));
    }
    Ok(())
}

/// `c > max{2, √n/2}`, compared exactly as `4c² > n`. False when `c` is
/// undefined (`r = 2` or `r = p`).
pub fn conditions_diamond(spec: &GroupSpec, r: u64) -> Result<bool> {
    require_n6(spec)?;
    Ok(c_clause(spec, r).is_some_and(|c| c > 2 && 4 * c * c > spec.n))
}

/// `max{2, √n/2} < c <= n/2`, with `c < n/2` for minus type.
pub fn conditions_box(spec: &GroupSpec, r: u64) -> Result<bool> {
    require_n6(spec)?;
    Ok(c_clause(spec, r).is_some_and(|c| {
        c > 2 && 4 * c * c > spec.n && 2 * c <= spec.n && !(spec.family == Family::POmegaMinus && 2 * c == spec.n)
    }))
}

/// Whether `T` has a single class of subgroups of order `r`.
pub fn kappa_is_one(spec: &GroupSpec, r: u64) -> Result<bool> {
    let n = spec.n;
    if r == spec.p {
        return Ok((n == 2 && (r == 2 || spec.f % 2 == 1)) || (n == 3 && r == 2));
    }
    if r == 2 {
        return Ok(matches!(spec.family, Family::Psl | Family::Psu) && n <= 3);
    }
    let c = c_value(spec, r)?;
    if c == 1 {
        // In PSL_3^e(q) with 3 | q - e the only nonscalar class of order 3
        // is diag(1, w, w^2) unless w is a cube, that is unless 9 | q - e.
        if n == 3 && r == 3 {
            let e = spec.epsilon().unwrap_or(1) as i128;
            return Ok((spec.q() as i128 - e).rem_euclid(9) != 0);
        }
        return Ok(n == 2);
    }
    if c > n {
        return Err(Error::pre(format!("{r} does not divide |{spec}|")));
    }
    Ok(n / c == 1 || (spec.family == Family::POmegaMinus && 2 * c == n))
}

fn any_class(spec: &GroupSpec, r: u64) -> (Option<ClassLabel>, &'static str) {
    match enumerate_element_classes_bounded(spec, r, 1) {
        Ok((v, _)) if !v.is_empty() => (v.into_iter().next(), "order"),
        _ => (None, "unavailable"),
    }
}

/// Decide whether `T` is `r`-elusive in its action on the cosets of `H`.
pub fn decide_elusive(spec: &GroupSpec, case: &SubgroupCase, r: u64) -> Result<Verdict> {
    let t = Tables::global()?;
    let res = resolve(t, spec, case)?;
    let in_h = check_degree(spec, &res, r)?;
    let n = spec.n;
    let p = spec.p;
    let (elusive, rule) = match &res.kind {
        Kind::Low(row) => {
            let e = match row.elusive.get(&r) {
                Some(c) => c.eval(&res.env)?,
                None => false,
            };
            (e, format!("thm1.i:{}", row.id))
        }
        Kind::S if n < 6 => (false, "thm1.i".to_string()),
        Kind::A { d } => {
            let fam = spec.family;
            if r == 2 && p != 2 && fam == Family::OmegaOdd && legendre(((n + 1) / 2) as i64, p)? == 1 {
                (true, "thm1.ii.a".into())
            } else if r == 2
                && p != 2
                && matches!(fam, Family::POmegaPlus | Family::POmegaMinus)
                && n % 4 == 2
                && (p as i128 - 5 * spec.epsilon().unwrap() as i128).rem_euclid(8) == 0
            {
                (true, "thm1.ii.b".into())
            } else if r != p && r > 2 && r <= *d as u64 && c_value(spec, r)? as u64 == r - 1 {
                (true, "thm1.ii.c".into())
            } else {
                (false, "thm1.ii".into())
            }
        }
        Kind::B(row) => {
            let e = match t.b_condition(&row.id, r) {
                Some(c) => c.eval(&res.env)?,
                None => false,
            };
            (e, format!("thm1.iii:{}", row.id))
        }
        Kind::S => (star(spec, &res, r), "thm1.iv".into()),
    };
    let (witness, basis) = if elusive {
        (None, None)
    } else if !in_h {
        let (w, b) = any_class(spec, r);
        (w, Some(b))
    } else {
        match &res.kind {
            Kind::A { d } => match a_collection_coverage(*d, p, r) {
                Ok(rep) => match rep.uncovered.into_iter().next() {
                    Some(l) => (Some(l), Some("coverage")),
                    None => (None, Some("unavailable")),
                },
                Err(_) => (None, Some("unavailable")),
            },
            Kind::S if n >= 6 => match guralnick_saxl_witness(spec, r) {
                Ok(Some(l)) => (Some(l), Some("nu-bound")),
                Ok(None) => (None, Some("counting")),
                Err(_) => (None, Some("unavailable")),
            },
            _ => (None, Some("table")),
        }
    };
    Ok(Verdict { elusive, rule, witness, witness_basis: basis.map(String::from), degree_divisible: true })
}

/// The counting corollary: elusive iff `κ(T, r) = 1`, or the A case with
/// `r >= 5` and `c = r - 1`, or a small-prime table row. Needs `r` to
/// divide both `|Ω|` and `|H ∩ T|`.
pub fn decide_kappa_corollary(spec: &GroupSpec, case: &SubgroupCase, r: u64) -> Result<Verdict> {
    let t = Tables::global()?;
    let res = resolve(t, spec, case)?;
    if !check_degree(spec, &res, r)? {
        return Err(Error::pre(format!("{r} does not divide |H ∩ T|")));
    }
    let verdict = |elusive: bool, rule: String| Verdict {
        elusive,
        rule,
        witness: None,
        witness_basis: (!elusive).then(|| "corollary".to_string()),
        degree_divisible: true,
    };
    if kappa_is_one(spec, r)? {
        return Ok(verdict(true, "cor1.2.i".into()));
    }
    if let Kind::A { .. } = res.kind {
        if r >= 5 && r != spec.p && c_value(spec, r)? as u64 == r - 1 {
            return Ok(verdict(true, "cor1.2.ii".into()));
        }
    }
    let key = match &res.kind {
        Kind::A { .. } => Some("A".to_string()),
        Kind::B(row) => Some(row.id.clone()),
        Kind::Low(row) => Some(format!("lowdim:{}", row.id)),
        Kind::S => None,
    };
    if let Some(key) = key.filter(|_| r == 2 || r == 3) {
        for row in t.small_r_rows(&key, r) {
            if row.cond.eval(&res.env)? {
                return Ok(verdict(true, format!("cor1.2.iii:{key}")));
            }
        }
    }
    Ok(verdict(false, "cor1.2".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubfieldVariant {
    C5,
    C8,
}

fn d_lambda_gcds_agree(n: u32, p: u64, m1: impl Fn(u64) -> u64, m2: impl Fn(u64) -> u64) -> (bool, bool) {
    let mut agree = true;
    let mut nontrivial = false;
    for lam in p_bounded_partitions(n, p.min(n as u64) as u32) {
        let d = lam.d();
        let g1 = gcd(d, m1(d));
        agree &= g1 == gcd(d, m2(d));
        nontrivial |= g1 > 1;
    }
    (agree, nontrivial)
}

/// `(x - s) mod d` for a sign `s`, as a nonnegative residue.
fn minus_sign(x: u64, s: i8, d: u64) -> u64 {
    if s > 0 {
        (x + d - 1 % d) % d
    } else {
        (x + 1) % d
    }
}

/// The subfield clauses of the counting corollary for `r > 5`, `n > 5`.
///
/// `C5`: `q = q0^k` with `k` an odd prime; fires for `r = k`, and for
/// `r = p` subject to the partition conditions when `T` is linear or
/// unitary (`eps` given). `C8`: `T = PSL_n(q0^2)` with `n` odd and `r = p`.
#[allow(clippy::too_many_arguments)]
pub fn decide_subfield_corollary(
    n: u32,
    p: u64,
    q0: u64,
    k: u32,
    eps: Option<i8>,
    r: u64,
    variant: SubfieldVariant,
) -> Result<bool> {
    if crate::numth::prime_power(q0).map(|x| x.0) != Some(p) {
        return Err(Error::pre(format!("q0 = {q0} is not a power of p = {p}")));
    }
    if !is_prime(r) {
        return Err(Error::pre(format!("r = {r} is not prime")));
    }
    match variant {
        SubfieldVariant::C5 => {
            if k % 2 == 0 || !is_prime(k as u64) {
                return Err(Error::pre("C5 needs an odd prime k"));
            }
            if r == k as u64 {
                return Ok(true);
            }
            if r != p {
                return Ok(false);
            }
            let Some(e) = eps else { return Ok(true) };
            let (a, nontrivial) = d_lambda_gcds_agree(
                n,
                p,
                |d| minus_sign(pow_mod(q0 % d, k as u64, d), e, d),
                |d| minus_sign(q0 % d, e, d),
            );
            let b = !nontrivial
                || k as u64 >= p
                || gcd(k as u64, gcd(n as u64, minus_sign(q0 % n as u64, e, n as u64))) == 1;
            Ok(a && b)
        }
        SubfieldVariant::C8 => {
            if n % 2 == 0 {
                return Err(Error::pre("C8 needs n odd"));
            }
            if eps.is_some_and(|e| e < 0) {
                return Err(Error::pre("C8 applies to the linear groups"));
            }
            if r != p {
                return Ok(false);
            }
            let (a, _) = d_lambda_gcds_agree(n, p, |d| minus_sign(pow_mod(q0 % d, 2, d), 1, d), |d| (q0 + 1) % d);
            Ok(a)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covered {
    pub label: ClassLabel,
    pub cycle_types: Vec<CycleType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub d: u32,
    pub p: u64,
    pub r: u64,
    pub spec: GroupSpec,
    pub h0: H0,
    pub covered: Vec<Covered>,
    pub uncovered: Vec<ClassLabel>,
    /// Images of cycle types that match no enumerated class.
    pub unmatched: Vec<Covered>,
    /// Whether the class list was enumerated in full.
    pub complete: bool,
    pub elusive: bool,
}

fn normalise(l: &ClassLabel) -> ClassLabel {
    match l {
        ClassLabel::Unipotent { p, jordan, decoration, .. } => {
            ClassLabel::Unipotent { p: *p, jordan: jordan.clone(), decoration: *decoration, classes: 1 }
        }
        other => other.clone(),
    }
}

/// Which classes of elements of order `r` in `T` meet `H_0`, by fusing
/// every cycle type `(r^h, 1^(d-rh))` of `H_0` into `T`.
pub fn a_collection_coverage(d: u32, p: u64, r: u64) -> Result<CoverageReport> {
    let spec = a_target(d, p)?;
    if !is_prime(r) || r as u32 > d {
        return Err(Error::pre(format!("need a prime r <= d, got r = {r}")));
    }
    let h0 = h0_structure(d, p)?;
    let mut images: Vec<Covered> = Vec::new();
    for h in 1..=d / r as u32 {
        let ct = CycleType::new(r, h, d - h * r as u32)?;
        if h0 == H0::Alternating && !ct.is_even() {
            continue;
        }
        let label = normalise(&fuse_cycle_type(&ct, d, p, &spec)?);
        match images.iter_mut().find(|c| c.label == label) {
            Some(c) => c.cycle_types.push(ct),
            None => images.push(Covered { label, cycle_types: vec![ct] }),
        }
    }
    let limit = if enumeration_feasible(&spec, r) { usize::MAX } else { images.len() + 16 };
    let (classes, complete) = enumerate_element_classes_bounded(&spec, r, limit)?;
    let classes: Vec<ClassLabel> = classes.iter().map(normalise).collect();
    let mut covered = Vec::new();
    let mut uncovered = Vec::new();
    for l in &classes {
        match images.iter().find(|c| &c.label == l) {
            Some(c) => covered.push(c.clone()),
            None => uncovered.push(l.clone()),
        }
    }
    let unmatched: Vec<Covered> = images.into_iter().filter(|c| !classes.contains(&c.label)).collect();
    if !complete && uncovered.is_empty() {
        return Err(Error::unsupported(format!("too many classes of order {r} in {spec} to enumerate")));
    }
    let elusive = uncovered.is_empty();
    Ok(CoverageReport { d, p, r, spec, h0, covered, uncovered, unmatched, complete, elusive })
}
