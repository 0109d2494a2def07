//! Classical group descriptors, their orders, the `c` invariant attached to
//! an odd prime, and the counting rules for classes of order-`r` subgroups.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numth::{gcd, is_prime, phi_rq, valuation_big};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PSU")]
    Psu,
    #[serde(rename = "PSp")]
    Psp,
    #[serde(rename = "POmegaPlus")]
    POmegaPlus,
    #[serde(rename = "POmegaMinus")]
    POmegaMinus,
    #[serde(rename = "OmegaOdd")]
    OmegaOdd,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Psl, Family::Psu, Family::Psp, Family::POmegaPlus, Family::POmegaMinus, Family::OmegaOdd];

    pub fn name(self) -> &'static str {
        match self {
            Family::Psl => "PSL",
            Family::Psu => "PSU",
            Family::Psp => "PSp",
            Family::POmegaPlus => "POmegaPlus",
            Family::POmegaMinus => "POmegaMinus",
            Family::OmegaOdd => "OmegaOdd",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        let f = match s {
            "PSL" | "L" => Family::Psl,
            "PSU" | "U" => Family::Psu,
            "PSp" | "S" => Family::Psp,
            "POmegaPlus" | "O+" => Family::POmegaPlus,
            "POmegaMinus" | "O-" => Family::POmegaMinus,
            "OmegaOdd" | "O" => Family::OmegaOdd,
            _ => return Err(Error::pre(format!("unknown family `{s}`"))),
        };
        Ok(f)
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Family::POmegaPlus | Family::POmegaMinus | Family::OmegaOdd)
    }

    /// The sign of the form where it has one: linear counts as `+`,
    /// unitary as `-`, and the two even orthogonal types by their type.
    pub fn epsilon(self) -> Option<i8> {
        match self {
            Family::Psl | Family::POmegaPlus => Some(1),
            Family::Psu | Family::POmegaMinus => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A finite simple classical group `T` with natural module of dimension `n`
/// over the field of order `q = p^f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: u32,
    pub p: u64,
    pub f: u32,
}

impl GroupSpec {
    pub fn new(family: Family, n: u32, p: u64, f: u32) -> Result<Self> {
        let spec = GroupSpec { family, n, p, f };
        spec.validate()?;
        Ok(spec)
    }

    /// Build from `q` directly.
    pub fn with_q(family: Family, n: u32, q: u64) -> Result<Self> {
        let (p, f) = crate::numth::prime_power(q).ok_or_else(|| Error::pre(format!("q = {q} is not a prime power")))?;
        Self::new(family, n, p, f)
    }

    pub fn validate(&self) -> Result<()> {
        let GroupSpec { family, n, p, f } = *self;
        if !is_prime(p) {
            return Err(Error::pre(format!("p = {p} is not prime")));
        }
        if f == 0 || p.checked_pow(f).is_none() {
            return Err(Error::pre("field exponent out of range"));
        }
        let q = p.pow(f);
        let bad = |why: &str| Err(Error::pre(format!("{family}({n}, {q}): {why}")));
        match family {
            Family::Psl => {
                if n < 2 {
                    return bad("n must be at least 2");
                }
                if n == 2 && q <= 3 {
                    return bad("not simple");
                }
            }
            Family::Psu => {
                if n < 3 {
                    return bad("n must be at least 3");
                }
                if n == 3 && q == 2 {
                    return bad("not simple");
                }
            }
            Family::Psp => {
                if n < 4 || n % 2 == 1 {
                    return bad("n must be even and at least 4");
                }
            }
            Family::POmegaPlus | Family::POmegaMinus => {
                if n < 8 || n % 2 == 1 {
                    return bad("n must be even and at least 8");
                }
            }
            Family::OmegaOdd => {
                if n < 7 || n % 2 == 0 {
                    return bad("n must be odd and at least 7");
                }
                if p == 2 {
                    return bad("odd-dimensional orthogonal groups need odd p");
                }
            }
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn epsilon(&self) -> Option<i8> {
        self.family.epsilon()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.family.is_orthogonal()
    }

    /// Preferred descriptor for the small exceptional isomorphisms.
    /// `PSp4(2)` is read as its derived group `A6 = PSL2(9)`, and
    /// `PSL2(4) = A5` is mapped to `PSL2(5)`.
    pub fn canonical(&self) -> GroupSpec {
        match (self.family, self.n, self.q()) {
            (Family::Psp, 4, 2) => GroupSpec { family: Family::Psl, n: 2, p: 3, f: 2 },
            (Family::Psl, 2, 4) => GroupSpec { family: Family::Psl, n: 2, p: 5, f: 1 },
            _ => *self,
        }
    }

    pub fn label(&self) -> String {
        format!("{}({}, {})", self.family, self.n, self.q())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn big_pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// `q^k - s` for a sign `s`, as a big integer.
fn qk_minus(q: u64, k: u32, s: i8) -> BigUint {
    let x = big_pow(q, k);
    if s > 0 {
        x - 1u32
    } else {
        x + 1u32
    }
}

/// Order of the simple group described by `spec`.
pub fn group_order(spec: &GroupSpec) -> Result<BigUint> {
    spec.validate()?;
    let GroupSpec { family, n, .. } = *spec;
    let q = spec.q();
    if (family, n, q) == (Family::Psp, 4, 2) {
        return Ok(BigUint::from(360u32));
    }
    let ord = match family {
        Family::Psl | Family::Psu => {
            let eps: i8 = if family == Family::Psl { 1 } else { -1 };
            let mut o = big_pow(q, n * (n - 1) / 2);
            for i in 2..=n {
                let s = if eps < 0 && i % 2 == 1 { -1 } else { 1 };
                o *= qk_minus(q, i, s);
            }
            let z = if eps > 0 { gcd(n as u64, q - 1) } else { gcd(n as u64, q + 1) };
            o / BigUint::from(z)
        }
        Family::Psp | Family::OmegaOdd => {
            let m = n / 2;
            let mut o = big_pow(q, m * m);
            for i in 1..=m {
                o *= qk_minus(q, 2 * i, 1);
            }
            o / BigUint::from(gcd(2, q - 1))
        }
        Family::POmegaPlus | Family::POmegaMinus => {
            let m = n / 2;
            let s: i8 = if family == Family::POmegaPlus { 1 } else { -1 };
            let mut o = big_pow(q, m * (m - 1));
            let top = qk_minus(q, m, s);
            o *= &top;
            for i in 1..m {
                o *= qk_minus(q, 2 * i, 1);
            }
            o / BigUint::from(gcd(4, crate::numth::big_mod(&top, 4)))
        }
    };
    Ok(ord)
}

/// The `c` invariant of an odd prime `r != p`.
pub fn c_value(spec: &GroupSpec, r: u64) -> Result<u32> {
    if r == 2 {
        return Err(Error::pre("c is undefined for r = 2"));
    }
    if r == spec.p {
        return Err(Error::pre("c is undefined for r = p"));
    }
    let i = phi_rq(r, spec.q())?;
    Ok(c_from_i(spec.family, i))
}

pub fn c_from_i(family: Family, i: u32) -> u32 {
    if i % 2 == 1 && family != Family::Psl {
        2 * i
    } else if i % 4 == 2 && family == Family::Psu {
        i / 2
    } else {
        i
    }
}

/// Bounds on the number of classes of subgroups of order `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaReport {
    pub exact: Option<u64>,
    pub lower: u64,
    pub upper: Option<u64>,
    pub m: u32,
    pub delta: u32,
    pub c: u32,
    pub rule: Vec<String>,
}

impl KappaReport {
    pub fn contains(&self, k: u64) -> bool {
        k >= self.lower && self.upper.is_none_or(|u| k <= u) && self.exact.is_none_or(|e| e == k)
    }
}

fn require_divides(spec: &GroupSpec, r: u64) -> Result<()> {
    if valuation_big(&group_order(spec)?, r) == 0 {
        return Err(Error::pre(format!("{r} does not divide |{spec}|")));
    }
    Ok(())
}

/// Counting rules for `κ(T, r)` with `r` an odd prime other than `p`.
///
/// The floor rules need `c >= 2`. For `c = 1` only the two small linear and
/// unitary bounds with `n` in `{3, 4}` are available, and the lower bound
/// degrades to the trivial one.
pub fn kappa_rules(spec: &GroupSpec, r: u64) -> Result<KappaReport> {
    let c = c_value(spec, r)?;
    require_divides(spec, r)?;
    let n = spec.n;
    let q = spec.q();
    let lin = matches!(spec.family, Family::Psl | Family::Psu);
    let small = lin && r >= 5 && (q % r == 1 || q % r == r - 1);
    let mut rule = Vec::new();
    let mut upper: Option<u64> = None;
    let mut tighten = |u: u64, tag: &str, rule: &mut Vec<String>| {
        upper = Some(upper.map_or(u, |x| x.min(u)));
        rule.push(tag.to_string());
    };

    if c < 2 {
        if !(small && (n == 3 || n == 4)) {
            return Err(Error::pre(format!("c = {c} < 2; use exact enumeration")));
        }
        let u = if n == 3 { r - 1 } else { (r * r - 3 * r + 6) / 2 };
        tighten(u, if n == 3 { "upper:n3-c1" } else { "upper:n4-c1" }, &mut rule);
        return Ok(KappaReport { exact: None, lower: 1, upper, m: n, delta: 0, c, rule });
    }

    let m = n / c;
    let delta = u32::from(spec.is_orthogonal() && n == m * c);
    let mut exact = None;
    if m == 1 || (spec.family == Family::POmegaMinus && 2 * c == n) {
        exact = Some(1);
        rule.push("exact:one".into());
    }
    if m == 2 && !(spec.family == Family::POmegaPlus && 2 * c == n) {
        tighten((r - 1) / c as u64 + 1, "upper:m-two", &mut rule);
    }
    if small && n == 6 && c == 2 {
        tighten((r * r + 15) / 8, "upper:n6-c2", &mut rule);
    }
    let lower = (m - delta) as u64;
    rule.push("lower:m-minus-delta".into());
    if let Some(1) = exact {
        upper = Some(1);
    }
    Ok(KappaReport { exact, lower, upper, m, delta, c, rule })
}

/// Strict growth of `κ` between a small and a much larger group, checked by
/// exact enumeration on both sides.
pub fn kappa_monotone_check(spec1: &GroupSpec, spec2: &GroupSpec, r: u64) -> Result<bool> {
    if spec2.n <= 2 * spec1.n {
        return Err(Error::pre("need n2 > 2 n1"));
    }
    let c1 = c_value(spec1, r)?;
    let c2 = c_value(spec2, r)?;
    if c1 < c2 {
        return Err(Error::pre(format!("need c1 >= c2, got {c1} < {c2}")));
    }
    let k1 = crate::classes::kappa_exact(spec1, r)?;
    let k2 = crate::classes::kappa_exact(spec2, r)?;
    Ok(k2 > k1)
}

/// Order data for socles that are not classical groups with a natural
/// module in this crate, loaded from a TOML table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SocleEntry {
    pub name: String,
    #[serde(default)]
    pub order: Option<String>,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub factors: Vec<String>,
    #[serde(default)]
    pub divisor: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SocleTable {
    pub version: u32,
    #[serde(rename = "socle")]
    pub entries: Vec<SocleEntry>,
}

pub const SOCLES_TOML: &str = include_str!("../data/socles.toml");

impl SocleTable {
    pub fn builtin() -> SocleTable {
        Self::parse(SOCLES_TOML).expect("bundled socle table parses")
    }

    pub fn parse(text: &str) -> Result<SocleTable> {
        toml::from_str(text).map_err(|e| Error::Table { row: "socles".into(), msg: e.to_string() })
    }

    pub fn get(&self, name: &str) -> Option<&SocleEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Order of the named socle. `q`, `q0` and `eps` bind the symbols used
    /// by Lie-type entries.
    pub fn order(&self, name: &str, q: u64, q0: Option<u64>, eps: i8) -> Result<BigUint> {
        let e = self.get(name).ok_or_else(|| Error::Table { row: name.into(), msg: "unknown socle".into() })?;
        let err = |msg: String| Error::Table { row: name.into(), msg };
        if let Some(o) = &e.order {
            return o.parse::<BigUint>().map_err(|x| err(x.to_string()));
        }
        let x = match e.field.as_deref() {
            Some("q0") => q0.ok_or_else(|| err("needs q0".into()))?,
            _ => q,
        };
        let mut acc = BigUint::one();
        let mut den = BigUint::one();
        for fct in &e.factors {
            match fct.strip_prefix('/') {
                Some(d) => den *= eval_factor(d, x, eps).map_err(err)?,
                None => acc *= eval_factor(fct, x, eps).map_err(err)?,
            }
        }
        acc /= den;
        if let Some(d) = &e.divisor {
            let dv = eval_gcd(d, x, eps).map_err(err)?;
            acc /= BigUint::from(dv);
        }
        Ok(acc)
    }
}

/// `q^k`, `q^k-1`, `q^k+1`, `q^k-e` or `q^k+e`. A leading `/` in the
/// table divides by the factor instead.
fn eval_factor(s: &str, x: u64, eps: i8) -> std::result::Result<BigUint, String> {
    let s = s.replace(' ', "");
    let rest = s.strip_prefix("q^").ok_or_else(|| format!("bad factor `{s}`"))?;
    let split = rest.find(['+', '-']).unwrap_or(rest.len());
    let k: u32 = rest[..split].parse().map_err(|_| format!("bad exponent in `{s}`"))?;
    let base = big_pow(x, k);
    Ok(match &rest[split..] {
        "" => base,
        "-1" => base - 1u32,
        "+1" => base + 1u32,
        "-e" => {
            if eps > 0 {
                base - 1u32
            } else {
                base + 1u32
            }
        }
        "+e" => {
            if eps > 0 {
                base + 1u32
            } else {
                base - 1u32
            }
        }
        t => return Err(format!("bad tail `{t}` in `{s}`")),
    })
}

/// `gcd(a,q-1)`, `gcd(a,q+1)`, `gcd(a,q-e)`.
fn eval_gcd(s: &str, x: u64, eps: i8) -> std::result::Result<u64, String> {
    let s = s.replace(' ', "");
    let inner = s.strip_prefix("gcd(").and_then(|t| t.strip_suffix(')')).ok_or_else(|| format!("bad divisor `{s}`"))?;
    let (a, rhs) = inner.split_once(',').ok_or_else(|| format!("bad divisor `{s}`"))?;
    let a: u64 = a.parse().map_err(|_| format!("bad divisor `{s}`"))?;
    let v = match rhs {
        "q-1" => x - 1,
        "q+1" => x + 1,
        "q-e" => {
            if eps > 0 {
                x - 1
            } else {
                x + 1
            }
        }
        "q+e" => {
            if eps > 0 {
                x + 1
            } else {
                x - 1
            }
        }
        _ => return Err(format!("bad divisor `{s}`")),
    };
    Ok(gcd(a, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: Family, n: u32, q: u64) -> GroupSpec {
        GroupSpec::with_q(f, n, q).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(group_order(&g(Family::Psl, 2, 7)).unwrap(), BigUint::from(168u32));
        assert_eq!(group_order(&g(Family::Psl, 2, 4)).unwrap(), BigUint::from(60u32));
        let o = group_order(&g(Family::Psp, 10, 3)).unwrap();
        assert_eq!(valuation_big(&o, 11), 2);
        assert_eq!(group_order(&g(Family::Psu, 4, 3)).unwrap(), BigUint::from(3265920u32));
        assert_eq!(group_order(&g(Family::Psu, 5, 2)).unwrap(), BigUint::from(13685760u32));
        assert_eq!(group_order(&g(Family::POmegaPlus, 8, 2)).unwrap(), BigUint::from(174182400u32));
        assert_eq!(group_order(&g(Family::Psp, 6, 2)).unwrap(), BigUint::from(1451520u32));
        assert_eq!(group_order(&g(Family::Psp, 4, 2)).unwrap(), BigUint::from(360u32));
    }

    #[test]
    fn validation() {
        assert!(GroupSpec::with_q(Family::Psl, 2, 3).is_err());
        assert!(GroupSpec::with_q(Family::OmegaOdd, 7, 8).is_err());
        assert!(GroupSpec::with_q(Family::POmegaMinus, 6, 3).is_err());
        assert!(GroupSpec::with_q(Family::Psp, 5, 3).is_err());
        let s = g(Family::Psp, 4, 2);
        assert_eq!(s.canonical(), g(Family::Psl, 2, 9));
    }

    #[test]
    fn c_examples() {
        for n in 2..6 {
            let s = g(Family::Psl, n, 7);
            assert_eq!(c_value(&s, 5).unwrap(), phi_rq(5, 7).unwrap());
        }
        // 4 has order 3 modulo 7, so i = 3 and the symplectic c doubles it.
        assert_eq!(c_value(&g(Family::Psp, 6, 4), 7).unwrap(), 6);
        assert_eq!(c_value(&g(Family::OmegaOdd, 15, 19), 7).unwrap(), 6);
        assert!(c_value(&g(Family::Psl, 3, 7), 7).is_err());
        assert!(c_value(&g(Family::Psl, 3, 7), 2).is_err());
    }

    #[test]
    fn kappa_examples() {
        let k = kappa_rules(&g(Family::POmegaMinus, 12, 2), 7).unwrap();
        assert_eq!(k.c, 6);
        assert_eq!(k.exact, Some(1));
        let k = kappa_rules(&g(Family::OmegaOdd, 15, 19), 7).unwrap();
        assert_eq!((k.lower, k.m, k.delta), (2, 2, 0));
        let k = kappa_rules(&g(Family::Psl, 4, 16), 17).unwrap();
        assert_eq!((k.m, k.upper), (2, Some(9)));
    }

    #[test]
    fn socle_table() {
        let t = SocleTable::builtin();
        assert_eq!(t.order("M11", 0, None, 1).unwrap(), BigUint::from(7920u32));
        // G2(2) has order 12096.
        assert_eq!(t.order("G2", 2, None, 1).unwrap(), BigUint::from(12096u32));
        // 3D4(2) has order 211341312.
        assert_eq!(t.order("3D4", 8, Some(2), 1).unwrap(), BigUint::from(211341312u64));
        assert_eq!(t.order("PSL3e", 4, None, 1).unwrap(), group_order(&g(Family::Psl, 3, 4)).unwrap());
        assert_eq!(t.order("PSL3e", 5, None, -1).unwrap(), group_order(&g(Family::Psu, 3, 5)).unwrap());
    }

    #[test]
    fn c_for_primes_minus_one_mod_605() {
        // p = -1 mod 11 puts 11 in p + 1, so c = 2 whatever the higher
        // congruences; 121 | p^2 - 1 as needed for the counting bound.
        let p = (1..).map(|k| 605 * k - 1).find(|&p| crate::numth::is_prime(p)).unwrap();
        let t = g(Family::POmegaPlus, 12, p);
        assert_eq!(c_value(&t, 11).unwrap(), 2);
        assert_eq!((p * p - 1) % 121, 0);
    }
}
