//! Loading and validation of the condition tables in `data/`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::dsl::{parse_arith, parse_condition, Arith, Expr};
use crate::error::{Error, Result};
use crate::groups::{Family, SocleTable};

pub const DATA_DIR_ENV: &str = "ELUSIVE_DATA_DIR";

pub const FILES: [&str; 6] =
    ["table_a.toml", "table_b.toml", "lowdim.toml", "b_elusive.toml", "small_r.toml", "socles.toml"];

const BUILTIN: [&str; 6] = [
    include_str!("../../data/table_a.toml"),
    include_str!("../../data/table_b.toml"),
    include_str!("../../data/lowdim.toml"),
    include_str!("../../data/b_elusive.toml"),
    include_str!("../../data/small_r.toml"),
    include_str!("../../data/socles.toml"),
];

// Raw file shapes.

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ARowRaw {
    pub id: String,
    pub when: String,
    pub family: String,
    pub n: String,
    #[serde(default)]
    pub plus_if: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BRowRaw {
    pub id: String,
    pub targets: Vec<String>,
    pub exists: String,
    pub socle: String,
    #[serde(default)]
    pub socle_p2: Option<String>,
    #[serde(default)]
    pub ext2: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowRowRaw {
    pub id: String,
    pub families: Vec<String>,
    pub n: u32,
    pub socle: String,
    pub exists: String,
    #[serde(default)]
    pub ext2: Option<String>,
    pub elusive: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CondRowRaw {
    #[serde(alias = "case")]
    pub id: String,
    pub r: u64,
    pub cond: String,
}

#[derive(Debug, Deserialize)]
struct File<T> {
    version: u32,
    row: Vec<T>,
}

// Parsed rows.

#[derive(Debug, Clone)]
pub struct ARow {
    pub id: String,
    pub when: Expr,
    /// `None` for the two-type orthogonal rows, which use `plus_if`.
    pub family: Option<Family>,
    pub n: Arith,
    pub plus_if: Option<Expr>,
}

#[derive(Debug, Clone)]
pub struct BRow {
    pub id: String,
    pub targets: Vec<(Family, u32)>,
    pub exists: Expr,
    pub socle: String,
    pub socle_p2: Option<String>,
    pub ext2: Option<Expr>,
}

#[derive(Debug, Clone)]
pub struct LowRow {
    pub id: String,
    pub families: Vec<Family>,
    pub n: u32,
    pub socle: String,
    pub exists: Expr,
    pub ext2: Option<Expr>,
    pub elusive: BTreeMap<u64, Expr>,
}

#[derive(Debug, Clone)]
pub struct CondRow {
    pub id: String,
    pub r: u64,
    pub cond: Expr,
}

#[derive(Debug, Clone)]
pub struct Tables {
    pub a: Vec<ARow>,
    pub b: Vec<BRow>,
    pub lowdim: Vec<LowRow>,
    pub b_elusive: Vec<CondRow>,
    pub small_r: Vec<CondRow>,
    pub socles: SocleTable,
}

fn table_err(row: &str, e: impl std::fmt::Display) -> Error {
    Error::Table { row: row.to_string(), msg: e.to_string() }
}

fn cond(row: &str, src: &str) -> Result<Expr> {
    parse_condition(src).map_err(|e| table_err(row, e))
}

fn read<T: for<'de> Deserialize<'de>>(name: &str, text: &str) -> Result<Vec<T>> {
    let f: File<T> = toml::from_str(text).map_err(|e| table_err(name, e))?;
    if f.version != 1 {
        return Err(table_err(name, format!("unsupported version {}", f.version)));
    }
    Ok(f.row)
}

fn parse_target(row: &str, s: &str) -> Result<(Family, u32)> {
    let (f, n) = s.split_once(' ').ok_or_else(|| table_err(row, format!("bad target `{s}`")))?;
    let fam = Family::parse(f).map_err(|e| table_err(row, e))?;
    let n = n.trim().parse().map_err(|e| table_err(row, e))?;
    Ok((fam, n))
}

impl Tables {
    /// Parse the six files, given as text in the order of [`FILES`].
    pub fn parse(texts: [&str; 6]) -> Result<Tables> {
        let mut a = Vec::new();
        for r in read::<ARowRaw>(FILES[0], texts[0])? {
            let family = match r.family.as_str() {
                "POmega" => None,
                f => Some(Family::parse(f).map_err(|e| table_err(&r.id, e))?),
            };
            if family.is_none() != r.plus_if.is_some() {
                return Err(table_err(&r.id, "plus_if goes with family POmega only"));
            }
            a.push(ARow {
                when: cond(&r.id, &r.when)?,
                family,
                n: parse_arith(&r.n).map_err(|e| table_err(&r.id, e))?,
                plus_if: r.plus_if.as_deref().map(|s| cond(&r.id, s)).transpose()?,
                id: r.id,
            });
        }
        let socles = SocleTable::parse(texts[5])?;
        let known = |row: &str, s: &str| {
            socles.get(s).map(|_| ()).ok_or_else(|| table_err(row, format!("unknown socle `{s}`")))
        };
        let mut b = Vec::new();
        for r in read::<BRowRaw>(FILES[1], texts[1])? {
            known(&r.id, &r.socle)?;
            if let Some(s) = &r.socle_p2 {
                known(&r.id, s)?;
            }
            b.push(BRow {
                targets: r.targets.iter().map(|t| parse_target(&r.id, t)).collect::<Result<_>>()?,
                exists: cond(&r.id, &r.exists)?,
                ext2: r.ext2.as_deref().map(|s| cond(&r.id, s)).transpose()?,
                socle: r.socle,
                socle_p2: r.socle_p2,
                id: r.id,
            });
        }
        let mut lowdim = Vec::new();
        for r in read::<LowRowRaw>(FILES[2], texts[2])? {
            known(&r.id, &r.socle)?;
            let mut elusive = BTreeMap::new();
            for (k, v) in &r.elusive {
                let rr: u64 = k.parse().map_err(|e| table_err(&r.id, e))?;
                elusive.insert(rr, cond(&r.id, v)?);
            }
            lowdim.push(LowRow {
                families: r
                    .families
                    .iter()
                    .map(|f| Family::parse(f).map_err(|e| table_err(&r.id, e)))
                    .collect::<Result<_>>()?,
                n: r.n,
                exists: cond(&r.id, &r.exists)?,
                ext2: r.ext2.as_deref().map(|s| cond(&r.id, s)).transpose()?,
                elusive,
                socle: r.socle,
                id: r.id,
            });
        }
        let conds = |name: &str, text: &str| -> Result<Vec<CondRow>> {
            read::<CondRowRaw>(name, text)?
                .into_iter()
                .map(|r| Ok(CondRow { cond: cond(&r.id, &r.cond)?, r: r.r, id: r.id }))
                .collect()
        };
        let t =
            Tables { a, b, lowdim, b_elusive: conds(FILES[3], texts[3])?, small_r: conds(FILES[4], texts[4])?, socles };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        for r in &self.b_elusive {
            if self.b_row(&r.id).is_none() {
                return Err(table_err(&r.id, "elusive row names an unknown B case"));
            }
        }
        for r in &self.small_r {
            let ok = r.id == "A"
                || self.b_row(&r.id).is_some()
                || r.id.strip_prefix("lowdim:").is_some_and(|id| self.lowdim_row(id).is_some());
            if !ok {
                return Err(table_err(&r.id, "unknown case"));
            }
            if r.r != 2 && r.r != 3 {
                return Err(table_err(&r.id, "small-prime rows need r in {2, 3}"));
            }
        }
        Ok(())
    }

    pub fn builtin() -> Tables {
        Tables::parse(BUILTIN).expect("bundled tables parse")
    }

    /// Read every file from `dir`, falling back to the bundled copy for
    /// files that are missing.
    pub fn load(dir: &Path) -> Result<Tables> {
        let mut owned = Vec::new();
        for (name, builtin) in FILES.iter().zip(BUILTIN) {
            let path = dir.join(name);
            owned.push(if path.exists() {
                std::fs::read_to_string(&path).map_err(|e| table_err(name, e))?
            } else {
                builtin.to_string()
            });
        }
        Tables::parse(std::array::from_fn(|k| owned[k].as_str()))
    }

    /// The tables in use: the directory named by `ELUSIVE_DATA_DIR` when set,
    /// else the bundled data. Loaded once per process.
    pub fn global() -> Result<&'static Tables> {
        static CELL: OnceLock<Result<Tables>> = OnceLock::new();
        CELL.get_or_init(|| match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => Tables::load(Path::new(&dir)),
            None => Ok(Tables::builtin()),
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    pub fn b_row(&self, id: &str) -> Option<&BRow> {
        self.b.iter().find(|r| r.id == id)
    }

    pub fn lowdim_row(&self, id: &str) -> Option<&LowRow> {
        self.lowdim.iter().find(|r| r.id == id)
    }

    pub fn b_condition(&self, id: &str, r: u64) -> Option<&Expr> {
        self.b_elusive.iter().find(|x| x.id == id && x.r == r).map(|x| &x.cond)
    }

    pub fn small_r_rows(&self, case: &str, r: u64) -> impl Iterator<Item = &CondRow> {
        let case = case.to_string();
        self.small_r.iter().filter(move |x| x.id == case && x.r == r)
    }
}
