//! `elusive`: command-line front end for the engine and the oracle.
//!
//! Every subcommand prints one JSON document on stdout, or a plain-text
//! rendering with `--human`. Exit status is 0 on success, 2 when the query
//! is rejected and 1 on internal failure or a failed verification.

mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use elusive_core::classes::{enumerate_element_classes_bounded, enumeration_feasible, kappa_exact, ClassLabel};
use elusive_core::decide::tables::{Tables, FILES};
use elusive_core::decide::{a_collection_coverage, a_target, decide_elusive, decide_kappa_corollary};
use elusive_core::delperm::{eigen_multiplicity, fuse_cycle_type, CycleType};
use elusive_core::groups::{group_order, kappa_rules};
use elusive_core::numth::{primes_up_to, valuation_big};
use elusive_core::{CoverageReport, Error, Family, GroupSpec, KappaReport, SubgroupCase, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "elusive", version, about = "Prime-order derangements in classical groups")]
struct Cli {
    /// Plain-text output instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// PSL, PSU, PSp, POmegaPlus, POmegaMinus or OmegaOdd.
    #[arg(long, value_parser = |s: &str| Family::parse(s))]
    family: Family,
    /// Dimension of the natural module.
    #[arg(short = 'n')]
    n: u32,
    /// Field size; give either this or `-p` with `-f`.
    #[arg(short = 'q', conflicts_with_all = ["p", "f"])]
    q: Option<u64>,
    #[arg(short = 'p')]
    p: Option<u64>,
    #[arg(short = 'f', default_value_t = 1)]
    f: u32,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec, Error> {
        match (self.q, self.p) {
            (Some(q), _) => GroupSpec::with_q(self.family, self.n, q),
            (None, Some(p)) => GroupSpec::new(self.family, self.n, p, self.f),
            (None, None) => Err(Error::pre("give -q or -p")),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide r-elusivity for a subgroup case.
    Decide {
        #[command(flatten)]
        group: GroupArgs,
        /// `A:d=<int>`, `B:<row>`, `lowdim:<row>` or `S:<name>,order=<int>`.
        #[arg(long)]
        case: String,
        #[arg(short = 'r')]
        r: u64,
        /// Decide by counting classes of subgroups of order r instead.
        #[arg(long)]
        corollary: bool,
    },
    /// Counting rules for the number of classes of subgroups of order r.
    Kappa {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'r')]
        r: u64,
    },
    /// Classes of elements of order r.
    Classes {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'r')]
        r: u64,
        /// Stop after this many semisimple labels.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Class of a permutation of shape r^h,1^s on the deleted permutation module.
    Fuse {
        /// Cycle type such as `3^2,1^2`.
        #[arg(long)]
        cycle: String,
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'p')]
        p: u64,
    },
    /// Which order-r classes of the target meet the alternating or symmetric group.
    Coverage {
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'p')]
        p: u64,
        /// One prime; all primes up to d when omitted.
        #[arg(short = 'r')]
        r: Option<u64>,
    },
    /// Cross-check the engine against the brute-force oracle.
    Verify(verify::VerifyArgs),
    /// Dump or validate the condition tables.
    Tables {
        #[arg(value_enum)]
        action: TablesAction,
        /// Directory holding the table files; the bundled copy otherwise.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TablesAction {
    Dump,
    Validate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideOutput {
    pub group: GroupSpec,
    pub case: SubgroupCase,
    pub r: u64,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaOutput {
    pub group: GroupSpec,
    pub r: u64,
    pub rules: Option<KappaReport>,
    /// Why the rules do not apply, when they do not.
    pub rules_error: Option<String>,
    /// The count by enumeration, when that is cheap enough.
    pub exact: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassesOutput {
    pub group: GroupSpec,
    pub r: u64,
    pub complete: bool,
    pub classes: Vec<ClassLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuseOutput {
    pub cycle: CycleType,
    pub d: u32,
    pub p: u64,
    pub group: GroupSpec,
    pub label: ClassLabel,
    pub jordan: Option<Vec<u32>>,
    /// Multiplicity of each nontrivial root and of 1, for odd r other than p.
    pub eigen: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageOutput {
    pub d: u32,
    pub p: u64,
    pub reports: Vec<CoverageReport>,
}

/// A rendered result: the JSON document and its plain-text form.
pub struct Output {
    json: Value,
    text: String,
    ok: bool,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String) -> Output {
        Output { json: serde_json::to_value(value).expect("output serialises"), text, ok: true }
    }
}

fn decide(group: &GroupArgs, case: &str, r: u64, corollary: bool) -> Result<Output, Error> {
    let spec = group.spec()?;
    let case: SubgroupCase = case.parse()?;
    let verdict = if corollary { decide_kappa_corollary(&spec, &case, r)? } else { decide_elusive(&spec, &case, r)? };
    let mut text = format!(
        "{spec}, {case}, r = {r}: {} ({})",
        if verdict.elusive { "elusive" } else { "not elusive" },
        verdict.rule
    );
    if let Some(w) = &verdict.witness {
        text += &format!("\nderangement class {w}");
    }
    if let Some(b) = &verdict.witness_basis {
        text += &format!("\nbasis: {b}");
    }
    Ok(Output::new(&DecideOutput { group: spec, case, r, verdict }, text))
}

fn kappa(group: &GroupArgs, r: u64) -> Result<Output, Error> {
    let spec = group.spec()?;
    if valuation_big(&group_order(&spec)?, r) == 0 {
        return Err(Error::pre(format!("{r} does not divide |{spec}|")));
    }
    let rules = kappa_rules(&spec, r);
    let exact = (r != 2 && r != spec.p && enumeration_feasible(&spec, r)).then(|| kappa_exact(&spec, r).ok()).flatten();
    if let (Err(e), None) = (&rules, exact) {
        return Err(e.clone());
    }
    let out = KappaOutput {
        group: spec,
        r,
        rules_error: rules.as_ref().err().map(ToString::to_string),
        rules: rules.ok(),
        exact,
    };
    let mut text = format!("{spec}, r = {r}");
    if let Some(k) = &out.rules {
        let upper = k.upper.map_or("-".to_string(), |u| u.to_string());
        text += &format!("\nrules: lower {}, upper {upper}, c = {}, m = {} ({})", k.lower, k.c, k.m, k.rule.join(", "));
    }
    if let Some(e) = &out.rules_error {
        text += &format!("\nrules: {e}");
    }
    if let Some(x) = exact {
        text += &format!("\nenumerated: {x}");
    }
    Ok(Output::new(&out, text))
}

fn classes(group: &GroupArgs, r: u64, limit: Option<usize>) -> Result<Output, Error> {
    let spec = group.spec()?;
    let (classes, complete) = enumerate_element_classes_bounded(&spec, r, limit.unwrap_or(usize::MAX))?;
    let mut text = format!("{spec}, r = {r}: {} labels{}", classes.len(), if complete { "" } else { " (truncated)" });
    for c in &classes {
        text += &format!("\n  {c}");
    }
    Ok(Output::new(&ClassesOutput { group: spec, r, complete, classes }, text))
}

fn fuse(cycle: &str, d: u32, p: u64) -> Result<Output, Error> {
    let ct = CycleType::parse(cycle)?;
    let spec = a_target(d, p)?;
    let label = fuse_cycle_type(&ct, d, p, &spec)?;
    let jordan = match &label {
        ClassLabel::Unipotent { jordan, .. } => Some(jordan.clone()),
        _ => None,
    };
    let eigen = (ct.r != p && ct.r != 2).then(|| eigen_multiplicity(&ct, d, p)).transpose()?;
    let text = format!("{cycle} in A_{d} over F_{p} lies in {spec} as {label}");
    Ok(Output::new(&FuseOutput { cycle: ct, d, p, group: spec, label, jordan, eigen }, text))
}

fn coverage(d: u32, p: u64, r: Option<u64>) -> Result<Output, Error> {
    let reports = match r {
        Some(r) => vec![a_collection_coverage(d, p, r)?],
        None => primes_up_to(d as u64).into_iter().filter_map(|r| a_collection_coverage(d, p, r).ok()).collect(),
    };
    if reports.is_empty() {
        return Err(Error::pre(format!("no prime r <= {d} divides the index")));
    }
    let mut text = String::new();
    for rep in &reports {
        text += &format!(
            "{} r = {}: {} ({} covered, {} uncovered{})\n",
            rep.spec,
            rep.r,
            if rep.elusive { "elusive" } else { "not elusive" },
            rep.covered.len(),
            rep.uncovered.len(),
            if rep.complete { "" } else { ", class list truncated" }
        );
        for u in &rep.uncovered {
            text += &format!("  uncovered {u}\n");
        }
    }
    Ok(Output::new(&CoverageOutput { d, p, reports }, text.trim_end().to_string()))
}

fn tables(action: TablesAction, dir: Option<&PathBuf>) -> Result<Output, Error> {
    let t = match dir {
        Some(d) => Tables::load(d)?,
        None => Tables::global()?.clone(),
    };
    let source = dir.map_or("bundled".to_string(), |d| d.display().to_string());
    let counts = json!({
        "a": t.a.len(), "b": t.b.len(), "lowdim": t.lowdim.len(),
        "b_elusive": t.b_elusive.len(), "small_r": t.small_r.len(),
    });
    match action {
        TablesAction::Validate => {
            let text = format!("{source}: {} files valid, {counts}", FILES.len());
            Ok(Output { json: json!({ "valid": true, "source": source, "rows": counts }), text, ok: true })
        }
        TablesAction::Dump => {
            let s = |e: &dyn std::fmt::Display| e.to_string();
            let a: Vec<Value> = t
                .a
                .iter()
                .map(|r| json!({ "id": r.id, "when": s(&r.when), "family": r.family, "n": s(&r.n), "plus_if": r.plus_if.as_ref().map(|e| s(e)) }))
                .collect();
            let b: Vec<Value> = t
                .b
                .iter()
                .map(|r| json!({ "id": r.id, "targets": r.targets, "exists": s(&r.exists), "socle": r.socle, "socle_p2": r.socle_p2, "ext2": r.ext2.as_ref().map(|e| s(e)) }))
                .collect();
            let low: Vec<Value> = t
                .lowdim
                .iter()
                .map(|r| {
                    let el: serde_json::Map<String, Value> = r.elusive.iter().map(|(k, v)| (k.to_string(), json!(s(v)))).collect();
                    json!({ "id": r.id, "families": r.families, "n": r.n, "socle": r.socle, "exists": s(&r.exists), "ext2": r.ext2.as_ref().map(|e| s(e)), "elusive": el })
                })
                .collect();
            let cond = |rows: &[elusive_core::decide::tables::CondRow]| -> Vec<Value> {
                rows.iter().map(|r| json!({ "id": r.id, "r": r.r, "cond": s(&r.cond) })).collect()
            };
            let json = json!({
                "source": source, "a": a, "b": b, "lowdim": low,
                "b_elusive": cond(&t.b_elusive), "small_r": cond(&t.small_r), "socles": t.socles,
            });
            let text = serde_json::to_string_pretty(&json).expect("dump serialises");
            Ok(Output { json, text, ok: true })
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Decide { group, case, r, corollary } => decide(group, case, *r, *corollary),
        Command::Kappa { group, r } => kappa(group, *r),
        Command::Classes { group, r, limit } => classes(group, *r, *limit),
        Command::Fuse { cycle, d, p } => fuse(cycle, *d, *p),
        Command::Coverage { d, p, r } => coverage(*d, *p, *r),
        Command::Verify(args) => verify::run(args),
        Command::Tables { action, dir } => tables(*action, dir.as_ref()),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Parse { .. } => "parse",
        Error::Unbound(_) => "unbound",
        Error::Table { .. } => "table",
        Error::CapExceeded(_) => "cap-exceeded",
        Error::Unresolved(_) => "unresolved",
    }
}

/// Writes a line to stdout. A closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.human {
                emit(&out.text);
            } else {
                emit(&serde_json::to_string_pretty(&out.json).expect("json renders"));
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            if cli.human {
                eprintln!("error: {e}");
            } else {
                emit(&json!({ "error": error_kind(&e), "message": e.to_string() }).to_string());
            }
            ExitCode::from(if e.is_rejection() { 2 } else { 1 })
        }
    }
}
