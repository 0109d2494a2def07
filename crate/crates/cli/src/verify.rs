//! Oracle cross-checks behind `elusive verify`.

use clap::{Args, ValueEnum};
use elusive_core::classes::{enumerate_element_classes, ClassLabel};
use elusive_core::decide::decide_elusive;
use elusive_core::delperm::{build, epsilon_type, jordan_of_cycle_shape, CycleType};
use elusive_core::numth::primes_up_to;
use elusive_core::oracle::{
    classify_quadratic_form, count_classes_of_order, derangement_search, find_a5, jordan_partition, psl2_generators,
    small_group_closure, FormType, DEFAULT_CAP,
};
use elusive_core::{Error, Family, GroupSpec, SubgroupCase};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::Output;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// PSL2(q) on the cosets of A5: derangement search against the engine.
    LowdimPsl2,
    /// Classes of prime order in PSL2(q): enumeration against the engine.
    ClassesPsl2,
    /// Deleted permutation module form types against the classifier.
    Forms,
    /// Jordan forms of p-elements against matrix ranks.
    Jordan,
    All,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Largest q for the PSL2 suites.
    #[arg(long, default_value_t = 41)]
    qmax: u64,
    /// Largest degree for the module suites.
    #[arg(long, default_value_t = 20)]
    dmax: u32,
    /// Run a random subset of this many tasks per suite. A task is one
    /// group for the PSL2 suites and one module or cycle type otherwise.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed for `--samples`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub instance: String,
    pub oracle: String,
    pub engine: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: Option<usize>,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

/// One unit of work, returning `(instance, oracle, engine)` rows.
type Task = Box<dyn Fn() -> Result<Vec<(String, String, String)>, Error>>;

fn psl2_qs(qmax: u64) -> Vec<u64> {
    primes_up_to(qmax).into_iter().filter(|&q| q >= 5).collect()
}

fn lowdim_psl2(qmax: u64) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    for q in psl2_qs(qmax).into_iter().filter(|q| q % 10 == 1 || q % 10 == 9) {
        out.push(Box::new(move || {
            let t = small_group_closure(&psl2_generators(q), DEFAULT_CAP)?;
            let h = find_a5(&t).ok_or_else(|| Error::pre("no A5 found"))?;
            let spec = GroupSpec::with_q(Family::Psl, 2, q)?;
            let index = (t.order() / h.order()) as u64;
            let mut rows = Vec::new();
            for r in primes_up_to(index).into_iter().filter(|r| index % r == 0) {
                let oracle = derangement_search(&t, &h, r)?.is_empty();
                let engine = decide_elusive(&spec, &SubgroupCase::LowDim { row: "L2/A5".into() }, r)?.elusive;
                rows.push((format!("PSL(2, {q}) on A5 cosets, r = {r}"), elusive_word(oracle), elusive_word(engine)));
            }
            Ok(rows)
        }));
    }
    out
}

fn elusive_word(e: bool) -> String {
    if e { "elusive" } else { "not elusive" }.to_string()
}

fn classes_psl2(qmax: u64) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    for q in psl2_qs(qmax.min(23)) {
        out.push(Box::new(move || {
            let t = small_group_closure(&psl2_generators(q), DEFAULT_CAP)?;
            let spec = GroupSpec::with_q(Family::Psl, 2, q)?;
            let order = t.order() as u64;
            let mut rows = Vec::new();
            for r in primes_up_to(q + 1).into_iter().filter(|r| order % r == 0) {
                let engine: u32 = enumerate_element_classes(&spec, r)?
                    .iter()
                    .map(|l| match l {
                        ClassLabel::Unipotent { classes, .. } => *classes,
                        ClassLabel::Semisimple { splits: true, .. } => 2,
                        _ => 1,
                    })
                    .sum();
                rows.push((
                    format!("PSL(2, {q}), r = {r}"),
                    count_classes_of_order(&t, r).to_string(),
                    engine.to_string(),
                ));
            }
            Ok(rows)
        }));
    }
    out
}

fn forms(dmax: u32) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    for d in 5..=dmax {
        for p in primes_up_to(13) {
            out.push(Box::new(move || {
                let dm = build(d, p)?;
                let oracle = match dm.form_data() {
                    Some(f) => format!("{:?}", classify_quadratic_form(&f)?),
                    None => "symplectic".to_string(),
                };
                let engine = match epsilon_type(d, p) {
                    Ok(Some(1)) => format!("{:?}", FormType::Plus),
                    Ok(Some(_)) => format!("{:?}", FormType::Minus),
                    Ok(None) => format!("{:?}", FormType::OddDim),
                    Err(_) => "symplectic".to_string(),
                };
                Ok(vec![(format!("d = {d}, p = {p}"), oracle, engine)])
            }));
        }
    }
    out
}

fn jordan(dmax: u32) -> Vec<Task> {
    let mut out: Vec<Task> = Vec::new();
    for d in 5..=dmax {
        for p in primes_up_to(d as u64) {
            for h in 1..=d / p as u32 {
                out.push(Box::new(move || {
                    let ct = CycleType::new(p, h, d - h * p as u32)?;
                    let dm = build(d, p)?;
                    let oracle = jordan_partition(&dm.permutation_matrix(&ct.representative())?)?;
                    let ClassLabel::Unipotent { jordan, .. } = jordan_of_cycle_shape(&ct, d, p)? else {
                        return Err(Error::Unresolved("expected a unipotent label".into()));
                    };
                    Ok(vec![(format!("{p}^{h},1^{} over F_{p}", ct.s), format!("{oracle:?}"), format!("{jordan:?}"))])
                }));
            }
        }
    }
    out
}

pub fn run(args: &VerifyArgs) -> Result<Output, Error> {
    if args.qmax < 5 {
        return Err(Error::pre("--qmax must be at least 5"));
    }
    let suites = match args.suite {
        Suite::All => vec![Suite::LowdimPsl2, Suite::ClassesPsl2, Suite::Forms, Suite::Jordan],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for suite in suites {
        let mut tasks = match suite {
            Suite::LowdimPsl2 => lowdim_psl2(args.qmax),
            Suite::ClassesPsl2 => classes_psl2(args.qmax),
            Suite::Forms => forms(args.dmax),
            Suite::Jordan => jordan(args.dmax),
            Suite::All => unreachable!(),
        };
        if let Some(n) = args.samples {
            let mut rng = StdRng::seed_from_u64(args.seed);
            let mut idx: Vec<usize> = (0..tasks.len()).collect();
            idx.shuffle(&mut rng);
            idx.truncate(n);
            idx.sort_unstable();
            let mut kept = Vec::new();
            for (k, t) in tasks.into_iter().enumerate() {
                if idx.binary_search(&k).is_ok() {
                    kept.push(t);
                }
            }
            tasks = kept;
        }
        for task in tasks {
            for (instance, oracle, engine) in task()? {
                checks.push(Check { suite, pass: oracle == engine, instance, oracle, engine });
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let report = VerifyReport { seed: args.seed, samples: args.samples, passed: checks.len() - failed, failed, checks };
    let mut text = format!("{} passed, {} failed", report.passed, report.failed);
    for c in report.checks.iter().filter(|c| !c.pass) {
        text += &format!("\nFAIL {}: oracle {}, engine {}", c.instance, c.oracle, c.engine);
    }
    let mut out = Output::new(&report, text);
    out.ok = failed == 0;
    Ok(out)
}
