//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails other than the recorded N1
//! comparison-principle deviation, which must reproduce exactly.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cnl_core::comparison::{comparison_principle_holds, comparison_principle_violations, expressivity_separation};
use cnl_core::lab::{
    all_partitions, axiom_pool, builtin_comparison, builtin_ellsberg, builtin_lottery, embed,
    enumerate_families, find_countermodel, fuzz, random_formula, random_weight_model, FormulaSpec,
    FuzzReport, GenMode, ModelSpec, Suite, MAX_SEARCH_WORLDS,
};
use cnl_core::weight_model::{a4_formula, check_a4};
use cnl_core::{parse, CnModel, Formula, Language, ModelBase, WorldSet};

const SEED: u64 = 0x00ac_ce97;
const ENUMERATION_LIMIT: Duration = Duration::from_secs(60);
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(300);
const LOTTERY_LIMIT: Duration = Duration::from_secs(1);
const LOTTERY_TICKETS: usize = 10_000;
const FUZZ_TRIALS: u64 = 1000;
const UPDATE_TRIALS: u64 = 500;
const A4_MODELS: u64 = 500;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Fails as analysed; the detail must match the recorded analysis.
    KnownDeviation(String),
}

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn fuzz_summary(r: &FuzzReport) -> String {
    let checks: u64 = r.checks.iter().map(|c| c.passed + c.failed).sum();
    format!("{} trials={} checks={} failures={}", r.suite, r.trials, checks, r.total_failures)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut total = 0;
    for n in 0..=4 {
        let fams = enumerate_families(n).unwrap();
        total += fams.len();
        if let Some(bad) = fams.iter().find(|fam| !fam.check_derived().is_empty()) {
            return Verdict::Fail(format!("n={n}: {bad:?} breaks a derived condition"));
        }
    }
    let t = start.elapsed();
    let msg = format!("{total} families over n=0..4, derived conditions hold, {t:.2?} (limit {ENUMERATION_LIMIT:?})");
    if t < ENUMERATION_LIMIT {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

type Partition = Vec<Vec<usize>>;

/// Every single-agent model on `n` worlds with families from the
/// enumerator, before choosing a valuation.
fn all_models(n: usize) -> Vec<(Partition, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    for partition in all_partitions(n, 4) {
        // One digit per (cell, key); the radix is the number of families.
        let radices: Vec<Vec<usize>> = partition
            .iter()
            .map(|c| (0u32..1 << c.len()).map(|k| enumerate_families(k.count_ones() as usize).unwrap().len()).collect())
            .collect();
        let mut digits: Vec<Vec<usize>> = radices.iter().map(|r| vec![0; r.len()]).collect();
        loop {
            out.push((partition.clone(), digits.clone()));
            let mut carried = true;
            'inc: for (ci, r) in radices.iter().enumerate() {
                for (k, &radix) in r.iter().enumerate() {
                    digits[ci][k] += 1;
                    if digits[ci][k] < radix {
                        carried = false;
                        break 'inc;
                    }
                    digits[ci][k] = 0;
                }
            }
            if carried {
                break;
            }
        }
    }
    out
}

fn build(n: usize, partition: &[Vec<usize>], digits: &[Vec<usize>], code: u32) -> CnModel {
    let valuation = ["p", "q"]
        .iter()
        .enumerate()
        .map(|(i, a)| (a.to_string(), WorldSet::from_indices((0..n).filter(|w| code & (1 << (i * n + w)) != 0))))
        .collect();
    let names = (0..n).map(|i| format!("w{i}")).collect();
    let base = ModelBase::new(names, vec!["a".into()], vec![partition.to_vec()], valuation).unwrap();
    CnModel::from_fn(base, |_, ci, _, key| {
        let fam = &enumerate_families(key.count_ones() as usize).unwrap()[digits[ci][key as usize]];
        embed(fam, key)
    })
    .unwrap()
}

fn criterion_2() -> Verdict {
    use rayon::prelude::*;
    let start = Instant::now();
    let pool = axiom_pool();
    let mut models = 0usize;
    let mut failures = Vec::new();
    for n in 1..=3 {
        let shapes = all_models(n);
        let found: Vec<(String, String)> = shapes
            .par_iter()
            .flat_map_iter(|(partition, digits)| {
                (0u32..1 << (2 * n)).flat_map(move |code| {
                    let m = build(n, partition, digits, code);
                    assert!(m.validate().is_empty());
                    pool.iter()
                        .filter(|(_, inst)| m.extension(inst).unwrap() != m.base().universe())
                        .map(|(ax, inst)| (ax.to_string(), inst.to_string()))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        models += shapes.len() << (2 * n);
        failures.extend(found);
    }
    let t = start.elapsed();
    let msg = format!(
        "{models} models x {} instances, {} failures, {t:.2?} (limit {EXHAUSTIVE_LIMIT:?})",
        pool.len(),
        failures.len()
    );
    if failures.is_empty() && pool.len() == 200 && t < EXHAUSTIVE_LIMIT {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(format!("{msg}; first: {:?}", failures.first()))
    }
}

fn all_ok(reports: &[FuzzReport], required: &[&str]) -> Verdict {
    let msg = reports.iter().map(fuzz_summary).collect::<Vec<_>>().join("; ");
    let missing: Vec<&&str> = required
        .iter()
        .filter(|name| {
            !reports
                .iter()
                .any(|r| r.checks.iter().any(|c| c.check == **name && c.passed + c.failed >= r.trials))
        })
        .collect();
    if reports.iter().all(|r| r.ok && r.total_failures == 0) && missing.is_empty() {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(format!("{msg}; unexercised checks {missing:?}; first failure {:?}",
            reports.iter().flat_map(|r| r.failures.first()).next()))
    }
}

fn criterion_3() -> Verdict {
    let reports = [fuzz(Suite::CnAxioms, FUZZ_TRIALS, SEED), fuzz(Suite::Totality, FUZZ_TRIALS, SEED)];
    all_ok(
        &reports,
        &["axiom/SC", "axiom/D", "geq-top-iff-K", "totality-exclusive", "totality", "refl-totality"],
    )
}

fn criterion_4() -> Verdict {
    let reports = [fuzz(Suite::WeightSoundness, FUZZ_TRIALS, SEED)];
    all_ok(&reports, &["axiom/Taut", "axiom/SC", "induce-agreement", "induced-valid", "tr1", "tr2", "geq-direct-vs-belief"])
}

fn criterion_5() -> Verdict {
    let report = fuzz(Suite::StpWeight, FUZZ_TRIALS, SEED);
    let m = builtin_ellsberg();
    let premise1 = f("B{a}(Gr | Gy, Gr | Gg)");
    let premise2 = f("B{a}(Gg | Gb, Gr | Gg)");
    let conclusion = f("B{a}(T, Gr | Gg)");
    let all = m.base().universe();
    let urn = m.validate().is_empty()
        && m.extension(&premise1).unwrap() == all
        && m.extension(&premise2).unwrap() == all
        && m.extension(&conclusion).unwrap().is_empty();
    let expect_fail = fuzz(Suite::StpCnExpectFail, FUZZ_TRIALS, SEED);
    let msg = format!(
        "{}; urn premises true and conclusion false at all 4 worlds: {urn}; {} ok={}",
        fuzz_summary(&report),
        fuzz_summary(&expect_fail),
        expect_fail.ok
    );
    if report.ok && report.total_failures == 0 && urn && expect_fail.ok {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_6() -> Verdict {
    let reports = [fuzz(Suite::ReductionsPc, UPDATE_TRIALS, SEED), fuzz(Suite::ReductionsPcpm, UPDATE_TRIALS, SEED)];
    let mut v = all_ok(
        &reports,
        &["schema/pc-main", "schema/pc-appendix", "schema/pcpm-atom", "schema/pcpm-neg", "schema/pcpm-and", "schema/pcpm-B", "compile", "closure/cut"],
    );
    // Deletion is skipped when the announcement is empty; require it to
    // have run on most trials.
    let deletes = reports[0].checks.iter().find(|c| c.check == "closure/delete").map_or(0, |c| c.passed);
    if deletes * 2 < UPDATE_TRIALS {
        v = Verdict::Fail(format!("only {deletes} delete updates exercised"));
    }
    v
}

fn criterion_7() -> Verdict {
    let (t, v) = (1, 2);
    let name = |i| cnl_core::lab::ticket_name(i, LOTTERY_TICKETS);
    let start = Instant::now();
    let m = builtin_lottery(LOTTERY_TICKETS, t, Ratio::from_integer(LOTTERY_TICKETS as i64)).unwrap();
    let believes = m.eval(&name(t), &f(&format!("B{{a}}(T, win_{})", name(t)))).unwrap();
    let u = m.announce_delete(&f(&format!("win_{}", name(v)))).unwrap();
    let knows = u.eval(&name(v), &f(&format!("K{{a}} win_{}", name(v)))).unwrap();
    let elapsed = start.elapsed();

    let small = builtin_lottery(4, t, Ratio::from_integer(5)).unwrap();
    let explicit = small.induce_cn().unwrap();
    let after = cnl_core::dynamics::announce_delete(&explicit, &f("win_2")).unwrap();
    let family = after.neighbourhoods(0, 0, &after.base().universe());
    let exact = family == vec![WorldSet::singleton(0)] && after.base().worlds() == ["2"];
    let via_weights = small.announce_delete(&f("win_2")).unwrap().induce_cn().unwrap() == after;

    let msg = format!(
        "{LOTTERY_TICKETS} tickets: B(T,win_t) before {believes}, K(win_v) after {knows}, {elapsed:.2?} (limit {LOTTERY_LIMIT:?}); 4 tickets: post-update family {{{{v}}}} {exact}, weight and explicit paths agree {via_weights}"
    );
    if believes && knows && elapsed < LOTTERY_LIMIT && exact && via_weights {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_8() -> Verdict {
    let r = expressivity_separation(2);
    let (n1, n2) = builtin_comparison();
    let principle = (comparison_principle_holds(&n1).unwrap(), comparison_principle_holds(&n2).unwrap());
    let separation = !r.distinguishing_valid_on_n1 && r.distinguishing_valid_on_n2 && r.cn_disagreements.is_empty();
    let msg = format!(
        "{} valid on N2 {} / on N1 {}; {} L_CN formulas, {} disagreements; comparison principle (N1, N2) = {principle:?}, expected (true, false)",
        r.distinguishing_formula,
        r.distinguishing_valid_on_n2,
        r.distinguishing_valid_on_n1,
        r.cn_formulas_checked,
        r.cn_disagreements.len()
    );
    if separation && principle == (true, false) {
        return Verdict::Pass(msg);
    }
    // N1's relation holds ({p},{q}) but not ({p,none},{q,none}), whose
    // differences are the same pair.
    let v1 = comparison_principle_violations(&n1).unwrap();
    let witness = v1.iter().any(|v| v.a == ["p", "none"] && v.b == ["q", "none"] && !v.pair_related && v.difference_related);
    if separation && principle == (false, false) && witness {
        Verdict::KnownDeviation(format!("{msg}; N1 witness A={{p,none}} B={{q,none}}, {} violating pairs on N1", v1.len()))
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for i in 0..A4_MODELS {
        let spec = ModelSpec::new(rng.gen_range(1..=8), rng.gen_range(1..=2), 4, &["p", "q", "r"], GenMode::Mixed);
        let m = random_weight_model(&spec, SEED ^ i).unwrap();
        let agents: Vec<&str> = m.base().agents().iter().map(String::as_str).collect();
        let len = rng.gen_range(2..=4);
        let mut list = || -> Vec<Formula> {
            (0..len)
                .map(|_| random_formula(&FormulaSpec::new(rng.gen_range(0..=2), &["p", "q", "r"], &agents, Language::Qp), rng.gen()))
                .collect()
        };
        let (alphas, betas) = (list(), list());
        let agent = agents[rng.gen_range(0..agents.len())];
        for w in m.base().worlds() {
            checked += 1;
            if !check_a4(&m, w, agent, &alphas, &betas).unwrap() {
                failures.push((i, w.clone()));
            }
        }
    }

    let alphas = [f("p & q"), f("p & ~q"), f("~p")];
    let betas = [f("~p & q"), f("~p & ~q"), f("p")];
    let instance = a4_formula("a", &alphas, &betas).unwrap();
    let found = find_countermodel(&instance, MAX_SEARCH_WORLDS).unwrap();
    let witness = match &found {
        Some(c) => {
            let valid = c.model.validate().is_empty();
            let false_there = !c.model.eval(&c.world, &instance).unwrap();
            let by_counting = !check_a4(&c.model, &c.world, "a", &alphas, &betas).unwrap();
            valid && false_there && by_counting
        }
        None => false,
    };
    let size = found.as_ref().map(|c| c.model.base().world_count());
    let msg = format!(
        "{A4_MODELS} weight models, {checked} world checks, {} failures; CN countermodel to the A4 instance: {size:?} worlds, confirmed {witness}",
        failures.len()
    );
    if failures.is_empty() && witness {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("family enumeration and derived conditions", criterion_1),
        ("exhaustive CN soundness on |W| <= 3", criterion_2),
        ("CN soundness fuzz up to |W| = 10", criterion_3),
        ("weight soundness and agreement", criterion_4),
        ("Sure Thing separation", criterion_5),
        ("update closure and reductions", criterion_6),
        ("lottery end to end", criterion_7),
        ("expressivity separation", criterion_8),
        ("A4 soundness and CN countermodel", criterion_9),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Verdict::Pass(msg) => println!("PASS criterion {} ({name}): {msg}", i + 1),
            Verdict::KnownDeviation(msg) => {
                println!("FAIL criterion {} ({name}): {msg} [known deviation, see decision ledger]", i + 1)
            }
            Verdict::Fail(msg) => {
                unexpected += 1;
                println!("FAIL criterion {} ({name}): {msg}", i + 1);
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
