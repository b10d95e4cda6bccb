//! Seeded fuzz suites. Each trial draws its own model and instances from
//! a generator keyed by `(seed, trial)`, so trials run in parallel and the
//! report does not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::cn_model::CnModel;
use crate::comparison::{tr1_weak, ComparisonModel};
use crate::dynamics::{
    announce_cut, announce_delete, compile, extension_pc, extension_pcpm, ReductionInstance,
    ReductionSchema, Refinable,
};
use crate::format::{cn_to_value, comparison_to_value, weight_to_value};
use crate::semantics::{EvalError, Evaluator};
use crate::syntax::{tr1, tr2, Formula, Language};
use crate::weight_model::{a4_formula, check_a4, sure_thing_formula, WeightModel};
use crate::worldset::WorldSet;

use super::axioms::{Axiom, Principle};
use super::builtins::builtin_ellsberg;
use super::generate::{gen_cn_model, gen_formula, gen_weight_model, world_names, FormulaSpec, GenMode, ModelSpec};

/// Largest random model drawn by the suites.
pub const FUZZ_MAX_WORLDS: usize = 10;
/// Largest cell of a random model.
pub const FUZZ_MAX_CELL: usize = 4;
/// Witnesses kept per check.
const KEEP_FAILURES: usize = 3;

const ATOMS: [&str; 3] = ["p", "q", "r"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    CnAxioms,
    WeightSoundness,
    ReductionsPc,
    ReductionsPcpm,
    Totality,
    StpWeight,
    StpCnExpectFail,
    Translations,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::CnAxioms,
        Suite::WeightSoundness,
        Suite::ReductionsPc,
        Suite::ReductionsPcpm,
        Suite::Totality,
        Suite::StpWeight,
        Suite::StpCnExpectFail,
        Suite::Translations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CnAxioms => "cn-axioms",
            Suite::WeightSoundness => "weight-soundness",
            Suite::ReductionsPc => "reductions-pc",
            Suite::ReductionsPcpm => "reductions-pcpm",
            Suite::Totality => "totality",
            Suite::StpWeight => "stp-weight",
            Suite::StpCnExpectFail => "stp-cn-expect-fail",
            Suite::Translations => "translations",
        }
    }

    /// Whether the suite passes by finding no counterexample.
    pub fn expects_valid(self) -> bool {
        self != Suite::StpCnExpectFail
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub check: String,
    pub passed: u64,
    pub failed: u64,
}

/// A falsified check, shrunk where the check is a validity claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub check: String,
    pub trial: u64,
    pub world: Option<String>,
    pub formula: Option<String>,
    pub detail: String,
    pub model: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub expects_valid: bool,
    pub checks: Vec<CheckTally>,
    pub total_failures: u64,
    pub failures: Vec<FuzzFailure>,
    pub ok: bool,
}

impl FuzzReport {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Run `trials` samples of every check in `suite`.
pub fn fuzz(suite: Suite, trials: u64, seed: u64) -> FuzzReport {
    let outcomes: Vec<Vec<Outcome>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let mut trial = Trial { index: t, outcomes: Vec::new() };
            run_trial(suite, &mut trial, &mut rng);
            trial.outcomes
        })
        .collect();

    let mut tallies: BTreeMap<String, CheckTally> = BTreeMap::new();
    let mut kept: BTreeMap<String, Vec<FuzzFailure>> = BTreeMap::new();
    let mut total_failures = 0;
    for o in outcomes.into_iter().flatten() {
        let tally = tallies.entry(o.check.clone()).or_insert_with(|| CheckTally {
            check: o.check.clone(),
            passed: 0,
            failed: 0,
        });
        match o.failure {
            None => tally.passed += 1,
            Some(f) => {
                tally.failed += 1;
                total_failures += 1;
                let list = kept.entry(o.check).or_default();
                if list.len() < KEEP_FAILURES {
                    list.push(f);
                }
            }
        }
    }
    let ok = if suite.expects_valid() {
        total_failures == 0
    } else {
        total_failures > 0
    };
    FuzzReport {
        suite: suite.name().to_string(),
        seed,
        trials,
        expects_valid: suite.expects_valid(),
        checks: tallies.into_values().collect(),
        total_failures,
        failures: kept.into_values().flatten().collect(),
        ok,
    }
}

struct Outcome {
    check: String,
    failure: Option<FuzzFailure>,
}

struct Trial {
    index: u64,
    outcomes: Vec<Outcome>,
}

impl Trial {
    fn pass(&mut self, check: &str) {
        self.outcomes.push(Outcome {
            check: check.to_string(),
            failure: None,
        });
    }

    fn fail(&mut self, check: &str, world: Option<String>, formula: Option<&Formula>, detail: String, model: Value) {
        self.outcomes.push(Outcome {
            check: check.to_string(),
            failure: Some(FuzzFailure {
                check: check.to_string(),
                trial: self.index,
                world,
                formula: formula.map(|f| f.to_string()),
                detail,
                model,
            }),
        });
    }
}

fn run_trial(suite: Suite, t: &mut Trial, rng: &mut ChaCha8Rng) {
    match suite {
        Suite::CnAxioms => cn_axioms(t, rng),
        Suite::WeightSoundness => weight_soundness(t, rng),
        Suite::ReductionsPc => reductions(t, rng, false),
        Suite::ReductionsPcpm => reductions(t, rng, true),
        Suite::Totality => totality(t, rng),
        Suite::StpWeight => stp_weight(t, rng),
        Suite::StpCnExpectFail => stp_cn(t, rng),
        Suite::Translations => translations(t, rng),
    }
}

fn model_spec(rng: &mut ChaCha8Rng, mode: GenMode) -> ModelSpec {
    ModelSpec::new(
        rng.gen_range(1..=FUZZ_MAX_WORLDS),
        rng.gen_range(1..=2),
        rng.gen_range(1..=FUZZ_MAX_CELL),
        &ATOMS,
        mode,
    )
}

fn random_cn(rng: &mut ChaCha8Rng) -> CnModel {
    let spec = model_spec(rng, GenMode::Mixed);
    gen_cn_model(&spec, rng).expect("spec within caps")
}

fn random_weight(rng: &mut ChaCha8Rng) -> WeightModel {
    let spec = model_spec(rng, GenMode::Mixed);
    gen_weight_model(&spec, rng).expect("spec within caps")
}

fn formula(rng: &mut ChaCha8Rng, agents: &[String], max_depth: usize, language: Language) -> Formula {
    let spec = FormulaSpec {
        depth: rng.gen_range(0..=max_depth),
        atoms: ATOMS.iter().map(|s| s.to_string()).collect(),
        agents: agents.to_vec(),
        language,
    };
    gen_formula(&spec, rng)
}

/// A formula without modalities.
fn boolean(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
    }
    if rng.gen_bool(0.3) {
        boolean(rng, depth - 1).not()
    } else {
        boolean(rng, depth - 1).and(boolean(rng, depth - 1))
    }
}

fn pick_agent(rng: &mut ChaCha8Rng, agents: &[String]) -> String {
    agents[rng.gen_range(0..agents.len())].clone()
}

type Ext<M> = fn(&M, &Formula) -> Result<WorldSet, EvalError>;

/// First world of `m` where `f` fails, or an evaluation error.
fn falsified<M: Evaluator>(m: &M, eval: Ext<M>, f: &Formula) -> Result<Option<usize>, EvalError> {
    let ext = eval(m, f)?;
    Ok(m.model_base().universe().difference(&ext).first())
}

/// Smaller candidates for a subformula: `⊤`, the atoms, its children and
/// the formula with one child replaced by a grandchild.
fn smaller(f: &Formula) -> Vec<Formula> {
    let mut out = vec![Formula::Top];
    out.extend(ATOMS.iter().map(|a| Formula::atom(*a)));
    out.extend(f.children().into_iter().cloned());
    let rebuild = |i: usize, g: &Formula| -> Formula {
        let mut c: Vec<Formula> = f.children().into_iter().cloned().collect();
        c[i] = g.clone();
        match f {
            Formula::Not(_) => c[0].clone().not(),
            Formula::And(..) => c[0].clone().and(c[1].clone()),
            Formula::Bel(a, ..) => Formula::bel(a.clone(), c[0].clone(), c[1].clone()),
            Formula::Geq(a, ..) => Formula::geq(a.clone(), c[0].clone(), c[1].clone()),
            Formula::AnnFact(..) => Formula::announce(c[0].clone(), c[1].clone()),
            Formula::AnnValue(..) => Formula::announce_value(c[0].clone(), c[1].clone()),
            _ => f.clone(),
        }
    };
    for (i, c) in f.children().into_iter().enumerate() {
        for g in c.children() {
            out.push(rebuild(i, g));
        }
    }
    let size = f.size();
    out.retain(|g| g.size() < size);
    out
}

/// Shrink a falsified instance: replace metavariable values by smaller
/// formulas, then delete worlds, while some world still falsifies it.
fn shrink<M, B>(m: &M, parts: &[Formula], build: B, eval: Ext<M>) -> (M, Vec<Formula>, usize)
where
    M: Refinable + Evaluator + Clone,
    B: Fn(&[Formula]) -> Formula,
{
    let fails = |m: &M, parts: &[Formula]| falsified(m, eval, &build(parts)).ok().flatten();
    let mut m = m.clone();
    let mut parts = parts.to_vec();
    loop {
        let mut changed = false;
        'parts: for i in 0..parts.len() {
            for cand in smaller(&parts[i]) {
                let mut next = parts.clone();
                next[i] = cand;
                if fails(&m, &next).is_some() {
                    parts = next;
                    changed = true;
                    break 'parts;
                }
            }
        }
        let n = m.model_base().world_count();
        if !changed && n > 1 {
            for w in 0..n {
                let mut keep = m.model_base().universe();
                keep.remove(w);
                let (smaller_model, _) = m.refine(&keep, None);
                if fails(&smaller_model, &parts).is_some() {
                    m = smaller_model;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let w = fails(&m, &parts).expect("shrinking preserves the failure");
    (m, parts, w)
}

/// Record whether `build(parts)` holds at every world of `m`, shrinking
/// any counterexample.
fn validity<M, B>(t: &mut Trial, check: &str, m: &M, parts: &[Formula], build: B, eval: Ext<M>, json: fn(&M) -> Value)
where
    M: Refinable + Evaluator + Clone,
    B: Fn(&[Formula]) -> Formula,
{
    let f = build(parts);
    match falsified(m, eval, &f) {
        Ok(None) => t.pass(check),
        Ok(Some(_)) => {
            let (m, parts, w) = shrink(m, parts, &build, eval);
            let f = build(&parts);
            let world = m.model_base().world_name(w).to_string();
            t.fail(check, Some(world), Some(&f), "instance is false".into(), json(&m));
        }
        Err(e) => t.fail(check, None, Some(&f), e.to_string(), json(m)),
    }
}

/// Record whether two truth sets agree.
fn agreement<M: Evaluator>(
    t: &mut Trial,
    check: &str,
    m: &M,
    f: &Formula,
    left: Result<WorldSet, String>,
    right: Result<WorldSet, String>,
    json: fn(&M) -> Value,
) {
    match (left, right) {
        (Ok(a), Ok(b)) if a == b => t.pass(check),
        (Ok(a), Ok(b)) => {
            let w = a.union(&b).difference(&a.intersection(&b)).first().expect("sets differ");
            let world = m.model_base().world_name(w).to_string();
            t.fail(check, Some(world), Some(f), "readings disagree".into(), json(m));
        }
        (Err(e), _) | (_, Err(e)) => t.fail(check, None, Some(f), e, json(m)),
    }
}

fn s(r: Result<WorldSet, EvalError>) -> Result<WorldSet, String> {
    r.map_err(|e| e.to_string())
}

fn cn_ext(m: &CnModel, f: &Formula) -> Result<WorldSet, EvalError> {
    m.extension(f)
}

fn cn_ext_qp(m: &CnModel, f: &Formula) -> Result<WorldSet, EvalError> {
    m.extension_qp(f)
}

fn weight_ext(m: &WeightModel, f: &Formula) -> Result<WorldSet, EvalError> {
    m.extension(f)
}

fn check_axioms<M>(t: &mut Trial, rng: &mut ChaCha8Rng, m: &M, eval: Ext<M>, json: fn(&M) -> Value)
where
    M: Refinable + Evaluator + Clone,
{
    let agents = m.model_base().agents().to_vec();
    for ax in Axiom::ALL {
        let agent = pick_agent(rng, &agents);
        let parts: Vec<Formula> = (0..3).map(|_| formula(rng, &agents, 2, Language::Cn)).collect();
        let check = format!("axiom/{}", ax.name());
        validity(t, &check, m, &parts, |p| ax.instance(&agent, &p[0], &p[1], &p[2]), eval, json);
    }
}

fn check_principles<M>(t: &mut Trial, rng: &mut ChaCha8Rng, m: &M, eval: Ext<M>, json: fn(&M) -> Value, suffix: &str)
where
    M: Refinable + Evaluator + Clone,
{
    let agents = m.model_base().agents().to_vec();
    for pr in Principle::COMPARATIVE {
        let agent = pick_agent(rng, &agents);
        let parts: Vec<Formula> = (0..2).map(|_| formula(rng, &agents, 2, Language::Qp)).collect();
        let check = format!("{}{suffix}", pr.name());
        validity(t, &check, m, &parts, |p| pr.instance(&agent, &p[0], &p[1]), eval, json);
    }
}

fn cn_axioms(t: &mut Trial, rng: &mut ChaCha8Rng) {
    let m = random_cn(rng);
    check_axioms(t, rng, &m, cn_ext, cn_to_value);
}

fn totality(t: &mut Trial, rng: &mut ChaCha8Rng) {
    let m = random_cn(rng);
    check_principles(t, rng, &m, cn_ext, cn_to_value, "");
    check_principles(t, rng, &m, cn_ext_qp, cn_to_value, "/qp-clause");
    let g = formula(rng, m.base().agents(), 3, Language::Qp);
    agreement(t, "qp-clause-vs-definition", &m, &g, s(m.extension(&g)), s(m.extension_qp(&g)), cn_to_value);
}

fn weight_soundness(t: &mut Trial, rng: &mut ChaCha8Rng) {
    let m = random_weight(rng);
    let agents = m.base().agents().to_vec();
    check_axioms(t, rng, &m, weight_ext, weight_to_value);
    check_principles(t, rng, &m, weight_ext, weight_to_value, "");

    match m.induce_cn() {
        Ok(cn) => {
            let report = cn.validate();
            if report.is_empty() {
                t.pass("induced-valid");
            } else {
                let v = &report.violations[0];
                t.fail("induced-valid", None, None, v.to_string(), weight_to_value(&m));
            }
            let f = formula(rng, &agents, 3, Language::Cn);
            agreement(t, "induce-agreement", &m, &f, s(m.extension(&f)), s(cn.extension(&f)), weight_to_value);
        }
        Err(e) => t.fail("induced-valid", None, None, e.to_string(), weight_to_value(&m)),
    }

    let g = formula(rng, &agents, 3, Language::Qp);
    agreement(t, "geq-direct-vs-belief", &m, &g, s(m.extension(&g)), s(m.extension_via_belief(&g)), weight_to_value);

    let f = formula(rng, &agents, 3, Language::Cn);
    let translated = tr1(&f).map_err(|e| e.to_string());
    let right = translated.and_then(|g| m.extension(&g).map_err(|e| e.to_string()));
    agreement(t, "tr1", &m, &f, s(m.extension(&f)), right, weight_to_value);
    let g = formula(rng, &agents, 3, Language::Qp);
    let translated = tr2(&g).map_err(|e| e.to_string());
    let right = translated.and_then(|f| m.extension(&f).map_err(|e| e.to_string()));
    agreement(t, "tr2", &m, &g, s(m.extension(&g)), right, weight_to_value);

    let len = rng.gen_range(2..=4);
    let agent = pick_agent(rng, &agents);
    let alphas: Vec<Formula> = (0..len).map(|_| formula(rng, &agents, 1, Language::Qp)).collect();
    let betas: Vec<Formula> = (0..len).map(|_| formula(rng, &agents, 1, Language::Qp)).collect();
    let mut bad = None;
    for w in m.base().worlds() {
        match check_a4(&m, w, &agent, &alphas, &betas) {
            Ok(true) => {}
            Ok(false) => {
                bad = Some((Some(w.clone()), "instance is false".to_string()));
                break;
            }
            Err(e) => {
                bad = Some((None, e.to_string()));
                break;
            }
        }
    }
    match bad {
        None => t.pass("A4"),
        Some((world, detail)) => {
            let f = a4_formula(&agent, &alphas, &betas).ok();
            t.fail("A4", world, f.as_ref(), detail, weight_to_value(&m));
        }
    }
}

fn stp_weight(t: &mut Trial, rng: &mut ChaCha8Rng) {
    let m = random_weight(rng);
    let agents = m.base().agents().to_vec();
    let agent = pick_agent(rng, &agents);
    let parts: Vec<Formula> = (0..2).map(|_| formula(rng, &agents, 2, Language::Cn)).collect();
    validity(t, "sure-thing", &m, &parts, |p| sure_thing_formula(&agent, &p[0], &p[1]), weight_ext, weight_to_value);
}

fn stp_cn(t: &mut Trial, rng: &mut ChaCha8Rng) {
    if t.index == 0 {
        let m = builtin_ellsberg();
        let a = |s: &str| Formula::atom(s);
        let parts = [a("Gr").or(a("Gy")), a("Gr").or(a("Gg"))];
        let f = sure_thing_formula("a", &parts[0], &parts[1]);
        match falsified(&m, cn_ext, &f) {
            Ok(None) => t.pass("sure-thing/ellsberg"),
            Ok(Some(w)) => {
                let world = m.base().world_name(w).to_string();
                t.fail("sure-thing/ellsberg", Some(world), Some(&f), "instance is false".into(), cn_to_value(&m));
            }
            Err(e) => t.fail("sure-thing/ellsberg", None, Some(&f), e.to_string(), cn_to_value(&m)),
        }
        return;
    }
    // Failures need a cell of at least four worlds, so draw those densely.
    let n = rng.gen_range(4..=FUZZ_MAX_WORLDS);
    let spec = ModelSpec::new(n, 1, FUZZ_MAX_CELL, &ATOMS, GenMode::Enumerated);
    let m = gen_cn_model(&spec, rng).expect("spec within caps");
    let agents = m.base().agents().to_vec();
    let agent = pick_agent(rng, &agents);
    let parts: Vec<Formula> = (0..2).map(|_| boolean(rng, 2)).collect();
    validity(t, "sure-thing", &m, &parts, |p| sure_thing_formula(&agent, &p[0], &p[1]), cn_ext, cn_to_value);
}

fn reductions(t: &mut Trial, rng: &mut ChaCha8Rng, value: bool) {
    let m = random_cn(rng);
    let agents = m.base().agents().to_vec();
    let (language, eval): (Language, Ext<CnModel>) = if value {
        (Language::PcPm, extension_pcpm)
    } else {
        (Language::Pc, extension_pc)
    };
    for schema in ReductionSchema::ALL.into_iter().filter(|s| s.is_value_announcement() == value) {
        let agent = pick_agent(rng, &agents);
        let atomic = matches!(schema, ReductionSchema::PcAtom | ReductionSchema::PcpmAtom);
        let mut parts: Vec<Formula> = (0..3).map(|_| formula(rng, &agents, 2, language)).collect();
        if atomic {
            parts[1] = Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
        }
        let build = |p: &[Formula]| {
            let psi = if atomic && !matches!(p[1], Formula::Atom(_)) {
                // Shrinking may not leave the atom position.
                Formula::atom("p")
            } else {
                p[1].clone()
            };
            schema.instance(&ReductionInstance {
                agent: agent.clone(),
                phi: p[0].clone(),
                psi,
                chi: p[2].clone(),
            })
        };
        validity(t, &format!("schema/{}", schema.name()), &m, &parts, build, eval, cn_to_value);
    }

    let f = formula(rng, &agents, 3, language);
    agreement(t, "compile", &m, &f, s(eval(&m, &f)), s(m.extension(&compile(&f))), cn_to_value);

    let phi = formula(rng, &agents, 2, Language::Cn);
    let updated = if value {
        announce_cut(&m, &phi).map(Some)
    } else {
        match m.extension(&phi) {
            Ok(ext) if ext.is_empty() => Ok(None),
            _ => announce_delete(&m, &phi).map(Some),
        }
    };
    let check = if value { "closure/cut" } else { "closure/delete" };
    match updated {
        Ok(None) => {}
        Ok(Some(u)) => {
            let mut violations = u.validate().violations;
            violations.extend(u.derived_check().violations);
            match violations.first() {
                None => t.pass(check),
                Some(v) => t.fail(check, None, Some(&phi), v.to_string(), cn_to_value(&m)),
            }
        }
        Err(e) => t.fail(check, None, Some(&phi), e.to_string(), cn_to_value(&m)),
    }

    if value {
        // Splitting twice along the same proposition changes nothing.
        let s = m.extension(&phi).expect("evaluated above");
        let u = m.base().universe();
        let (once, _) = m.refine(&u, Some(&s));
        let (twice, _) = once.refine(&u, Some(&s));
        if once == twice {
            t.pass("cut-idempotent");
        } else {
            t.fail("cut-idempotent", None, Some(&phi), "second split changed the model".into(), cn_to_value(&m));
        }
    }
}

fn random_comparison(rng: &mut ChaCha8Rng) -> ComparisonModel {
    let n = rng.gen_range(1..=3);
    let valuation = ATOMS
        .iter()
        .map(|a| (a.to_string(), (0..n).filter(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    let sets: Vec<WorldSet> = (0u32..1 << n)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    let mut geq = BTreeSet::new();
    for a in &sets {
        for b in &sets {
            if rng.gen_bool(0.5) {
                geq.insert((a.clone(), b.clone()));
            }
        }
    }
    ComparisonModel::new(world_names(n), valuation, geq).expect("well-formed")
}

fn translations(t: &mut Trial, rng: &mut ChaCha8Rng) {
    let m = random_cn(rng);
    let agents = m.base().agents().to_vec();
    let f = formula(rng, &agents, 3, Language::Cn);
    match tr1(&f) {
        Ok(g) => agreement(t, "cn/tr1", &m, &f, s(m.extension(&f)), s(m.extension_qp(&g)), cn_to_value),
        Err(e) => t.fail("cn/tr1", None, Some(&f), e.to_string(), cn_to_value(&m)),
    }
    let g = formula(rng, &agents, 3, Language::Qp);
    match tr2(&g) {
        Ok(f) => agreement(t, "cn/tr2", &m, &g, s(m.extension_qp(&g)), s(m.extension(&f)), cn_to_value),
        Err(e) => t.fail("cn/tr2", None, Some(&g), e.to_string(), cn_to_value(&m)),
    }

    let w = random_weight(rng);
    let agents = w.base().agents().to_vec();
    let f = formula(rng, &agents, 3, Language::Cn);
    match tr1(&f) {
        Ok(g) => agreement(t, "weight/tr1", &w, &f, s(w.extension(&f)), s(w.extension(&g)), weight_to_value),
        Err(e) => t.fail("weight/tr1", None, Some(&f), e.to_string(), weight_to_value(&w)),
    }
    let g = formula(rng, &agents, 3, Language::Qp);
    match tr2(&g) {
        Ok(f) => agreement(t, "weight/tr2", &w, &g, s(w.extension(&g)), s(w.extension(&f)), weight_to_value),
        Err(e) => t.fail("weight/tr2", None, Some(&g), e.to_string(), weight_to_value(&w)),
    }

    let c = random_comparison(rng);
    let f = formula(rng, &["a".to_string()], 3, Language::Cn);
    let (left, right) = (c.extension1(&f), c.extension2(&tr1_weak(&f)));
    match (left, right) {
        (Ok(x), Ok(y)) if x == y => t.pass("comparison/tr1-weak"),
        (Ok(_), Ok(_)) => t.fail(
            "comparison/tr1-weak",
            None,
            Some(&f),
            "readings disagree".into(),
            comparison_to_value(&c),
        ),
        (Err(e), _) | (_, Err(e)) => t.fail("comparison/tr1-weak", None, Some(&f), e.to_string(), comparison_to_value(&c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        for s in Suite::ALL {
            let a = serde_json::to_string(&fuzz(s, 12, 3)).unwrap();
            let b = serde_json::to_string(&fuzz(s, 12, 3)).unwrap();
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn ellsberg_is_trial_zero() {
        let r = fuzz(Suite::StpCnExpectFail, 1, 0);
        assert!(r.ok);
        assert_eq!(r.failures[0].check, "sure-thing/ellsberg");
    }

    #[test]
    fn shrinking_finds_small_witnesses() {
        let r = fuzz(Suite::StpCnExpectFail, 1000, 7);
        let random: Vec<_> = r.failures.iter().filter(|f| f.check == "sure-thing").collect();
        assert!(!random.is_empty());
        for f in random {
            assert!(f.model["worlds"].as_array().unwrap().len() <= 4, "{:?}", f.model);
        }
    }
}
