//! Comparison models `(W, ⪰, V)`: a bare relation between propositions.
//! Used to show that `L_QP` separates models that `L_CN` cannot.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::semantics::EvalError;
use crate::syntax::{desugar, desugar_qp, Formula};
use crate::worldset::WorldSet;

/// Largest model [`comparison_principle_holds`] accepts.
pub const MAX_PRINCIPLE_WORLDS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComparisonError {
    #[error("duplicate world '{0}'")]
    DuplicateWorld(String),
    #[error("model has no worlds")]
    NoWorlds,
    #[error("set refers to a world outside the model")]
    OutOfRange,
    #[error("model has {0} worlds; the limit is {MAX_PRINCIPLE_WORLDS}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonModel {
    worlds: Vec<String>,
    valuation: BTreeMap<String, WorldSet>,
    geq: BTreeSet<(WorldSet, WorldSet)>,
}

impl ComparisonModel {
    pub fn new(
        worlds: Vec<String>,
        valuation: BTreeMap<String, WorldSet>,
        geq: BTreeSet<(WorldSet, WorldSet)>,
    ) -> Result<Self, ComparisonError> {
        if worlds.is_empty() {
            return Err(ComparisonError::NoWorlds);
        }
        let mut seen = BTreeSet::new();
        for w in &worlds {
            if !seen.insert(w) {
                return Err(ComparisonError::DuplicateWorld(w.clone()));
            }
        }
        let u = WorldSet::full(worlds.len());
        let inside = |s: &WorldSet| s.is_subset(&u);
        if !valuation.values().all(inside) || !geq.iter().all(|(a, b)| inside(a) && inside(b)) {
            return Err(ComparisonError::OutOfRange);
        }
        Ok(Self {
            worlds,
            valuation,
            geq,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn relation(&self) -> &BTreeSet<(WorldSet, WorldSet)> {
        &self.geq
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn related(&self, a: &WorldSet, b: &WorldSet) -> bool {
        self.geq.contains(&(a.clone(), b.clone()))
    }

    fn all_or_nothing(&self, t: bool) -> WorldSet {
        if t {
            self.universe()
        } else {
            WorldSet::new()
        }
    }

    fn ext(&self, f: &Formula, strict_cn: bool) -> Result<WorldSet, EvalError> {
        let u = self.universe();
        Ok(match f {
            Formula::Top => u,
            Formula::Atom(p) => self
                .valuation
                .get(p)
                .cloned()
                .ok_or_else(|| EvalError::UnknownAtom(p.clone()))?,
            Formula::Not(a) => self.ext(a, strict_cn)?.complement_in(&u),
            Formula::And(a, b) => self.ext(a, strict_cn)?.intersection(&self.ext(b, strict_cn)?),
            Formula::Bel(_, a, b) if strict_cn => {
                let (a, b) = (self.ext(a, true)?, self.ext(b, true)?);
                self.all_or_nothing(self.related(&a.intersection(&b), &a.difference(&b)))
            }
            Formula::Geq(_, a, b) if !strict_cn => {
                let (a, b) = (self.ext(a, false)?, self.ext(b, false)?);
                self.all_or_nothing(self.related(&a, &b))
            }
            Formula::Bel(..) => {
                return Err(EvalError::Unsupported {
                    construct: "B",
                    semantics: "⊨₂",
                })
            }
            Formula::Geq(..) => unreachable!("desugar removes ≽"),
            _ => {
                return Err(EvalError::Unsupported {
                    construct: "announcements",
                    semantics: "comparison models",
                })
            }
        })
    }

    /// `⊨₁` denotation of an `L_CN` formula.
    pub fn extension1(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        self.ext(&desugar(f), true)
    }

    /// `⊨₂` denotation of an `L_QP` formula.
    pub fn extension2(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        self.ext(&desugar_qp(f), false)
    }

    fn at(&self, world: &str) -> Result<usize, EvalError> {
        self.world_index(world)
            .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))
    }

    pub fn eval1(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.extension1(f)?.contains(self.at(world)?))
    }

    pub fn eval2(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.extension2(f)?.contains(self.at(world)?))
    }
}

/// The non-strict counterpart of `tr1`: `B(α,β) ↦ (α∧β) ≽ (α∧¬β)`. This
/// is the translation the `⊨₁` clause mirrors on comparison models.
pub fn tr1_weak(f: &Formula) -> Formula {
    match desugar(f) {
        Formula::Not(a) => tr1_weak(&a).not(),
        Formula::And(a, b) => tr1_weak(&a).and(tr1_weak(&b)),
        Formula::Bel(ag, a, b) => {
            let (a, b) = (tr1_weak(&a), tr1_weak(&b));
            Formula::geq(ag, a.clone().and(b.clone()), a.and(b.not()))
        }
        other => other,
    }
}

/// A pair `(A, B)` on which the comparison principle fails: exactly one
/// of `(A,B)` and `(A−B, B−A)` is in the relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrincipleViolation {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub pair_related: bool,
    pub difference_related: bool,
}

fn all_subsets(n: usize) -> Vec<WorldSet> {
    (0..1usize << n)
        .map(|m| WorldSet::from_indices((0..n).filter(|i| m & (1 << i) != 0)))
        .collect()
}

/// Every pair of propositions violating `(A−B, B−A) ∈ ⪰ ⇔ (A,B) ∈ ⪰`.
pub fn comparison_principle_violations(
    n: &ComparisonModel,
) -> Result<Vec<PrincipleViolation>, ComparisonError> {
    let size = n.worlds.len();
    if size > MAX_PRINCIPLE_WORLDS {
        return Err(ComparisonError::TooLarge(size));
    }
    let names = |s: &WorldSet| s.iter().map(|i| n.worlds[i].clone()).collect::<Vec<_>>();
    let subsets = all_subsets(size);
    let mut out = Vec::new();
    for a in &subsets {
        for b in &subsets {
            let pair = n.related(a, b);
            let diff = n.related(&a.difference(b), &b.difference(a));
            if pair != diff {
                out.push(PrincipleViolation {
                    a: names(a),
                    b: names(b),
                    pair_related: pair,
                    difference_related: diff,
                });
            }
        }
    }
    Ok(out)
}

pub fn comparison_principle_holds(n: &ComparisonModel) -> Result<bool, ComparisonError> {
    Ok(comparison_principle_violations(n)?.is_empty())
}

/// `N1` and `N2` over `W = {pq, p, q, none}` (each world named by the
/// atoms true at it).
pub fn separation_models() -> (ComparisonModel, ComparisonModel) {
    let worlds: Vec<String> = ["pq", "p", "q", "none"].iter().map(|s| s.to_string()).collect();
    let set = |xs: &[usize]| WorldSet::from_indices(xs.iter().copied());
    let mut val = BTreeMap::new();
    val.insert("p".to_string(), set(&[0, 1]));
    val.insert("q".to_string(), set(&[0, 2]));
    let only_p = set(&[1]);
    let only_q = set(&[2]);
    let geq1 = BTreeSet::from([(set(&[1, 0]), set(&[2, 0])), (only_p.clone(), only_q.clone())]);
    let geq2 = BTreeSet::from([(only_p, only_q)]);
    let n1 = ComparisonModel::new(worlds.clone(), val.clone(), geq1).expect("well-formed");
    let n2 = ComparisonModel::new(worlds, val, geq2).expect("well-formed");
    (n1, n2)
}

/// `¬(p≽q) ∧ (p∧¬q ≽ ¬p∧q)`.
pub fn distinguishing_formula() -> Formula {
    let (p, q) = (Formula::atom("p"), Formula::atom("q"));
    Formula::geq("a", p.clone(), q.clone())
        .not()
        .and(Formula::geq("a", p.clone().and(q.clone().not()), p.not().and(q)))
}

/// All core `L_CN` formulas over `atoms` and one agent with modal/boolean
/// nesting depth at most `max_depth`, deduplicated up to commutativity of
/// `∧`. Ordered by depth, then by the derived formula order.
pub fn enumerate_cn_formulas(atoms: &[&str], agent: &str, max_depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = std::iter::once(Formula::Top)
        .chain(atoms.iter().map(|a| Formula::atom(*a)))
        .collect();
    all.sort();
    let mut prev_len = 0;
    for _ in 0..max_depth {
        let old = all.len();
        let mut next = Vec::new();
        for (i, a) in all.iter().enumerate() {
            let a_new = i >= prev_len;
            if a_new {
                next.push(a.clone().not());
            }
            for (j, b) in all.iter().enumerate() {
                // At least one child must come from the previous stratum,
                // otherwise the formula was built in an earlier round.
                if !a_new && j < prev_len {
                    continue;
                }
                if a <= b {
                    next.push(a.clone().and(b.clone()));
                }
                next.push(Formula::bel(agent, a.clone(), b.clone()));
            }
        }
        next.sort();
        next.dedup();
        prev_len = old;
        all.extend(next);
    }
    all
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub max_depth: usize,
    pub distinguishing_formula: String,
    pub distinguishing_valid_on_n1: bool,
    pub distinguishing_valid_on_n2: bool,
    pub cn_formulas_checked: usize,
    pub cn_disagreements: Vec<String>,
    pub comparison_principle_n1: bool,
    pub comparison_principle_n2: bool,
    pub principle_violations_n1: Vec<PrincipleViolation>,
    pub principle_violations_n2: Vec<PrincipleViolation>,
}

pub fn expressivity_separation(max_depth: usize) -> SeparationReport {
    let (n1, n2) = separation_models();
    let d = distinguishing_formula();
    let valid = |n: &ComparisonModel| n.extension2(&d).expect("closed formula") == n.universe();
    let formulas = enumerate_cn_formulas(&["p", "q"], "a", max_depth);
    let disagreements: Vec<String> = formulas
        .par_iter()
        .filter(|f| n1.extension1(f).expect("closed") != n2.extension1(f).expect("closed"))
        .map(|f| f.to_string())
        .collect();
    let v1 = comparison_principle_violations(&n1).expect("four worlds");
    let v2 = comparison_principle_violations(&n2).expect("four worlds");
    SeparationReport {
        max_depth,
        distinguishing_formula: d.to_string(),
        distinguishing_valid_on_n1: valid(&n1),
        distinguishing_valid_on_n2: valid(&n2),
        cn_formulas_checked: formulas.len(),
        cn_disagreements: disagreements,
        comparison_principle_n1: v1.is_empty(),
        comparison_principle_n2: v2.is_empty(),
        principle_violations_n1: v1,
        principle_violations_n2: v2,
    }
}
