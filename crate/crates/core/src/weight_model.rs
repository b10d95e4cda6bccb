//! Epistemic weight models: every agent puts a positive rational weight on
//! each world, and belief is strict weight dominance inside the agent's
//! knowledge cell.
//!
//! Weights are kept as exact rationals. For evaluation each agent's weights
//! are scaled by the lcm of their denominators into `i128` integers, so
//! every comparison is an exact integer comparison.

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::cn_model::{CnModel, NeighbourhoodFamily};
use crate::dynamics::{self, Refinable, UpdateError};
use crate::epistemic::{ModelBase, ModelError};
use crate::semantics::{self, EvalError, Evaluator, Semantics};
use crate::syntax::{desugar, desugar_qp, Formula, Language};
use crate::worldset::{submasks, WorldSet};

pub type Weight = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightModel {
    base: ModelBase,
    weights: Vec<Vec<Weight>>,
    scaled: Vec<Vec<i128>>,
}

fn scale(agent: &str, worlds: &[String], ws: &[Weight]) -> Result<Vec<i128>, ModelError> {
    let overflow = |i: usize| ModelError::BadWeight {
        agent: agent.to_string(),
        world: worlds[i].clone(),
        detail: "weights too large to compare exactly".into(),
    };
    let mut lcm: i128 = 1;
    for (i, w) in ws.iter().enumerate() {
        let d = *w.denom() as i128;
        lcm = (lcm / lcm.gcd(&d)).checked_mul(d).ok_or_else(|| overflow(i))?;
    }
    let mut total: i128 = 0;
    let mut out = Vec::with_capacity(ws.len());
    for (i, w) in ws.iter().enumerate() {
        let s = (*w.numer() as i128)
            .checked_mul(lcm / *w.denom() as i128)
            .ok_or_else(|| overflow(i))?;
        total = total.checked_add(s).ok_or_else(|| overflow(i))?;
        out.push(s);
    }
    Ok(out)
}

impl WeightModel {
    /// `weights[agent][world]`, every weight strictly positive.
    pub fn new(base: ModelBase, weights: Vec<Vec<Weight>>) -> Result<Self, ModelError> {
        if weights.len() != base.agents().len() {
            return Err(ModelError::BadWeight {
                agent: String::new(),
                world: String::new(),
                detail: "one weight table per agent required".into(),
            });
        }
        let mut scaled = Vec::with_capacity(weights.len());
        for (a, ws) in weights.iter().enumerate() {
            let agent = &base.agents()[a];
            if ws.len() != base.world_count() {
                return Err(ModelError::BadWeight {
                    agent: agent.clone(),
                    world: String::new(),
                    detail: "one weight per world required".into(),
                });
            }
            if let Some(i) = ws.iter().position(|w| *w.numer() <= 0) {
                return Err(ModelError::BadWeight {
                    agent: agent.clone(),
                    world: base.worlds()[i].clone(),
                    detail: format!("{} is not strictly positive", ws[i]),
                });
            }
            scaled.push(scale(agent, base.worlds(), ws)?);
        }
        Ok(Self {
            base,
            weights,
            scaled,
        })
    }

    pub fn base(&self) -> &ModelBase {
        &self.base
    }

    pub fn weight(&self, agent: usize, world: usize) -> Weight {
        self.weights[agent][world]
    }

    pub fn weights(&self, agent: usize) -> &[Weight] {
        &self.weights[agent]
    }

    /// `L_agent(set)` in the agent's scaled integer units.
    pub fn mass(&self, agent: usize, set: &WorldSet) -> i128 {
        set.iter().map(|i| self.scaled[agent][i]).sum()
    }

    /// `L_agent(set)` as an exact rational.
    pub fn rational_mass(&self, agent: usize, set: &WorldSet) -> Ratio<i128> {
        set.iter()
            .map(|i| {
                let w = self.weights[agent][i];
                Ratio::new(*w.numer() as i128, *w.denom() as i128)
            })
            .fold(Ratio::from_integer(0), |a, b| a + b)
    }

    /// Per cell, `L(cell ∩ plus) − L(cell ∩ minus)`.
    fn cell_balance(&self, agent: usize, plus: &WorldSet, minus: &WorldSet) -> Vec<i128> {
        let p = self.base.partition(agent);
        let mut diff = vec![0i128; p.cells().len()];
        for i in plus.iter() {
            diff[p.cell_index(i)] += self.scaled[agent][i];
        }
        for i in minus.iter() {
            diff[p.cell_index(i)] -= self.scaled[agent][i];
        }
        diff
    }

    fn cells_where(&self, agent: usize, diff: &[i128], keep: impl Fn(i128) -> bool) -> WorldSet {
        let mut out = WorldSet::new();
        for (cell, &d) in self.base.partition(agent).cells().iter().zip(diff) {
            if keep(d) {
                out = out.union(cell.set());
            }
        }
        out
    }

    /// Denotation of an `L_CN` or `L_QP` formula; `≽` uses its direct
    /// weight clause.
    pub fn extension(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        semantics::require_language(f, &[Language::Cn, Language::Qp], "weight semantics")?;
        semantics::extension(self, &desugar_qp(f))
    }

    /// Denotation with `≽` read through its belief definition instead.
    pub fn extension_via_belief(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        semantics::require_language(f, &[Language::Cn, Language::Qp], "weight semantics")?;
        semantics::extension(self, &desugar(f))
    }

    /// Denotation of an `L_CN`, `L_PC` or `L_PC±` formula, with
    /// announcements interpreted by the matching weight-model update.
    pub fn extension_dynamic(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        dynamics::dynamic_extension(
            self,
            f,
            &[Language::Cn, Language::Pc, Language::PcPm],
            "weight semantics",
        )
    }

    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = semantics::world_index(&self.base, world)?;
        Ok(self.extension(f)?.contains(w))
    }

    /// The conditional neighbourhood model this weight model gives rise to:
    /// `Y ∈ N(X')` iff `Y ⊆ X'` and `L(Y) > L(X'−Y)`.
    pub fn induce_cn(&self) -> Result<CnModel, ModelError> {
        CnModel::from_fn(self.base.clone(), |a, _, cell, key| {
            let local: Vec<i128> = cell.worlds().iter().map(|&w| self.scaled[a][w]).collect();
            majority_family(&local, key)
        })
    }

    pub fn announce_delete(&self, phi: &Formula) -> Result<WeightModel, UpdateError> {
        dynamics::announce_delete_generic(self, phi)
    }

    pub fn announce_cut(&self, phi: &Formula) -> Result<WeightModel, UpdateError> {
        dynamics::announce_cut_generic(self, phi)
    }
}

/// `{Y ⊆ key | L(Y) > L(key−Y)}` for local weights.
pub fn majority_family(local_weights: &[i128], key: u32) -> NeighbourhoodFamily {
    let mass = |m: u32| -> i128 {
        local_weights
            .iter()
            .enumerate()
            .filter(|(j, _)| m & (1 << j) != 0)
            .map(|(_, w)| w)
            .sum()
    };
    let total = mass(key);
    NeighbourhoodFamily::new(key, submasks(key).filter(|&y| 2 * mass(y) > total))
}

impl Semantics for WeightModel {
    fn base(&self) -> &ModelBase {
        &self.base
    }

    fn name(&self) -> &'static str {
        "weight semantics"
    }

    fn belief(&self, agent: usize, cond: &WorldSet, body: &WorldSet) -> WorldSet {
        let pro = cond.intersection(body);
        let con = cond.difference(body);
        let diff = self.cell_balance(agent, &pro, &con);
        self.cells_where(agent, &diff, |d| d > 0)
    }

    fn geq(&self, agent: usize, left: &WorldSet, right: &WorldSet) -> Result<WorldSet, EvalError> {
        let diff = self.cell_balance(agent, &left.difference(right), &right.difference(left));
        Ok(self.cells_where(agent, &diff, |d| d >= 0))
    }

    fn announce_fact(&self, announced: &WorldSet, body: &Formula) -> Result<WorldSet, EvalError> {
        dynamics::fact_extension(self, announced, body)
    }

    fn announce_value(&self, announced: &WorldSet, body: &Formula) -> Result<WorldSet, EvalError> {
        dynamics::value_extension(self, announced, body)
    }
}

impl Refinable for WeightModel {
    fn refine(&self, keep: &WorldSet, split: Option<&WorldSet>) -> (Self, Vec<usize>) {
        let (base, old_of_new) = self.base.refine(keep, split);
        let weights = self
            .weights
            .iter()
            .map(|ws| old_of_new.iter().map(|&o| ws[o]).collect())
            .collect();
        let m = WeightModel::new(base, weights).expect("sub-model of a valid weight model");
        (m, old_of_new)
    }
}

impl Evaluator for WeightModel {
    fn model_base(&self) -> &ModelBase {
        &self.base
    }

    fn truth_set(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        self.extension(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("formula lists differ in length ({alphas} vs {betas})")]
    LengthMismatch { alphas: usize, betas: usize },
    #[error("formula lists need at least {0} entries")]
    TooShort(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn check_lists(alphas: &[Formula], betas: &[Formula], min: usize) -> Result<(), CheckError> {
    if alphas.len() != betas.len() {
        return Err(CheckError::LengthMismatch {
            alphas: alphas.len(),
            betas: betas.len(),
        });
    }
    if alphas.len() < min {
        return Err(CheckError::TooShort(min));
    }
    Ok(())
}

/// Whether at every cell-mate of `world` the same number of `alphas` as of
/// `betas` are true.
pub fn e_holds<M: Evaluator + ?Sized>(
    m: &M,
    world: &str,
    agent: &str,
    alphas: &[Formula],
    betas: &[Formula],
) -> Result<bool, CheckError> {
    check_lists(alphas, betas, 0)?;
    let base = m.model_base();
    let w = semantics::world_index(base, world)?;
    let a = semantics::agent_index(base, agent)?;
    let ext = |fs: &[Formula]| -> Result<Vec<WorldSet>, EvalError> {
        fs.iter().map(|f| m.truth_set(f)).collect()
    };
    let (xa, xb) = (ext(alphas)?, ext(betas)?);
    let count = |xs: &[WorldSet], v: usize| xs.iter().filter(|x| x.contains(v)).count();
    Ok(base
        .partition(a)
        .cell_of(w)
        .worlds()
        .iter()
        .all(|&v| count(&xa, v) == count(&xb, v)))
}

/// "Exactly `k` of `fs` are true", as a disjunction over index sets.
fn exactly(fs: &[Formula], k: usize) -> Formula {
    let n = fs.len();
    Formula::disjunction((0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| {
        Formula::conjunction(fs.iter().enumerate().map(|(i, f)| {
            if s & (1 << i) != 0 {
                f.clone()
            } else {
                f.clone().not()
            }
        }))
    }))
}

/// `E_a` as a formula: the agent knows that, for every `k`, exactly `k`
/// of the `alphas` hold iff exactly `k` of the `betas` do.
pub fn e_formula(agent: &str, alphas: &[Formula], betas: &[Formula]) -> Result<Formula, CheckError> {
    check_lists(alphas, betas, 0)?;
    let same = Formula::conjunction(
        (0..=alphas.len()).map(|k| exactly(alphas, k).iff(exactly(betas, k))),
    );
    Ok(Formula::know(agent, same))
}

/// The (A4) instance `E ∧ ⋀_{i<m} α_i≽β_i → β_m≽α_m`, with `m` the last
/// index.
pub fn a4_formula(agent: &str, alphas: &[Formula], betas: &[Formula]) -> Result<Formula, CheckError> {
    check_lists(alphas, betas, 2)?;
    let m = alphas.len() - 1;
    let premises = Formula::conjunction(
        (0..m).map(|i| Formula::geq(agent, alphas[i].clone(), betas[i].clone())),
    );
    let conclusion = Formula::geq(agent, betas[m].clone(), alphas[m].clone());
    Ok(e_formula(agent, alphas, betas)?
        .and(premises)
        .implies(conclusion))
}

/// Truth of the (A4) instance at `world`, with `E` checked by counting.
pub fn check_a4<M: Evaluator + ?Sized>(
    m: &M,
    world: &str,
    agent: &str,
    alphas: &[Formula],
    betas: &[Formula],
) -> Result<bool, CheckError> {
    check_lists(alphas, betas, 2)?;
    if !e_holds(m, world, agent, alphas, betas)? {
        return Ok(true);
    }
    let last = alphas.len() - 1;
    for i in 0..last {
        if !m.holds(world, &Formula::geq(agent, alphas[i].clone(), betas[i].clone()))? {
            return Ok(true);
        }
    }
    Ok(m.holds(world, &Formula::geq(agent, betas[last].clone(), alphas[last].clone()))?)
}

/// `B_a(φ,ψ) ∧ B_a(¬φ,ψ) → B_a(⊤,ψ)`.
pub fn sure_thing_formula(agent: &str, phi: &Formula, psi: &Formula) -> Formula {
    Formula::bel(agent, phi.clone(), psi.clone())
        .and(Formula::bel(agent, phi.clone().not(), psi.clone()))
        .implies(Formula::bel(agent, Formula::Top, psi.clone()))
}

/// Truth of the Sure Thing instance under the model's own semantics.
pub fn sure_thing<M: Evaluator + ?Sized>(
    m: &M,
    world: &str,
    agent: &str,
    phi: &Formula,
    psi: &Formula,
) -> Result<bool, EvalError> {
    m.holds(world, &sure_thing_formula(agent, phi, psi))
}
