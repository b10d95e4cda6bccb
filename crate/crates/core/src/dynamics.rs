//! Public announcements: the delete-points update `M^φ`, the cut-links
//! update `M^±φ`, evaluation of `L_PC` / `L_PC±`, the reduction axioms,
//! and a compiler that rewrites announcements away.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cn_model::{CnModel, NeighbourhoodFamily};
use crate::epistemic::Cell;
use crate::semantics::{self, EvalError, Semantics};
use crate::syntax::{desugar, Formula, Language};
use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error("announced formula is true nowhere; the updated model would have no worlds")]
    EmptyExtension,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Models that can be restricted to a set of worlds and have their cells
/// split along a proposition.
pub(crate) trait Refinable: Semantics + Sized {
    /// The submodel on `keep` (non-empty), with every cell additionally
    /// split by `split` if given. Also returns the old index of each new
    /// world.
    fn refine(&self, keep: &WorldSet, split: Option<&WorldSet>) -> (Self, Vec<usize>);
}

/// Bit relabelling from an old cell's local masks to a new cell's, for a
/// new cell contained in the old one.
fn local_map(old: &Cell, new: &Cell, old_of_new: &[usize]) -> Vec<(u32, u32)> {
    new.worlds()
        .iter()
        .enumerate()
        .map(|(j, &nw)| {
            let ow = old_of_new[nw];
            let oj = old.worlds().iter().position(|&x| x == ow).expect("new cell inside old");
            (1u32 << oj, 1u32 << j)
        })
        .collect()
}

fn apply(map: &[(u32, u32)], mask: u32) -> u32 {
    map.iter().filter(|(o, _)| mask & o != 0).map(|(_, n)| n).sum()
}

impl Refinable for CnModel {
    fn refine(&self, keep: &WorldSet, split: Option<&WorldSet>) -> (Self, Vec<usize>) {
        let old = self.base();
        let (base, old_of_new) = old.refine(keep, split);
        let model = CnModel::from_fn(base.clone(), |a, _, cell, key| {
            let op = old.partition(a);
            let oci = op.cell_index(old_of_new[cell.worlds()[0]]);
            let ocell = &op.cells()[oci];
            let to_old = local_map(ocell, cell, &old_of_new);
            let to_new: Vec<(u32, u32)> = to_old.iter().map(|&(o, n)| (n, o)).collect();
            let inverse_inside = |m: u32| apply(&to_new, m);
            // The family for X' ⊆ new cell is the old family under the same
            // world set X'.
            let fam = self.family(a, oci, inverse_inside(key));
            NeighbourhoodFamily::new(key, fam.members().iter().map(|&y| apply(&to_old, y)))
        })
        .expect("refined cells are no larger than the originals");
        (model, old_of_new)
    }
}

pub(crate) fn fact_extension<M: Refinable>(
    m: &M,
    announced: &WorldSet,
    body: &Formula,
) -> Result<WorldSet, EvalError> {
    let universe = m.base().universe();
    if announced.is_empty() {
        return Ok(universe);
    }
    let (updated, old_of_new) = m.refine(announced, None);
    let inner = semantics::extension(&updated, body)?;
    let back: WorldSet = inner.iter().map(|i| old_of_new[i]).collect();
    Ok(universe.difference(announced).union(&back))
}

pub(crate) fn value_extension<M: Refinable>(
    m: &M,
    announced: &WorldSet,
    body: &Formula,
) -> Result<WorldSet, EvalError> {
    let (updated, _) = m.refine(&m.base().universe(), Some(announced));
    semantics::extension(&updated, body)
}

/// Denotation of an `L_CN`, `L_PC` or `L_PC±` formula.
pub(crate) fn dynamic_extension<M: Refinable>(m: &M, f: &Formula, accepted: &[Language], name: &'static str) -> Result<WorldSet, EvalError> {
    semantics::require_language(f, accepted, name)?;
    semantics::extension(m, &desugar(f))
}

pub(crate) fn announce_delete_generic<M: Refinable>(m: &M, phi: &Formula) -> Result<M, UpdateError> {
    let ext = dynamic_extension(m, phi, &[Language::Cn, Language::Pc, Language::PcPm], "update")?;
    if ext.is_empty() {
        return Err(UpdateError::EmptyExtension);
    }
    Ok(m.refine(&ext, None).0)
}

pub(crate) fn announce_cut_generic<M: Refinable>(m: &M, phi: &Formula) -> Result<M, UpdateError> {
    let ext = dynamic_extension(m, phi, &[Language::Cn, Language::Pc, Language::PcPm], "update")?;
    Ok(m.refine(&m.base().universe(), Some(&ext)).0)
}

/// Delete the worlds where `phi` is false.
pub fn announce_delete(m: &CnModel, phi: &Formula) -> Result<CnModel, UpdateError> {
    announce_delete_generic(m, phi)
}

/// Split every knowledge cell into its `phi` part and its `¬phi` part.
pub fn announce_cut(m: &CnModel, phi: &Formula) -> Result<CnModel, UpdateError> {
    announce_cut_generic(m, phi)
}

pub fn extension_pc(m: &CnModel, f: &Formula) -> Result<WorldSet, EvalError> {
    dynamic_extension(m, f, &[Language::Cn, Language::Pc], "L_PC semantics")
}

pub fn extension_pcpm(m: &CnModel, f: &Formula) -> Result<WorldSet, EvalError> {
    dynamic_extension(m, f, &[Language::Cn, Language::PcPm], "L_PC± semantics")
}

pub fn eval_pc(m: &CnModel, world: &str, f: &Formula) -> Result<bool, EvalError> {
    let w = semantics::world_index(m.base(), world)?;
    Ok(extension_pc(m, f)?.contains(w))
}

pub fn eval_pcpm(m: &CnModel, world: &str, f: &Formula) -> Result<bool, EvalError> {
    let w = semantics::world_index(m.base(), world)?;
    Ok(extension_pcpm(m, f)?.contains(w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionSchema {
    /// `[φ]B(ψ,χ) ↔ (φ → B(φ∧[φ]ψ, [φ]χ))`
    PcMain,
    /// `[φ]B(ψ,χ) ↔ (φ → B(φ∧[φ]ψ, φ∧[φ]χ))`
    PcAppendix,
    /// `[φ]ψ ↔ (φ → ψ)` for `ψ` an atom
    PcAtom,
    /// `[φ]¬ψ ↔ (φ → ¬[φ]ψ)`
    PcNeg,
    /// `[φ](ψ∧χ) ↔ ([φ]ψ ∧ [φ]χ)`
    PcAnd,
    /// `[±φ]p ↔ p`
    PcpmAtom,
    /// `[±φ]¬ψ ↔ ¬[±φ]ψ`
    PcpmNeg,
    /// `[±φ](ψ∧χ) ↔ ([±φ]ψ ∧ [±φ]χ)`
    PcpmAnd,
    /// `[±φ]B(ψ,χ) ↔ (φ → B(φ∧[±φ]ψ, [±φ]χ)) ∧ (¬φ → B(¬φ∧[±φ]ψ, [±φ]χ))`
    PcpmB,
}

impl ReductionSchema {
    pub const ALL: [ReductionSchema; 9] = [
        ReductionSchema::PcMain,
        ReductionSchema::PcAppendix,
        ReductionSchema::PcAtom,
        ReductionSchema::PcNeg,
        ReductionSchema::PcAnd,
        ReductionSchema::PcpmAtom,
        ReductionSchema::PcpmNeg,
        ReductionSchema::PcpmAnd,
        ReductionSchema::PcpmB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionSchema::PcMain => "pc-main",
            ReductionSchema::PcAppendix => "pc-appendix",
            ReductionSchema::PcAtom => "pc-atom",
            ReductionSchema::PcNeg => "pc-neg",
            ReductionSchema::PcAnd => "pc-and",
            ReductionSchema::PcpmAtom => "pcpm-atom",
            ReductionSchema::PcpmNeg => "pcpm-neg",
            ReductionSchema::PcpmAnd => "pcpm-and",
            ReductionSchema::PcpmB => "pcpm-B",
        }
    }

    pub fn is_value_announcement(self) -> bool {
        matches!(
            self,
            ReductionSchema::PcpmAtom
                | ReductionSchema::PcpmNeg
                | ReductionSchema::PcpmAnd
                | ReductionSchema::PcpmB
        )
    }

    /// The biconditional for the given instance. For the atom schemas `psi`
    /// must be an atom; `chi` is ignored where the schema has no `χ`.
    pub fn instance(self, inst: &ReductionInstance) -> Formula {
        let ReductionInstance { agent, phi, psi, chi } = inst;
        let fact = |x: &Formula| Formula::announce(phi.clone(), x.clone());
        let value = |x: &Formula| Formula::announce_value(phi.clone(), x.clone());
        let bel = |c: Formula, b: Formula| Formula::bel(agent.clone(), c, b);
        let b_psi_chi = bel(psi.clone(), chi.clone());
        let (lhs, rhs) = match self {
            ReductionSchema::PcMain => (
                fact(&b_psi_chi),
                phi.clone().implies(bel(phi.clone().and(fact(psi)), fact(chi))),
            ),
            ReductionSchema::PcAppendix => (
                fact(&b_psi_chi),
                phi.clone()
                    .implies(bel(phi.clone().and(fact(psi)), phi.clone().and(fact(chi)))),
            ),
            ReductionSchema::PcAtom => (fact(psi), phi.clone().implies(psi.clone())),
            ReductionSchema::PcNeg => (
                fact(&psi.clone().not()),
                phi.clone().implies(fact(psi).not()),
            ),
            ReductionSchema::PcAnd => (
                fact(&psi.clone().and(chi.clone())),
                fact(psi).and(fact(chi)),
            ),
            ReductionSchema::PcpmAtom => (value(psi), psi.clone()),
            ReductionSchema::PcpmNeg => (value(&psi.clone().not()), value(psi).not()),
            ReductionSchema::PcpmAnd => (
                value(&psi.clone().and(chi.clone())),
                value(psi).and(value(chi)),
            ),
            ReductionSchema::PcpmB => (
                value(&b_psi_chi),
                phi.clone()
                    .implies(bel(phi.clone().and(value(psi)), value(chi)))
                    .and(
                        phi.clone()
                            .not()
                            .implies(bel(phi.clone().not().and(value(psi)), value(chi))),
                    ),
            ),
        };
        lhs.iff(rhs)
    }
}

impl fmt::Display for ReductionSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionSchema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown reduction schema '{s}'"))
    }
}

/// The formulas plugged into a reduction schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    pub agent: String,
    pub phi: Formula,
    pub psi: Formula,
    pub chi: Formula,
}

/// Truth of the schema instance at `world`.
pub fn check_reduction(
    m: &CnModel,
    schema: ReductionSchema,
    inst: &ReductionInstance,
    world: &str,
) -> Result<bool, EvalError> {
    let f = schema.instance(inst);
    if schema.is_value_announcement() {
        eval_pcpm(m, world, &f)
    } else {
        eval_pc(m, world, &f)
    }
}

/// Rewrite announcements away with the reduction axioms (the main-text
/// form for `[φ]B`), innermost announcements first. The result is a core
/// `L_CN` formula.
pub fn compile(f: &Formula) -> Formula {
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::Top | Formula::Atom(_) => f.clone(),
            Formula::Not(a) => go(a).not(),
            Formula::And(a, b) => go(a).and(go(b)),
            Formula::Bel(ag, a, b) => Formula::bel(ag.clone(), go(a), go(b)),
            Formula::Geq(ag, a, b) => Formula::geq(ag.clone(), go(a), go(b)),
            Formula::AnnFact(a, b) => push_fact(&go(a), &go(b)),
            Formula::AnnValue(a, b) => push_value(&go(a), &go(b)),
            sugar => go(&desugar(sugar)),
        }
    }
    // `φ → ψ` in core form.
    fn imp(a: Formula, b: Formula) -> Formula {
        a.and(b.not()).not()
    }
    fn push_fact(phi: &Formula, body: &Formula) -> Formula {
        match body {
            Formula::Top | Formula::Atom(_) => imp(phi.clone(), body.clone()),
            Formula::Not(a) => phi.clone().and(push_fact(phi, a)).not(),
            Formula::And(a, b) => push_fact(phi, a).and(push_fact(phi, b)),
            Formula::Bel(ag, a, b) => imp(
                phi.clone(),
                Formula::bel(ag.clone(), phi.clone().and(push_fact(phi, a)), push_fact(phi, b)),
            ),
            other => unreachable!("announcement-free core body expected, got {other}"),
        }
    }
    fn push_value(phi: &Formula, body: &Formula) -> Formula {
        match body {
            Formula::Top | Formula::Atom(_) => body.clone(),
            Formula::Not(a) => push_value(phi, a).not(),
            Formula::And(a, b) => push_value(phi, a).and(push_value(phi, b)),
            Formula::Bel(ag, a, b) => {
                let (a, b) = (push_value(phi, a), push_value(phi, b));
                let pos = imp(phi.clone(), Formula::bel(ag.clone(), phi.clone().and(a.clone()), b.clone()));
                let neg = imp(
                    phi.clone().not(),
                    Formula::bel(ag.clone(), phi.clone().not().and(a), b),
                );
                pos.and(neg)
            }
            other => unreachable!("announcement-free core body expected, got {other}"),
        }
    }
    go(&desugar(f))
}
