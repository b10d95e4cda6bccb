//! Bounded countermodel search over single-agent models.
//!
//! Worlds, partitions, valuations and evaluation worlds are enumerated
//! exhaustively. Families are assigned lazily: the formula is evaluated
//! pointwise against a partial assignment, and the search branches over
//! all valid families for a key only when evaluation first needs it. Any
//! completion of a falsifying partial assignment is a countermodel.

use std::collections::BTreeMap;

use crate::cn_model::{holds_at, CnModel, FamilySource, NeighbourhoodFamily};
use crate::epistemic::ModelBase;
use crate::semantics::{require_language, EvalError};
use crate::syntax::{desugar, Formula, Language};
use crate::worldset::WorldSet;

use super::families::{families_for_key, MAX_FAMILY_GROUND};
use super::generate::{all_partitions, world_names};
use super::LabError;

/// Largest model the search considers.
pub const MAX_SEARCH_WORLDS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: CnModel,
    pub world: String,
}

enum Signal {
    Unassigned(usize, u32),
    Eval(EvalError),
}

impl From<EvalError> for Signal {
    fn from(e: EvalError) -> Self {
        Signal::Eval(e)
    }
}

struct Partial<'a> {
    base: &'a ModelBase,
    slots: Vec<Vec<Option<NeighbourhoodFamily>>>,
}

impl FamilySource for Partial<'_> {
    type Error = Signal;

    fn base(&self) -> &ModelBase {
        self.base
    }

    fn family(&self, _agent: usize, cell: usize, key: u32) -> Result<&NeighbourhoodFamily, Signal> {
        self.slots[cell][key as usize]
            .as_ref()
            .ok_or(Signal::Unassigned(cell, key))
    }
}

impl Partial<'_> {
    fn complete(&self) -> CnModel {
        CnModel::from_fn(self.base.clone(), |_, ci, _, key| {
            self.slots[ci][key as usize]
                .clone()
                .unwrap_or_else(|| families_for_key(key)[0].clone())
        })
        .expect("cells within the enumeration cap")
    }
}

/// Returns `Some(model)` if some completion of the current assignment
/// falsifies `f` at `w`.
fn search(p: &mut Partial, w: usize, f: &Formula) -> Result<Option<CnModel>, EvalError> {
    match holds_at(p, w, f) {
        Ok(true) => Ok(None),
        Ok(false) => Ok(Some(p.complete())),
        Err(Signal::Eval(e)) => Err(e),
        Err(Signal::Unassigned(cell, key)) => {
            for fam in families_for_key(key) {
                p.slots[cell][key as usize] = Some(fam);
                if let Some(m) = search(p, w, f)? {
                    return Ok(Some(m));
                }
            }
            p.slots[cell][key as usize] = None;
            Ok(None)
        }
    }
}

/// The first single-agent model with at most `max_worlds` worlds and a
/// world where `f` is false, or `None` if `f` holds throughout the bound.
///
/// `≽` is read through its belief definition.
pub fn find_countermodel(f: &Formula, max_worlds: usize) -> Result<Option<Countermodel>, LabError> {
    if max_worlds == 0 || max_worlds > MAX_SEARCH_WORLDS {
        return Err(LabError::Cap(format!("max_worlds must be in 1..={MAX_SEARCH_WORLDS}")));
    }
    require_language(f, &[Language::Cn, Language::Qp], "countermodel search")?;
    let agents = f.agents();
    if agents.len() > 1 {
        return Err(LabError::Param("countermodel search is single-agent".into()));
    }
    let agent = agents.into_iter().next().unwrap_or_else(|| "a".to_string());
    let core = desugar(f);
    let atoms: Vec<String> = f.atoms().into_iter().collect();

    for n in 1..=max_worlds {
        let bits = n * atoms.len();
        if bits >= 63 {
            return Err(LabError::Cap("too many valuations".into()));
        }
        for partition in all_partitions(n, MAX_FAMILY_GROUND) {
            for code in 0u64..1 << bits {
                let valuation: BTreeMap<String, WorldSet> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let set = (0..n).filter(|w| code & (1 << (i * n + w)) != 0).collect();
                        (a.clone(), set)
                    })
                    .collect();
                let base = ModelBase::new(world_names(n), vec![agent.clone()], vec![partition.clone()], valuation)?;
                let slots = base
                    .partition(0)
                    .cells()
                    .iter()
                    .map(|c| vec![None; 1 << c.len()])
                    .collect();
                let mut p = Partial { base: &base, slots };
                for w in 0..n {
                    if let Some(model) = search(&mut p, w, &core)? {
                        return Ok(Some(Countermodel {
                            world: model.base().world_name(w).to_string(),
                            model,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}
