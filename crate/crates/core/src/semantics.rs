//! Extension-based evaluation shared by the model kinds that sit on a
//! [`ModelBase`]. Each kind supplies the modal clauses; the boolean
//! skeleton and the atom lookup live here.

use thiserror::Error;

use crate::epistemic::{ModelBase, ModelError};
use crate::syntax::{desugar, Formula, Language};
use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown atom '{0}'")]
    UnknownAtom(String),
    #[error("unknown agent '{0}'")]
    UnknownAgent(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    #[error("{construct} is not interpreted by {semantics}")]
    Unsupported {
        construct: &'static str,
        semantics: &'static str,
    },
    #[error("formula mixes constructors of several languages")]
    MixedLanguage,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Uniform access to the truth sets of the model kinds built on a
/// [`ModelBase`].
pub trait Evaluator {
    fn model_base(&self) -> &ModelBase;

    fn truth_set(&self, f: &Formula) -> Result<WorldSet, EvalError>;

    fn holds(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = world_index(self.model_base(), world)?;
        Ok(self.truth_set(f)?.contains(w))
    }
}

pub(crate) trait Semantics {
    fn base(&self) -> &ModelBase;

    fn name(&self) -> &'static str;

    /// Worlds where `B_agent(cond, body)` holds, given the two extensions.
    fn belief(&self, agent: usize, cond: &WorldSet, body: &WorldSet) -> WorldSet;

    /// Worlds where `left ≽_agent right` holds.
    fn geq(&self, _agent: usize, _left: &WorldSet, _right: &WorldSet) -> Result<WorldSet, EvalError> {
        Err(EvalError::Unsupported {
            construct: "≽",
            semantics: self.name(),
        })
    }

    /// Worlds where `[announced] body` holds.
    fn announce_fact(&self, _announced: &WorldSet, _body: &Formula) -> Result<WorldSet, EvalError> {
        Err(EvalError::Unsupported {
            construct: "[φ]",
            semantics: self.name(),
        })
    }

    /// Worlds where `[±announced] body` holds.
    fn announce_value(&self, _announced: &WorldSet, _body: &Formula) -> Result<WorldSet, EvalError> {
        Err(EvalError::Unsupported {
            construct: "[±φ]",
            semantics: self.name(),
        })
    }
}

pub(crate) fn agent_index(base: &ModelBase, agent: &str) -> Result<usize, EvalError> {
    base.agent_index(agent)
        .ok_or_else(|| EvalError::UnknownAgent(agent.to_string()))
}

pub(crate) fn world_index(base: &ModelBase, world: &str) -> Result<usize, EvalError> {
    base.world_index(world)
        .ok_or_else(|| EvalError::UnknownWorld(world.to_string()))
}

/// The denotation of `f`. Abbreviations are expanded on the fly.
pub(crate) fn extension<S: Semantics + ?Sized>(m: &S, f: &Formula) -> Result<WorldSet, EvalError> {
    let base = m.base();
    Ok(match f {
        Formula::Top => base.universe(),
        Formula::Atom(p) => base
            .atom(p)
            .cloned()
            .ok_or_else(|| EvalError::UnknownAtom(p.clone()))?,
        Formula::Not(a) => extension(m, a)?.complement_in(&base.universe()),
        Formula::And(a, b) => {
            let left = extension(m, a)?;
            if left.is_empty() {
                // Still resolve the right side so unknown atoms are reported.
                extension(m, b)?;
                left
            } else {
                left.intersection(&extension(m, b)?)
            }
        }
        Formula::Bel(ag, a, b) => {
            let agent = agent_index(base, ag)?;
            m.belief(agent, &extension(m, a)?, &extension(m, b)?)
        }
        Formula::Geq(ag, a, b) => {
            let agent = agent_index(base, ag)?;
            m.geq(agent, &extension(m, a)?, &extension(m, b)?)?
        }
        Formula::AnnFact(a, b) => m.announce_fact(&extension(m, a)?, b)?,
        Formula::AnnValue(a, b) => m.announce_value(&extension(m, a)?, b)?,
        sugar => extension(m, &desugar(sugar))?,
    })
}

/// Reject formulas outside the accepted languages before evaluating.
pub(crate) fn require_language(
    f: &Formula,
    accepted: &[Language],
    semantics: &'static str,
) -> Result<Language, EvalError> {
    let lang = f.language().ok_or(EvalError::MixedLanguage)?;
    if accepted.contains(&lang) {
        return Ok(lang);
    }
    let construct = match lang {
        Language::Cn => "B",
        Language::Qp => "≽",
        Language::Pc => "[φ]",
        Language::PcPm => "[±φ]",
    };
    Err(EvalError::Unsupported { construct, semantics })
}
