//! Oracles, generators and search: the family enumerator, random models
//! and formulas, the axiom pool, seeded fuzz suites, bounded countermodel
//! search and the built-in example models.

mod axioms;
mod builtins;
mod countermodel;
mod families;
mod fuzz;
mod generate;

use thiserror::Error;

pub use axioms::{axiom_pool, Axiom, Principle};
pub use builtins::{
    builtin_comparison, builtin_ellsberg, builtin_lottery, ticket_name, ELLSBERG_ATOMS,
    ELLSBERG_WORLDS,
};
pub use countermodel::{find_countermodel, Countermodel, MAX_SEARCH_WORLDS};
pub use families::{embed, enumerate_families, families_for_key, MAX_FAMILY_GROUND};
pub use fuzz::{fuzz, CheckTally, FuzzFailure, FuzzReport, Suite};
pub use generate::{
    all_partitions, random_cn_model, random_formula, random_partition, random_weight_model,
    FormulaSpec, GenMode, ModelSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Model(#[from] crate::epistemic::ModelError),
    #[error(transparent)]
    Eval(#[from] crate::semantics::EvalError),
}
