//! Conditional neighbourhood logic: syntax, models, updates, comparative
//! probability and a randomized verification lab.

pub mod cn_model;
pub mod comparison;
pub mod dynamics;
pub mod epistemic;
pub mod format;
pub mod lab;
pub mod semantics;
pub mod syntax;
pub mod weight_model;
pub mod worldset;

pub use cn_model::{CnModel, NeighbourhoodFamily, ValidationReport};
pub use epistemic::{Cell, ModelBase, ModelError, Partition};
pub use semantics::{EvalError, Evaluator};
pub use syntax::{parse, Formula, Language, ParseError};
pub use weight_model::WeightModel;
pub use worldset::WorldSet;
