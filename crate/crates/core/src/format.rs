//! Canonical JSON files for the three model kinds.
//!
//! Sets are written as world-name lists in declaration order, families are
//! ordered by size and then position, and map keys are sorted, so equal
//! models serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cn_model::{CnModel, NeighbourhoodFamily};
use crate::comparison::{ComparisonError, ComparisonModel};
use crate::epistemic::{ModelBase, ModelError};
use crate::weight_model::{Weight, WeightModel};
use crate::worldset::WorldSet;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot tell the model kind: expected one of 'neighbourhoods', 'weights' or 'geq'")]
    UnknownKind,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModel {
    Cn(CnModel),
    Weight(WeightModel),
    Comparison(ComparisonModel),
}

impl AnyModel {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyModel::Cn(_) => "cn",
            AnyModel::Weight(_) => "weight",
            AnyModel::Comparison(_) => "comparison",
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    cell: Vec<String>,
    families: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CnDoc {
    worlds: Vec<String>,
    agents: Vec<String>,
    valuation: BTreeMap<String, Vec<String>>,
    neighbourhoods: BTreeMap<String, Vec<CellDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightDoc {
    worlds: Vec<String>,
    agents: Vec<String>,
    valuation: BTreeMap<String, Vec<String>>,
    cells: BTreeMap<String, Vec<Vec<String>>>,
    weights: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComparisonDoc {
    worlds: Vec<String>,
    valuation: BTreeMap<String, Vec<String>>,
    geq: Vec<[Vec<String>; 2]>,
}

fn names(worlds: &[String], s: &WorldSet) -> Vec<String> {
    s.iter().map(|i| worlds[i].clone()).collect()
}

/// Sort key for sets: smaller first, then by member positions.
fn set_key(s: &WorldSet) -> (usize, Vec<usize>) {
    (s.len(), s.iter().collect())
}

fn key_string(worlds: &[String], s: &WorldSet) -> String {
    names(worlds, s).join(",")
}

fn valuation_doc(worlds: &[String], v: &BTreeMap<String, WorldSet>) -> BTreeMap<String, Vec<String>> {
    v.iter().map(|(k, s)| (k.clone(), names(worlds, s))).collect()
}

fn parse_set(index: &BTreeMap<&str, usize>, list: &[String]) -> Result<WorldSet, FormatError> {
    let mut s = WorldSet::new();
    for n in list {
        let i = index
            .get(n.as_str())
            .ok_or_else(|| FormatError::Model(ModelError::UnknownWorld(n.clone())))?;
        if s.contains(*i) {
            return Err(FormatError::Invalid(format!("world '{n}' listed twice in a set")));
        }
        s.insert(*i);
    }
    Ok(s)
}

fn world_index(worlds: &[String]) -> BTreeMap<&str, usize> {
    worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect()
}

fn parse_valuation(
    index: &BTreeMap<&str, usize>,
    v: &BTreeMap<String, Vec<String>>,
) -> Result<BTreeMap<String, WorldSet>, FormatError> {
    v.iter()
        .map(|(k, l)| Ok((k.clone(), parse_set(index, l)?)))
        .collect()
}

fn cn_doc(m: &CnModel) -> CnDoc {
    let base = m.base();
    let worlds = base.worlds();
    let mut neighbourhoods = BTreeMap::new();
    for (a, agent) in base.agents().iter().enumerate() {
        let cells = base
            .partition(a)
            .cells()
            .iter()
            .enumerate()
            .map(|(ci, cell)| {
                let families = m
                    .cell_families(a, ci)
                    .iter()
                    .map(|fam| {
                        let mut members: Vec<WorldSet> =
                            fam.members().iter().map(|&y| cell.to_global(y)).collect();
                        members.sort_by_key(set_key);
                        (
                            key_string(worlds, &cell.to_global(fam.ground())),
                            members.iter().map(|s| names(worlds, s)).collect(),
                        )
                    })
                    .collect();
                CellDoc {
                    cell: names(worlds, cell.set()),
                    families,
                }
            })
            .collect();
        neighbourhoods.insert(agent.clone(), cells);
    }
    CnDoc {
        worlds: worlds.to_vec(),
        agents: base.agents().to_vec(),
        valuation: valuation_doc(worlds, base.valuation()),
        neighbourhoods,
    }
}

fn cn_from_doc(doc: CnDoc) -> Result<CnModel, FormatError> {
    let index = world_index(&doc.worlds);
    let valuation = parse_valuation(&index, &doc.valuation)?;
    let mut partitions = Vec::new();
    for agent in &doc.agents {
        let cells = doc
            .neighbourhoods
            .get(agent)
            .ok_or_else(|| FormatError::Invalid(format!("no neighbourhoods for agent '{agent}'")))?;
        let mut part = Vec::new();
        for c in cells {
            part.push(parse_set(&index, &c.cell)?.iter().collect::<Vec<_>>());
        }
        partitions.push(part);
    }
    if let Some(extra) = doc.neighbourhoods.keys().find(|k| !doc.agents.contains(k)) {
        return Err(FormatError::Model(ModelError::UnknownAgent(extra.clone())));
    }
    let base = ModelBase::new(doc.worlds.clone(), doc.agents.clone(), partitions, valuation)?;

    let mut families = Vec::new();
    for (a, agent) in doc.agents.iter().enumerate() {
        let mut per_cell = Vec::new();
        for cell in base.partition(a).cells() {
            let cd = doc.neighbourhoods[agent]
                .iter()
                .find(|c| parse_set(&index, &c.cell).ok().as_ref() == Some(cell.set()))
                .expect("cell came from this document");
            let mut table: Vec<Option<NeighbourhoodFamily>> = vec![None; 1 << cell.len()];
            for (key, members) in &cd.families {
                let key_list: Vec<String> = if key.is_empty() {
                    Vec::new()
                } else {
                    key.split(',').map(|s| s.trim().to_string()).collect()
                };
                let ks = parse_set(&index, &key_list)?;
                if !ks.is_subset(cell.set()) {
                    return Err(FormatError::Invalid(format!(
                        "agent '{agent}': key '{key}' is not inside its cell"
                    )));
                }
                let mut ms = Vec::new();
                for y in members {
                    let ys = parse_set(&index, y)?;
                    if !ys.is_subset(cell.set()) {
                        return Err(FormatError::Invalid(format!(
                            "agent '{agent}', key '{key}': member {y:?} leaves the cell"
                        )));
                    }
                    ms.push(cell.to_local(&ys));
                }
                let local = cell.to_local(&ks);
                if table[local as usize].is_some() {
                    return Err(FormatError::Invalid(format!("agent '{agent}': key '{key}' given twice")));
                }
                table[local as usize] = Some(NeighbourhoodFamily::new(local, ms));
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(k, f)| {
                    f.ok_or_else(|| {
                        FormatError::Invalid(format!(
                            "agent '{agent}': no family for key '{}'",
                            key_string(base.worlds(), &cell.to_global(k as u32))
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            per_cell.push(table);
        }
        families.push(per_cell);
    }
    Ok(CnModel::new(base, families)?)
}

fn ratio_string(r: &Weight) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_ratio(s: &str) -> Result<Weight, FormatError> {
    let r: Ratio<i64> = s
        .trim()
        .parse()
        .map_err(|_| FormatError::Invalid(format!("'{s}' is not a rational 'num/den'")))?;
    Ok(r)
}

fn weight_doc(m: &WeightModel) -> WeightDoc {
    let base = m.base();
    let worlds = base.worlds();
    let mut cells = BTreeMap::new();
    let mut weights = BTreeMap::new();
    for (a, agent) in base.agents().iter().enumerate() {
        cells.insert(
            agent.clone(),
            base.partition(a).cells().iter().map(|c| names(worlds, c.set())).collect(),
        );
        weights.insert(
            agent.clone(),
            worlds
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), ratio_string(&m.weight(a, i))))
                .collect(),
        );
    }
    WeightDoc {
        worlds: worlds.to_vec(),
        agents: base.agents().to_vec(),
        valuation: valuation_doc(worlds, base.valuation()),
        cells,
        weights,
    }
}

fn weight_from_doc(doc: WeightDoc) -> Result<WeightModel, FormatError> {
    let index = world_index(&doc.worlds);
    let valuation = parse_valuation(&index, &doc.valuation)?;
    let mut partitions = Vec::new();
    let mut weights = Vec::new();
    for agent in &doc.agents {
        let cells = doc
            .cells
            .get(agent)
            .ok_or_else(|| FormatError::Invalid(format!("no cells for agent '{agent}'")))?;
        partitions.push(
            cells
                .iter()
                .map(|c| Ok(parse_set(&index, c)?.iter().collect()))
                .collect::<Result<Vec<Vec<usize>>, FormatError>>()?,
        );
        let table = doc
            .weights
            .get(agent)
            .ok_or_else(|| FormatError::Invalid(format!("no weights for agent '{agent}'")))?;
        if let Some(w) = table.keys().find(|w| !index.contains_key(w.as_str())) {
            return Err(FormatError::Model(ModelError::UnknownWorld(w.clone())));
        }
        weights.push(
            doc.worlds
                .iter()
                .map(|w| {
                    table
                        .get(w)
                        .ok_or_else(|| FormatError::Invalid(format!("agent '{agent}': no weight for world '{w}'")))
                        .and_then(|s| parse_ratio(s))
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let base = ModelBase::new(doc.worlds.clone(), doc.agents.clone(), partitions, valuation)?;
    Ok(WeightModel::new(base, weights)?)
}

fn comparison_doc(m: &ComparisonModel) -> ComparisonDoc {
    let worlds = m.worlds();
    let mut pairs: Vec<&(WorldSet, WorldSet)> = m.relation().iter().collect();
    pairs.sort_by_key(|(a, b)| (set_key(a), set_key(b)));
    ComparisonDoc {
        worlds: worlds.to_vec(),
        valuation: valuation_doc(worlds, m.valuation()),
        geq: pairs
            .into_iter()
            .map(|(a, b)| [names(worlds, a), names(worlds, b)])
            .collect(),
    }
}

fn comparison_from_doc(doc: ComparisonDoc) -> Result<ComparisonModel, FormatError> {
    let index = world_index(&doc.worlds);
    let valuation = parse_valuation(&index, &doc.valuation)?;
    let geq: BTreeSet<(WorldSet, WorldSet)> = doc
        .geq
        .iter()
        .map(|[a, b]| Ok((parse_set(&index, a)?, parse_set(&index, b)?)))
        .collect::<Result<_, FormatError>>()?;
    Ok(ComparisonModel::new(doc.worlds.clone(), valuation, geq)?)
}

pub fn cn_to_value(m: &CnModel) -> Value {
    serde_json::to_value(cn_doc(m)).expect("serializable")
}

pub fn weight_to_value(m: &WeightModel) -> Value {
    serde_json::to_value(weight_doc(m)).expect("serializable")
}

pub fn comparison_to_value(m: &ComparisonModel) -> Value {
    serde_json::to_value(comparison_doc(m)).expect("serializable")
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_model(m: &AnyModel) -> String {
    to_canonical_string(&match m {
        AnyModel::Cn(m) => cn_to_value(m),
        AnyModel::Weight(m) => weight_to_value(m),
        AnyModel::Comparison(m) => comparison_to_value(m),
    })
}

/// Read a model file, telling the kind apart by its distinguishing field.
pub fn read_model(text: &str) -> Result<AnyModel, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    if has("neighbourhoods") {
        Ok(AnyModel::Cn(cn_from_doc(serde_json::from_value(v)?)?))
    } else if has("weights") {
        Ok(AnyModel::Weight(weight_from_doc(serde_json::from_value(v)?)?))
    } else if has("geq") {
        Ok(AnyModel::Comparison(comparison_from_doc(serde_json::from_value(v)?)?))
    } else {
        Err(FormatError::UnknownKind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_text() {
        assert_eq!(parse_ratio("3/6").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("4").unwrap(), Ratio::from_integer(4));
        assert!(parse_ratio("0.5").is_err());
        assert_eq!(ratio_string(&Ratio::from_integer(2)), "2/1");
    }

    #[test]
    fn unknown_kind_is_rejected() {
        assert!(matches!(read_model("{\"worlds\": [\"u\"]}"), Err(FormatError::UnknownKind)));
        assert!(matches!(read_model("not json"), Err(FormatError::Json(_))));
    }
}
