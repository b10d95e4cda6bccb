//! Seeded random models and formulas.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cn_model::CnModel;
use crate::epistemic::ModelBase;
use crate::syntax::{Formula, Language};
use crate::weight_model::{majority_family, WeightModel};
use crate::worldset::WorldSet;

use super::families::{families_for_key, MAX_FAMILY_GROUND};
use super::LabError;

/// Largest model the generators build.
pub const MAX_GEN_WORLDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    /// Every family drawn uniformly from the enumerated valid families.
    Enumerated,
    /// Induced from random weights.
    WeightInduced,
    /// Each cell independently one of the two.
    Mixed,
}

impl FromStr for GenMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "enumerated" => Ok(GenMode::Enumerated),
            "weight-induced" => Ok(GenMode::WeightInduced),
            "mixed" => Ok(GenMode::Mixed),
            _ => Err(format!("unknown generation mode '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub num_worlds: usize,
    pub num_agents: usize,
    pub cell_size_max: usize,
    pub atoms: Vec<String>,
    pub mode: GenMode,
}

impl ModelSpec {
    pub fn new(num_worlds: usize, num_agents: usize, cell_size_max: usize, atoms: &[&str], mode: GenMode) -> Self {
        Self {
            num_worlds,
            num_agents,
            cell_size_max,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            mode,
        }
    }

    fn check(&self) -> Result<(), LabError> {
        if self.num_worlds == 0 || self.num_worlds > MAX_GEN_WORLDS {
            return Err(LabError::Param(format!("num_worlds must be in 1..={MAX_GEN_WORLDS}")));
        }
        if self.num_agents == 0 || self.num_agents > 26 {
            return Err(LabError::Param("num_agents must be in 1..=26".into()));
        }
        if self.cell_size_max == 0 || self.cell_size_max > MAX_FAMILY_GROUND {
            return Err(LabError::Cap(format!(
                "cell_size_max must be in 1..={MAX_FAMILY_GROUND}"
            )));
        }
        Ok(())
    }
}

pub(crate) fn agent_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub(crate) fn world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of set partitions of `m` elements with blocks of size ≤ `k`,
/// for every `m ≤ n`.
fn partition_counts(n: usize, k: usize) -> Vec<u128> {
    let mut p = vec![1u128; n + 1];
    for m in 1..=n {
        p[m] = (1..=k.min(m)).map(|s| binomial(m - 1, s - 1) * p[m - s]).sum();
    }
    p
}

/// A partition of `{0, .., n-1}` drawn uniformly among those whose blocks
/// have at most `k` elements.
pub fn random_partition<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let counts = partition_counts(n, k);
    let mut rest: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    while let Some(&first) = rest.first() {
        let m = rest.len();
        let mut r = rng.gen_range(0..counts[m]);
        let mut size = 1;
        for s in 1..=k.min(m) {
            let w = binomial(m - 1, s - 1) * counts[m - s];
            if r < w {
                size = s;
                break;
            }
            r -= w;
        }
        let others = &rest[1..];
        let mut block = vec![first];
        block.extend(sample(rng, others.len(), size - 1).into_iter().map(|i| others[i]));
        block.sort_unstable();
        rest.retain(|x| !block.contains(x));
        blocks.push(block);
    }
    blocks
}

/// Every partition of `{0, .., n-1}` with blocks of at most `k` elements,
/// in restricted-growth order.
pub fn all_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].len() < k {
                blocks[b].push(i);
                go(i + 1, n, k, blocks, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![i]);
        go(i + 1, n, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn random_base<R: Rng + ?Sized>(spec: &ModelSpec, rng: &mut R) -> ModelBase {
    let partitions = (0..spec.num_agents)
        .map(|_| random_partition(spec.num_worlds, spec.cell_size_max, rng))
        .collect();
    let valuation: BTreeMap<String, WorldSet> = spec
        .atoms
        .iter()
        .map(|a| {
            let set = (0..spec.num_worlds).filter(|_| rng.gen_bool(0.5)).collect();
            (a.clone(), set)
        })
        .collect();
    ModelBase::new(
        world_names(spec.num_worlds),
        agent_names(spec.num_agents),
        partitions,
        valuation,
    )
    .expect("generated frames are well-formed")
}

fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> Ratio<i64> {
    Ratio::new(rng.gen_range(1..=16), rng.gen_range(1..=16))
}

pub(crate) fn gen_weight_model<R: Rng + ?Sized>(spec: &ModelSpec, rng: &mut R) -> Result<WeightModel, LabError> {
    spec.check()?;
    let base = random_base(spec, rng);
    let weights = (0..spec.num_agents)
        .map(|_| (0..spec.num_worlds).map(|_| random_weight(rng)).collect())
        .collect();
    Ok(WeightModel::new(base, weights)?)
}

pub(crate) fn gen_cn_model<R: Rng + ?Sized>(spec: &ModelSpec, rng: &mut R) -> Result<CnModel, LabError> {
    spec.check()?;
    if spec.mode == GenMode::WeightInduced {
        return Ok(gen_weight_model(spec, rng)?.induce_cn()?);
    }
    let base = random_base(spec, rng);
    // Decide per cell up front so the family closure stays simple.
    let mut plans: Vec<Vec<Option<Vec<i128>>>> = Vec::new();
    for a in 0..spec.num_agents {
        let cells = base.partition(a).cells();
        plans.push(
            cells
                .iter()
                .map(|c| {
                    let weighted = spec.mode == GenMode::Mixed && rng.gen_bool(0.5);
                    weighted.then(|| (0..c.len()).map(|_| rng.gen_range(1..=16)).collect())
                })
                .collect(),
        );
    }
    let model = CnModel::from_fn(base, |a, ci, _, key| match &plans[a][ci] {
        Some(weights) => majority_family(weights, key),
        None => {
            let options = families_for_key(key);
            options[rng.gen_range(0..options.len())].clone()
        }
    })?;
    Ok(model)
}

/// A random conditional neighbourhood model, determined by `(spec, seed)`.
pub fn random_cn_model(spec: &ModelSpec, seed: u64) -> Result<CnModel, LabError> {
    gen_cn_model(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A random weight model with weights `n/d`, `1 ≤ n, d ≤ 16`.
pub fn random_weight_model(spec: &ModelSpec, seed: u64) -> Result<WeightModel, LabError> {
    gen_weight_model(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSpec {
    pub depth: usize,
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    pub language: Language,
}

impl FormulaSpec {
    pub fn new(depth: usize, atoms: &[&str], agents: &[&str], language: Language) -> Self {
        Self {
            depth,
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            agents: agents.iter().map(|s| s.to_string()).collect(),
            language,
        }
    }
}

#[derive(Clone, Copy)]
enum Node {
    Leaf,
    Not,
    And,
    Modal,
    Fact,
    Value,
}

/// A random core formula of nesting depth at most `spec.depth`: at each
/// level the constructor is uniform among a leaf, `¬`, `∧`, the language's
/// modality and its announcement (if any).
pub(crate) fn gen_formula<R: Rng + ?Sized>(spec: &FormulaSpec, rng: &mut R) -> Formula {
    fn leaf<R: Rng + ?Sized>(spec: &FormulaSpec, rng: &mut R) -> Formula {
        let i = rng.gen_range(0..=spec.atoms.len());
        if i == spec.atoms.len() {
            Formula::Top
        } else {
            Formula::atom(spec.atoms[i].clone())
        }
    }
    fn go<R: Rng + ?Sized>(spec: &FormulaSpec, d: usize, rng: &mut R) -> Formula {
        if d == 0 {
            return leaf(spec, rng);
        }
        let mut nodes = vec![Node::Leaf, Node::Not, Node::And, Node::Modal];
        match spec.language {
            Language::Pc => nodes.push(Node::Fact),
            Language::PcPm => nodes.push(Node::Value),
            _ => {}
        }
        let agent = |rng: &mut R| spec.agents[rng.gen_range(0..spec.agents.len())].clone();
        match nodes[rng.gen_range(0..nodes.len())] {
            Node::Leaf => leaf(spec, rng),
            Node::Not => go(spec, d - 1, rng).not(),
            Node::And => go(spec, d - 1, rng).and(go(spec, d - 1, rng)),
            Node::Modal => {
                let a = agent(rng);
                let (x, y) = (go(spec, d - 1, rng), go(spec, d - 1, rng));
                if spec.language == Language::Qp {
                    Formula::geq(a, x, y)
                } else {
                    Formula::bel(a, x, y)
                }
            }
            Node::Fact => Formula::announce(go(spec, d - 1, rng), go(spec, d - 1, rng)),
            Node::Value => Formula::announce_value(go(spec, d - 1, rng), go(spec, d - 1, rng)),
        }
    }
    go(spec, spec.depth, rng)
}

pub fn random_formula(spec: &FormulaSpec, seed: u64) -> Formula {
    gen_formula(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}
