//! The part every model kind shares: named worlds, agents, one partition of
//! the worlds per agent (the knowledge cells), and a valuation.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("duplicate world '{0}'")]
    DuplicateWorld(String),
    #[error("duplicate agent '{0}'")]
    DuplicateAgent(String),
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    #[error("unknown agent '{0}'")]
    UnknownAgent(String),
    #[error("cells of agent '{agent}' are not a partition: {detail}")]
    NotAPartition { agent: String, detail: String },
    #[error("cell of agent '{agent}' has {size} worlds, more than the limit of {limit}")]
    CellTooLarge {
        agent: String,
        size: usize,
        limit: usize,
    },
    #[error("agent '{agent}', cell {cell:?}: {detail}")]
    BadFamily {
        agent: String,
        cell: Vec<String>,
        detail: String,
    },
    #[error("invalid weight for agent '{agent}' at world '{world}': {detail}")]
    BadWeight {
        agent: String,
        world: String,
        detail: String,
    },
}

/// One knowledge cell: its worlds in increasing index order.
///
/// Subsets of a cell are also handled as local bit masks, where bit `j`
/// stands for the `j`-th world of the cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    worlds: Vec<usize>,
    set: WorldSet,
}

impl Cell {
    fn new(mut worlds: Vec<usize>) -> Self {
        worlds.sort_unstable();
        let set = WorldSet::from_indices(worlds.iter().copied());
        Self { worlds, set }
    }

    pub fn worlds(&self) -> &[usize] {
        &self.worlds
    }

    pub fn set(&self) -> &WorldSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    /// Local mask of the whole cell. Only meaningful for cells of at most
    /// 32 worlds.
    pub fn full_local(&self) -> u32 {
        if self.worlds.len() >= 32 {
            u32::MAX
        } else {
            (1u32 << self.worlds.len()) - 1
        }
    }

    /// Local mask of `s ∩ cell`.
    pub fn to_local(&self, s: &WorldSet) -> u32 {
        let mut m = 0;
        for (j, &w) in self.worlds.iter().enumerate() {
            if s.contains(w) {
                m |= 1 << j;
            }
        }
        m
    }

    pub fn to_global(&self, local: u32) -> WorldSet {
        self.worlds
            .iter()
            .enumerate()
            .filter(|(j, _)| local & (1 << j) != 0)
            .map(|(_, &w)| w)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Cell>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Index of the cell containing world `w`.
    pub fn cell_index(&self, w: usize) -> usize {
        self.cell_of[w]
    }

    pub fn cell_of(&self, w: usize) -> &Cell {
        &self.cells[self.cell_of[w]]
    }

    pub fn largest_cell(&self) -> usize {
        self.cells.iter().map(Cell::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelBase {
    worlds: Vec<String>,
    world_index: HashMap<String, usize>,
    agents: Vec<String>,
    partitions: Vec<Partition>,
    valuation: BTreeMap<String, WorldSet>,
}

impl ModelBase {
    /// `partitions[i]` lists the cells of `agents[i]` as world indices.
    /// Cells are stored in canonical order (by least world).
    pub fn new(
        worlds: Vec<String>,
        agents: Vec<String>,
        partitions: Vec<Vec<Vec<usize>>>,
        valuation: BTreeMap<String, WorldSet>,
    ) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let mut world_index = HashMap::with_capacity(worlds.len());
        for (i, w) in worlds.iter().enumerate() {
            if world_index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for a in &agents {
            if !seen.insert(a) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        if partitions.len() != agents.len() {
            return Err(ModelError::NotAPartition {
                agent: agents.first().cloned().unwrap_or_default(),
                detail: format!(
                    "{} partitions given for {} agents",
                    partitions.len(),
                    agents.len()
                ),
            });
        }
        let n = worlds.len();
        let mut built = Vec::with_capacity(agents.len());
        for (agent, cells) in agents.iter().zip(partitions) {
            let bad = |detail: String| ModelError::NotAPartition {
                agent: agent.clone(),
                detail,
            };
            let mut cell_of = vec![usize::MAX; n];
            let mut cells: Vec<Cell> = cells.into_iter().map(Cell::new).collect();
            cells.sort_by_key(|c| c.worlds.first().copied());
            for (ci, c) in cells.iter().enumerate() {
                if c.is_empty() {
                    return Err(bad("empty cell".into()));
                }
                for &w in &c.worlds {
                    if w >= n {
                        return Err(bad(format!("world index {w} out of range")));
                    }
                    if cell_of[w] != usize::MAX {
                        return Err(bad(format!("world '{}' in two cells", worlds[w])));
                    }
                    cell_of[w] = ci;
                }
            }
            if let Some(w) = cell_of.iter().position(|&c| c == usize::MAX) {
                return Err(bad(format!("world '{}' in no cell", worlds[w])));
            }
            built.push(Partition { cells, cell_of });
        }
        let universe = WorldSet::full(n);
        for set in valuation.values() {
            if let Some(w) = set.difference(&universe).first() {
                return Err(ModelError::UnknownWorld(format!("#{w}")));
            }
        }
        Ok(Self {
            worlds,
            world_index,
            agents,
            partitions: built,
            valuation,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn universe(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.world_index.get(name).copied()
    }

    pub fn world_name(&self, i: usize) -> &str {
        &self.worlds[i]
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == name)
    }

    pub fn partition(&self, agent: usize) -> &Partition {
        &self.partitions[agent]
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    pub fn atom(&self, name: &str) -> Option<&WorldSet> {
        self.valuation.get(name)
    }

    /// World names of a set, in index order.
    pub fn names(&self, s: &WorldSet) -> Vec<String> {
        s.iter().map(|i| self.worlds[i].clone()).collect()
    }

    /// Resolve world names to a set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<WorldSet, ModelError> {
        names
            .iter()
            .map(|n| {
                self.world_index(n.as_ref())
                    .ok_or_else(|| ModelError::UnknownWorld(n.as_ref().to_string()))
            })
            .collect()
    }

    /// The same frame restricted to `keep`, with cells intersected and
    /// optionally split by `split`. Returns the new base and, for each new
    /// world, its old index.
    pub(crate) fn refine(&self, keep: &WorldSet, split: Option<&WorldSet>) -> (ModelBase, Vec<usize>) {
        let old_of_new: Vec<usize> = keep.iter().collect();
        let mut new_of_old = vec![usize::MAX; self.worlds.len()];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        let remap = |s: &WorldSet| -> WorldSet {
            s.intersection(keep).iter().map(|o| new_of_old[o]).collect()
        };
        let partitions = self
            .partitions
            .iter()
            .map(|p| {
                let mut cells = Vec::new();
                for c in &p.cells {
                    let kept = c.set.intersection(keep);
                    let parts = match split {
                        Some(s) => vec![kept.intersection(s), kept.difference(s)],
                        None => vec![kept],
                    };
                    for part in parts.into_iter().filter(|x| !x.is_empty()) {
                        cells.push(remap(&part).iter().collect());
                    }
                }
                cells
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(k, v)| (k.clone(), remap(v)))
            .collect();
        let worlds = old_of_new.iter().map(|&o| self.worlds[o].clone()).collect();
        let base = ModelBase::new(worlds, self.agents.clone(), partitions, valuation)
            .expect("refining a valid frame yields a valid frame");
        (base, old_of_new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn rejects_non_partitions() {
        let w = names(&["u", "v", "x"]);
        let ok = ModelBase::new(w.clone(), names(&["a"]), vec![vec![vec![0, 2], vec![1]]], BTreeMap::new());
        assert!(ok.is_ok());
        let overlap = ModelBase::new(w.clone(), names(&["a"]), vec![vec![vec![0, 1], vec![1, 2]]], BTreeMap::new());
        assert!(matches!(overlap, Err(ModelError::NotAPartition { .. })));
        let gap = ModelBase::new(w.clone(), names(&["a"]), vec![vec![vec![0, 1]]], BTreeMap::new());
        assert!(matches!(gap, Err(ModelError::NotAPartition { .. })));
        let empty = ModelBase::new(vec![], names(&["a"]), vec![vec![]], BTreeMap::new());
        assert_eq!(empty, Err(ModelError::NoWorlds));
        let dup = ModelBase::new(names(&["u", "u"]), names(&["a"]), vec![vec![vec![0, 1]]], BTreeMap::new());
        assert_eq!(dup, Err(ModelError::DuplicateWorld("u".into())));
    }

    #[test]
    fn local_masks() {
        let base = ModelBase::new(
            names(&["u", "v", "x", "y"]),
            names(&["a"]),
            vec![vec![vec![3, 1], vec![0, 2]]],
            BTreeMap::new(),
        )
        .unwrap();
        let p = base.partition(0);
        assert_eq!(p.cells()[0].worlds(), &[0, 2]);
        let c = p.cell_of(3);
        assert_eq!(c.worlds(), &[1, 3]);
        assert_eq!(c.to_local(&WorldSet::from_indices([3, 0])), 0b10);
        assert_eq!(c.to_global(0b11), WorldSet::from_indices([1, 3]));
    }

    #[test]
    fn refine_splits_and_restricts() {
        let mut val = BTreeMap::new();
        val.insert("p".to_string(), WorldSet::from_indices([0, 1]));
        let base = ModelBase::new(
            names(&["u", "v", "x", "y"]),
            names(&["a"]),
            vec![vec![vec![0, 1, 2, 3]]],
            val,
        )
        .unwrap();
        let (cut, map) = base.refine(&base.universe(), Some(&WorldSet::from_indices([0, 2])));
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(cut.partition(0).cells().len(), 2);
        let (del, map) = base.refine(&WorldSet::from_indices([1, 3]), None);
        assert_eq!(map, vec![1, 3]);
        assert_eq!(del.worlds(), &names(&["v", "y"])[..]);
        assert_eq!(del.atom("p"), Some(&WorldSet::singleton(0)));
    }
}
