//! Conditional neighbourhood models.
//!
//! A model stores one neighbourhood family per `(agent, cell, X')` where
//! `X'` ranges over the subsets of the cell. Looking families up under
//! `X ∩ [w]_a` makes (ec) and (a) hold by construction; the full-table
//! import in [`derive_cells`] is the path for data that may violate them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::epistemic::{Cell, ModelBase, ModelError};
use crate::semantics::{self, EvalError, Semantics};
use crate::syntax::{desugar, desugar_qp, Formula, Language};
use crate::worldset::{submasks, WorldSet};

/// Largest cell for which families are stored explicitly.
pub const MAX_CELL: usize = 12;

/// Largest model [`CnModel::expand`] will tabulate.
pub const MAX_EXPAND_WORLDS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    #[serde(rename = "(c)")]
    C,
    #[serde(rename = "(ec)")]
    Ec,
    #[serde(rename = "(a)")]
    A,
    #[serde(rename = "(d)")]
    D,
    #[serde(rename = "(sc)")]
    Sc,
    #[serde(rename = "(m)")]
    M,
    #[serde(rename = "(ni)")]
    Ni,
    #[serde(rename = "(n*)")]
    NStar,
    #[serde(rename = "(∅)")]
    Empty,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C => "(c)",
            Condition::Ec => "(ec)",
            Condition::A => "(a)",
            Condition::D => "(d)",
            Condition::Sc => "(sc)",
            Condition::M => "(m)",
            Condition::Ni => "(ni)",
            Condition::NStar => "(n*)",
            Condition::Empty => "(∅)",
        };
        f.write_str(s)
    }
}

/// A violated condition inside one family, with witnesses as local masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalViolation {
    pub condition: Condition,
    pub y: Option<u32>,
    pub z: Option<u32>,
}

impl LocalViolation {
    fn new(condition: Condition, y: Option<u32>, z: Option<u32>) -> Self {
        Self { condition, y, z }
    }
}

/// `N_a^w(X)` for one key `X' = X ∩ [w]_a`.
///
/// `ground` and `members` are local masks relative to the owning cell (see
/// [`Cell::to_local`]). Members are kept sorted and deduplicated, so equal
/// families compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighbourhoodFamily {
    ground: u32,
    members: Vec<u32>,
}

/// Positions of the set bits of `mask`, low to high.
fn bit_positions(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Maps between cell-local masks and dense masks over the ground's bits.
struct Compressor {
    bits: Vec<u32>,
}

impl Compressor {
    fn new(ground: u32) -> Self {
        Self {
            bits: bit_positions(ground),
        }
    }

    fn size(&self) -> usize {
        1 << self.bits.len()
    }

    fn compress(&self, local: u32) -> usize {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| local & (1 << b) != 0)
            .map(|(j, _)| 1usize << j)
            .sum()
    }

    fn expand(&self, dense: usize) -> u32 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(j, _)| dense & (1 << j) != 0)
            .map(|(_, &b)| 1u32 << b)
            .sum()
    }
}

impl NeighbourhoodFamily {
    pub fn new<I: IntoIterator<Item = u32>>(ground: u32, members: I) -> Self {
        let mut members: Vec<u32> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { ground, members }
    }

    pub fn empty(ground: u32) -> Self {
        Self {
            ground,
            members: Vec::new(),
        }
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, y: u32) -> bool {
        self.members.binary_search(&y).is_ok()
    }

    /// Whether some member is a subset of `target`.
    pub fn has_member_within(&self, target: u32) -> bool {
        self.members.iter().any(|&y| y & !target == 0)
    }

    /// Apply a bit relabelling to ground and members.
    pub fn relabel(&self, map: impl Fn(u32) -> u32) -> Self {
        Self::new(map(self.ground), self.members.iter().map(|&y| map(y)))
    }

    /// Membership table over the dense subsets of the ground. Members that
    /// stick out of the ground are left out.
    fn table(&self, comp: &Compressor) -> Vec<bool> {
        let mut mem = vec![false; comp.size()];
        for &y in &self.members {
            if y & !self.ground == 0 {
                mem[comp.compress(y)] = true;
            }
        }
        mem
    }

    /// For each dense set `s`: does some superset of `s` (inclusive) fail
    /// to be a member?
    fn nonmember_above(mem: &[bool], n: usize) -> Vec<bool> {
        let mut above: Vec<bool> = mem.iter().map(|&m| !m).collect();
        for bit in 0..n {
            for s in (0..mem.len()).rev() {
                if s & (1 << bit) == 0 && above[s | (1 << bit)] {
                    above[s] = true;
                }
            }
        }
        above
    }

    /// Violations of (c), (d) and (sc), at most one witness per condition.
    pub fn check_basic(&self) -> Vec<LocalViolation> {
        let mut out = Vec::new();
        if let Some(&y) = self.members.iter().find(|&&y| y & !self.ground != 0) {
            out.push(LocalViolation::new(Condition::C, Some(y), None));
        }
        let comp = Compressor::new(self.ground);
        let n = comp.bits.len();
        assert!(n <= 20, "family ground too large to check");
        let full = comp.size() - 1;
        let mem = self.table(&comp);

        if let Some(y) = (0..=full).find(|&y| mem[y] && mem[full ^ y]) {
            out.push(LocalViolation::new(
                Condition::D,
                Some(comp.expand(y)),
                Some(comp.expand(full ^ y)),
            ));
        }

        // (sc) fails iff Y ⊊ Z with G−Y and Z both non-members. Writing
        // T = G−Y, that is a non-member T strictly above G−Z.
        let above = Self::nonmember_above(&mem, n);
        let strictly_above = |s: usize| (0..n).any(|b| s & (1 << b) == 0 && above[s | (1 << b)]);
        if let Some(z) = (0..=full).find(|&z| !mem[z] && strictly_above(full ^ z)) {
            let gz = full ^ z;
            let t = (0..=full)
                .find(|&t| !mem[t] && t & gz == gz && t != gz)
                .expect("witness exists");
            out.push(LocalViolation::new(
                Condition::Sc,
                Some(comp.expand(full ^ t)),
                Some(comp.expand(z)),
            ));
        }
        out
    }

    /// Violations of (m), (ni), (n*) and (∅).
    pub fn check_derived(&self) -> Vec<LocalViolation> {
        let mut out = Vec::new();
        let comp = Compressor::new(self.ground);
        let n = comp.bits.len();
        assert!(n <= 20, "family ground too large to check");
        let full = comp.size() - 1;
        let mem = self.table(&comp);
        let above = Self::nonmember_above(&mem, n);
        if let Some(y) = (0..=full).find(|&y| mem[y] && above[y]) {
            let z = (0..=full)
                .find(|&z| !mem[z] && z & y == y)
                .expect("witness exists");
            out.push(LocalViolation::new(
                Condition::M,
                Some(comp.expand(y)),
                Some(comp.expand(z)),
            ));
        }
        if self.contains(0) {
            out.push(LocalViolation::new(Condition::Ni, Some(0), None));
        }
        if self.ground != 0 && !self.contains(self.ground) {
            out.push(LocalViolation::new(Condition::NStar, Some(self.ground), None));
        }
        if self.ground == 0 && !self.members.is_empty() {
            out.push(LocalViolation::new(Condition::Empty, Some(self.members[0]), None));
        }
        out
    }

    /// Whether (c), (d) and (sc) hold.
    pub fn is_valid(&self) -> bool {
        self.check_basic().is_empty()
    }
}

/// One violated condition located in a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub agent: String,
    pub cell: Vec<String>,
    pub key: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<String>>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} agent={} cell={{{}}} key={{{}}}",
            self.condition,
            self.agent,
            self.cell.join(","),
            self.key.join(",")
        )?;
        if let Some(y) = &self.y {
            write!(f, " Y={{{}}}", y.join(","))?;
        }
        if let Some(z) = &self.z {
            write!(f, " Z={{{}}}", z.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conditions(&self) -> Vec<Condition> {
        let mut c: Vec<Condition> = self.violations.iter().map(|v| v.condition).collect();
        c.sort();
        c.dedup();
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnModel {
    base: ModelBase,
    /// `families[agent][cell][key]`, `key` a local mask.
    families: Vec<Vec<Vec<NeighbourhoodFamily>>>,
}

impl CnModel {
    /// Build a model from per-cell family tables indexed by local key.
    /// Shape errors are rejected; condition violations are left for
    /// [`CnModel::validate`] to report.
    pub fn new(
        base: ModelBase,
        families: Vec<Vec<Vec<NeighbourhoodFamily>>>,
    ) -> Result<Self, ModelError> {
        if families.len() != base.agents().len() {
            return Err(ModelError::NotAPartition {
                agent: String::new(),
                detail: "family tables do not match the agents".into(),
            });
        }
        for (a, per_cell) in families.iter().enumerate() {
            let agent = &base.agents()[a];
            let cells = base.partition(a).cells();
            if per_cell.len() != cells.len() {
                return Err(ModelError::NotAPartition {
                    agent: agent.clone(),
                    detail: "family tables do not match the cells".into(),
                });
            }
            for (cell, table) in cells.iter().zip(per_cell) {
                if cell.len() > MAX_CELL {
                    return Err(ModelError::CellTooLarge {
                        agent: agent.clone(),
                        size: cell.len(),
                        limit: MAX_CELL,
                    });
                }
                let bad = |detail: String| ModelError::BadFamily {
                    agent: agent.clone(),
                    cell: base.names(cell.set()),
                    detail,
                };
                if table.len() != 1 << cell.len() {
                    return Err(bad(format!(
                        "{} families given, {} keys needed",
                        table.len(),
                        1 << cell.len()
                    )));
                }
                let full = cell.full_local();
                for (key, fam) in table.iter().enumerate() {
                    if fam.ground() != key as u32 {
                        return Err(bad(format!("family stored under the wrong key {key}")));
                    }
                    if fam.members().iter().any(|&y| y & !full != 0) {
                        return Err(bad("member outside the cell".into()));
                    }
                }
            }
        }
        Ok(Self { base, families })
    }

    /// Build a model by computing each family from its cell and local key.
    pub fn from_fn<F>(base: ModelBase, mut family: F) -> Result<Self, ModelError>
    where
        F: FnMut(usize, usize, &Cell, u32) -> NeighbourhoodFamily,
    {
        let mut families = Vec::with_capacity(base.agents().len());
        for a in 0..base.agents().len() {
            let mut per_cell = Vec::new();
            for (ci, cell) in base.partition(a).cells().iter().enumerate() {
                if cell.len() > MAX_CELL {
                    return Err(ModelError::CellTooLarge {
                        agent: base.agents()[a].clone(),
                        size: cell.len(),
                        limit: MAX_CELL,
                    });
                }
                per_cell.push((0..1u32 << cell.len()).map(|k| family(a, ci, cell, k)).collect());
            }
            families.push(per_cell);
        }
        Self::new(base, families)
    }

    pub fn base(&self) -> &ModelBase {
        &self.base
    }

    pub fn family(&self, agent: usize, cell: usize, key: u32) -> &NeighbourhoodFamily {
        &self.families[agent][cell][key as usize]
    }

    pub fn cell_families(&self, agent: usize, cell: usize) -> &[NeighbourhoodFamily] {
        &self.families[agent][cell]
    }

    /// `N_a^w(X)` as world sets.
    pub fn neighbourhoods(&self, agent: usize, world: usize, x: &WorldSet) -> Vec<WorldSet> {
        let p = self.base.partition(agent);
        let ci = p.cell_index(world);
        let cell = &p.cells()[ci];
        self.family(agent, ci, cell.to_local(x))
            .members()
            .iter()
            .map(|&y| cell.to_global(y))
            .collect()
    }

    fn located(&self, agent: usize, cell: &Cell, key: u32, v: LocalViolation) -> Violation {
        let names = |m: u32| self.base.names(&cell.to_global(m));
        Violation {
            condition: v.condition,
            agent: self.base.agents()[agent].clone(),
            cell: self.base.names(cell.set()),
            key: names(key),
            y: v.y.map(names),
            z: v.z.map(names),
        }
    }

    fn report(&self, check: impl Fn(&NeighbourhoodFamily) -> Vec<LocalViolation>) -> ValidationReport {
        let mut violations = Vec::new();
        for a in 0..self.base.agents().len() {
            for (ci, cell) in self.base.partition(a).cells().iter().enumerate() {
                for (key, fam) in self.families[a][ci].iter().enumerate() {
                    for v in check(fam) {
                        violations.push(self.located(a, cell, key as u32, v));
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Every violation of (c), (d) and (sc) over all stored families.
    pub fn validate(&self) -> ValidationReport {
        self.report(NeighbourhoodFamily::check_basic)
    }

    /// Every violation of (m), (ni), (n*) and (∅). Empty on valid models.
    pub fn derived_check(&self) -> ValidationReport {
        self.report(NeighbourhoodFamily::check_derived)
    }

    /// Denotation of an `L_CN` formula (`≽` is read through its `B`
    /// definition).
    pub fn extension(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        semantics::require_language(f, &[Language::Cn, Language::Qp], "cn")?;
        semantics::extension(self, &desugar(f))
    }

    /// Denotation with `≽` kept primitive and interpreted by its own
    /// neighbourhood clause: `α≽β` iff `⟦¬α∧β⟧∩[w]` is not in
    /// `N(⟦α↔¬β⟧)`.
    pub fn extension_qp(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        semantics::require_language(f, &[Language::Cn, Language::Qp], "cn")?;
        semantics::extension(self, &desugar_qp(f))
    }

    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, EvalError> {
        let w = semantics::world_index(&self.base, world)?;
        Ok(self.extension(f)?.contains(w))
    }

    /// Tabulate `N_a^w(X)` for every agent, world and `X ⊆ W`.
    pub fn expand(&self) -> Result<FullTable, ModelError> {
        let n = self.base.world_count();
        if n > MAX_EXPAND_WORLDS {
            return Err(ModelError::CellTooLarge {
                agent: String::new(),
                size: n,
                limit: MAX_EXPAND_WORLDS,
            });
        }
        let rows = (0..self.base.agents().len())
            .map(|a| {
                (0..n)
                    .map(|w| {
                        (0..1usize << n)
                            .map(|x| {
                                let x = WorldSet::from_indices((0..n).filter(|i| x & (1 << i) != 0));
                                self.neighbourhoods(a, w, &x)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(FullTable {
            worlds: self.base.worlds().to_vec(),
            agents: self.base.agents().to_vec(),
            valuation: self.base.valuation().clone(),
            rows,
        })
    }
}

impl Semantics for CnModel {
    fn base(&self) -> &ModelBase {
        &self.base
    }

    fn name(&self) -> &'static str {
        "conditional neighbourhood semantics"
    }

    fn belief(&self, agent: usize, cond: &WorldSet, body: &WorldSet) -> WorldSet {
        let mut out = WorldSet::new();
        for (ci, cell) in self.base.partition(agent).cells().iter().enumerate() {
            let fam = self.family(agent, ci, cell.to_local(cond));
            if fam.has_member_within(cell.to_local(body)) {
                out = out.union(cell.set());
            }
        }
        out
    }

    fn geq(&self, agent: usize, left: &WorldSet, right: &WorldSet) -> Result<WorldSet, EvalError> {
        let cond = left.union(right).difference(&left.intersection(right));
        let target = right.difference(left);
        let mut out = WorldSet::new();
        for (ci, cell) in self.base.partition(agent).cells().iter().enumerate() {
            let fam = self.family(agent, ci, cell.to_local(&cond));
            if !fam.contains(cell.to_local(&target)) {
                out = out.union(cell.set());
            }
        }
        Ok(out)
    }

    fn announce_fact(&self, announced: &WorldSet, body: &Formula) -> Result<WorldSet, EvalError> {
        crate::dynamics::fact_extension(self, announced, body)
    }

    fn announce_value(&self, announced: &WorldSet, body: &Formula) -> Result<WorldSet, EvalError> {
        crate::dynamics::value_extension(self, announced, body)
    }
}

impl semantics::Evaluator for CnModel {
    fn model_base(&self) -> &ModelBase {
        &self.base
    }

    fn truth_set(&self, f: &Formula) -> Result<WorldSet, EvalError> {
        self.extension(f)
    }
}

/// Where the pointwise evaluator gets its families from.
pub(crate) trait FamilySource {
    type Error: From<EvalError>;

    fn base(&self) -> &ModelBase;

    fn family(&self, agent: usize, cell: usize, key: u32) -> Result<&NeighbourhoodFamily, Self::Error>;
}

impl FamilySource for CnModel {
    type Error = EvalError;

    fn base(&self) -> &ModelBase {
        &self.base
    }

    fn family(&self, agent: usize, cell: usize, key: u32) -> Result<&NeighbourhoodFamily, EvalError> {
        Ok(CnModel::family(self, agent, cell, key))
    }
}

/// Truth at one world, computed world by world straight from the truth
/// clause and without building extensions. Only `L_CN` is interpreted;
/// conjunctions short-circuit, so families are consulted only when needed.
pub(crate) fn holds_at<S: FamilySource>(src: &S, w: usize, f: &Formula) -> Result<bool, S::Error> {
    let base = src.base();
    Ok(match f {
        Formula::Top => true,
        Formula::Atom(p) => base
            .atom(p)
            .ok_or_else(|| EvalError::UnknownAtom(p.clone()))?
            .contains(w),
        Formula::Not(a) => !holds_at(src, w, a)?,
        Formula::And(a, b) => holds_at(src, w, a)? && holds_at(src, w, b)?,
        Formula::Bel(ag, cond, body) => {
            let agent = semantics::agent_index(base, ag)?;
            let p = base.partition(agent);
            let ci = p.cell_index(w);
            let cell = &p.cells()[ci];
            let mut key = 0u32;
            for (j, &v) in cell.worlds().iter().enumerate() {
                if holds_at(src, v, cond)? {
                    key |= 1 << j;
                }
            }
            let fam = src.family(agent, ci, key)?;
            let mut body_at: Vec<Option<bool>> = vec![None; cell.len()];
            let mut found = false;
            'members: for &y in fam.members() {
                for j in bit_positions(y) {
                    let j = j as usize;
                    let t = match body_at[j] {
                        Some(t) => t,
                        None => {
                            let t = holds_at(src, cell.worlds()[j], body)?;
                            body_at[j] = Some(t);
                            t
                        }
                    };
                    if !t {
                        continue 'members;
                    }
                }
                found = true;
                break;
            }
            found
        }
        Formula::Geq(..) | Formula::AnnFact(..) | Formula::AnnValue(..) => {
            return Err(EvalError::Unsupported {
                construct: "≽ or announcements",
                semantics: "the pointwise evaluator",
            }
            .into())
        }
        sugar => holds_at(src, w, &desugar(sugar))?,
    })
}

/// `N_a^w(X)` for every agent, world and `X ⊆ W`, with `X` and the members
/// as world sets; `rows[agent][world][x]` where bit `i` of `x` is world `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullTable {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    pub valuation: BTreeMap<String, WorldSet>,
    pub rows: Vec<Vec<Vec<Vec<WorldSet>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("table violates {condition} for agent '{agent}' at world '{world}', X={x:?}{}",
        .y.as_ref().map(|y| format!(", Y={y:?}")).unwrap_or_default())]
    Factorization {
        condition: Condition,
        agent: String,
        world: String,
        x: Vec<String>,
        y: Option<Vec<String>>,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Recover the knowledge cells of a fully tabulated model by grouping
/// worlds with identical rows, then factor the table through
/// `(agent, cell, X ∩ cell)`.
pub fn derive_cells(table: &FullTable) -> Result<CnModel, DeriveError> {
    let n = table.worlds.len();
    if n > MAX_EXPAND_WORLDS {
        return Err(DeriveError::Shape(format!("more than {MAX_EXPAND_WORLDS} worlds")));
    }
    if table.rows.len() != table.agents.len()
        || table.rows.iter().any(|r| r.len() != n || r.iter().any(|x| x.len() != 1 << n))
    {
        return Err(DeriveError::Shape("rows must cover every agent, world and subset".into()));
    }
    let as_set = |x: usize| WorldSet::from_indices((0..n).filter(|i| x & (1 << i) != 0));
    let names = |s: &WorldSet| s.iter().map(|i| table.worlds[i].clone()).collect::<Vec<_>>();
    let normalized = |fam: &[WorldSet]| {
        let mut f = fam.to_vec();
        f.sort();
        f.dedup();
        f
    };

    let mut partitions = Vec::new();
    for rows in &table.rows {
        let rows: Vec<Vec<Vec<WorldSet>>> = rows
            .iter()
            .map(|r| r.iter().map(|fam| normalized(fam)).collect())
            .collect();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for w in 0..n {
            match cells.iter_mut().find(|c| rows[c[0]] == rows[w]) {
                Some(c) => c.push(w),
                None => cells.push(vec![w]),
            }
        }
        partitions.push(cells);
    }
    let base = ModelBase::new(
        table.worlds.clone(),
        table.agents.clone(),
        partitions,
        table.valuation.clone(),
    )?;

    for (a, rows) in table.rows.iter().enumerate() {
        for (w, row) in rows.iter().enumerate() {
            let cell = base.partition(a).cell_of(w).set();
            for (x, fam) in row.iter().enumerate() {
                let xs = as_set(x);
                let fail = |condition, y: Option<&WorldSet>| DeriveError::Factorization {
                    condition,
                    agent: table.agents[a].clone(),
                    world: table.worlds[w].clone(),
                    x: names(&xs),
                    y: y.map(names),
                };
                let inside = xs.intersection(cell);
                if let Some(y) = fam.iter().find(|y| !y.is_subset(&inside)) {
                    return Err(fail(Condition::C, Some(y)));
                }
                let key = inside.iter().map(|i| 1usize << i).sum::<usize>();
                if normalized(fam) != normalized(&row[key]) {
                    return Err(fail(Condition::Ec, None));
                }
            }
        }
    }

    let model = CnModel::from_fn(base, |a, _, cell, key| {
        let w = cell.worlds()[0];
        let x: usize = cell.to_global(key).iter().map(|i| 1usize << i).sum();
        NeighbourhoodFamily::new(key, table.rows[a][w][x].iter().map(|y| cell.to_local(y)))
    })?;
    Ok(model)
}

/// All subsets of a local mask, as an iterator (re-exported for callers
/// building families by hand).
pub fn local_subsets(mask: u32) -> impl Iterator<Item = u32> {
    submasks(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(ground: u32, members: &[u32]) -> NeighbourhoodFamily {
        NeighbourhoodFamily::new(ground, members.iter().copied())
    }

    fn conds(v: &[LocalViolation]) -> Vec<Condition> {
        v.iter().map(|x| x.condition).collect()
    }

    #[test]
    fn empty_set_member_breaks_sc_not_d() {
        // G−∅ = G is not a member, so (d) holds; (sc) then forces every
        // non-empty subset in, and {u} is missing.
        let f = fam(0b11, &[0]);
        let v = f.check_basic();
        assert_eq!(conds(&v), vec![Condition::Sc]);
        let sc = v[0];
        assert_eq!(sc.y, Some(0));
        assert!(!f.contains(sc.z.unwrap()));
        assert!(conds(&f.check_derived()).contains(&Condition::Ni));
    }

    #[test]
    fn complementary_pair_breaks_d() {
        let v = fam(0b11, &[0b01, 0b10]).check_basic();
        let d = v.iter().find(|x| x.condition == Condition::D).unwrap();
        assert_eq!((d.y, d.z), (Some(0b01), Some(0b10)));
    }

    #[test]
    fn member_outside_ground_breaks_c() {
        let v = fam(0b01, &[0b01, 0b11]).check_basic();
        assert_eq!(v[0], LocalViolation::new(Condition::C, Some(0b11), None));
    }

    #[test]
    fn missing_superset_breaks_sc() {
        // Over {u,v,x} with only the ground in: {v,x} is out, so every
        // strict superset of {u} must be in, but {u,v} is not.
        let v = fam(0b111, &[0b111]).check_basic();
        let sc = v.iter().find(|x| x.condition == Condition::Sc).unwrap();
        let (y, z) = (sc.y.unwrap(), sc.z.unwrap());
        assert!(y & z == y && y != z);
        assert!(!fam(0b111, &[0b111]).contains(z));
    }

    #[test]
    fn valid_and_derived_examples() {
        assert!(fam(0, &[]).is_valid());
        assert!(fam(0, &[]).check_derived().is_empty());
        assert!(fam(0b11, &[0b11]).is_valid());
        assert!(fam(0b11, &[0b11]).check_derived().is_empty());
        assert!(fam(0b1010, &[0b1000, 0b1010]).is_valid());
        // Empty ground with a member: (c) and (∅).
        assert!(conds(&fam(0, &[0]).check_derived()).contains(&Condition::Empty));
        assert!(conds(&fam(0b11, &[0b01]).check_derived()).contains(&Condition::M));
        assert!(conds(&fam(0b11, &[]).check_derived()).contains(&Condition::NStar));
    }

    #[test]
    fn compressor_round_trip() {
        let c = Compressor::new(0b1011_0100);
        for d in 0..c.size() {
            assert_eq!(c.compress(c.expand(d)), d);
        }
    }
}
