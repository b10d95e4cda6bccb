use std::fmt;

/// A formula of any of the four languages, plus the surface abbreviations.
///
/// The core constructors are `Top`, `Atom`, `Not`, `And`, `Bel`, `Geq`,
/// `AnnFact` and `AnnValue`. Everything else is an abbreviation that the
/// parser keeps so that formulas print back the way they were written;
/// [`desugar`](super::desugar) and [`desugar_qp`](super::desugar_qp) remove
/// them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `B_a(condition, body)`
    Bel(String, Box<Formula>, Box<Formula>),
    /// `left ≽_a right`
    Geq(String, Box<Formula>, Box<Formula>),
    /// `[announced] body`
    AnnFact(Box<Formula>, Box<Formula>),
    /// `[±announced] body`
    AnnValue(Box<Formula>, Box<Formula>),

    Bot,
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Know(String, Box<Formula>),
    /// The dual `Ǩ_a`.
    KnowDual(String, Box<Formula>),
    /// `left ≻_a right`
    Succ(String, Box<Formula>, Box<Formula>),
    /// `left ≈_a right`
    Approx(String, Box<Formula>, Box<Formula>),
}

/// The four object languages, ordered by inclusion where one exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    Cn,
    Qp,
    Pc,
    PcPm,
}

impl Language {
    pub fn name(self) -> &'static str {
        match self {
            Language::Cn => "L_CN",
            Language::Qp => "L_QP",
            Language::Pc => "L_PC",
            Language::PcPm => "L_PC±",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(bx(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(bx(self), bx(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(bx(self), bx(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(bx(self), bx(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(bx(self), bx(other))
    }

    pub fn bel(agent: impl Into<String>, condition: Formula, body: Formula) -> Self {
        Formula::Bel(agent.into(), bx(condition), bx(body))
    }

    pub fn geq(agent: impl Into<String>, left: Formula, right: Formula) -> Self {
        Formula::Geq(agent.into(), bx(left), bx(right))
    }

    pub fn succ(agent: impl Into<String>, left: Formula, right: Formula) -> Self {
        Formula::Succ(agent.into(), bx(left), bx(right))
    }

    pub fn approx(agent: impl Into<String>, left: Formula, right: Formula) -> Self {
        Formula::Approx(agent.into(), bx(left), bx(right))
    }

    pub fn know(agent: impl Into<String>, body: Formula) -> Self {
        Formula::Know(agent.into(), bx(body))
    }

    pub fn know_dual(agent: impl Into<String>, body: Formula) -> Self {
        Formula::KnowDual(agent.into(), bx(body))
    }

    pub fn announce(announced: Formula, body: Formula) -> Self {
        Formula::AnnFact(bx(announced), bx(body))
    }

    pub fn announce_value(announced: Formula, body: Formula) -> Self {
        Formula::AnnValue(bx(announced), bx(body))
    }

    /// Conjunction of a list; `⊤` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Disjunction of a list; `⊥` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Top | Bot | Atom(_) => vec![],
            Not(a) | Know(_, a) | KnowDual(_, a) => vec![a],
            And(a, b)
            | Or(a, b)
            | Implies(a, b)
            | Iff(a, b)
            | Bel(_, a, b)
            | Geq(_, a, b)
            | Succ(_, a, b)
            | Approx(_, a, b)
            | AnnFact(a, b)
            | AnnValue(a, b) => vec![a, b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Whether only core constructors occur.
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            Bot | Or(..) | Implies(..) | Iff(..) | Know(..) | KnowDual(..) | Succ(..)
            | Approx(..) => false,
            _ => self.children().iter().all(|c| c.is_core()),
        }
    }

    pub fn atoms(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut std::collections::BTreeSet<String>) {
        if let Formula::Atom(p) = self {
            out.insert(p.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn agents(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_agents(&mut out);
        out
    }

    fn collect_agents(&self, out: &mut std::collections::BTreeSet<String>) {
        use Formula::*;
        match self {
            Bel(a, ..) | Geq(a, ..) | Succ(a, ..) | Approx(a, ..) | Know(a, _)
            | KnowDual(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_agents(out);
        }
    }

    pub fn has_announcements(&self) -> bool {
        matches!(self, Formula::AnnFact(..) | Formula::AnnValue(..))
            || self.children().iter().any(|c| c.has_announcements())
    }

    /// The least of the four languages containing this formula, or `None`
    /// when it mixes constructors no single language has (e.g. `≽` together
    /// with `B`, or both kinds of announcement).
    ///
    /// `K`, `Ǩ`, `≻` and `≈` are definable in every language and do not by
    /// themselves decide between `L_CN` and `L_QP`.
    pub fn language(&self) -> Option<Language> {
        #[derive(Default)]
        struct Seen {
            bel: bool,
            geq: bool,
            fact: bool,
            value: bool,
        }
        fn walk(f: &Formula, s: &mut Seen) {
            match f {
                Formula::Bel(..) => s.bel = true,
                Formula::Geq(..) => s.geq = true,
                Formula::AnnFact(..) => s.fact = true,
                Formula::AnnValue(..) => s.value = true,
                _ => {}
            }
            for c in f.children() {
                walk(c, s);
            }
        }
        let mut s = Seen::default();
        walk(self, &mut s);
        match (s.bel, s.geq, s.fact, s.value) {
            (_, true, false, false) if !s.bel => Some(Language::Qp),
            (_, true, _, _) => None,
            (_, false, true, true) => None,
            (_, false, true, false) => Some(Language::Pc),
            (_, false, false, true) => Some(Language::PcPm),
            (_, false, false, false) => Some(Language::Cn),
        }
    }
}
