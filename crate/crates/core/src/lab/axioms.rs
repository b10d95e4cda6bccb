//! Instances of the CN calculus axioms and of the other principles the
//! fuzzer checks.

use std::fmt;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Formula, Language};
use crate::weight_model::sure_thing_formula;

use super::generate::{gen_formula, FormulaSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Taut,
    DistK,
    T,
    FiveB,
    FourB,
    D,
    Ec,
    M,
    C,
    Sc,
}

impl Axiom {
    pub const ALL: [Axiom; 10] = [
        Axiom::Taut,
        Axiom::DistK,
        Axiom::T,
        Axiom::FiveB,
        Axiom::FourB,
        Axiom::D,
        Axiom::Ec,
        Axiom::M,
        Axiom::C,
        Axiom::Sc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Taut => "Taut",
            Axiom::DistK => "Dist-K",
            Axiom::T => "T",
            Axiom::FiveB => "5B",
            Axiom::FourB => "4B",
            Axiom::D => "D",
            Axiom::Ec => "EC",
            Axiom::M => "M",
            Axiom::C => "C",
            Axiom::Sc => "SC",
        }
    }

    /// The instance with `φ, ψ, χ` substituted. Schemas with fewer
    /// metavariables ignore the extra ones. `Taut` is the conjunction of
    /// three classical axiom schemas.
    pub fn instance(self, agent: &str, phi: &Formula, psi: &Formula, chi: &Formula) -> Formula {
        let (p, q, r) = (phi.clone(), psi.clone(), chi.clone());
        let k = |f: Formula| Formula::know(agent, f);
        let b = |x: Formula, y: Formula| Formula::bel(agent, x, y);
        match self {
            Axiom::Taut => {
                let k1 = p.clone().implies(q.clone().implies(p.clone()));
                let k2 = p
                    .clone()
                    .implies(q.clone().implies(r.clone()))
                    .implies(p.clone().implies(q.clone()).implies(p.clone().implies(r)));
                let k3 = p.clone().not().implies(q.clone().not()).implies(q.implies(p));
                k1.and(k2).and(k3)
            }
            Axiom::DistK => k(p.clone().implies(q.clone())).implies(k(p).implies(k(q))),
            Axiom::T => k(p.clone()).implies(p),
            Axiom::FiveB => b(p.clone(), q.clone()).implies(k(b(p, q))),
            Axiom::FourB => b(p.clone(), q.clone()).not().implies(k(b(p, q).not())),
            Axiom::D => b(p.clone(), q.clone()).implies(b(p, q.not()).not()),
            Axiom::Ec => k(p.clone().iff(q.clone())).implies(b(p, r.clone()).implies(b(q, r))),
            Axiom::M => k(p.clone().implies(q.clone())).implies(b(r.clone(), p).implies(b(r, q))),
            Axiom::C => b(p.clone(), q.clone()).implies(b(p.clone(), p.and(q))),
            // ¬B(χ,¬φ) ∧ Ǩ(χ∧¬φ∧ψ) → B(χ, φ∨ψ)
            Axiom::Sc => b(r.clone(), p.clone().not())
                .not()
                .and(Formula::know_dual(agent, r.clone().and(p.clone().not()).and(q.clone())))
                .implies(b(r, p.or(q))),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Validities about the comparative operators and the Sure Thing
/// Principle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principle {
    /// `(α≽⊤) ↔ Kα`
    GeqTopIffK,
    /// `(α≻β) ∨ (β≻α) ∨ (α≈β)`
    Totality,
    /// `(α≽β) ∨ (β≽α)`
    ReflTotality,
    /// The three Totality disjuncts exclude each other.
    TotalityExclusive,
    /// `(α∧¬β ≻ β∧¬α) ↔ (α≻β)`
    ComparisonPrinciple,
    /// `B(α,β) ∧ B(¬α,β) → B(⊤,β)`; valid on weight models only.
    SureThing,
}

impl Principle {
    pub const COMPARATIVE: [Principle; 5] = [
        Principle::GeqTopIffK,
        Principle::Totality,
        Principle::ReflTotality,
        Principle::TotalityExclusive,
        Principle::ComparisonPrinciple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Principle::GeqTopIffK => "geq-top-iff-K",
            Principle::Totality => "totality",
            Principle::ReflTotality => "refl-totality",
            Principle::TotalityExclusive => "totality-exclusive",
            Principle::ComparisonPrinciple => "comparison-principle",
            Principle::SureThing => "sure-thing",
        }
    }

    pub fn instance(self, agent: &str, alpha: &Formula, beta: &Formula) -> Formula {
        let (a, b) = (alpha.clone(), beta.clone());
        let succ = |x: Formula, y: Formula| Formula::succ(agent, x, y);
        let geq = |x: Formula, y: Formula| Formula::geq(agent, x, y);
        let approx = |x: Formula, y: Formula| Formula::approx(agent, x, y);
        match self {
            Principle::GeqTopIffK => geq(a.clone(), Formula::Top).iff(Formula::know(agent, a)),
            Principle::Totality => succ(a.clone(), b.clone())
                .or(succ(b.clone(), a.clone()))
                .or(approx(a, b)),
            Principle::ReflTotality => geq(a.clone(), b.clone()).or(geq(b, a)),
            Principle::TotalityExclusive => {
                let (x, y, z) = (succ(a.clone(), b.clone()), succ(b.clone(), a.clone()), approx(a, b));
                x.clone()
                    .and(y.clone())
                    .not()
                    .and(x.and(z.clone()).not())
                    .and(y.and(z).not())
            }
            Principle::ComparisonPrinciple => succ(a.clone().and(b.clone().not()), b.clone().and(a.clone().not()))
                .iff(succ(a, b)),
            Principle::SureThing => sure_thing_formula(agent, alpha, beta),
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Seed of the fixed instance pool.
const POOL_SEED: u64 = 0x5eed_0a11;

/// The fixed pool of 200 axiom instances (20 per axiom) over atoms `p, q`
/// and agent `a`, with metavariables replaced by formulas of depth ≤ 2.
pub fn axiom_pool() -> &'static [(Axiom, Formula)] {
    static POOL: OnceLock<Vec<(Axiom, Formula)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let spec = FormulaSpec::new(2, &["p", "q"], &["a"], Language::Cn);
        let mut rng = ChaCha8Rng::seed_from_u64(POOL_SEED);
        let mut pool = Vec::with_capacity(200);
        for axiom in Axiom::ALL {
            for _ in 0..20 {
                let (x, y, z) = (
                    gen_formula(&spec, &mut rng),
                    gen_formula(&spec, &mut rng),
                    gen_formula(&spec, &mut rng),
                );
                pool.push((axiom, axiom.instance("a", &x, &y, &z)));
            }
        }
        pool
    })
}
