//! Formulas: abstract syntax, the text grammar, removal of abbreviations and
//! the translations between the belief language and the comparative
//! probability language.

mod ast;
mod parser;

pub use ast::{Formula, Language};
pub use parser::{parse, ParseError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unsupported language: {construct} cannot be translated from {from}")]
    UnsupportedLanguage {
        from: Language,
        construct: &'static str,
    },
}

/// Expand every abbreviation into the belief-based core
/// (`⊤ p ¬ ∧ B [φ] [±φ]`).
///
/// `K_a φ ↦ ¬B_a(¬φ,⊤)`, `Ǩ_a φ ↦ ¬K_a¬φ`, `α≻_aβ ↦ B_a(α↔¬β, α)`,
/// `α≽_aβ ↦ ¬(β≻_aα)`, `α≈_aβ ↦ ¬(α≻_aβ) ∧ ¬(β≻_aα)`.
pub fn desugar(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Top | Atom(_) => f.clone(),
        Bot => Formula::Top.not(),
        Not(a) => desugar(a).not(),
        And(a, b) => desugar(a).and(desugar(b)),
        Or(a, b) => desugar(a).not().and(desugar(b).not()).not(),
        Implies(a, b) => desugar(a).and(desugar(b).not()).not(),
        Iff(a, b) => {
            let (a, b) = (desugar(a), desugar(b));
            a.clone()
                .and(b.clone().not())
                .not()
                .and(b.and(a.not()).not())
        }
        Bel(ag, a, b) => Formula::bel(ag.clone(), desugar(a), desugar(b)),
        Know(ag, a) => Formula::bel(ag.clone(), desugar(a).not(), Formula::Top).not(),
        KnowDual(ag, a) => desugar(&Formula::know(ag.clone(), (**a).clone().not()).not()),
        Succ(ag, a, b) => {
            let cond = (**a).clone().iff((**b).clone().not());
            Formula::bel(ag.clone(), desugar(&cond), desugar(a))
        }
        Geq(ag, a, b) => desugar(&Formula::succ(ag.clone(), (**b).clone(), (**a).clone()).not()),
        Approx(ag, a, b) => {
            let ab = Formula::succ(ag.clone(), (**a).clone(), (**b).clone()).not();
            let ba = Formula::succ(ag.clone(), (**b).clone(), (**a).clone()).not();
            desugar(&ab.and(ba))
        }
        AnnFact(a, b) => Formula::announce(desugar(a), desugar(b)),
        AnnValue(a, b) => Formula::announce_value(desugar(a), desugar(b)),
    }
}

/// Expand abbreviations with `≽` as the primitive comparison.
///
/// Boolean abbreviations expand as in [`desugar`]; `K_a φ ↦ φ≽_a⊤`,
/// `Ǩ_a φ ↦ ¬(¬φ≽_a⊤)`, `α≻_aβ ↦ ¬(β≽_aα)`, `α≈_aβ ↦ α≽_aβ ∧ β≽_aα`.
/// `B` and announcements are kept.
pub fn desugar_qp(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Top | Atom(_) => f.clone(),
        Bot => Formula::Top.not(),
        Or(a, b) => desugar_qp(a).not().and(desugar_qp(b).not()).not(),
        Implies(a, b) => desugar_qp(a).and(desugar_qp(b).not()).not(),
        Iff(a, b) => {
            let (a, b) = (desugar_qp(a), desugar_qp(b));
            a.clone()
                .and(b.clone().not())
                .not()
                .and(b.and(a.not()).not())
        }
        Not(a) => desugar_qp(a).not(),
        And(a, b) => desugar_qp(a).and(desugar_qp(b)),
        Bel(ag, a, b) => Formula::bel(ag.clone(), desugar_qp(a), desugar_qp(b)),
        Geq(ag, a, b) => Formula::geq(ag.clone(), desugar_qp(a), desugar_qp(b)),
        Know(ag, a) => Formula::geq(ag.clone(), desugar_qp(a), Formula::Top),
        KnowDual(ag, a) => Formula::geq(ag.clone(), desugar_qp(a).not(), Formula::Top).not(),
        Succ(ag, a, b) => Formula::geq(ag.clone(), desugar_qp(b), desugar_qp(a)).not(),
        Approx(ag, a, b) => {
            let (a, b) = (desugar_qp(a), desugar_qp(b));
            Formula::geq(ag.clone(), a.clone(), b.clone()).and(Formula::geq(ag.clone(), b, a))
        }
        AnnFact(a, b) => Formula::announce(desugar_qp(a), desugar_qp(b)),
        AnnValue(a, b) => Formula::announce_value(desugar_qp(a), desugar_qp(b)),
    }
}

/// Translate a belief formula into the comparative language.
///
/// Homomorphic on the connectives; the key case is
/// `B_a(α,β) ↦ (α'∧β') ≻_a (α'∧¬β')`, emitted with `≻` spelled out as
/// `¬((α'∧¬β') ≽_a (α'∧β'))` so the result contains no belief operator.
pub fn tr1(f: &Formula) -> Result<Formula, TranslateError> {
    use Formula::*;
    let unsupported = |construct| TranslateError::UnsupportedLanguage {
        from: Language::Cn,
        construct,
    };
    Ok(match f {
        Top | Bot | Atom(_) => f.clone(),
        Not(a) => tr1(a)?.not(),
        And(a, b) => tr1(a)?.and(tr1(b)?),
        Or(a, b) => tr1(a)?.or(tr1(b)?),
        Implies(a, b) => tr1(a)?.implies(tr1(b)?),
        Iff(a, b) => tr1(a)?.iff(tr1(b)?),
        Bel(ag, a, b) => {
            let (a, b) = (tr1(a)?, tr1(b)?);
            let pro = a.clone().and(b.clone());
            let con = a.and(b.not());
            Formula::geq(ag.clone(), con, pro).not()
        }
        Know(ag, a) => tr1(&Formula::bel(ag.clone(), (**a).clone().not(), Formula::Top).not())?,
        KnowDual(ag, a) => tr1(&Formula::know(ag.clone(), (**a).clone().not()).not())?,
        Succ(ag, a, b) => tr1(&Formula::bel(
            ag.clone(),
            (**a).clone().iff((**b).clone().not()),
            (**a).clone(),
        ))?,
        Approx(ag, a, b) => tr1(
            &Formula::succ(ag.clone(), (**a).clone(), (**b).clone())
                .not()
                .and(Formula::succ(ag.clone(), (**b).clone(), (**a).clone()).not()),
        )?,
        Geq(..) => return Err(unsupported("≽")),
        AnnFact(..) => return Err(unsupported("[φ]")),
        AnnValue(..) => return Err(unsupported("[±φ]")),
    })
}

/// Translate a comparative formula into the belief language.
///
/// Homomorphic on the connectives; the key case is
/// `α≽_aβ ↦ ¬B_a(α'↔¬β', β')`.
pub fn tr2(f: &Formula) -> Result<Formula, TranslateError> {
    use Formula::*;
    let unsupported = |construct| TranslateError::UnsupportedLanguage {
        from: Language::Qp,
        construct,
    };
    Ok(match f {
        Top | Bot | Atom(_) => f.clone(),
        Not(a) => tr2(a)?.not(),
        And(a, b) => tr2(a)?.and(tr2(b)?),
        Or(a, b) => tr2(a)?.or(tr2(b)?),
        Implies(a, b) => tr2(a)?.implies(tr2(b)?),
        Iff(a, b) => tr2(a)?.iff(tr2(b)?),
        Geq(ag, a, b) => {
            let (a, b) = (tr2(a)?, tr2(b)?);
            Formula::bel(ag.clone(), a.iff(b.clone().not()), b).not()
        }
        Know(ag, a) => tr2(&Formula::geq(ag.clone(), (**a).clone(), Formula::Top))?,
        KnowDual(ag, a) => tr2(&Formula::know(ag.clone(), (**a).clone().not()).not())?,
        Succ(ag, a, b) => tr2(&Formula::geq(ag.clone(), (**b).clone(), (**a).clone()).not())?,
        Approx(ag, a, b) => tr2(
            &Formula::geq(ag.clone(), (**a).clone(), (**b).clone())
                .and(Formula::geq(ag.clone(), (**b).clone(), (**a).clone())),
        )?,
        Bel(..) => return Err(unsupported("B")),
        AnnFact(..) => return Err(unsupported("[φ]")),
        AnnValue(..) => return Err(unsupported("[±φ]")),
    })
}

#[cfg(test)]
pub(crate) mod testgen {
    //! Random formula strategy shared by the syntax property tests.
    use super::Formula;
    use proptest::prelude::*;

    pub fn any_formula(depth: u32) -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::Top),
            Just(Formula::Bot),
            "[pqr]|Gr|win_7".prop_map(Formula::Atom),
        ];
        let agent = prop_oneof![Just("a".to_string()), Just("b".to_string())];
        leaf.prop_recursive(depth, 48, 2, move |inner| {
            let ag = agent.clone();
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.iff(b)),
                (ag.clone(), inner.clone(), inner.clone()).prop_map(|(g, a, b)| Formula::bel(g, a, b)),
                (ag.clone(), inner.clone(), inner.clone()).prop_map(|(g, a, b)| Formula::geq(g, a, b)),
                (ag.clone(), inner.clone(), inner.clone()).prop_map(|(g, a, b)| Formula::succ(g, a, b)),
                (ag.clone(), inner.clone(), inner.clone()).prop_map(|(g, a, b)| Formula::approx(g, a, b)),
                (ag.clone(), inner.clone()).prop_map(|(g, a)| Formula::know(g, a)),
                (ag.clone(), inner.clone()).prop_map(|(g, a)| Formula::know_dual(g, a)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::announce(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::announce_value(a, b)),
            ]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn parse_d(s: &str) -> Formula {
        desugar(&parse(s).unwrap())
    }

    #[test]
    fn knowledge_is_negated_conditional_belief() {
        assert_eq!(
            parse_d("K{a} p"),
            Formula::bel("a", p().not(), Formula::Top).not()
        );
    }

    #[test]
    fn dual_knowledge_expansion_chain() {
        let expected = Formula::bel("a", p().not().not(), Formula::Top).not().not();
        assert_eq!(parse_d("Kd{a} p"), expected);
    }

    #[test]
    fn strict_comparison_is_a_belief() {
        let expected = desugar(&Formula::bel("a", p().iff(q().not()), p()));
        assert_eq!(parse_d("p >{a} q"), expected);
    }

    #[test]
    fn weak_comparison_against_top() {
        let expected = desugar(&Formula::bel("a", Formula::Top.iff(p().not()), Formula::Top).not());
        assert_eq!(parse_d("p >={a} T"), expected);
    }

    #[test]
    fn approx_is_neither_strict_direction() {
        let expected = desugar(
            &Formula::succ("a", p(), q())
                .not()
                .and(Formula::succ("a", q(), p()).not()),
        );
        assert_eq!(parse_d("p ~={a} q"), expected);
    }

    #[test]
    fn core_belief_is_a_fixpoint() {
        let f = Formula::bel("a", p(), q());
        assert_eq!(desugar(&f), f);
        assert_eq!(desugar_qp(&f), f);
    }

    #[test]
    fn qp_reading_keeps_geq() {
        assert_eq!(
            desugar_qp(&parse("K{a} p").unwrap()),
            Formula::geq("a", p(), Formula::Top)
        );
        assert_eq!(
            desugar_qp(&parse("p >{a} q").unwrap()),
            Formula::geq("a", q(), p()).not()
        );
    }

    #[test]
    fn tr1_key_case() {
        let out = tr1(&parse("B{a}(p, q)").unwrap()).unwrap();
        let strict = Formula::succ("a", p().and(q()), p().and(q().not()));
        assert_eq!(desugar_qp(&out), desugar_qp(&strict));
        assert_eq!(out.language(), Some(Language::Qp));
        assert_eq!(tr1(&Formula::Top).unwrap(), Formula::Top);
        let out = tr1(&parse("B{a}(T, p)").unwrap()).unwrap();
        let strict = Formula::succ("a", Formula::Top.and(p()), Formula::Top.and(p().not()));
        assert_eq!(desugar_qp(&out), desugar_qp(&strict));
    }

    #[test]
    fn tr2_key_case() {
        let out = tr2(&parse("p >={a} q").unwrap()).unwrap();
        assert_eq!(out, Formula::bel("a", p().iff(q().not()), q()).not());
        assert_eq!(tr2(&Formula::Bot).unwrap(), Formula::Bot);
        let out = tr2(&parse("(p >={a} q) & r").unwrap()).unwrap();
        assert_eq!(
            out,
            Formula::bel("a", p().iff(q().not()), q())
                .not()
                .and(Formula::atom("r"))
        );
    }

    #[test]
    fn translations_reject_foreign_constructs() {
        assert!(matches!(
            tr1(&parse("[p] B{a}(p, q)").unwrap()),
            Err(TranslateError::UnsupportedLanguage { .. })
        ));
        assert!(tr1(&parse("p >={a} q").unwrap()).is_err());
        assert!(tr2(&parse("B{a}(p, q)").unwrap()).is_err());
        assert!(tr2(&parse("[+-p] (p >={a} q)").unwrap()).is_err());
    }

    #[test]
    fn language_classifier() {
        let lang = |s: &str| parse(s).unwrap().language();
        assert_eq!(lang("p & q"), Some(Language::Cn));
        assert_eq!(lang("B{a}(p, q)"), Some(Language::Cn));
        assert_eq!(lang("K{a} p"), Some(Language::Cn));
        assert_eq!(lang("p >={a} q"), Some(Language::Qp));
        assert_eq!(lang("[p] B{a}(p, q)"), Some(Language::Pc));
        assert_eq!(lang("[+-p] B{a}(p, q)"), Some(Language::PcPm));
        assert_eq!(lang("B{a}(p, q) & (p >={a} q)"), None);
        assert_eq!(lang("[p] [+-q] p"), None);
    }

    /// Same tree shape with connective nodes at identical positions.
    fn same_boolean_skeleton(a: &Formula, b: &Formula) -> bool {
        use Formula::*;
        match (a, b) {
            (Top, Top) | (Bot, Bot) => true,
            (Atom(x), Atom(y)) => x == y,
            (Not(x), Not(y)) => same_boolean_skeleton(x, y),
            (And(x1, x2), And(y1, y2))
            | (Or(x1, x2), Or(y1, y2))
            | (Implies(x1, x2), Implies(y1, y2))
            | (Iff(x1, x2), Iff(y1, y2)) => {
                same_boolean_skeleton(x1, y1) && same_boolean_skeleton(x2, y2)
            }
            // modal nodes are where the translations differ
            (Bel(..) | Know(..) | KnowDual(..) | Succ(..) | Approx(..) | Geq(..), _) => true,
            _ => false,
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in testgen::any_formula(5)) {
            let text = f.to_string();
            prop_assert_eq!(parse(&text).unwrap(), f);
        }

        #[test]
        fn desugar_is_idempotent_and_core(f in testgen::any_formula(4)) {
            let d = desugar(&f);
            prop_assert!(d.is_core());
            prop_assert!(!matches!(d.language(), Some(Language::Qp)));
            prop_assert_eq!(desugar(&d), d.clone());
            let dq = desugar_qp(&f);
            prop_assert!(dq.is_core());
            prop_assert_eq!(desugar_qp(&dq), dq);
        }

        #[test]
        fn translations_are_total_and_keep_connectives(f in testgen::any_formula(4)) {
            match f.language() {
                Some(Language::Cn) => {
                    let t = tr1(&f).unwrap();
                    prop_assert!(matches!(t.language(), Some(Language::Qp | Language::Cn)));
                    prop_assert!(same_boolean_skeleton(&f, &t));
                }
                Some(Language::Qp) => {
                    let t = tr2(&f).unwrap();
                    prop_assert_eq!(t.language(), Some(Language::Cn));
                    prop_assert!(same_boolean_skeleton(&f, &t));
                }
                _ => {}
            }
        }
    }
}
