use cnl_core::lab::{builtin_lottery, random_weight_model, GenMode, ModelSpec};
use cnl_core::syntax::{tr1, tr2};
use cnl_core::weight_model::{check_a4, e_holds, sure_thing};
use cnl_core::{parse, Formula, ModelBase, WeightModel, WorldSet};
use num_rational::Ratio;
use proptest::prelude::*;

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

#[test]
fn lottery_families() {
    let w = builtin_lottery(4, 1, Ratio::from_integer(5)).unwrap();
    assert!(w.eval("1", &f("B{a}(T, win_1)")).unwrap());
    let m = w.induce_cn().unwrap();
    let sets = |x: &[&str]| m.base().set_of(x).unwrap();
    let mut got = m.neighbourhoods(0, 0, &sets(&["1", "2", "3"]));
    got.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    let expected: Vec<WorldSet> = [&["1"][..], &["1", "2"], &["1", "3"], &["1", "2", "3"]]
        .iter()
        .map(|x| sets(x))
        .collect();
    assert_eq!(got, expected);
    let mut majority = m.neighbourhoods(0, 0, &sets(&["2", "3", "4"]));
    majority.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    let expected: Vec<WorldSet> = [&["2", "3"][..], &["2", "4"], &["3", "4"], &["2", "3", "4"]]
        .iter()
        .map(|x| sets(x))
        .collect();
    assert_eq!(majority, expected);
    assert!(m.neighbourhoods(0, 0, &WorldSet::new()).is_empty());
}

#[test]
fn lottery_parameters_are_checked() {
    assert!(builtin_lottery(4, 1, Ratio::from_integer(3)).is_err());
    assert!(builtin_lottery(4, 5, Ratio::from_integer(5)).is_err());
    assert!(builtin_lottery(4, 0, Ratio::from_integer(5)).is_err());
}

#[test]
fn degenerate_sure_thing() {
    let w = builtin_lottery(3, 2, Ratio::from_integer(3)).unwrap();
    for world in w.base().worlds() {
        assert!(sure_thing(&w, world, "a", &f("T"), &f("win_1")).unwrap());
        assert!(!w.eval(world, &f("B{a}(F, win_1)")).unwrap());
    }
}

#[test]
fn identical_lists_satisfy_a4() {
    let w = builtin_lottery(3, 2, Ratio::from_integer(3)).unwrap();
    let xs = [f("win_1"), f("win_2 | win_3")];
    for world in w.base().worlds() {
        assert!(e_holds(&w, world, "a", &xs, &xs).unwrap());
        assert!(check_a4(&w, world, "a", &xs, &xs).unwrap());
    }
    assert!(check_a4(&w, "1", "a", &xs[..1], &xs[..1]).is_err());
}

#[test]
fn weights_are_exact() {
    // 1/3 + 1/3 + 1/3 against 1: a tie, so no strict belief either way.
    let base = ModelBase::new(
        (0..4).map(|i| format!("w{i}")).collect(),
        vec!["a".into()],
        vec![vec![vec![0, 1, 2, 3]]],
        [("p".to_string(), WorldSet::singleton(3))].into_iter().collect(),
    )
    .unwrap();
    let third = Ratio::new(1, 3);
    let w = WeightModel::new(base, vec![vec![third, third, third, Ratio::from_integer(1)]]).unwrap();
    assert!(!w.eval("w0", &f("B{a}(T, p)")).unwrap());
    assert!(!w.eval("w0", &f("B{a}(T, ~p)")).unwrap());
    assert!(w.eval("w0", &f("p ~={a} ~p")).unwrap());
}

fn arb_weight() -> impl Strategy<Value = WeightModel> {
    (1usize..=7, 1usize..=2, 0u64..1000).prop_map(|(n, a, seed)| {
        random_weight_model(&ModelSpec::new(n, a, 4, &["p", "q"], GenMode::Mixed), seed).unwrap()
    })
}

fn arb_cn_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(f("p")), Just(f("q")), Just(f("T"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| a.not()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::bel("a", a, b)),
        ]
    })
}

fn arb_qp_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(f("p")), Just(f("q")), Just(f("T"))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| a.not()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::geq("a", a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weight_truth_matches_induced_model(w in arb_weight(), g in arb_cn_formula()) {
        let m = w.induce_cn().unwrap();
        prop_assert!(m.validate().is_empty());
        prop_assert_eq!(w.extension(&g).unwrap(), m.extension(&g).unwrap());
    }

    #[test]
    fn both_comparison_clauses_agree(w in arb_weight(), g in arb_qp_formula()) {
        prop_assert_eq!(w.extension(&g).unwrap(), w.extension_via_belief(&g).unwrap());
    }

    #[test]
    fn translations_preserve_truth(w in arb_weight(), g in arb_cn_formula(), h in arb_qp_formula()) {
        prop_assert_eq!(w.extension(&g).unwrap(), w.extension(&tr1(&g).unwrap()).unwrap());
        prop_assert_eq!(w.extension(&h).unwrap(), w.extension(&tr2(&h).unwrap()).unwrap());
    }
}
