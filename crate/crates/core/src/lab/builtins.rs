//! The example models: the Ellsberg urn, the lottery, and the two
//! comparison models.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::cn_model::{CnModel, NeighbourhoodFamily};
use crate::comparison::{separation_models, ComparisonModel};
use crate::epistemic::ModelBase;
use crate::weight_model::{majority_family, Weight, WeightModel};
use crate::worldset::{submasks, WorldSet};

use super::LabError;

pub const ELLSBERG_WORLDS: [&str; 4] = ["red", "green", "yellow", "blue"];
pub const ELLSBERG_ATOMS: [&str; 4] = ["Gr", "Gg", "Gy", "Gb"];

/// One urn, one agent `a`, one cell `{red, green, yellow, blue}`.
///
/// Pinned keys: `N({red,yellow}) = {{red},{red,yellow}}`,
/// `N({green,blue}) = {{green},{green,blue}}` and `N(W)` = all sets of at
/// least three worlds. Every other key gets the strict-majority family of
/// uniform weights.
pub fn builtin_ellsberg() -> CnModel {
    let worlds: Vec<String> = ELLSBERG_WORLDS.iter().map(|s| s.to_string()).collect();
    let valuation: BTreeMap<String, WorldSet> = ELLSBERG_ATOMS
        .iter()
        .enumerate()
        .map(|(i, a)| (a.to_string(), WorldSet::singleton(i)))
        .collect();
    let base = ModelBase::new(worlds, vec!["a".into()], vec![vec![vec![0, 1, 2, 3]]], valuation)
        .expect("well-formed");
    const RED: u32 = 0b0001;
    const GREEN: u32 = 0b0010;
    const YELLOW: u32 = 0b0100;
    const BLUE: u32 = 0b1000;
    CnModel::from_fn(base, |_, _, _, key| match key {
        k if k == RED | YELLOW => NeighbourhoodFamily::new(k, [RED, RED | YELLOW]),
        k if k == GREEN | BLUE => NeighbourhoodFamily::new(k, [GREEN, GREEN | BLUE]),
        0b1111 => NeighbourhoodFamily::new(0b1111, submasks(0b1111).filter(|y| y.count_ones() >= 3)),
        k => majority_family(&[1, 1, 1, 1], k),
    })
    .expect("four-world cell")
}

/// Zero-padded name of ticket `i` (1-based) in an `n`-ticket lottery.
pub fn ticket_name(i: usize, n: usize) -> String {
    let width = n.to_string().len();
    format!("{i:0width$}")
}

/// `n` tickets, one agent `a` who cannot tell them apart, ticket `t`
/// weighted `heavy` and every other ticket weighted 1. Atom `win_<ticket>`
/// holds exactly at that ticket's world.
pub fn builtin_lottery(n: usize, t: usize, heavy: Weight) -> Result<WeightModel, LabError> {
    if n == 0 {
        return Err(LabError::Param("a lottery needs at least one ticket".into()));
    }
    if t == 0 || t > n {
        return Err(LabError::Param(format!("bought ticket {t} is not in 1..={n}")));
    }
    if heavy <= Ratio::from_integer(n as i64 - 1) {
        return Err(LabError::Param(format!(
            "heavy weight {heavy} must exceed the {} other tickets' total",
            n - 1
        )));
    }
    let worlds: Vec<String> = (1..=n).map(|i| ticket_name(i, n)).collect();
    let valuation = worlds
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("win_{w}"), WorldSet::singleton(i)))
        .collect();
    let base = ModelBase::new(worlds, vec!["a".into()], vec![vec![(0..n).collect()]], valuation)
        .expect("well-formed");
    let weights = (1..=n)
        .map(|i| if i == t { heavy } else { Ratio::from_integer(1) })
        .collect();
    Ok(WeightModel::new(base, vec![weights])?)
}

/// `(N1, N2)`.
pub fn builtin_comparison() -> (ComparisonModel, ComparisonModel) {
    separation_models()
}
