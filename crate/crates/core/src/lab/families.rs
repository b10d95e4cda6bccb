//! Brute-force enumeration of every valid neighbourhood family over a
//! small ground set.

use std::sync::OnceLock;

use crate::cn_model::NeighbourhoodFamily;

use super::LabError;

/// Largest ground set [`enumerate_families`] accepts.
pub const MAX_FAMILY_GROUND: usize = 4;

/// Every family over the ground `{0, .., n-1}` (local mask `2^n − 1`)
/// satisfying (c), (d) and (sc), in canonical order.
///
/// All `2^(2^n)` candidate families are filtered. Results are computed once
/// per process.
pub fn enumerate_families(n: usize) -> Result<&'static [NeighbourhoodFamily], LabError> {
    static CACHE: [OnceLock<Vec<NeighbourhoodFamily>>; MAX_FAMILY_GROUND + 1] =
        [const { OnceLock::new() }; MAX_FAMILY_GROUND + 1];
    if n > MAX_FAMILY_GROUND {
        return Err(LabError::Cap(format!(
            "family enumeration is limited to ground sets of {MAX_FAMILY_GROUND} worlds"
        )));
    }
    Ok(CACHE[n].get_or_init(|| filter_all(n)))
}

fn filter_all(n: usize) -> Vec<NeighbourhoodFamily> {
    let ground = (1u32 << n) - 1;
    let subsets = 1u64 << n;
    let mut out: Vec<NeighbourhoodFamily> = (0..1u64 << subsets)
        .map(|code| {
            NeighbourhoodFamily::new(ground, (0..subsets as u32).filter(|y| code & (1 << y) != 0))
        })
        .filter(NeighbourhoodFamily::is_valid)
        .collect();
    out.sort();
    out
}

/// Move a family over `{0, .., n-1}` onto the cell-local key `target`,
/// sending bit `j` to the `j`-th set bit of `target`.
pub fn embed(fam: &NeighbourhoodFamily, target: u32) -> NeighbourhoodFamily {
    let bits: Vec<u32> = (0..32).filter(|b| target & (1 << b) != 0).collect();
    fam.relabel(|m| {
        bits.iter()
            .enumerate()
            .filter(|(j, _)| m & (1 << j) != 0)
            .map(|(_, &b)| 1u32 << b)
            .sum()
    })
}

/// The families valid for a given key, already embedded.
pub fn families_for_key(key: u32) -> Vec<NeighbourhoodFamily> {
    enumerate_families(key.count_ones() as usize)
        .expect("cells in the lab never exceed the enumeration cap")
        .iter()
        .map(|f| embed(f, key))
        .collect()
}
