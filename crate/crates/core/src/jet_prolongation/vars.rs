use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::expr_core::{CPoly, VarTable};

/// Name of the jet variable at `level` (0 = z, 1 = w, j+1 = w⁽ʲ⁾) for coordinate `l` (0-based).
pub fn jet_name(level: usize, barred: bool, l: usize) -> String {
    let b = if barred { "b" } else { "" };
    match level {
        0 => format!("z{b}{}", l + 1),
        1 => format!("w{b}{}", l + 1),
        k => format!("w{b}{}_{}", l + 1, k - 1),
    }
}

/// Position of a jet variable in [`jet_table`]. Tables of higher order extend lower ones.
pub fn jet_index(n: usize, level: usize, barred: bool, l: usize) -> usize {
    level * 2 * n + if barred { n } else { 0 } + l
}

/// (level, barred, coordinate) of a table position.
pub fn jet_slot(n: usize, index: usize) -> (usize, bool, usize) {
    let r = index % (2 * n);
    (index / (2 * n), r >= n, r % n)
}

/// Shared variable table for `n` complex coordinates and jet levels `0..=order`.
pub fn jet_table(n: usize, order: usize) -> VarTable {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), VarTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((n, order))
        .or_insert_with(|| {
            VarTable::new((0..=order).flat_map(|level| {
                [false, true]
                    .into_iter()
                    .flat_map(move |b| (0..n).map(move |l| jet_name(level, b, l)))
            }))
        })
        .clone()
}

/// Highest jet level among the variables of `g`; 0 for constants.
pub fn jet_level(n: usize, g: &CPoly) -> usize {
    (0..g.vars().len())
        .rev()
        .find(|&i| g.uses_var(i))
        .map_or(0, |i| jet_slot(n, i).0)
}

/// Largest total degree of a term in the variables of one level.
pub fn level_degree(n: usize, g: &CPoly, level: usize) -> u32 {
    let lo = jet_index(n, level, false, 0);
    let hi = (lo + 2 * n).min(g.vars().len());
    if lo >= hi {
        return 0;
    }
    g.terms()
        .map(|(m, _)| m.exponents()[lo..hi].iter().sum())
        .max()
        .unwrap_or(0)
}
