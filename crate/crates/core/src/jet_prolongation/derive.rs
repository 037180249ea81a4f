use std::collections::BTreeSet;

use crate::expr_core::CPoly;

use super::vars::{jet_index, jet_level, jet_slot, jet_table};
use super::{close_under_conjugation, JetConstraintSystem, JetError};

fn table_order(n: usize, g: &CPoly) -> usize {
    g.vars().len() / (2 * n) - 1
}

fn derivation(n: usize, g: &CPoly, barred: bool) -> CPoly {
    let order = table_order(n, g);
    let target = jet_table(n, order + 1);
    let lifted = g.embed(&target).expect("jet tables extend each other");
    let mut acc = CPoly::zero(&target);
    for i in 0..g.vars().len() {
        let (level, b, l) = jet_slot(n, i);
        if b != barred || !g.uses_var(i) {
            continue;
        }
        let next = CPoly::var(&target, jet_index(n, level + 1, barred, l));
        acc = acc.add(&lifted.differentiate(i).mul(&next));
    }
    acc
}

/// Total derivative along a holomorphic curve. The result lives one level higher.
pub fn d_t(n: usize, g: &CPoly) -> CPoly {
    derivation(n, g, false)
}

/// Conjugate total derivative: acts on the barred variables only.
pub fn d_tbar(n: usize, g: &CPoly) -> CPoly {
    derivation(n, g, true)
}

/// Adds D_t g, D_t̄ g and D_tD_t̄ g for every equality; returns the new system and the indices
/// of equalities that were not already present.
pub(crate) fn prolong_with_new(system: &JetConstraintSystem) -> Result<(JetConstraintSystem, Vec<usize>), JetError> {
    let n = system.n();
    let lifted = system.lifted(system.order() + 1)?;
    let target = lifted.table();
    let mut eqs: Vec<CPoly> = lifted.equalities().to_vec();
    let base = eqs.len();
    for g in system.equalities() {
        let dt = d_t(n, g);
        let dtb = d_tbar(n, g);
        let dtdtb = truncate(&d_t(n, &dtb), &target);
        eqs.extend([dt, dtb, dtdtb]);
    }
    let closed = close_under_conjugation(eqs)?;
    let new = (0..closed.len()).filter(|&i| i >= base).collect();
    Ok((JetConstraintSystem::from_parts(n, system.order() + 1, closed, lifted.openings().to_vec()), new))
}

/// First prolongation: D_t, D_t̄ and D_tD_t̄ of every equality, closed under conjugation.
pub fn prolong_constraints(system: &JetConstraintSystem) -> Result<JetConstraintSystem, JetError> {
    Ok(prolong_with_new(system)?.0)
}

/// Replaces single-variable monomial equalities by the variable, substitutes vanishing
/// variables everywhere and adds the derivatives of vanishing lower-level variables, until
/// nothing changes. Returns the log of forced variables.
pub fn collapse_monomials(system: &JetConstraintSystem) -> Result<(JetConstraintSystem, Vec<String>), JetError> {
    let n = system.n();
    let order = system.order();
    let table = system.table();
    let mut eqs = system.equalities().to_vec();
    let mut vanishing: BTreeSet<usize> = BTreeSet::new();
    loop {
        let before = vanishing.len();
        for g in &eqs {
            if g.num_terms() != 1 {
                continue;
            }
            let (m, _) = g.leading_term().expect("one term");
            let used: Vec<usize> = (0..m.exponents().len()).filter(|&i| m.exponents()[i] > 0).collect();
            if used.len() == 1 {
                vanishing.insert(used[0]);
            }
        }
        for i in vanishing.clone() {
            let (level, b, l) = jet_slot(n, i);
            vanishing.insert(jet_index(n, level, !b, l));
            if level < order {
                vanishing.insert(jet_index(n, level + 1, b, l));
                vanishing.insert(jet_index(n, level + 1, !b, l));
            }
        }
        let images: Vec<CPoly> = (0..table.len())
            .map(|i| if vanishing.contains(&i) { CPoly::zero(&table) } else { CPoly::var(&table, i) })
            .collect();
        let mut next: Vec<CPoly> = eqs
            .iter()
            .map(|g| g.compose(&images, &table))
            .filter(|g| !g.is_zero())
            .collect();
        for &i in &vanishing {
            next.push(CPoly::var(&table, i));
        }
        let next = close_under_conjugation(next)?;
        let done = vanishing.len() == before && same_set(&eqs, &next);
        eqs = next;
        if done {
            break;
        }
    }
    eqs.sort_by_key(|g| (jet_level(n, g), std::cmp::Reverse(g.num_terms())));
    let log = vanishing.iter().map(|&i| table.name(i).to_string()).collect();
    Ok((JetConstraintSystem::from_parts(n, order, eqs, system.openings().to_vec()), log))
}

/// Moves `g` to a smaller jet table; the dropped variables must not occur in `g`.
fn truncate(g: &CPoly, target: &crate::expr_core::VarTable) -> CPoly {
    let images: Vec<CPoly> = (0..g.vars().len())
        .map(|i| {
            if i < target.len() {
                CPoly::var(target, i)
            } else {
                assert!(!g.uses_var(i), "truncation would drop a used variable");
                CPoly::zero(target)
            }
        })
        .collect();
    g.compose(&images, target)
}

fn same_set(a: &[CPoly], b: &[CPoly]) -> bool {
    let key = |v: &[CPoly]| v.iter().map(|g| g.monic().to_string()).collect::<BTreeSet<_>>();
    key(a) == key(b)
}
