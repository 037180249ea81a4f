use crate::expr_core::linalg::rank;
use crate::expr_core::{int, CPoly, GaussianRational, Rational};

use super::vars::jet_index;
use super::JetError;

/// The two real rows of the linearization of `g` in the level-`level` variables at `point`.
///
/// Unknowns are (Re v₁..Re vₙ, Im v₁..Im vₙ) with the barred variables tied to the conjugates.
pub(crate) fn real_rows(n: usize, g: &CPoly, level: usize, point: &[GaussianRational]) -> Result<[Vec<Rational>; 2], JetError> {
    let mut re = vec![int(0); 2 * n];
    let mut im = vec![int(0); 2 * n];
    for l in 0..n {
        let d = g.differentiate(jet_index(n, level, false, l)).evaluate(point)?;
        let e = g.differentiate(jet_index(n, level, true, l)).evaluate(point)?;
        let s = d.add(&e);
        let t = d.sub(&e);
        re[l] = s.re.clone();
        re[n + l] = -t.im.clone();
        im[l] = s.im;
        im[n + l] = t.re;
    }
    Ok([re, im])
}

/// Stacked real rows of several equalities.
pub(crate) fn stacked_rows(n: usize, eqs: &[&CPoly], level: usize, point: &[GaussianRational]) -> Result<Vec<Vec<Rational>>, JetError> {
    let mut rows = Vec::new();
    for g in eqs {
        let [a, b] = real_rows(n, g, level, point)?;
        rows.push(a);
        rows.push(b);
    }
    Ok(rows)
}

pub(crate) fn real_rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        rank(rows)
    }
}

/// Affine system in the level-`level` unknowns for equalities of degree ≤ 1 in them.
/// `lower` is a full point whose top-level entries are ignored.
pub(crate) fn affine_system(
    n: usize,
    eqs: &[&CPoly],
    level: usize,
    lower: &[GaussianRational],
) -> Result<(Vec<Vec<Rational>>, Vec<Rational>), JetError> {
    let mut point = lower.to_vec();
    for l in 0..n {
        for b in [false, true] {
            point[jet_index(n, level, b, l)] = GaussianRational::real(int(0));
        }
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in eqs {
        let [a, b] = real_rows(n, g, level, &point)?;
        let g0 = g.evaluate(&point)?;
        rows.push(a);
        rhs.push(-g0.re);
        rows.push(b);
        rhs.push(-g0.im);
    }
    Ok((rows, rhs))
}

/// Complex values of the level variables from a real vector (Re parts, then Im parts).
pub(crate) fn complex_values(n: usize, x: &[Rational]) -> Vec<GaussianRational> {
    (0..n).map(|l| GaussianRational::new(x[l].clone(), x[n + l].clone())).collect()
}
