use crate::expr_core::{int, rat, CPoly, GaussianRational, Poly, Rational, VarTable};
use crate::pfaff_geometry::StructureMatrix;

use super::vars::{jet_index, jet_slot, jet_table};
use super::JetError;

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn apply(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Levi form D²ρ(p,p) + Dρ(DJ(Jp)(p)) + Dρ(J(DJ(p)(p))) + D²ρ(Jp,Jp) at `f_point`.
///
/// `rho` is the real defining function over the coordinates of `j`; (Jp)ⱼ = Σᵢ Jⱼᵢ pᵢ.
pub fn levi_form(rho: &Poly, j: &StructureMatrix, f_point: &[Rational], p: &[Rational]) -> Result<Rational, JetError> {
    let dim = j.dim();
    for (what, got) in [("defining function variables", rho.vars().len()), ("point", f_point.len()), ("direction", p.len())] {
        if got != dim {
            return Err(JetError::DimensionMismatch { what, expected: dim, got });
        }
    }
    let rho = rho.embed(j.vars())?;
    let grad = (0..dim).map(|a| rho.differentiate(a).evaluate(f_point)).collect::<Result<Vec<_>, _>>()?;
    let hess = (0..dim)
        .map(|a| {
            let da = rho.differentiate(a);
            (0..dim).map(|b| da.differentiate(b).evaluate(f_point)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let jm = j.evaluate(f_point)?;
    let dj = (0..dim)
        .map(|c| {
            j.entries()
                .iter()
                .map(|row| row.iter().map(|e| e.derivative_at(c, f_point)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dj_along = |v: &[Rational]| -> Vec<Vec<Rational>> {
        (0..dim)
            .map(|r| (0..dim).map(|s| (0..dim).map(|c| &v[c] * &dj[c][r][s]).sum()).collect())
            .collect()
    };
    let jp = apply(&jm, p);
    let quad = |v: &[Rational]| dot(v, &apply(&hess, v));
    let t2 = dot(&grad, &apply(&dj_along(&jp), p));
    let t3 = dot(&grad, &apply(&jm, &apply(&dj_along(p), p)));
    Ok(quad(p) + t2 + t3 + quad(&jp))
}

/// J(f)² = −I at the point.
pub fn squares_to_minus_identity_at(j: &StructureMatrix, f_point: &[Rational]) -> Result<bool, JetError> {
    let m = j.evaluate(f_point)?;
    let dim = m.len();
    Ok((0..dim).all(|r| {
        (0..dim).all(|c| {
            let s: Rational = (0..dim).map(|k| &m[r][k] * &m[k][c]).sum();
            s == if r == c { int(-1) } else { int(0) }
        })
    }))
}

/// Real polynomial over `real` (f₁..f₂ₙ) from one in z, zb with z_l = f_{2l−1} + i f_{2l}.
pub fn realify(g: &CPoly, n: usize, real: &VarTable) -> Result<Poly, JetError> {
    if real.len() != 2 * n {
        return Err(JetError::DimensionMismatch { what: "real coordinates", expected: 2 * n, got: real.len() });
    }
    let i = CPoly::constant(real, GaussianRational::i());
    let images = (0..g.vars().len())
        .map(|k| {
            let (level, barred, l) = jet_slot(n, k);
            if level > 0 {
                if g.uses_var(k) {
                    return Err(JetError::DimensionMismatch { what: "jet level of a defining function", expected: 0, got: level });
                }
                return Ok(CPoly::zero(real));
            }
            let x = CPoly::var(real, 2 * l);
            let y = i.mul(&CPoly::var(real, 2 * l + 1));
            Ok(if barred { x.sub(&y) } else { x.add(&y) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = g.compose(&images, real);
    if r.terms().any(|(_, c)| !c.is_real()) {
        return Err(JetError::NotRealValued);
    }
    Ok(r.map_coeffs(|c| c.re.clone()))
}

/// Inverse of [`realify`]: f_{2l−1} = (z_l + zb_l)/2, f_{2l} = (z_l − zb_l)/(2i).
pub fn complexify(rho: &Poly, n: usize) -> Result<CPoly, JetError> {
    if rho.vars().len() != 2 * n {
        return Err(JetError::DimensionMismatch { what: "real coordinates", expected: 2 * n, got: rho.vars().len() });
    }
    let t = jet_table(n, 0);
    let half = GaussianRational::real(rat(1, 2));
    let minus_half_i = GaussianRational::new(int(0), rat(-1, 2));
    let images: Vec<CPoly> = (0..2 * n)
        .map(|k| {
            let l = k / 2;
            let z = CPoly::var(&t, jet_index(n, 0, false, l));
            let zb = CPoly::var(&t, jet_index(n, 0, true, l));
            if k % 2 == 0 {
                z.add(&zb).scale(&half)
            } else {
                z.sub(&zb).scale(&minus_half_i)
            }
        })
        .collect();
    let c = rho.map_coeffs(|x| GaussianRational::real(x.clone()));
    Ok(c.compose(&images, &t))
}

/// Real tangent vector (Re w₁, Im w₁, …) of a first jet.
pub fn tangent_of_jet(w: &[GaussianRational]) -> Vec<Rational> {
    w.iter().flat_map(|c| [c.re.clone(), c.im.clone()]).collect()
}
