use num_traits::{Signed, Zero};

use crate::expr_core::{int, Poly, Rational, VarTable};

use super::TorsionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllipsoidVerdict {
    Holds,
    Violated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidReport {
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    /// (v₁²+v₂²)(w₃+w₄)(w₅+w₆) + (v₃²+v₄²)(w₁+w₂)(w₅+w₆) + (v₅²+v₆²)(w₁+w₂)(w₃+w₄)
    pub l: Rational,
    pub verdict: EllipsoidVerdict,
    /// 4v₁²(v₁²+v₂²)L/D⁴ and 4v₂²(v₁²+v₂²)L/D⁴ with D = −(v₁²+v₂²), when D ≠ 0.
    pub discriminant_lines: Option<(Rational, Rational)>,
}

/// ρ = Σ αᵢ yᵢ^{2kᵢ} over `vars` (six variables).
pub fn pseudo_ellipsoid_rho(alphas: &[Rational], ks: &[u32], vars: &VarTable) -> Poly {
    let mut p = Poly::zero(vars);
    for i in 0..6 {
        p = p.add(&Poly::var(vars, i).pow(2 * ks[i]).scale(&alphas[i]));
    }
    p
}

fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow::Pow::pow(x, e)
}

pub fn pseudo_ellipsoid_check(alphas: &[Rational], ks: &[u32], y: &[Rational]) -> Result<EllipsoidReport, TorsionError> {
    if alphas.len() != 6 || ks.len() != 6 || y.len() != 6 {
        return Err(TorsionError::WrongDimension { expected: 3, got: alphas.len().min(ks.len()).min(y.len()) / 2 });
    }
    if ks.contains(&0) {
        return Err(TorsionError::NonPositiveExponent);
    }
    let v: Vec<Rational> = (0..6)
        .map(|i| int(2) * &alphas[i] * int(i64::from(ks[i])) * pow(&y[i], 2 * ks[i] - 1))
        .collect();
    let w: Vec<Rational> = (0..6)
        .map(|i| {
            let k = int(i64::from(ks[i]));
            int(2) * &k * (int(2) * &k - int(1)) * &alphas[i] * pow(&y[i], 2 * ks[i] - 2)
        })
        .collect();
    let n2 = |a: usize| &v[a] * &v[a] + &v[a + 1] * &v[a + 1];
    let ws = |a: usize| &w[a] + &w[a + 1];
    let l = n2(0) * ws(2) * ws(4) + n2(2) * ws(0) * ws(4) + n2(4) * ws(0) * ws(2);
    let verdict = if l <= int(0) { EllipsoidVerdict::Holds } else { EllipsoidVerdict::Violated };
    let d = -n2(0);
    let discriminant_lines = (!d.is_zero()).then(|| {
        let d4 = pow(&d, 4);
        let line = |vi: &Rational| int(4) * vi * vi * n2(0) * &l / &d4;
        (line(&v[0]), line(&v[1]))
    });
    if let Some((a, b)) = &discriminant_lines {
        for x in [a, b] {
            if !x.is_zero() && x.signum() != l.signum() {
                return Err(TorsionError::CrossCheckMismatch("discriminant line sign differs from L".into()));
            }
        }
    }
    Ok(EllipsoidReport { v, w, l, verdict, discriminant_lines })
}
