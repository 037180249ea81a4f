use crate::expr_core::{int, Poly, Rational, VarTable};
use crate::pfaff_geometry::{HypersurfaceProblem, StructureMatrix};

use super::quadratic::{Definiteness, QuadraticForm};
use super::{TorsionContext, TorsionError};

/// Complex-case coefficients at a point; `b_lower[j-2][k-2]` is B_{j,k}, `b_upper` is B^{j,k}.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTorsionData {
    pub n: usize,
    pub gamma1: Vec<Rational>,
    pub gamma2: Vec<Rational>,
    pub b_lower: Vec<Vec<Rational>>,
    pub b_upper: Vec<Vec<Rational>>,
    pub c1: QuadraticForm,
    pub c2: QuadraticForm,
}

fn complex_context(rho: &Poly, f_point: &[Rational]) -> Result<(HypersurfaceProblem, TorsionContext), TorsionError> {
    let s = StructureMatrix::complex_standard(rho.vars());
    let problem = HypersurfaceProblem::new(rho.clone(), s, (0, 1))?;
    let ctx = TorsionContext::new(&problem, f_point)?;
    Ok((problem, ctx))
}

/// B_{j,k} and B^{j,k} through the operators P¹_k, P²_k applied to γ.
pub fn complex_b_coefficients(rho: &Poly, f_point: &[Rational]) -> Result<ComplexTorsionData, TorsionError> {
    let (problem, ctx) = complex_context(rho, f_point)?;
    let n = problem.n();
    let g = &ctx.gb;
    // Reduced index of the coordinate 2k (1-based) is 2k − 3.
    let even = |k: usize| 2 * k - 3;
    let p1 = |k: usize, dg: &[Rational]| -> Rational {
        &g.gamma2[even(k)] * &dg[0] - &g.gamma1[even(k)] * &dg[1] + &dg[2 * k - 2]
    };
    let p2 = |k: usize, dg: &[Rational]| -> Rational {
        &g.gamma1[even(k)] * &dg[0] + &g.gamma2[even(k)] * &dg[1] + &dg[2 * k - 1]
    };
    let mut b_lower = vec![vec![int(0); n - 1]; n - 1];
    let mut b_upper = vec![vec![int(0); n - 1]; n - 1];
    for j in 2..=n {
        let dg1 = &ctx.d_gamma[0][even(j)];
        let dg2 = &ctx.d_gamma[1][even(j)];
        for k in 2..=n {
            b_lower[j - 2][k - 2] = p2(k, dg1) + p1(k, dg2);
            b_upper[j - 2][k - 2] = p2(k, dg2) - p1(k, dg1);
        }
    }
    let (c1, c2) = a11_forms(n, &b_lower, &b_upper);
    Ok(ComplexTorsionData { n, gamma1: g.gamma1.clone(), gamma2: g.gamma2.clone(), b_lower, b_upper, c1, c2 })
}

/// The two quadratic forms in p³..p^{2n} built from B_{j,k}, B^{j,k}.
pub fn a11_forms(n: usize, b_lower: &[Vec<Rational>], b_upper: &[Vec<Rational>]) -> (QuadraticForm, QuadraticForm) {
    let m = 2 * n - 2;
    let mut m1 = vec![vec![int(0); m]; m];
    let mut m2 = vec![vec![int(0); m]; m];
    // Reduced indices of p^{2j−1} and p^{2j}.
    let odd = |j: usize| 2 * j - 4;
    let even = |j: usize| 2 * j - 3;
    for j in 2..=n {
        for jp in 2..=n {
            let lo = &b_lower[j - 2][jp - 2];
            let up = &b_upper[j - 2][jp - 2];
            // s = p^{2j−1}p^{2j′−1} + p^{2j}p^{2j′}
            for (a, b) in [(odd(j), odd(jp)), (even(j), even(jp))] {
                m1[a][b] += up;
                m2[a][b] -= lo;
            }
            // t = p^{2j}p^{2j′−1} − p^{2j−1}p^{2j′}
            m1[even(j)][odd(jp)] += lo;
            m1[odd(j)][even(jp)] -= lo;
            m2[even(j)][odd(jp)] += up;
            m2[odd(j)][even(jp)] -= up;
        }
    }
    (QuadraticForm::symmetrize(&m1), QuadraticForm::symmetrize(&m2))
}

pub fn complex_torsion_quadratics(rho: &Poly, f_point: &[Rational]) -> Result<(QuadraticForm, QuadraticForm), TorsionError> {
    let data = complex_b_coefficients(rho, f_point)?;
    Ok((data.c1, data.c2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim6Verdict {
    NecessaryConditionHolds,
    NecessaryConditionViolated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dim6Report {
    pub data: ComplexTorsionData,
    /// 4B₂₂B₃₃ − (B₂₃+B₃₂)² − (B^{23}−B^{32})²
    pub disc_lower: Rational,
    /// 4B^{22}B^{33} − (B^{23}+B^{32})² − (B₂₃−B₃₂)²
    pub disc_upper: Rational,
    pub c1_definiteness: Definiteness,
    pub c2_definiteness: Definiteness,
    pub verdict: Dim6Verdict,
}

pub fn discriminants(b_lower: &[Vec<Rational>], b_upper: &[Vec<Rational>]) -> (Rational, Rational) {
    let (l, u) = (b_lower, b_upper);
    let sq = |x: Rational| &x * &x;
    let four = int(4);
    let lower = &four * &l[0][0] * &l[1][1] - sq(&l[0][1] + &l[1][0]) - sq(&u[0][1] - &u[1][0]);
    let upper = &four * &u[0][0] * &u[1][1] - sq(&u[0][1] + &u[1][0]) - sq(&l[0][1] - &l[1][0]);
    (lower, upper)
}

/// The dimension-6 necessary condition: neither torsion form may be definite.
pub fn dim6_definiteness(rho: &Poly, f_point: &[Rational]) -> Result<Dim6Report, TorsionError> {
    if rho.vars().len() != 6 {
        return Err(TorsionError::WrongDimension { expected: 3, got: rho.vars().len() / 2 });
    }
    let data = complex_b_coefficients(rho, f_point)?;
    let (disc_lower, disc_upper) = discriminants(&data.b_lower, &data.b_upper);
    let c1_definiteness = data.c1.definiteness();
    let c2_definiteness = data.c2.definiteness();
    let zero = int(0);
    if (c1_definiteness != Definiteness::NotDefinite) != (disc_upper > zero)
        || (c2_definiteness != Definiteness::NotDefinite) != (disc_lower > zero)
    {
        return Err(TorsionError::CrossCheckMismatch(
            "discriminant sign disagrees with the principal-minor test".into(),
        ));
    }
    let verdict = if disc_lower <= zero && disc_upper <= zero {
        Dim6Verdict::NecessaryConditionHolds
    } else {
        Dim6Verdict::NecessaryConditionViolated
    };
    Ok(Dim6Report { data, disc_lower, disc_upper, c1_definiteness, c2_definiteness, verdict })
}

/// Completed-square decompositions of c¹ and c² over the variables p3..p6, or `None` when
/// B^{2,2} or B_{2,2} vanishes.
pub fn completed_square_dim6(b_lower: &[Vec<Rational>], b_upper: &[Vec<Rational>], vars: &VarTable) -> Option<(Poly, Poly)> {
    let (l, u) = (b_lower, b_upper);
    let zero = int(0);
    if l[0][0] == zero || u[0][0] == zero {
        return None;
    }
    let v = |i: usize| Poly::var(vars, i);
    let k = |c: Rational| Poly::constant(vars, c);
    let (p3, p4, p5, p6) = (v(0), v(1), v(2), v(3));
    let tail = p5.mul(&p5).add(&p6.mul(&p6));
    let four = int(4);
    let two = int(2);

    let a = (&u[0][1] + &u[1][0]) / (&two * &u[0][0]);
    let b = (&l[0][1] - &l[1][0]) / (&two * &u[0][0]);
    let sq1 = p3.add(&p5.scale(&a)).sub(&p6.scale(&b));
    let sq2 = p4.add(&p6.scale(&a)).add(&p5.scale(&b));
    let rest1 = (&four * &u[0][0] * &u[1][1]
        - (&l[0][1] - &l[1][0]) * (&l[0][1] - &l[1][0])
        - (&u[0][1] + &u[1][0]) * (&u[0][1] + &u[1][0]))
        / (&four * &u[0][0]);
    let c1 = sq1.mul(&sq1).add(&sq2.mul(&sq2)).scale(&u[0][0]).add(&tail.mul(&k(rest1)));

    let a2 = (&l[0][1] + &l[1][0]) / (&two * &l[0][0]);
    let b2 = (&u[0][1] - &u[1][0]) / (&two * &l[0][0]);
    let sq3 = p3.add(&p5.scale(&a2)).add(&p6.scale(&b2));
    let sq4 = p4.add(&p6.scale(&a2)).sub(&p5.scale(&b2));
    let rest2 = (-(&four * &l[0][0] * &l[1][1])
        + (&l[0][1] + &l[1][0]) * (&l[0][1] + &l[1][0])
        + (&u[0][1] - &u[1][0]) * (&u[0][1] - &u[1][0]))
        / (&four * &l[0][0]);
    let c2 = sq3.mul(&sq3).add(&sq4.mul(&sq4)).scale(&(-l[0][0].clone())).add(&tail.mul(&k(rest2)));
    Some((c1, c2))
}
