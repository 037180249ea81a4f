//! Structure-equation coefficients, torsion and its absorbability, and the complex-case
//! closed forms.

mod complex;
mod ellipsoid;
mod quadratic;

use thiserror::Error;

use crate::expr_core::linalg::solve_affine;
use crate::expr_core::{int, Field, RatFn, Rational};
use crate::involutivity::{compute_d_vectors, DVectors, InvolutivityError};
use crate::pfaff_geometry::{FirstJetPoint, GammaBetaData, GeometryError, HypersurfaceProblem};

pub use complex::{
    a11_forms, complex_b_coefficients, complex_torsion_quadratics, completed_square_dim6, discriminants,
    dim6_definiteness,
    ComplexTorsionData, Dim6Report, Dim6Verdict,
};
pub use ellipsoid::{pseudo_ellipsoid_check, pseudo_ellipsoid_rho, EllipsoidReport, EllipsoidVerdict};
pub use quadratic::{Definiteness, QuadraticForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Involutivity(#[from] InvolutivityError),
    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),
    #[error("this analysis needs n = {expected}, got n = {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("pseudo-ellipsoid exponents k must be positive")]
    NonPositiveExponent,
}

/// Values of γ, β and of their first derivatives at one base point (relabeled coordinates).
#[derive(Clone, Debug)]
pub struct TorsionContext {
    pub gb: GammaBetaData<Rational>,
    /// `d_gamma[k][j][l]` = ∂Γᵏ_j/∂f_l for k = 0, 1 (Γᵏ is constant for k ≥ 2).
    pub d_gamma: Vec<Vec<Vec<Rational>>>,
    /// `d_beta[k][j][l]` = ∂β_{k,j}/∂f_l for every row k.
    pub d_beta: Vec<Vec<Vec<Rational>>>,
    /// `forms[k]` is the (unsymmetrized) matrix of cᵏ as a quadratic form in the reduced jet.
    pub forms: Vec<Vec<Vec<Rational>>>,
}

impl TorsionContext {
    /// Differentiates the symbolic γ/β and evaluates at `f_user`.
    pub fn new(problem: &HypersurfaceProblem, f_user: &[Rational]) -> Result<Self, TorsionError> {
        let sym = problem.gamma_beta_symbolic()?;
        Self::with_symbolic(problem, &sym, f_user)
    }

    pub fn with_symbolic(
        problem: &HypersurfaceProblem,
        sym: &GammaBetaData<RatFn>,
        f_user: &[Rational],
    ) -> Result<Self, TorsionError> {
        let gb = problem.gamma_beta_at(f_user)?;
        let f = problem.to_internal(f_user);
        let dim = problem.dim();
        let m = dim - 2;
        let grad = |e: &RatFn| -> Result<Vec<Rational>, TorsionError> {
            (0..dim)
                .map(|l| e.derivative_at(l, &f).map_err(|e| TorsionError::Geometry(e.into())))
                .collect()
        };
        let d_gamma = [&sym.gamma1, &sym.gamma2]
            .iter()
            .map(|g| g.iter().map(grad).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let d_beta = (0..dim)
            .map(|k| sym.beta_row(k).iter().map(grad).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let zero = int(0);
        let forms = (0..dim)
            .map(|k| {
                (0..m)
                    .map(|j| {
                        (0..m)
                            .map(|jp| {
                                let mut acc = zero.clone();
                                for l in 0..dim {
                                    if k < 2 {
                                        acc += &d_gamma[k][j][l] * &gb.beta_row(l)[jp];
                                    }
                                    acc -= &d_beta[k][j][l] * gb.big_gamma(l, jp);
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { gb, d_gamma, d_beta, forms })
    }

    /// cᵏ₁,₂ for every k at the reduced jet.
    pub fn torsion(&self, p: &[Rational]) -> Vec<Rational> {
        self.forms
            .iter()
            .map(|mk| {
                mk.iter()
                    .zip(p)
                    .map(|(row, pj)| pj * row.iter().zip(p).map(|(a, b)| a * b).sum::<Rational>())
                    .sum()
            })
            .collect()
    }

    /// cᵏ as a symmetric quadratic form.
    pub fn form(&self, k: usize) -> QuadraticForm {
        QuadraticForm::symmetrize(&self.forms[k])
    }
}

/// The coefficients A^k_{(j,1),i} of the structure equations and the torsion at one jet.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureEquationData {
    /// `a_coeffs[k][j]` = (A^k_{(j,1),1}, A^k_{(j,1),2}), relabeled coordinates.
    pub a_coeffs: Vec<Vec<[Rational; 2]>>,
    /// c^k₁,₂ for k = 1..2n (relabeled coordinates).
    pub c: Vec<Rational>,
}

fn a_table(gb: &GammaBetaData<Rational>) -> Vec<Vec<[Rational; 2]>> {
    let dim = gb.rho_grad.len();
    (0..dim)
        .map(|k| {
            (0..dim - 2)
                .map(|j| [-gb.big_gamma(k, j), -gb.beta_row(k)[j].clone()])
                .collect()
        })
        .collect()
}

pub fn structure_equation_coefficients(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
) -> Result<StructureEquationData, TorsionError> {
    let ctx = TorsionContext::new(problem, &jet.f)?;
    Ok(structure_data_from(&ctx, &jet.p_reduced))
}

pub fn structure_data_from(ctx: &TorsionContext, p_reduced: &[Rational]) -> StructureEquationData {
    StructureEquationData { a_coeffs: a_table(&ctx.gb), c: ctx.torsion(p_reduced) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionCase {
    D0Zero,
    D0Nonzero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorsionVerdict {
    pub case: TorsionCase,
    pub residual_1: Rational,
    pub residual_2: Rational,
    pub absorbable: bool,
    /// (v₁, v₂) with 𝔇₁v₁ = r₁, 𝔇₂v₁ = r₂ and v₂ʲ = cʲ + Σβ_{j,i}v₁ⁱ.
    pub witness_v: Option<(Vec<Rational>, Vec<Rational>)>,
    pub d_vectors: DVectors<Rational>,
    pub c: Vec<Rational>,
}

/// r₁ = c¹ − Σγ¹_i cⁱ and r₂ = c² − Σγ²_i cⁱ.
pub fn residuals(gb: &GammaBetaData<Rational>, c: &[Rational]) -> (Rational, Rational) {
    let tail = &c[2..];
    let r1 = &c[0] - gb.gamma1.iter().zip(tail).map(|(g, x)| g * x).sum::<Rational>();
    let r2 = &c[1] - gb.gamma2.iter().zip(tail).map(|(g, x)| g * x).sum::<Rational>();
    (r1, r2)
}

pub fn torsion_absorbable(problem: &HypersurfaceProblem, jet: &FirstJetPoint) -> Result<TorsionVerdict, TorsionError> {
    let ctx = TorsionContext::new(problem, &jet.f)?;
    verdict_from(&ctx, &jet.p_reduced)
}

pub fn verdict_from(ctx: &TorsionContext, p_reduced: &[Rational]) -> Result<TorsionVerdict, TorsionError> {
    let gb = &ctx.gb;
    let c = ctx.torsion(p_reduced);
    let dv = compute_d_vectors(gb)?;
    let (r1, r2) = residuals(gb, &c);
    let (rho1, rho2) = (&gb.rho_grad[0], &gb.rho_grad[1]);
    let m = gb.reduced_len();
    let zero = int(0);
    let (case, absorbable) = if dv.d0_is_zero() {
        (TorsionCase::D0Zero, r1.is_zero() && r2.is_zero())
    } else {
        (TorsionCase::D0Nonzero, (rho1 * &r1 + rho2 * &r2).is_zero())
    };
    let system = vec![dv.d1.clone(), dv.d2.clone()];
    let solved = solve_affine(&system, &[r1.clone(), r2.clone()], m, &zero);
    if solved.is_some() != absorbable {
        return Err(TorsionError::CrossCheckMismatch(
            "absorbability condition disagrees with the rank test".into(),
        ));
    }
    let witness_v = absorbable.then(|| {
        let mut v1 = vec![zero.clone(); m];
        if let Some(j0) = dv.d0.iter().position(|x| !x.is_zero()) {
            v1[j0] = if !dv.d1[j0].is_zero() { &r1 / &dv.d1[j0] } else { &r2 / &dv.d2[j0] };
        }
        let v2 = (0..m)
            .map(|j| &c[j + 2] + gb.beta[j].iter().zip(&v1).map(|(b, v)| b * v).sum::<Rational>())
            .collect();
        (v1, v2)
    });
    Ok(TorsionVerdict { case, residual_1: r1, residual_2: r2, absorbable, witness_v, d_vectors: dv, c })
}
