//! The obstruction vectors 𝔇₀, 𝔇₁, 𝔇₂, prolongation dimensions and the involutivity order.

use thiserror::Error;

use crate::expr_core::linalg::{rank, rational_rank, vec_mat};
use crate::expr_core::{Field, RatFn, Rational};
use crate::pfaff_geometry::{GammaBetaData, GeometryError, HypersurfaceProblem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutivityError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),
    #[error("prolongation order must be at least 1")]
    InvalidOrder,
}

/// 𝔇₁ = γ¹β − β₁ and 𝔇₂ = γ²β − β₂, both proportional to 𝔇₀.
#[derive(Clone, Debug, PartialEq)]
pub struct DVectors<F> {
    pub d0: Vec<F>,
    pub d1: Vec<F>,
    pub d2: Vec<F>,
}

impl<F: Field> DVectors<F> {
    pub fn d0_is_zero(&self) -> bool {
        self.d0.iter().all(Field::is_zero)
    }
}

/// Closed form of 𝔇₀ from ρ, μ and μ⁽²⁾.
pub fn d0_closed_form<F: Field>(gb: &GammaBetaData<F>) -> Vec<F> {
    let (r, m, m2) = (&gb.rho_grad, &gb.mu, &gb.mu2);
    let scale = gb.d.mul(&gb.d).inv().expect("D is nonzero").neg();
    (2..r.len())
        .map(|i| {
            let t1 = r[0].mul(&m[i].mul(&m2[1]).sub(&m[1].mul(&m2[i])));
            let t2 = r[1].mul(&m[0].mul(&m2[i]).sub(&m[i].mul(&m2[0])));
            let t3 = r[i].mul(&m[1].mul(&m2[0]).sub(&m[0].mul(&m2[1])));
            t1.add(&t2).add(&t3).mul(&scale)
        })
        .collect()
}

/// γᵏβ − βₖ computed from the definitions (k = 0 or 1).
pub fn d_definitional<F: Field>(gb: &GammaBetaData<F>, k: usize) -> Vec<F> {
    let gamma = if k == 0 { &gb.gamma1 } else { &gb.gamma2 };
    let row = gb.beta_row(k);
    vec_mat(gamma, &gb.beta, &gb.d.zero_like())
        .iter()
        .zip(row)
        .map(|(a, b)| a.sub(b))
        .collect()
}

/// Computes the three vectors and checks 𝔇₁ = ρ₂𝔇₀ and 𝔇₂ = −ρ₁𝔇₀ against the definitions.
pub fn compute_d_vectors<F: Field + PartialEq>(gb: &GammaBetaData<F>) -> Result<DVectors<F>, InvolutivityError> {
    let d0 = d0_closed_form(gb);
    let d1 = d_definitional(gb, 0);
    let d2 = d_definitional(gb, 1);
    let rho1 = &gb.rho_grad[0];
    let rho2 = &gb.rho_grad[1];
    for (j, x) in d0.iter().enumerate() {
        if rho2.mul(x) != d1[j] {
            return Err(InvolutivityError::CrossCheckMismatch(format!("D1 != rho2*D0 at index {}", j + 3)));
        }
        if rho1.mul(x).neg() != d2[j] {
            return Err(InvolutivityError::CrossCheckMismatch(format!("D2 != -rho1*D0 at index {}", j + 3)));
        }
    }
    Ok(DVectors { d0, d1, d2 })
}

/// Rows 𝔇₀, 𝔇₀β, …, 𝔇₀β^{count−1}.
pub fn krylov_rows<F: Field>(d0: &[F], beta: &[Vec<F>], count: usize) -> Vec<Vec<F>> {
    let zero = beta[0][0].zero_like();
    let mut rows = Vec::with_capacity(count);
    let mut cur = d0.to_vec();
    for _ in 0..count {
        let next = vec_mat(&cur, beta, &zero);
        rows.push(cur);
        cur = next;
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauReport {
    pub n: usize,
    pub dim_a: usize,
    /// `dims[q]` = dim A⁽q⁾ for q = 0..=Q.
    pub dims: Vec<usize>,
    pub q0: usize,
    pub involutive_from: usize,
    pub involutive_at_0: bool,
}

fn tableau<F: Field>(n: usize, d0: &[F], beta: &[Vec<F>], order: usize, rank_of: impl Fn(&[Vec<F>]) -> usize) -> TableauReport {
    let m = 2 * n - 2;
    let rows = krylov_rows(d0, beta, order.max(m).max(1));
    let ranks: Vec<usize> = (0..=rows.len()).map(|q| rank_of(&rows[..q])).collect();
    let dims: Vec<usize> = (0..=order).map(|q| m - ranks[q]).collect();
    let q0 = ranks[m];
    let involutive_from = (0..rows.len())
        .find(|&k| ranks[k + 1] == ranks[k])
        .unwrap_or(m);
    TableauReport { n, dim_a: m, dims, q0, involutive_from, involutive_at_0: involutive_from == 0 }
}

pub fn tableau_from_data(gb: &GammaBetaData<Rational>, order: usize) -> Result<TableauReport, InvolutivityError> {
    if order == 0 {
        return Err(InvolutivityError::InvalidOrder);
    }
    let dv = compute_d_vectors(gb)?;
    let n = gb.rho_grad.len() / 2;
    Ok(tableau(n, &dv.d0, &gb.beta, order, |r| if r.is_empty() { 0 } else { rational_rank(r) }))
}

/// Prolongation dimensions at a point in user coordinates; `order` defaults to 2n − 2.
pub fn prolongation_dims(problem: &HypersurfaceProblem, f_point: &[Rational], order: Option<usize>) -> Result<TableauReport, InvolutivityError> {
    let gb = problem.gamma_beta_at(f_point)?;
    tableau_from_data(&gb, order.unwrap_or(2 * problem.n() - 2))
}

/// The same dimensions computed over the field of rational functions (generic point).
pub fn prolongation_dims_symbolic(problem: &HypersurfaceProblem, order: Option<usize>) -> Result<TableauReport, InvolutivityError> {
    let order = order.unwrap_or(2 * problem.n() - 2);
    if order == 0 {
        return Err(InvolutivityError::InvalidOrder);
    }
    let gb: GammaBetaData<RatFn> = problem.gamma_beta_symbolic()?;
    let dv = compute_d_vectors(&gb)?;
    Ok(tableau(problem.n(), &dv.d0, &gb.beta, order, rank))
}

/// rank(𝔇₀, 𝔇₀β, …, 𝔇₀β^{2n−3}).
pub fn involutivity_order(problem: &HypersurfaceProblem, f_point: &[Rational]) -> Result<usize, InvolutivityError> {
    let gb = problem.gamma_beta_at(f_point)?;
    let dv = compute_d_vectors(&gb)?;
    let rows = krylov_rows(&dv.d0, &gb.beta, 2 * problem.n() - 2);
    Ok(rational_rank(&rows))
}
