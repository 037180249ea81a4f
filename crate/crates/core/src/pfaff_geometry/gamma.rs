use crate::expr_core::Field;

use super::GeometryError;

/// Reduced first-jet data in relabeled coordinates (the distinguished pair is 0, 1).
///
/// Vectors indexed by `j` run over the reduced coordinates 3..2n, stored at `j - 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaBetaData<F> {
    pub rho_grad: Vec<F>,
    pub mu: Vec<F>,
    pub mu2: Vec<F>,
    pub d: F,
    pub gamma1: Vec<F>,
    pub gamma2: Vec<F>,
    /// β_{i,j} for i, j = 3..2n.
    pub beta: Vec<Vec<F>>,
    pub beta1: Vec<F>,
    pub beta2: Vec<F>,
}

impl<F: Field> GammaBetaData<F> {
    pub fn reduced_len(&self) -> usize {
        self.gamma1.len()
    }

    /// Row β_{k,·} for any k = 1..2n given 0-based (0 → β₁, 1 → β₂).
    pub fn beta_row(&self, k: usize) -> &[F] {
        match k {
            0 => &self.beta1,
            1 => &self.beta2,
            _ => &self.beta[k - 2],
        }
    }

    /// Γ^k_j: γ¹_j, γ²_j, then δ for k ≥ 3 (0-based k).
    pub fn big_gamma(&self, k: usize, j: usize) -> F {
        match k {
            0 => self.gamma1[j].clone(),
            1 => self.gamma2[j].clone(),
            _ => {
                if k - 2 == j {
                    self.d.one_like()
                } else {
                    self.d.zero_like()
                }
            }
        }
    }

    /// Completes the reduced jet: (p¹, p²) = (Σγ¹_j p^j, Σγ²_j p^j).
    pub fn complete(&self, p_reduced: &[F]) -> Vec<F> {
        let zero = self.d.zero_like();
        let dot = |g: &[F]| g.iter().zip(p_reduced).fold(zero.clone(), |acc, (a, b)| acc.add(&a.mul(b)));
        let mut full = vec![dot(&self.gamma1), dot(&self.gamma2)];
        full.extend(p_reduced.iter().cloned());
        full
    }
}

/// γ, β from the gradient of ρ and the matrix 𝒜 (entries `a[j][i]` = α_{j,i}).
pub fn gamma_beta_from<F: Field>(grad: &[F], a: &[Vec<F>]) -> Result<GammaBetaData<F>, GeometryError> {
    let dim = grad.len();
    let zero = grad[0].zero_like();
    let mu: Vec<F> = (0..dim)
        .map(|i| (0..dim).fold(zero.clone(), |acc, j| acc.add(&grad[j].mul(&a[j][i]))))
        .collect();
    let mu2: Vec<F> = (0..dim)
        .map(|i| (0..dim).fold(zero.clone(), |acc, j| acc.add(&mu[j].mul(&a[j][i]))))
        .collect();
    let d = grad[0].mul(&mu[1]).sub(&grad[1].mul(&mu[0]));
    let Some(dinv) = d.inv() else {
        return Err(GeometryError::SingularD { i1: 0, i2: 1 });
    };
    let minus_dinv = dinv.neg();
    let gamma1: Vec<F> = (2..dim)
        .map(|i| grad[i].mul(&mu[1]).sub(&grad[1].mul(&mu[i])).mul(&minus_dinv))
        .collect();
    let gamma2: Vec<F> = (2..dim)
        .map(|i| grad[0].mul(&mu[i]).sub(&grad[i].mul(&mu[0])).mul(&minus_dinv))
        .collect();
    let beta_row = |row: usize| -> Vec<F> {
        (2..dim)
            .map(|j| {
                a[row][0]
                    .mul(&gamma1[j - 2])
                    .add(&a[row][1].mul(&gamma2[j - 2]))
                    .add(&a[row][j])
            })
            .collect()
    };
    let beta1 = beta_row(0);
    let beta2 = beta_row(1);
    let beta = (2..dim).map(beta_row).collect();
    Ok(GammaBetaData { rho_grad: grad.to_vec(), mu, mu2, d, gamma1, gamma2, beta, beta1, beta2 })
}
