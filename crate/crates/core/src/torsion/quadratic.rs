use crate::expr_core::linalg::rational_det;
use crate::expr_core::{int, rat, Poly, Rational, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    NotDefinite,
}

/// Symmetric matrix of a real quadratic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    pub matrix: Vec<Vec<Rational>>,
}

impl QuadraticForm {
    pub fn symmetrize(m: &[Vec<Rational>]) -> Self {
        let n = m.len();
        let half = rat(1, 2);
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (&m[i][j] + &m[j][i]) * &half).collect())
            .collect();
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn evaluate(&self, p: &[Rational]) -> Rational {
        self.matrix
            .iter()
            .zip(p)
            .map(|(row, pi)| pi * row.iter().zip(p).map(|(a, b)| a * b).sum::<Rational>())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|x| *x == int(0))
    }

    pub fn leading_minors(&self) -> Vec<Rational> {
        (1..=self.dim())
            .map(|k| {
                let sub: Vec<Vec<Rational>> = self.matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
                rational_det(&sub)
            })
            .collect()
    }

    /// Sylvester's criterion on the leading principal minors.
    pub fn definiteness(&self) -> Definiteness {
        let minors = self.leading_minors();
        let zero = int(0);
        if minors.iter().all(|m| *m > zero) {
            Definiteness::PositiveDefinite
        } else if minors
            .iter()
            .enumerate()
            .all(|(k, m)| if k % 2 == 0 { *m < zero } else { *m > zero })
        {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::NotDefinite
        }
    }

    /// The form as a polynomial over `vars` (one variable per coordinate).
    pub fn to_poly(&self, vars: &VarTable) -> Poly {
        let n = self.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                terms.push((e, self.matrix[i][j].clone()));
            }
        }
        Poly::from_terms(vars, terms)
    }
}
