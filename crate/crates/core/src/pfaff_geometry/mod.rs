//! The hypersurface problem (ρ, 𝒜, distinguished pair) and the reduced first-jet relations.

mod gamma;
mod structure;

use thiserror::Error;

use crate::expr_core::{int, ExprError, Field, Poly, RatFn, Rational, VarTable};

pub use gamma::{gamma_beta_from, GammaBetaData};
pub use structure::{StructureKind, StructureMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("D vanishes at the point for the distinguished pair ({i1}, {i2}); try another pair")]
    SingularD { i1: usize, i2: usize },
    #[error("D vanishes identically for every distinguished pair")]
    IdenticallySingularD,
    #[error("b vanishes identically")]
    ZeroB,
    #[error("structure matrix must be square of even size, got {rows} rows")]
    NotSquare { rows: usize },
    #[error("rho has {got} variables but the structure has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("distinguished pair ({0}, {1}) is invalid")]
    InvalidPair(usize, usize),
    #[error("point does not lie on the hypersurface (rho = {0})")]
    PointOffSurface(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// ρ and 𝒜 in user coordinates, together with the relabeling that moves the distinguished
/// pair to positions 0 and 1.
#[derive(Clone, Debug)]
pub struct HypersurfaceProblem {
    rho: Poly,
    structure: StructureMatrix,
    pair: (usize, usize),
    perm: Vec<usize>,
    rho_int: Poly,
    structure_int: StructureMatrix,
}

impl HypersurfaceProblem {
    /// `pair` is 0-based in user coordinates.
    pub fn new(rho: Poly, structure: StructureMatrix, pair: (usize, usize)) -> Result<Self, GeometryError> {
        let dim = structure.dim();
        if rho.vars().len() != dim {
            return Err(GeometryError::DimensionMismatch { expected: dim, got: rho.vars().len() });
        }
        let (i1, i2) = pair;
        if i1 == i2 || i1 >= dim || i2 >= dim {
            return Err(GeometryError::InvalidPair(i1, i2));
        }
        let mut perm = vec![i1, i2];
        perm.extend((0..dim).filter(|&k| k != i1 && k != i2));
        let table = VarTable::new(perm.iter().map(|&u| rho.vars().name(u).to_string()));
        let images = structure::inverse_images(&perm, &table);
        let rho_int = rho.compose(&images, &table);
        let structure_int = structure.permuted(&perm, &table)?;
        Ok(Self { rho, structure, pair, perm, rho_int, structure_int })
    }

    /// Uses the first pair (i < j, index order) with D ≠ 0 at `point`.
    pub fn with_pair_scan(rho: Poly, structure: StructureMatrix, point: &[Rational]) -> Result<Self, GeometryError> {
        let dim = structure.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                let pr = Self::new(rho.clone(), structure.clone(), (i, j))?;
                match pr.gamma_beta_at(point) {
                    Ok(_) => return Ok(pr),
                    Err(GeometryError::SingularD { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let first = Self::new(rho, structure, (0, 1))?;
        match first.gamma_beta_symbolic() {
            Err(GeometryError::IdenticallySingularD) if first.all_pairs_identically_singular()? => {
                Err(GeometryError::IdenticallySingularD)
            }
            _ => Err(GeometryError::SingularD { i1: 0, i2: 1 }),
        }
    }

    fn all_pairs_identically_singular(&self) -> Result<bool, GeometryError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                let pr = Self::new(self.rho.clone(), self.structure.clone(), (i, j))?;
                if pr.gamma_beta_symbolic().is_ok() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn rho(&self) -> &Poly {
        &self.rho
    }

    pub fn structure(&self) -> &StructureMatrix {
        &self.structure
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    /// `perm[internal] = user`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn internal_rho(&self) -> &Poly {
        &self.rho_int
    }

    pub fn internal_structure(&self) -> &StructureMatrix {
        &self.structure_int
    }

    pub fn internal_vars(&self) -> &VarTable {
        self.rho_int.vars()
    }

    pub fn to_internal(&self, user_point: &[Rational]) -> Vec<Rational> {
        self.perm.iter().map(|&u| user_point[u].clone()).collect()
    }

    pub fn to_user(&self, internal: &[Rational]) -> Vec<Rational> {
        let mut out = internal.to_vec();
        for (a, &u) in self.perm.iter().enumerate() {
            out[u] = internal[a].clone();
        }
        out
    }

    /// Pointwise γ/β at a point given in user coordinates.
    pub fn gamma_beta_at(&self, user_point: &[Rational]) -> Result<GammaBetaData<Rational>, GeometryError> {
        if user_point.len() != self.dim() {
            return Err(ExprError::DimensionMismatch { expected: self.dim(), got: user_point.len() }.into());
        }
        self.gamma_beta_internal(&self.to_internal(user_point))
    }

    pub fn gamma_beta_internal(&self, point: &[Rational]) -> Result<GammaBetaData<Rational>, GeometryError> {
        let grad = (0..self.dim())
            .map(|k| self.rho_int.differentiate(k).evaluate(point))
            .collect::<Result<Vec<_>, _>>()?;
        let a = self.structure_int.evaluate(point)?;
        gamma_beta_from(&grad, &a).map_err(|e| match e {
            GeometryError::SingularD { .. } => GeometryError::SingularD { i1: self.pair.0, i2: self.pair.1 },
            e => e,
        })
    }

    /// γ/β as rational functions of the relabeled coordinates.
    pub fn gamma_beta_symbolic(&self) -> Result<GammaBetaData<RatFn>, GeometryError> {
        let grad: Vec<RatFn> = (0..self.dim()).map(|k| RatFn::from_poly(self.rho_int.differentiate(k))).collect();
        gamma_beta_from(&grad, self.structure_int.entries()).map_err(|e| match e {
            GeometryError::SingularD { .. } => GeometryError::IdenticallySingularD,
            e => e,
        })
    }

    /// Full first jet in relabeled coordinates: (p₁, p₂ = 𝒜p₁).
    pub fn full_jet(&self, jet: &FirstJetPoint) -> Result<(Vec<Rational>, Vec<Rational>), GeometryError> {
        let f = self.to_internal(&jet.f);
        let gb = self.gamma_beta_internal(&f)?;
        let p1 = gb.complete(&jet.p_reduced);
        let a = self.structure_int.evaluate(&f)?;
        let p2 = crate::expr_core::linalg::mat_vec(&a, &p1, &int(0));
        Ok((p1, p2))
    }
}

/// Base point (user coordinates) and the reduced jet p³..p^{2n} (relabeled coordinates).
#[derive(Clone, Debug, PartialEq)]
pub struct FirstJetPoint {
    pub f: Vec<Rational>,
    pub p_reduced: Vec<Rational>,
}

impl FirstJetPoint {
    /// Checks ρ(f) = 0 exactly.
    pub fn on_surface(problem: &HypersurfaceProblem, f: Vec<Rational>, p_reduced: Vec<Rational>) -> Result<Self, GeometryError> {
        let v = problem.rho().evaluate(&f)?;
        if !v.is_zero() {
            return Err(GeometryError::PointOffSurface(v.to_string()));
        }
        Self::off_surface(problem, f, p_reduced)
    }

    pub fn off_surface(problem: &HypersurfaceProblem, f: Vec<Rational>, p_reduced: Vec<Rational>) -> Result<Self, GeometryError> {
        if f.len() != problem.dim() {
            return Err(ExprError::DimensionMismatch { expected: problem.dim(), got: f.len() }.into());
        }
        if p_reduced.len() != problem.dim() - 2 {
            return Err(ExprError::DimensionMismatch { expected: problem.dim() - 2, got: p_reduced.len() }.into());
        }
        Ok(Self { f, p_reduced })
    }
}
