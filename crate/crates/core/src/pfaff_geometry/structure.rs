use crate::expr_core::{int, Field, Poly, RatFn, Rational, VarTable};

use super::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    General,
    ComplexStandard,
    FromPair,
}

/// The matrix 𝒜 = (α_{j,i}) with p₂ = 𝒜·p₁; `entries[j][i]` is α_{j,i}.
#[derive(Clone, Debug)]
pub struct StructureMatrix {
    n: usize,
    entries: Vec<Vec<RatFn>>,
    kind: StructureKind,
}

impl StructureMatrix {
    pub fn complex_standard(vars: &VarTable) -> Self {
        let dim = vars.len();
        let mut entries = vec![vec![RatFn::zero(vars); dim]; dim];
        for k in 0..dim / 2 {
            entries[2 * k][2 * k + 1] = RatFn::constant(vars, int(-1));
            entries[2 * k + 1][2 * k] = RatFn::constant(vars, int(1));
        }
        Self { n: dim / 2, entries, kind: StructureKind::ComplexStandard }
    }

    pub fn general(entries: Vec<Vec<RatFn>>) -> Result<Self, GeometryError> {
        let dim = entries.len();
        if dim < 2 || !dim.is_multiple_of(2) || entries.iter().any(|r| r.len() != dim) {
            return Err(GeometryError::NotSquare { rows: dim });
        }
        Ok(Self { n: dim / 2, entries, kind: StructureKind::General })
    }

    pub fn from_constants(vars: &VarTable, m: &[Vec<Rational>]) -> Result<Self, GeometryError> {
        Self::general(
            m.iter()
                .map(|r| r.iter().map(|x| RatFn::constant(vars, x.clone())).collect())
                .collect(),
        )
    }

    /// 𝒜 = b·(a·I − A)/(1 + a²). The second value is true when A² = −I holds exactly.
    pub fn from_pair(a: &RatFn, b: &RatFn, big_a: &[Vec<RatFn>]) -> Result<(Self, bool), GeometryError> {
        if b.is_zero() {
            return Err(GeometryError::ZeroB);
        }
        let dim = big_a.len();
        if dim < 2 || !dim.is_multiple_of(2) || big_a.iter().any(|r| r.len() != dim) {
            return Err(GeometryError::NotSquare { rows: dim });
        }
        let one = a.one_like();
        let factor = b.div(&one.add(&a.mul(a)))?;
        let entries = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| {
                        let diag = if i == j { a.clone() } else { a.zero_like() };
                        diag.sub(&big_a[j][i]).mul(&factor)
                    })
                    .collect()
            })
            .collect();
        let almost_complex = squares_to_minus_identity(big_a);
        Ok((Self { n: dim / 2, entries, kind: StructureKind::FromPair }, almost_complex))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn entries(&self) -> &[Vec<RatFn>] {
        &self.entries
    }

    pub fn entry(&self, j: usize, i: usize) -> &RatFn {
        &self.entries[j][i]
    }

    pub fn vars(&self) -> &VarTable {
        self.entries[0][0].vars()
    }

    pub fn is_constant(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.is_polynomial() && e.numerator().is_constant())
    }

    pub fn is_almost_complex(&self) -> bool {
        squares_to_minus_identity(&self.entries)
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Vec<Rational>>, GeometryError> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|e| e.evaluate(point).map_err(GeometryError::from)).collect())
            .collect()
    }

    /// Relabels coordinates: internal index `a` is user index `perm[a]`.
    pub(crate) fn permuted(&self, perm: &[usize], target: &VarTable) -> Result<Self, GeometryError> {
        let images = inverse_images(perm, target);
        let entries = (0..self.dim())
            .map(|a| {
                (0..self.dim())
                    .map(|b| self.entries[perm[a]][perm[b]].compose(&images, target).map_err(GeometryError::from))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { n: self.n, entries, kind: self.kind })
    }
}

/// Images of the user variables under relabeling: user variable `perm[a]` becomes internal `a`.
pub(crate) fn inverse_images(perm: &[usize], target: &VarTable) -> Vec<Poly> {
    let mut images = vec![Poly::zero(target); perm.len()];
    for (a, &u) in perm.iter().enumerate() {
        images[u] = Poly::var(target, a);
    }
    images
}

fn squares_to_minus_identity(m: &[Vec<RatFn>]) -> bool {
    let dim = m.len();
    (0..dim).all(|j| {
        (0..dim).all(|i| {
            let s = (0..dim).fold(m[0][0].zero_like(), |acc, k| acc.add(&m[j][k].mul(&m[k][i])));
            let target = if i == j { int(-1) } else { int(0) };
            s.equal(&RatFn::constant(m[0][0].vars(), target))
        })
    })
}
