//! Jet constraint systems for holomorphic curves in a complexified hypersurface.
//!
//! Variables are `z{l}`, `zb{l}` (level 0), `w{l}`, `wb{l}` (level 1) and `w{l}_{j}`,
//! `wb{l}_{j}` for the j-th derivative of w (level j+1). The barred variables stand for the
//! conjugates. Along a holomorphic curve t ↦ z(t) the total derivative D_t sends each plain
//! variable to the next level and kills every barred one; D_t̄ is its conjugate.

mod analyze;
mod builtins;
mod derive;
mod levi;
mod linear;
mod vars;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::expr_core::{parse_expression, CPoly, ExprError, GaussianRational};

pub use analyze::{
    involution_loop, reduce_redundant, stratum_analyze, stratum_step, ChainOutcome, InvolutionChain, JetOptions,
    RedundancyDecision, StratumReport, StratumStep, StratumVerdict, TableauUnits,
};
pub use builtins::{builtin, builtin_names, first_step, BuiltinProblem, NamedProbe, NamedStratum};
pub use derive::{collapse_monomials, d_t, d_tbar, prolong_constraints};
pub use levi::{complexify, levi_form, realify, squares_to_minus_identity_at, tangent_of_jet};
pub use vars::{jet_index, jet_level, jet_name, jet_slot, jet_table};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] crate::pfaff_geometry::GeometryError),
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("no probe point supplied")]
    NoValidProbePoint,
    #[error("probe point violates the stratum: {0}")]
    ProbeViolatesStratum(String),
    #[error("max_rounds must be at least 1")]
    InvalidRounds,
    #[error("unknown builtin problem `{0}`")]
    UnknownBuiltin(String),
    #[error("unknown stratum `{0}`")]
    UnknownStratum(String),
    #[error("polynomial is not real-valued")]
    NotRealValued,
    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),
}

/// Open condition of a stratum: `poly ≠ 0`, or `poly > 0` when `positive`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opening {
    pub poly: CPoly,
    pub positive: bool,
}

impl Opening {
    pub fn holds(&self, point: &[GaussianRational]) -> Result<bool, JetError> {
        let v = self.poly.evaluate(point)?;
        Ok(if self.positive { v.is_real() && num_traits::Signed::is_positive(&v.re) } else { !v.is_zero() })
    }
}

impl fmt::Display for Opening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.poly, if self.positive { "> 0" } else { "!= 0" })
    }
}

/// Values of the plain jet variables, level by level; barred values are their conjugates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetProbe {
    levels: Vec<Vec<GaussianRational>>,
}

impl JetProbe {
    pub fn new(levels: Vec<Vec<GaussianRational>>) -> Result<Self, JetError> {
        let n = levels.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(JetError::NoValidProbePoint);
        }
        for l in &levels {
            if l.len() != n {
                return Err(JetError::DimensionMismatch { what: "probe level", expected: n, got: l.len() });
            }
        }
        Ok(Self { levels })
    }

    pub fn n(&self) -> usize {
        self.levels[0].len()
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<GaussianRational>] {
        &self.levels
    }

    /// The first `order + 1` levels.
    pub fn truncated(&self, order: usize) -> Self {
        Self { levels: self.levels[..=order.min(self.order())].to_vec() }
    }

    pub fn with_level(&self, values: Vec<GaussianRational>) -> Self {
        let mut levels = self.levels.clone();
        levels.push(values);
        Self { levels }
    }

    /// Full point for `jet_table(n, order)`.
    pub fn point(&self, order: usize) -> Result<Vec<GaussianRational>, JetError> {
        if self.order() < order {
            return Err(JetError::DimensionMismatch { what: "probe order", expected: order, got: self.order() });
        }
        Ok(self.levels[..=order]
            .iter()
            .flat_map(|l| l.iter().cloned().chain(l.iter().map(GaussianRational::conj)))
            .collect())
    }
}

/// Equalities and openings over the jet variables of levels `0..=order`, closed under conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetConstraintSystem {
    n: usize,
    order: usize,
    equalities: Vec<CPoly>,
    openings: Vec<Opening>,
}

impl JetConstraintSystem {
    pub fn new(n: usize, order: usize, equalities: Vec<CPoly>, openings: Vec<Opening>) -> Result<Self, JetError> {
        if n == 0 {
            return Err(JetError::DimensionMismatch { what: "complex dimension", expected: 1, got: 0 });
        }
        let table = vars::jet_table(n, order);
        let equalities = equalities.iter().map(|g| g.embed(&table)).collect::<Result<Vec<_>, _>>()?;
        let openings = openings
            .into_iter()
            .map(|o| Ok(Opening { poly: o.poly.embed(&table)?, positive: o.positive }))
            .collect::<Result<Vec<_>, ExprError>>()?;
        Ok(Self { n, order, equalities: close_under_conjugation(equalities)?, openings })
    }

    /// Parses equalities and `(expression, positive)` openings over `jet_table(n, order)`.
    pub fn parse(n: usize, order: usize, equalities: &[&str], openings: &[(&str, bool)]) -> Result<Self, JetError> {
        let table = vars::jet_table(n, order);
        let eqs = equalities
            .iter()
            .map(|s| parse_expression(s, &table))
            .collect::<Result<Vec<_>, _>>()?;
        let ops = openings
            .iter()
            .map(|(s, positive)| Ok(Opening { poly: parse_expression(s, &table)?, positive: *positive }))
            .collect::<Result<Vec<_>, ExprError>>()?;
        Self::new(n, order, eqs, ops)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn equalities(&self) -> &[CPoly] {
        &self.equalities
    }

    pub fn openings(&self) -> &[Opening] {
        &self.openings
    }

    pub fn table(&self) -> crate::expr_core::VarTable {
        vars::jet_table(self.n, self.order)
    }

    /// Same constraints over a table of higher order.
    pub fn lifted(&self, order: usize) -> Result<Self, JetError> {
        assert!(order >= self.order);
        let table = vars::jet_table(self.n, order);
        Ok(Self {
            n: self.n,
            order,
            equalities: self.equalities.iter().map(|g| g.embed(&table)).collect::<Result<_, _>>()?,
            openings: self
                .openings
                .iter()
                .map(|o| Ok(Opening { poly: o.poly.embed(&table)?, positive: o.positive }))
                .collect::<Result<_, ExprError>>()?,
        })
    }

    /// Indices of the equalities that involve the top-level variables.
    pub fn top_indices(&self) -> Vec<usize> {
        (0..self.equalities.len())
            .filter(|&i| vars::jet_level(self.n, &self.equalities[i]) == self.order && self.order_is_used(i))
            .collect()
    }

    fn order_is_used(&self, i: usize) -> bool {
        vars::level_degree(self.n, &self.equalities[i], self.order) > 0
    }

    /// Every equality vanishes and every opening holds at the probe.
    pub fn check_probe(&self, probe: &JetProbe) -> Result<(), JetError> {
        if probe.n() != self.n {
            return Err(JetError::DimensionMismatch { what: "probe coordinates", expected: self.n, got: probe.n() });
        }
        let point = probe.point(self.order)?;
        for g in &self.equalities {
            let v = g.evaluate(&point)?;
            if !v.is_zero() {
                return Err(JetError::ProbeViolatesStratum(format!("{g} = {v}")));
            }
        }
        for o in &self.openings {
            if !o.holds(&point)? {
                return Err(JetError::ProbeViolatesStratum(format!("opening {o} fails")));
            }
        }
        Ok(())
    }

    /// No equality of jet level ≥ 1 mixes plain and barred derivative variables.
    pub fn is_holomorphic_type(&self) -> bool {
        let n = self.n;
        self.equalities.iter().filter(|g| vars::jet_level(n, g) >= 1).all(|g| {
            g.terms().all(|(m, _)| {
                let e = m.exponents();
                let (mut plain, mut barred) = (false, false);
                for (i, &x) in e.iter().enumerate() {
                    let (level, b, _) = vars::jet_slot(n, i);
                    if x > 0 && level >= 1 {
                        if b {
                            barred = true;
                        } else {
                            plain = true;
                        }
                    }
                }
                !(plain && barred)
            })
        })
    }

    pub(crate) fn from_parts(n: usize, order: usize, equalities: Vec<CPoly>, openings: Vec<Opening>) -> Self {
        Self { n, order, equalities, openings }
    }
}

/// Appends missing conjugates, drops zeros and duplicates up to scaling.
pub(crate) fn close_under_conjugation(eqs: Vec<CPoly>) -> Result<Vec<CPoly>, JetError> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for g in eqs {
        let c = g.conjugate_involution()?;
        for h in [g, c] {
            if !h.is_zero() && seen.insert(h.monic().to_string()) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for JetConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.equalities {
            writeln!(f, "{g} = 0")?;
        }
        for o in &self.openings {
            writeln!(f, "{o}")?;
        }
        Ok(())
    }
}
