use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr_core::linalg::{nullspace, solve_affine};
use crate::expr_core::{int, CPoly, GaussianRational, Rational, VarTable};

use super::derive::{collapse_monomials, prolong_with_new};
use super::linear::{affine_system, complex_values, real_rank, stacked_rows};
use super::vars::level_degree;
use super::{JetConstraintSystem, JetError, JetProbe};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetOptions {
    pub keep_redundant: bool,
    pub seed: u64,
    /// Extended probes used for redundancy decisions besides the main one.
    pub extra_probes: usize,
}

impl Default for JetOptions {
    fn default() -> Self {
        Self { keep_redundant: false, seed: 0x5eed, extra_probes: 2 }
    }
}

/// Units of the reported tableau dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableauUnits {
    /// The system is of holomorphic type; dimensions are complex.
    Complex,
    Real,
}

impl TableauUnits {
    pub fn as_str(self) -> &'static str {
        match self {
            TableauUnits::Complex => "complex",
            TableauUnits::Real => "real",
        }
    }

    fn report(self, real: usize) -> usize {
        match self {
            TableauUnits::Complex => real / 2,
            TableauUnits::Real => real,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumVerdict {
    InvolutiveAtOrder(usize),
    Continue,
    Blocked,
}

impl StratumVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            StratumVerdict::InvolutiveAtOrder(_) => "involutive",
            StratumVerdict::Continue => "continue",
            StratumVerdict::Blocked => "blocked",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundancyDecision {
    pub equation: String,
    pub dropped: bool,
    /// Whether the equation was implied at each probe point, in order.
    pub per_probe: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    /// Level of the top jet variables of the analysed system.
    pub order: usize,
    pub torsion_free: bool,
    pub tableau_dim: usize,
    pub tableau_dim_real: usize,
    pub next_dim: Option<usize>,
    pub next_dim_real: Option<usize>,
    pub next_torsion_free: Option<bool>,
    pub units: TableauUnits,
    pub collapsed: Vec<String>,
    pub new_constraints: Vec<String>,
    pub obstructions: Vec<String>,
    pub redundant_dropped: Vec<String>,
    pub decisions: Vec<RedundancyDecision>,
    pub verdict: StratumVerdict,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

/// One analysis step: the report, the normalized system and, when torsion-free, the reduced
/// prolongation with its extended probe.
#[derive(Clone, Debug)]
pub struct StratumStep {
    pub report: StratumReport,
    pub system: JetConstraintSystem,
    pub next: Option<(JetConstraintSystem, JetProbe)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOutcome {
    Involutive { round: usize, order: usize },
    Blocked { round: usize },
    RoundsExhausted,
}

impl ChainOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChainOutcome::Involutive { .. } => "involutive",
            ChainOutcome::Blocked { .. } => "blocked",
            ChainOutcome::RoundsExhausted => "rounds_exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionChain {
    pub reports: Vec<StratumReport>,
    pub dims: Vec<usize>,
    pub units: TableauUnits,
    pub outcome: ChainOutcome,
    pub max_rounds: usize,
}

struct TorsionCheck {
    obstructions: Vec<String>,
    particular: Option<Vec<Rational>>,
    kernel: Vec<Vec<Rational>>,
}

/// Solvability of the prolonged system `p` for its top level with the lower levels frozen at
/// `probe`; nonlinear top equalities must vanish on the whole affine solution set.
fn torsion_check(p: &JetConstraintSystem, probe: &JetProbe) -> Result<TorsionCheck, JetError> {
    let n = p.n();
    let top = p.order();
    let zero = GaussianRational::real(int(0));
    let lower = probe.with_level(vec![zero; n]).point(top)?;
    let mut obstructions = Vec::new();
    let mut affine = Vec::new();
    let mut nonlinear = Vec::new();
    for g in p.equalities() {
        match level_degree(n, g, top) {
            0 => {
                let v = g.evaluate(&lower)?;
                if !v.is_zero() {
                    obstructions.push(format!("{g} = {v} at the probe"));
                }
            }
            1 => affine.push(g),
            _ => nonlinear.push(g),
        }
    }
    let (rows, rhs) = affine_system(n, &affine, top, &lower)?;
    let particular = if rows.is_empty() { Some(vec![int(0); 2 * n]) } else { solve_affine(&rows, &rhs, 2 * n, &int(0)) };
    let kernel = if rows.is_empty() {
        nullspace(&[vec![int(0); 2 * n]], 2 * n, &int(0))
    } else {
        nullspace(&rows, 2 * n, &int(0))
    };
    match &particular {
        None => obstructions.push("the top-order linear system is inconsistent".to_string()),
        Some(x0) => {
            let t = VarTable::indexed("t", kernel.len());
            let images = affine_images(p, probe, x0, &kernel, &t);
            for g in nonlinear {
                let r = g.compose(&images, &t);
                if !r.is_zero() {
                    obstructions.push(format!("{g} does not vanish on the top-order solution set"));
                }
            }
        }
    }
    Ok(TorsionCheck { obstructions, particular, kernel })
}

/// Lower variables frozen at the probe, top variables on x0 + N·t.
fn affine_images(p: &JetConstraintSystem, probe: &JetProbe, x0: &[Rational], kernel: &[Vec<Rational>], t: &VarTable) -> Vec<CPoly> {
    let n = p.n();
    let top = p.order();
    let lower = probe.point(top - 1).expect("probe covers the lower levels");
    let mut images: Vec<CPoly> = lower.iter().map(|v| CPoly::constant(t, v.clone())).collect();
    let real = |k: usize| -> CPoly {
        let mut acc = CPoly::constant(t, GaussianRational::real(x0[k].clone()));
        for (j, v) in kernel.iter().enumerate() {
            acc = acc.add(&CPoly::var(t, j).scale(&GaussianRational::real(v[k].clone())));
        }
        acc
    };
    let i = CPoly::constant(t, GaussianRational::i());
    let plain: Vec<CPoly> = (0..n).map(|l| real(l).add(&i.mul(&real(n + l)))).collect();
    let barred: Vec<CPoly> = (0..n).map(|l| real(l).sub(&i.mul(&real(n + l)))).collect();
    images.extend(plain);
    images.extend(barred);
    images
}

fn top_rank(s: &JetConstraintSystem, point: &[GaussianRational], affine_only: bool) -> Result<usize, JetError> {
    let n = s.n();
    let eqs: Vec<&CPoly> = s
        .top_indices()
        .into_iter()
        .map(|i| &s.equalities()[i])
        .filter(|g| !affine_only || level_degree(n, g, s.order()) == 1)
        .collect();
    Ok(real_rank(&stacked_rows(n, &eqs, s.order(), point)?))
}

fn random_probe(rng: &mut ChaCha8Rng, n: usize, order: usize) -> JetProbe {
    let mut g = || GaussianRational::new(int(rng.random_range(-5..=5)), int(rng.random_range(-5..=5)));
    JetProbe::new((0..=order).map(|_| (0..n).map(|_| g()).collect()).collect()).expect("n ≥ 1")
}

/// Drops top-order equalities that are affine in the top variables and implied, at every probe,
/// by the retained ones: their linear part lies in the retained row span and they vanish there.
/// Conjugate pairs are dropped together; candidates are visited last-added first.
pub fn reduce_redundant(system: &JetConstraintSystem, probes: &[JetProbe]) -> Result<(JetConstraintSystem, Vec<RedundancyDecision>), JetError> {
    if probes.is_empty() {
        return Err(JetError::NoValidProbePoint);
    }
    let n = system.n();
    let order = system.order();
    let eqs = system.equalities();
    let points = probes.iter().map(|p| p.point(order)).collect::<Result<Vec<_>, _>>()?;
    let top = system.top_indices();
    let monic_keys: Vec<String> = eqs.iter().map(|g| g.monic().to_string()).collect();
    let mut dropped = vec![false; eqs.len()];
    let mut decisions = Vec::new();
    for &c in top.iter().rev() {
        if dropped[c] || level_degree(n, &eqs[c], order) != 1 {
            continue;
        }
        let conj_key = eqs[c].conjugate_involution()?.monic().to_string();
        let group: Vec<usize> = top.iter().copied().filter(|&j| j == c || monic_keys[j] == conj_key).collect();
        let retained: Vec<&CPoly> = top
            .iter()
            .filter(|&&j| !dropped[j] && !group.contains(&j))
            .map(|&j| &eqs[j])
            .collect();
        let mut per_probe = Vec::new();
        for point in &points {
            let base = stacked_rows(n, &retained, order, point)?;
            let mut with = base.clone();
            with.extend(stacked_rows(n, &[&eqs[c]], order, point)?);
            let implied = real_rank(&base) == real_rank(&with) && eqs[c].evaluate(point)?.is_zero();
            per_probe.push(implied);
        }
        let drop = per_probe.iter().all(|&b| b);
        if drop {
            for &j in &group {
                dropped[j] = true;
            }
        }
        decisions.push(RedundancyDecision { equation: eqs[c].to_string(), dropped: drop, per_probe });
    }
    let kept = eqs.iter().zip(&dropped).filter(|(_, &d)| !d).map(|(g, _)| g.clone()).collect();
    Ok((JetConstraintSystem::from_parts(n, order, kept, system.openings().to_vec()), decisions))
}

/// Tableau dimension, torsion and verdict of a stratum at a probe point.
pub fn stratum_analyze(system: &JetConstraintSystem, probe: &JetProbe) -> Result<StratumReport, JetError> {
    Ok(stratum_step(system, probe, &JetOptions::default())?.report)
}

pub fn stratum_step(system: &JetConstraintSystem, probe: &JetProbe, options: &JetOptions) -> Result<StratumStep, JetError> {
    step_with_units(system, probe, options, None)
}

fn step_with_units(
    system: &JetConstraintSystem,
    probe: &JetProbe,
    options: &JetOptions,
    units: Option<TableauUnits>,
) -> Result<StratumStep, JetError> {
    system.check_probe(probe)?;
    let probe = &probe.truncated(system.order());
    let (s, collapsed) = collapse_monomials(system)?;
    s.check_probe(probe)?;
    let n = s.n();
    let order = s.order();
    let units = units.unwrap_or(if s.is_holomorphic_type() { TableauUnits::Complex } else { TableauUnits::Real });
    let mut warnings = Vec::new();
    let mut notes = Vec::new();
    if !collapsed.is_empty() {
        notes.push(format!("forced to vanish: {}", collapsed.join(", ")));
    }

    let point = probe.point(order)?;
    let dim_real = 2 * n - top_rank(&s, &point, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let probe_rank = top_rank(&s, &point, true)?;
    let mut generic_rank = probe_rank;
    for _ in 0..4 {
        let q = random_probe(&mut rng, n, order);
        generic_rank = generic_rank.max(top_rank(&s, &q.point(order)?, true)?);
    }
    if probe_rank < generic_rank {
        warnings.push(format!(
            "tableau dimension is not locally constant at the probe: top-order rank {probe_rank} below the generic rank {generic_rank}"
        ));
    }
    if units == TableauUnits::Complex && dim_real % 2 == 1 {
        warnings.push(format!("odd real tableau dimension {dim_real} for a holomorphic-type system"));
    }
    let tableau_dim = units.report(dim_real);
    if tableau_dim > 2 * n - 2 {
        warnings.push(format!("tableau dimension {tableau_dim} exceeds the bound {}", 2 * n - 2));
    }

    let (p, new) = prolong_with_new(&s)?;
    let new_constraints = new.iter().map(|&i| p.equalities()[i].to_string()).collect();
    let check = torsion_check(&p, probe)?;
    let torsion_free = check.obstructions.is_empty();
    let mut report = StratumReport {
        order,
        torsion_free,
        tableau_dim,
        tableau_dim_real: dim_real,
        next_dim: None,
        next_dim_real: None,
        next_torsion_free: None,
        units,
        collapsed,
        new_constraints,
        obstructions: check.obstructions.clone(),
        redundant_dropped: Vec::new(),
        decisions: Vec::new(),
        verdict: StratumVerdict::Blocked,
        warnings,
        notes,
    };
    if !torsion_free {
        report.notes.push("blocked: the prolonged system is not solvable at the probe jet".to_string());
        return Ok(StratumStep { report, system: s, next: None });
    }

    let x0 = check.particular.expect("solvable");
    let probes: Vec<JetProbe> = (0..=options.extra_probes)
        .map(|k| {
            let mut x = x0.clone();
            for v in &check.kernel {
                let t = if k == 0 { int(rng.random_range(1..=4)) } else { int(rng.random_range(-6..=6)) };
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += &t * vi;
                }
            }
            probe.with_level(complex_values(n, &x))
        })
        .collect();
    let (reduced, decisions) = if options.keep_redundant {
        (p.clone(), Vec::new())
    } else {
        reduce_redundant(&p, &probes)?
    };
    for pr in &probes {
        reduced
            .check_probe(pr)
            .map_err(|e| JetError::CrossCheckMismatch(format!("extended probe fails the prolonged system: {e}")))?;
    }
    report.redundant_dropped = decisions.iter().filter(|d| d.dropped).map(|d| d.equation.clone()).collect();
    report.decisions = decisions;
    let next_real = 2 * n - top_rank(&reduced, &probes[0].point(order + 1)?, false)?;
    report.next_dim_real = Some(next_real);
    report.next_dim = Some(units.report(next_real));

    report.verdict = if next_real == dim_real {
        let (pp, _) = prolong_with_new(&reduced)?;
        let next_check = torsion_check(&pp, &probes[0])?;
        let ok = next_check.obstructions.is_empty();
        report.next_torsion_free = Some(ok);
        if ok {
            StratumVerdict::InvolutiveAtOrder(order)
        } else {
            report.notes.push("tableau dimension stable but the next prolongation carries torsion".to_string());
            StratumVerdict::Continue
        }
    } else {
        StratumVerdict::Continue
    };
    if let StratumVerdict::InvolutiveAtOrder(_) = report.verdict {
        if dim_real == 0 {
            report.notes.push("only trivial curves: every derivative of the curve is forced to vanish".to_string());
        } else {
            report.notes.push("free torsion with an involutive tableau: holomorphic curves exist through the probe jet".to_string());
        }
    }
    let next = probes.into_iter().next().map(|pr| (reduced, pr));
    Ok(StratumStep { report, system: s, next })
}

/// Alternates analysis and prolongation until the tableau dimension stabilizes with free
/// torsion, the system is blocked, or `max_rounds` (default 2n−2) is exhausted.
pub fn involution_loop(
    system: &JetConstraintSystem,
    probe: &JetProbe,
    max_rounds: Option<usize>,
    options: &JetOptions,
) -> Result<InvolutionChain, JetError> {
    let n = system.n();
    let max_rounds = max_rounds.unwrap_or((2 * n).saturating_sub(2).max(1));
    if max_rounds == 0 {
        return Err(JetError::InvalidRounds);
    }
    let mut reports: Vec<StratumReport> = Vec::new();
    let mut dims = Vec::new();
    let mut units = None;
    let mut current = (system.clone(), probe.clone());
    let mut outcome = ChainOutcome::RoundsExhausted;
    for round in 1..=max_rounds {
        let step = step_with_units(&current.0, &current.1, options, units)?;
        let r = step.report;
        units = Some(r.units);
        match dims.last() {
            None => dims.push(r.tableau_dim),
            Some(&d) if d != r.tableau_dim => {
                return Err(JetError::CrossCheckMismatch(format!(
                    "round {round}: tableau dimension {} differs from the predicted {d}",
                    r.tableau_dim
                )))
            }
            Some(_) => {}
        }
        if let Some(d) = r.next_dim {
            if d > r.tableau_dim {
                return Err(JetError::CrossCheckMismatch(format!(
                    "round {round}: tableau dimension increased from {} to {d}",
                    r.tableau_dim
                )));
            }
            dims.push(d);
        }
        let verdict = r.verdict.clone();
        reports.push(r);
        match verdict {
            StratumVerdict::InvolutiveAtOrder(order) => {
                outcome = ChainOutcome::Involutive { round, order };
                break;
            }
            StratumVerdict::Blocked => {
                outcome = ChainOutcome::Blocked { round };
                break;
            }
            StratumVerdict::Continue => match step.next {
                Some(next) => current = next,
                None => break,
            },
        }
    }
    debug_assert!(dims.windows(2).all(|w| w[0] >= w[1]));
    Ok(InvolutionChain { reports, dims, units: units.unwrap_or(TableauUnits::Real), outcome, max_rounds })
}
