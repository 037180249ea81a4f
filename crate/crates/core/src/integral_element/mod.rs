//! Polar spaces of one-dimensional integral flags and the Kähler-regularity test.
//!
//! Tangent vectors are written in the coframe (dx₁, dx₂, θ¹..θ²ⁿ, dp³..dp²ⁿ), so a vector has
//! 4n components. x-derivatives of γ and β are resolved by the chain rule through the jet,
//! which is what [`TorsionContext`] already stores as the torsion cᵏ.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::expr_core::linalg::{mat_mul, nullspace, rank};
use crate::expr_core::{int, rat, Rational};
use crate::pfaff_geometry::{FirstJetPoint, GeometryError, HypersurfaceProblem};
use crate::torsion::{TorsionContext, TorsionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegralError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error("inadmissible flag: the generator of E1 vanishes")]
    InadmissibleFlag,
    #[error("flag component `{field}` has length {got}, expected {expected}")]
    DimensionMismatch { field: &'static str, expected: usize, got: usize },
    #[error("the flag search needs at least one trial")]
    InvalidTrials,
    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),
}

/// Perturbation of the E₁ generator: ε on dx, ε′ on θ¹..θ²ⁿ, ε″ on dp³..dp²ⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct Perturbation {
    pub eps: Vec<Rational>,
    pub eps_prime: Vec<Rational>,
    pub eps_second: Vec<Rational>,
}

impl Perturbation {
    pub fn zero(n: usize) -> Self {
        Self { eps: vec![int(0); 2], eps_prime: vec![int(0); 2 * n], eps_second: vec![int(0); 2 * n - 2] }
    }

    pub fn is_zero(&self) -> bool {
        self.eps.iter().chain(&self.eps_prime).chain(&self.eps_second).all(Zero::is_zero)
    }
}

/// A two-dimensional element E = span(ẽ₁, ẽ₂) with a line E₁ = span(αẽ₁ + βẽ₂).
#[derive(Clone, Debug, PartialEq)]
pub struct FlagSpec {
    /// (a¹₁, a¹₂), the dx-components of ẽ₁.
    pub a1: Vec<Rational>,
    /// (a²₁, a²₂), the dx-components of ẽ₂.
    pub a2: Vec<Rational>,
    /// c¹_{i″}, the dp-components of ẽ₁.
    pub c1: Vec<Rational>,
    /// c²_{i″}, the dp-components of ẽ₂.
    pub c2: Vec<Rational>,
    pub alpha: Rational,
    pub beta: Rational,
    pub epsilon: Perturbation,
}

impl FlagSpec {
    pub fn new(
        a1: Vec<Rational>,
        a2: Vec<Rational>,
        c1: Vec<Rational>,
        c2: Vec<Rational>,
        alpha: Rational,
        beta: Rational,
    ) -> Self {
        let n = c1.len() / 2 + 1;
        Self { a1, a2, c1, c2, alpha, beta, epsilon: Perturbation::zero(n) }
    }

    pub fn with_epsilon(mut self, epsilon: Perturbation) -> Self {
        self.epsilon = epsilon;
        self
    }

    fn check(&self, n: usize) -> Result<(), IntegralError> {
        let m = 2 * n - 2;
        let lens = [
            ("a1", 2, self.a1.len()),
            ("a2", 2, self.a2.len()),
            ("c1", m, self.c1.len()),
            ("c2", m, self.c2.len()),
            ("epsilon.eps", 2, self.epsilon.eps.len()),
            ("epsilon.eps_prime", 2 * n, self.epsilon.eps_prime.len()),
            ("epsilon.eps_second", m, self.epsilon.eps_second.len()),
        ];
        for (field, expected, got) in lens {
            if expected != got {
                return Err(IntegralError::DimensionMismatch { field, expected, got });
            }
        }
        Ok(())
    }

    /// A_i = αa¹_i + βa²_i + ε_i.
    pub fn big_a(&self) -> [Rational; 2] {
        [0, 1].map(|i| &self.alpha * &self.a1[i] + &self.beta * &self.a2[i] + &self.epsilon.eps[i])
    }

    /// C_i = αc¹_i + βc²_i + ε″_i.
    pub fn big_c(&self) -> Vec<Rational> {
        (0..self.c1.len())
            .map(|i| &self.alpha * &self.c1[i] + &self.beta * &self.c2[i] + &self.epsilon.eps_second[i])
            .collect()
    }

    /// The (perturbed) generator of E₁ in the 4n-component coframe.
    pub fn generator(&self) -> Vec<Rational> {
        let [a1, a2] = self.big_a();
        let mut u = vec![a1, a2];
        u.extend(self.epsilon.eps_prime.iter().cloned());
        u.extend(self.big_c());
        u
    }

    fn tangent(&self, e: usize) -> Vec<Rational> {
        let (a, c) = if e == 0 { (&self.a1, &self.c1) } else { (&self.a2, &self.c2) };
        let n = c.len() / 2 + 1;
        let mut u = a.clone();
        u.extend(std::iter::repeat_n(int(0), 2 * n));
        u.extend(c.iter().cloned());
        u
    }
}

/// The maps f, g and the relations among X₂..X_{4n−2}.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarSystem {
    /// (4n−3)×2n, acting on (v₁, v₂, v_{p³}..v_{p²ⁿ}).
    pub f: Vec<Vec<Rational>>,
    /// (2n−1)×(4n−3), one row per θ², ..., θ²ⁿ.
    pub g: Vec<Vec<Rational>>,
    /// (2n−2)×(4n−3).
    pub r: Vec<Vec<Rational>>,
    /// g stacked over r.
    pub square: Vec<Vec<Rational>>,
}

struct Frame {
    ctx: TorsionContext,
    c: Vec<Rational>,
    p: Vec<Rational>,
    n: usize,
}

impl Frame {
    fn new(problem: &HypersurfaceProblem, jet: &FirstJetPoint) -> Result<Self, IntegralError> {
        let ctx = TorsionContext::new(problem, &jet.f)?;
        let c = ctx.torsion(&jet.p_reduced);
        Ok(Self { ctx, c, p: jet.p_reduced.clone(), n: problem.n() })
    }

    /// Coefficients of v in dθᵏ(u, v), including the θ ∧ dx terms.
    fn two_form_row(&self, k: usize, u: &[Rational]) -> Vec<Rational> {
        let dim = 2 * self.n;
        let m = dim - 2;
        let (x1, x2, th, pp) = (0, 1, 2, 2 + dim);
        let mut row = vec![int(0); 4 * self.n];
        let wedge = |coef: &Rational, a: usize, b: usize, row: &mut Vec<Rational>| {
            if coef.is_zero() {
                return;
            }
            row[b] += coef * &u[a];
            row[a] -= coef * &u[b];
        };
        wedge(&self.c[k], x1, x2, &mut row);
        let beta_k = self.ctx.gb.beta_row(k).to_vec();
        for j in 0..m {
            wedge(&-self.ctx.gb.big_gamma(k, j), pp + j, x1, &mut row);
            wedge(&-beta_k[j].clone(), pp + j, x2, &mut row);
        }
        for l in 0..dim {
            let mut t1 = int(0);
            let mut t2 = int(0);
            for j in 0..m {
                if k < 2 {
                    t1 -= &self.p[j] * &self.ctx.d_gamma[k][j][l];
                }
                t2 -= &self.p[j] * &self.ctx.d_beta[k][j][l];
            }
            wedge(&t1, th + l, x1, &mut row);
            wedge(&t2, th + l, x2, &mut row);
        }
        row
    }
}

fn polar_from(frame: &Frame, flag: &FlagSpec) -> PolarSystem {
    let n = frame.n;
    let m = 2 * n - 2;
    let [a1, a2] = flag.big_a();
    let cc = flag.big_c();
    let cols = 2 + m;
    let xs = 1 + 2 * m;
    let mut f = vec![vec![int(0); cols]; xs];
    f[0][0] = -a2.clone();
    f[0][1] = a1.clone();
    for j in 0..m {
        f[1 + j][0] = cc[j].clone();
        f[1 + j][2 + j] = -a1.clone();
        f[1 + m + j][1] = cc[j].clone();
        f[1 + m + j][2 + j] = -a2.clone();
    }
    let mut g = Vec::with_capacity(2 * n - 1);
    for k in 1..2 * n {
        let beta_k = frame.ctx.gb.beta_row(k);
        let mut row = vec![int(0); xs];
        row[0] = frame.c[k].clone();
        for j in 0..m {
            row[1 + j] = -frame.ctx.gb.big_gamma(k, j);
            row[1 + m + j] = -beta_k[j].clone();
        }
        if k >= 2 {
            row.iter_mut().for_each(|x| *x = -x.clone());
        }
        g.push(row);
    }
    let mut r = vec![vec![int(0); xs]; m];
    for j in 0..m {
        r[j][0] = cc[j].clone();
        r[j][1 + j] = a2.clone();
        r[j][1 + m + j] = -a1.clone();
    }
    let mut square = g.clone();
    square.extend(r.iter().cloned());
    PolarSystem { f, g, r, square }
}

fn admissible(flag: &FlagSpec) -> bool {
    !(flag.alpha.is_zero() && flag.beta.is_zero()) && flag.generator().iter().any(|x| !x.is_zero())
}

pub fn build_polar_maps(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    flag: &FlagSpec,
) -> Result<PolarSystem, IntegralError> {
    flag.check(problem.n())?;
    if !admissible(flag) {
        return Err(IntegralError::InadmissibleFlag);
    }
    let frame = Frame::new(problem, jet)?;
    Ok(polar_from(&frame, flag))
}

/// The full homogeneous system whose solutions form the polar space H(D′) of the line
/// spanned by the (perturbed) generator: 4n unknowns.
pub fn polar_space_system(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    flag: &FlagSpec,
) -> Result<Vec<Vec<Rational>>, IntegralError> {
    flag.check(problem.n())?;
    if !admissible(flag) {
        return Err(IntegralError::InadmissibleFlag);
    }
    let frame = Frame::new(problem, jet)?;
    Ok(polar_system_from(&frame, flag))
}

fn polar_system_from(frame: &Frame, flag: &FlagSpec) -> Vec<Vec<Rational>> {
    let n = frame.n;
    let u = flag.generator();
    let mut rows = Vec::new();
    for k in 0..2 * n {
        let t = 2 + k;
        for i in 0..4 * n {
            if i == t || (u[i].is_zero() && u[t].is_zero()) {
                continue;
            }
            let mut row = vec![int(0); 4 * n];
            row[t] = u[i].clone();
            row[i] = -u[t].clone();
            rows.push(row);
        }
    }
    for k in 1..2 * n {
        rows.push(frame.two_form_row(k, &u));
    }
    rows
}

/// dim H(D′) for the line spanned by the perturbed generator of `flag`.
pub fn polar_space_dim(problem: &HypersurfaceProblem, jet: &FirstJetPoint, flag: &FlagSpec) -> Result<usize, IntegralError> {
    let sys = polar_space_system(problem, jet, flag)?;
    Ok(4 * problem.n() - rank(&sys))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KahlerVerdict {
    /// E₁ is regular on an integral element E: E is ordinary and a curve germ exists.
    Regular,
    /// No criterion applies to this flag; nothing is concluded.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityCriterion {
    /// det(g over the relations) ≠ 0, i.e. Ker(g) ∩ Im(f) = {0}.
    PolarDeterminant,
    /// dim H(E₁) = 2 = dim E at E₁ and at every sampled nearby integral line.
    PolarDimension,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationSample {
    pub epsilon: Perturbation,
    /// ε′ = 0, so the perturbed line is still an integral line.
    pub integral_line: bool,
    pub polar_dim: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KahlerReport {
    pub det: Rational,
    pub rank_f: usize,
    pub dim_ker_f: usize,
    pub dim_ker_gf: usize,
    /// dθᵏ(ẽ₁, ẽ₂) = 0 for k = 2..2n.
    pub is_integral: bool,
    /// dim H(E₁).
    pub polar_dim: usize,
    pub samples: Vec<PerturbationSample>,
    /// dim H(D′) agrees with dim H(E₁) at every sampled integral line D′.
    pub locally_constant_sampled: bool,
    pub regular_by: Option<RegularityCriterion>,
    pub verdict: KahlerVerdict,
    pub warnings: Vec<String>,
}

const SAMPLE_SEED: u64 = 0x5eed;

fn small_perturbations(n: usize, seed: u64) -> Vec<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng| rat(rng.random_range(-9..=9), 1000);
    let mut out = Vec::new();
    for with_theta in [false, false, false, false, true, true] {
        let eps = (0..2).map(|_| small(&mut rng)).collect();
        let eps_second = (0..2 * n - 2).map(|_| small(&mut rng)).collect();
        let eps_prime = (0..2 * n)
            .map(|_| if with_theta { small(&mut rng) } else { int(0) })
            .collect::<Vec<_>>();
        let mut p = Perturbation { eps, eps_prime, eps_second };
        if with_theta && p.eps_prime.iter().all(Zero::is_zero) {
            p.eps_prime[1] = rat(1, 1000);
        }
        out.push(p);
    }
    out
}

pub fn kahler_regularity(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    flag: &FlagSpec,
) -> Result<KahlerReport, IntegralError> {
    kahler_regularity_seeded(problem, jet, flag, SAMPLE_SEED)
}

fn add_into(dst: &mut [Rational], src: &[Rational]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a += b;
    }
}

pub fn kahler_regularity_seeded(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    flag: &FlagSpec,
    seed: u64,
) -> Result<KahlerReport, IntegralError> {
    let n = problem.n();
    flag.check(n)?;
    if !admissible(flag) {
        return Err(IntegralError::InadmissibleFlag);
    }
    let frame = Frame::new(problem, jet)?;
    let sys = polar_from(&frame, flag);
    let zero = int(0);
    let det = crate::expr_core::linalg::rational_det(&sys.square);
    let rank_f = rank(&sys.f);
    let dim_ker_f = 2 * n - rank_f;
    let gf = mat_mul(&sys.g, &sys.f, &zero);
    let dim_ker_gf = nullspace(&gf, 2 * n, &zero).len();
    let det_criterion = !det.is_zero() && rank_f == 2 * n - 1;
    if det_criterion && dim_ker_gf != dim_ker_f {
        return Err(IntegralError::CrossCheckMismatch(format!(
            "det ≠ 0 but dim Ker(g∘f) = {dim_ker_gf}, dim Ker(f) = {dim_ker_f}"
        )));
    }
    let e1 = flag.tangent(0);
    let e2 = flag.tangent(1);
    let is_integral = (1..2 * n).all(|k| {
        let row = frame.two_form_row(k, &e1);
        row.iter().zip(&e2).map(|(a, b)| a * b).sum::<Rational>().is_zero()
    });
    let polar_dim = 4 * n - rank(&polar_system_from(&frame, flag));
    let mut samples = Vec::new();
    for eps in small_perturbations(n, seed) {
        let mut perturbed = flag.clone();
        add_into(&mut perturbed.epsilon.eps, &eps.eps);
        add_into(&mut perturbed.epsilon.eps_prime, &eps.eps_prime);
        add_into(&mut perturbed.epsilon.eps_second, &eps.eps_second);
        let integral_line = perturbed.epsilon.eps_prime.iter().all(Zero::is_zero);
        let dim = 4 * n - rank(&polar_system_from(&frame, &perturbed));
        if !integral_line && dim != 1 {
            return Err(IntegralError::CrossCheckMismatch(format!(
                "a line with a θ-component has a polar space of dimension {dim}"
            )));
        }
        samples.push(PerturbationSample { epsilon: eps, integral_line, polar_dim: dim });
    }
    let locally_constant_sampled = samples.iter().filter(|s| s.integral_line).all(|s| s.polar_dim == polar_dim);
    let [a1, a2] = flag.big_a();
    let mut warnings = Vec::new();
    if a1.is_zero() && a2.is_zero() {
        warnings.push("no dx-coordinate dominates the flag (A₁ = A₂ = 0): Im(f) is not cut out by the relations".into());
    }
    if !is_integral {
        warnings.push("E is not an integral element: dθ does not vanish on (ẽ1, ẽ2)".into());
    }
    let plane = flag.epsilon.is_zero() && rank(&[e1.clone(), e2.clone()]) == 2;
    if is_integral && plane && !det.is_zero() {
        return Err(IntegralError::CrossCheckMismatch(
            "E ⊂ H(E1) forces det = 0 on an integral element, got det ≠ 0".into(),
        ));
    }
    let regular_by = if !is_integral {
        None
    } else if det_criterion {
        Some(RegularityCriterion::PolarDeterminant)
    } else if plane && polar_dim == 2 && locally_constant_sampled {
        Some(RegularityCriterion::PolarDimension)
    } else {
        None
    };
    if is_integral && regular_by.is_none() {
        warnings.push(format!("dim H(E1) = {polar_dim}, not locally constant or larger than dim E"));
    }
    let verdict = if regular_by.is_some() { KahlerVerdict::Regular } else { KahlerVerdict::Inconclusive };
    Ok(KahlerReport {
        det,
        rank_f,
        dim_ker_f,
        dim_ker_gf,
        is_integral,
        polar_dim,
        samples,
        locally_constant_sampled,
        regular_by,
        verdict,
        warnings,
    })
}

/// E = span(∂x₁ + c¹·∂p, ∂x₂ + c²·∂p) with c² chosen so that dθᵏ(ẽ₁, ẽ₂) = 0 for k ≥ 3.
/// The remaining conditions (k = 2) hold exactly when the torsion is absorbed.
pub fn integral_flag(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    c1: Vec<Rational>,
    alpha: Rational,
    beta: Rational,
) -> Result<FlagSpec, IntegralError> {
    let n = problem.n();
    let m = 2 * n - 2;
    if c1.len() != m {
        return Err(IntegralError::DimensionMismatch { field: "c1", expected: m, got: c1.len() });
    }
    let frame = Frame::new(problem, jet)?;
    let c2 = (0..m)
        .map(|j| {
            let row = frame.ctx.gb.beta_row(j + 2);
            row.iter().zip(&c1).map(|(b, c)| b * c).sum::<Rational>() - &frame.c[j + 2]
        })
        .collect();
    Ok(FlagSpec::new(vec![int(1), int(0)], vec![int(0), int(1)], c1, c2, alpha, beta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Index in the candidate sequence, flag and report of the first regular flag.
    pub found: Option<(usize, FlagSpec, KahlerReport)>,
    pub attempted: usize,
    pub dets: Vec<Rational>,
}

/// Candidate flags: coordinate choices of c¹ and (α, β) first, then seeded random ones.
pub fn candidate_flags(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    count: usize,
    seed: u64,
) -> Result<Vec<FlagSpec>, IntegralError> {
    let m = 2 * problem.n() - 2;
    let mut c1s: Vec<Vec<Rational>> = vec![vec![int(0); m]];
    for j in 0..m {
        let mut e = vec![int(0); m];
        e[j] = int(1);
        c1s.push(e);
    }
    let mut out = Vec::with_capacity(count);
    'coord: for c1 in &c1s {
        for (a, b) in [(1, 0), (0, 1), (1, 1)] {
            if out.len() == count {
                break 'coord;
            }
            out.push(integral_flag(problem, jet, c1.clone(), int(a), int(b))?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let c1 = (0..m).map(|_| rat(rng.random_range(-5..=5), rng.random_range(1..=3))).collect();
        let (a, b) = loop {
            let a: i64 = rng.random_range(-3..=3);
            let b: i64 = rng.random_range(-3..=3);
            if a != 0 || b != 0 {
                break (a, b);
            }
        };
        out.push(integral_flag(problem, jet, c1, int(a), int(b))?);
    }
    Ok(out)
}

pub fn ordinary_element_search(
    problem: &HypersurfaceProblem,
    jet: &FirstJetPoint,
    trials: usize,
    seed: u64,
) -> Result<SearchOutcome, IntegralError> {
    if trials == 0 {
        return Err(IntegralError::InvalidTrials);
    }
    let mut dets = Vec::new();
    for (idx, flag) in candidate_flags(problem, jet, trials, seed)?.into_iter().enumerate() {
        let report = kahler_regularity_seeded(problem, jet, &flag, seed)?;
        dets.push(report.det.clone());
        if report.verdict == KahlerVerdict::Regular {
            return Ok(SearchOutcome { found: Some((idx, flag, report)), attempted: idx + 1, dets });
        }
    }
    Ok(SearchOutcome { found: None, attempted: trials, dets })
}
