use std::collections::BTreeMap;

use pfaff_core::expr_core::Rational;
use pfaff_core::integral_element::{ordinary_element_search, FlagSpec, KahlerReport};
use pfaff_core::involutivity::{compute_d_vectors, prolongation_dims};
use pfaff_core::jet_prolongation::{
    involution_loop, levi_form, tangent_of_jet, ChainOutcome, InvolutionChain, JetOptions, JetProbe, StratumReport,
    StratumVerdict,
};
use pfaff_core::pfaff_geometry::FirstJetPoint;
use pfaff_core::torsion::{complex_b_coefficients, dim6_definiteness, pseudo_ellipsoid_check, QuadraticForm};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::problem::{load_problem, Problem};
use crate::report::{CommandEcho, Report, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Involutivity,
    Torsion,
    ComplexForms,
    Dim6,
    PseudoEllipsoid,
    IntegralElement,
    Jets,
    All,
}

impl Command {
    pub const SECTIONS: [Command; 7] = [
        Command::Involutivity,
        Command::Torsion,
        Command::ComplexForms,
        Command::Dim6,
        Command::PseudoEllipsoid,
        Command::IntegralElement,
        Command::Jets,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Involutivity => "involutivity",
            Command::Torsion => "torsion",
            Command::ComplexForms => "complex-forms",
            Command::Dim6 => "dim6",
            Command::PseudoEllipsoid => "pseudo-ellipsoid",
            Command::IntegralElement => "integral-element",
            Command::Jets => "jets",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub point: Option<String>,
    /// Jet name; for `jets`, the probe name.
    pub jet: Option<String>,
    pub order: Option<usize>,
    pub stratum: Option<String>,
    pub rounds: Option<usize>,
    pub seed: u64,
    pub keep_redundant: bool,
    pub trials: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            point: None,
            jet: None,
            order: None,
            stratum: None,
            rounds: None,
            seed: 0x5eed,
            keep_redundant: false,
            trials: 16,
        }
    }
}

impl RunOptions {
    fn echo(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("point".into(), json!(self.point));
        m.insert("jet".into(), json!(self.jet));
        m.insert("order".into(), json!(self.order));
        m.insert("stratum".into(), json!(self.stratum));
        m.insert("rounds".into(), json!(self.rounds));
        m.insert("seed".into(), json!(self.seed.to_string()));
        m.insert("keep_redundant".into(), json!(self.keep_redundant));
        m.insert("trials".into(), json!(self.trials));
        m
    }
}

fn s(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn sv(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn sm(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| sv(r)).collect())
}

fn form(q: &QuadraticForm) -> Value {
    json!({ "matrix": sm(&q.matrix), "definiteness": format!("{:?}", q.definiteness()) })
}

fn debug_name<T: std::fmt::Debug>(t: T) -> String {
    format!("{t:?}")
}

struct Section {
    results: Vec<Value>,
    verdicts: Vec<Verdict>,
    warnings: Vec<String>,
}

impl Section {
    fn new() -> Self {
        Self { results: Vec::new(), verdicts: Vec::new(), warnings: Vec::new() }
    }

    fn verdict(&mut self, section: Command, subject: &str, verdict: impl Into<String>) {
        self.verdicts.push(Verdict { section: section.as_str().to_string(), subject: subject.to_string(), verdict: verdict.into() });
    }
}

/// Loads the problem and runs one command on it.
pub fn run_command(command: Command, source: &str, options: &RunOptions) -> Result<Report, CliError> {
    let problem = load_problem(source)?;
    run_on_problem(command, &problem, options)
}

pub fn run_on_problem(command: Command, problem: &Problem, options: &RunOptions) -> Result<Report, CliError> {
    let mut out = Section::new();
    out.warnings.extend(problem.warnings.iter().cloned());
    if command == Command::All {
        for c in Command::SECTIONS {
            match section(c, problem, options) {
                Ok(sec) => merge(&mut out, sec),
                Err(CliError::NotApplicable { reason, .. }) => {
                    out.results.push(json!({ "section": c.as_str(), "skipped": reason }));
                }
                Err(e @ CliError::Module { .. }) if !e.is_cross_check() => {
                    out.results.push(json!({ "section": c.as_str(), "error": e.to_string() }));
                    out.warnings.push(format!("{}: {e}", c.as_str()));
                }
                Err(e) => return Err(e),
            }
        }
    } else {
        merge(&mut out, section(command, problem, options)?);
    }
    Ok(Report {
        command: CommandEcho { name: command.as_str().to_string(), problem: problem.source.clone(), options: options.echo() },
        problem_digest: problem.digest.clone(),
        problem: json!({
            "dimension_2n": problem.dimension_2n,
            "mode": problem.mode.as_str(),
            "rho": problem.rho_text,
            "structure": problem.structure_kind,
            "almost_complex": problem.almost_complex,
            "distinguished_pair": problem.pair.map(|(a, b)| [a + 1, b + 1]),
        }),
        results: out.results,
        verdicts: out.verdicts,
        warnings: out.warnings,
    })
}

fn merge(into: &mut Section, from: Section) {
    into.results.extend(from.results);
    into.verdicts.extend(from.verdicts);
    into.warnings.extend(from.warnings);
}

fn not_applicable(command: Command, reason: impl Into<String>) -> CliError {
    CliError::NotApplicable { command: command.as_str().to_string(), reason: reason.into() }
}

fn section(command: Command, problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    match command {
        Command::Involutivity => involutivity(problem, options),
        Command::Torsion => torsion(problem, options),
        Command::ComplexForms => complex_forms(problem, options),
        Command::Dim6 => dim6(problem, options),
        Command::PseudoEllipsoid => pseudo_ellipsoid(problem, options),
        Command::IntegralElement => integral_element(problem, options),
        Command::Jets => jets(problem, options),
        Command::All => unreachable!("expanded by run_on_problem"),
    }
}

fn select<'a, T>(
    command: Command,
    what: &'static str,
    map: &'a BTreeMap<String, T>,
    name: &Option<String>,
) -> Result<Vec<(&'a String, &'a T)>, CliError> {
    match name {
        Some(n) => map
            .get_key_value(n)
            .map(|kv| vec![kv])
            .ok_or_else(|| CliError::UnknownName { what, name: n.clone() }),
        None if map.is_empty() => Err(not_applicable(command, format!("the problem declares no {}", plural(what)))),
        None => Ok(map.iter().collect()),
    }
}

fn plural(what: &str) -> String {
    match what {
        "stratum" => "strata".to_string(),
        w => format!("{w}s"),
    }
}

fn pair_json(pair: (usize, usize)) -> Value {
    json!([pair.0 + 1, pair.1 + 1])
}

fn involutivity(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::Involutivity;
    let mut sec = Section::new();
    let mut seen_dims: Option<Vec<usize>> = None;
    for (name, f) in select(c, "point", &problem.points, &options.point)? {
        let hp = problem.hypersurface_at(f)?;
        let gb = hp.gamma_beta_at(f).map_err(|e| CliError::module("pfaff_geometry", e))?;
        let d = compute_d_vectors(&gb).map_err(|e| CliError::module("involutivity", e))?;
        let tab = prolongation_dims(&hp, f, options.order).map_err(|e| CliError::module("involutivity", e))?;
        let d0_zero = d.d0_is_zero();
        sec.results.push(json!({
            "section": c.as_str(),
            "point": name,
            "pair": pair_json(hp.pair()),
            "d0": sv(&d.d0),
            "d1": sv(&d.d1),
            "d2": sv(&d.d2),
            "d0_zero": d0_zero,
            "dim_a": tab.dim_a,
            "dims": tab.dims,
            "q0": tab.q0,
            "involutive_from": tab.involutive_from,
            "involutive_at_0": tab.involutive_at_0,
        }));
        let v = if tab.involutive_at_0 {
            "involutive".to_string()
        } else {
            format!("involutive after {} prolongations", tab.involutive_from)
        };
        sec.verdict(c, name, v);
        if let Some(prev) = &seen_dims {
            if *prev != tab.dims {
                sec.warnings.push(format!("dimension jump: prolongation dimensions at `{name}` differ from earlier points"));
            }
        }
        seen_dims.get_or_insert(tab.dims);
    }
    Ok(sec)
}

fn jet_at(problem: &Problem, name: &str, f: &[Rational], p: &[Rational]) -> Result<(pfaff_core::pfaff_geometry::HypersurfaceProblem, FirstJetPoint), CliError> {
    let hp = problem.hypersurface_at(f)?;
    let jet = FirstJetPoint::on_surface(&hp, f.to_vec(), p.to_vec())
        .map_err(|e| CliError::module("pfaff_geometry", e))
        .map_err(|e| match e {
            CliError::Module { module, kind, message } => CliError::Module { module, kind, message: format!("jet `{name}`: {message}") },
            other => other,
        })?;
    Ok((hp, jet))
}

fn torsion(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::Torsion;
    let mut sec = Section::new();
    for (name, spec) in select(c, "jet", &problem.jets, &options.jet)? {
        let (hp, jet) = jet_at(problem, name, &spec.f, &spec.p)?;
        let t = pfaff_core::torsion::torsion_absorbable(&hp, &jet).map_err(|e| CliError::module("torsion", e))?;
        sec.results.push(json!({
            "section": c.as_str(),
            "jet": name,
            "pair": pair_json(hp.pair()),
            "case": debug_name(t.case),
            "c": sv(&t.c),
            "residual_1": s(&t.residual_1),
            "residual_2": s(&t.residual_2),
            "absorbable": t.absorbable,
            "witness_v": t.witness_v.as_ref().map(|(v1, v2)| json!({ "v1": sv(v1), "v2": sv(v2) })),
            "d0": sv(&t.d_vectors.d0),
        }));
        sec.verdict(c, name, if t.absorbable { "absorbable" } else { "not absorbable" });
    }
    Ok(sec)
}

fn require_complex(c: Command, problem: &Problem) -> Result<(), CliError> {
    if problem.is_complex_standard() {
        Ok(())
    } else {
        Err(not_applicable(c, "requires the standard complex structure"))
    }
}

fn complex_forms(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::ComplexForms;
    require_complex(c, problem)?;
    let mut sec = Section::new();
    for (name, f) in select(c, "point", &problem.points, &options.point)? {
        let d = complex_b_coefficients(&problem.rho, f).map_err(|e| CliError::module("torsion", e))?;
        sec.results.push(json!({
            "section": c.as_str(),
            "point": name,
            "gamma1": sv(&d.gamma1),
            "gamma2": sv(&d.gamma2),
            "b_lower": sm(&d.b_lower),
            "b_upper": sm(&d.b_upper),
            "c1": form(&d.c1),
            "c2": form(&d.c2),
        }));
    }
    Ok(sec)
}

fn dim6(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::Dim6;
    require_complex(c, problem)?;
    if problem.dimension_2n != 6 {
        return Err(not_applicable(c, "requires dimension_2n = 6"));
    }
    let mut sec = Section::new();
    for (name, f) in select(c, "point", &problem.points, &options.point)? {
        let r = dim6_definiteness(&problem.rho, f).map_err(|e| CliError::module("torsion", e))?;
        sec.results.push(json!({
            "section": c.as_str(),
            "point": name,
            "b_lower": sm(&r.data.b_lower),
            "b_upper": sm(&r.data.b_upper),
            "disc_lower": s(&r.disc_lower),
            "disc_upper": s(&r.disc_upper),
            "c1": form(&r.data.c1),
            "c2": form(&r.data.c2),
            "verdict": debug_name(r.verdict),
        }));
        sec.verdict(c, name, debug_name(r.verdict));
    }
    Ok(sec)
}

/// (αᵢ, kᵢ) when ρ = Σ αᵢ fᵢ^{2kᵢ} + const with one term per coordinate.
fn ellipsoid_parameters(problem: &Problem) -> Option<(Vec<Rational>, Vec<u32>)> {
    let dim = problem.dimension_2n;
    let mut alphas: Vec<Option<Rational>> = vec![None; dim];
    let mut ks = vec![0u32; dim];
    for (m, coeff) in problem.rho.terms() {
        let used: Vec<(usize, u32)> = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
        if used.is_empty() {
            continue;
        }
        let [(i, e)] = used[..] else { return None };
        if e % 2 != 0 || alphas[i].is_some() {
            return None;
        }
        alphas[i] = Some(coeff.clone());
        ks[i] = e / 2;
    }
    let alphas = alphas.into_iter().collect::<Option<Vec<_>>>()?;
    Some((alphas, ks))
}

fn pseudo_ellipsoid(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::PseudoEllipsoid;
    require_complex(c, problem)?;
    if problem.dimension_2n != 6 {
        return Err(not_applicable(c, "requires dimension_2n = 6"));
    }
    let (alphas, ks) =
        ellipsoid_parameters(problem).ok_or_else(|| not_applicable(c, "rho is not of the form sum of alpha_i f_i^(2 k_i)"))?;
    let mut sec = Section::new();
    for (name, y) in select(c, "point", &problem.points, &options.point)? {
        let r = pseudo_ellipsoid_check(&alphas, &ks, y).map_err(|e| CliError::module("torsion", e))?;
        sec.results.push(json!({
            "section": c.as_str(),
            "point": name,
            "alpha": sv(&alphas),
            "k": ks,
            "v": sv(&r.v),
            "w": sv(&r.w),
            "l": s(&r.l),
            "discriminant_lines": r.discriminant_lines.as_ref().map(|(a, b)| json!([s(a), s(b)])),
            "verdict": debug_name(r.verdict),
        }));
        sec.verdict(c, name, debug_name(r.verdict));
    }
    Ok(sec)
}

fn flag_json(flag: &FlagSpec) -> Value {
    json!({
        "a1": sv(&flag.a1),
        "a2": sv(&flag.a2),
        "c1": sv(&flag.c1),
        "c2": sv(&flag.c2),
        "alpha": s(&flag.alpha),
        "beta": s(&flag.beta),
    })
}

fn kahler_json(r: &KahlerReport) -> Value {
    json!({
        "det": s(&r.det),
        "rank_f": r.rank_f,
        "dim_ker_f": r.dim_ker_f,
        "dim_ker_gf": r.dim_ker_gf,
        "is_integral": r.is_integral,
        "polar_dim": r.polar_dim,
        "sample_polar_dims": r.samples.iter().map(|x| x.polar_dim).collect::<Vec<_>>(),
        "locally_constant_sampled": r.locally_constant_sampled,
        "regular_by": r.regular_by.map(debug_name),
        "verdict": debug_name(r.verdict),
    })
}

fn integral_element(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::IntegralElement;
    let mut sec = Section::new();
    for (name, spec) in select(c, "jet", &problem.jets, &options.jet)? {
        let (hp, jet) = jet_at(problem, name, &spec.f, &spec.p)?;
        let out = ordinary_element_search(&hp, &jet, options.trials.max(1), options.seed)
            .map_err(|e| CliError::module("integral_element", e))?;
        let found = out.found.as_ref().map(|(idx, flag, report)| {
            json!({ "index": idx, "flag": flag_json(flag), "report": kahler_json(report) })
        });
        if let Some((_, _, report)) = &out.found {
            sec.warnings.extend(report.warnings.iter().map(|w| format!("{name}: {w}")));
        }
        sec.results.push(json!({
            "section": c.as_str(),
            "jet": name,
            "pair": pair_json(hp.pair()),
            "attempted": out.attempted,
            "dets": sv(&out.dets),
            "found": found,
        }));
        let v = if out.found.is_some() { "ordinary integral element found".to_string() } else { format!("no regular flag among {} candidates", out.attempted) };
        sec.verdict(c, name, v);
    }
    Ok(sec)
}

fn stratum_json(r: &StratumReport) -> Value {
    let verdict = match r.verdict {
        StratumVerdict::InvolutiveAtOrder(q) => json!({ "kind": r.verdict.as_str(), "order": q }),
        _ => json!({ "kind": r.verdict.as_str() }),
    };
    json!({
        "order": r.order,
        "torsion_free": r.torsion_free,
        "tableau_dim": r.tableau_dim,
        "tableau_dim_real": r.tableau_dim_real,
        "next_dim": r.next_dim,
        "next_dim_real": r.next_dim_real,
        "next_torsion_free": r.next_torsion_free,
        "units": r.units.as_str(),
        "collapsed": r.collapsed,
        "new_constraints": r.new_constraints,
        "obstructions": r.obstructions,
        "redundant_dropped": r.redundant_dropped,
        "verdict": verdict,
        "warnings": r.warnings,
        "notes": r.notes,
    })
}

fn chain_verdict(chain: &InvolutionChain) -> String {
    match chain.outcome {
        ChainOutcome::Involutive { round, order } => format!("involutive at round {round} (order {order})"),
        ChainOutcome::Blocked { round } => format!("blocked at round {round}"),
        ChainOutcome::RoundsExhausted => format!("not involutive within {} rounds", chain.max_rounds),
    }
}

fn levi_at(problem: &Problem, probe: &JetProbe) -> Result<Value, String> {
    let f = tangent_of_jet(&probe.levels()[0]);
    let p = tangent_of_jet(&probe.levels()[1]);
    levi_form(&problem.rho, &problem.structure, &f, &p).map(|x| s(&x)).map_err(|e| e.to_string())
}

fn jets(problem: &Problem, options: &RunOptions) -> Result<Section, CliError> {
    let c = Command::Jets;
    let mut sec = Section::new();
    let jet_options = JetOptions { keep_redundant: options.keep_redundant, seed: options.seed, ..JetOptions::default() };
    for (sname, stratum) in select(c, "stratum", &problem.strata, &options.stratum)? {
        let probes: Vec<(&String, &JetProbe)> = match &options.jet {
            Some(n) => vec![stratum
                .probes
                .get_key_value(n)
                .ok_or_else(|| CliError::UnknownName { what: "probe", name: n.clone() })?],
            None => stratum.probes.iter().collect(),
        };
        if probes.is_empty() {
            return Err(not_applicable(c, format!("stratum `{sname}` declares no probes")));
        }
        for (pname, probe) in probes {
            let subject = format!("{sname}/{pname}");
            let chain = involution_loop(&stratum.system, probe, options.rounds, &jet_options)
                .map_err(|e| CliError::module("jet_prolongation", e))?;
            let levi = match levi_at(problem, probe) {
                Ok(v) => v,
                Err(e) => {
                    sec.warnings.push(format!("{subject}: Levi form unavailable: {e}"));
                    Value::Null
                }
            };
            for (i, r) in chain.reports.iter().enumerate() {
                sec.warnings.extend(r.warnings.iter().map(|w| format!("{subject} round {}: {w}", i + 1)));
            }
            sec.results.push(json!({
                "section": c.as_str(),
                "stratum": sname,
                "probe": pname,
                "levi": levi,
                "dims": chain.dims,
                "units": chain.units.as_str(),
                "outcome": chain.outcome.as_str(),
                "max_rounds": chain.max_rounds,
                "rounds": chain.reports.iter().map(stratum_json).collect::<Vec<_>>(),
            }));
            sec.verdict(c, &subject, chain_verdict(&chain));
        }
    }
    Ok(sec)
}
