use std::collections::BTreeMap;
use std::path::Path;

use pfaff_core::expr_core::{parse_expression, parse_rational, CPoly, GaussianRational, Poly, RatFn, Rational, VarTable};
use pfaff_core::jet_prolongation::{
    builtin, builtin_names, complexify, jet_table, realify, tangent_of_jet, JetConstraintSystem, JetProbe, Opening,
};
use pfaff_core::pfaff_geometry::{HypersurfaceProblem, StructureMatrix};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Real,
    Complexified,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Real => "real",
            Mode::Complexified => "complexified",
        }
    }
}

/// A first jet: base point in user coordinates and the reduced jet p³..p²ⁿ relative to the
/// distinguished pair.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSpec {
    pub f: Vec<Rational>,
    pub p: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct StratumSpec {
    pub system: JetConstraintSystem,
    pub probes: BTreeMap<String, JetProbe>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub source: String,
    /// sha256 of the problem file bytes (or of `builtin:NAME`).
    pub digest: String,
    pub dimension_2n: usize,
    pub mode: Mode,
    /// Defining function over f1..f2n.
    pub rho: Poly,
    pub rho_text: String,
    pub structure: StructureMatrix,
    pub structure_kind: &'static str,
    pub almost_complex: bool,
    /// 0-based distinguished pair, when declared.
    pub pair: Option<(usize, usize)>,
    pub points: BTreeMap<String, Vec<Rational>>,
    pub jets: BTreeMap<String, JetSpec>,
    pub strata: BTreeMap<String, StratumSpec>,
    pub warnings: Vec<String>,
}

impl Problem {
    pub fn n(&self) -> usize {
        self.dimension_2n / 2
    }

    pub fn real_table(&self) -> VarTable {
        self.rho.vars().clone()
    }

    pub fn is_complex_standard(&self) -> bool {
        self.structure_kind == "complex_standard"
    }

    /// The geometric problem at a point: declared pair, or the first pair with D ≠ 0.
    pub fn hypersurface_at(&self, point: &[Rational]) -> Result<HypersurfaceProblem, CliError> {
        let r = match self.pair {
            Some(p) => HypersurfaceProblem::new(self.rho.clone(), self.structure.clone(), p),
            None => HypersurfaceProblem::with_pair_scan(self.rho.clone(), self.structure.clone(), point),
        };
        r.map_err(|e| CliError::module("pfaff_geometry", e))
    }

    pub fn rho_complexified(&self) -> Result<CPoly, CliError> {
        complexify(&self.rho, self.n()).map_err(|e| CliError::module("jet_prolongation", e))
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a problem file, or resolves a builtin example name when no such file exists.
pub fn load_problem(source: &str) -> Result<Problem, CliError> {
    let path = Path::new(source);
    if path.exists() {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io { path: source.to_string(), message: e.to_string() })?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::schema("$", "file is not UTF-8"))?;
        let mut p = parse_problem(&text)?;
        p.source = source.to_string();
        p.digest = digest(&bytes);
        return Ok(p);
    }
    if builtin_names().contains(&source) {
        return builtin_problem(source);
    }
    Err(CliError::FileNotFound(source.to_string()))
}

struct Cursor<'a> {
    path: String,
    value: &'a Value,
}

impl<'a> Cursor<'a> {
    fn root(value: &'a Value) -> Self {
        Self { path: "$".to_string(), value }
    }

    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::schema(&self.path, message)
    }

    fn object(&self) -> Result<&'a Map<String, Value>, CliError> {
        self.value.as_object().ok_or_else(|| self.err("expected an object"))
    }

    fn field(&self, key: &str) -> Result<Cursor<'a>, CliError> {
        self.opt_field(key)?.ok_or_else(|| CliError::schema(format!("{}.{key}", self.path), "missing field"))
    }

    fn opt_field(&self, key: &str) -> Result<Option<Cursor<'a>>, CliError> {
        Ok(self.object()?.get(key).filter(|v| !v.is_null()).map(|value| Cursor { path: format!("{}.{key}", self.path), value }))
    }

    fn items(&self) -> Result<Vec<Cursor<'a>>, CliError> {
        let a = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(a.iter()
            .enumerate()
            .map(|(i, value)| Cursor { path: format!("{}[{i}]", self.path), value })
            .collect())
    }

    fn entries(&self) -> Result<Vec<(String, Cursor<'a>)>, CliError> {
        Ok(self
            .object()?
            .iter()
            .map(|(k, value)| (k.clone(), Cursor { path: format!("{}.{k}", self.path), value }))
            .collect())
    }

    fn string(&self) -> Result<&'a str, CliError> {
        self.value.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn uint(&self) -> Result<usize, CliError> {
        self.value
            .as_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn boolean(&self) -> Result<bool, CliError> {
        self.value.as_bool().ok_or_else(|| self.err("expected true or false"))
    }

    fn rational(&self) -> Result<Rational, CliError> {
        let s = self
            .value
            .as_str()
            .ok_or_else(|| self.err("expected a rational string such as \"1/2\"; numbers are not accepted"))?;
        parse_rational(s).ok_or_else(|| self.err(format!("`{s}` is not a rational of the form p or p/q")))
    }

    fn rational_vec(&self, len: usize) -> Result<Vec<Rational>, CliError> {
        let items = self.items()?;
        if items.len() != len {
            return Err(self.err(format!("expected {len} entries, got {}", items.len())));
        }
        items.iter().map(Cursor::rational).collect()
    }

    /// A rational string or a pair [re, im] of rational strings.
    fn gaussian(&self) -> Result<GaussianRational, CliError> {
        if self.value.is_array() {
            let items = self.items()?;
            if items.len() != 2 {
                return Err(self.err("expected [re, im]"));
            }
            return Ok(GaussianRational::new(items[0].rational()?, items[1].rational()?));
        }
        Ok(GaussianRational::real(self.rational()?))
    }

    fn expression<C: pfaff_core::Coeff>(&self, vars: &VarTable) -> Result<pfaff_core::Polynomial<C>, CliError> {
        let s = self.string()?;
        parse_expression(s, vars).map_err(|e| self.err(e.to_string()))
    }
}

const TOP_FIELDS: [&str; 8] = ["dimension_2n", "mode", "rho", "structure", "distinguished_pair", "points", "jets", "strata"];

/// Parses a problem file's JSON text.
pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::schema("$", format!("invalid JSON: {e}")))?;
    let root = Cursor::root(&value);
    for key in root.object()?.keys() {
        if !TOP_FIELDS.contains(&key.as_str()) {
            return Err(CliError::schema(format!("$.{key}"), "unknown field"));
        }
    }
    let dim_c = root.field("dimension_2n")?;
    let dim = dim_c.uint()?;
    if dim < 4 || dim % 2 != 0 {
        return Err(dim_c.err("dimension_2n must be an even integer ≥ 4"));
    }
    let n = dim / 2;
    let mode_c = root.field("mode")?;
    let mode = match mode_c.string()? {
        "real" => Mode::Real,
        "complexified" => Mode::Complexified,
        other => return Err(mode_c.err(format!("mode must be \"real\" or \"complexified\", got `{other}`"))),
    };
    let real = VarTable::indexed("f", dim);
    let rho_c = root.field("rho")?;
    let rho = match mode {
        Mode::Real => rho_c.expression::<Rational>(&real)?,
        Mode::Complexified => {
            let c = rho_c.expression::<GaussianRational>(&jet_table(n, 0))?;
            realify(&c, n, &real).map_err(|e| rho_c.err(e.to_string()))?
        }
    };
    let mut warnings = Vec::new();
    let (structure, structure_kind, almost_complex) = parse_structure(&root.field("structure")?, &real, dim)?;
    if !almost_complex {
        warnings.push("NotAlmostComplex: the structure matrix does not square to -I".to_string());
    }
    let pair = match root.opt_field("distinguished_pair")? {
        None => None,
        Some(c) => {
            let items = c.items()?;
            if items.len() != 2 {
                return Err(c.err("expected [i1, i2]"));
            }
            let (a, b) = (items[0].uint()?, items[1].uint()?);
            if a == 0 || b == 0 || a > dim || b > dim || a == b {
                return Err(c.err(format!("pair entries must be distinct and in 1..={dim}")));
            }
            Some((a - 1, b - 1))
        }
    };
    let mut points = BTreeMap::new();
    if let Some(c) = root.opt_field("points")? {
        for (name, v) in c.entries()? {
            points.insert(name, v.rational_vec(dim)?);
        }
    }
    let mut jets = BTreeMap::new();
    if let Some(c) = root.opt_field("jets")? {
        for (name, v) in c.entries()? {
            let pc = v.field("point")?;
            let f = match pc.value {
                Value::String(s) => points.get(s).cloned().ok_or_else(|| pc.err(format!("unknown point `{s}`")))?,
                _ => pc.rational_vec(dim)?,
            };
            let p = v.field("p")?.rational_vec(dim - 2)?;
            jets.insert(name, JetSpec { f, p });
        }
    }
    let mut strata = BTreeMap::new();
    if let Some(c) = root.opt_field("strata")? {
        for (name, v) in c.entries()? {
            strata.insert(name, parse_stratum(&v, n)?);
        }
    }
    Ok(Problem {
        source: String::new(),
        digest: digest(text.as_bytes()),
        dimension_2n: dim,
        mode,
        rho,
        rho_text: rho_c.string()?.to_string(),
        structure,
        structure_kind,
        almost_complex,
        pair,
        points,
        jets,
        strata,
        warnings,
    })
}

fn parse_matrix(c: &Cursor, real: &VarTable, dim: usize) -> Result<Vec<Vec<RatFn>>, CliError> {
    let rows = c.items()?;
    if rows.len() != dim {
        return Err(c.err(format!("expected {dim} rows, got {}", rows.len())));
    }
    rows.iter()
        .map(|r| {
            let cells = r.items()?;
            if cells.len() != dim {
                return Err(r.err(format!("expected {dim} entries, got {}", cells.len())));
            }
            cells.iter().map(|e| Ok(RatFn::from_poly(e.expression::<Rational>(real)?))).collect()
        })
        .collect()
}

fn parse_structure(c: &Cursor, real: &VarTable, dim: usize) -> Result<(StructureMatrix, &'static str, bool), CliError> {
    let kind_c = c.field("kind")?;
    match kind_c.string()? {
        "complex_standard" => Ok((StructureMatrix::complex_standard(real), "complex_standard", true)),
        "matrix" => {
            let entries = parse_matrix(&c.field("entries")?, real, dim)?;
            let s = StructureMatrix::general(entries).map_err(|e| c.err(e.to_string()))?;
            let ac = s.is_almost_complex();
            Ok((s, "matrix", ac))
        }
        "pair" => {
            let a = RatFn::from_poly(c.field("a")?.expression::<Rational>(real)?);
            let b = RatFn::from_poly(c.field("b")?.expression::<Rational>(real)?);
            let big_a = parse_matrix(&c.field("A")?, real, dim)?;
            let (s, ac) = StructureMatrix::from_pair(&a, &b, &big_a).map_err(|e| c.err(e.to_string()))?;
            Ok((s, "pair", ac))
        }
        other => Err(kind_c.err(format!("unknown structure kind `{other}`"))),
    }
}

fn parse_stratum(c: &Cursor, n: usize) -> Result<StratumSpec, CliError> {
    let order = match c.opt_field("order")? {
        Some(o) => o.uint()?,
        None => 1,
    };
    let table = jet_table(n, order);
    let equalities = c
        .field("equalities")?
        .items()?
        .iter()
        .map(|e| e.expression::<GaussianRational>(&table))
        .collect::<Result<Vec<CPoly>, _>>()?;
    let mut openings = Vec::new();
    if let Some(oc) = c.opt_field("openings")? {
        for o in oc.items()? {
            let poly = o.field("expr")?.expression::<GaussianRational>(&table)?;
            let positive = match o.opt_field("positive")? {
                Some(p) => p.boolean()?,
                None => false,
            };
            openings.push(Opening { poly, positive });
        }
    }
    let system = JetConstraintSystem::new(n, order, equalities, openings).map_err(|e| c.err(e.to_string()))?;
    let mut probes = BTreeMap::new();
    if let Some(pc) = c.opt_field("probes")? {
        for (name, v) in pc.entries()? {
            let levels = v
                .items()?
                .iter()
                .map(|lc| {
                    let vals = lc.items()?;
                    if vals.len() != n {
                        return Err(lc.err(format!("expected {n} entries, got {}", vals.len())));
                    }
                    vals.iter().map(Cursor::gaussian).collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            if levels.len() != order + 1 {
                return Err(v.err(format!("expected {} levels (z, w, ...), got {}", order + 1, levels.len())));
            }
            probes.insert(name, JetProbe::new(levels).map_err(|e| v.err(e.to_string()))?);
        }
    }
    Ok(StratumSpec { system, probes })
}

/// Builtin example as a problem: complexified ρ, standard structure, one point and one jet
/// per probe of every stratum.
pub fn builtin_problem(name: &str) -> Result<Problem, CliError> {
    let b = builtin(name).map_err(|_| CliError::UnknownName { what: "builtin problem", name: name.to_string() })?;
    let dim = 2 * b.n;
    let real = VarTable::indexed("f", dim);
    let rho = b.rho_real(&real).map_err(|e| CliError::module("jet_prolongation", e))?;
    let structure = StructureMatrix::complex_standard(&real);
    let mut points = BTreeMap::new();
    let mut jets = BTreeMap::new();
    let mut strata = BTreeMap::new();
    for s in &b.strata {
        let mut probes = BTreeMap::new();
        for p in &s.probes {
            let f = tangent_of_jet(&p.probe.levels()[0]);
            let w = tangent_of_jet(&p.probe.levels()[1]);
            if let Ok(hp) = HypersurfaceProblem::with_pair_scan(rho.clone(), structure.clone(), &f) {
                let internal: Vec<Rational> = hp.perm().iter().map(|&u| w[u].clone()).collect();
                jets.insert(p.name.clone(), JetSpec { f: f.clone(), p: internal[2..].to_vec() });
            }
            points.insert(p.name.clone(), f);
            probes.insert(p.name.clone(), p.probe.clone());
        }
        strata.insert(s.name.clone(), StratumSpec { system: s.system.clone(), probes });
    }
    Ok(Problem {
        source: name.to_string(),
        digest: digest(format!("builtin:{name}").as_bytes()),
        dimension_2n: dim,
        mode: Mode::Complexified,
        rho_text: b.rho.to_string(),
        rho,
        structure,
        structure_kind: "complex_standard",
        almost_complex: true,
        pair: None,
        points,
        jets,
        strata,
        warnings: Vec::new(),
    })
}
