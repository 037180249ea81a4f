use crate::expr_core::{int, parse_expression, CPoly, GaussianRational, Poly, VarTable};

use super::derive::prolong_constraints;
use super::levi::realify;
use super::vars::jet_table;
use super::{JetConstraintSystem, JetError, JetProbe, Opening};

#[derive(Clone, Debug)]
pub struct NamedProbe {
    pub name: String,
    pub probe: JetProbe,
}

#[derive(Clone, Debug)]
pub struct NamedStratum {
    pub name: String,
    pub system: JetConstraintSystem,
    pub probes: Vec<NamedProbe>,
}

impl NamedStratum {
    pub fn probe(&self, name: &str) -> Option<&JetProbe> {
        self.probes.iter().find(|p| p.name == name).map(|p| &p.probe)
    }
}

/// A named example: complexified defining function and declared strata with probe jets.
#[derive(Clone, Debug)]
pub struct BuiltinProblem {
    pub name: String,
    pub n: usize,
    pub rho: CPoly,
    pub strata: Vec<NamedStratum>,
}

impl BuiltinProblem {
    pub fn stratum(&self, name: &str) -> Result<&NamedStratum, JetError> {
        self.strata
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| JetError::UnknownStratum(name.to_string()))
    }

    /// Real defining function over `f1..f2n`.
    pub fn rho_real(&self, real: &VarTable) -> Result<Poly, JetError> {
        realify(&self.rho, self.n, real)
    }
}

pub fn builtin_names() -> &'static [&'static str] {
    &["cusp", "flat", "hyperquadric"]
}

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(int(re), int(im))
}

fn probe(name: &str, z: [GaussianRational; 3], w: [GaussianRational; 3]) -> NamedProbe {
    NamedProbe { name: name.to_string(), probe: JetProbe::new(vec![z.to_vec(), w.to_vec()]).expect("three coordinates") }
}

fn system(eqs: &[&str], openings: &[(&str, bool)]) -> JetConstraintSystem {
    JetConstraintSystem::parse(3, 1, eqs, openings).expect("builtin constraints parse")
}

fn rho(text: &str) -> CPoly {
    parse_expression(text, &jet_table(3, 0)).expect("builtin defining function parses")
}

pub fn builtin(name: &str) -> Result<BuiltinProblem, JetError> {
    match name {
        "flat" => {
            let r = "1/2*z3 + 1/2*zb3";
            Ok(BuiltinProblem {
                name: name.to_string(),
                n: 3,
                rho: rho(r),
                strata: vec![NamedStratum {
                    name: "main".to_string(),
                    system: system(&[r, "w3"], &[]),
                    probes: vec![probe("origin_disk", [g(0, 0), g(0, 0), g(0, 1)], [g(1, 0), g(0, 0), g(0, 0)])],
                }],
            })
        }
        "hyperquadric" => {
            let r = "z3 + zb3 + z1*zb1 - z2*zb2";
            Ok(BuiltinProblem {
                name: name.to_string(),
                n: 3,
                rho: rho(r),
                strata: vec![NamedStratum {
                    name: "null_levi".to_string(),
                    system: system(&[r, "w3 + w1*zb1 - w2*zb2", "w1*wb1 - w2*wb2"], &[("w1*wb1 + w2*wb2", true)]),
                    probes: vec![probe("generic", [g(1, 1), g(2, 0), g(1, 0)], [g(5, 0), g(3, 4), g(1, 13)])],
                }],
            })
        }
        "cusp" => {
            let r = "1/2*z3 + 1/2*zb3 + (z1^2 - z2^3)*(zb1^2 - zb2^3)";
            let h = "2*z1*w1 - 3*z2^2*w2";
            let regular = probe("regular", [g(1, 0), g(1, 0), g(0, 1)], [g(3, 0), g(2, 0), g(0, 0)]);
            let critical = probe("critical", [g(0, 0), g(0, 0), g(0, 1)], [g(1, 0), g(0, 0), g(0, 0)]);
            let axis = probe("axis", [g(0, 0), g(0, 0), g(0, 2)], [g(0, 0), g(0, 0), g(0, 0)]);
            let gradient_norm = "4*w1*wb1 + 36*z2*zb2*w2*wb2 + 4*z1*zb1 + 9*z2^2*zb2^2";
            Ok(BuiltinProblem {
                name: name.to_string(),
                n: 3,
                rho: rho(r),
                strata: vec![
                    NamedStratum {
                        name: "smooth".to_string(),
                        system: system(&[r, "w3", h], &[]),
                        probes: vec![regular.clone()],
                    },
                    NamedStratum {
                        name: "regular".to_string(),
                        system: system(&[r, "w3", h], &[(gradient_norm, true)]),
                        probes: vec![regular, critical],
                    },
                    NamedStratum {
                        name: "critical".to_string(),
                        system: system(&[r, "w3", h, "2*w1", "-6*z2*w2", "2*z1", "-3*z2^2"], &[]),
                        probes: vec![axis],
                    },
                ],
            })
        }
        other => Err(JetError::UnknownBuiltin(other.to_string())),
    }
}

/// The system {ρ} together with its first prolongation.
pub fn first_step(n: usize, rho: &CPoly) -> Result<JetConstraintSystem, JetError> {
    let base = JetConstraintSystem::new(n, 0, vec![rho.clone()], Vec::<Opening>::new())?;
    prolong_constraints(&base)
}
