//! Shared fixtures for the pipeline benchmarks.

use pfaff_core::expr_core::{int, parse_expression, Rational, VarTable};
use pfaff_core::pfaff_geometry::{FirstJetPoint, HypersurfaceProblem, StructureMatrix};

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// 2f₅ + |z₁|² − |z₂|² with the standard structure, at a point and a null jet.
pub fn hyperquadric() -> (HypersurfaceProblem, FirstJetPoint) {
    let t = VarTable::indexed("f", 6);
    let rho = parse_expression("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", &t).expect("fixture parses");
    let pr = HypersurfaceProblem::new(rho, StructureMatrix::complex_standard(&t), (0, 1)).expect("fixture pair");
    let jet = FirstJetPoint::on_surface(&pr, ints(&[1, 0, 1, 0, 0, 0]), ints(&[1, 0, 0, 0])).expect("on surface");
    (pr, jet)
}

/// A constant structure with nonzero D₀ in real dimension 6.
pub fn generic_constant() -> (HypersurfaceProblem, Vec<Rational>) {
    let t = VarTable::indexed("f", 6);
    let m: Vec<Vec<Rational>> = [
        [0, -1, 2, 0, 1, 0],
        [1, 0, 0, 1, 0, -1],
        [0, 1, 0, -1, 2, 0],
        [1, 0, 1, 0, 0, 3],
        [0, 2, 0, 1, 0, -1],
        [-1, 0, 1, 0, 1, 0],
    ]
    .iter()
    .map(|r| ints(r))
    .collect();
    let s = StructureMatrix::from_constants(&t, &m).expect("square");
    let rho = parse_expression("f1 + 2*f2 - f3*f4 + f5^2 + f6^3", &t).expect("fixture parses");
    let point = ints(&[0, 0, 0, 0, 0, 0]);
    let pr = HypersurfaceProblem::with_pair_scan(rho, s, &point).expect("pair with D ≠ 0");
    (pr, point)
}
