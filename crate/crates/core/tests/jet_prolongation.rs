mod common;

use std::collections::BTreeSet;

use common::*;
use pfaff_core::expr_core::{int, parse_expression, rat, CPoly, GaussianRational, Poly, RatFn, Rational, VarTable};
use pfaff_core::jet_prolongation::*;
use pfaff_core::pfaff_geometry::StructureMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::new(int(re), int(im))
}

fn cpoly(text: &str, order: usize) -> CPoly {
    parse_expression(text, &jet_table(3, order)).unwrap()
}

fn chain(problem: &str, stratum: &str, probe: &str) -> InvolutionChain {
    let b = builtin(problem).unwrap();
    let s = b.stratum(stratum).unwrap();
    involution_loop(&s.system, s.probe(probe).unwrap(), None, &JetOptions::default()).unwrap()
}

fn monic_set(eqs: &[CPoly]) -> BTreeSet<String> {
    eqs.iter().map(|e| e.monic().to_string()).collect()
}

#[test]
fn total_derivative_examples() {
    assert_eq!(d_t(3, &cpoly("w3", 1)), cpoly("w3_1", 2));
    assert_eq!(
        d_t(3, &cpoly("2*z1*w1 + 3*z2^2*w2", 1)),
        cpoly("2*w1^2 + 2*z1*w1_1 + 6*z2*w2^2 + 3*z2^2*w2_1", 2)
    );
    let h = cpoly("w1*wb1 - w2*wb2", 1);
    assert_eq!(d_t(3, &h), cpoly("w1_1*wb1 - w2_1*wb2", 2));
    let mixed = d_t(3, &d_tbar(3, &h));
    let expected = parse_expression("w1_1*wb1_1 - w2_1*wb2_1", mixed.vars()).unwrap();
    assert_eq!(mixed, expected);
    assert!(d_t(3, &cpoly("zb1*wb2", 1)).is_zero());
}

#[test]
fn prolongation_lists_the_derived_constraints() {
    let s = JetConstraintSystem::parse(3, 1, &["w1*wb1 - w2*wb2", "w3"], &[]).unwrap();
    let p = prolong_constraints(&s).unwrap();
    assert_eq!(p.order(), 2);
    let got = monic_set(p.equalities());
    for e in ["w1_1*wb1 - w2_1*wb2", "w1*wb1_1 - w2*wb2_1", "w1_1*wb1_1 - w2_1*wb2_1", "w3_1", "wb3_1", "w3", "wb3"] {
        let key = parse_expression::<GaussianRational>(e, &jet_table(3, 2)).unwrap().monic().to_string();
        assert!(got.contains(&key), "missing {e}");
    }
    for e in p.equalities() {
        let c = e.conjugate_involution().unwrap().monic().to_string();
        assert!(got.contains(&c), "not closed under conjugation: {e}");
    }
}

fn jet_poly(r: &mut ChaCha8Rng) -> CPoly {
    let t = jet_table(2, 1);
    let terms = (0..5).map(|_| {
        let e = (0..t.len()).map(|_| if r.random_range(0..4) == 0 { r.random_range(1..=2) } else { 0 }).collect();
        (e, g(r.random_range(-3..=3), r.random_range(-3..=3)))
    });
    CPoly::from_terms(&t, terms.collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivations_commute(seed in any::<u64>()) {
        let p = jet_poly(&mut rng(seed));
        prop_assert_eq!(d_t(2, &d_tbar(2, &p)), d_tbar(2, &d_t(2, &p)));
    }

    #[test]
    fn conjugation_intertwines_derivations(seed in any::<u64>()) {
        let p = jet_poly(&mut rng(seed));
        let lhs = d_t(2, &p).conjugate_involution().unwrap();
        let rhs = d_tbar(2, &p.conjugate_involution().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hyperquadric_chain_at_random_null_jets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut small = || g(r.random_range(-4..=4), r.random_range(-4..=4));
        let (z1, z2, w1) = (small(), small(), small());
        prop_assume!(!w1.is_zero());
        let (a, b) = (r.random_range(1..=4i64), r.random_range(-4..=4i64));
        let u = GaussianRational::new(rat(a * a - b * b, a * a + b * b), rat(2 * a * b, a * a + b * b));
        let w2 = w1.mul(&u);
        let re3 = (z2.norm_sqr() - z1.norm_sqr()) / int(2);
        let z3 = GaussianRational::new(re3, int(r.random_range(-4..=4)));
        let w3 = w2.mul(&z2.conj()).sub(&w1.mul(&z1.conj()));
        let probe = JetProbe::new(vec![vec![z1, z2, z3], vec![w1, w2, w3]]).unwrap();
        let s = builtin("hyperquadric").unwrap();
        let c = involution_loop(&s.stratum("null_levi").unwrap().system, &probe, None, &JetOptions::default()).unwrap();
        prop_assert_eq!(c.dims, vec![3, 2, 2]);
        prop_assert!(c.reports.iter().all(|x| x.torsion_free));
    }
}

#[test]
fn hyperquadric_chain_is_three_two_two() {
    let c = chain("hyperquadric", "null_levi", "generic");
    assert_eq!(c.dims, vec![3, 2, 2]);
    assert_eq!(c.units, TableauUnits::Real);
    assert_eq!(c.outcome, ChainOutcome::Involutive { round: 2, order: 2 });
    assert!(c.reports.iter().all(|r| r.torsion_free && r.warnings.is_empty()));
    assert_eq!(c.reports[1].next_torsion_free, Some(true));
    assert_eq!(c.max_rounds, 4);
}

#[test]
fn hyperquadric_first_step_is_the_null_stratum() {
    let b = builtin("hyperquadric").unwrap();
    let s = first_step(3, &b.rho).unwrap();
    assert_eq!(monic_set(s.equalities()), monic_set(b.stratum("null_levi").unwrap().system.equalities()));
}

#[test]
fn hyperquadric_second_order_redundancy() {
    let c = chain("hyperquadric", "null_levi", "generic");
    let dropped = &c.reports[1].redundant_dropped;
    let target = cpoly("w1_1*wb1_2 - w2_1*wb2_2", 3).monic().to_string();
    let target_conj = cpoly("w1_2*wb1_1 - w2_2*wb2_1", 3).monic().to_string();
    assert!(dropped.iter().any(|d| {
        let m = parse_expression::<GaussianRational>(d, &jet_table(3, 3)).unwrap().monic().to_string();
        m == target || m == target_conj
    }));
    let kept = c.reports[0].decisions.iter().all(|d| !d.equation.contains("w1_1*wb1_1"));
    assert!(kept, "the quadratic first-order relation is never a drop candidate");
}

#[test]
fn cusp_regular_stratum_has_dimension_one() {
    let c = chain("cusp", "regular", "regular");
    assert_eq!(c.units, TableauUnits::Complex);
    assert_eq!(c.dims, vec![1, 1]);
    assert!(c.reports[0].torsion_free);
    assert_eq!(c.outcome, ChainOutcome::Involutive { round: 1, order: 1 });
    assert!(c.reports[0].warnings.is_empty());
}

#[test]
fn cusp_critical_point_jumps_and_blocks() {
    let c = chain("cusp", "regular", "critical");
    let r = &c.reports[0];
    assert_eq!(r.tableau_dim, 2);
    assert!(!r.torsion_free);
    assert_eq!(r.verdict, StratumVerdict::Blocked);
    assert!(r.warnings.iter().any(|w| w.contains("not locally constant")));
    assert_eq!(c.outcome, ChainOutcome::Blocked { round: 1 });
}

#[test]
fn cusp_critical_stratum_collapses() {
    let b = builtin("cusp").unwrap();
    let s = b.stratum("critical").unwrap();
    let (collapsed, forced) = collapse_monomials(&s.system).unwrap();
    let expected = ["z3 + zb3", "w3", "wb3", "z1", "zb1", "z2", "zb2", "w1", "wb1", "w2", "wb2"];
    let expected: BTreeSet<String> = expected.iter().map(|e| cpoly(e, 1).monic().to_string()).collect();
    assert_eq!(monic_set(collapsed.equalities()), expected);
    assert_eq!(forced.len(), 10);
    let c = chain("cusp", "critical", "axis");
    assert_eq!(c.dims, vec![0, 0]);
    assert!(matches!(c.outcome, ChainOutcome::Involutive { round: 1, .. }));
    assert!(c.reports[0].notes.iter().any(|n| n.contains("only trivial curves")));
}

#[test]
fn flat_is_immediately_involutive() {
    let c = chain("flat", "main", "origin_disk");
    assert_eq!(c.dims, vec![2, 2]);
    assert_eq!(c.outcome, ChainOutcome::Involutive { round: 1, order: 1 });
}

#[test]
fn flat_disk_satisfies_every_generated_constraint() {
    let b = builtin("flat").unwrap();
    let mut s = b.stratum("main").unwrap().system.clone();
    let t = VarTable::new(["t", "tb"]);
    for order in 1..=3 {
        assert_eq!(s.order(), order);
        let table = s.table();
        let images: Vec<CPoly> = (0..table.len())
            .map(|i| match table.name(i) {
                "z1" => CPoly::var(&t, 0),
                "zb1" => CPoly::var(&t, 1),
                "w1" | "wb1" => CPoly::one(&t),
                _ => CPoly::zero(&t),
            })
            .collect();
        for e in s.equalities() {
            assert!(e.compose(&images, &t).is_zero(), "{e} fails on the disk");
        }
        s = prolong_constraints(&s).unwrap();
    }
}

/// Laplacian at 0 of ρ∘u for a polynomial surface u(x, y) with u_y = J(u)u_x to second order.
fn levi_oracle(rho: &Poly, j: &[Vec<Poly>], f: &[Rational], p: &[Rational], a: &[Rational]) -> Rational {
    let dim = f.len();
    let s = VarTable::new(["s"]);
    let jf: Vec<Vec<Rational>> = j.iter().map(|r| r.iter().map(|e| e.evaluate(f).unwrap()).collect()).collect();
    let dj = |v: &[Rational]| -> Vec<Vec<Rational>> {
        let line: Vec<Poly> = (0..dim)
            .map(|k| Poly::constant(&s, f[k].clone()).add(&Poly::var(&s, 0).scale(&v[k])))
            .collect();
        j.iter().map(|r| r.iter().map(|e| e.compose(&line, &s).coeff(&[1])).collect()).collect()
    };
    let mv = |m: &[Vec<Rational>], v: &[Rational]| -> Vec<Rational> {
        m.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    };
    let add = |u: &[Rational], v: &[Rational]| -> Vec<Rational> { u.iter().zip(v).map(|(x, y)| x + y).collect() };
    let q = mv(&jf, p);
    let b = add(&mv(&jf, a), &mv(&dj(p), p));
    let c = add(&mv(&jf, &b), &mv(&dj(&q), p));
    let xy = VarTable::new(["x", "y"]);
    let (x, y) = (Poly::var(&xy, 0), Poly::var(&xy, 1));
    let half = rat(1, 2);
    let u: Vec<Poly> = (0..dim)
        .map(|k| {
            Poly::constant(&xy, f[k].clone())
                .add(&x.scale(&p[k]))
                .add(&y.scale(&q[k]))
                .add(&x.mul(&x).scale(&(&a[k] * &half)))
                .add(&x.mul(&y).scale(&b[k]))
                .add(&y.mul(&y).scale(&(&c[k] * &half)))
        })
        .collect();
    let comp = rho.compose(&u, &xy);
    int(2) * comp.coeff(&[2, 0]) + int(2) * comp.coeff(&[0, 2])
}

fn standard_j(dim: usize) -> Vec<Vec<Poly>> {
    let t = table(dim);
    (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let v = if r % 2 == 0 && c == r + 1 { -1 } else if r % 2 == 1 && c + 1 == r { 1 } else { 0 };
                    Poly::constant(&t, int(v))
                })
                .collect()
        })
        .collect()
}

/// Dφ⁻¹ J₀ Dφ for φ(f) = (f1, f2 + f1², f3, f4 + f1 f3, f5, f6).
fn twisted_j() -> Vec<Vec<Poly>> {
    let t = table(6);
    let zero = Poly::zero(&t);
    let mut n = vec![vec![zero.clone(); 6]; 6];
    n[1][0] = poly("2*f1", &t);
    n[3][2] = poly("f1", &t);
    n[3][0] = poly("f3", &t);
    let id = |r: usize, c: usize| Poly::constant(&t, int(i64::from(r == c)));
    let dphi: Vec<Vec<Poly>> = (0..6).map(|r| (0..6).map(|c| id(r, c).add(&n[r][c])).collect()).collect();
    let inv: Vec<Vec<Poly>> = (0..6).map(|r| (0..6).map(|c| id(r, c).sub(&n[r][c])).collect()).collect();
    let mul = |a: &[Vec<Poly>], b: &[Vec<Poly>]| -> Vec<Vec<Poly>> {
        (0..6)
            .map(|r| (0..6).map(|c| (0..6).fold(zero.clone(), |acc, k| acc.add(&a[r][k].mul(&b[k][c])))).collect())
            .collect()
    };
    mul(&mul(&inv, &standard_j(6)), &dphi)
}

fn structure(j: &[Vec<Poly>]) -> StructureMatrix {
    StructureMatrix::general(j.iter().map(|r| r.iter().map(|e| RatFn::from_poly(e.clone())).collect()).collect()).unwrap()
}

#[test]
fn levi_form_fixed_values() {
    let t = table(6);
    let j = StructureMatrix::complex_standard(&t);
    let origin = ints(&[0, 0, 0, 0, 0, 0]);
    let flat = poly("f5", &t);
    let mut r = rng(11);
    for _ in 0..10 {
        let p = random_point(&mut r, 6);
        assert_eq!(levi_form(&flat, &j, &random_point(&mut r, 6), &p).unwrap(), int(0));
    }
    let hq = poly("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", &t);
    assert_eq!(levi_form(&hq, &j, &origin, &ints(&[1, 0, 1, 0, 0, 0])).unwrap(), int(0));
    let ball = poly("2*f5 + f1^2 + f2^2 + f3^2 + f4^2", &t);
    assert_eq!(levi_form(&ball, &j, &origin, &ints(&[1, 0, 0, 0, 0, 0])).unwrap(), int(4));
    assert!(matches!(levi_form(&ball, &j, &origin, &ints(&[1, 0])), Err(JetError::DimensionMismatch { .. })));
}

#[test]
fn levi_form_matches_surface_oracle() {
    let t = table(6);
    let mut r = rng(5);
    let twisted = twisted_j();
    let tj = structure(&twisted);
    assert!(tj.is_almost_complex());
    assert!(!tj.is_constant());
    let sj = StructureMatrix::complex_standard(&t);
    for _ in 0..20 {
        let f = random_point(&mut r, 6);
        let rho = random_rho(&mut r, &t, 3, &f);
        let p = random_point(&mut r, 6);
        let a = random_point(&mut r, 6);
        assert_eq!(levi_form(&rho, &sj, &f, &p).unwrap(), levi_oracle(&rho, &standard_j(6), &f, &p, &a));
        assert_eq!(levi_form(&rho, &tj, &f, &p).unwrap(), levi_oracle(&rho, &twisted, &f, &p, &a));
        assert!(squares_to_minus_identity_at(&tj, &f).unwrap());
    }
}

#[test]
fn levi_form_constant_structure_is_two_hessian_terms() {
    let t = table(4);
    let j = StructureMatrix::complex_standard(&t);
    let mut r = rng(8);
    for _ in 0..20 {
        let f = random_point(&mut r, 4);
        let rho = random_rho(&mut r, &t, 4, &f);
        let p = random_point(&mut r, 4);
        let jp = vec![-p[1].clone(), p[0].clone(), -p[3].clone(), p[2].clone()];
        let hess = |v: &[Rational]| -> Rational {
            let mut s = int(0);
            for a in 0..4 {
                for b in 0..4 {
                    s += rho.differentiate(a).differentiate(b).evaluate(&f).unwrap() * &v[a] * &v[b];
                }
            }
            s
        };
        assert_eq!(levi_form(&rho, &j, &f, &p).unwrap(), hess(&p) + hess(&jp));
    }
}

#[test]
fn hyperquadric_levi_vanishes_on_null_jets() {
    let b = builtin("hyperquadric").unwrap();
    let t = table(6);
    let rho = b.rho_real(&t).unwrap();
    assert_eq!(rho, poly("2*f5 + f1^2 + f2^2 - f3^2 - f4^2", &t));
    let j = StructureMatrix::complex_standard(&t);
    let probe = b.stratum("null_levi").unwrap().probe("generic").unwrap();
    let z = tangent_of_jet(&probe.levels()[0]);
    let w = tangent_of_jet(&probe.levels()[1]);
    assert_eq!(levi_form(&rho, &j, &z, &w).unwrap(), int(0));
    let off = tangent_of_jet(&[g(2, 0), g(1, 0), g(0, 0)]);
    assert_eq!(levi_form(&rho, &j, &z, &off).unwrap(), int(12));
}

#[test]
fn realify_and_complexify_are_inverse() {
    let t = table(6);
    let mut r = rng(21);
    for _ in 0..10 {
        let f = random_point(&mut r, 6);
        let rho = random_rho(&mut r, &t, 3, &f);
        assert_eq!(realify(&complexify(&rho, 3).unwrap(), 3, &t).unwrap(), rho);
    }
    assert_eq!(builtin("cusp").unwrap().rho_real(&t).unwrap().coeff(&[0, 0, 0, 0, 1, 0]), int(1));
    assert_eq!(realify(&cpoly("z1", 0), 3, &t), Err(JetError::NotRealValued));
}

#[test]
fn probe_validation_and_errors() {
    let b = builtin("hyperquadric").unwrap();
    let s = &b.stratum("null_levi").unwrap().system;
    let bad = JetProbe::new(vec![vec![g(1, 1), g(2, 0), g(1, 0)], vec![g(5, 0), g(3, 4), g(1, 0)]]).unwrap();
    assert!(matches!(stratum_analyze(s, &bad), Err(JetError::ProbeViolatesStratum(_))));
    let closed = JetProbe::new(vec![vec![g(0, 0), g(0, 0), g(0, 0)], vec![g(0, 0), g(0, 0), g(0, 0)]]).unwrap();
    assert!(matches!(stratum_analyze(s, &closed), Err(JetError::ProbeViolatesStratum(m)) if m.contains("opening")));
    let good = b.stratum("null_levi").unwrap().probe("generic").unwrap();
    assert_eq!(
        involution_loop(s, good, Some(0), &JetOptions::default()),
        Err(JetError::InvalidRounds)
    );
    let short = involution_loop(s, good, Some(1), &JetOptions::default()).unwrap();
    assert_eq!(short.outcome, ChainOutcome::RoundsExhausted);
    assert_eq!(short.dims, vec![3, 2]);
    assert!(matches!(builtin("sphere"), Err(JetError::UnknownBuiltin(_))));
    assert!(matches!(b.stratum("nope"), Err(JetError::UnknownStratum(_))));
    assert!(matches!(reduce_redundant(s, &[]), Err(JetError::NoValidProbePoint)));
}

#[test]
fn reduction_without_top_order_equations_is_identity() {
    let s = JetConstraintSystem::parse(3, 1, &["1/2*z3 + 1/2*zb3"], &[]).unwrap();
    let probe = JetProbe::new(vec![vec![g(0, 0), g(0, 0), g(0, 1)], vec![g(1, 0), g(0, 0), g(0, 0)]]).unwrap();
    let (r, decisions) = reduce_redundant(&s, &[probe]).unwrap();
    assert_eq!(r, s);
    assert!(decisions.is_empty());
}

#[test]
fn keep_redundant_changes_nothing_but_the_log() {
    let b = builtin("hyperquadric").unwrap();
    let st = b.stratum("null_levi").unwrap();
    let opts = JetOptions { keep_redundant: true, ..JetOptions::default() };
    let kept = involution_loop(&st.system, st.probe("generic").unwrap(), None, &opts).unwrap();
    assert_eq!(kept.dims, vec![3, 2, 2]);
    assert!(kept.reports.iter().all(|r| r.redundant_dropped.is_empty()));
}

#[test]
fn analysis_is_deterministic_and_bounded() {
    for (p, s, q) in [("hyperquadric", "null_levi", "generic"), ("cusp", "regular", "regular"), ("flat", "main", "origin_disk")] {
        let a = chain(p, s, q);
        assert_eq!(a, chain(p, s, q));
        assert!(a.dims.iter().all(|&d| d <= 4));
        assert!(a.dims.windows(2).all(|w| w[0] >= w[1]));
    }
}
