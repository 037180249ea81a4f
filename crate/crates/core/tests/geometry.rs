mod common;

use common::*;
use pfaff_core::expr_core::{int, rat, Field, RatFn, Rational};
use pfaff_core::pfaff_geometry::{FirstJetPoint, GeometryError, HypersurfaceProblem, StructureKind, StructureMatrix};
use proptest::prelude::*;

#[test]
fn hyperquadric_gamma_matches_direct_solve() {
    let pr = complex_problem("f5 + f1^2 + f2^2 - f3^2 - f4^2", 6);
    let f = ints(&[1, 0, 1, 0, 0, 0]);
    let gb = pr.gamma_beta_at(&f).unwrap();
    assert_eq!(gb.rho_grad, ints(&[2, 0, -2, 0, 1, 0]));
    assert_eq!(gb.d, int(-4));
    assert_eq!(gb.gamma1, vec![int(1), int(0), rat(-1, 2), int(0)]);
    assert_eq!(gb.gamma2, vec![int(0), int(1), int(0), rat(-1, 2)]);
    let a = pr.internal_structure().evaluate(&f).unwrap();
    let (g1, g2) = gamma_oracle(&gb.rho_grad, &a).unwrap();
    assert_eq!((g1, g2), (gb.gamma1.clone(), gb.gamma2.clone()));
}

#[test]
fn identity_structure_is_singular() {
    let t = table(4);
    let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| int((i == j) as i64)).collect()).collect();
    let s = StructureMatrix::from_constants(&t, &id).unwrap();
    let pr = HypersurfaceProblem::new(poly("f1 + f2 + f3^2", &t), s.clone(), (0, 1)).unwrap();
    assert!(matches!(pr.gamma_beta_at(&ints(&[0, 0, 0, 0])), Err(GeometryError::SingularD { .. })));
    assert_eq!(pr.gamma_beta_symbolic().unwrap_err(), GeometryError::IdenticallySingularD);
    let err = HypersurfaceProblem::with_pair_scan(poly("f1 + f2 + f3^2", &t), s, &ints(&[0, 0, 0, 0])).unwrap_err();
    assert_eq!(err, GeometryError::IdenticallySingularD);
}

#[test]
fn pair_construction_recovers_complex_standard() {
    let t = table(4);
    let std = StructureMatrix::complex_standard(&t);
    let a = RatFn::zero(&t);
    let b = RatFn::constant(&t, int(-1));
    let (s, almost_complex) = StructureMatrix::from_pair(&a, &b, std.entries()).unwrap();
    assert!(almost_complex);
    assert_eq!(s.kind(), StructureKind::FromPair);
    for j in 0..4 {
        for i in 0..4 {
            assert!(s.entry(j, i).equal(std.entry(j, i)));
        }
    }
    assert_eq!(
        StructureMatrix::from_pair(&a, &RatFn::zero(&t), std.entries()).unwrap_err(),
        GeometryError::ZeroB
    );
}

#[test]
fn pair_construction_flags_non_almost_complex() {
    let t = table(4);
    let m = random_int_matrix(&mut rng(3), 4);
    let big_a = StructureMatrix::from_constants(&t, &m).unwrap();
    let a = RatFn::from_poly(poly("f1", &t));
    let b = RatFn::constant(&t, int(2));
    let (_, almost_complex) = StructureMatrix::from_pair(&a, &b, big_a.entries()).unwrap();
    assert!(!almost_complex);
}

#[test]
fn almost_complex_factorization_identity() {
    // (aI + A)(aI − A) = (1 + a²)I whenever A² = −I.
    let t = table(4);
    let std = StructureMatrix::complex_standard(&t);
    let a = RatFn::from_poly(poly("f1^2 - 3*f2", &t));
    let one_plus = a.mul(&a).add(&RatFn::constant(&t, int(1)));
    for j in 0..4 {
        for i in 0..4 {
            let mut s = RatFn::zero(&t);
            for k in 0..4 {
                let left = if j == k { a.add(std.entry(j, k)) } else { std.entry(j, k).clone() };
                let right = if k == i { a.sub(std.entry(k, i)) } else { std.entry(k, i).neg() };
                s = s.add(&left.mul(&right));
            }
            let expect = if i == j { one_plus.clone() } else { RatFn::zero(&t) };
            assert!(s.equal(&expect));
        }
    }
}

#[test]
fn symbolic_gamma_agrees_with_pointwise() {
    let pr = complex_problem("f5 + f1^2 + f2^2 - f3^2 - f4^2", 6);
    let sym = pr.gamma_beta_symbolic().unwrap();
    let mut r = rng(11);
    let mut checked = 0;
    while checked < 20 {
        let p = random_point(&mut r, 6);
        let Ok(gb) = pr.gamma_beta_at(&p) else { continue };
        let internal = pr.to_internal(&p);
        assert_eq!(sym.gamma1[0].evaluate(&internal).unwrap(), gb.gamma1[0]);
        assert_eq!(sym.gamma2[1].evaluate(&internal).unwrap(), gb.gamma2[1]);
        assert_eq!(sym.beta[1][2].evaluate(&internal).unwrap(), gb.beta[1][2]);
        checked += 1;
    }
}

#[test]
fn constant_data_for_linear_rho() {
    let t = table(4);
    let m = random_int_matrix(&mut rng(5), 4);
    let s = StructureMatrix::from_constants(&t, &m).unwrap();
    let pr = HypersurfaceProblem::new(poly("f1 + 2*f2 - f3 + 3*f4", &t), s, (0, 1)).unwrap();
    if let Ok(sym) = pr.gamma_beta_symbolic() {
        for g in sym.gamma1.iter().chain(&sym.gamma2).chain(sym.beta.iter().flatten()) {
            for v in 0..4 {
                assert!(g.differentiate(v).is_zero());
            }
        }
    }
}

#[test]
fn full_jet_annihilates_drho() {
    let pr = complex_problem("f5 + f1^2 + f2^2 - f3^2 - f4^2", 6);
    let f = ints(&[1, 0, 1, 0, 0, 0]);
    let zero = FirstJetPoint::on_surface(&pr, f.clone(), ints(&[0, 0, 0, 0])).unwrap();
    let (p1, p2) = pr.full_jet(&zero).unwrap();
    assert!(p1.iter().chain(&p2).all(|x| x.is_zero()));
    let jet = FirstJetPoint::on_surface(&pr, f.clone(), vec![int(1), int(0), rat(2, 3), int(-5)]).unwrap();
    let (p1, p2) = pr.full_jet(&jet).unwrap();
    let grad = pr.gamma_beta_at(&f).unwrap().rho_grad;
    let dot = |p: &[Rational]| -> Rational { p.iter().zip(&grad).map(|(a, b)| a * b).sum() };
    assert_eq!(dot(&p1), int(0));
    assert_eq!(dot(&p2), int(0));
    // p¹ = γ¹·p_reduced with γ¹ = (1, 0, −1/2, 0).
    assert_eq!(p1[0], int(1) - rat(1, 3));
    assert!(FirstJetPoint::on_surface(&pr, ints(&[1, 1, 1, 1, 1, 1]), ints(&[0, 0, 0, 0])).is_err());
}

#[test]
fn general_invariants_on_random_problems() {
    let mut r = rng(21);
    for _ in 0..10 {
        let t = table(6);
        let point = random_point(&mut r, 6);
        let rho = random_rho(&mut r, &t, 3, &point);
        let m = random_int_matrix(&mut r, 6);
        let s = StructureMatrix::from_constants(&t, &m).unwrap();
        let Ok(pr) = HypersurfaceProblem::with_pair_scan(rho, s, &point) else { continue };
        let gb = pr.gamma_beta_at(&point).unwrap();
        let a = pr.internal_structure().evaluate(&pr.to_internal(&point)).unwrap();
        for j in 0..4 {
            let g = &gb.rho_grad;
            assert_eq!(&g[0] * &gb.gamma1[j] + &g[1] * &gb.gamma2[j] + &g[j + 2], int(0));
            let mu = &gb.mu;
            assert_eq!(&mu[0] * &gb.gamma1[j] + &mu[1] * &gb.gamma2[j] + &mu[j + 2], int(0));
            for i in 0..6 {
                let expect = &a[i][0] * &gb.gamma1[j] + &a[i][1] * &gb.gamma2[j] + &a[i][j + 2];
                assert_eq!(gb.beta_row(i)[j], expect);
            }
        }
    }
}

#[test]
fn complex_case_reproduces_closed_gamma() {
    let mut r = rng(8);
    let t = table(6);
    for _ in 0..10 {
        let point = random_point(&mut r, 6);
        let rho = random_rho(&mut r, &t, 4, &point);
        let pr = HypersurfaceProblem::new(rho, StructureMatrix::complex_standard(&t), (0, 1)).unwrap();
        let Ok(gb) = pr.gamma_beta_at(&point) else { continue };
        let g = &gb.rho_grad;
        assert_eq!(gb.d, -(&g[0] * &g[0] + &g[1] * &g[1]));
        for j in 1..3 {
            let (o, e) = (2 * j, 2 * j + 1);
            let sym = (&g[0] * &g[o] + &g[1] * &g[e]) / &gb.d;
            let anti = (&g[0] * &g[e] - &g[1] * &g[o]) / &gb.d;
            assert_eq!(gb.gamma1[o - 2], sym);
            assert_eq!(gb.gamma2[e - 2], sym);
            assert_eq!(gb.gamma1[e - 2], anti);
            assert_eq!(gb.gamma2[o - 2], -anti);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn relabeling_is_coherent(seed in 0u64..1000, i1 in 0usize..4, shift in 1usize..4) {
        let i2 = (i1 + shift) % 4;
        let mut r = rng(seed);
        let t = table(4);
        let point = random_point(&mut r, 4);
        let rho = random_rho(&mut r, &t, 3, &point);
        let m = random_int_matrix(&mut r, 4);
        let s = StructureMatrix::from_constants(&t, &m).unwrap();
        let pr = HypersurfaceProblem::new(rho.clone(), s, (i1, i2)).unwrap();

        // Permute the user coordinates by σ and move the pair along.
        let sigma = [2usize, 0, 3, 1];
        let images: Vec<_> = (0..4).map(|u| pfaff_core::Poly::var(&t, sigma[u])).collect();
        let rho_s = rho.compose(&images, &t);
        let mut m_s = vec![vec![int(0); 4]; 4];
        for j in 0..4 { for i in 0..4 { m_s[sigma[j]][sigma[i]] = m[j][i].clone(); } }
        let s_s = StructureMatrix::from_constants(&t, &m_s).unwrap();
        let pr_s = HypersurfaceProblem::new(rho_s, s_s, (sigma[i1], sigma[i2])).unwrap();
        let mut point_s = vec![int(0); 4];
        for u in 0..4 { point_s[sigma[u]] = point[u].clone(); }

        match (pr.gamma_beta_at(&point), pr_s.gamma_beta_at(&point_s)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a.d, &b.d);
                let to_s = |j: usize| -> usize {
                    let u = pr.perm()[j + 2];
                    pr_s.perm().iter().position(|&x| x == sigma[u]).unwrap() - 2
                };
                for j in 0..2 {
                    prop_assert_eq!(&a.gamma1[j], &b.gamma1[to_s(j)]);
                    prop_assert_eq!(&a.gamma2[j], &b.gamma2[to_s(j)]);
                    prop_assert_eq!(&a.beta1[j], &b.beta1[to_s(j)]);
                    for k in 0..2 {
                        prop_assert_eq!(&a.beta[j][k], &b.beta[to_s(j)][to_s(k)]);
                    }
                }
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "singularity differs after relabeling"),
        }
    }
}
