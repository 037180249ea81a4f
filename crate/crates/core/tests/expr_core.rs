use pfaff_core::expr_core::{
    parse_expression, rat, CPoly, ExprError, GaussianRational, Poly, RatFn, Rational, VarTable,
};
use proptest::prelude::*;

fn table(n: usize) -> VarTable {
    VarTable::indexed("f", n)
}

fn p(text: &str, vars: &VarTable) -> Poly {
    parse_expression(text, vars).unwrap()
}

fn complexified(n: usize) -> VarTable {
    let mut names = Vec::new();
    for l in 1..=n {
        names.push(format!("z{l}"));
        names.push(format!("zb{l}"));
        names.push(format!("w{l}"));
        names.push(format!("wb{l}"));
    }
    VarTable::new(names)
}

#[test]
fn parses_rational_coefficients() {
    let t = table(2);
    let e = p("2*f1^2 - 1/3*f2", &t);
    assert_eq!(e.coeff(&[2, 0]), rat(2, 1));
    assert_eq!(e.coeff(&[0, 1]), rat(-1, 3));
    assert_eq!(e.num_terms(), 2);
}

#[test]
fn rejects_negative_exponent() {
    let t = table(2);
    let err = parse_expression::<Rational>("f1^-2", &t).unwrap_err();
    assert!(matches!(err, ExprError::NegativeOrNonIntegerExponent { offset: 3 }));
    let err = parse_expression::<Rational>("f1^1/2", &t).unwrap_err();
    assert!(matches!(err, ExprError::NegativeOrNonIntegerExponent { .. }));
}

#[test]
fn reports_syntax_offsets_and_unknown_names() {
    let t = table(2);
    assert_eq!(
        parse_expression::<Rational>("f1 + f9", &t).unwrap_err(),
        ExprError::UnknownVariable("f9".into())
    );
    match parse_expression::<Rational>("f1 + * f2", &t).unwrap_err() {
        ExprError::MalformedSyntax { offset, .. } => assert_eq!(offset, 5),
        e => panic!("{e:?}"),
    }
    assert!(matches!(
        parse_expression::<Rational>("0.5*f1", &t).unwrap_err(),
        ExprError::MalformedSyntax { offset: 1, .. }
    ));
    assert_eq!(parse_expression::<Rational>("i*f1", &t).unwrap_err(), ExprError::ImaginaryInRealMode);
}

#[test]
fn parses_complexified_hyperquadric() {
    let t = complexified(2);
    let q: CPoly = parse_expression("z1*zb1 - z2*zb2", &t).unwrap();
    assert_eq!(q.num_terms(), 2);
    assert_eq!(q.conjugate_involution().unwrap(), q);
    let jets = VarTable::new(["w1", "w1_2", "wb1", "wb1_2"]);
    let e: CPoly = parse_expression("w1_2*wb1", &jets).unwrap();
    assert_eq!(e.conjugate_involution().unwrap(), parse_expression("wb1_2*w1", &jets).unwrap());
}

#[test]
fn conjugation_swaps_and_conjugates() {
    let t = complexified(2);
    let a: CPoly = parse_expression("z1^2*zb2", &t).unwrap();
    assert_eq!(a.conjugate_involution().unwrap(), parse_expression("zb1^2*z2", &t).unwrap());
    let b: CPoly = parse_expression("i*w1", &t).unwrap();
    assert_eq!(b.conjugate_involution().unwrap(), parse_expression("-i*wb1", &t).unwrap());
    let real = table(2);
    let c: CPoly = parse_expression("f1", &real).unwrap();
    assert_eq!(c.conjugate_involution().unwrap_err(), ExprError::NotComplexifiedMode);
}

#[test]
fn differentiation_examples() {
    let t = table(3);
    assert_eq!(p("f1^2 + 2*f1*f2", &t).differentiate(0), p("2*f1 + 2*f2", &t));
    assert!(p("f1*f2", &t).differentiate(2).is_zero());
    let y = VarTable::indexed("y", 6);
    let v3 = p("y3^4", &y).differentiate_by_name("y3").unwrap();
    assert_eq!(v3, p("4*y3^3", &y));
    assert_eq!(
        p("f1", &t).differentiate_by_name("g").unwrap_err(),
        ExprError::UnknownVariable("g".into())
    );
}

#[test]
fn evaluation_examples() {
    let t = table(2);
    assert_eq!(p("f1^2 - f2", &t).evaluate(&[rat(3, 1), rat(4, 1)]).unwrap(), rat(5, 1));
    let t6 = table(6);
    let rho = p("f5 + f1^2 + f2^2 - f3^2 - f4^2", &t6);
    let pt: Vec<Rational> = [1, 0, 1, 0, 0, 0].iter().map(|&x| rat(x, 1)).collect();
    assert_eq!(rho.evaluate(&pt).unwrap(), rat(0, 1));
    assert_eq!(Poly::zero(&t).evaluate(&[rat(7, 2), rat(1, 9)]).unwrap(), rat(0, 1));
    assert_eq!(
        rho.evaluate(&pt[..3]).unwrap_err(),
        ExprError::DimensionMismatch { expected: 6, got: 3 }
    );
}

#[test]
fn rational_function_examples() {
    let t = table(2);
    let f1 = RatFn::from_poly(p("f1", &t));
    let f2 = RatFn::from_poly(p("f2", &t));
    let one = RatFn::from_poly(p("1", &t));
    let s = one.div(&f1).unwrap().add(&one.div(&f2).unwrap());
    assert_eq!(s.numerator(), &p("f1 + f2", &t));
    assert_eq!(s.denominator(), &p("f1*f2", &t));
    let q = RatFn::new(p("f1^2 - f2^2", &t), p("f1 - f2", &t)).unwrap();
    assert!(q.equal(&RatFn::from_poly(p("f1 + f2", &t))));
    assert_eq!(RatFn::zero(&t).inv().unwrap_err(), ExprError::DivisionByZeroFunction);
    assert_eq!(
        one.div(&f1).unwrap().evaluate(&[rat(0, 1), rat(1, 1)]).unwrap_err(),
        ExprError::PoleAtPoint
    );
}

#[test]
fn quotient_rule_matches_pointwise_derivative() {
    let t = table(2);
    let r = RatFn::new(p("f1^2*f2 + 3", &t), p("f1 - 2*f2 + 5", &t)).unwrap();
    let pt = [rat(1, 3), rat(-2, 7)];
    let sym = r.differentiate(0).evaluate(&pt).unwrap();
    assert_eq!(sym, r.derivative_at(0, &pt).unwrap());
}

#[test]
fn gaussian_printing_round_trips() {
    let t = complexified(1);
    let e: CPoly = parse_expression("(1/2 + 3/4*i)*z1*wb1 - i*w1^2 + 2 - 5*zb1", &t).unwrap();
    let printed = e.to_string();
    let again: CPoly = parse_expression(&printed, &t).unwrap();
    assert_eq!(again, e);
    assert_eq!(GaussianRational::i().to_string(), "i");
}

fn arb_poly(vars: VarTable) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec(
        (prop::collection::vec(0u32..3, n), -6i64..7, 1i64..5),
        0..6,
    )
    .prop_map(move |terms| {
        Poly::from_terms(&vars, terms.into_iter().map(|(e, a, b)| (e, rat(a, b))))
    })
}

fn arb_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..10, 1i64..6).prop_map(|(a, b)| rat(a, b)), n)
}

proptest! {
    #[test]
    fn ring_axioms(a in arb_poly(table(3)), b in arb_poly(table(3)), c in arb_poly(table(3))) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn product_rule(a in arb_poly(table(3)), b in arb_poly(table(3)), v in 0usize..3) {
        let lhs = a.mul(&b).differentiate(v);
        let rhs = a.differentiate(v).mul(&b).add(&a.mul(&b.differentiate(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip(a in arb_poly(table(3))) {
        let t = table(3);
        let once: Poly = parse_expression(&a.to_string(), &t).unwrap();
        prop_assert_eq!(&once, &a);
        let twice: Poly = parse_expression(&once.to_string(), &t).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in arb_poly(table(3)), b in arb_poly(table(3)), x in arb_point(3)) {
        let (ea, eb) = (a.evaluate(&x).unwrap(), b.evaluate(&x).unwrap());
        prop_assert_eq!(a.add(&b).evaluate(&x).unwrap(), &ea + &eb);
        prop_assert_eq!(a.mul(&b).evaluate(&x).unwrap(), &ea * &eb);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in arb_poly(table(3)), b in arb_poly(table(3))) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn conjugation_is_an_involution(re in prop::collection::vec(-4i64..5, 4), im in prop::collection::vec(-4i64..5, 4)) {
        let t = complexified(1);
        let mut e = CPoly::zero(&t);
        for (k, (a, b)) in re.iter().zip(&im).enumerate() {
            let mut ex = vec![0; 4];
            ex[k] = 1;
            ex[(k + 1) % 4] += 1;
            let c = GaussianRational::new(rat(*a, 1), rat(*b, 1));
            e = e.add(&CPoly::from_terms(&t, [(ex, c)]));
        }
        prop_assert_eq!(e.conjugate_involution().unwrap().conjugate_involution().unwrap(), e);
    }

    #[test]
    fn rational_functions_form_a_field(a in arb_poly(table(2)), b in arb_poly(table(2)), c in arb_poly(table(2)), d in arb_poly(table(2))) {
        prop_assume!(!b.is_zero() && !d.is_zero());
        let x = RatFn::new(a, b).unwrap();
        let y = RatFn::new(c, d).unwrap();
        prop_assert!(x.add(&y).sub(&y).equal(&x));
        if !y.is_zero() {
            prop_assert!(x.mul(&y).div(&y).unwrap().equal(&x));
        }
    }
}
