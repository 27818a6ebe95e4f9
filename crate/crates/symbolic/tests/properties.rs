use std::collections::HashMap;

use legpath_symbolic::{
    parse_expr, parse_form, q, Chart, DifferentialForm, Expression, Monomial, Polynomial, RationalFunction, Q,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

const NAMES: [&str; 8] = ["x1", "x2", "x3", "x4", "u", "p1", "p2", "p3"];

fn chart(k: usize) -> Chart {
    Chart::new("prop", &NAMES[..k]).unwrap()
}

/// Polynomial of total degree <= `deg` in the first `k` variables.
fn poly(k: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..=deg, k)), 0..5).prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().filter_map(|(c, exps)| {
            let mut budget = deg;
            let pairs: Vec<(u32, u32)> = exps
                .iter()
                .enumerate()
                .map(|(v, &e)| {
                    let e = e.min(budget);
                    budget -= e;
                    (v as u32, e)
                })
                .collect();
            (c != 0).then(|| (Monomial::from_pairs(pairs.into_iter().filter(|p| p.1 > 0)), q(c, 1)))
        }))
    })
}

/// Homogeneous form of the given degree with polynomial coefficients.
fn form(k: usize, degree: usize) -> impl Strategy<Value = DifferentialForm> {
    prop::collection::vec((prop::sample::subsequence((0..k as u32).collect::<Vec<_>>(), degree), poly(k, 4)), 0..4)
        .prop_map(move |terms| {
            DifferentialForm::from_terms(&chart(k), terms.into_iter().map(|(i, p)| (i, RationalFunction::from_poly(p))))
        })
}

fn sized_form() -> impl Strategy<Value = (usize, DifferentialForm)> {
    (2usize..=8).prop_flat_map(|k| (Just(k), (0..=k.min(3)).prop_flat_map(move |d| form(k, d))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_is_zero((_, a) in sized_form()) {
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn graded_leibniz((da, a, b) in (2usize..=6, 0usize..=2, 0usize..=2)
        .prop_flat_map(|(k, da, db)| (Just(da), form(k, da), form(k, db))))
    {
        let lhs = a.wedge(&b).unwrap().d();
        let sign = if da % 2 == 0 { Q::one() } else { -Q::one() };
        let rhs = &a.d().wedge(&b).unwrap() + &a.wedge(&b.d()).unwrap().scale_const(&sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullback_commutes_with_d((k, a) in sized_form(), images in prop::collection::vec(poly(3, 2), 8)) {
        let source = Chart::new("src", &["s", "t", "r"]).unwrap();
        let map: HashMap<String, Expression> = NAMES[..k]
            .iter()
            .zip(images)
            .map(|(n, p)| (n.to_string(), Expression::new(&source, RationalFunction::from_poly(p))))
            .collect();
        let sub = legpath_symbolic::ChartMap::new(&source, &chart(k), &map).unwrap();
        prop_assert_eq!(a.d().pullback(&sub).unwrap(), a.pullback(&sub).unwrap().d());
    }

    #[test]
    fn wedge_is_associative((a, b, c) in (3usize..=5).prop_flat_map(|k| (form(k, 1), form(k, 1), form(k, 1)))) {
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        prop_assert_eq!(a.wedge(&b).unwrap(), -b.wedge(&a).unwrap());
    }

    #[test]
    fn parse_print_round_trip((_, a) in sized_form(), num in poly(4, 3), den in poly(4, 2)) {
        prop_assert_eq!(&parse_form::<Q>(a.chart(), &a.to_string()).unwrap(), &a);
        if !den.is_zero() {
            let c = chart(4);
            let e = Expression::new(&c, RationalFunction::new(num, den).unwrap());
            prop_assert_eq!(parse_expr::<Q>(&c, &e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn equality_agrees_with_evaluation(a in poly(3, 4), b in poly(3, 4)) {
        // A polynomial with all partial degrees <= 4 that vanishes on a 5x5x5
        // grid is zero, so the grid decides equality.
        let c = chart(3);
        let ea = Expression::new(&c, RationalFunction::from_poly(a));
        let eb = Expression::new(&c, RationalFunction::from_poly(b));
        let grid: Vec<Q> = (-2..=2).map(|i| q(i, 3)).collect();
        let mut all_equal = true;
        for x in &grid {
            for y in &grid {
                for z in &grid {
                    let pt = [x.clone(), y.clone(), z.clone()];
                    if ea.eval(&pt).unwrap() != eb.eval(&pt).unwrap() {
                        all_equal = false;
                    }
                }
            }
        }
        prop_assert_eq!(all_equal, ea == eb);
    }

    #[test]
    fn rational_functions_normalize(a in poly(3, 2), b in poly(3, 2), c in poly(3, 2)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let fa = RationalFunction::from_poly(a.clone());
        let fb = RationalFunction::from_poly(b.clone());
        let fc = RationalFunction::from_poly(c.clone());
        let r = RationalFunction::new(&a * &c, &b * &c).unwrap();
        prop_assert_eq!(&r, &fa.checked_div(&fb).unwrap());
        prop_assert_eq!(&(&r * &fb), &fa);
        prop_assert!(r.denom().leading_coeff().is_one());
        let s = &r + &fc.recip().unwrap();
        prop_assert_eq!(&s - &fc.recip().unwrap(), r);
    }

    #[test]
    fn interior_is_nilpotent_derivation(
        (k, a, b) in (2usize..=5).prop_flat_map(|k| (Just(k), form(k, 2), form(k, 1))),
        comps in prop::collection::vec(poly(5, 2), 5),
    ) {
        let ch = chart(k);
        let v = legpath_symbolic::Vector::new(
            &ch,
            comps[..k]
                .iter()
                .map(|p| {
                    let p = p.compose(&|v| (v as usize >= k).then(Polynomial::zero));
                    Expression::new(&ch, RationalFunction::from_poly(p))
                })
                .collect(),
        )
        .unwrap();
        prop_assert!(a.interior(&v).unwrap().interior(&v).unwrap().is_zero());
        let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
        let rhs = &a.interior(&v).unwrap().wedge(&b).unwrap() + &a.wedge(&b.interior(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn spec_style_examples() {
    let c = Chart::new("jet", &["x1", "x2", "u", "p1", "p2"]).unwrap();
    let theta = parse_form::<Q>(&c, "d(u) - p1*d(x1) - p2*d(x2)").unwrap();
    let expected = parse_form::<Q>(&c, "(d(x1) /\\ d(p1)) + (d(x2) /\\ d(p2))").unwrap();
    assert_eq!(theta.d(), expected);
    assert!(parse_expr::<Q>(&c, "x1/x1").unwrap().is_one());
    assert!(parse_form::<Q>(&c, "d(x1) /\\ d(x1)").unwrap().is_zero());
    assert!(parse_form::<Q>(&c, "d(d(x1*x2*u))").unwrap().is_zero());
    let half = parse_expr::<Q>(&c, "1/2").unwrap();
    assert_eq!(half.as_constant(), Some(q(1, 2)));
}
