use nonstd_core::expr::{eval_exact, eval_interval, parse, Expr};
use nonstd_core::interval::RatInterval;
use nonstd_core::lc::{LcNumber, LcOrdering};
use nonstd_core::lc_interval::LcInterval;
use nonstd_core::rat::{self, Rat};
use num_traits::{One, Zero};
use proptest::prelude::*;

const T: i64 = 12;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat::ratio(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn lc() -> impl Strategy<Value = LcNumber> {
    prop::collection::vec(((-4i64..=8, 1i64..=2), small_rat()), 0..4).prop_map(|ts| {
        LcNumber::from_terms(ts.into_iter().map(|((n, d), c)| (rat::ratio(n, d), c)), rat::int(T))
    })
}

fn limited_lc() -> impl Strategy<Value = LcNumber> {
    prop::collection::vec(((0i64..=8, 1i64..=2), small_rat()), 0..4).prop_map(|ts| {
        LcNumber::from_terms(ts.into_iter().map(|((n, d), c)| (rat::ratio(n, d), c)), rat::int(T))
    })
}

/// Equality of the parts both numbers know about.
fn same(a: &LcNumber, b: &LcNumber) -> bool {
    let t = rat::min(a.trunc(), b.trunc());
    a.truncated(&t).terms().eq(b.truncated(&t).terms())
}

fn expr_tree() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::x()), small_rat().prop_map(Expr::c)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.div(b)),
            (inner.clone(), -3i64..=4).prop_map(|(a, n)| a.powi(n)),
            inner.clone().prop_map(Expr::sin),
            inner.prop_map(Expr::sqrt),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_associates_and_commutes(x in lc(), y in lc(), z in lc()) {
        prop_assert!(same(&(&(&x + &y) + &z), &(&x + &(&y + &z))));
        prop_assert!(same(&(&x + &y), &(&y + &x)));
    }

    #[test]
    fn multiplication_associates_and_distributes(x in lc(), y in lc(), z in lc()) {
        prop_assert!(same(&(&(&x * &y) * &z), &(&x * &(&y * &z))));
        prop_assert!(same(&(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z))));
    }

    #[test]
    fn inverse_within_truncation(x in lc()) {
        prop_assume!(!x.is_zero());
        let p = &x * &x.inv().unwrap();
        prop_assert!(same(&p, &LcNumber::from_rat(Rat::one())));
    }

    #[test]
    fn order_compatible_with_operations(x in lc(), y in lc(), z in lc()) {
        let o = x.cmp_trunc(&y);
        prop_assert_eq!((&x + &z).cmp_trunc(&(&y + &z)), o);
        if z.signum() > 0 && o != LcOrdering::EqWithinTrunc {
            let zx = &z * &x;
            let zy = &z * &y;
            // the product is known to a shorter order; a strict order survives
            // unless the difference drops below it
            let d = &zy - &zx;
            if !d.is_zero() {
                prop_assert_eq!(zx.cmp_trunc(&zy), o);
            }
        }
        // trichotomy via negation
        let r = y.cmp_trunc(&x);
        let flipped = match o { LcOrdering::Lt => LcOrdering::Gt, LcOrdering::Gt => LcOrdering::Lt, e => e };
        prop_assert_eq!(r, flipped);
    }

    #[test]
    fn standard_part_is_a_homomorphism(x in limited_lc(), y in limited_lc()) {
        let sx = x.standard_part().unwrap();
        let sy = y.standard_part().unwrap();
        prop_assert_eq!((&x + &y).standard_part().unwrap(), &sx + &sy);
        prop_assert_eq!((&x * &y).standard_part().unwrap(), &sx * &sy);
    }

    #[test]
    fn eps_below_every_positive_rational(n in 1i64..10_000, d in 1i64..10_000) {
        let q = LcNumber::from_rat(rat::ratio(n, d));
        let e = LcNumber::eps();
        prop_assert_eq!(LcNumber::zero().cmp_trunc(&e), LcOrdering::Lt);
        prop_assert_eq!(e.cmp_trunc(&q), LcOrdering::Lt);
    }

    #[test]
    fn limited_times_infinitesimal(x in limited_lc(), c in nonzero_rat(), k in 1i64..5) {
        let h = LcNumber::monomial(c, rat::int(k), rat::int(T));
        prop_assert!((&x * &h).is_infinitesimal());
    }

    #[test]
    fn display_round_trip(x in lc()) {
        let s = x.to_string();
        let back = LcNumber::parse_with(&s, x.trunc().clone()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn lc_interval_contains_sums(a in lc(), b in lc(), r in 0i64..5, s in 0i64..5) {
        let ia = LcInterval::new(a.clone(), LcNumber::from_rat(rat::int(r)));
        let ib = LcInterval::new(b.clone(), LcNumber::from_rat(rat::int(s)));
        prop_assert!((&ia + &ib).contains(&(&a + &b)));
        prop_assert!((&ia * &ib).contains(&(&a * &b)));
    }

    #[test]
    fn interval_eval_contains_samples(
        src in prop::sample::select(vec![
            "x^3 - 2*x + 1", "(x^2 + 1)/(x - 7)", "sin(x) * cos(x)", "exp(x/3) - x",
            "abs(x - 1/2) * x", "sqrt(x^2 + 1)", "ln(x^2 + 2)", "x^5/(1 + x^4)",
        ]),
        lo in small_rat(), w in 1i64..40, t in 0i64..=16,
    ) {
        let f: Expr = parse(src).unwrap();
        let hi = &lo + rat::ratio(w, 8);
        let cell = RatInterval::new(lo.clone(), hi.clone());
        let enc = eval_interval(&f, &cell, 64);
        prop_assume!(enc.is_ok());
        let enc = enc.unwrap();
        let x = &lo + (&hi - &lo) * rat::ratio(t, 16);
        let at = eval_interval(&f, &RatInterval::point(x.clone()), 64).unwrap();
        prop_assert!(enc.encloses(&at), "{} on {} misses f({})", src, cell, x);
        if f.is_rational_only() {
            prop_assert!(enc.contains(&eval_exact(&f, &x).unwrap()));
        }
    }

    #[test]
    fn expression_round_trip(f in expr_tree()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}

mod integrals {
    use super::*;
    use nonstd_core::classical::EpsSchedule;
    use nonstd_core::riemann::{classical_integral, darboux_bounds, riemann_sum, Partition};

    fn partition() -> impl Strategy<Value = Partition> {
        (small_rat(), prop::collection::vec(1i64..=8, 1..12)).prop_map(|(a, steps)| {
            let mut pts = vec![a];
            for s in steps {
                let next = pts.last().unwrap() + rat::ratio(s, 8);
                pts.push(next);
            }
            Partition::new(pts).unwrap()
        })
    }

    fn integrand() -> impl Strategy<Value = Expr> {
        prop::sample::select(vec!["x^3 - 2*x", "1/(x^2 + 1)", "abs(x - 1/3)", "(x^2 - x)/(x^4 + 2)", "5"])
            .prop_map(|s| parse(s).unwrap())
    }

    fn enclosure(f: &Expr, a: &Rat, b: &Rat) -> RatInterval {
        let v = classical_integral(f, a, b, &EpsSchedule::decimal(4), 64);
        match (v.value, v.enclosure) {
            (Some(x), _) => RatInterval::point(x),
            (None, Some(e)) => e,
            _ => panic!("no enclosure: {}", v.note),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sums_are_sandwiched(f in integrand(), p in partition()) {
            let s = riemann_sum(&f, &p, 64).unwrap();
            prop_assert!(s.is_point());
            let d = darboux_bounds(&f, &p, 64).unwrap();
            prop_assert!(d.lower <= *s.lo() && *s.hi() <= d.upper);
        }

        #[test]
        fn refinement_tightens(f in integrand(), p in partition()) {
            let d = darboux_bounds(&f, &p, 64).unwrap();
            let r = darboux_bounds(&f, &p.refine(), 64).unwrap();
            prop_assert!(r.lower >= d.lower && r.upper <= d.upper);
        }

        #[test]
        fn integrals_add(f in integrand(), a in small_rat(), w1 in 1i64..16, w2 in 1i64..16) {
            let c = &a + rat::ratio(w1, 4);
            let b = &c + rat::ratio(w2, 4);
            let sum = &enclosure(&f, &a, &c) + &enclosure(&f, &c, &b);
            prop_assert!(sum.intersects(&enclosure(&f, &a, &b)));
        }
    }
}
