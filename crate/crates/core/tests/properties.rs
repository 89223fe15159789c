mod common;

use common::*;
use fibre_descent::frontend::parse_polynomial;
use fibre_descent::groebner::buchberger;
use fibre_descent::poly::{divide, exact_quotient, MonomialOrder, Poly};
use fibre_descent::ratfunc::{multivariate_gcd, RationalFunction};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(seed: u64, p: u64, order: MonomialOrder) -> (ChaCha8Rng, Ring) {
    (ChaCha8Rng::seed_from_u64(seed), ring(field(p), &names("x", 3), order))
}

fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Grevlex)]
}

fn chars() -> impl Strategy<Value = u64> {
    prop_oneof![Just(0u64), Just(2u64), Just(7u64)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_identity(seed: u64, p in chars(), order in orders()) {
        let (mut rng, r) = setup(seed, p, order);
        let f = random_poly(&mut rng, &r, 6, 5, 9);
        let gs: Vec<Poly> = (0..3)
            .map(|_| random_poly(&mut rng, &r, 3, 3, 9))
            .filter(|g| !g.is_zero())
            .collect();
        let (qs, rem) = divide(&f, &gs, order).unwrap();
        let mut sum = rem.clone();
        for (q, g) in qs.iter().zip(&gs) {
            sum = &sum + &(q * g);
        }
        prop_assert_eq!(sum, f);
        for (m, _) in rem.terms() {
            prop_assert!(gs.iter().all(|g| !g.leading_monomial().unwrap().divides(m)));
        }
    }

    #[test]
    fn normal_forms(seed: u64, p in chars(), order in orders()) {
        let (mut rng, r) = setup(seed, p, order);
        let gens: Vec<Poly> = (0..2).map(|_| random_poly(&mut rng, &r, 3, 2, 5)).collect();
        let gb = buchberger(&r, &gens, order).unwrap();
        prop_assert!(gb.s_pairs_reduce_to_zero());
        prop_assert!(gb.is_reduced());
        let f = random_poly(&mut rng, &r, 5, 4, 9);
        let h = random_poly(&mut rng, &r, 3, 2, 9);
        let nf = gb.normal_form(&f).unwrap();
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
            prop_assert_eq!(gb.normal_form(&(&f + &(g * &h))).unwrap(), nf.clone());
        }
    }

    #[test]
    fn gcd_divides_and_contains_common_factor(seed: u64, p in chars()) {
        let (mut rng, r) = setup(seed, p, MonomialOrder::Grevlex);
        let a = random_poly(&mut rng, &r, 3, 3, 5);
        let b = random_poly(&mut rng, &r, 3, 3, 5);
        let c = random_poly(&mut rng, &r, 2, 2, 5);
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (&a * &c, &b * &c);
        let g = multivariate_gcd(&ac, &bc).unwrap();
        prop_assert!(exact_quotient(&ac, &g).is_some());
        prop_assert!(exact_quotient(&bc, &g).is_some());
        prop_assert!(exact_quotient(&g, &c).is_some());
    }

    #[test]
    fn rational_function_field_axioms(seed: u64, p in chars()) {
        let (mut rng, r) = setup(seed, p, MonomialOrder::Grevlex);
        let mut draw = || loop {
            let num = random_poly(&mut rng, &r, 2, 2, 4);
            let den = random_poly(&mut rng, &r, 2, 2, 4);
            if !num.is_zero() && !den.is_zero() {
                break RationalFunction::new(num, den).unwrap();
            }
        };
        let (a, b, c) = (draw(), draw(), draw());
        let sum = |x: &RationalFunction, y: &RationalFunction| x.checked_add(y).unwrap();
        let prod = |x: &RationalFunction, y: &RationalFunction| x.checked_mul(y).unwrap();
        prop_assert!(sum(&sum(&a, &b), &c).cross_equal(&sum(&a, &sum(&b, &c))));
        prop_assert!(prod(&a, &sum(&b, &c)).cross_equal(&sum(&prod(&a, &b), &prod(&a, &c))));
        prop_assert!(prod(&a, &b).cross_equal(&prod(&b, &a)));
        prop_assert!(prod(&a, &a.inv().unwrap()).cross_equal(&RationalFunction::one(&r)));
        prop_assert!(sum(&a, &a.neg()).is_zero());
        prop_assert!(a.checked_div(&b).unwrap().checked_mul(&b).unwrap().cross_equal(&a));
    }

    #[test]
    fn composition_is_a_ring_map(seed: u64, p in chars()) {
        let (mut rng, r) = setup(seed, p, MonomialOrder::Grevlex);
        let images: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, &r, 2, 2, 3)).collect();
        let f = random_poly(&mut rng, &r, 3, 2, 5);
        let g = random_poly(&mut rng, &r, 3, 2, 5);
        let fg = (&f * &g).compose(&images).unwrap();
        prop_assert_eq!(fg, &f.compose(&images).unwrap() * &g.compose(&images).unwrap());
        let s = (&f + &g).compose(&images).unwrap();
        prop_assert_eq!(s, &f.compose(&images).unwrap() + &g.compose(&images).unwrap());
    }

    #[test]
    fn render_parses_back(seed: u64, p in chars(), order in orders()) {
        let (mut rng, r) = setup(seed, p, order);
        let f = random_poly(&mut rng, &r, 6, 5, 50);
        prop_assert_eq!(parse_polynomial(&f.render(), &r).unwrap(), f);
    }
}
