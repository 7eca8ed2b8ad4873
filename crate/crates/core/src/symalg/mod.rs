//! Exact multivariate rational functions over the integers.
//!
//! Polynomials keep their terms in decreasing graded lexicographic order and
//! rational functions are always reduced, so structural equality is value
//! equality.

mod gcd;
mod poly;
mod rational;

use thiserror::Error;

pub use gcd::gcd;
pub use poly::{Monomial, Polynomial};
pub use rational::{exchange_step, RationalFunction};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymalgError {
    #[error("division by zero")]
    DivisionByZero,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> RationalFunction {
        RationalFunction::var(n, i)
    }

    fn k(n: usize, c: i64) -> RationalFunction {
        RationalFunction::constant(n, c)
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let a = x(2, 0).div(&x(2, 1)).unwrap();
        let b = x(2, 1).div(&x(2, 0)).unwrap();
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn gcd_is_cancelled() {
        let num = x(1, 0).pow(2).sub(&k(1, 1));
        let den = x(1, 0).sub(&k(1, 1));
        assert_eq!(num.div(&den).unwrap(), x(1, 0).add(&k(1, 1)));
    }

    #[test]
    fn hash_ignores_term_order() {
        use std::collections::hash_map::DefaultHasher;
        use std::hash::{Hash, Hasher};
        let h = |r: &RationalFunction| {
            let mut s = DefaultHasher::new();
            r.hash(&mut s);
            s.finish()
        };
        let a = x(3, 0).add(&x(3, 1)).div(&x(3, 2)).unwrap();
        let b = x(3, 1).add(&x(3, 0)).div(&x(3, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(h(&a), h(&b));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(x(1, 0).div(&k(1, 0)), Err(SymalgError::DivisionByZero));
        assert_eq!(
            RationalFunction::new(Polynomial::one(1), Polynomial::zero(1)),
            Err(SymalgError::DivisionByZero)
        );
    }

    #[test]
    fn denominators_are_sign_normalised() {
        let r = x(2, 0).div(&x(2, 1).neg()).unwrap();
        assert_eq!(r.to_string(), "(-x1)/(x2)");
        assert_eq!(r.den().leading_coefficient(), BigInt::from(1));
    }

    #[test]
    fn exchange_steps() {
        let z = x(1, 0);
        assert_eq!(exchange_step(&z, &[], &[]).unwrap(), k(1, 2).div(&z).unwrap());
        let (z1, z2) = (x(2, 0), x(2, 1));
        let new = exchange_step(&z2, &[&z1], &[]).unwrap();
        assert_eq!(new.to_string(), "(x1 + 1)/(x2)");
        // mutating back restores the old variable
        assert_eq!(exchange_step(&new, &[&z1], &[]).unwrap(), z2);
    }

    #[test]
    fn laurent_checks() {
        let a = x(3, 0).add(&x(3, 1)).div(&x(3, 2)).unwrap();
        assert!(a.is_laurent());
        let b = x(2, 0).add(&k(2, 1)).div(&x(2, 1).add(&k(2, 1))).unwrap();
        assert!(!b.is_laurent());
    }

    #[test]
    fn rendering() {
        let p = x(3, 0).pow(2).add(&x(3, 0).mul(&x(3, 1)).mul(&k(3, 2)));
        assert_eq!(p.div(&x(3, 2)).unwrap().to_string(), "(x1^2 + 2*x1*x2)/(x3)");
        assert_eq!(k(3, -3).to_string(), "-3");
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), -4i64..5), 0..5).prop_map(move |terms| {
            Polynomial::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect())
        })
    }

    fn arb_rf() -> impl Strategy<Value = RationalFunction> {
        (arb_poly(3), arb_poly(3))
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn product_matches_cross_multiplication(a in arb_rf(), b in arb_rf()) {
            let naive = RationalFunction::new(a.num().mul(b.num()), a.den().mul(b.den())).unwrap();
            prop_assert_eq!(a.mul(&b), naive);
        }

        #[test]
        fn normalisation_is_idempotent(a in arb_rf()) {
            let again = RationalFunction::new(a.num().clone(), a.den().clone()).unwrap();
            prop_assert_eq!(&again, &a);
            prop_assert!(a.den().leading_coefficient() > BigInt::from(0));
        }

        #[test]
        fn gcd_divides_both(p in arb_poly(3), q in arb_poly(3), f in arb_poly(3)) {
            let (a, b) = (p.mul(&f), q.mul(&f));
            if a.is_zero() || b.is_zero() {
                return Ok(());
            }
            let g = gcd(&a, &b);
            prop_assert!(a.exact_div(&g).is_some());
            prop_assert!(b.exact_div(&g).is_some());
            prop_assert!(g.exact_div(&f).is_some() || f.is_constant(), "{} does not contain {} (p = {}, q = {})", g, f, p, q);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_rf(), b in arb_rf()) {
            let pt = [BigInt::from(2), BigInt::from(-3), BigInt::from(5)];
            if let (Some(ea), Some(eb), Some(ep)) = (a.eval(&pt), b.eval(&pt), a.mul(&b).eval(&pt)) {
                let n = &ea.0 * &eb.0;
                let d = &ea.1 * &eb.1;
                prop_assert_eq!(n * &ep.1, d * &ep.0);
            }
        }
    }
}
