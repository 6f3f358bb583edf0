use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use rbonacci_zeros::exactpoly::{falling_factorial, rational_to_f64, IntPolynomial, Rational};
use rbonacci_zeros::rbonacci::{
    build_closed_form, build_derivative_closed_form, build_recurrence, fibonacci, lucas_identity_check, rnomial,
    RBonacciParams,
};
use rbonacci_zeros::vieta::{
    derivative_spec, elementary_symmetric_from_poly, expected_sigma_theorem4, upsilon_psi, verify_theorem8,
};

fn big_coeff() -> impl Strategy<Value = BigInt> {
    (any::<i128>(), any::<bool>()).prop_map(|(v, neg)| {
        let b = BigInt::from(v);
        if neg {
            -b
        } else {
            b
        }
    })
}

fn poly(max_degree: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(big_coeff(), 0..=max_degree + 1).prop_map(IntPolynomial::new)
}

fn small_poly(max_degree: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-9i64..=9, 1..=max_degree + 1).prop_map(|c| IntPolynomial::from_i64s(&c))
}

fn params() -> impl Strategy<Value = RBonacciParams> {
    (2usize..=6, 1usize..=24).prop_map(|(r, n)| RBonacciParams::new(r, n).unwrap())
}

/// Every way to pick `n` digits from `0..r` summing to `j`.
fn rnomial_by_enumeration(r: usize, n: usize, j: usize) -> BigInt {
    fn go(r: usize, left: usize, j: usize) -> u64 {
        if left == 0 {
            return u64::from(j == 0);
        }
        (0..r.min(j + 1)).map(|d| go(r, left - 1, j - d)).sum()
    }
    BigInt::from(go(r, n, j))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly(30), b in poly(30), c in poly(30)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, IntPolynomial::zero());
        prop_assert_eq!(&a * &IntPolynomial::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn degree_of_product(a in poly(30), b in poly(30)) {
        let prod = &a * &b;
        match (a.degree(), b.degree()) {
            (Some(x), Some(y)) => prop_assert_eq!(prod.degree(), Some(x + y)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn derivatives_compose(a in poly(25), s in 0usize..=10, t in 0usize..=10) {
        prop_assert_eq!(a.formal_derivative(s).formal_derivative(t), a.formal_derivative(s + t));
    }

    #[test]
    fn derivative_is_linear_and_leibniz(a in small_poly(12), b in small_poly(12)) {
        prop_assert_eq!((&a + &b).formal_derivative(1), &a.formal_derivative(1) + &b.formal_derivative(1));
        prop_assert_eq!(
            (&a * &b).formal_derivative(1),
            &(&a.formal_derivative(1) * &b) + &(&a * &b.formal_derivative(1))
        );
    }

    #[test]
    fn decimate_then_reconstruct(g in small_poly(8), r in 2usize..=6, s in 0usize..=5) {
        prop_assume!(!g.is_zero());
        let s = s % r;
        // x^s g(x^r)
        let spread: Vec<BigInt> = g
            .coeffs()
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                let mut chunk = vec![BigInt::zero(); if i == 0 { 1 } else { r }];
                *chunk.last_mut().unwrap() = c.clone();
                chunk
            })
            .collect();
        let p = IntPolynomial::new(spread).shift(s);
        let dec = p.decimate(r).unwrap();
        prop_assert_eq!(dec.reconstruct(), p);
    }

    #[test]
    fn square_free_factors_divide(a in small_poly(4), b in small_poly(3), e in 1u32..=3) {
        let p = &a * &b.pow(e);
        prop_assume!(p.degree().is_some_and(|d| d >= 1));
        let parts = p.square_free_decomposition().unwrap();
        let mut rebuilt = IntPolynomial::one();
        for (factor, mult) in &parts {
            prop_assert!(p.div_exact(factor).is_ok());
            let dfactor = factor.formal_derivative(1);
            prop_assert_eq!(factor.gcd(&dfactor).degree(), Some(0));
            rebuilt = &rebuilt * &factor.pow(*mult as u32);
        }
        // equal up to the content and sign that the decomposition drops
        prop_assert_eq!(rebuilt.degree(), p.degree());
        prop_assert!(p.div_exact(&rebuilt).is_ok());
    }

    #[test]
    fn eval_matches_rational_evaluation(a in small_poly(20), xr in -200i64..=200) {
        prop_assume!(!a.is_zero());
        let x = Rational::new(BigInt::from(xr), BigInt::from(64));
        let exact = rational_to_f64(&a.eval_rational(&x)) / rational_to_f64(&Rational::from(a.leading().unwrap().clone()));
        let approx = a.eval(Complex64::new(xr as f64 / 64.0, 0.0));
        prop_assert!((approx.re - exact).abs() <= 1e-12 * exact.abs().max(1.0));
        prop_assert_eq!(approx.im, 0.0);
    }

    #[test]
    fn recurrence_equals_closed_form(p in params()) {
        prop_assert_eq!(build_recurrence(p), build_closed_form(p));
    }

    #[test]
    fn degree_and_support(p in params()) {
        let poly = build_recurrence(p);
        let d = (p.r() - 1) * (p.n() - 1);
        prop_assert_eq!(poly.degree(), Some(d));
        prop_assert!(poly.leading().unwrap().is_one());
        prop_assert!(poly.support().all(|e| e % p.r() == d % p.r()));
        let nonneg = poly.coeffs().iter().all(|c| *c >= BigInt::zero());
        prop_assert!(nonneg);
    }

    #[test]
    fn derivative_closed_form_agrees(p in params(), t in 0usize..=12) {
        prop_assert_eq!(build_recurrence(p).formal_derivative(t), build_derivative_closed_form(p, t));
    }

    #[test]
    fn rnomial_row_laws(r in 2usize..=6, n in 0usize..=12) {
        let top = (r - 1) * n;
        let row: Vec<BigInt> = (0..=top as i64).map(|j| rnomial(r, n as i64, j)).collect();
        for j in 0..=top {
            prop_assert_eq!(&row[j], &row[top - j]);
        }
        prop_assert_eq!(row.iter().sum::<BigInt>(), BigInt::from(r).pow(n as u32));
        prop_assert!(rnomial(r, n as i64, top as i64 + 1).is_zero());
        prop_assert!(rnomial(r, n as i64, -1).is_zero());
        if n >= 1 {
            for j in 0..=top as i64 {
                let pascal: BigInt = (0..r as i64).map(|i| rnomial(r, n as i64 - 1, j - i)).sum();
                prop_assert_eq!(&row[j as usize], &pascal);
            }
        }
    }

    #[test]
    fn rnomial_counts_digit_tuples(r in 2usize..=5, n in 0usize..=7, j in 0usize..=20) {
        prop_assert_eq!(rnomial(r, n as i64, j as i64), rnomial_by_enumeration(r, n, j));
    }

    #[test]
    fn lucas_identity(n in 1usize..=20, t in 1usize..=10) {
        prop_assert!(lucas_identity_check(n, t).unwrap().pass);
    }

    #[test]
    fn n1_factorizations(r in 2usize..=8) {
        prop_assert!(verify_theorem8(r).unwrap().pass);
    }

    #[test]
    fn consistency_triangle(r in 2usize..=5, n in 1usize..=6, p in 0usize..=4, k in 1usize..=20) {
        prop_assume!(p < r);
        let Ok(spec) = derivative_spec(r, n, p, k) else { return Ok(()); };
        let (upsilon, psi) = upsilon_psi(&spec);
        prop_assert_eq!(expected_sigma_theorem4(&spec, 1).unwrap(), psi.clone());
        prop_assert_eq!(expected_sigma_theorem4(&spec, spec.eta).unwrap(), upsilon.clone());
        prop_assert!(expected_sigma_theorem4(&spec, 0).unwrap().is_one());
        if spec.eta == 1 {
            prop_assert_eq!(&upsilon, &psi);
        }
        // derivative is mu x^(r eta) + ... with no zero root
        let d = spec.polynomial();
        prop_assert_eq!(d.degree(), Some(r * spec.eta));
        prop_assert_eq!(d.leading().unwrap(), &spec.mu);
        prop_assert_eq!(d.zero_root_multiplicity(), 0);
        let sigma = elementary_symmetric_from_poly(&d.decimate(r).unwrap().base).unwrap();
        prop_assert_eq!(&sigma[1], &psi);
    }

    #[test]
    fn falling_factorial_recurrence(m in -30i64..=30, t in 0usize..=12) {
        prop_assert_eq!(falling_factorial(m, t + 1), falling_factorial(m, t) * BigInt::from(m - t as i64));
    }
}

#[test]
fn fibonacci_is_the_r2_family() {
    let f: Vec<String> = (1..=6).map(|n| fibonacci(n).unwrap().to_string()).collect();
    assert_eq!(
        f,
        ["1", "x", "x^2 + 1", "x^3 + 2x", "x^4 + 3x^2 + 1", "x^5 + 4x^3 + 3x"]
    );
}
