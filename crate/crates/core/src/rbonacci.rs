//! R-Bonacci polynomials built two independent ways (recurrence and
//! r-nomial closed form), their closed-form derivatives, and the Lucas
//! family used for the r = 2 derivative identity.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactpoly::{falling_factorial, IntPolynomial, Rational};
use crate::report::{ReportRow, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RBonacciError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Order `r >= 2` and index `n >= 1` of `R_n(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RBonacciParams {
    r: usize,
    n: usize,
}

impl RBonacciParams {
    pub fn new(r: usize, n: usize) -> Result<Self, RBonacciError> {
        if r < 2 {
            return Err(RBonacciError::InvalidParams(format!("r must be at least 2, got {r}")));
        }
        if n < 1 {
            return Err(RBonacciError::InvalidParams(format!("n must be at least 1, got {n}")));
        }
        Ok(RBonacciParams { r, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(r-1)(n-1)`
    pub fn degree(&self) -> usize {
        (self.r - 1) * (self.n - 1)
    }
}

/// Rows of `(1 + x + ... + x^(r-1))^n`, grown on demand and shared between
/// threads.
#[derive(Debug)]
pub struct RnomialTable {
    r: usize,
    rows: RwLock<Vec<Arc<Vec<BigInt>>>>,
}

impl RnomialTable {
    pub fn new(r: usize) -> Self {
        assert!(r >= 2);
        RnomialTable {
            r,
            rows: RwLock::new(vec![Arc::new(vec![BigInt::one()])]),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Row `n`, length `n(r-1) + 1`.
    pub fn row(&self, n: usize) -> Arc<Vec<BigInt>> {
        if let Some(row) = self.rows.read().expect("rnomial cache poisoned").get(n) {
            return Arc::clone(row);
        }
        let mut rows = self.rows.write().expect("rnomial cache poisoned");
        while rows.len() <= n {
            let next = convolve_window(rows.last().expect("row 0 present"), self.r);
            rows.push(Arc::new(next));
        }
        Arc::clone(&rows[n])
    }

    /// Coefficient of `x^j` in row `n`; zero outside `0..=n(r-1)`.
    pub fn get(&self, n: usize, j: i64) -> BigInt {
        if j < 0 || j as usize > n * (self.r - 1) {
            return BigInt::zero();
        }
        self.row(n)[j as usize].clone()
    }
}

/// Multiply a row by `1 + x + ... + x^(r-1)` using a running window sum.
fn convolve_window(prev: &[BigInt], r: usize) -> Vec<BigInt> {
    let len = prev.len() + r - 1;
    let mut out = Vec::with_capacity(len);
    let mut window = BigInt::zero();
    for j in 0..len {
        if j < prev.len() {
            window += &prev[j];
        }
        if j >= r && j - r < prev.len() {
            window -= &prev[j - r];
        }
        out.push(window.clone());
    }
    out
}

/// Shared table for order `r`.
pub fn rnomial_table(r: usize) -> Arc<RnomialTable> {
    static TABLES: OnceLock<RwLock<HashMap<usize, Arc<RnomialTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.read().expect("rnomial registry poisoned").get(&r) {
        return Arc::clone(t);
    }
    let mut guard = tables.write().expect("rnomial registry poisoned");
    Arc::clone(guard.entry(r).or_insert_with(|| Arc::new(RnomialTable::new(r))))
}

/// r-nomial coefficient: the coefficient of `x^j` in `(1 + x + ... + x^(r-1))^n`.
/// A negative `n` or out-of-range `j` gives zero.
pub fn rnomial(r: usize, n: i64, j: i64) -> BigInt {
    assert!(r >= 2, "r-nomial order must be at least 2");
    if n < 0 {
        return BigInt::zero();
    }
    rnomial_table(r).get(n as usize, j)
}

/// `R_n(x)` from the order-`r` recurrence
/// `R_{m} = x^{r-1} R_{m-1} + x^{r-2} R_{m-2} + ... + R_{m-r}`,
/// seeded with `R_{2-r} = ... = R_0 = 0` and `R_1 = 1`. Only the last `r`
/// terms are kept.
pub fn build_recurrence(params: RBonacciParams) -> IntPolynomial {
    let r = params.r;
    let mut window: VecDeque<IntPolynomial> = std::iter::repeat_with(IntPolynomial::zero)
        .take(r - 1)
        .chain(std::iter::once(IntPolynomial::one()))
        .collect();
    for _ in 1..params.n {
        // window[i] = R_{m-r+i}, multiplied by x^i
        let next = window
            .iter()
            .enumerate()
            .fold(IntPolynomial::zero(), |acc, (i, poly)| &acc + &poly.shift(i));
        window.pop_front();
        window.push_back(next);
    }
    window.pop_back().expect("window is non-empty")
}

fn closed_form_terms(params: RBonacciParams) -> impl Iterator<Item = (usize, BigInt)> {
    let RBonacciParams { r, n } = params;
    let top = params.degree();
    (0..=top / r).map(move |j| {
        let c = rnomial(r, n as i64 - j as i64 - 1, j as i64);
        (top - r * j, c)
    })
}

/// `R_n(x) = sum_j binom(n-j-1, j)_r x^((r-1)(n-1) - rj)`.
pub fn build_closed_form(params: RBonacciParams) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); params.degree() + 1];
    for (e, c) in closed_form_terms(params) {
        coeffs[e] = c;
    }
    IntPolynomial::new(coeffs)
}

/// `R_n^(t)(x)` straight from the closed form: each term gains the falling
/// factorial of its exponent; terms whose exponent is below `t` vanish.
pub fn build_derivative_closed_form(params: RBonacciParams, t: usize) -> IntPolynomial {
    let top = params.degree();
    if t > top {
        return IntPolynomial::zero();
    }
    let mut coeffs = vec![BigInt::zero(); top - t + 1];
    for (e, c) in closed_form_terms(params) {
        if e >= t {
            coeffs[e - t] = c * falling_factorial(e as i64, t);
        }
    }
    IntPolynomial::new(coeffs)
}

/// Fibonacci polynomial `F_n`, the `r = 2` member.
pub fn fibonacci(n: usize) -> Result<IntPolynomial, RBonacciError> {
    Ok(build_recurrence(RBonacciParams::new(2, n)?))
}

/// Lucas polynomial: `L_0 = 2`, `L_1 = x`, `L_{m+1} = x L_m + L_{m-1}`.
pub fn lucas(n: usize) -> IntPolynomial {
    let mut prev = IntPolynomial::constant(BigInt::from(2));
    let mut cur = IntPolynomial::x_pow(1);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = &cur.shift(1) + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Checks `L_n^(t) = n F_n^(t-1)` coefficient by coefficient.
pub fn lucas_identity_check(n: usize, t: usize) -> Result<VerificationReport, RBonacciError> {
    if n < 1 || t < 1 {
        return Err(RBonacciError::InvalidParams(format!(
            "lucas identity needs n >= 1 and t >= 1, got n={n} t={t}"
        )));
    }
    let lhs = lucas(n).formal_derivative(t);
    let rhs = fibonacci(n)?.formal_derivative(t - 1).scale(&BigInt::from(n));
    let len = lhs.coeffs().len().max(rhs.coeffs().len());
    let rows = (0..len)
        .map(|e| ReportRow::new(e, Rational::from(rhs.coeff(e)), Rational::from(lhs.coeff(e))))
        .collect::<Vec<_>>();
    // both sides vanish: record the agreement explicitly
    let rows = if rows.is_empty() {
        vec![ReportRow::new(0, Rational::zero(), Rational::zero()).labeled("zero polynomial")]
    } else {
        rows
    };
    Ok(VerificationReport::new(
        "lucas",
        &[("n", n as i64), ("t", t as i64)],
        rows,
    ))
}
