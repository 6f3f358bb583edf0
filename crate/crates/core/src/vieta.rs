//! Elementary symmetric functions of the r-th powers of zeros, read off the
//! decimated polynomial by Vieta, and the closed-form predictions they are
//! compared against.
//!
//! Every comparison is an exact rational identity. For a polynomial
//! `P(x) = x^s Q(x^r)` the nonzero zeros come in rotation orbits
//! `{z w^k}` with `w = e^{2 pi i / r}`, and the zeros of `Q` are exactly the
//! r-th powers `z^r` of one representative per orbit, so the coefficients of
//! `Q` carry every symmetric function of those powers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{falling_factorial, ExactPolyError, IntPolynomial, Rational};
use crate::rbonacci::{build_recurrence, lucas_identity_check, rnomial, RBonacciError, RBonacciParams};
pub use crate::report::{ReportRow, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VietaError {
    #[error("symmetric functions of the zero polynomial are undefined")]
    ZeroPolynomial,
    #[error("index {j} outside 0..={max}")]
    IndexOutOfRange { j: usize, max: usize },
    #[error("derivative spec does not apply: {0}")]
    InvalidSpec(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Poly(#[from] ExactPolyError),
}

impl From<RBonacciError> for VietaError {
    fn from(e: RBonacciError) -> Self {
        match e {
            RBonacciError::InvalidParams(m) => VietaError::InvalidParams(m),
        }
    }
}

/// Parameterization of the derivative family `R_{rn+p}^{(t)}`, with the
/// order `t = rk - (1-p)(r-1)` derived from the user-facing `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivativeSpec {
    pub r: usize,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    /// derivative order
    pub t: usize,
    /// number of reference zeros, `(r-1)n - k`
    pub eta: usize,
    /// leading coefficient of the derivative, `(r-1)(rn+p-1)` falling `t`
    #[serde(serialize_with = "ser_bigint")]
    pub mu: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl DerivativeSpec {
    /// Index `rn + p` of the underlying polynomial.
    pub fn index(&self) -> usize {
        self.r * self.n + self.p
    }

    /// `(r-1)(rn+p-1)`, the degree of `R_{rn+p}`.
    pub fn base_degree(&self) -> usize {
        (self.r - 1) * (self.index() - 1)
    }

    pub fn params(&self) -> RBonacciParams {
        RBonacciParams::new(self.r, self.index()).expect("validated spec")
    }

    /// `R_{rn+p}^{(t)}`, differentiated formally from the recurrence output
    /// so it shares nothing with the r-nomial predictions.
    pub fn polynomial(&self) -> IntPolynomial {
        build_recurrence(self.params()).formal_derivative(self.t)
    }
}

pub fn derivative_spec(r: usize, n: usize, p: usize, k: usize) -> Result<DerivativeSpec, VietaError> {
    if r < 2 || n < 1 || k < 1 || p >= r {
        return Err(VietaError::InvalidSpec(format!(
            "need r >= 2, n >= 1, 0 <= p <= r-1, k >= 1; got r={r} n={n} p={p} k={k}"
        )));
    }
    let (ri, pi, ki) = (r as i64, p as i64, k as i64);
    let t = ri * ki - (1 - pi) * (ri - 1);
    if t < 1 {
        return Err(VietaError::InvalidSpec(format!("derivative order t={t} is below 1")));
    }
    let eta = (ri - 1) * n as i64 - ki;
    if eta < 1 {
        return Err(VietaError::InvalidSpec(format!(
            "k={k} leaves eta={eta} reference zeros; need k <= {}",
            (r - 1) * n - 1
        )));
    }
    let top = (ri - 1) * ((r * n + p) as i64 - 1);
    Ok(DerivativeSpec {
        r,
        n,
        p,
        k,
        t: t as usize,
        eta: eta as usize,
        mu: falling_factorial(top, t as usize),
    })
}

/// Vieta: `sigma_j = (-1)^j c_{d-j} / c_d` for `j = 0..=d`.
pub fn elementary_symmetric_from_poly(q: &IntPolynomial) -> Result<Vec<Rational>, VietaError> {
    let d = q.degree().ok_or(VietaError::ZeroPolynomial)?;
    let lead = q.leading().expect("nonzero").clone();
    Ok((0..=d)
        .map(|j| {
            let c = Rational::new(q.coeff(d - j), lead.clone());
            if j % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect())
}

fn signed(j: usize, v: Rational) -> Rational {
    if j % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Number of reference zeros of `R_{rn+p}` for `p` in `{0, 1}`.
pub fn theorem12_eta(r: usize, n: usize, p: usize) -> usize {
    (r - 1) * n + p - 1
}

/// Predicted `sigma_j` of the r-th powers of the reference zeros of
/// `R_{rn}` (`p = 0`) or `R_{rn+1}` (`p = 1`):
/// `(-1)^j binom(rn+p-j-1, j)_r`.
pub fn expected_sigma_theorem12(r: usize, n: usize, p: usize, j: usize) -> Result<Rational, VietaError> {
    if r < 2 || n < 1 || p > 1 {
        return Err(VietaError::InvalidParams(format!(
            "need r >= 2, n >= 1, p in {{0, 1}}; got r={r} n={n} p={p}"
        )));
    }
    let max = theorem12_eta(r, n, p);
    if j > max {
        return Err(VietaError::IndexOutOfRange { j, max });
    }
    let upper = (r * n + p) as i64 - j as i64 - 1;
    Ok(signed(j, Rational::from(rnomial(r, upper, j as i64))))
}

/// Falling factorial of length `t` starting at `(r-1)(rn+p-1) - rj`.
fn term_multiplier(spec: &DerivativeSpec, j: usize) -> BigInt {
    let start = spec.base_degree() as i64 - (spec.r * j) as i64;
    falling_factorial(start, spec.t)
}

/// Predicted `sigma_j` for the zeros of `R_{rn+p}^{(t)}`:
/// `(-1)^j [(r-1)(rn+p-1) - rj]_t / mu * binom(rn+p-j-1, j)_r`.
pub fn expected_sigma_theorem4(spec: &DerivativeSpec, j: usize) -> Result<Rational, VietaError> {
    if j > spec.eta {
        return Err(VietaError::IndexOutOfRange { j, max: spec.eta });
    }
    let binom = rnomial(spec.r, spec.index() as i64 - j as i64 - 1, j as i64);
    let value = Rational::new(term_multiplier(spec, j) * binom, spec.mu.clone());
    Ok(signed(j, value))
}

/// `(upsilon, psi)`: product and sum of the r-th powers of the reference
/// zeros, evaluated from their literal closed forms
/// `upsilon = (-1)^eta t! / mu * binom(rn+p-eta-1, eta)_r` and
/// `psi = -[(r-1)(rn+p-1) - r]_t / mu * binom(rn+p-2, 1)_r`.
pub fn upsilon_psi(spec: &DerivativeSpec) -> (Rational, Rational) {
    let idx = spec.index() as i64;
    let eta = spec.eta;
    let t_factorial = falling_factorial(spec.t as i64, spec.t);
    let upsilon = signed(
        eta,
        Rational::new(
            t_factorial * rnomial(spec.r, idx - eta as i64 - 1, eta as i64),
            spec.mu.clone(),
        ),
    );
    let psi = -Rational::new(term_multiplier(spec, 1) * rnomial(spec.r, idx - 2, 1), spec.mu.clone());
    (upsilon, psi)
}

/// Which identity a [`verify`] call checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// symmetric functions of the r-th powers of the zeros of `R_{rn}`
    T1,
    /// same for `R_{rn+1}`
    T2,
    /// same for the derivative `R_{rn+p}^{(t)}`
    T4,
    /// `R_r = x (x^r+1)^{r-2}` and `R_{r+1} = (x^r+1)^{r-1}`
    T8,
    /// `L_n^{(t)} = n F_n^{(t-1)}`
    Lucas,
}

impl Theorem {
    pub fn tag(&self) -> &'static str {
        match self {
            Theorem::T1 => "t1",
            Theorem::T2 => "t2",
            Theorem::T4 => "t4",
            Theorem::T8 => "t8",
            Theorem::Lucas => "lucas",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "t1" | "theorem1" => Ok(Theorem::T1),
            "t2" | "theorem2" => Ok(Theorem::T2),
            "t4" | "theorem4" => Ok(Theorem::T4),
            "t8" | "theorem8" => Ok(Theorem::T8),
            "lucas" => Ok(Theorem::Lucas),
            other => Err(format!("unknown theorem {other:?} (expected t1, t2, t4, t8 or lucas)")),
        }
    }
}

/// Parameters for [`verify`]; which fields are required depends on the
/// theorem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyParams {
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<usize>,
}

fn required(v: Option<usize>, name: &str, theorem: Theorem) -> Result<usize, VietaError> {
    v.ok_or_else(|| VietaError::InvalidParams(format!("{theorem} needs --{name}")))
}

pub fn verify(theorem: Theorem, params: VerifyParams) -> Result<VerificationReport, VietaError> {
    match theorem {
        Theorem::T1 | Theorem::T2 => {
            let r = required(params.r, "r", theorem)?;
            let n = required(params.n, "n", theorem)?;
            verify_theorem12(r, n, if theorem == Theorem::T1 { 0 } else { 1 })
        }
        Theorem::T4 => {
            let spec = derivative_spec(
                required(params.r, "r", theorem)?,
                required(params.n, "n", theorem)?,
                required(params.p, "p", theorem)?,
                required(params.k, "k", theorem)?,
            )?;
            verify_theorem4(&spec)
        }
        Theorem::T8 => verify_theorem8(required(params.r, "r", theorem)?),
        Theorem::Lucas => Ok(lucas_identity_check(
            required(params.n, "n", theorem)?,
            required(params.t, "t", theorem)?,
        )?),
    }
}

/// Compare Vieta on the decimated polynomial with the prediction, index by
/// index. A degree mismatch shows up as rows whose missing side is zero.
fn sigma_rows(
    computed: &[Rational],
    eta: usize,
    mut expected: impl FnMut(usize) -> Result<Rational, VietaError>,
) -> Result<Vec<ReportRow>, VietaError> {
    let len = computed.len().max(eta + 1);
    (0..len)
        .map(|j| {
            let exp = if j <= eta { expected(j)? } else { Rational::zero() };
            let got = computed.get(j).cloned().unwrap_or_else(Rational::zero);
            Ok(ReportRow::new(j, exp, got))
        })
        .collect()
}

fn verify_theorem12(r: usize, n: usize, p: usize) -> Result<VerificationReport, VietaError> {
    let params = RBonacciParams::new(r, r * n + p)?;
    let poly = build_recurrence(params);
    let decimated = poly.decimate(r)?;
    let computed = elementary_symmetric_from_poly(&decimated.base)?;
    let eta = theorem12_eta(r, n, p);
    let mut rows = sigma_rows(&computed, eta, |j| expected_sigma_theorem12(r, n, p, j))?;
    if eta >= 1 {
        // sum of the r-th powers: -binom(rn+p-2, 1)_r
        let corollary = -Rational::from(rnomial(r, (r * n + p) as i64 - 2, 1));
        let got = computed.get(1).cloned().unwrap_or_else(Rational::zero);
        rows.push(ReportRow::new(1, corollary, got).labeled("power sum"));
    }
    let tag = if p == 0 { "t1" } else { "t2" };
    Ok(VerificationReport::new(tag, &[("r", r as i64), ("n", n as i64)], rows))
}

pub fn verify_theorem4(spec: &DerivativeSpec) -> Result<VerificationReport, VietaError> {
    let poly = spec.polynomial();
    let decimated = poly.decimate(spec.r)?;
    let computed = elementary_symmetric_from_poly(&decimated.base)?;
    let mut rows = sigma_rows(&computed, spec.eta, |j| expected_sigma_theorem4(spec, j))?;
    let (upsilon, psi) = upsilon_psi(spec);
    let at = |j: usize| computed.get(j).cloned().unwrap_or_else(Rational::zero);
    rows.push(ReportRow::new(1, psi, at(1)).labeled("power sum"));
    rows.push(ReportRow::new(spec.eta, upsilon, at(spec.eta)).labeled("power product"));
    // the whole derivative is a polynomial in x^r
    rows.push(ReportRow::new(0, Rational::zero(), Rational::from(BigInt::from(decimated.shift))).labeled("shift"));
    Ok(VerificationReport::new(
        "t4",
        &[
            ("r", spec.r as i64),
            ("n", spec.n as i64),
            ("p", spec.p as i64),
            ("k", spec.k as i64),
            ("t", spec.t as i64),
        ],
        rows,
    ))
}

/// `R_r = x (x^r + 1)^{r-2}` and `R_{r+1} = (x^r + 1)^{r-1}`, compared
/// coefficient by coefficient against the recurrence. Both force every
/// reference zero onto `x^r = -1`.
pub fn verify_theorem8(r: usize) -> Result<VerificationReport, VietaError> {
    if r < 2 {
        return Err(VietaError::InvalidParams(format!("r must be at least 2, got {r}")));
    }
    let star = &IntPolynomial::x_pow(r) + &IntPolynomial::one();
    let cases = [
        ("R_r", r, star.pow(r as u32 - 2).shift(1)),
        ("R_{r+1}", r + 1, star.pow(r as u32 - 1)),
    ];
    let mut rows = Vec::new();
    for (label, index, expected) in cases {
        let built = build_recurrence(RBonacciParams::new(r, index)?);
        let len = built.coeffs().len().max(expected.coeffs().len());
        rows.extend((0..len).map(|e| {
            ReportRow::new(e, Rational::from(expected.coeff(e)), Rational::from(built.coeff(e))).labeled(label)
        }));
    }
    Ok(VerificationReport::new("t8", &[("r", r as i64)], rows))
}

/// `sigma_0` is one for any nonzero polynomial.
pub fn sigma_zero_is_one(sigma: &[Rational]) -> bool {
    sigma.first().is_some_and(One::is_one)
}
