//! Dense univariate polynomials over arbitrary-precision integers.
//!
//! Everything in this module is exact. The only place floating point shows
//! up is [`IntPolynomial::eval`], which evaluates exactly at the dyadic
//! point given by the `f64` components and rounds once at the end.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact ratio of arbitrary-precision integers, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactPolyError {
    #[error("exponents {first} and {second} fall in different residue classes mod {r}")]
    MixedResidue { r: usize, first: usize, second: usize },
    #[error("division is not exact over the integers")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
}

/// Dense polynomial with `BigInt` coefficients; `coeffs[i]` multiplies `x^i`.
///
/// The representation is canonical: the highest stored coefficient is
/// nonzero, and the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^e`
    pub fn monomial(c: BigInt, e: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = c;
        IntPolynomial { coeffs }
    }

    pub fn x_pow(e: usize) -> Self {
        Self::monomial(BigInt::one(), e)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` stands for the degree of the zero polynomial (−∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    /// Multiplicity of the root at zero (lowest exponent present).
    pub fn zero_root_multiplicity(&self) -> usize {
        self.support().next().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^e`.
    pub fn shift(&self, e: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// Divide by `x^e`, dropping terms below `x^e`.
    pub fn unshift(&self, e: usize) -> Self {
        Self::new(self.coeffs.iter().skip(e).cloned().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The `t`-th formal derivative. The coefficient of `x^(e-t)` is
    /// `e(e-1)...(e-t+1)` times the coefficient of `x^e`.
    pub fn formal_derivative(&self, t: usize) -> Self {
        if t == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= t {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(t)
            .map(|(e, c)| c * falling_factorial(e as i64, t))
            .collect();
        Self::new(coeffs)
    }

    /// Non-negative gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        }
    }

    /// Exact quotient `self / divisor` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, ExactPolyError> {
        let (q, r) = self.div_rem_exact_lead(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ExactPolyError::InexactDivision)
        }
    }

    fn div_rem_exact_lead(&self, divisor: &Self) -> Result<(Self, Self), ExactPolyError> {
        let dd = divisor.degree().ok_or(ExactPolyError::DivisionByZero)?;
        let lead = divisor.leading().expect("nonzero divisor");
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(ExactPolyError::InexactDivision);
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Pseudo-remainder: `lc(b)^m * a mod b` for some `m`, computed without
    /// leaving `Z[x]`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("nonzero divisor");
        let lb = b.leading().expect("nonzero divisor");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().expect("nonzero").clone();
            let g = lr.gcd(lb);
            let scale_r = lb / &g;
            let scale_b = &lr / &g;
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &scale_r).collect();
            for (j, c) in b.coeffs.iter().enumerate() {
                coeffs[dr - db + j] -= c * &scale_b;
            }
            r = Self::new(coeffs);
        }
        r
    }

    /// Greatest common divisor in `Z[x]`, normalized to a positive leading
    /// coefficient. Primitive remainder sequence; no floating point.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized_sign();
        }
        if other.is_zero() {
            return self.normalized_sign();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&content)
    }

    fn normalized_sign(&self) -> Self {
        if self.leading().is_some_and(Signed::is_negative) {
            -self
        } else {
            self.clone()
        }
    }

    /// `P / gcd(P, P')`, primitive: same distinct roots, each simple.
    pub fn square_free_part(&self) -> Result<Self, ExactPolyError> {
        if self.is_zero() {
            return Err(ExactPolyError::ZeroPolynomial);
        }
        let p = self.primitive_part();
        if p.degree() == Some(0) {
            return Ok(Self::one());
        }
        let g = p.gcd(&p.formal_derivative(1)).primitive_part();
        Ok(p.div_exact(&g)?.primitive_part())
    }

    /// Yun's square-free decomposition of the primitive part:
    /// `primitive(P) = prod a_i^i` with each `a_i` square-free and pairwise
    /// coprime. Returns the nonconstant factors as `(a_i, i)`.
    pub fn square_free_decomposition(&self) -> Result<Vec<(Self, usize)>, ExactPolyError> {
        if self.is_zero() {
            return Err(ExactPolyError::ZeroPolynomial);
        }
        let a = self.primitive_part();
        if a.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let b = a.formal_derivative(1);
        let c = a.gcd(&b).primitive_part();
        let mut w = a.div_exact(&c)?;
        let mut y = b.div_exact(&c)?;
        let mut z = &y - &w.formal_derivative(1);
        let mut out = Vec::new();
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let g = w.gcd(&z).primitive_part();
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            w = w.div_exact(&g)?;
            y = z.div_exact(&g)?;
            z = &y - &w.formal_derivative(1);
            i += 1;
        }
        Ok(out)
    }

    /// Write `P(x) = x^s * Q(x^r)`. Fails when the nonzero exponents do not
    /// share a single residue class mod `r`.
    pub fn decimate(&self, r: usize) -> Result<DecimatedForm, ExactPolyError> {
        assert!(r >= 2, "decimation modulus must be at least 2");
        let mut support = self.support();
        let Some(first) = support.next() else {
            return Ok(DecimatedForm {
                shift: 0,
                base: Self::zero(),
                modulus: r,
            });
        };
        let shift = first % r;
        if let Some(second) = support.find(|e| e % r != shift) {
            return Err(ExactPolyError::MixedResidue { r, first, second });
        }
        let top = self.degree().expect("nonzero");
        let base = (shift..=top).step_by(r).map(|e| self.coeffs[e].clone()).collect();
        Ok(DecimatedForm {
            shift,
            base: Self::new(base),
            modulus: r,
        })
    }

    /// `P(z)` evaluated exactly at the dyadic point `z` and returned as a
    /// wide-exponent value, so huge or tiny magnitudes survive.
    pub fn eval_wide(&self, z: Complex64) -> WideComplex {
        let Some(d) = self.degree() else {
            return WideComplex::ZERO;
        };
        let (zr, zi, shift) = dyadic_gaussian(z);
        // Horner on (zr + i zi) / 2^shift, scaled by 2^(shift*d)
        let mut re = self.coeffs[d].clone();
        let mut im = BigInt::zero();
        for k in (0..d).rev() {
            let nre = &re * &zr - &im * &zi;
            let nim = &re * &zi + &im * &zr;
            re = nre + (&self.coeffs[k] << (shift * (d - k)));
            im = nim;
        }
        WideComplex::from_scaled(&re, &im, -((shift * d) as i64))
    }

    /// `P(z)` with relative error below `2^-50`.
    ///
    /// Horner runs in fixed point with `frac` fractional bits; every
    /// truncation loses at most one unit per component, so the accumulated
    /// error is bounded by `sqrt(2) 2^-frac sum_{k<d} |z|^k`. The precision
    /// doubles until the value clears that bound, and the exact path takes
    /// over once fixed point would be no cheaper.
    pub fn eval_accurate(&self, z: Complex64) -> WideComplex {
        let Some(d) = self.degree() else {
            return WideComplex::ZERO;
        };
        let (zr, zi, shift) = dyadic_gaussian(z);
        if shift == 0 || d == 0 {
            return self.eval_wide(z);
        }
        let growth = (d as f64).log2() + ((d - 1) as f64 * z.norm().log2()).max(0.0);
        let mut frac = 128usize;
        while frac < shift * d {
            let mut re = &self.coeffs[d] << frac;
            let mut im = BigInt::zero();
            for k in (0..d).rev() {
                let nre = (&re * &zr - &im * &zi) >> shift;
                let nim = (&re * &zi + &im * &zr) >> shift;
                re = nre + (&self.coeffs[k] << frac);
                im = nim;
            }
            let value = WideComplex::from_scaled(&re, &im, -(frac as i64));
            let err_log2 = 0.5 - frac as f64 + growth;
            let margin = value.abs_log2() - err_log2;
            if margin >= 50.0 {
                return value;
            }
            let extra = if margin.is_finite() {
                (60.0 - margin) as usize
            } else {
                frac
            };
            frac += extra.max(frac / 2);
        }
        self.eval_wide(z)
    }

    /// `P(z) / lc(P)`, rounded once to `f64`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self.leading() {
            None => Complex64::new(0.0, 0.0),
            Some(lead) => self.eval_wide(z).div_big(lead).to_complex(),
        }
    }

    /// Exact rational evaluation at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from(c.clone()))
    }

    /// Coefficients divided by the leading coefficient, rounded to `f64`.
    /// Entries that exceed the `f64` range come back infinite.
    pub fn monic_f64(&self) -> Vec<f64> {
        let Some(lead) = self.leading() else {
            return Vec::new();
        };
        self.coeffs.iter().map(|c| ratio_to_f64(c, lead)).collect()
    }
}

/// `m (m-1) ... (m-t+1)`, the empty product when `t == 0`.
pub fn falling_factorial(m: i64, t: usize) -> BigInt {
    (0..t as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(m - i))
}

/// `x^s * Q(x^r)` with `0 <= s < r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimatedForm {
    pub shift: usize,
    pub base: IntPolynomial,
    pub modulus: usize,
}

impl DecimatedForm {
    pub fn reconstruct(&self) -> IntPolynomial {
        let mut coeffs = Vec::new();
        for (i, c) in self.base.coeffs().iter().enumerate() {
            let e = self.shift + i * self.modulus;
            coeffs.resize(e + 1, BigInt::zero());
            coeffs[e] = c.clone();
        }
        IntPolynomial::new(coeffs)
    }
}

/// Complex value `(re + i im) * 2^exp` with `f64` mantissas and an unbounded
/// exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WideComplex {
    pub re: f64,
    pub im: f64,
    pub exp: i64,
}

impl WideComplex {
    pub const ZERO: WideComplex = WideComplex {
        re: 0.0,
        im: 0.0,
        exp: 0,
    };

    fn from_scaled(re: &BigInt, im: &BigInt, exp: i64) -> Self {
        let bits = re.bits().max(im.bits()) as i64;
        let drop = (bits - 64).max(0);
        WideComplex {
            re: shr_to_f64(re, drop),
            im: shr_to_f64(im, drop),
            exp: exp + drop,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// `log2 |self|`, `-inf` for zero.
    pub fn abs_log2(&self) -> f64 {
        self.re.hypot(self.im).log2() + self.exp as f64
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ldexp(self.re, self.exp), ldexp(self.im, self.exp))
    }

    fn div_big(&self, d: &BigInt) -> WideComplex {
        let bits = d.bits() as i64;
        let drop = (bits - 64).max(0);
        let dm = shr_to_f64(d, drop);
        WideComplex {
            re: self.re / dm,
            im: self.im / dm,
            exp: self.exp - drop,
        }
    }

    /// `self / other`, rounded to `f64`.
    pub fn ratio(&self, other: &WideComplex) -> Complex64 {
        let a = Complex64::new(self.re, self.im);
        let b = Complex64::new(other.re, other.im);
        let q = a / b;
        let e = self.exp - other.exp;
        Complex64::new(ldexp(q.re, e), ldexp(q.im, e))
    }
}

fn shr_to_f64(x: &BigInt, drop: i64) -> f64 {
    if drop == 0 {
        x.to_f64().unwrap_or(0.0)
    } else {
        // truncation toward zero keeps the sign symmetric
        let mag = x.magnitude() >> drop as usize;
        let v = mag.to_f64().unwrap_or(0.0);
        if x.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }
}

/// `x * 2^e` without intermediate overflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// `log2 |x|`, `-inf` for zero.
pub fn bigint_log2(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let drop = (x.bits() as i64 - 64).max(0);
    shr_to_f64(x, drop).abs().log2() + drop as f64
}

/// `n / d` rounded to `f64`, tolerant of operands far outside `f64` range.
pub fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let nd = (n.bits() as i64 - 64).max(0);
    let dd = (d.bits() as i64 - 64).max(0);
    ldexp(shr_to_f64(n, nd) / shr_to_f64(d, dd), nd - dd)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    ratio_to_f64(q.numer(), q.denom())
}

/// Split an `f64` into `(mantissa, exponent)` with `x = m * 2^e` exactly.
fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (m, e) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1i64 << 52), raw_exp - 1075)
    };
    (BigInt::from(sign * m), e)
}

/// Gaussian integer `(a, b)` and `s >= 0` with `z = (a + ib) / 2^s`.
fn dyadic_gaussian(z: Complex64) -> (BigInt, BigInt, usize) {
    let (mr, er) = decompose(z.re);
    let (mi, ei) = decompose(z.im);
    let common = match (mr.is_zero(), mi.is_zero()) {
        (true, true) => 0,
        (true, false) => ei,
        (false, true) => er,
        (false, false) => er.min(ei),
    };
    let lift = |m: BigInt, e: i64| -> BigInt {
        if m.is_zero() {
            m
        } else {
            m << (e - common) as usize
        }
    };
    let (a, b) = (lift(mr, er), lift(mi, ei));
    if common >= 0 {
        (a << common as usize, b << common as usize, 0)
    } else {
        (a, b, (-common) as usize)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        IntPolynomial::new(coeffs)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPolynomial::new(coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub fn add(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    p + q
}

pub fn mul(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    p * q
}

/// Human form: `c_d x^d + ... + c_0`, unit coefficients elided.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if e == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

impl PartialOrd for IntPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for IntPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// `num/den`, always with an explicit denominator.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn add_cancels_to_canonical_form() {
        assert_eq!(&p(&[1, 0, 1]) + &p(&[-1, 0, 1]), p(&[0, 0, 2]));
        assert_eq!(&p(&[1, 0, 1]) + &p(&[-1, 0, -1]), IntPolynomial::zero());
        assert_eq!(&p(&[3, 4]) + &IntPolynomial::zero(), p(&[3, 4]));
    }

    #[test]
    fn add_reproduces_q4_unrolling() {
        // x^3 (x^6 + x^2) + x^2 * x^3 + x = x^9 + 2x^5 + x
        let lhs = &(&p(&[0, 0, 1, 0, 0, 0, 1]).shift(3) + &p(&[0, 0, 0, 0, 0, 1])) + &p(&[0, 1]);
        assert_eq!(lhs, p(&[0, 1, 0, 0, 0, 2, 0, 0, 0, 1]));
    }

    #[test]
    fn mul_examples() {
        let x5p1 = p(&[1, 0, 0, 0, 0, 1]);
        let expected = p(&[1, 0, 0, 0, 0, 4, 0, 0, 0, 0, 6, 0, 0, 0, 0, 4, 0, 0, 0, 0, 1]);
        assert_eq!(x5p1.pow(4), expected);
        assert_eq!(&x5p1 * &IntPolynomial::one(), x5p1);
        assert_eq!(p(&[1, 1, 1]).pow(2), p(&[1, 2, 3, 2, 1]));
    }

    #[test]
    fn derivative_examples() {
        let t6 = p(&[0, 2, 0, 0, 6, 0, 0, 4, 0, 0, 1]);
        assert_eq!(t6.formal_derivative(4), p(&[144, 0, 0, 3360, 0, 0, 5040]));
        assert_eq!(t6.formal_derivative(0), t6);
        assert_eq!(p(&[1, 0, 3, 0, 1]).formal_derivative(1), p(&[0, 6, 0, 4]));
        assert!(t6.formal_derivative(11).is_zero());
        assert!(IntPolynomial::zero().formal_derivative(2).is_zero());
    }

    #[test]
    fn eval_examples() {
        let z = p(&[0, 1, 0, 0, 1]).eval(Complex64::new(0.0, 0.0));
        assert_eq!(z, Complex64::new(0.0, 0.0));
        let z = p(&[1, 0, 0, 1]).eval(Complex64::new(-1.0, 0.0));
        assert_eq!(z, Complex64::new(0.0, 0.0));
        // monic normalization: 5040(x^6 + 2/3 x^3 + 1/35) at x = 1
        let v = p(&[144, 0, 0, 3360, 0, 0, 5040]).eval(Complex64::new(1.0, 0.0));
        assert!((v.re - (1.0 + 2.0 / 3.0 + 1.0 / 35.0)).abs() < 1e-15);
    }

    #[test]
    fn eval_handles_coefficients_beyond_f64() {
        let big: BigInt = "84019054401376174080000".parse().unwrap();
        let q = IntPolynomial::new(vec![big.clone() * 3, BigInt::zero(), big]);
        // x^2 + 3 at 2i → -1
        let v = q.eval(Complex64::new(0.0, 2.0));
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn square_free_examples() {
        let x5p1 = p(&[1, 0, 0, 0, 0, 1]);
        assert_eq!(x5p1.pow(4).square_free_part().unwrap(), x5p1);
        let f5 = p(&[1, 0, 3, 0, 1]);
        assert_eq!(f5.square_free_part().unwrap(), f5);
        assert_eq!(p(&[1, 0, 0, 2, 0, 0, 1]).square_free_part().unwrap(), p(&[1, 0, 0, 1]));
        assert_eq!(
            IntPolynomial::zero().square_free_part(),
            Err(ExactPolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let a = p(&[1, 0, 0, 0, 0, 1]);
        let b = p(&[2, 1]);
        let prod = &a.pow(4) * &b.pow(2).scale(&BigInt::from(6));
        let parts = prod.square_free_decomposition().unwrap();
        assert_eq!(parts, vec![(b, 2), (a, 4)]);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let common = p(&[1, 0, 1]);
        let a = &common * &p(&[3, 1]);
        let b = &common * &p(&[-2, 5]);
        assert_eq!(
            a.scale(&BigInt::from(4)).gcd(&b.scale(&BigInt::from(6))),
            common.scale(&BigInt::from(2))
        );
    }

    #[test]
    fn decimate_examples() {
        let t6 = p(&[0, 2, 0, 0, 6, 0, 0, 4, 0, 0, 1]);
        let d = t6.decimate(3).unwrap();
        assert_eq!(d.shift, 1);
        assert_eq!(d.base, p(&[2, 6, 4, 1]));
        assert_eq!(d.reconstruct(), t6);

        let b6 = p(&[1, 0, 0, 0, 0, 1]).pow(4);
        let d = b6.decimate(5).unwrap();
        assert_eq!(d.shift, 0);
        assert_eq!(d.base, p(&[1, 1]).pow(4));

        assert_eq!(
            p(&[0, 1, 1]).decimate(2),
            Err(ExactPolyError::MixedResidue {
                r: 2,
                first: 1,
                second: 2
            })
        );
    }

    #[test]
    fn display_and_json() {
        assert_eq!(p(&[144, 0, 0, 3360, 0, 0, 5040]).to_string(), "5040x^6 + 3360x^3 + 144");
        assert_eq!(p(&[0, -1, 0, 1]).to_string(), "x^3 - x");
        assert_eq!(p(&[-7]).to_string(), "-7");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        let q = p(&[1, 0, -2]);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, r#"["1","0","-2"]"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), q);
    }

    #[test]
    fn division_rejects_inexact() {
        assert_eq!(
            p(&[1, 0, 1]).div_exact(&p(&[1, 1])),
            Err(ExactPolyError::InexactDivision)
        );
        assert_eq!(
            p(&[1, 1]).div_exact(&IntPolynomial::zero()),
            Err(ExactPolyError::DivisionByZero)
        );
    }
}
