//! q-Pochhammer symbols and the scalar types they are evaluated in.
//!
//! Every weight formula is written once against [`Scalar`], which is implemented
//! for `f64` and for exact big rationals. Exact inputs stay exact; there is no
//! conversion from `f64` into the exact type.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Integer power; negative exponents invert, and fail on zero.
    fn ipow(&self, e: i64) -> Result<Self>;
    /// Rejects non-finite floats; exact values always pass.
    fn check(self, what: &str) -> Result<Self>;
    /// Sum with compensation in float mode.
    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self;
    fn product<I: IntoIterator<Item = Self>>(factors: I) -> Self {
        factors.into_iter().fold(Self::one(), |a, b| a * b)
    }
    /// Determinant of a square matrix given as rows.
    fn det(m: Vec<Vec<Self>>) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ipow(&self, e: i64) -> Result<Self> {
        if e < 0 && *self == 0.0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let e32 = i32::try_from(e).map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
        self.powi(e32).check("powi")
    }
    fn check(self, what: &str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what.to_string()))
        }
    }
    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        // Neumaier's variant of Kahan summation
        let mut s = 0.0f64;
        let mut c = 0.0f64;
        for x in terms {
            let t = s + x;
            if s.abs() >= x.abs() {
                c += (s - t) + x;
            } else {
                c += (x - t) + s;
            }
            s = t;
        }
        s + c
    }
    fn det(m: Vec<Vec<Self>>) -> Self {
        crate::linalg::det_lu(&m)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn ipow(&self, e: i64) -> Result<Self> {
        if e < 0 && Zero::is_zero(self) {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let e32 = i32::try_from(e).map_err(|_| Error::Domain(format!("exponent {e} too large")))?;
        Ok(num_traits::Pow::pow(self, e32))
    }
    fn check(self, _what: &str) -> Result<Self> {
        Ok(self)
    }
    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms.into_iter().fold(Zero::zero(), |a, b| a + b)
    }
    /// One reduction at the end instead of a gcd per factor.
    fn product<I: IntoIterator<Item = Self>>(factors: I) -> Self {
        let (mut n, mut d) = (BigInt::one(), BigInt::one());
        for f in factors {
            let (fn_, fd) = f.into_raw();
            n *= fn_;
            d *= fd;
        }
        BigRational::new(n, d)
    }
    fn det(m: Vec<Vec<Self>>) -> Self {
        crate::linalg::det_bareiss(m)
    }
}

/// Exact rational n/d.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Length of a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

/// (a; q)_k for finite k.
pub fn qpoch<S: Scalar>(a: &S, q: &S, k: usize) -> S {
    let mut f = a.clone();
    S::product((0..k).map(|_| {
        let term = S::one() - f.clone();
        f = f.clone() * q.clone();
        term
    }))
}

/// (a; q)_n for any integer n, with (a;q)_{-n} = 1/(a q^{-n}; q)_n.
pub fn qpoch_signed<S: Scalar>(a: &S, q: &S, n: i64, label: &str) -> Result<S> {
    if n >= 0 {
        return qpoch(a, q, n as usize).check(label);
    }
    let m = -n;
    let start = a.clone() * q.ipow(-m)?;
    let d = qpoch(&start, q, m as usize);
    if d.is_zero() {
        return Err(Error::Pole(label.to_string()));
    }
    (S::one() / d).check(label)
}

/// (a; q)_∞ in floating point. Stops once |q^j a| < 1e-17 after at least 8 factors.
pub fn qpoch_inf(a: f64, q: f64) -> Result<f64> {
    if q.abs() >= 1.0 || !q.is_finite() {
        return Err(Error::Domain(format!(
            "infinite q-Pochhammer needs |q| < 1, got q = {q}"
        )));
    }
    let mut p = 1.0;
    let mut f = a;
    let mut j = 0usize;
    loop {
        p *= 1.0 - f;
        j += 1;
        if (f.abs() < 1e-17 && j >= 8) || (f == 0.0 && j >= 1) {
            break;
        }
        f *= q;
        if j > 1_000_000 {
            return Err(Error::Domain("infinite q-Pochhammer failed to converge".into()));
        }
    }
    p.check("(a;q)_inf")
}

/// Spec-facing entry point covering both finite and infinite length.
pub fn qpochhammer(a: f64, q: f64, k: Length) -> Result<f64> {
    match k {
        Length::Finite(k) => qpoch(&a, &q, k).check("(a;q)_k"),
        Length::Infinite => qpoch_inf(a, q),
    }
}

/// Binomial coefficient C(n, 2) for signed n (used in t-power prefactors).
pub fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}
