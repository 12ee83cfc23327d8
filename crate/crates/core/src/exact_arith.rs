//! Exact rationals and the factorial kernels used by every closed form.
//!
//! The double factorial here follows the shifted convention
//! `m!! = (m-1)(m-3)(m-5)...`, stopping at 1 or 2, which is the ordinary
//! double factorial of `m - 1`. It lives under its own name,
//! [`shifted_double_factorial`], so that it is never confused with the
//! standard one.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        ExactRational(BigRational::new(num.into(), den))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactRational(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, e))
    }

    /// Nearest `f64`; only for display and Monte Carlo comparisons.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big_rational(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(v: BigRational) -> Self {
        ExactRational(v)
    }
}

impl From<BigInt> for ExactRational {
    fn from(v: BigInt) -> Self {
        ExactRational::from_integer(v)
    }
}

impl From<BigUint> for ExactRational {
    fn from(v: BigUint) -> Self {
        ExactRational::from_integer(BigInt::from(v))
    }
}

macro_rules! from_prim {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactRational {
            fn from(v: $t) -> Self {
                ExactRational::from_integer(BigInt::from(v))
            }
        }
    )*};
}
from_prim!(i32, i64, u32, u64, usize);

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `"num"` or `"num/den"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg}: {s:?}"),
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad("bad numerator"))?;
        let d: BigInt = d.parse().map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(ExactRational::new(n, d))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ExactRational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num: BigInt = raw.num.parse().map_err(de::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(de::Error::custom)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(ExactRational::new(num, den))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for ExactRational {
    fn add_assign(&mut self, rhs: ExactRational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&ExactRational> for ExactRational {
    fn sub_assign(&mut self, rhs: &ExactRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactRational> for ExactRational {
    fn mul_assign(&mut self, rhs: &ExactRational) {
        self.0 *= &rhs.0;
    }
}

impl MulAssign for ExactRational {
    fn mul_assign(&mut self, rhs: ExactRational) {
        self.0 *= rhs.0;
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

// Memo tables. Fills are idempotent: every entry is a pure function of its
// index, so racing writers can only ever store the same values.
fn df_table() -> &'static RwLock<Vec<BigUint>> {
    static TABLE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigUint::one(), BigUint::one(), BigUint::one()]))
}

fn fact_table() -> &'static RwLock<Vec<BigUint>> {
    static TABLE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigUint::one()]))
}

fn memo_get(
    table: &RwLock<Vec<BigUint>>,
    m: usize,
    extend: impl Fn(&[BigUint]) -> BigUint,
) -> BigUint {
    if let Some(v) = table.read().expect("memo poisoned").get(m) {
        return v.clone();
    }
    let mut t = table.write().expect("memo poisoned");
    while t.len() <= m {
        let next = extend(&t);
        t.push(next);
    }
    t[m].clone()
}

/// The shifted double factorial `m!! = (m-1)(m-3)...`, ending at 1 or 2.
///
/// `0`, `1` and `2` all map to 1; beyond that `m!! = (m-1) * (m-2)!!`.
pub fn shifted_double_factorial(m: u32) -> BigUint {
    memo_get(df_table(), m as usize, |t| {
        let m = t.len();
        BigUint::from(m - 1) * &t[m - 2]
    })
}

/// [`shifted_double_factorial`] for a signed argument, rejecting negatives.
pub fn shifted_double_factorial_signed(m: i64) -> Result<BigUint> {
    let m = u32::try_from(m).map_err(|_| {
        Error::contract(format!("double factorial of negative argument {m}"))
    })?;
    Ok(shifted_double_factorial(m))
}

pub fn factorial(m: u32) -> BigUint {
    memo_get(fact_table(), m as usize, |t| {
        let m = t.len();
        BigUint::from(m) * &t[m - 1]
    })
}

/// Binomial coefficient, zero when `r > m`.
pub fn binomial(m: u32, r: u32) -> BigUint {
    if r > m {
        return BigUint::zero();
    }
    let r = r.min(m - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= m - i;
        acc /= i + 1;
    }
    acc
}

/// `shifted_double_factorial(m)` as an exact rational.
pub(crate) fn pdf(m: u32) -> ExactRational {
    ExactRational::from(shifted_double_factorial(m))
}

/// `shifted_double_factorial` of a signed argument as an exact rational.
pub(crate) fn pdf_signed(m: i64) -> Result<ExactRational> {
    shifted_double_factorial_signed(m).map(ExactRational::from)
}

pub(crate) fn fact(m: u32) -> ExactRational {
    ExactRational::from(factorial(m))
}
