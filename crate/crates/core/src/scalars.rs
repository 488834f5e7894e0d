//! Exact scalar field: Gaussian rationals `Q(i)`.
//!
//! Every matrix entry and parameter in the crate is an [`ExactComplex`], so all
//! relation checks are strict equalities with no tolerance.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always held in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses the text form `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Renders `p/q`, or `p` when the denominator is 1.
pub fn render_rational(r: &Rational) -> String {
    r.to_string()
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

/// An element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactComplex {
    re: Rational,
    im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(Rational::from_integer(n.into()), Rational::zero())
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Self::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::new(Rational::new(p.into(), q.into()), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, Rational::zero())
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Exact square root in `Q(i)`, when one exists. Of the two roots the one
    /// with lexicographically non-negative `(re, im)` is returned.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let r = rational_sqrt(&self.norm_sqr())?;
        let two = Rational::from_integer(2.into());
        let u = rational_sqrt(&((&r + &self.re) / &two))?;
        let v_abs = rational_sqrt(&((&r - &self.re) / &two))?;
        // (u + iv)² = u² - v² + 2uv·i, so sign(v) must follow sign(im) when u ≠ 0.
        let v = if self.im.is_negative() { -v_abs } else { v_abs };
        let root = Self::new(u, v);
        debug_assert_eq!(&root.square(), self);
        Some(root.canonical_sign())
    }

    /// Picks between `±self` the representative with `re > 0`, or `re = 0` and
    /// `im ≥ 0`.
    pub fn canonical_sign(self) -> Self {
        if self.re.is_negative() || (self.re.is_zero() && self.im.is_negative()) {
            -self
        } else {
            self
        }
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        ExactComplex::is_zero(self)
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Default for ExactComplex {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for ExactComplex {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a ExactComplex> for &'a ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: &'a ExactComplex) -> ExactComplex {
                let f: fn(&ExactComplex, &ExactComplex) -> ExactComplex = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: &'a ExactComplex) -> ExactComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<ExactComplex> for &'a ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: ExactComplex) -> ExactComplex {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| ExactComplex::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| ExactComplex::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return ExactComplex::new(&a.re * &b.re, Rational::zero());
    }
    ExactComplex::new(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
});

/// Panics on division by zero, like the primitive numeric types. Use
/// [`ExactComplex::checked_div`] where the divisor is not known to be nonzero.
impl Div<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn div(self, rhs: &ExactComplex) -> ExactComplex {
        self.checked_div(rhs).expect("division by zero in Q(i)")
    }
}

impl Div<ExactComplex> for ExactComplex {
    type Output = ExactComplex;
    fn div(self, rhs: ExactComplex) -> ExactComplex {
        &self / &rhs
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -(self.clone())
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, rhs: &ExactComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, rhs: &ExactComplex) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for ExactComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -self.im.clone()),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    re: String,
    im: String,
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr { re: render_rational(&self.re), im: render_rational(&self.im) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ComplexRepr::deserialize(deserializer)?;
        let re = parse_rational(&repr.re).map_err(serde::de::Error::custom)?;
        let im = parse_rational(&repr.im).map_err(serde::de::Error::custom)?;
        Ok(ExactComplex::new(re, im))
    }
}
