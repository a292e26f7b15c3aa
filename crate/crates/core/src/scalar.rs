//! Coefficient fields.
//!
//! Two backends implement [`Scalar`]: [`Rational`] (exact, the default for every
//! identity check) and `f64`. `Rational` keeps integers that fit in an `i128`
//! inline and only falls back to a heap-allocated `BigRational` for fractions or
//! large magnitudes. Nearly every intermediate value in a product chain of
//! integer multivectors is an integer, so the inline path carries the load.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Relative tolerance of the float backend.
pub const REL_TOL: f64 = 1e-9;
/// Absolute tolerance of the float backend.
pub const ABS_TOL: f64 = 1e-12;

/// A coefficient field for multivectors.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Num
    + Neg<Output = Self>
    + 'static
{
    /// `true` when arithmetic is exact and equality is structural.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(num, den))
    }

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Exact equality for exact fields, tolerance-based otherwise.
    fn approx_eq(&self, other: &Self) -> bool;

    /// Whether `self` is zero, measured against the magnitude `scale` of the
    /// quantities it was computed from.
    fn is_negligible(&self, scale: f64) -> bool;

    /// `self += a*b` (or `-= a*b` when `negate`).
    fn add_product(&mut self, a: &Self, b: &Self, negate: bool) {
        let t = a.clone() * b.clone();
        let cur = std::mem::replace(self, Self::zero());
        *self = if negate { cur - t } else { cur + t };
    }

    fn add_assign_ref(&mut self, other: &Self) {
        let cur = std::mem::replace(self, Self::zero());
        *self = cur + other.clone();
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= ABS_TOL + REL_TOL * self.abs().max(other.abs())
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= ABS_TOL + REL_TOL * scale.abs()
    }

    #[inline]
    fn add_product(&mut self, a: &Self, b: &Self, negate: bool) {
        if negate {
            *self -= a * b;
        } else {
            *self += a * b;
        }
    }

    #[inline]
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

/// Exact rational number with an inline `i128` fast path for integers.
#[derive(Clone)]
pub struct Rational(Repr);

// Invariant: `Big` never holds an integer that fits in an i128.
#[derive(Clone)]
enum Repr {
    Small(i128),
    Big(BigRational),
}

impl Rational {
    /// `num/den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        if num % den == 0 {
            Rational(Repr::Small(num as i128 / den as i128))
        } else {
            Self::from_big(BigRational::new(BigInt::from(num), BigInt::from(den)))
        }
    }

    pub fn from_integer(v: i128) -> Self {
        Rational(Repr::Small(v))
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i128() {
                return Rational(Repr::Small(v));
            }
        }
        Rational(Repr::Big(r))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        Self::from_big(BigRational::new(num, den))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_) => BigInt::one(),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_) => true,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Exact value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Self::from_big)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, exp: i32) -> Self {
        Self::from_big(num_traits::Pow::pow(self.to_big(), exp))
    }

    fn add_ref(&self, other: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(v) = a.checked_add(*b) {
                return Rational(Repr::Small(v));
            }
        }
        Self::from_big(self.to_big() + other.to_big())
    }

    fn sub_ref(&self, other: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(v) = a.checked_sub(*b) {
                return Rational(Repr::Small(v));
            }
        }
        Self::from_big(self.to_big() - other.to_big())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let Some(v) = a.checked_mul(*b) {
                return Rational(Repr::Small(v));
            }
        }
        Self::from_big(self.to_big() * other.to_big())
    }

    fn div_ref(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &other.0) {
            if let (Some(q), Some(r)) = (a.checked_div(*b), a.checked_rem(*b)) {
                if r == 0 {
                    return Rational(Repr::Small(q));
                }
            }
        }
        Self::from_big(self.to_big() / other.to_big())
    }

    fn rem_ref(&self, other: &Self) -> Self {
        Self::from_big(self.to_big() % other.to_big())
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational(Repr::Small(v as i128))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a == b,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = num_rational::ParseRatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigRational::from_str(s).map(Self::from_big)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$inner(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                self.$inner(rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                self.$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);
forward_binop!(Rem, rem, rem_ref);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Rational(Repr::Small(n)),
                None => Self::from_big(-BigRational::from_integer(BigInt::from(v))),
            },
            Repr::Big(r) => Self::from_big(-r),
        }
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        if let (Repr::Small(a), Repr::Small(b)) = (&mut self.0, &rhs.0) {
            if let Some(v) = a.checked_add(*b) {
                *a = v;
                return;
            }
        }
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        if let (Repr::Small(a), Repr::Small(b)) = (&mut self.0, &rhs.0) {
            if let Some(v) = a.checked_sub(*b) {
                *a = v;
                return;
            }
        }
        *self = self.sub_ref(rhs);
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1))
    }
}

impl Num for Rational {
    type FromStrRadixErr = num_rational::ParseRatioError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Self::from_big)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        v.into()
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }

    #[inline]
    fn add_product(&mut self, a: &Self, b: &Self, negate: bool) {
        if let (Repr::Small(acc), Repr::Small(x), Repr::Small(y)) = (&mut self.0, &a.0, &b.0) {
            if let Some(t) = x.checked_mul(*y) {
                let r = if negate {
                    acc.checked_sub(t)
                } else {
                    acc.checked_add(t)
                };
                if let Some(r) = r {
                    *acc = r;
                    return;
                }
            }
        }
        let t = a.mul_ref(b);
        if negate {
            *self -= &t;
        } else {
            *self += &t;
        }
    }

    #[inline]
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}
