//! Dense multivectors over G(p,q).

use std::ops::{Add, Mul, Neg, Sub};

use crate::conjugation::Conjugation;
use crate::error::{GaError, Result};
use crate::scalar::{Rational, Scalar};
use crate::signature::{BladeIndex, Signature};

/// A multivector: `2^n` coefficients indexed by [`BladeIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<T> {
    sig: Signature,
    coeffs: Vec<T>,
}

impl<T: Scalar> Multivector<T> {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: vec![T::zero(); sig.blade_count()],
        }
    }

    /// The identity element `e`.
    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, T::one())
    }

    pub fn scalar(sig: Signature, value: T) -> Self {
        let mut m = Self::zero(sig);
        m.coeffs[0] = value;
        m
    }

    pub fn blade(sig: Signature, blade: BladeIndex, value: T) -> Result<Self> {
        if blade.index() >= sig.blade_count() {
            return Err(GaError::GradeOutOfRange {
                grade: blade.grade(),
                n: sig.n(),
            });
        }
        let mut m = Self::zero(sig);
        m.coeffs[blade.index()] = value;
        Ok(m)
    }

    /// Generator `e_a` (1-based).
    pub fn generator(sig: Signature, a: usize) -> Result<Self> {
        if a == 0 || a > sig.n() {
            return Err(GaError::GradeOutOfRange { grade: a, n: sig.n() });
        }
        Self::blade(sig, BladeIndex(1 << (a - 1)), T::one())
    }

    pub fn from_coeffs(sig: Signature, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != sig.blade_count() {
            return Err(GaError::CoefficientCount {
                expected: sig.blade_count(),
                got: coeffs.len(),
            });
        }
        Ok(Multivector { sig, coeffs })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> &T {
        &self.coeffs[blade.index()]
    }

    pub fn set_coeff(&mut self, blade: BladeIndex, value: T) {
        self.coeffs[blade.index()] = value;
    }

    /// Nonzero terms as `(blade, coefficient)` in ascending blade order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeIndex, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (BladeIndex(i as u32), c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(GaError::SignatureMismatch(
                self.sig.p(),
                self.sig.q(),
                other.sig.p(),
                other.sig.q(),
            ));
        }
        Ok(())
    }

    /// Geometric product.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        Ok(self.product_unchecked(other))
    }

    fn product_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.coeffs.len()];
        let rhs: Vec<(u32, &T)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let bi = BladeIndex(i as u32);
            for &(j, b) in &rhs {
                let (k, negative) = self.sig.blade_product(bi, BladeIndex(j));
                out[k.index()].add_product(a, b, negative);
            }
        }
        Multivector {
            sig: self.sig,
            coeffs: out,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// In-place `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: &T) {
        assert_eq!(self.sig, other.sig, "signature mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                a.add_product(b, factor, false);
            }
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// `self + value * e`.
    pub fn add_scalar(&self, value: &T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + value.clone();
        out
    }

    /// Coefficient-wise equality: exact for exact fields, tolerance-based otherwise.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }

    /// `<U>_k`.
    pub fn grade_projection(&self, k: usize) -> Result<Self> {
        if k > self.sig.n() {
            return Err(GaError::GradeOutOfRange { grade: k, n: self.sig.n() });
        }
        Ok(Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if (i as u32).count_ones() as usize == k { c.clone() } else { T::zero() })
                .collect(),
        })
    }

    /// `<U>_0` as a field element.
    pub fn scalar_part(&self) -> &T {
        &self.coeffs[0]
    }

    /// `Tr(U) = N <U>_0`.
    pub fn trace(&self) -> T {
        T::from_i64(self.sig.char_degree() as i64) * self.coeffs[0].clone()
    }

    /// Lowest nonzero grade `k >= 1`, if any.
    pub fn nonscalar_grade(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| (i as u32).count_ones() as usize)
            .min()
    }

    /// Lowest grade `k >= 1` whose part is not negligible against `scale`.
    pub fn significant_nonscalar_grade(&self, scale: f64) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_negligible(scale))
            .map(|(i, _)| (i as u32).count_ones() as usize)
            .min()
    }

    /// Largest absolute coefficient, as a float.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn conjugate(&self, c: Conjugation) -> Result<Self> {
        c.validate(&self.sig)?;
        Ok(self.conjugate_unchecked(c))
    }

    pub(crate) fn conjugate_unchecked(&self, c: Conjugation) -> Self {
        let signs = c.sign_table(self.sig.n());
        Multivector {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    if signs[(i as u32).count_ones() as usize] < 0 {
                        -x.clone()
                    } else {
                        x.clone()
                    }
                })
                .collect(),
        }
    }

    /// Grade involution.
    pub fn hat(&self) -> Self {
        self.conjugate_unchecked(Conjugation::GradeInvolution)
    }

    /// Reversion.
    pub fn tilde(&self) -> Self {
        self.conjugate_unchecked(Conjugation::Reversion)
    }

    pub fn bar(&self) -> Self {
        self.conjugate_unchecked(Conjugation::Bar)
    }

    /// Integer power `U^k` (`U^0 = e`).
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.sig);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Converts coefficients into another field through exact rationals.
    pub fn map_field<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Multivector<S> {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl Multivector<Rational> {
    pub fn to_f64(&self) -> Multivector<f64> {
        self.map_field(|c| c.to_f64())
    }
}

// Operator forms panic on signature mismatch; use the `try_*` methods or
// `geometric_product` for a `Result`.

impl<'a, 'b, T: Scalar> Mul<&'b Multivector<T>> for &'a Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: &'b Multivector<T>) -> Multivector<T> {
        self.geometric_product(rhs).expect("signature mismatch")
    }
}

impl<'a, 'b, T: Scalar> Add<&'b Multivector<T>> for &'a Multivector<T> {
    type Output = Multivector<T>;
    fn add(self, rhs: &'b Multivector<T>) -> Multivector<T> {
        self.try_add(rhs).expect("signature mismatch")
    }
}

impl<'a, 'b, T: Scalar> Sub<&'b Multivector<T>> for &'a Multivector<T> {
    type Output = Multivector<T>;
    fn sub(self, rhs: &'b Multivector<T>) -> Multivector<T> {
        self.try_sub(rhs).expect("signature mismatch")
    }
}

impl<'a, T: Scalar> Neg for &'a Multivector<T> {
    type Output = Multivector<T>;
    fn neg(self) -> Multivector<T> {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Mv = Multivector<Rational>;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn generator_squares() {
        let s = sig(1, 0);
        let e1 = Mv::generator(s, 1).unwrap();
        assert_eq!(&e1 * &e1, Mv::one(s));
        let s = sig(0, 1);
        let e1 = Mv::generator(s, 1).unwrap();
        assert_eq!(&e1 * &e1, -&Mv::one(s));
        let s = sig(2, 0);
        let e12 = Mv::blade(s, BladeIndex(3), r(1, 1)).unwrap();
        assert_eq!(&e12 * &e12, -&Mv::one(s));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Mv::one(sig(2, 0));
        let b = Mv::one(sig(1, 1));
        assert!(matches!(a.geometric_product(&b), Err(GaError::SignatureMismatch(2, 0, 1, 1))));
        assert!(a.try_add(&b).is_err());
        assert!(a.try_sub(&b).is_err());
        assert!(Mv::from_coeffs(sig(2, 0), vec![Rational::from(1); 3]).is_err());
    }

    #[test]
    fn grade_projection_examples() {
        let s = sig(2, 0);
        let one = Mv::one(s);
        assert_eq!(one.grade_projection(0).unwrap(), one);
        let u = Mv::from_coeffs(s, vec![r(2, 1), r(3, 1), r(0, 1), r(5, 1)]).unwrap();
        assert_eq!(u.grade_projection(1).unwrap(), Mv::generator(s, 1).unwrap().scale(&r(3, 1)));
        assert!(matches!(u.grade_projection(3), Err(GaError::GradeOutOfRange { grade: 3, n: 2 })));
        let total = (0..=2).fold(Mv::zero(s), |acc, k| &acc + &u.grade_projection(k).unwrap());
        assert_eq!(total, u);
    }

    #[test]
    fn conjugation_examples() {
        let s = sig(2, 0);
        let u = Mv::from_coeffs(s, vec![r(7, 1), r(2, 1), r(0, 1), r(3, 1)]).unwrap();
        let hat = Mv::from_coeffs(s, vec![r(7, 1), r(-2, 1), r(0, 1), r(3, 1)]).unwrap();
        assert_eq!(u.hat(), hat);
        // bar(5e + (e2 + e12)/2) = 5e - (e2 + e12)/2
        let v = Mv::from_coeffs(s, vec![r(5, 1), r(0, 1), r(1, 2), r(1, 2)]).unwrap();
        let vbar = Mv::from_coeffs(s, vec![r(5, 1), r(0, 1), r(-1, 2), r(-1, 2)]).unwrap();
        assert_eq!(v.bar(), vbar);
        assert!(v.conjugate(Conjugation::Delta(3)).is_err());
    }

    #[test]
    fn trace_and_arith() {
        let s = sig(1, 1);
        assert_eq!(Mv::one(s).trace(), r(2, 1));
        assert_eq!(Mv::generator(s, 1).unwrap().trace(), r(0, 1));
        let e1 = Mv::generator(s, 1).unwrap();
        let e2 = Mv::generator(s, 2).unwrap();
        let sum = &e1 + &e2;
        assert_eq!(sum.scale(&r(2, 1)), &e1.scale(&r(2, 1)) + &e2.scale(&r(2, 1)));
        assert_eq!(&sum + &Mv::zero(s), sum);
        assert!((&sum - &sum).is_zero());
    }

    #[test]
    fn float_equality_tolerance() {
        let s = sig(1, 0);
        let a = Multivector::<f64>::from_coeffs(s, vec![1.0, 2.0]).unwrap();
        let b = Multivector::<f64>::from_coeffs(s, vec![1.0 + 1e-12, 2.0]).unwrap();
        let c = Multivector::<f64>::from_coeffs(s, vec![1.0 + 1e-6, 2.0]).unwrap();
        assert!(a.approx_eq(&b));
        assert!(!a.approx_eq(&c));
    }
}
