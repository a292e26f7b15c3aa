//! Random multivectors for property checks, sweeps and benchmarks.

use rand::Rng;

use crate::multivector::Multivector;
use crate::scalar::Rational;
use crate::signature::Signature;

/// Every coefficient uniform on the integers `-bound..=bound`.
pub fn random_integer<R: Rng + ?Sized>(sig: Signature, bound: i64, rng: &mut R) -> Multivector<Rational> {
    let coeffs = (0..sig.blade_count())
        .map(|_| Rational::from(rng.gen_range(-bound..=bound)))
        .collect();
    Multivector::from_coeffs(sig, coeffs).expect("length matches blade count")
}

/// Every coefficient uniform on `[-bound, bound]`.
pub fn random_float<R: Rng + ?Sized>(sig: Signature, bound: f64, rng: &mut R) -> Multivector<f64> {
    let coeffs = (0..sig.blade_count()).map(|_| rng.gen_range(-bound..=bound)).collect();
    Multivector::from_coeffs(sig, coeffs).expect("length matches blade count")
}
