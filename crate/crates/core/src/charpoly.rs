//! Characteristic polynomial by the Faddeev–LeVerrier recursion, plus the
//! determinant, adjugate and inverse it yields.
//!
//! Coefficients follow the convention
//! `phi_U(x) = x^N - C_1 x^(N-1) - ... - C_(N-1) x - C_N`, so `C_1 = Tr(U)`
//! and `Det(U) = -C_N`.

use crate::error::{GaError, Result};
use crate::linalg;
use crate::multivector::Multivector;
use crate::scalar::Scalar;
use crate::signature::Signature;

/// Ordered characteristic coefficients `C_1..C_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly<T> {
    sig: Signature,
    coeffs: Vec<T>,
}

impl<T: Scalar> CharPoly<T> {
    pub fn new(sig: Signature, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != sig.char_degree() {
            return Err(GaError::CoefficientCount {
                expected: sig.char_degree(),
                got: coeffs.len(),
            });
        }
        Ok(CharPoly { sig, coeffs })
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `C_1..C_N`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `C_k` for `1 <= k <= N`.
    pub fn coefficient(&self, k: usize) -> &T {
        &self.coeffs[k - 1]
    }

    pub fn trace(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn det(&self) -> T {
        -self.coeffs[self.coeffs.len() - 1].clone()
    }

    /// Coefficients of `phi` in ascending powers, `[a_0, .., a_N]` with `a_N = 1`.
    pub fn monomial_coeffs(&self) -> Vec<T> {
        let n = self.degree();
        let mut out = vec![T::zero(); n + 1];
        out[n] = T::one();
        for k in 1..=n {
            out[n - k] = -self.coeffs[k - 1].clone();
        }
        out
    }

    /// `phi(x)` at a field value.
    pub fn eval(&self, x: &T) -> T {
        self.monomial_coeffs()
            .into_iter()
            .rev()
            .fold(T::zero(), |acc, a| acc * x.clone() + a)
    }

    /// `phi(X)` at a multivector, by Horner's scheme.
    pub fn eval_multivector(&self, x: &Multivector<T>) -> Multivector<T> {
        let mut acc = Multivector::one(x.sig());
        for c in &self.coeffs {
            acc = (&acc * x).add_scalar(&-c.clone());
        }
        acc
    }

    /// Coefficient-wise comparison under the field's equality.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sig == other.sig
            && self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }
}

/// Full state of one Faddeev–LeVerrier run.
#[derive(Debug, Clone)]
pub struct FaddeevLeVerrier<T> {
    pub charpoly: CharPoly<T>,
    /// `U_(N-1)`.
    pub penultimate: Multivector<T>,
    /// `U_(N)`, a scalar multivector equal to `C_N e`.
    pub last: Multivector<T>,
}

impl<T: Scalar> FaddeevLeVerrier<T> {
    /// `U_(1) = U`, `C_k = (N/k) <U_(k)>_0`, `U_(k+1) = U (U_(k) - C_k)`.
    pub fn run(u: &Multivector<T>) -> Self {
        let sig = u.sig();
        let big_n = sig.char_degree();
        let n_scalar = T::from_i64(big_n as i64);
        let mut coeffs = Vec::with_capacity(big_n);
        let mut current = u.clone();
        // N >= 2, so this is overwritten at k = N-1.
        let mut penultimate = Multivector::one(sig);
        for k in 1..=big_n {
            let c = n_scalar.clone() * current.scalar_part().clone() / T::from_i64(k as i64);
            coeffs.push(c.clone());
            if k == big_n {
                break;
            }
            if k == big_n - 1 {
                penultimate = current.clone();
            }
            current = u * &current.add_scalar(&-c);
        }
        FaddeevLeVerrier {
            charpoly: CharPoly { sig, coeffs },
            penultimate,
            last: current,
        }
    }

    /// `C_(N-1) e - U_(N-1)`.
    pub fn adjugate(&self) -> Multivector<T> {
        let n = self.charpoly.degree();
        let c = self.charpoly.coefficient(n - 1).clone();
        (-&self.penultimate).add_scalar(&c)
    }
}

pub fn fl_coefficients<T: Scalar>(u: &Multivector<T>) -> CharPoly<T> {
    FaddeevLeVerrier::run(u).charpoly
}

pub fn det_fl<T: Scalar>(u: &Multivector<T>) -> T {
    fl_coefficients(u).det()
}

/// `Adj(U)` with `U Adj(U) = Adj(U) U = Det(U) e`.
pub fn adjugate<T: Scalar>(u: &Multivector<T>) -> Multivector<T> {
    FaddeevLeVerrier::run(u).adjugate()
}

/// `U^-1 = Adj(U) / Det(U)`.
pub fn inverse<T: Scalar>(u: &Multivector<T>) -> Result<Multivector<T>> {
    let run = FaddeevLeVerrier::run(u);
    let det = run.charpoly.det();
    let scale = u.max_abs().powi(u.sig().char_degree() as i32);
    if det.is_zero() || det.is_negligible(scale) {
        return Err(GaError::NotInvertible { det: det.to_string() });
    }
    Ok(run.adjugate().scale(&(T::one() / det)))
}

/// Interpolation nodes `0, 1, .., N`.
pub fn interpolation_nodes<T: Scalar>(sig: Signature) -> Vec<T> {
    (0..=sig.char_degree()).map(|i| T::from_i64(i as i64)).collect()
}

/// Rebuilds the characteristic polynomial from `N+1` values of
/// `Det(x e - U)` by solving the Vandermonde system.
///
/// Over the exact field the result equals [`fl_coefficients`]. Over floats an
/// [`GaError::IllConditioned`] is returned when the recovered leading
/// coefficient drifts from 1 or the node residual exceeds tolerance.
pub fn charpoly_interp<T, F>(u: &Multivector<T>, det_fn: F) -> Result<CharPoly<T>>
where
    T: Scalar,
    F: Fn(&Multivector<T>) -> Result<T>,
{
    let sig = u.sig();
    let big_n = sig.char_degree();
    let nodes: Vec<T> = interpolation_nodes(sig);
    let neg_u = -u;
    let values = nodes
        .iter()
        .map(|x| det_fn(&neg_u.add_scalar(x)))
        .collect::<Result<Vec<T>>>()?;
    let rows: Vec<Vec<T>> = nodes
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(big_n + 1);
            let mut pow = T::one();
            for _ in 0..=big_n {
                row.push(pow.clone());
                pow = pow * x.clone();
            }
            row
        })
        .collect();
    let a = linalg::solve(rows.clone(), values.clone()).ok_or(GaError::IllConditioned { residual: f64::INFINITY })?;

    if !T::EXACT {
        let value_scale = values.iter().map(|v| v.magnitude()).fold(1.0, f64::max);
        let mut residual: f64 = (a[big_n].clone() - T::one()).magnitude();
        for (row, v) in rows.iter().zip(&values) {
            let fit = row.iter().zip(&a).fold(T::zero(), |acc, (r, c)| acc + r.clone() * c.clone());
            residual = residual.max((fit - v.clone()).magnitude() / value_scale);
        }
        if residual > 1e-6 {
            return Err(GaError::IllConditioned { residual });
        }
    } else if !a[big_n].is_one() {
        return Err(GaError::IllConditioned { residual: (a[big_n].clone() - T::one()).to_f64().abs() });
    }

    let coeffs = (1..=big_n).map(|k| -a[big_n - k].clone()).collect();
    CharPoly::new(sig, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::signature::BladeIndex;

    type Mv = Multivector<Rational>;

    fn int(v: i64) -> Rational {
        Rational::from(v)
    }

    fn mv(sig: Signature, c: &[(u32, Rational)]) -> Mv {
        let mut m = Mv::zero(sig);
        for (b, v) in c {
            m.set_coeff(BladeIndex(*b), v.clone());
        }
        m
    }

    fn binomial(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }

    #[test]
    fn identity_gives_binomial_coefficients() {
        for sig in Signature::all() {
            let big_n = sig.char_degree() as i64;
            let cp = fl_coefficients(&Mv::one(sig));
            // (x-1)^N = x^N - C_1 x^(N-1) - ..., so C_k = -(-1)^k binomial(N,k)
            for k in 1..=big_n {
                let expect = if k % 2 == 0 { -binomial(big_n, k) } else { binomial(big_n, k) };
                assert_eq!(cp.coefficient(k as usize), &int(expect), "{sig} k={k}");
            }
            assert_eq!(cp.det(), int(1));
        }
    }

    #[test]
    fn n1_closed_form() {
        let s = Signature::new(1, 0).unwrap();
        for (a, b) in [(1, 2), (3, -5), (0, 7), (4, 0)] {
            let u = mv(s, &[(0, int(a)), (1, int(b))]);
            let cp = fl_coefficients(&u);
            assert_eq!(cp.coeffs(), &[int(2 * a), int(-(a * a - b * b))]);
            assert_eq!(adjugate(&u), mv(s, &[(0, int(a)), (1, int(-b))]));
        }
    }

    #[test]
    fn worked_example_n2() {
        let s = Signature::new(2, 0).unwrap();
        let u = mv(s, &[(0, int(5)), (2, Rational::new(1, 2)), (3, Rational::new(1, 2))]);
        let cp = fl_coefficients(&u);
        assert_eq!(cp.coeffs(), &[int(10), int(-25)]);
        assert_eq!(cp.det(), int(25));
    }

    #[test]
    fn zero_and_identity() {
        for sig in Signature::all() {
            assert_eq!(det_fl(&Mv::zero(sig)), int(0));
            assert_eq!(adjugate(&Mv::one(sig)), Mv::one(sig));
            assert_eq!(inverse(&Mv::one(sig)).unwrap(), Mv::one(sig));
            let two = Mv::scalar(sig, int(2));
            assert_eq!(inverse(&two).unwrap(), Mv::scalar(sig, Rational::new(1, 2)));
            assert!(matches!(inverse(&Mv::zero(sig)), Err(GaError::NotInvertible { .. })));
        }
    }

    #[test]
    fn generator_is_its_own_inverse() {
        let s = Signature::new(1, 0).unwrap();
        let e1 = Mv::generator(s, 1).unwrap();
        assert_eq!(inverse(&e1).unwrap(), e1);
    }

    #[test]
    fn interp_trivial_cases() {
        for sig in Signature::all() {
            let zero = charpoly_interp(&Mv::zero(sig), |x| Ok(det_fl(x))).unwrap();
            assert!(zero.coeffs().iter().all(num_traits::Zero::is_zero));
            let one = charpoly_interp(&Mv::one(sig), |x| Ok(det_fl(x))).unwrap();
            assert_eq!(one, fl_coefficients(&Mv::one(sig)));
        }
    }

    #[test]
    fn eval_matches_coefficients() {
        let s = Signature::new(1, 0).unwrap();
        let u = mv(s, &[(0, int(1)), (1, int(2))]);
        let cp = fl_coefficients(&u);
        // phi(x) = x^2 - 2x - 3
        assert_eq!(cp.eval(&int(3)), int(0));
        assert_eq!(cp.eval(&int(0)), int(-3));
        assert!(cp.eval_multivector(&u).is_zero());
    }
}
