//! Generalized Vieta formulas.
//!
//! Given a determinant formula with its `N` occurrences of `U` turned into
//! independent slots `x_1..x_N` (the F-function), every characteristic
//! coefficient is
//!
//! ```text
//! C_k = (-1)^(k+1) * sum over tuples with k slots = U and N-k slots = e of F(tuple)
//! ```
//!
//! Substituting `e` into a slot removes that factor, since every conjugation
//! fixes `e`. The module also carries the Gelfand–Retakh construction of the
//! `y_k` for `n <= 3` and the eigenvalue comparison for `n <= 2`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::charpoly::{det_fl, fl_coefficients, inverse, CharPoly};
use crate::error::{GaError, Result};
use crate::formula::{det_formula, formula_by_name, DetFormula, Expr, Family};
use crate::multivector::Multivector;
use crate::scalar::Scalar;

/// A determinant formula read as a function of `N` independent slots.
#[derive(Debug, Clone, PartialEq)]
pub struct FFunction {
    formula: DetFormula,
}

impl FFunction {
    pub fn new(formula: DetFormula) -> Self {
        FFunction { formula }
    }

    pub fn formula(&self) -> &DetFormula {
        &self.formula
    }

    pub fn n(&self) -> usize {
        self.formula.n
    }

    pub fn family(&self) -> Family {
        self.formula.family
    }

    pub fn arity(&self) -> usize {
        self.formula.slots
    }

    /// `F(x_1..x_N)`, where `None` is the identity `e`.
    pub fn eval<T: Scalar>(&self, args: &[Option<&Multivector<T>>]) -> Result<Multivector<T>> {
        let sig = args
            .iter()
            .flatten()
            .map(|m| m.sig())
            .next()
            .ok_or_else(|| GaError::MalformedFormula("F needs at least one non-identity argument".into()))?;
        if args.len() != self.arity() {
            return Err(GaError::MalformedFormula(format!(
                "F takes {} arguments, got {}",
                self.arity(),
                args.len()
            )));
        }
        if let Some(bad) = args.iter().flatten().find(|m| m.sig() != sig) {
            return Err(GaError::SignatureMismatch(sig.p(), sig.q(), bad.sig().p(), bad.sig().q()));
        }
        Ok(self.formula.eval_with(sig, &|i| args[i].cloned()).0)
    }
}

/// The F-function of the primary formula of `family` for dimension `n`.
pub fn f_function(n: usize, family: Family) -> Result<FFunction> {
    det_formula(n, family).map(FFunction::new)
}

pub fn f_function_by_name(n: usize, name: &str) -> Result<FFunction> {
    formula_by_name(n, name).map(FFunction::new)
}

/// `X(k)`: bit masks over `slots` positions with exactly `k` bits set (bit `i`
/// set means slot `i` holds `U`), in increasing numeric order.
pub fn x_k_tuples(slots: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << slots)).filter(|m| m.count_ones() as usize == k).collect()
}

/// Evaluates `F` at tuples of `U`s and identities, caching every subtree's
/// value by the pattern of `U`s among its own slots. Neighbouring tuples
/// share most subtrees, so the sum over all of `X(1)..X(N)` costs far fewer
/// products than evaluating each tuple from scratch.
pub struct TupleEvaluator<'a, T> {
    f: &'a FFunction,
    u: &'a Multivector<T>,
    cache: HashMap<(*const Expr, usize, u32), Multivector<T>>,
}

impl<'a, T: Scalar> TupleEvaluator<'a, T> {
    pub fn new(f: &'a FFunction, u: &'a Multivector<T>) -> Self {
        TupleEvaluator {
            f,
            u,
            cache: HashMap::new(),
        }
    }

    /// `F(tuple)` and the largest coefficient magnitude among its terms.
    pub fn eval(&mut self, mask: u32) -> (Multivector<T>, f64) {
        let sig = self.u.sig();
        let mut acc = Multivector::zero(sig);
        let mut scale: f64 = 0.0;
        for t in &self.f.formula.terms {
            let v = self.node(&t.expr, mask).unwrap_or_else(|| Multivector::one(sig));
            scale = scale.max(v.max_abs());
            acc.add_scaled(&v, &T::from_rational(&t.weight));
        }
        (acc, scale)
    }

    fn node(&mut self, expr: &Expr, mask: u32) -> Option<Multivector<T>> {
        if let Expr::Product { factors } = expr {
            return self.prefix(expr, factors, factors.len(), mask);
        }
        let local = local_mask(mask, first_slot(expr), expr.slot_count());
        if local == 0 {
            return None;
        }
        let key = (expr as *const Expr, usize::MAX, local);
        if let Some(v) = self.cache.get(&key) {
            return Some(v.clone());
        }
        let value = match expr {
            Expr::Conjugation { kind, arg } => self.node(arg, mask)?.conjugate_unchecked(*kind),
            _ => self.u.clone(),
        };
        self.cache.insert(key, value.clone());
        Some(value)
    }

    /// Product of the first `len` factors.
    fn prefix(&mut self, expr: &Expr, factors: &[Expr], len: usize, mask: u32) -> Option<Multivector<T>> {
        if len == 0 {
            return None;
        }
        let width = factors[..len].iter().map(Expr::slot_count).sum();
        let local = local_mask(mask, first_slot(expr), width);
        if local == 0 {
            return None;
        }
        let key = (expr as *const Expr, len, local);
        if let Some(v) = self.cache.get(&key) {
            return Some(v.clone());
        }
        let value = match (self.prefix(expr, factors, len - 1, mask), self.node(&factors[len - 1], mask)) {
            (Some(a), Some(b)) => &a * &b,
            (a, b) => a.or(b)?,
        };
        self.cache.insert(key, value.clone());
        Some(value)
    }

    /// Raw sum of `F` over `tuples`, and the largest coefficient magnitude
    /// seen among the summands.
    pub fn sum(&mut self, tuples: &[u32]) -> (Multivector<T>, f64) {
        let mut acc = Multivector::zero(self.u.sig());
        let mut scale: f64 = 0.0;
        for &mask in tuples {
            let (v, s) = self.eval(mask);
            scale = scale.max(s);
            acc = &acc + &v;
        }
        (acc, scale)
    }

    /// `C_k` with the scalarity check.
    pub fn coefficient(&mut self, k: usize) -> Result<T> {
        if k == 0 || k > self.f.arity() {
            return Err(GaError::MalformedFormula(format!("coefficient index {k} out of 1..={}", self.f.arity())));
        }
        let (sum, scale) = self.sum(&x_k_tuples(self.f.arity(), k));
        if let Some(grade) = sum.significant_nonscalar_grade(scale) {
            return Err(GaError::NonScalar {
                context: format!("Vieta sum for C_{k} ({})", self.f.formula.name),
                grade,
            });
        }
        let c = sum.scalar_part().clone();
        Ok(if k % 2 == 1 { c } else { -c })
    }
}

fn local_mask(mask: u32, first: usize, width: usize) -> u32 {
    (mask >> first) & ((1u32 << width) - 1)
}

fn first_slot(expr: &Expr) -> usize {
    match expr {
        Expr::Slot { index } => *index,
        Expr::Product { factors } => first_slot(&factors[0]),
        Expr::Conjugation { arg, .. } => first_slot(arg),
    }
}

/// Raw sum of `F` over the given tuples, and the largest coefficient
/// magnitude seen among the summands.
pub fn sum_over_tuples<T: Scalar>(f: &FFunction, u: &Multivector<T>, tuples: &[u32]) -> (Multivector<T>, f64) {
    TupleEvaluator::new(f, u).sum(tuples)
}

fn check_dim<T: Scalar>(f: &FFunction, u: &Multivector<T>) -> Result<()> {
    if u.sig().n() != f.n() {
        return Err(GaError::MalformedFormula(format!(
            "F-function is for n = {}, got {}",
            f.n(),
            u.sig()
        )));
    }
    Ok(())
}

/// `C_k` from the tuple sum over `X(k)`, with the scalarity check.
pub fn vieta_coefficient<T: Scalar>(f: &FFunction, u: &Multivector<T>, k: usize) -> Result<T> {
    check_dim(f, u)?;
    TupleEvaluator::new(f, u).coefficient(k)
}

/// All `C_1..C_N` by the generalized Vieta formulas.
pub fn vieta_all<T: Scalar>(f: &FFunction, u: &Multivector<T>) -> Result<CharPoly<T>> {
    check_dim(f, u)?;
    let mut eval = TupleEvaluator::new(f, u);
    let coeffs = (1..=f.arity()).map(|k| eval.coefficient(k)).collect::<Result<Vec<_>>>()?;
    CharPoly::new(u.sig(), coeffs)
}

/// Ordered solutions `x_k` of `phi_U(x) = 0` with the Vandermonde elements
/// `v_k = P_(k-1)(x_k)` and `y_k = v_k x_k v_k^-1`.
#[derive(Debug, Clone)]
pub struct GelfandRetakhSet<T> {
    pub xs: Vec<Multivector<T>>,
    pub vs: Vec<Multivector<T>>,
    pub ys: Vec<Multivector<T>>,
}

/// `E_j(y_1..y_m) = sum_{i_1 < .. < i_j} y_{i_j} .. y_{i_1}` (descending order).
pub fn elementary_symmetric<T: Scalar>(ys: &[Multivector<T>], j: usize) -> Multivector<T> {
    let sig = ys.first().map(|y| y.sig()).expect("empty y list");
    let mut acc = Multivector::zero(sig);
    if j == 0 {
        return Multivector::one(sig);
    }
    for mask in x_k_tuples(ys.len(), j) {
        let mut term = Multivector::one(sig);
        for i in (0..ys.len()).rev().filter(|i| mask & (1 << i) != 0) {
            term = &term * &ys[i];
        }
        acc = &acc + &term;
    }
    acc
}

/// Runs the construction on an arbitrary ordered list of solutions.
pub fn gelfand_retakh<T: Scalar>(xs: Vec<Multivector<T>>) -> Result<GelfandRetakhSet<T>> {
    let sig = xs.first().map(|x| x.sig()).expect("empty solution list");
    let mut vs = Vec::with_capacity(xs.len());
    let mut ys: Vec<Multivector<T>> = Vec::with_capacity(xs.len());
    for (idx, x) in xs.iter().enumerate() {
        let k = idx + 1;
        // v_k = x^(k-1) - E_1 x^(k-2) + ... + (-1)^(k-1) E_(k-1)
        let mut v = Multivector::zero(sig);
        for j in 0..k {
            let e_j = if j == 0 { Multivector::one(sig) } else { elementary_symmetric(&ys, j) };
            let term = &e_j * &x.pow(k - 1 - j);
            v = if j % 2 == 0 { &v + &term } else { &v - &term };
        }
        let det = det_fl(&v);
        let scale = v.max_abs().powi(sig.char_degree() as i32);
        if det.is_zero() || det.is_negligible(scale) {
            return Err(GaError::NotGeneric { k });
        }
        let v_inv = inverse(&v).map_err(|_| GaError::NotGeneric { k })?;
        ys.push(&(&v * x) * &v_inv);
        vs.push(v);
    }
    Ok(GelfandRetakhSet { xs, vs, ys })
}

/// The construction on the ordered solution sets used for `n <= 3`:
/// `(U, hat U)`, `(U, tilde U)` and `(U, hat tilde U, hat U, tilde U)`.
pub fn gelfand_retakh_ys<T: Scalar>(u: &Multivector<T>) -> Result<GelfandRetakhSet<T>> {
    let xs = match u.sig().n() {
        1 => vec![u.clone(), u.hat()],
        2 => vec![u.clone(), u.tilde()],
        3 => vec![u.clone(), u.tilde().hat(), u.hat(), u.tilde()],
        n => return Err(GaError::DimensionTooLarge { n, max: 3 }),
    };
    gelfand_retakh(xs)
}

impl<T: Scalar> GelfandRetakhSet<T> {
    /// `a_k = (-1)^(k+1) E_k(y_1..y_N)` for `k = 1..N`, each checked scalar.
    pub fn coefficients(&self) -> Result<Vec<T>> {
        (1..=self.ys.len())
            .map(|k| {
                let e = elementary_symmetric(&self.ys, k);
                let scale = self.ys.iter().map(|y| y.max_abs()).fold(1.0, f64::max).powi(k as i32);
                if let Some(grade) = e.significant_nonscalar_grade(scale) {
                    return Err(GaError::NonScalar {
                        context: format!("Gelfand-Retakh a_{k}"),
                        grade,
                    });
                }
                let c = e.scalar_part().clone();
                Ok(if k % 2 == 1 { c } else { -c })
            })
            .collect()
    }
}

/// Result of comparing eigenvalues against the `y_k` for `n <= 2`.
#[derive(Debug, Clone)]
pub struct EigenReport {
    /// `<U>_0 +- sqrt(S)` with `S = (U - <U>_0)^2`.
    pub lambdas: [Complex64; 2],
    /// `<U>_0 +- (U - <U>_0)`.
    pub ys: [Multivector<f64>; 2],
    pub radicand: f64,
    pub c1: f64,
    pub c2: f64,
    /// `lambda_1 + lambda_2 = C_1`.
    pub sum_matches: bool,
    /// `lambda_1 lambda_2 = -C_2`.
    pub product_matches: bool,
    /// The `lambda`s equal the `y`s, which happens iff `U` is a scalar.
    pub coincide: bool,
}

pub fn eigen_compare(u: &Multivector<f64>) -> Result<EigenReport> {
    let sig = u.sig();
    if sig.n() > 2 {
        return Err(GaError::DimensionTooLarge { n: sig.n(), max: 2 });
    }
    let a = *u.scalar_part();
    let part = u.add_scalar(&-a);
    let sq = &part * &part;
    if let Some(grade) = sq.significant_nonscalar_grade(part.max_abs().powi(2)) {
        return Err(GaError::NonScalar {
            context: "eigenvalue radicand".into(),
            grade,
        });
    }
    let s = *sq.scalar_part();
    let root = if s >= 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    };
    let lambdas = [Complex64::new(a, 0.0) + root, Complex64::new(a, 0.0) - root];
    let ys = [&Multivector::scalar(sig, a) + &part, &Multivector::scalar(sig, a) - &part];
    let cp = fl_coefficients(u);
    let (c1, c2) = (*cp.coefficient(1), *cp.coefficient(2));
    let close = |x: Complex64, y: f64| (x - y).norm() <= 1e-12 + 1e-9 * x.norm().max(y.abs());
    Ok(EigenReport {
        sum_matches: close(lambdas[0] + lambdas[1], c1),
        product_matches: close(lambdas[0] * lambdas[1], -c2),
        coincide: part.is_zero(),
        lambdas,
        ys,
        radicand: s,
        c1,
        c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::signature::{BladeIndex, Signature};

    type Mv = Multivector<Rational>;

    fn int(v: i64) -> Rational {
        Rational::from(v)
    }

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn note_two_bodies() {
        let show = |n, fam| f_function(n, fam).unwrap().formula().terms[0].expr.to_string();
        assert_eq!(show(1, Family::Triangle), "(x1 hat[x2])");
        assert_eq!(show(2, Family::Triangle), "(x1 hat[tilde[x2]])");
        assert_eq!(show(3, Family::Triangle), "(x1 hat[x2] tilde[x3] hat[tilde[x4]])");
        assert_eq!(show(4, Family::Triangle), "(x1 hat[tilde[x2]] delta3[(hat[x3] tilde[x4])])");
        assert_eq!(
            show(5, Family::Triangle),
            "(x1 hat[tilde[x2]] hat[x3] tilde[x4] delta3[(hat[x5] tilde[x6] x7 hat[tilde[x8]])])"
        );
        let f6 = f_function(6, Family::Triangle).unwrap();
        let terms = &f6.formula().terms;
        assert_eq!(
            terms[0].expr.to_string(),
            "(x1 tilde[x2] hat[x3] hat[tilde[x4]] delta3[(hat[x5] hat[tilde[x6]] x7 tilde[x8])])"
        );
        assert_eq!(
            terms[1].expr.to_string(),
            "(x1 tilde[x2] delta3[(delta3[(hat[x3] hat[tilde[x4]])] delta3[(delta3[(hat[x5] hat[tilde[x6]])] delta3[(x7 tilde[x8])])])])"
        );
        assert_eq!(terms[0].weight, Rational::new(1, 3));
        assert_eq!(
            show(5, Family::BarTildeHat),
            "(x1 hat[tilde[x2]] hat[x3] tilde[x4] bar[(x5 hat[tilde[x6]] hat[x7] tilde[x8])])"
        );
    }

    #[test]
    fn tuple_counts() {
        for n in [2usize, 4, 8] {
            for k in 0..=n {
                let expect = (0..k).fold(1usize, |acc, t| acc * (n - t) / (t + 1));
                assert_eq!(x_k_tuples(n, k).len(), expect);
            }
        }
        assert_eq!(x_k_tuples(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn empty_tuple_is_one() {
        for n in 1..=6 {
            let s = Signature::with_dim(n)[0];
            let u = Mv::generator(s, 1).unwrap();
            for f in crate::formula::catalog(n).unwrap() {
                let f = FFunction::new(f);
                let (sum, _) = sum_over_tuples(&f, &u, &[0]);
                assert_eq!(sum, Mv::one(s));
            }
        }
    }

    #[test]
    fn n3_first_coefficient_is_four_scalar_parts() {
        let s = sig(2, 1);
        let coeffs: Vec<Rational> = (0..8).map(|i| int(i * 3 - 7)).collect();
        let u = Mv::from_coeffs(s, coeffs).unwrap();
        let f = f_function(3, Family::Triangle).unwrap();
        assert_eq!(vieta_coefficient(&f, &u, 1).unwrap(), int(4) * u.scalar_part().clone());
        let sum = &(&(&u + &u.hat()) + &u.tilde()) + &u.tilde().hat();
        assert_eq!(sum, Mv::scalar(s, int(4) * u.scalar_part().clone()));
    }

    #[test]
    fn last_coefficient_is_minus_det() {
        let s = sig(1, 2);
        let u = Mv::from_coeffs(s, (0..8).map(|i| int((i * 5) % 7 - 3)).collect()).unwrap();
        let f = f_function(3, Family::Triangle).unwrap();
        assert_eq!(vieta_coefficient(&f, &u, 4).unwrap(), -det_fl(&u));
        assert!(vieta_coefficient(&f, &u, 0).is_err());
        assert!(vieta_coefficient(&f, &u, 5).is_err());
    }

    #[test]
    fn trivial_inputs() {
        for s in Signature::all() {
            let f = f_function(s.n(), Family::Triangle).unwrap();
            assert!(vieta_all(&f, &Mv::zero(s)).unwrap().coeffs().iter().all(num_traits::Zero::is_zero));
            assert_eq!(vieta_all(&f, &Mv::one(s)).unwrap(), fl_coefficients(&Mv::one(s)));
        }
    }

    #[test]
    fn gelfand_retakh_n1() {
        let s = sig(1, 0);
        let u = Mv::from_coeffs(s, vec![int(3), int(2)]).unwrap();
        let set = gelfand_retakh_ys(&u).unwrap();
        assert_eq!(set.vs[0], Mv::one(s));
        assert_eq!(set.vs[1], Mv::generator(s, 1).unwrap().scale(&int(-4)));
        assert_eq!(set.ys[1], u.hat());
        assert_eq!(set.coefficients().unwrap(), fl_coefficients(&u).coeffs());
        let scalar = Mv::scalar(s, int(3));
        assert!(matches!(gelfand_retakh_ys(&scalar), Err(GaError::NotGeneric { k: 2 })));
    }

    #[test]
    fn gelfand_retakh_n2() {
        let s = sig(1, 1);
        let u = Mv::from_coeffs(s, vec![int(1), int(2), int(-3), int(5)]).unwrap();
        let set = gelfand_retakh_ys(&u).unwrap();
        assert_eq!(set.ys[1], u.tilde().hat());
        assert_eq!(set.coefficients().unwrap(), fl_coefficients(&u).coeffs());
        let mut no_bivector = u.clone();
        no_bivector.set_coeff(BladeIndex(3), int(0));
        assert!(matches!(gelfand_retakh_ys(&no_bivector), Err(GaError::NotGeneric { k: 2 })));
    }

    #[test]
    fn gelfand_retakh_n3() {
        let s = sig(3, 0);
        let u = Mv::from_coeffs(s, vec![int(1), int(2), int(-3), int(5), int(4), int(-1), int(2), int(7)]).unwrap();
        let set = gelfand_retakh_ys(&u).unwrap();
        for (x, y) in set.xs.iter().zip(&set.ys) {
            assert_eq!(x, y);
        }
        let coeffs = set.coefficients().unwrap();
        assert_eq!(coeffs, fl_coefficients(&u).coeffs());
        // C_4 = -tilde(U) hat(U) hat(tilde(U)) U
        let c4 = &(&(&u.tilde() * &u.hat()) * &u.tilde().hat()) * &u;
        assert_eq!(Mv::scalar(s, -coeffs[3].clone()), c4);
        assert!(gelfand_retakh_ys(&Mv::one(sig(4, 0))).is_err());
    }

    #[test]
    fn eigen_compare_worked_example() {
        let s = sig(2, 0);
        let u = Multivector::<f64>::from_coeffs(s, vec![5.0, 0.0, 0.5, 0.5]).unwrap();
        let r = eigen_compare(&u).unwrap();
        for l in r.lambdas {
            assert!((l - 5.0).norm() < 1e-12);
        }
        assert_eq!(r.ys[0].coeffs(), &[5.0, 0.0, 0.5, 0.5]);
        assert_eq!(r.ys[1].coeffs(), &[5.0, 0.0, -0.5, -0.5]);
        assert_eq!((r.c1, r.c2), (10.0, -25.0));
        assert!(r.sum_matches && r.product_matches && !r.coincide);
    }

    #[test]
    fn eigen_compare_n1() {
        let s = sig(1, 0);
        let scalar = Multivector::<f64>::scalar(s, 4.0);
        let r = eigen_compare(&scalar).unwrap();
        assert!(r.coincide);
        assert_eq!(r.lambdas, [Complex64::new(4.0, 0.0); 2]);
        let u = Multivector::<f64>::from_coeffs(s, vec![2.0, -3.0]).unwrap();
        let r = eigen_compare(&u).unwrap();
        assert!((r.lambdas[0] - 5.0).norm() < 1e-12 && (r.lambdas[1] + 1.0).norm() < 1e-12);
        assert!(r.sum_matches && r.product_matches);
        let s = sig(0, 1);
        let u = Multivector::<f64>::from_coeffs(s, vec![2.0, -3.0]).unwrap();
        let r = eigen_compare(&u).unwrap();
        assert!((r.lambdas[0] - Complex64::new(2.0, 3.0)).norm() < 1e-12);
        assert!(r.sum_matches && r.product_matches);
        assert!(eigen_compare(&Multivector::<f64>::one(sig(3, 0))).is_err());
    }
}
