//! Complex matrix representation of `G(p,q)` and plain linear algebra on it.
//!
//! Even `n` uses a Jordan–Wigner chain of Pauli matrices of size
//! `2^(n/2)`. Odd `n` uses two diagonal blocks: the first `n-1` generators
//! repeat the even construction in both blocks and `e_n` is `+-c` times the
//! product of the others, with `c` in `{1, i}` fixing its square. Either way
//! the matrices are `N x N` and the map is injective on the real algebra.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::charpoly::CharPoly;
use crate::error::{GaError, Result};
use crate::multivector::Multivector;
use crate::scalar::Scalar;
use crate::signature::{BladeIndex, Signature};

/// Square matrix with complex entries over a [`Scalar`] field, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

fn c_magnitude<T: Scalar>(z: &Complex<T>) -> f64 {
    z.re.magnitude().hypot(z.im.magnitude())
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        ComplexMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] = out.data[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, f: &Complex<T>) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a.clone() * f.clone()).collect(),
        }
    }

    fn add_scaled_real(&mut self, other: &Self, f: &T) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.clone() + Complex::new(b.re.clone() * f.clone(), b.im.clone() * f.clone());
            }
        }
    }

    fn sub_diagonal(&self, c: &Complex<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] = out.data[i * self.dim + i].clone() - c.clone();
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.data[i * self.dim + i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.re.approx_eq(&b.re) && a.im.approx_eq(&b.im))
    }

    /// Product of the Euclidean row norms, an upper bound on `|det|`.
    pub fn hadamard_bound(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .map(|z| c_magnitude(z).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .product()
    }

    /// Determinant: Bareiss elimination over an exact field, partial pivoting
    /// on magnitude over floats.
    pub fn determinant(&self) -> Complex<T> {
        if T::EXACT {
            self.det_bareiss()
        } else {
            self.det_pivot()
        }
    }

    fn det_bareiss(&self) -> Complex<T> {
        let n = self.dim;
        let mut m: Vec<Vec<Complex<T>>> = self.data.chunks(n).map(|r| r.to_vec()).collect();
        let mut negate = false;
        let mut prev = Complex::<T>::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return Complex::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                    m[i][j] = v / prev.clone();
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    fn det_pivot(&self) -> Complex<T> {
        let n = self.dim;
        let mut m: Vec<Vec<Complex<T>>> = self.data.chunks(n).map(|r| r.to_vec()).collect();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| c_magnitude(&m[a][k]).total_cmp(&c_magnitude(&m[b][k])))
                .expect("non-empty range");
            if m[p][k].is_zero() {
                return Complex::zero();
            }
            if p != k {
                m.swap(k, p);
                det = -det;
            }
            det = det * m[k][k].clone();
            for i in k + 1..n {
                let f = m[i][k].clone() / m[k][k].clone();
                for j in k + 1..n {
                    let t = f.clone() * m[k][j].clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        det
    }
}

fn pauli<T: Scalar>(which: u8) -> ComplexMatrix<T> {
    let z = Complex::<T>::zero;
    let one = Complex::<T>::one;
    let i = || Complex::new(T::zero(), T::one());
    let rows = match which {
        0 => vec![vec![one(), z()], vec![z(), one()]],
        1 => vec![vec![z(), one()], vec![one(), z()]],
        2 => vec![vec![z(), -i()], vec![i(), z()]],
        _ => vec![vec![one(), z()], vec![z(), -one()]],
    };
    ComplexMatrix::from_rows(rows)
}

fn kron<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (na, nb) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let x = a.get(i, j);
            for k in 0..nb {
                for l in 0..nb {
                    out.set(i * nb + k, j * nb + l, x.clone() * b.get(k, l).clone());
                }
            }
        }
    }
    out
}

fn block_diag<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let h = a.dim;
    let mut out = ComplexMatrix::zeros(2 * h);
    for i in 0..h {
        for j in 0..h {
            out.set(i, j, a.get(i, j).clone());
            out.set(h + i, h + j, b.get(i, j).clone());
        }
    }
    out
}

/// Jordan–Wigner generators for `count` (even) generators whose metric signs
/// are given.
fn chain<T: Scalar>(metrics: &[i8]) -> Vec<ComplexMatrix<T>> {
    let slots = metrics.len() / 2;
    let i = Complex::new(T::zero(), T::one());
    metrics
        .iter()
        .enumerate()
        .map(|(idx, &eta)| {
            let slot = idx / 2;
            let mut m = ComplexMatrix::identity(1);
            for s in 0..slots {
                let factor = match s.cmp(&slot) {
                    std::cmp::Ordering::Less => pauli(3),
                    std::cmp::Ordering::Equal => pauli(if idx % 2 == 0 { 1 } else { 2 }),
                    std::cmp::Ordering::Greater => pauli(0),
                };
                m = kron(&m, &factor);
            }
            if eta < 0 {
                m.scale(&i)
            } else {
                m
            }
        })
        .collect()
}

/// The generator and blade matrices of one signature.
#[derive(Debug, Clone)]
pub struct Representation<T> {
    sig: Signature,
    generators: Vec<ComplexMatrix<T>>,
    blades: Vec<ComplexMatrix<T>>,
}

impl<T: Scalar> Representation<T> {
    /// Builds the representation and verifies the generator relations and
    /// the linear independence of all `2^n` blade images.
    pub fn new(sig: Signature) -> Result<Self> {
        let n = sig.n();
        let metrics: Vec<i8> = (1..=n).map(|a| sig.metric(a)).collect();
        let generators = if n % 2 == 0 {
            chain(&metrics)
        } else {
            let inner: Vec<ComplexMatrix<T>> = chain(&metrics[..n - 1]);
            let half = 1usize << ((n - 1) / 2);
            let omega = inner.iter().fold(ComplexMatrix::identity(half), |acc, g| acc.mul(g));
            let sq = omega.mul(&omega);
            let s: i8 = if sq == ComplexMatrix::identity(half) {
                1
            } else if sq == ComplexMatrix::identity(half).scale(&-Complex::one()) {
                -1
            } else {
                return Err(GaError::RepresentationCheck(format!("{sig}: pseudoscalar square is not +-I")));
            };
            let c = if metrics[n - 1] * s == 1 {
                Complex::one()
            } else {
                Complex::new(T::zero(), T::one())
            };
            let top = omega.scale(&c);
            let bottom = top.scale(&-Complex::one());
            let mut gens: Vec<ComplexMatrix<T>> = inner.iter().map(|g| block_diag(g, g)).collect();
            gens.push(block_diag(&top, &bottom));
            gens
        };

        let dim = sig.char_degree();
        let identity = ComplexMatrix::identity(dim);
        for a in 0..n {
            for b in 0..n {
                let ab = generators[a].mul(&generators[b]).add(&generators[b].mul(&generators[a]));
                let expect = if a == b {
                    identity.scale(&Complex::new(T::from_i64(2 * metrics[a] as i64), T::zero()))
                } else {
                    ComplexMatrix::zeros(dim)
                };
                if ab != expect {
                    return Err(GaError::RepresentationCheck(format!(
                        "{sig}: generators e{} and e{} break the anticommutation relation",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }

        let blades: Vec<ComplexMatrix<T>> = (0..sig.blade_count() as u32)
            .map(|mask| {
                BladeIndex(mask)
                    .generators()
                    .iter()
                    .fold(identity.clone(), |acc, &g| acc.mul(&generators[g - 1]))
            })
            .collect();

        let rep = Representation { sig, generators, blades };
        let rank = rep.blade_rank();
        if rank != sig.blade_count() {
            return Err(GaError::RepresentationCheck(format!(
                "{sig}: blade images span only {rank} of {} real dimensions",
                sig.blade_count()
            )));
        }
        Ok(rep)
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.char_degree()
    }

    /// `beta(e_a)`, 1-based.
    pub fn generator(&self, a: usize) -> &ComplexMatrix<T> {
        &self.generators[a - 1]
    }

    pub fn blade(&self, b: BladeIndex) -> &ComplexMatrix<T> {
        &self.blades[b.index()]
    }

    /// Real rank of the blade images, viewed as vectors in `R^(2 N^2)`.
    fn blade_rank(&self) -> usize {
        let mut rows: Vec<Vec<f64>> = self
            .blades
            .iter()
            .map(|m| m.data.iter().flat_map(|z| [z.re.to_f64(), z.im.to_f64()]).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col].abs() > 1e-9) else {
                continue;
            };
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][col] != 0.0 {
                    let f = rows[r][col] / rows[rank][col];
                    for c in col..cols {
                        rows[r][c] -= f * rows[rank][c];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// `beta(u) = sum_A u_A beta(e_A)`.
    pub fn represent(&self, u: &Multivector<T>) -> ComplexMatrix<T> {
        assert_eq!(u.sig(), self.sig, "signature mismatch");
        let mut out = ComplexMatrix::zeros(self.dim());
        for (b, c) in u.terms() {
            out.add_scaled_real(&self.blades[b.index()], c);
        }
        out
    }

    /// `det(beta(u))`, checked real.
    pub fn det(&self, u: &Multivector<T>) -> Result<T> {
        let m = self.represent(u);
        let d = m.determinant();
        real_part(d, m.hadamard_bound())
    }

    /// Characteristic coefficients of `beta(u)` by the trace recursion
    /// `M_1 = A`, `c_k = tr(M_k)/k`, `M_(k+1) = A (M_k - c_k I)`.
    pub fn charpoly(&self, u: &Multivector<T>) -> Result<CharPoly<T>> {
        let a = self.represent(u);
        let n = self.dim();
        let scale = a.hadamard_bound().max(1.0);
        let mut coeffs = Vec::with_capacity(n);
        let mut m = a.clone();
        for k in 1..=n {
            let c = m.trace() / Complex::new(T::from_i64(k as i64), T::zero());
            coeffs.push(real_part(c.clone(), scale.powf(k as f64 / n as f64) * binomial(n, k))?);
            if k < n {
                m = a.mul(&m.sub_diagonal(&c));
            }
        }
        CharPoly::new(self.sig, coeffs)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn real_part<T: Scalar>(z: Complex<T>, scale: f64) -> Result<T> {
    if z.im.is_zero() || (!T::EXACT && z.im.is_negligible(scale)) {
        Ok(z.re)
    } else {
        Err(GaError::NonRealDeterminant { imag: z.im.to_string() })
    }
}

pub fn represent<T: Scalar>(u: &Multivector<T>) -> Result<ComplexMatrix<T>> {
    Ok(Representation::new(u.sig())?.represent(u))
}

pub fn det_matrix<T: Scalar>(u: &Multivector<T>) -> Result<T> {
    Representation::new(u.sig())?.det(u)
}

pub fn charpoly_matrix<T: Scalar>(u: &Multivector<T>) -> Result<CharPoly<T>> {
    Representation::new(u.sig())?.charpoly(u)
}

/// Eigenvalues of `beta(u)`, i.e. the roots of `phi_U`, sorted by
/// `(re, im)`.
pub fn eigenvalues(u: &Multivector<f64>) -> Result<Vec<Complex64>> {
    let cp = charpoly_matrix(u)?;
    polynomial_roots(&cp.monomial_coeffs())
}

const MAX_SWEEPS_PER_ROOT: usize = 200;

/// Roots of a monic polynomial given by ascending coefficients
/// `[a_0, .., a_(N-1), 1]`, via QR iteration on its companion matrix.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    assert!(n >= 1 && coeffs[n] == 1.0, "polynomial must be monic of degree >= 1");
    let mut h = vec![vec![Complex64::zero(); n]; n];
    for j in 0..n {
        h[0][j] = Complex64::new(-coeffs[n - 1 - j], 0.0);
    }
    for i in 1..n {
        h[i][i - 1] = Complex64::one();
    }
    let raw = hessenberg_eigenvalues(h)?;
    let poly: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let mut roots = polish(&poly, raw);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Givens rotations and Wilkinson shifts.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>> {
    let mut hi = h.len();
    let mut out = Vec::with_capacity(hi);
    let mut iter = 0usize;
    let mut total = 0usize;
    let cap = MAX_SWEEPS_PER_ROOT * h.len().max(1);
    while hi > 0 {
        if hi == 1 {
            out.push(h[0][0]);
            break;
        }
        for l in 1..hi {
            let s = h[l - 1][l - 1].norm() + h[l][l].norm();
            if h[l][l - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[l][l - 1] = Complex64::zero();
            }
        }
        if h[hi - 1][hi - 2].is_zero() {
            out.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iter = 0;
            continue;
        }
        let lo = (1..hi - 1).rev().find(|&l| h[l][l - 1].is_zero()).unwrap_or(0);
        iter += 1;
        total += 1;
        if total > cap {
            return Err(GaError::NoConvergence { iterations: total });
        }

        let (a, b, c, d) = (h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
        let shift = if iter % 11 == 10 {
            d + h[hi - 1][hi - 2].norm() * 0.75
        } else {
            let half_tr = (a + d) * 0.5;
            let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
            let (r1, r2) = (half_tr + disc, half_tr - disc);
            if (r1 - d).norm() <= (r2 - d).norm() {
                r1
            } else {
                r2
            }
        };

        for k in lo..hi {
            h[k][k] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (0.0, Complex64::one())
            } else if x.is_zero() {
                (0.0, y.conj() / r)
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for j in k..hi {
                let (p, q) = (h[k][j], h[k + 1][j]);
                h[k][j] = p * cs + sn * q;
                h[k + 1][j] = -sn.conj() * p + q * cs;
            }
            rotations.push((cs, sn));
        }
        for (off, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + off;
            for row in h.iter_mut().take((k + 2).min(hi)).skip(lo) {
                let (p, q) = (row[k], row[k + 1]);
                row[k] = p * cs + q * sn.conj();
                row[k + 1] = -p * sn + q * cs;
            }
        }
        for k in lo..hi {
            h[k][k] += shift;
        }
    }
    Ok(out)
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

/// `sum |a_i| |z|^i`, the rounding scale of evaluating `p` at `z`.
fn eval_scale(p: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    p.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn newton(p: &[Complex64], start: Complex64) -> Complex64 {
    let dp = derivative(p);
    let mut z = start;
    let mut best = horner(p, z).norm();
    for _ in 0..50 {
        let d = horner(&dp, z);
        if d.is_zero() {
            break;
        }
        let next = z - horner(p, z) / d;
        let val = horner(p, next).norm();
        if !(val < best) {
            if val == best {
                z = next;
            }
            break;
        }
        best = val;
        z = next;
    }
    z
}

/// Refines raw QR eigenvalues.
///
/// A root of multiplicity `m` comes back from QR as a ring of `m` values
/// whose mean is accurate. Candidate clusters are formed at decreasing radii;
/// each is replaced by the root of `p^(m-1)` nearest its mean, provided
/// `p, .., p^(m-1)` all vanish there. Remaining roots get plain Newton steps.
fn polish(p: &[Complex64], mut roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = roots.len();
    let mut fixed = vec![false; n];
    for rel in [0.25, 0.05, 1e-2, 1e-3, 1e-5] {
        let open: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
        let mut label: Vec<usize> = (0..n).collect();
        for (x, &i) in open.iter().enumerate() {
            for &j in &open[x + 1..] {
                if (roots[i] - roots[j]).norm() <= rel * roots[i].norm().max(1.0) {
                    let (keep, drop) = (label[i], label[j]);
                    label.iter_mut().filter(|l| **l == drop).for_each(|l| *l = keep);
                }
            }
        }
        for &i in &open {
            if fixed[i] {
                continue;
            }
            let members: Vec<usize> = open.iter().copied().filter(|&j| label[j] == label[i]).collect();
            let m = members.len();
            if m < 2 {
                continue;
            }
            let mean = members.iter().map(|&j| roots[j]).sum::<Complex64>() / m as f64;
            let mut derivs = vec![p.to_vec()];
            for _ in 1..m {
                let next = derivative(derivs.last().expect("non-empty"));
                derivs.push(next);
            }
            let z = newton(&derivs[m - 1], mean);
            let vanishes = derivs[..m]
                .iter()
                .all(|d| horner(d, z).norm() <= 1e-9 * eval_scale(d, z).max(f64::MIN_POSITIVE));
            if vanishes {
                for &j in &members {
                    roots[j] = z;
                    fixed[j] = true;
                }
            }
        }
    }
    for i in 0..n {
        if !fixed[i] {
            roots[i] = newton(p, roots[i]);
        }
    }
    roots
}
