//! Uniform access to every way of computing the characteristic polynomial.

use std::fmt;
use std::str::FromStr;

use crate::charpoly::{adjugate, charpoly_interp, fl_coefficients, CharPoly};
use crate::error::{GaError, Result};
use crate::formula::{available_families, det_formula, Family};
use crate::matrix::{charpoly_matrix, det_matrix};
use crate::multivector::Multivector;
use crate::scalar::Scalar;
use crate::vieta::{f_function, vieta_all, vieta_coefficient};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Faddeev–LeVerrier recursion.
    Fl,
    /// Trace recursion on the matrix representation.
    Matrix,
    /// Interpolation of the matrix determinant at `0..N`.
    Interp,
    /// Closed determinant formula; the other coefficients by interpolation.
    Closed(Family),
    /// Generalized Vieta sums of the family's F-function.
    Vieta(Family),
}

impl Method {
    /// Every method that applies to dimension `n`.
    pub fn all_for(n: usize) -> Vec<Method> {
        let mut out = vec![Method::Fl, Method::Matrix, Method::Interp];
        let fams = available_families(n);
        out.extend(fams.iter().map(|&f| Method::Closed(f)));
        out.extend(fams.iter().map(|&f| Method::Vieta(f)));
        out
    }

    pub fn charpoly<T: Scalar>(self, u: &Multivector<T>) -> Result<CharPoly<T>> {
        let n = u.sig().n();
        match self {
            Method::Fl => Ok(fl_coefficients(u)),
            Method::Matrix => charpoly_matrix(u),
            Method::Interp => charpoly_interp(u, det_matrix),
            Method::Closed(f) => {
                let formula = det_formula(n, f)?;
                charpoly_interp(u, |x| formula.evaluate_det(x))
            }
            Method::Vieta(f) => vieta_all(&f_function(n, f)?, u),
        }
    }

    pub fn det<T: Scalar>(self, u: &Multivector<T>) -> Result<T> {
        let n = u.sig().n();
        match self {
            Method::Fl => Ok(fl_coefficients(u).det()),
            Method::Matrix | Method::Interp => det_matrix(u),
            Method::Closed(f) => det_formula(n, f)?.evaluate_det(u),
            Method::Vieta(f) => {
                let f = f_function(n, f)?;
                Ok(-vieta_coefficient(&f, u, f.arity())?)
            }
        }
    }

    /// The adjugate, for methods that produce one.
    pub fn adjugate<T: Scalar>(self, u: &Multivector<T>) -> Option<Result<Multivector<T>>> {
        match self {
            Method::Fl => Some(Ok(adjugate(u))),
            Method::Closed(f) => Some(det_formula(u.sig().n(), f).and_then(|d| d.evaluate_adjugate(u))),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Fl => f.write_str("fl"),
            Method::Matrix => f.write_str("matrix"),
            Method::Interp => f.write_str("interp"),
            Method::Closed(fam) => write!(f, "closed-{fam}"),
            Method::Vieta(fam) => write!(f, "vieta-{fam}"),
        }
    }
}

impl FromStr for Method {
    type Err = GaError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GaError::UnknownMethod(s.to_string());
        match s {
            "fl" => Ok(Method::Fl),
            "matrix" => Ok(Method::Matrix),
            "interp" => Ok(Method::Interp),
            _ => {
                if let Some(rest) = s.strip_prefix("closed-") {
                    rest.parse().map(Method::Closed).map_err(|_| bad())
                } else if let Some(rest) = s.strip_prefix("vieta-") {
                    rest.parse().map(Method::Vieta).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}
