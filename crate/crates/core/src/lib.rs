//! Characteristic polynomials, determinants, adjugates and inverses of
//! multivectors in the real Clifford algebras `G(p,q)` with `p + q <= 6`.
//!
//! Every quantity can be computed several independent ways: the
//! Faddeev–LeVerrier recursion ([`charpoly`]), closed determinant formulas
//! built from grade-sign conjugations ([`formula`]), generalized Vieta sums
//! ([`vieta`]) and a complex matrix representation ([`matrix`]). Over the
//! exact [`Rational`] backend they agree bit for bit.
//!
//! ```
//! use ga_vieta::{fl_coefficients, Multivector, Rational, Signature};
//!
//! let sig = Signature::new(2, 0).unwrap();
//! let half = Rational::new(1, 2);
//! let u = Multivector::from_coeffs(
//!     sig,
//!     vec![Rational::from(5), Rational::from(0), half.clone(), half],
//! )
//! .unwrap();
//! let cp = fl_coefficients(&u);
//! assert_eq!(cp.coeffs(), &[Rational::from(10), Rational::from(-25)]);
//! assert_eq!(cp.det(), Rational::from(25));
//! ```

pub mod charpoly;
pub mod conjugation;
pub mod error;
pub mod formula;
pub mod linalg;
pub mod matrix;
pub mod methods;
pub mod multivector;
pub mod sample;
pub mod scalar;
pub mod signature;
pub mod vieta;

pub use charpoly::{adjugate, charpoly_interp, det_fl, fl_coefficients, inverse, CharPoly, FaddeevLeVerrier};
pub use conjugation::Conjugation;
pub use error::{GaError, Result};
pub use formula::{available_families, catalog, det_formula, formula_by_name, DetFormula, Expr, Family};
pub use matrix::{charpoly_matrix, det_matrix, eigenvalues, represent, ComplexMatrix, Representation};
pub use methods::Method;
pub use multivector::Multivector;
pub use scalar::{Rational, Scalar};
pub use signature::{BladeIndex, Signature};
pub use vieta::{
    eigen_compare, f_function, gelfand_retakh, gelfand_retakh_ys, vieta_all, vieta_coefficient, x_k_tuples,
    EigenReport, FFunction, GelfandRetakhSet,
};
