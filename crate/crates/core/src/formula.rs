//! Basis-free determinant formulas stored as term tables.
//!
//! Every formula has the shape `Det(U) = sum_j w_j H_j` where each term is a
//! product tree over exactly `N` occurrences ("slots") of `U`, possibly wrapped
//! in conjugations, and `sum_j w_j = 1`. Slots are numbered left to right
//! across each term, which is what turns a formula into the `N`-argument
//! function used by the generalized Vieta expansion.
//!
//! Families, by which unary operations the terms may use:
//!
//! | family          | operations                 | n covered  |
//! |-----------------|----------------------------|------------|
//! | `Triangle`      | hat, tilde, `Delta_j`      | 1..=6      |
//! | `Bar`           | bar                        | 1..=4      |
//! | `BarTilde`      | bar, tilde                 | 1..=6      |
//! | `BarTildeHat`   | bar, tilde, hat            | 1..=5      |
//!
//! Cells with no known minimal formula (bar-only for n = 5, 6 and
//! bar/tilde/hat for n = 6) are absent rather than filled with a non-minimal
//! substitute.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conjugation::Conjugation;
use crate::error::{GaError, Result};
use crate::multivector::Multivector;
use crate::scalar::{Rational, Scalar};
use crate::signature::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Triangle,
    Bar,
    BarTilde,
    BarTildeHat,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Triangle, Family::Bar, Family::BarTilde, Family::BarTildeHat];

    pub fn name(self) -> &'static str {
        match self {
            Family::Triangle => "triangle",
            Family::Bar => "bar",
            Family::BarTilde => "bar-tilde",
            Family::BarTildeHat => "bar-tilde-hat",
        }
    }

    /// Whether a term of this family may use `c`.
    pub fn allows(self, c: Conjugation) -> bool {
        match self {
            Family::Triangle => matches!(
                c,
                Conjugation::GradeInvolution | Conjugation::Reversion | Conjugation::Delta(_)
            ),
            Family::Bar => c == Conjugation::Bar,
            Family::BarTilde => matches!(c, Conjugation::Bar | Conjugation::Reversion),
            Family::BarTildeHat => matches!(
                c,
                Conjugation::Bar | Conjugation::Reversion | Conjugation::GradeInvolution
            ),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

/// Node of a term tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Slot { index: usize },
    Product { factors: Vec<Expr> },
    Conjugation { kind: Conjugation, arg: Box<Expr> },
}

impl Expr {
    /// Number of slot leaves.
    pub fn slot_count(&self) -> usize {
        match self {
            Expr::Slot { .. } => 1,
            Expr::Product { factors } => factors.iter().map(Expr::slot_count).sum(),
            Expr::Conjugation { arg, .. } => arg.slot_count(),
        }
    }

    /// Slot indices in left-to-right order.
    pub fn slots(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_slots(&mut out);
        out
    }

    fn collect_slots(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Slot { index } => out.push(*index),
            Expr::Product { factors } => factors.iter().for_each(|f| f.collect_slots(out)),
            Expr::Conjugation { arg, .. } => arg.collect_slots(out),
        }
    }

    fn conjugations(&self, out: &mut Vec<Conjugation>) {
        match self {
            Expr::Slot { .. } => {}
            Expr::Product { factors } => factors.iter().for_each(|f| f.conjugations(out)),
            Expr::Conjugation { kind, arg } => {
                out.push(*kind);
                arg.conjugations(out);
            }
        }
    }

    fn renumber(&mut self, next: &mut usize) {
        match self {
            Expr::Slot { index } => {
                *index = *next;
                *next += 1;
            }
            Expr::Product { factors } => factors.iter_mut().for_each(|f| f.renumber(next)),
            Expr::Conjugation { arg, .. } => arg.renumber(next),
        }
    }

    /// Evaluates with slot `i` bound to `slot(i)`; `None` stands for the
    /// identity `e`, which every conjugation fixes and every product absorbs.
    pub fn eval<T: Scalar>(&self, slot: &dyn Fn(usize) -> Option<Multivector<T>>) -> Option<Multivector<T>> {
        match self {
            Expr::Slot { index } => slot(*index),
            Expr::Conjugation { kind, arg } => arg.eval(slot).map(|v| v.conjugate_unchecked(*kind)),
            Expr::Product { factors } => factors.iter().fold(None, |acc, f| match (acc, f.eval(slot)) {
                (None, v) => v,
                (a, None) => a,
                (Some(a), Some(b)) => Some(&a * &b),
            }),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Slot { index } => write!(f, "x{}", index + 1),
            Expr::Product { factors } => {
                f.write_str("(")?;
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Expr::Conjugation { kind, arg } => write!(f, "{kind}[{arg}]"),
        }
    }
}

/// A weighted term `w * H(x_1..x_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    /// Weight as `"num/den"` or an integer string.
    #[serde(with = "weight_serde")]
    pub weight: Rational,
    pub expr: Expr,
}

mod weight_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| serde::de::Error::custom(format!("bad weight {s:?}")))
    }
}

/// Which end of a term carries the bare factor `U` that the adjugate drops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSide {
    Left,
    Right,
}

/// A cataloged determinant formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetFormula {
    pub name: String,
    pub n: usize,
    pub family: Family,
    pub slots: usize,
    pub factor_side: FactorSide,
    pub terms: Vec<Term>,
}

impl DetFormula {
    fn build(name: &str, n: usize, family: Family, side: FactorSide, terms: Vec<(Rational, Expr)>) -> Self {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(weight, mut expr)| {
                expr.renumber(&mut 0);
                Term { weight, expr }
            })
            .collect();
        DetFormula {
            name: name.to_string(),
            n,
            family,
            slots: terms[0].expr.slot_count(),
            factor_side: side,
            terms,
        }
    }

    /// Checks slot counts, weight normalization, slot numbering, the family's
    /// allowed operations and the presence of the bare common factor.
    pub fn validate(&self) -> Result<()> {
        let sig_n = 1usize << ((self.n + 1) / 2);
        let bad = |msg: String| Err(GaError::MalformedFormula(format!("{}: {msg}", self.name)));
        if self.slots != sig_n {
            return bad(format!("{} slots, expected {sig_n}", self.slots));
        }
        let mut total = Rational::from(0);
        for t in &self.terms {
            total = total + t.weight.clone();
            if t.expr.slots() != (0..sig_n).collect::<Vec<_>>() {
                return bad(format!("slots not numbered 0..{sig_n} left to right: {}", t.expr));
            }
            let mut conj = Vec::new();
            t.expr.conjugations(&mut conj);
            if let Some(c) = conj.iter().find(|c| !self.family.allows(**c)) {
                return bad(format!("{c} not allowed in family {}", self.family));
            }
            if self.split_factor(&t.expr).is_none() {
                return bad(format!("term has no bare {:?} factor: {}", self.factor_side, t.expr));
            }
        }
        if total != Rational::from(1) {
            return bad(format!("weights sum to {total}"));
        }
        Ok(())
    }

    /// Splits a term into the bare factor slot and the remaining product.
    fn split_factor(&self, expr: &Expr) -> Option<Expr> {
        let Expr::Product { factors } = expr else {
            return None;
        };
        let (bare, rest) = match self.factor_side {
            FactorSide::Left => (factors.first()?, factors[1..].to_vec()),
            FactorSide::Right => (factors.last()?, factors[..factors.len() - 1].to_vec()),
        };
        matches!(bare, Expr::Slot { .. }).then_some(Expr::Product { factors: rest })
    }

    /// `sum_j w_j H_j` with slot values from `slot`, plus the largest
    /// coefficient magnitude among the unweighted term values.
    pub fn eval_with<T: Scalar>(&self, sig: Signature, slot: &dyn Fn(usize) -> Option<Multivector<T>>) -> (Multivector<T>, f64) {
        let mut acc = Multivector::zero(sig);
        let mut scale: f64 = 0.0;
        for t in &self.terms {
            let v = t.expr.eval(slot).unwrap_or_else(|| Multivector::one(sig));
            scale = scale.max(v.max_abs());
            acc.add_scaled(&v, &T::from_rational(&t.weight));
        }
        (acc, scale)
    }

    fn check_dim<T: Scalar>(&self, u: &Multivector<T>) -> Result<()> {
        if u.sig().n() != self.n {
            return Err(GaError::MalformedFormula(format!(
                "{} is for n = {}, got {}",
                self.name,
                self.n,
                u.sig()
            )));
        }
        Ok(())
    }

    /// `Det(U)` by substituting `U` into every slot.
    pub fn evaluate_det<T: Scalar>(&self, u: &Multivector<T>) -> Result<T> {
        self.check_dim(u)?;
        let (value, scale) = self.eval_with(u.sig(), &|_| Some(u.clone()));
        if let Some(grade) = value.significant_nonscalar_grade(scale) {
            return Err(GaError::NonScalar {
                context: format!("formula {}", self.name),
                grade,
            });
        }
        Ok(value.scalar_part().clone())
    }

    /// `Adj(U) = sum_j w_j H_j(U)` with the bare common factor removed.
    pub fn evaluate_adjugate<T: Scalar>(&self, u: &Multivector<T>) -> Result<Multivector<T>> {
        self.check_dim(u)?;
        let sig = u.sig();
        let mut acc = Multivector::zero(sig);
        for t in &self.terms {
            let rest = self
                .split_factor(&t.expr)
                .ok_or_else(|| GaError::MalformedFormula(format!("{}: no bare factor", self.name)))?;
            let v = rest.eval(&|_| Some(u.clone())).unwrap_or_else(|| Multivector::one(sig));
            acc.add_scaled(&v, &T::from_rational(&t.weight));
        }
        Ok(acc)
    }

    /// Same terms, ignoring name and dimension.
    pub fn same_table(&self, other: &DetFormula) -> bool {
        self.terms == other.terms
    }
}

// Builders. Slot indices are assigned by `DetFormula::build`.

fn u() -> Expr {
    Expr::Slot { index: 0 }
}

fn conj(kind: Conjugation, e: Expr) -> Expr {
    Expr::Conjugation { kind, arg: Box::new(e) }
}

fn hat(e: Expr) -> Expr {
    conj(Conjugation::GradeInvolution, e)
}

fn tilde(e: Expr) -> Expr {
    conj(Conjugation::Reversion, e)
}

/// hat(tilde(e))
fn ht(e: Expr) -> Expr {
    hat(tilde(e))
}

fn tri(e: Expr) -> Expr {
    conj(Conjugation::TRIANGLE, e)
}

fn bar(e: Expr) -> Expr {
    conj(Conjugation::Bar, e)
}

fn prod(factors: Vec<Expr>) -> Expr {
    Expr::Product { factors }
}

fn w(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// `U bar(U)`.
fn bar_pair() -> Vec<(Rational, Expr)> {
    vec![(w(1, 1), prod(vec![u(), bar(u())]))]
}

/// `1/3 X X bar(X X) + 2/3 X bar(bar(X) bar(bar(X) bar(X)))`, with the
/// leading `X` spliced into the top-level product.
fn bar_two_term(x: fn() -> Vec<Expr>) -> Vec<(Rational, Expr)> {
    let group = || {
        let mut v = x();
        if v.len() == 1 {
            v.remove(0)
        } else {
            prod(v)
        }
    };
    let mut first = x();
    first.extend(x());
    first.push(bar(prod([x(), x()].concat())));
    let mut second = x();
    second.push(bar(prod(vec![bar(group()), bar(prod(vec![bar(group()), bar(group())]))])));
    vec![(w(1, 3), prod(first)), (w(2, 3), prod(second))]
}

/// `U tilde(U) bar(U tilde(U))`.
fn bar_tilde_one_term() -> Vec<(Rational, Expr)> {
    vec![(w(1, 1), prod(vec![u(), tilde(u()), bar(prod(vec![u(), tilde(u())]))]))]
}

fn triangle(n: usize) -> Vec<(Rational, Expr)> {
    match n {
        1 => vec![(w(1, 1), prod(vec![u(), hat(u())]))],
        2 => vec![(w(1, 1), prod(vec![u(), ht(u())]))],
        3 => vec![(w(1, 1), prod(vec![u(), hat(u()), tilde(u()), ht(u())]))],
        4 => vec![(w(1, 1), prod(vec![u(), ht(u()), tri(prod(vec![hat(u()), tilde(u())]))]))],
        5 => vec![(
            w(1, 1),
            prod(vec![
                u(),
                ht(u()),
                hat(u()),
                tilde(u()),
                tri(prod(vec![hat(u()), tilde(u()), u(), ht(u())])),
            ]),
        )],
        6 => vec![
            (
                w(1, 3),
                prod(vec![
                    u(),
                    tilde(u()),
                    hat(u()),
                    ht(u()),
                    tri(prod(vec![hat(u()), ht(u()), u(), tilde(u())])),
                ]),
            ),
            (
                w(2, 3),
                prod(vec![
                    u(),
                    tilde(u()),
                    tri(prod(vec![
                        tri(prod(vec![hat(u()), ht(u())])),
                        tri(prod(vec![
                            tri(prod(vec![hat(u()), ht(u())])),
                            tri(prod(vec![u(), tilde(u())])),
                        ])),
                    ])),
                ]),
            ),
        ],
        _ => unreachable!(),
    }
}

/// Every cataloged formula for dimension `n`, primary entries first.
pub fn catalog(n: usize) -> Result<Vec<DetFormula>> {
    use FactorSide::{Left, Right};
    use Family::*;
    if !(1..=6).contains(&n) {
        return Err(GaError::DimensionTooLarge { n, max: 6 });
    }
    let h = || vec![u(), tilde(u())];
    let j = || vec![u(), ht(u()), hat(u()), tilde(u())];
    let mut out = vec![DetFormula::build("triangle", n, Triangle, Left, triangle(n))];
    if n == 3 {
        // tilde(U) hat(U) hat(tilde(U)) U
        out.push(DetFormula::build(
            "triangle-reordered",
            n,
            Triangle,
            Right,
            vec![(w(1, 1), prod(vec![tilde(u()), hat(u()), ht(u()), u()]))],
        ));
    }
    match n {
        1 | 2 => {
            out.push(DetFormula::build("bar", n, Bar, Left, bar_pair()));
            out.push(DetFormula::build("bar-tilde", n, BarTilde, Left, bar_pair()));
            out.push(DetFormula::build("bar-tilde-hat", n, BarTildeHat, Left, bar_pair()));
        }
        3 | 4 => {
            out.push(DetFormula::build("bar", n, Bar, Left, bar_two_term(|| vec![u()])));
            out.push(DetFormula::build("bar-tilde", n, BarTilde, Left, bar_tilde_one_term()));
            out.push(DetFormula::build("bar-tilde-hat", n, BarTildeHat, Left, bar_tilde_one_term()));
        }
        5 => {
            out.push(DetFormula::build("bar-tilde", n, BarTilde, Left, bar_two_term(h)));
            // J hat(J) bar(J hat(J)), J = U hat(tilde(U)), with hat(J) expanded
            let mut first = j();
            first.push(bar(prod(j())));
            out.push(DetFormula::build("bar-tilde-hat", n, BarTildeHat, Left, vec![(w(1, 1), prod(first))]));
        }
        6 => {
            out.push(DetFormula::build("bar-tilde", n, BarTilde, Left, bar_two_term(h)));
        }
        _ => unreachable!(),
    }
    Ok(out)
}

/// Families with a cataloged formula for `n`.
pub fn available_families(n: usize) -> Vec<Family> {
    let mut fams: Vec<Family> = catalog(n).map(|c| c.into_iter().map(|f| f.family).collect()).unwrap_or_default();
    fams.dedup();
    fams
}

/// The primary formula of `family` for dimension `n`.
pub fn det_formula(n: usize, family: Family) -> Result<DetFormula> {
    let cat = catalog(n)?;
    let available = available_families(n);
    cat.into_iter()
        .find(|f| f.family == family)
        .ok_or(GaError::UnknownFormula { n, family, available })
}

pub fn formula_by_name(n: usize, name: &str) -> Result<DetFormula> {
    catalog(n)?
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| GaError::UnknownFormulaName { n, name: name.to_string() })
}
