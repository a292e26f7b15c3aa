//! Grade-dependent sign operations on multivectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GaError, Result};
use crate::signature::Signature;

/// A conjugation: a linear map that multiplies each grade-`k` part by a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conjugation {
    /// `(-1)^k`, written with a hat.
    GradeInvolution,
    /// `(-1)^(k(k-1)/2)`, written with a tilde.
    Reversion,
    /// `(-1)^binomial(k, 2^(j-1))`. `Delta(1)` is the grade involution,
    /// `Delta(2)` the reversion and `Delta(3)` the triangle operation.
    Delta(u8),
    /// Negates every grade except 0, i.e. `2<U>_0 - U`.
    Bar,
}

impl Conjugation {
    pub const TRIANGLE: Conjugation = Conjugation::Delta(3);

    /// Sign applied to the grade-`k` part. Does not validate `Delta(j)` against
    /// a signature; see [`Conjugation::validate`].
    pub fn grade_sign(self, k: usize) -> i8 {
        let odd = match self {
            Conjugation::GradeInvolution => k & 1 == 1,
            Conjugation::Reversion => k & 2 != 0,
            // Lucas: binomial(k, 2^i) is odd iff bit i of k is set.
            Conjugation::Delta(j) => j >= 1 && (k >> (j - 1)) & 1 == 1,
            Conjugation::Bar => k != 0,
        };
        if odd {
            -1
        } else {
            1
        }
    }

    pub fn validate(self, sig: &Signature) -> Result<()> {
        if let Conjugation::Delta(j) = self {
            let m = sig.triangle_count();
            if j == 0 || j > m {
                return Err(GaError::DeltaOutOfRange { j, m });
            }
        }
        Ok(())
    }

    /// Signs for every grade `0..=n`.
    pub fn sign_table(self, n: usize) -> Vec<i8> {
        (0..=n).map(|k| self.grade_sign(k)).collect()
    }
}

impl fmt::Display for Conjugation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjugation::GradeInvolution => f.write_str("hat"),
            Conjugation::Reversion => f.write_str("tilde"),
            Conjugation::Delta(j) => write!(f, "delta{j}"),
            Conjugation::Bar => f.write_str("bar"),
        }
    }
}

impl FromStr for Conjugation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "hat" => Ok(Conjugation::GradeInvolution),
            "tilde" => Ok(Conjugation::Reversion),
            "bar" => Ok(Conjugation::Bar),
            "triangle" => Ok(Conjugation::TRIANGLE),
            _ => s
                .strip_prefix("delta")
                .and_then(|j| j.parse().ok())
                .map(Conjugation::Delta)
                .ok_or_else(|| format!("unknown conjugation {s:?}")),
        }
    }
}

impl Serialize for Conjugation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Conjugation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(k: u64, i: u64) -> u64 {
        if i > k {
            return 0;
        }
        (0..i).fold(1, |acc, t| acc * (k - t) / (t + 1))
    }

    #[test]
    fn delta_signs_match_direct_binomials() {
        for j in 1..=4u8 {
            for k in 0..=12usize {
                let direct = if binomial(k as u64, 1 << (j - 1)) % 2 == 1 { -1 } else { 1 };
                assert_eq!(Conjugation::Delta(j).grade_sign(k), direct, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn named_operations_are_deltas() {
        for k in 0..=6 {
            assert_eq!(Conjugation::Delta(1).grade_sign(k), Conjugation::GradeInvolution.grade_sign(k));
            assert_eq!(Conjugation::Delta(2).grade_sign(k), Conjugation::Reversion.grade_sign(k));
            assert_eq!(Conjugation::Reversion.grade_sign(k), if (k * (k.max(1) - 1) / 2) % 2 == 1 { -1 } else { 1 });
        }
        // grades 0..3 kept, 4..7 negated
        assert_eq!(Conjugation::TRIANGLE.sign_table(8), [1, 1, 1, 1, -1, -1, -1, -1, 1]);
    }

    #[test]
    fn delta_range() {
        let s3 = Signature::new(3, 0).unwrap();
        assert!(Conjugation::Delta(2).validate(&s3).is_ok());
        assert_eq!(
            Conjugation::Delta(3).validate(&s3),
            Err(GaError::DeltaOutOfRange { j: 3, m: 2 })
        );
        let s4 = Signature::new(2, 2).unwrap();
        assert!(Conjugation::Delta(3).validate(&s4).is_ok());
    }

    #[test]
    fn string_round_trip() {
        for c in [Conjugation::GradeInvolution, Conjugation::Reversion, Conjugation::Bar, Conjugation::Delta(3)] {
            assert_eq!(c.to_string().parse::<Conjugation>().unwrap(), c);
        }
    }
}
