use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GaError, Result};

/// Largest supported `n = p + q`.
pub const MAX_DIM: usize = 6;

/// Signature `(p, q)` of a real Clifford algebra G(p,q).
///
/// Generators `e_1..e_p` square to `+1`, `e_{p+1}..e_n` square to `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let n = p + q;
        if n == 0 || n > MAX_DIM {
            return Err(GaError::UnsupportedSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    /// Every supported signature, ordered by `n` then `p`.
    pub fn all() -> Vec<Signature> {
        (1..=MAX_DIM)
            .flat_map(|n| (0..=n).rev().map(move |p| Signature { p, q: n - p }))
            .collect()
    }

    /// All signatures with `p + q = n`.
    pub fn with_dim(n: usize) -> Vec<Signature> {
        Self::all().into_iter().filter(|s| s.n() == n).collect()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Number of basis blades, `2^n`.
    pub fn blade_count(&self) -> usize {
        1 << self.n()
    }

    /// Degree of the characteristic polynomial, `N = 2^floor((n+1)/2)`.
    pub fn char_degree(&self) -> usize {
        1 << ((self.n() + 1) / 2)
    }

    /// Number of triangle operations, `m = floor(log2 n) + 1`.
    pub fn triangle_count(&self) -> u8 {
        (usize::BITS - self.n().leading_zeros()) as u8
    }

    /// Bit mask of the generators that square to `-1`.
    pub fn negative_mask(&self) -> u32 {
        ((1u32 << self.q) - 1) << self.p
    }

    /// `eta_aa` for generator `a` (1-based).
    pub fn metric(&self, a: usize) -> i8 {
        if a <= self.p {
            1
        } else {
            -1
        }
    }

    /// Sign and result blade of the product of two basis blades.
    #[inline]
    pub fn blade_product(&self, a: BladeIndex, b: BladeIndex) -> (BladeIndex, bool) {
        let negative = reorder_parity(a.0, b.0) ^ ((a.0 & b.0 & self.negative_mask()).count_ones() & 1 == 1);
        (BladeIndex(a.0 ^ b.0), negative)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.p, self.q)
    }
}

/// Parity of the number of transpositions needed to bring `e_A e_B` into
/// canonical (ascending) order.
#[inline]
fn reorder_parity(a: u32, b: u32) -> bool {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps & 1 == 1
}

/// Basis blade as a bit mask: bit `a-1` set means `e_a` is a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// Blade from 1-based generator indices; they must be strictly increasing.
    pub fn from_generators(gens: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        let mut last = 0;
        for &g in gens {
            if g == 0 || g <= last || g > MAX_DIM {
                return None;
            }
            bits |= 1 << (g - 1);
            last = g;
        }
        Some(BladeIndex(bits))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based generator indices in ascending order.
    pub fn generators(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).map(|i| i + 1).collect()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("e");
        }
        f.write_str("e")?;
        for g in self.generators() {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}
