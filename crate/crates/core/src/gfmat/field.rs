//! Prime fields and vectors of `F_q^n` packed into a single `u64`.
//!
//! A vector `(x_0, ..., x_{n-1})` is stored as the integer `sum x_i q^i`.
//! For `q = 2` this is a plain bit word and all operations are bitwise;
//! other primes go through a digit decomposition.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Digits = SmallVec<[u32; 24]>;

/// Order of a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder(u32);

impl FieldOrder {
    pub const TWO: FieldOrder = FieldOrder(2);

    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q) {
            Ok(FieldOrder(q))
        } else {
            Err(Error::NotPrime(q))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.0 == 2
    }

    #[inline]
    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub(crate) fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub(crate) fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        // Fermat: a^(q-2)
        let mut base = a % self.0;
        let mut exp = self.0 - 2;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The ambient space `F_q^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    q: FieldOrder,
    n: u32,
}

impl Space {
    pub fn new(q: FieldOrder, n: usize) -> Result<Self> {
        if n == 0 || (q.get() as u128).checked_pow(n as u32).map_or(true, |s| s > 1u128 << 64) {
            return Err(Error::SpaceTooLarge { q: q.get(), n });
        }
        Ok(Space { q, n: n as u32 })
    }

    pub fn binary(n: usize) -> Result<Self> {
        Self::new(FieldOrder::TWO, n)
    }

    #[inline]
    pub fn q(&self) -> FieldOrder {
        self.q
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Number of vectors, `q^n`.
    pub fn size(&self) -> u128 {
        (self.q.get() as u128).pow(self.n)
    }

    pub(crate) fn check(&self, v: u64) -> Result<()> {
        if (v as u128) < self.size() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: v,
                limit: self.size(),
            })
        }
    }

    pub(crate) fn unit(&self, i: usize) -> u64 {
        if self.q.is_binary() {
            1u64 << i
        } else {
            (self.q.get() as u64).pow(i as u32)
        }
    }

    pub(crate) fn digits(&self, mut v: u64) -> Digits {
        let q = self.q.get() as u64;
        (0..self.n)
            .map(|_| {
                let d = (v % q) as u32;
                v /= q;
                d
            })
            .collect()
    }

    pub(crate) fn from_digits(&self, d: &[u32]) -> u64 {
        let q = self.q.get() as u64;
        d.iter().rev().fold(0u64, |acc, &x| acc.wrapping_mul(q).wrapping_add(x as u64))
    }

    /// `u + c v`.
    #[inline]
    pub(crate) fn axpy(&self, u: u64, c: u32, v: u64) -> u64 {
        if self.q.is_binary() {
            if c & 1 == 1 {
                u ^ v
            } else {
                u
            }
        } else {
            let du = self.digits(u);
            let dv = self.digits(v);
            let out: Digits = du
                .iter()
                .zip(&dv)
                .map(|(&a, &b)| self.q.add(a, self.q.mul(c, b)))
                .collect();
            self.from_digits(&out)
        }
    }

    #[inline]
    pub(crate) fn digit(&self, v: u64, row: usize) -> u32 {
        if self.q.is_binary() {
            ((v >> row) & 1) as u32
        } else {
            ((v / (self.q.get() as u64).pow(row as u32)) % self.q.get() as u64) as u32
        }
    }

    /// Lowest row with a nonzero entry and that entry.
    #[cfg(test)]
    pub(crate) fn pivot(&self, v: u64) -> Option<(usize, u32)> {
        if v == 0 {
            return None;
        }
        if self.q.is_binary() {
            Some((v.trailing_zeros() as usize, 1))
        } else {
            let q = self.q.get() as u64;
            let mut v = v;
            let mut row = 0;
            while v % q == 0 {
                v /= q;
                row += 1;
            }
            Some((row, (v % q) as u32))
        }
    }
}
