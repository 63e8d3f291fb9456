//! Gaussian binomial coefficients and the counts derived from them.
//!
//! The counting routines are generic over the integer type so callers can
//! pick a machine word when the values are known to be small, or
//! [`Count`](crate::Count) for exact unbounded arithmetic.

use num_traits::{CheckedMul, FromPrimitive, Num};

use crate::Count;

fn q_power_minus_one<T>(q: u32, e: u32) -> Option<T>
where
    T: Clone + Num + CheckedMul + FromPrimitive,
{
    let base = T::from_u32(q)?;
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc.checked_mul(&base)?;
    }
    Some(acc - T::one())
}

/// `[n k]_q`, or `None` if an intermediate value overflows `T`.
/// `k > n` gives zero.
pub fn gaussian_binomial_in<T>(n: u32, k: u32, q: u32) -> Option<T>
where
    T: Clone + Num + CheckedMul + FromPrimitive,
{
    if k > n {
        return Some(T::zero());
    }
    let k = k.min(n - k);
    // after step i the accumulator equals [n i]_q, so every division is exact
    let mut acc = T::one();
    for i in 0..k {
        let num = q_power_minus_one::<T>(q, n - i)?;
        let den = q_power_minus_one::<T>(q, i + 1)?;
        acc = acc.checked_mul(&num)? / den;
    }
    Some(acc)
}

/// Number of `k`-subspaces of `F_q^n`, exactly. `k > n` gives zero.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> Count {
    gaussian_binomial_in::<Count>(n, k, q).expect("arbitrary precision never overflows")
}

/// `floor([n t]_q / [k t]_q)`.
pub fn packing_bound_in<T>(n: u32, t: u32, k: u32, q: u32) -> Option<T>
where
    T: Clone + Num + CheckedMul + FromPrimitive,
{
    let top = gaussian_binomial_in::<T>(n, t, q)?;
    let per_block = gaussian_binomial_in::<T>(k, t, q)?;
    if per_block.is_zero() {
        return None;
    }
    Some(top / per_block)
}
