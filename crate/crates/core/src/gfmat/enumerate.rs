use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gfmat::field::{FieldOrder, Space};
use crate::gfmat::gaussian::gaussian_binomial;
use crate::gfmat::subspace::{Encoding, Subspace};

/// Default limit on the number of subspaces a single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 26;

/// All `k`-subspaces of `F_q^n` in ascending encoding order.
pub fn enumerate_subspaces(n: usize, k: usize, q: FieldOrder) -> Result<Vec<Subspace>> {
    enumerate_subspaces_capped(n, k, q, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_subspaces_capped(n: usize, k: usize, q: FieldOrder, cap: u64) -> Result<Vec<Subspace>> {
    let space = Space::new(q, n)?;
    if k == 0 || k > n {
        return Err(Error::mismatch(format!("cannot enumerate {k}-subspaces of F_{q}^{n}")));
    }
    let count = gaussian_binomial(n as u32, k as u32, q.get());
    match count.to_u64() {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::EnumerationCap {
                count: count.to_string(),
                cap,
            })
        }
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(space, k, 0, &mut pivots, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn choose_pivots(space: Space, k: usize, from: usize, pivots: &mut Vec<usize>, out: &mut Vec<Subspace>) {
    if pivots.len() == k {
        fill_free_entries(space, pivots, out);
        return;
    }
    let need = k - pivots.len();
    for p in from..=space.n() - need {
        pivots.push(p);
        choose_pivots(space, k, p + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free_entries(space: Space, pivots: &[usize], out: &mut Vec<Subspace>) {
    let n = space.n();
    // (column, row) positions that may hold any field element
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| ((p + 1)..n).filter(|r| !pivots.contains(r)).map(move |r| (i, r)))
        .collect();
    let q = space.q().get() as u64;
    let base: Vec<u64> = pivots.iter().map(|&p| space.unit(p)).collect();
    let total = q.pow(free.len() as u32);
    for mut idx in 0..total {
        let mut cols = base.clone();
        for &(i, r) in &free {
            let d = (idx % q) as u32;
            idx /= q;
            if d != 0 {
                cols[i] = space.axpy(cols[i], d, space.unit(r));
            }
        }
        let mut enc: Encoding = cols.into_iter().collect();
        enc.sort_unstable();
        out.push(Subspace::from_canonical(space, enc));
    }
}

/// The `t`-subspaces of a fixed `k`-dimensional subspace, obtained by pushing
/// the canonical `t`-subspaces of the coefficient space `F_q^k` through the
/// basis. Reusable across all parents of the same dimension.
#[derive(Clone, Debug)]
pub struct SubLattice {
    t: usize,
    k: usize,
    q: FieldOrder,
    coeff_bases: Vec<Encoding>,
}

impl SubLattice {
    pub fn new(k: usize, t: usize, q: FieldOrder) -> Result<Self> {
        if t == 0 || t > k {
            return Err(Error::mismatch(format!("no {t}-subspaces inside a {k}-subspace")));
        }
        let coeff_bases = enumerate_subspaces(k, t, q)?
            .into_iter()
            .map(|s| s.encoding().iter().copied().collect())
            .collect();
        Ok(SubLattice { t, k, q, coeff_bases })
    }

    pub fn len(&self) -> usize {
        self.coeff_bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeff_bases.is_empty()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Iterate the `t`-subspaces of `parent`.
    pub fn within<'a>(&'a self, parent: &'a Subspace) -> impl Iterator<Item = Subspace> + 'a {
        debug_assert_eq!(parent.dim(), self.k);
        debug_assert_eq!(parent.q(), self.q);
        self.coeff_bases.iter().map(move |coeffs| {
            let images: Encoding = coeffs.iter().map(|&c| parent.embed(c)).collect();
            Subspace::canonical_from_independent(parent.space(), &images)
        })
    }
}

/// All `t`-subspaces of `parent`.
pub fn subspaces_within(parent: &Subspace, t: usize) -> Result<Vec<Subspace>> {
    let lattice = SubLattice::new(parent.dim(), t, parent.q())?;
    Ok(lattice.within(parent).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn q(v: u32) -> FieldOrder {
        FieldOrder::new(v).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_subspaces(4, 1, q(2)).unwrap().len(), 15);
        assert_eq!(enumerate_subspaces(4, 2, q(2)).unwrap().len(), 35);
        let full = enumerate_subspaces(2, 2, q(2)).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0], Subspace::full(Space::binary(2).unwrap()));
    }

    #[test]
    fn ascending_and_distinct() {
        let all = enumerate_subspaces(5, 2, q(2)).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    /// Independent count: canonicalize the span of every pair/triple of
    /// vectors and collect the distinct results.
    #[test]
    fn brute_force_count_of_planes_and_solids() {
        let mut seen = HashSet::new();
        for a in 1..64u64 {
            for b in (a + 1)..64 {
                for c in (b + 1)..64 {
                    if let Ok(s) = Subspace::decode_tuple(&[a, b, c], 6, q(2)) {
                        seen.insert(s);
                    }
                }
            }
        }
        assert_eq!(seen.len(), 1395);
        let listed: HashSet<_> = enumerate_subspaces(6, 3, q(2)).unwrap().into_iter().collect();
        assert_eq!(seen, listed);
    }

    #[test]
    fn cap_enforced() {
        let err = enumerate_subspaces_capped(6, 3, q(2), 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { ref count, .. } if count == "1395"));
    }

    #[test]
    fn lines_in_a_plane() {
        let plane = Subspace::decode_tuple(&[1, 2], 4, q(2)).unwrap();
        let lines = subspaces_within(&plane, 1).unwrap();
        let enc: Vec<_> = lines.iter().map(|l| l.encode_tuple()).collect();
        assert_eq!(enc, vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn ternary_lines_in_a_plane() {
        let plane = Subspace::decode_tuple(&[1, 3], 3, q(3)).unwrap();
        assert_eq!(subspaces_within(&plane, 1).unwrap().len(), 4);
    }
}
