use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gfmat::echelon::Echelon;
use crate::gfmat::field::{FieldOrder, Space};
use crate::gfmat::matrix::FqMatrix;

/// Column encodings of a canonical basis. Inline for blocks up to
/// dimension 3, which covers every design in the fixtures.
pub type Encoding = SmallVec<[u64; 3]>;

/// A nonzero subspace of `F_q^n` in canonical form.
///
/// The basis is in reduced column echelon form: the pivot of a column is its
/// lowest nonzero row, pivot entries are 1, and every other basis column is
/// zero in that row. Columns are sorted by encoding, so two values are equal
/// exactly when they span the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    space: Space,
    cols: Encoding,
}

impl Subspace {
    /// Canonical subspace spanned by the columns of `raw_basis`.
    pub fn canonicalize(raw_basis: &FqMatrix) -> Result<Subspace> {
        let space = Space::new(raw_basis.q(), raw_basis.rows())?;
        Self::span(space, &raw_basis.column_encodings())
    }

    /// Span of encoded vectors; dependent vectors are dropped.
    pub fn span(space: Space, vectors: &[u64]) -> Result<Subspace> {
        let mut ech = Echelon::new(space);
        for &v in vectors {
            space.check(v)?;
            ech.insert(v);
        }
        if ech.rank() == 0 {
            return Err(Error::EmptySubspace);
        }
        Ok(Subspace {
            space,
            cols: ech.into_sorted().into_iter().collect(),
        })
    }

    /// Decode a tuple of column integers (digit `i` of the base-`q`
    /// expansion is row `i`). The columns must be independent.
    pub fn decode_tuple(ints: &[u64], n: usize, q: FieldOrder) -> Result<Subspace> {
        let space = Space::new(q, n)?;
        if ints.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let mut ech = Echelon::new(space);
        for &v in ints {
            space.check(v)?;
            if !ech.insert(v) {
                return Err(Error::DegenerateBlock(ints.to_vec()));
            }
        }
        Ok(Subspace {
            space,
            cols: ech.into_sorted().into_iter().collect(),
        })
    }

    /// Caller guarantees `vectors` are independent and in range.
    pub(crate) fn canonical_from_independent(space: Space, vectors: &[u64]) -> Subspace {
        let mut ech = Echelon::new(space);
        for &v in vectors {
            ech.insert(v);
        }
        debug_assert_eq!(ech.rank(), vectors.len());
        Subspace {
            space,
            cols: ech.into_sorted().into_iter().collect(),
        }
    }

    /// Wrap an encoding that is already canonical.
    pub(crate) fn from_canonical(space: Space, cols: Encoding) -> Subspace {
        debug_assert!(cols.windows(2).all(|w| w[0] < w[1]));
        Subspace { space, cols }
    }

    /// The whole space `F_q^n`.
    pub fn full(space: Space) -> Subspace {
        let cols = (0..space.n()).map(|i| space.unit(i)).collect();
        Subspace { space, cols }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn q(&self) -> FieldOrder {
        self.space.q()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Sorted ascending tuple of column integers.
    pub fn encoding(&self) -> &[u64] {
        &self.cols
    }

    pub fn encode_tuple(&self) -> Vec<u64> {
        self.cols.to_vec()
    }

    pub fn basis_matrix(&self) -> FqMatrix {
        FqMatrix::from_columns(self.space, &self.cols)
    }

    fn echelon(&self) -> Echelon {
        // canonical columns are already reduced; inserting them keeps them
        let mut ech = Echelon::new(self.space);
        for &c in &self.cols {
            ech.insert(c);
        }
        ech
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.space != other.space {
            return Err(Error::mismatch(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.q(),
                self.n(),
                other.q(),
                other.n()
            )));
        }
        Ok(())
    }

    /// Is `v` a vector of this subspace.
    pub fn contains_vector(&self, v: u64) -> bool {
        let ech = self.echelon();
        ech.reduce(v) == 0
    }

    /// `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Subspace) -> Result<bool> {
        self.same_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        let ech = other.echelon();
        Ok(self.cols.iter().all(|&c| ech.reduce(c) == 0))
    }

    /// `dim(self ∩ other)` via `dim S + dim K - rank([S|K])`.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        self.same_ambient(other)?;
        let rank = self.join_rank(other);
        Ok(self.dim() + other.dim() - rank)
    }

    /// `rank([S|K]) = dim(S + K)`.
    pub fn join_rank(&self, other: &Subspace) -> usize {
        let mut ech = self.echelon();
        for &c in &other.cols {
            ech.insert(c);
        }
        ech.rank()
    }

    /// `dim S + dim K - 2 dim(S ∩ K)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        let meet = self.intersection_dim(other)?;
        Ok(self.dim() + other.dim() - 2 * meet)
    }

    /// `S ∩ K`, or `None` when the intersection is zero. Enumerates the
    /// vectors of the smaller subspace, so meant for small dimensions.
    pub fn intersection(&self, other: &Subspace) -> Result<Option<Subspace>> {
        self.same_ambient(other)?;
        let (small, big) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let ech = big.echelon();
        let mut meet = Echelon::new(self.space);
        for v in small.vectors() {
            if v != 0 && ech.reduce(v) == 0 {
                meet.insert(v);
            }
        }
        if meet.rank() == 0 {
            return Ok(None);
        }
        Ok(Some(Subspace {
            space: self.space,
            cols: meet.into_sorted().into_iter().collect(),
        }))
    }

    /// All `q^dim` vectors of the subspace, zero included.
    pub fn vectors(&self) -> impl Iterator<Item = u64> + '_ {
        let q = self.q().get() as u64;
        let total = q.pow(self.dim() as u32);
        (0..total).map(move |mut idx| {
            let mut acc = 0u64;
            for &c in &self.cols {
                let coef = (idx % q) as u32;
                idx /= q;
                if coef != 0 {
                    acc = self.space.axpy(acc, coef, c);
                }
            }
            acc
        })
    }

    /// Image of a coefficient vector of `F_q^dim` under the basis map.
    pub(crate) fn embed(&self, coeffs: u64) -> u64 {
        let coeff_space = Space::new(self.q(), self.dim()).expect("dimension fits");
        let mut acc = 0u64;
        for (i, &c) in self.cols.iter().enumerate() {
            let d = coeff_space.digit(coeffs, i);
            if d != 0 {
                acc = self.space.axpy(acc, d, c);
            }
        }
        acc
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.space.q(), self.space.n(), self.cols.len(), self.cols.as_slice()).cmp(&(
            other.space.q(),
            other.space.n(),
            other.cols.len(),
            other.cols.as_slice(),
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{:?}", self.cols.as_slice())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cols.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Free-function forms of the subspace operations.
pub fn canonicalize(raw_basis: &FqMatrix) -> Result<Subspace> {
    Subspace::canonicalize(raw_basis)
}

pub fn decode_tuple(ints: &[u64], n: usize, q: FieldOrder) -> Result<Subspace> {
    Subspace::decode_tuple(ints, n, q)
}

pub fn encode_tuple(s: &Subspace) -> Vec<u64> {
    s.encode_tuple()
}

/// `T ⊆ K`.
pub fn contains(t: &Subspace, k: &Subspace) -> Result<bool> {
    t.is_contained_in(k)
}

pub fn intersection_dim(s: &Subspace, k: &Subspace) -> Result<usize> {
    s.intersection_dim(k)
}

pub fn subspace_distance(s: &Subspace, k: &Subspace) -> Result<usize> {
    s.distance(k)
}
