use std::fmt;

use crate::error::{Error, Result};
use crate::gfmat::echelon::Echelon;
use crate::gfmat::field::{FieldOrder, Space};
use crate::gfmat::subspace::Subspace;

/// Dense matrix over a prime field, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    q: FieldOrder,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FqMatrix {
    /// Entries are reduced mod `q`.
    pub fn new(q: FieldOrder, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::mismatch(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % q.get()).collect();
        Ok(FqMatrix { q, rows, cols, entries })
    }

    pub fn from_rows(q: FieldOrder, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::mismatch("ragged matrix rows"));
        }
        Self::new(q, rows.len(), cols, rows.concat())
    }

    pub fn identity(q: FieldOrder, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FqMatrix { q, rows: n, cols: n, entries }
    }

    /// Matrix whose columns are the given encoded vectors of `space`.
    pub fn from_columns(space: Space, cols: &[u64]) -> Self {
        let n = space.n();
        let mut entries = vec![0; n * cols.len()];
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..n {
                entries[i * cols.len() + j] = space.digit(c, i);
            }
        }
        FqMatrix {
            q: space.q(),
            rows: n,
            cols: cols.len(),
            entries,
        }
    }

    pub fn q(&self) -> FieldOrder {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Column `j` as an encoded vector of `F_q^rows`.
    pub fn column_encoding(&self, j: usize) -> u64 {
        let space = Space::new(self.q, self.rows).expect("matrix rows exceed the vector encoding");
        let d: Vec<u32> = (0..self.rows).map(|i| self.get(i, j)).collect();
        space.from_digits(&d)
    }

    pub fn column_encodings(&self) -> Vec<u64> {
        (0..self.cols).map(|j| self.column_encoding(j)).collect()
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        if self.q != other.q || self.cols != other.rows {
            return Err(Error::mismatch("matrix product dimensions"));
        }
        let mut entries = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let e = &mut entries[i * other.cols + j];
                    *e = self.q.add(*e, self.q.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(FqMatrix {
            q: self.q,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        let space = Space::new(self.q, self.rows).expect("matrix rows exceed the vector encoding");
        let mut ech = Echelon::new(space);
        for c in self.column_encodings() {
            ech.insert(c);
        }
        ech.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn to_linear_map(&self) -> Result<LinearMap> {
        if self.rows != self.cols {
            return Err(Error::mismatch("linear map must be square"));
        }
        let space = Space::new(self.q, self.rows)?;
        Ok(LinearMap {
            space,
            cols: self.column_encodings().into_boxed_slice(),
        })
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Square matrix stored as the encoded images of the unit vectors. This is
/// the working representation of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    space: Space,
    cols: Box<[u64]>,
}

impl LinearMap {
    pub fn identity(space: Space) -> Self {
        LinearMap {
            space,
            cols: (0..space.n()).map(|i| space.unit(i)).collect(),
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    #[inline]
    pub fn apply(&self, v: u64) -> u64 {
        if self.space.q().is_binary() {
            let mut acc = 0u64;
            let mut bits = v;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc ^= self.cols[j];
                bits &= bits - 1;
            }
            acc
        } else {
            let d = self.space.digits(v);
            d.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .fold(0u64, |acc, (j, &x)| self.space.axpy(acc, x, self.cols[j]))
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            space: self.space,
            cols: other.cols.iter().map(|&c| self.apply(c)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(i, &c)| c == self.space.unit(i))
    }

    pub fn pow(&self, mut exp: u64) -> LinearMap {
        let mut base = self.clone();
        let mut acc = LinearMap::identity(self.space);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            exp >>= 1;
        }
        acc
    }

    /// Image `gK` of a subspace, in canonical form.
    pub fn act(&self, k: &Subspace) -> Subspace {
        debug_assert_eq!(k.space(), self.space);
        let images: smallvec::SmallVec<[u64; 8]> = k.encoding().iter().map(|&c| self.apply(c)).collect();
        Subspace::canonical_from_independent(self.space, &images)
    }

    pub fn to_matrix(&self) -> FqMatrix {
        FqMatrix::from_columns(self.space, &self.cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u32]]) -> FqMatrix {
        FqMatrix::from_rows(FieldOrder::TWO, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn entries_reduced() {
        let a = FqMatrix::new(FieldOrder::new(3).unwrap(), 1, 3, vec![3, 4, 5]).unwrap();
        assert_eq!(a.row(0), &[0, 1, 2]);
    }

    #[test]
    fn linear_map_matches_matrix_product() {
        let a = m(&[&[0, 1, 1, 0], &[1, 1, 1, 1], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let b = m(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[1, 1, 1, 1], &[0, 0, 0, 1]]);
        let ab = a.mul(&b).unwrap().to_linear_map().unwrap();
        let la = a.to_linear_map().unwrap();
        let lb = b.to_linear_map().unwrap();
        assert_eq!(la.compose(&lb), ab);
        assert_eq!(ab.to_matrix(), a.mul(&b).unwrap());
    }

    #[test]
    fn ternary_apply() {
        let q = FieldOrder::new(3).unwrap();
        let a = FqMatrix::from_rows(q, &[vec![1, 2], vec![0, 1]]).unwrap();
        let l = a.to_linear_map().unwrap();
        // v = (1, 1) -> encoded 1 + 3 = 4; a v = (1 + 2, 1) = (0, 1) -> 3
        assert_eq!(l.apply(4), 3);
        assert_eq!(l.pow(3), LinearMap::identity(l.space()));
    }

    #[test]
    fn invertibility() {
        assert!(m(&[&[1, 1], &[0, 1]]).is_invertible());
        assert!(!m(&[&[1, 1], &[1, 1]]).is_invertible());
    }
}
