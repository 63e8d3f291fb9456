use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfmat::{enumerate_subspaces, FieldOrder, Space, SubLattice, Subspace};
use crate::orbits::{orbit_partition, GroupGens, OrbitPartition};

/// Plain or orbit-condensed incidence matrix between `t`- and
/// `k`-subspaces.
///
/// Rows and columns are indexed by orbit representatives in ascending
/// encoding order. Entries are held sparsely per column as `(row, value)`
/// pairs sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    space: Space,
    t: usize,
    k: usize,
    row_orbits: Vec<Subspace>,
    col_orbits: Vec<Subspace>,
    row_weights: Vec<u64>,
    col_weights: Vec<u64>,
    columns: Vec<Vec<(u32, u32)>>,
}

impl IncidenceMatrix {
    pub(crate) fn from_parts(
        space: Space,
        (t, k): (usize, usize),
        (row_orbits, row_weights): (Vec<Subspace>, Vec<u64>),
        (col_orbits, col_weights): (Vec<Subspace>, Vec<u64>),
        columns: Vec<Vec<(u32, u32)>>,
    ) -> Self {
        debug_assert_eq!(row_orbits.len(), row_weights.len());
        debug_assert_eq!(col_orbits.len(), col_weights.len());
        debug_assert_eq!(col_orbits.len(), columns.len());
        IncidenceMatrix {
            space,
            t,
            k,
            row_orbits,
            col_orbits,
            row_weights,
            col_weights,
            columns,
        }
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

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.row_orbits.len()
    }

    pub fn cols(&self) -> usize {
        self.col_orbits.len()
    }

    pub fn row_orbits(&self) -> &[Subspace] {
        &self.row_orbits
    }

    pub fn col_orbits(&self) -> &[Subspace] {
        &self.col_orbits
    }

    pub fn row_weights(&self) -> &[u64] {
        &self.row_weights
    }

    pub fn col_weights(&self) -> &[u64] {
        &self.col_weights
    }

    /// Nonzero entries of column `c` as `(row, value)`, ascending by row.
    pub fn column(&self, c: usize) -> &[(u32, u32)] {
        &self.columns[c]
    }

    pub fn entry(&self, row: usize, col: usize) -> u32 {
        let column = &self.columns[col];
        column
            .binary_search_by_key(&(row as u32), |&(r, _)| r)
            .map_or(0, |i| column[i].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut dense = vec![vec![0; self.cols()]; self.rows()];
        for (c, column) in self.columns.iter().enumerate() {
            for &(r, v) in column {
                dense[r as usize][c] = v;
            }
        }
        dense
    }

    pub fn column_max(&self, c: usize) -> u32 {
        self.columns[c].iter().map(|&(_, v)| v).max().unwrap_or(0)
    }

    /// Row sums `sum_c a[r][c]`.
    pub fn row_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.rows()];
        for column in &self.columns {
            for &(r, v) in column {
                sums[r as usize] += v as u64;
            }
        }
        sums
    }

    /// `sum_T |G(T)| a[T][K] = |G(K)| [k t]_q` for every column.
    pub fn check_double_counting(&self) -> Result<()> {
        let per_block = crate::gfmat::gaussian_binomial_in::<u64>(self.k as u32, self.t as u32, self.q().get())
            .ok_or_else(|| Error::Internal("[k t]_q overflows".into()))?;
        for (c, column) in self.columns.iter().enumerate() {
            let lhs: u64 = column.iter().map(|&(r, v)| self.row_weights[r as usize] * v as u64).sum();
            if lhs != self.col_weights[c] * per_block {
                return Err(Error::Internal(format!(
                    "double counting fails in column {c}: {lhs} != {} * {per_block}",
                    self.col_weights[c]
                )));
            }
        }
        Ok(())
    }

    /// Text export: `# rows cols`, one row per line, then a `#w` line with
    /// the column weights.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {} {}\n", self.rows(), self.cols());
        for row in self.to_dense() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        let w: Vec<String> = self.col_weights.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "#w {}", w.join(" "));
        out
    }

    /// Copy with rows and columns reordered: row `i` of the result is row
    /// `rows[i]` of `self`, likewise for columns.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Result<IncidenceMatrix> {
        if !is_permutation(rows, self.rows()) || !is_permutation(cols, self.cols()) {
            return Err(Error::mismatch("not a permutation of the matrix indices"));
        }
        let mut new_row = vec![0u32; self.rows()];
        for (i, &r) in rows.iter().enumerate() {
            new_row[r] = i as u32;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(u32, u32)> = self.columns[c].iter().map(|&(r, v)| (new_row[r as usize], v)).collect();
                col.sort_unstable();
                col
            })
            .collect();
        Ok(IncidenceMatrix {
            space: self.space,
            t: self.t,
            k: self.k,
            row_orbits: rows.iter().map(|&r| self.row_orbits[r].clone()).collect(),
            col_orbits: cols.iter().map(|&c| self.col_orbits[c].clone()).collect(),
            row_weights: rows.iter().map(|&r| self.row_weights[r]).collect(),
            col_weights: cols.iter().map(|&c| self.col_weights[c]).collect(),
            columns,
        })
    }
}

fn is_permutation(p: &[usize], len: usize) -> bool {
    let mut seen = vec![false; len];
    p.len() == len && p.iter().all(|&i| i < len && !std::mem::replace(&mut seen[i], true))
}

fn check_dims(n: usize, t: usize, k: usize) -> Result<()> {
    if t == 0 || t >= k || k > n {
        return Err(Error::mismatch(format!("need 1 <= t < k <= n, got t={t} k={k} n={n}")));
    }
    Ok(())
}

/// `a[T][K] = 1` iff `T ⊆ K`, over all `t`- and `k`-subspaces.
pub fn plain_matrix(n: usize, t: usize, k: usize, q: FieldOrder) -> Result<IncidenceMatrix> {
    check_dims(n, t, k)?;
    let space = Space::new(q, n)?;
    let rows = enumerate_subspaces(n, t, q)?;
    let cols = enumerate_subspaces(n, k, q)?;
    let index: HashMap<&Subspace, u32> = rows.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    let lattice = SubLattice::new(k, t, q)?;
    let columns = cols
        .par_iter()
        .map(|kk| {
            let mut col: Vec<(u32, u32)> = lattice.within(kk).map(|tt| (index[&tt], 1)).collect();
            col.sort_unstable();
            col
        })
        .collect();
    let (nr, nc) = (rows.len(), cols.len());
    Ok(IncidenceMatrix::from_parts(
        space,
        (t, k),
        (rows, vec![1; nr]),
        (cols, vec![1; nc]),
        columns,
    ))
}

/// Kramer-Mesner matrix of the group generated by `gens`.
pub fn reduced_matrix(gens: &GroupGens, t: usize, k: usize) -> Result<IncidenceMatrix> {
    check_dims(gens.n(), t, k)?;
    let (rows, cols) = rayon::join(|| orbit_partition(gens, t), || orbit_partition(gens, k));
    reduced_matrix_from(&rows?, &cols?)
}

/// Kramer-Mesner matrix from precomputed orbit partitions on `t`- and
/// `k`-subspaces of the same group.
///
/// For each `k`-orbit, every incidence `T ⊆ K'` with `K'` in the orbit is
/// attributed to the orbit of `T`; the entry is that count divided by the
/// `t`-orbit size, which must divide exactly.
pub fn reduced_matrix_from(rows: &OrbitPartition, cols: &OrbitPartition) -> Result<IncidenceMatrix> {
    let (t, k) = (rows.dim(), cols.dim());
    let space = rows.gens().space();
    check_dims(space.n(), t, k)?;
    if cols.gens().space() != space {
        return Err(Error::mismatch("row and column partitions live in different spaces"));
    }
    let lattice = SubLattice::new(k, t, space.q())?;
    let row_sizes = rows.sizes();
    let columns = cols
        .orbits()
        .par_iter()
        .map(|orbit| -> Result<Vec<(u32, u32)>> {
            let mut counts: HashMap<u32, u64> = HashMap::new();
            for kk in orbit.elements() {
                for tt in lattice.within(kk) {
                    let r = rows
                        .orbit_index(&tt)
                        .ok_or_else(|| Error::Internal(format!("{tt} missing from the row partition")))?;
                    *counts.entry(r as u32).or_default() += 1;
                }
            }
            let mut col = Vec::with_capacity(counts.len());
            for (r, total) in counts {
                let size = row_sizes[r as usize];
                if total % size != 0 {
                    return Err(Error::Internal(format!(
                        "incidence count {total} not divisible by orbit size {size} (row {r})"
                    )));
                }
                col.push((r, (total / size) as u32));
            }
            col.sort_unstable();
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IncidenceMatrix::from_parts(
        space,
        (t, k),
        (rows.representatives(), row_sizes),
        (cols.representatives(), cols.sizes()),
        columns,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmat::FqMatrix;

    #[test]
    fn plain_small() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        assert_eq!((a.rows(), a.cols()), (15, 35));
        assert!((0..35).all(|c| a.column(c).len() == 3));
        assert!(a.row_sums().iter().all(|&s| s == 7));
        a.check_double_counting().unwrap();
        assert!(a.to_dense().iter().flatten().all(|&e| e <= 1));
    }

    #[test]
    fn plain_entries_match_containment() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        for (r, tt) in a.row_orbits().iter().enumerate() {
            for (c, kk) in a.col_orbits().iter().enumerate() {
                assert_eq!(a.entry(r, c) == 1, tt.is_contained_in(kk).unwrap());
            }
        }
    }

    #[test]
    fn trivial_group_gives_plain() {
        let space = Space::binary(4).unwrap();
        let reduced = reduced_matrix(&GroupGens::trivial(space), 1, 2).unwrap();
        assert_eq!(reduced, plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap());
    }

    #[test]
    fn ternary_plain() {
        let q = FieldOrder::new(3).unwrap();
        let a = plain_matrix(3, 1, 2, q).unwrap();
        assert_eq!((a.rows(), a.cols()), (13, 13));
        assert!(a.row_sums().iter().all(|&s| s == 4));
    }

    #[test]
    fn reduced_example_double_counts() {
        let rows = vec![vec![0, 1, 1, 0], vec![1, 1, 1, 1], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let g = FqMatrix::from_rows(FieldOrder::TWO, &rows).unwrap();
        let gens = GroupGens::new(FieldOrder::TWO, 4, vec![g]).unwrap();
        let a = reduced_matrix(&gens, 1, 2).unwrap();
        assert_eq!((a.rows(), a.cols()), (5, 9));
        a.check_double_counting().unwrap();
    }

    #[test]
    fn bad_dimensions() {
        assert!(plain_matrix(4, 2, 2, FieldOrder::TWO).is_err());
        assert!(plain_matrix(4, 0, 2, FieldOrder::TWO).is_err());
    }

    #[test]
    fn permutation_round_trip() {
        let a = plain_matrix(3, 1, 2, FieldOrder::TWO).unwrap();
        let rows: Vec<usize> = (0..7).rev().collect();
        let cols: Vec<usize> = vec![3, 1, 4, 0, 6, 5, 2];
        let p = a.permuted(&rows, &cols).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(p.entry(i, j), a.entry(rows[i], cols[j]));
            }
        }
        assert!(a.permuted(&[0, 0, 1, 2, 3, 4, 5], &cols).is_err());
    }
}
