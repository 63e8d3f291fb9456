//! Passing between the Kramer-Mesner matrices of a group `G` and a subgroup
//! `H`: summing columns per `G`-orbit, collapsing duplicate rows, and moving
//! solutions down the subgroup chain.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kramer_mesner::solution::{first_violation, require_feasible};
use crate::kramer_mesner::{IncidenceMatrix, Solution};
use crate::orbits::FusionMap;

fn same_reps(label: &str, got: &[crate::Subspace], partition: &crate::orbits::OrbitPartition) -> Result<()> {
    let expected = partition.representatives();
    if got != expected.as_slice() {
        return Err(Error::mismatch(format!("{label} orbits do not match the fusion map")));
    }
    Ok(())
}

/// Sum the columns of `A^H` within each `G`-orbit. The result keeps the
/// `H`-rows and has one column per `G`-orbit.
pub fn fuse_columns(a_h: &IncidenceMatrix, fmap_cols: &FusionMap) -> Result<IncidenceMatrix> {
    same_reps("column", a_h.col_orbits(), &fmap_cols.fine)?;
    let parts = fmap_cols.parts();
    let columns = parts
        .iter()
        .map(|part| {
            let mut acc: Vec<(u32, u32)> = Vec::new();
            for &c in part {
                acc.extend_from_slice(a_h.column(c));
            }
            acc.sort_unstable();
            let mut merged: Vec<(u32, u32)> = Vec::with_capacity(acc.len());
            for (r, v) in acc {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 += v,
                    _ => merged.push((r, v)),
                }
            }
            merged
        })
        .collect();
    Ok(IncidenceMatrix::from_parts(
        a_h.space(),
        (a_h.t(), a_h.k()),
        (a_h.row_orbits().to_vec(), a_h.row_weights().to_vec()),
        (fmap_cols.coarse.representatives(), fmap_cols.coarse.sizes()),
        columns,
    ))
}

/// Keep one row per `G`-orbit on `t`-subspaces. Rows within one part must be
/// identical.
pub fn merge_rows(a_prime: &IncidenceMatrix, fmap_rows: &FusionMap) -> Result<IncidenceMatrix> {
    same_reps("row", a_prime.row_orbits(), &fmap_rows.fine)?;
    let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); a_prime.rows()];
    for c in 0..a_prime.cols() {
        for &(r, v) in a_prime.column(c) {
            rows[r as usize].push((c as u32, v));
        }
    }
    let parts = fmap_rows.parts();
    let mut columns: Vec<Vec<(u32, u32)>> = vec![Vec::new(); a_prime.cols()];
    for (j, part) in parts.iter().enumerate() {
        let first = part[0];
        for &other in &part[1..] {
            if rows[other] != rows[first] {
                return Err(Error::FusionViolation(format!(
                    "rows {first} and {other} belong to the same G-orbit but differ"
                )));
            }
        }
        for &(c, v) in &rows[first] {
            columns[c as usize].push((j as u32, v));
        }
    }
    Ok(IncidenceMatrix::from_parts(
        a_prime.space(),
        (a_prime.t(), a_prime.k()),
        (fmap_rows.coarse.representatives(), fmap_rows.coarse.sizes()),
        (a_prime.col_orbits().to_vec(), a_prime.col_weights().to_vec()),
        columns,
    ))
}

/// `A^H -> A' -> A^G`.
pub fn fuse_matrix(a_h: &IncidenceMatrix, fmap_cols: &FusionMap, fmap_rows: &FusionMap) -> Result<IncidenceMatrix> {
    merge_rows(&fuse_columns(a_h, fmap_cols)?, fmap_rows)
}

/// Move a feasible `G`-solution to the `H`-orbits: every `H`-orbit inside a
/// selected `G`-orbit is selected.
pub fn translate_solution(x: &Solution, a_g: &IncidenceMatrix, fmap: &FusionMap) -> Result<Solution> {
    same_reps("column", a_g.col_orbits(), &fmap.coarse)?;
    require_feasible(a_g, x)?;
    let selected = fmap.assignment.iter().map(|&j| x.is_selected(j)).collect();
    Solution::with_weights(&fmap.fine.sizes(), selected)
}

/// Columns whose entries are all at most one.
pub fn admissible_columns(a: &IncidenceMatrix) -> Vec<bool> {
    (0..a.cols()).map(|c| a.column_max(c) <= 1).collect()
}

/// `H`-orbits lying in an admissible `G`-orbit. After a maximal `G`-solution
/// none of them can extend the design.
pub fn zoom_prune(fmap: &FusionMap, mask_g: &[bool]) -> BTreeSet<usize> {
    fmap.assignment
        .iter()
        .enumerate()
        .filter(|&(_, &j)| mask_g.get(j).copied().unwrap_or(false))
        .map(|(i, _)| i)
        .collect()
}

/// Result of an attempted local modification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modification {
    Applied(Solution),
    /// The modified selection covers `row` `count` times.
    Rejected { row: usize, count: u64 },
}

/// Delete the `remove` columns from `y` and add the `add` columns, if the
/// result is still feasible.
pub fn local_modify(a: &IncidenceMatrix, y: &Solution, remove: &[usize], add: &[usize]) -> Result<Modification> {
    if y.len() != a.cols() {
        return Err(Error::mismatch("solution length differs from the column count"));
    }
    let mut selected = y.selected().to_vec();
    for &c in remove {
        if !selected.get(c).copied().unwrap_or(false) {
            return Err(Error::mismatch(format!("column {c} is not selected")));
        }
        selected[c] = false;
    }
    for &c in add {
        *selected
            .get_mut(c)
            .ok_or_else(|| Error::mismatch(format!("column {c} out of range")))? = true;
    }
    let candidate = Solution::new(a, selected)?;
    Ok(match first_violation(a, &candidate)? {
        None => Modification::Applied(candidate),
        Some((row, count)) => Modification::Rejected { row, count },
    })
}

/// Add admissible columns in ascending order while they fit, skipping the
/// excluded ones. The result is maximal among extensions by single columns.
pub fn complete_greedily(a: &IncidenceMatrix, x: &Solution, excluded: &BTreeSet<usize>) -> Result<Solution> {
    let mut cover = crate::kramer_mesner::solution::coverage_vector(a, x)?;
    let mut selected = x.selected().to_vec();
    for c in 0..a.cols() {
        if selected[c] || excluded.contains(&c) {
            continue;
        }
        let col = a.column(c);
        if col.iter().all(|&(r, v)| cover[r as usize] + v as u64 <= 1) {
            for &(r, v) in col {
                cover[r as usize] += v as u64;
            }
            selected[c] = true;
        }
    }
    Solution::new(a, selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, example, DisplayOrder};
    use crate::kramer_mesner::{is_feasible, reduced_matrix};
    use crate::orbits::{close_group, cyclic_subgroup_of_order, fuse, GroupGens, DEFAULT_ORDER_CAP};

    struct Example {
        h: GroupGens,
        a_h: IncidenceMatrix,
        a_g: IncidenceMatrix,
        cols: FusionMap,
        rows: FusionMap,
        disp: DisplayOrder,
    }

    fn setup() -> Example {
        let g = fixtures::gens("example_g4").unwrap();
        let h = cyclic_subgroup_of_order(&close_group(&g, DEFAULT_ORDER_CAP).unwrap(), 3).unwrap();
        let a_h = reduced_matrix(&h, 1, 2).unwrap();
        let a_g = reduced_matrix(&g, 1, 2).unwrap();
        let cols = fuse(&h, &g, 2).unwrap();
        let rows = fuse(&h, &g, 1).unwrap();
        Example {
            h,
            a_h,
            a_g,
            cols,
            rows,
            disp: fixtures::display_order().unwrap(),
        }
    }

    fn shown(perm: &[usize], bits: &str, len: usize) -> Vec<bool> {
        let mut out = vec![false; len];
        for (i, ch) in bits.chars().enumerate() {
            out[perm[i]] = ch == '1';
        }
        out
    }

    #[test]
    fn fusion_reproduces_the_coarse_matrix() {
        let e = setup();
        let a_prime = fuse_columns(&e.a_h, &e.cols).unwrap();
        let bottom: Vec<u64> = e.disp.g_cols.iter().map(|&c| a_prime.col_weights()[c]).collect();
        assert_eq!(bottom, vec![6, 6, 1, 3, 6, 6, 3, 3, 1]);
        assert_eq!(fuse_matrix(&e.a_h, &e.cols, &e.rows).unwrap(), e.a_g);
    }

    #[test]
    fn corrupted_rows_are_rejected() {
        let e = setup();
        let a_prime = fuse_columns(&e.a_h, &e.cols).unwrap();
        // swapping two H-rows from different G-orbits breaks row equality
        let mut perm: Vec<usize> = (0..a_prime.rows()).collect();
        let (i, j) = (e.disp.h_rows[0], e.disp.h_rows[2]);
        perm.swap(i, j);
        let cols: Vec<usize> = (0..a_prime.cols()).collect();
        let swapped = a_prime.permuted(&perm, &cols).unwrap();
        let broken = IncidenceMatrix::from_parts(
            a_prime.space(),
            (1, 2),
            (a_prime.row_orbits().to_vec(), a_prime.row_weights().to_vec()),
            (a_prime.col_orbits().to_vec(), a_prime.col_weights().to_vec()),
            (0..swapped.cols()).map(|c| swapped.column(c).to_vec()).collect(),
        );
        assert!(matches!(merge_rows(&broken, &e.rows), Err(Error::FusionViolation(_))));
    }

    #[test]
    fn translation_and_admissibility() {
        let e = setup();
        let x = Solution::new(&e.a_g, shown(&e.disp.g_cols, example::X, 9)).unwrap();
        let y = translate_solution(&x, &e.a_g, &e.cols).unwrap();
        assert_eq!(y.selected(), shown(&e.disp.h_cols, example::Y, 13).as_slice());
        assert_eq!((x.weighted_size(), y.weighted_size()), (2, 2));
        assert!(is_feasible(&e.a_h, &y));

        let zero = translate_solution(&Solution::empty(&e.a_g), &e.a_g, &e.cols).unwrap();
        assert_eq!(zero.weighted_size(), 0);

        let mask = admissible_columns(&e.a_g);
        let admissible: Vec<usize> = (0..9).filter(|&i| mask[e.disp.g_cols[i]]).map(|i| i + 1).collect();
        assert_eq!(admissible, vec![3, 9]);
        assert!(admissible_columns(&e.a_h)[e.disp.h_cols[4]]);
    }

    #[test]
    fn pruning_keeps_the_extension_column() {
        let e = setup();
        let excluded = zoom_prune(&e.cols, &admissible_columns(&e.a_g));
        assert!(excluded.contains(&e.disp.h_cols[4]));
        assert!(excluded.contains(&e.disp.h_cols[12]));
        assert!(!excluded.contains(&e.disp.h_cols[9]));
        assert!(zoom_prune(&e.cols, &[false; 9]).is_empty());
    }

    #[test]
    fn local_modifications() {
        let e = setup();
        let y = Solution::new(&e.a_h, shown(&e.disp.h_cols, example::Y, 13)).unwrap();
        assert_eq!(local_modify(&e.a_h, &y, &[], &[]).unwrap(), Modification::Applied(y.clone()));
        let (c5, c1, c13) = (e.disp.h_cols[4], e.disp.h_cols[0], e.disp.h_cols[12]);
        // expected outcome from the rows of columns 1 and 13 alone
        let dense = e.a_h.to_dense();
        let overfull = (0..e.a_h.rows()).find(|&r| dense[r][c1] + dense[r][c13] > 1);
        match local_modify(&e.a_h, &y, &[c5], &[c1]).unwrap() {
            Modification::Applied(z) => {
                assert_eq!(overfull, None);
                assert!(z.is_selected(c1) && z.is_selected(c13) && !z.is_selected(c5));
            }
            Modification::Rejected { row, .. } => assert_eq!(Some(row), overfull),
        }
        let removed = local_modify(&e.a_h, &y, &[c13], &[]).unwrap();
        assert!(matches!(removed, Modification::Applied(_)));
        assert!(local_modify(&e.a_h, &y, &[c1], &[]).is_err());
    }

    #[test]
    fn extension_is_a_spread() {
        let e = setup();
        let z = Solution::new(&e.a_h, shown(&e.disp.h_cols, example::Z, 13)).unwrap();
        assert!(is_feasible(&e.a_h, &z));
        assert_eq!(z.weighted_size(), 5);
        let d = crate::designs::design_from_solution(&z, &e.a_h, &e.h).unwrap();
        assert!(crate::designs::is_steiner(&d).unwrap());
    }
}
