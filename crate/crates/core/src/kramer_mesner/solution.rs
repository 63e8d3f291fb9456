use crate::error::{Error, Result};
use crate::kramer_mesner::IncidenceMatrix;

/// A 0-1 selection of matrix columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Solution {
    selected: Vec<bool>,
    weighted_size: u64,
}

impl Solution {
    pub fn new(matrix: &IncidenceMatrix, selected: Vec<bool>) -> Result<Self> {
        Self::with_weights(matrix.col_weights(), selected)
    }

    pub fn with_weights(weights: &[u64], selected: Vec<bool>) -> Result<Self> {
        if selected.len() != weights.len() {
            return Err(Error::mismatch(format!(
                "selection of length {} for {} columns",
                selected.len(),
                weights.len()
            )));
        }
        let weighted_size = selected.iter().zip(weights).filter(|(&s, _)| s).map(|(_, &w)| w).sum();
        Ok(Solution {
            selected,
            weighted_size,
        })
    }

    pub fn empty(matrix: &IncidenceMatrix) -> Self {
        Solution {
            selected: vec![false; matrix.cols()],
            weighted_size: 0,
        }
    }

    pub fn from_columns(matrix: &IncidenceMatrix, columns: &[usize]) -> Result<Self> {
        let mut selected = vec![false; matrix.cols()];
        for &c in columns {
            *selected
                .get_mut(c)
                .ok_or_else(|| Error::mismatch(format!("column {c} out of range")))? = true;
        }
        Self::new(matrix, selected)
    }

    /// Parse the `0`/`1` string notation, e.g. `001000001`.
    pub fn from_bitstring(matrix: &IncidenceMatrix, bits: &str) -> Result<Self> {
        let selected = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::mismatch(format!("invalid solution character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(matrix, selected)
    }

    pub fn to_bitstring(&self) -> String {
        self.selected.iter().map(|&s| if s { '1' } else { '0' }).collect()
    }

    pub fn selected(&self) -> &[bool] {
        &self.selected
    }

    pub fn is_selected(&self, c: usize) -> bool {
        self.selected[c]
    }

    pub fn column_ids(&self) -> Vec<usize> {
        self.selected.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Sum of orbit sizes over the selected columns; the block count of the
    /// expanded design.
    pub fn weighted_size(&self) -> u64 {
        self.weighted_size
    }
}

/// `A x`, computed column by column.
pub fn coverage_vector(matrix: &IncidenceMatrix, x: &Solution) -> Result<Vec<u64>> {
    if x.len() != matrix.cols() {
        return Err(Error::mismatch("solution length differs from the column count"));
    }
    let mut acc = vec![0u64; matrix.rows()];
    for c in x.column_ids() {
        for &(r, v) in matrix.column(c) {
            acc[r as usize] += v as u64;
        }
    }
    Ok(acc)
}

/// First row of `A x` exceeding one, if any.
pub fn first_violation(matrix: &IncidenceMatrix, x: &Solution) -> Result<Option<(usize, u64)>> {
    Ok(coverage_vector(matrix, x)?.into_iter().enumerate().find(|&(_, v)| v > 1))
}

/// `A x <= 1` coordinatewise.
pub fn is_feasible(matrix: &IncidenceMatrix, x: &Solution) -> bool {
    matches!(first_violation(matrix, x), Ok(None))
}

pub(crate) fn require_feasible(matrix: &IncidenceMatrix, x: &Solution) -> Result<()> {
    match first_violation(matrix, x)? {
        None => Ok(()),
        Some((row, count)) => Err(Error::Infeasible { row, count }),
    }
}
