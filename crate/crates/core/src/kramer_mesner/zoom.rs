//! Solving along a chain of groups `G_0 >= G_1 >= ...`.
//!
//! The first group is solved with a beam search and the result completed to
//! a maximal solution. Each later step translates the current solution to the
//! next subgroup, drops the subgroup orbits that lie inside admissible orbits
//! of the previous group, and extends the translated solution on what is left.

use crate::beam::{BeamSearch, SolverParams};
use crate::error::{Error, Result};
use crate::kramer_mesner::{
    admissible_columns, complete_greedily, reduced_matrix, reduced_matrix_from, translate_solution, zoom_prune,
    IncidenceMatrix, Solution,
};
use crate::orbits::{fuse, orbit_partition, GroupGens};

/// Summary of one step of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZoomLevel {
    pub rows: usize,
    pub cols: usize,
    /// Columns removed by pruning before the search.
    pub excluded: usize,
    /// Weighted size carried over from the previous step.
    pub start_size: u64,
    pub size: u64,
}

#[derive(Clone, Debug)]
pub struct ZoomOutcome {
    pub levels: Vec<ZoomLevel>,
    /// Matrix of the last group in the chain.
    pub matrix: IncidenceMatrix,
    /// Maximal solution on `matrix`.
    pub solution: Solution,
}

/// Run the pipeline over `chain`, largest group first. Every group must be a
/// subgroup of its predecessor.
pub fn zoom(chain: &[GroupGens], t: usize, k: usize, params: &SolverParams) -> Result<ZoomOutcome> {
    let first = chain.first().ok_or_else(|| Error::mismatch("empty group chain"))?;
    let a = reduced_matrix(first, t, k)?;
    let found = BeamSearch::new(&a, params.clone())?.run()?;
    let x = complete_greedily(&a, &found.best, &Default::default())?;
    log::info!("level 0: {}x{} size {}", a.rows(), a.cols(), x.weighted_size());
    let mut levels = vec![ZoomLevel {
        rows: a.rows(),
        cols: a.cols(),
        excluded: 0,
        start_size: 0,
        size: x.weighted_size(),
    }];
    let (mut a_g, mut x) = (a, x);
    for (step, pair) in chain.windows(2).enumerate() {
        let (g, h) = (&pair[0], &pair[1]);
        let fmap = fuse(h, g, k)?;
        let y = translate_solution(&x, &a_g, &fmap)?;
        let excluded = zoom_prune(&fmap, &admissible_columns(&a_g));
        let a_h = reduced_matrix_from(&orbit_partition(h, t)?, &fmap.fine)?;
        let found = BeamSearch::new(&a_h, params.clone())?
            .warm_start(y.clone())?
            .exclude(&excluded)
            .run()?;
        let z = complete_greedily(&a_h, &found.best, &excluded)?;
        log::info!(
            "level {}: {}x{} excluded {} size {} -> {}",
            step + 1,
            a_h.rows(),
            a_h.cols(),
            excluded.len(),
            y.weighted_size(),
            z.weighted_size()
        );
        levels.push(ZoomLevel {
            rows: a_h.rows(),
            cols: a_h.cols(),
            excluded: excluded.len(),
            start_size: y.weighted_size(),
            size: z.weighted_size(),
        });
        a_g = a_h;
        x = z;
    }
    Ok(ZoomOutcome {
        levels,
        matrix: a_g,
        solution: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::StopCondition;
    use crate::designs::{design_from_solution, is_steiner};
    use crate::fixtures;
    use crate::orbits::{close_group, cyclic_subgroup_of_order, DEFAULT_ORDER_CAP};

    #[test]
    fn example_chain_reaches_a_spread() {
        let g = fixtures::gens("example_g4").unwrap();
        let h = cyclic_subgroup_of_order(&close_group(&g, DEFAULT_ORDER_CAP).unwrap(), 3).unwrap();
        let trivial = GroupGens::trivial(g.space());
        let params = SolverParams {
            alpha: 10,
            beta: 5,
            seed: 2,
            stop: StopCondition::iterations(50),
        };
        let out = zoom(&[g, h, trivial.clone()], 1, 2, &params).unwrap();
        assert_eq!(out.levels.len(), 3);
        assert_eq!(out.levels[0].size, 2);
        assert!(out.levels.windows(2).all(|w| w[1].start_size == w[0].size && w[1].size >= w[1].start_size));
        let d = design_from_solution(&out.solution, &out.matrix, &trivial).unwrap();
        assert_eq!(d.len() as u64, out.levels[2].size);
        assert!(crate::designs::verify_coverage(&d).unwrap().valid);
        if d.len() == 5 {
            assert!(is_steiner(&d).unwrap());
        }
    }

    #[test]
    fn rejects_non_subgroup() {
        let g = fixtures::gens("example_g4").unwrap();
        let trivial = GroupGens::trivial(g.space());
        let params = SolverParams {
            stop: StopCondition::iterations(5),
            ..SolverParams::default()
        };
        assert!(zoom(&[trivial, g], 1, 2, &params).is_err());
        assert!(zoom(&[], 1, 2, &params).is_err());
    }
}
