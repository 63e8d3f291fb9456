//! Beam search for 0-1 solutions of `A x <= 1` with large orbit-weighted
//! size.
//!
//! A state is a partial solution together with the set of columns that can
//! still be added. The objective `f` is the number of such columns. Each
//! iteration extends every state by up to `beta` random columns and keeps the
//! best `alpha` children; states that cannot be extended shrink the beam by
//! one slot each, and a round ends when the beam is empty. Rounds restart
//! until the stop condition fires.
//!
//! Randomness comes from ChaCha8 streams seeded with a splitmix64 mix of
//! `(seed, round, iteration, rank)`, so runs are reproducible on every
//! platform and independent of the worker count.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kramer_mesner::{is_feasible, IncidenceMatrix, Solution};

/// Per-column nonzero rows, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    columns: Vec<Vec<u32>>,
}

impl Delta {
    pub fn column(&self, c: usize) -> &[u32] {
        &self.columns[c]
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

pub fn build_delta(a: &IncidenceMatrix) -> Delta {
    let columns = (0..a.cols())
        .map(|c| a.column(c).iter().filter(|&&(_, v)| v > 0).map(|&(r, _)| r).collect())
        .collect();
    Delta { columns }
}

/// When to stop restarting. Any set limit ends the run; with none set a
/// single round is performed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StopCondition {
    pub max_iterations: Option<u64>,
    pub time_limit: Option<Duration>,
    pub target_size: Option<u64>,
}

impl StopCondition {
    pub fn iterations(n: u64) -> Self {
        StopCondition {
            max_iterations: Some(n),
            ..Self::default()
        }
    }

    pub fn time(limit: Duration) -> Self {
        StopCondition {
            time_limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn with_target(mut self, size: u64) -> Self {
        self.target_size = Some(size);
        self
    }

    fn is_unbounded(&self) -> bool {
        self.max_iterations.is_none() && self.time_limit.is_none() && self.target_size.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverParams {
    pub alpha: usize,
    pub beta: usize,
    pub seed: u64,
    pub stop: StopCondition,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            alpha: 100,
            beta: 50,
            seed: 0,
            stop: StopCondition::time(Duration::from_secs(10)),
        }
    }
}

impl SolverParams {
    fn validate(&self) -> Result<()> {
        if self.alpha == 0 || self.beta == 0 {
            return Err(Error::mismatch("alpha and beta must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) -> bool {
        let had = self.contains(i);
        self.words[i / 64] &= !(1 << (i % 64));
        had
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            })
        })
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A partial solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeamState {
    chosen: Vec<u32>,
    remaining: BitSet,
    f: usize,
    weighted_size: u64,
    key: u64,
}

impl BeamState {
    pub fn chosen(&self) -> &[u32] {
        &self.chosen
    }

    pub fn remaining(&self) -> Vec<usize> {
        self.remaining.iter().collect()
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn weighted_size(&self) -> u64 {
        self.weighted_size
    }
}

/// One line of the run log.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub iteration: u64,
    pub best_f: usize,
    pub best_size: u64,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iter={} best_f={} best_size={}", self.iteration, self.best_f, self.best_size)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeamOutcome {
    pub best: Solution,
    pub log: Vec<LogEntry>,
    pub iterations: u64,
    pub rounds: u64,
}

impl BeamOutcome {
    pub fn log_text(&self) -> String {
        self.log.iter().map(|e| format!("{e}\n")).collect()
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn stream(seed: u64, round: u64, iteration: u64, rank: u64) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for part in [round, iteration, rank] {
        h = splitmix(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

struct Candidate {
    parent: usize,
    column: u32,
    f: usize,
    weighted_size: u64,
    key: u64,
    tiebreak: u64,
}

/// Beam search over one incidence matrix.
pub struct BeamSearch<'a> {
    matrix: &'a IncidenceMatrix,
    params: SolverParams,
    conflicts: Vec<Vec<u32>>,
    zobrist: Vec<u64>,
    selectable: Vec<bool>,
    warm_start: Option<Solution>,
}

impl<'a> BeamSearch<'a> {
    pub fn new(matrix: &'a IncidenceMatrix, params: SolverParams) -> Result<Self> {
        params.validate()?;
        if matrix.cols() == 0 {
            return Err(Error::mismatch("matrix has no columns"));
        }
        let delta = build_delta(matrix);
        let mut by_row: Vec<Vec<u32>> = vec![Vec::new(); matrix.rows()];
        for c in 0..delta.len() {
            for &r in delta.column(c) {
                by_row[r as usize].push(c as u32);
            }
        }
        let conflicts = (0..delta.len())
            .into_par_iter()
            .map(|c| {
                let mut out: Vec<u32> = delta.column(c).iter().flat_map(|&r| by_row[r as usize].iter().copied()).collect();
                out.push(c as u32);
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let mut rng = stream(params.seed, u64::MAX, u64::MAX, u64::MAX);
        let zobrist = (0..matrix.cols()).map(|_| rng.gen()).collect();
        let selectable = (0..matrix.cols()).map(|c| matrix.column_max(c) <= 1).collect();
        Ok(BeamSearch {
            matrix,
            params,
            conflicts,
            zobrist,
            selectable,
            warm_start: None,
        })
    }

    /// Start every state from `x` instead of the empty selection.
    pub fn warm_start(mut self, x: Solution) -> Result<Self> {
        if x.len() != self.matrix.cols() {
            return Err(Error::mismatch("warm start length differs from the column count"));
        }
        crate::kramer_mesner::solution::require_feasible(self.matrix, &x)?;
        self.warm_start = Some(x);
        Ok(self)
    }

    /// Never add the given columns. Columns already in the warm start stay.
    pub fn exclude(mut self, columns: &BTreeSet<usize>) -> Self {
        for &c in columns {
            if let Some(s) = self.selectable.get_mut(c) {
                *s = false;
            }
        }
        self
    }

    fn base_state(&self) -> BeamState {
        let mut remaining = BitSet::new(self.matrix.cols());
        for (c, &ok) in self.selectable.iter().enumerate() {
            if ok {
                remaining.insert(c);
            }
        }
        let mut state = BeamState {
            chosen: Vec::new(),
            f: remaining.len(),
            remaining,
            weighted_size: 0,
            key: 0,
        };
        if let Some(x) = &self.warm_start {
            for c in x.column_ids() {
                for &d in &self.conflicts[c] {
                    if state.remaining.remove(d as usize) {
                        state.f -= 1;
                    }
                }
                state.chosen.push(c as u32);
                state.weighted_size += self.matrix.col_weights()[c];
                state.key ^= self.zobrist[c];
            }
        }
        state
    }

    fn lost(&self, state: &BeamState, c: usize) -> usize {
        self.conflicts[c].iter().filter(|&&d| state.remaining.contains(d as usize)).count()
    }

    fn child(&self, state: &BeamState, c: usize) -> BeamState {
        let mut next = state.clone();
        for &d in &self.conflicts[c] {
            if next.remaining.remove(d as usize) {
                next.f -= 1;
            }
        }
        next.chosen.push(c as u32);
        next.weighted_size += self.matrix.col_weights()[c];
        next.key ^= self.zobrist[c];
        next
    }

    fn to_solution(&self, state: &BeamState) -> Result<Solution> {
        let ids: Vec<usize> = state.chosen.iter().map(|&c| c as usize).collect();
        Solution::from_columns(self.matrix, &ids)
    }

    pub fn run(&self) -> Result<BeamOutcome> {
        let start = Instant::now();
        let stop = &self.params.stop;
        let base = self.base_state();
        let mut best = base.clone();
        let mut log = Vec::new();
        let mut iteration = 0u64;
        let mut rounds = 0u64;
        let alpha = if self.params.alpha > self.matrix.cols() {
            log::warn!("alpha {} exceeds the column count {}; clamped", self.params.alpha, self.matrix.cols());
            self.matrix.cols()
        } else {
            self.params.alpha
        };
        let beta = self.params.beta;

        let stopped = |iteration: u64, best: &BeamState| {
            stop.max_iterations.is_some_and(|m| iteration >= m)
                || stop.time_limit.is_some_and(|t| start.elapsed() >= t)
                || stop.target_size.is_some_and(|s| best.weighted_size >= s)
        };

        'rounds: loop {
            if base.f == 0 {
                break;
            }
            let round = rounds;
            rounds += 1;
            // B1: distinct random first columns
            let pool = base.remaining.iter().collect::<Vec<_>>();
            let mut rng = stream(self.params.seed, round, 0, 0);
            let mut beam: Vec<BeamState> = sample(&mut rng, pool.len(), alpha.min(pool.len()))
                .into_iter()
                .map(|i| self.child(&base, pool[i]))
                .collect();
            let mut width = beam.len();
            loop {
                iteration += 1;
                for s in &beam {
                    if s.weighted_size > best.weighted_size {
                        best = s.clone();
                    }
                }
                let extendable: Vec<&BeamState> = beam.iter().filter(|s| s.f > 0).collect();
                width -= beam.len() - extendable.len();
                if width == 0 || extendable.is_empty() {
                    log.push(LogEntry {
                        iteration,
                        best_f: 0,
                        best_size: best.weighted_size,
                    });
                    if stopped(iteration, &best) {
                        break 'rounds;
                    }
                    break;
                }
                // B2: beta random extensions per state
                let mut candidates: Vec<Candidate> = extendable
                    .par_iter()
                    .enumerate()
                    .flat_map_iter(|(rank, s)| {
                        let mut rng = stream(self.params.seed, round, iteration, rank as u64 + 1);
                        let pool: Vec<usize> = s.remaining.iter().collect();
                        sample(&mut rng, pool.len(), beta.min(pool.len()))
                            .into_iter()
                            .map(|i| {
                                let c = pool[i];
                                Candidate {
                                    parent: rank,
                                    column: c as u32,
                                    f: s.f - self.lost(s, c),
                                    weighted_size: s.weighted_size + self.matrix.col_weights()[c],
                                    key: s.key ^ self.zobrist[c],
                                    tiebreak: 0,
                                }
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let mut seen = HashSet::with_capacity(candidates.len());
                candidates.retain(|cand| seen.insert(cand.key));
                let mut rng = stream(self.params.seed, round, iteration, 0);
                for cand in &mut candidates {
                    cand.tiebreak = rng.gen();
                }
                // B3: keep the best `width` children
                candidates.sort_unstable_by(|a, b| {
                    b.f.cmp(&a.f)
                        .then(b.weighted_size.cmp(&a.weighted_size))
                        .then(b.tiebreak.cmp(&a.tiebreak))
                });
                candidates.truncate(width);
                beam = candidates
                    .par_iter()
                    .map(|cand| self.child(extendable[cand.parent], cand.column as usize))
                    .collect();
                width = width.min(beam.len());
                log.push(LogEntry {
                    iteration,
                    best_f: beam[0].f,
                    best_size: best.weighted_size.max(beam.iter().map(|s| s.weighted_size).max().unwrap_or(0)),
                });
                if stopped(iteration, &best) {
                    for s in &beam {
                        if s.weighted_size > best.weighted_size {
                            best = s.clone();
                        }
                    }
                    break 'rounds;
                }
            }
            if stop.is_unbounded() {
                break;
            }
        }

        let solution = self.to_solution(&best)?;
        if !is_feasible(self.matrix, &solution) {
            return Err(Error::Internal("beam search produced an infeasible selection".into()));
        }
        Ok(BeamOutcome {
            best: solution,
            log,
            iterations: iteration,
            rounds,
        })
    }
}

/// Run a beam search with an optional warm start.
pub fn beam_search(a: &IncidenceMatrix, params: &SolverParams, warm_start: Option<&Solution>) -> Result<BeamOutcome> {
    let mut search = BeamSearch::new(a, params.clone())?;
    if let Some(x) = warm_start {
        search = search.warm_start(x.clone())?;
    }
    search.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kramer_mesner::plain_matrix;
    use crate::FieldOrder;

    fn naive_remaining(a: &IncidenceMatrix, chosen: &[u32]) -> Vec<usize> {
        let dense = a.to_dense();
        (0..a.cols())
            .filter(|&c| a.column_max(c) <= 1)
            .filter(|&c| {
                !chosen.iter().any(|&d| {
                    d as usize == c || (0..a.rows()).any(|r| dense[r][c] > 0 && dense[r][d as usize] > 0)
                })
            })
            .collect()
    }

    #[test]
    fn delta_of_plain_planes() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        let d = build_delta(&a);
        assert_eq!(d.len(), 35);
        for c in 0..35 {
            assert_eq!(d.column(c).len(), 3);
            assert!(d.column(c).windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn elimination_matches_naive() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        let search = BeamSearch::new(&a, SolverParams::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut state = search.base_state();
            while state.f > 0 {
                let pool = state.remaining();
                let c = pool[rng.gen_range(0..pool.len())];
                let before = state.f;
                let lost = search.lost(&state, c);
                state = search.child(&state, c);
                assert!(state.f < before);
                assert_eq!(state.f, before - lost);
                assert_eq!(state.remaining(), naive_remaining(&a, &state.chosen));
            }
        }
    }

    #[test]
    fn greedy_parameters_stay_feasible() {
        let a = plain_matrix(5, 1, 2, FieldOrder::TWO).unwrap();
        let params = SolverParams {
            alpha: 1,
            beta: 1,
            seed: 3,
            stop: StopCondition::iterations(40),
        };
        let out = beam_search(&a, &params, None).unwrap();
        assert!(is_feasible(&a, &out.best));
        assert!(out.best.weighted_size() > 0);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = plain_matrix(5, 1, 2, FieldOrder::TWO).unwrap();
        let params = SolverParams {
            alpha: 8,
            beta: 4,
            seed: 11,
            stop: StopCondition::iterations(60),
        };
        let x = beam_search(&a, &params, None).unwrap();
        let y = beam_search(&a, &params, None).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.log_text().lines().count(), x.log.len());
    }

    #[test]
    fn warm_start_is_kept() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        let start = Solution::from_columns(&a, &[0]).unwrap();
        let params = SolverParams {
            alpha: 4,
            beta: 4,
            seed: 1,
            stop: StopCondition::iterations(20),
        };
        let out = beam_search(&a, &params, Some(&start)).unwrap();
        assert!(out.best.is_selected(0));
    }

    #[test]
    fn exclusions_are_respected() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        let excluded: BTreeSet<usize> = (0..20).collect();
        let params = SolverParams {
            alpha: 4,
            beta: 4,
            seed: 1,
            stop: StopCondition::iterations(20),
        };
        let out = BeamSearch::new(&a, params).unwrap().exclude(&excluded).run().unwrap();
        assert!(out.best.column_ids().iter().all(|c| *c >= 20));
    }

    #[test]
    fn rejects_zero_width() {
        let a = plain_matrix(4, 1, 2, FieldOrder::TWO).unwrap();
        let params = SolverParams {
            alpha: 0,
            ..SolverParams::default()
        };
        assert!(BeamSearch::new(&a, params).is_err());
    }
}
