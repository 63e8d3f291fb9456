//! Block designs: expansion from orbit representatives, validity checks,
//! bounds and the subspace-code view.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfmat::{gaussian_binomial, packing_bound_in, Encoding, SubLattice};
use crate::kramer_mesner::{IncidenceMatrix, Solution};
use crate::orbits::{orbit_elements, GroupGens};
use crate::{Count, FieldOrder, Subspace};

/// Designs with more blocks than this are only checked by coverage.
pub const DEFAULT_PAIRWISE_THRESHOLD: usize = 10_000;
/// Violations listed in a report; the total count is always exact.
pub const VIOLATION_CAP: usize = 100;
/// Above this many blocks the minimum distance is estimated from samples.
pub const EXHAUSTIVE_DISTANCE_LIMIT: usize = 4_000;
const DISTANCE_SAMPLES: usize = 200_000;
const DENSE_KEY_BITS: u32 = 30;

/// A set of `k`-subspaces, checked against `t`-subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub q: FieldOrder,
    pub n: usize,
    pub t: usize,
    pub k: usize,
    pub blocks: Vec<Subspace>,
}

impl Design {
    pub fn new(q: FieldOrder, n: usize, t: usize, k: usize, blocks: Vec<Subspace>) -> Result<Self> {
        if t == 0 || t > k || k > n {
            return Err(Error::mismatch(format!("need 1 <= t <= k <= n, got t={t} k={k} n={n}")));
        }
        for b in &blocks {
            if b.q() != q || b.n() != n || b.dim() != k {
                return Err(Error::mismatch(format!(
                    "block {b} is not a {k}-subspace of F_{}^{n}",
                    q.get()
                )));
            }
        }
        Ok(Design { q, n, t, k, blocks })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// A `t`-subspace lying in two or more blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subspace: Vec<u64>,
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub valid: bool,
    pub size: usize,
    /// Distinct `t`-subspaces lying in some block.
    pub covered: u64,
    /// Number of `t`-subspaces lying in more than one block.
    pub violation_count: usize,
    /// The first [`VIOLATION_CAP`] violations in encoding order.
    pub violations: Vec<Violation>,
    /// Pairs of equal blocks.
    pub duplicate_blocks: Vec<(usize, usize)>,
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "valid={} size={} covered={} violations={}",
            self.valid, self.size, self.covered, self.violation_count
        )
    }
}

impl ValidityReport {
    /// Human-readable listing of the recorded problems.
    pub fn details(&self) -> String {
        let mut out = String::new();
        for (a, b) in &self.duplicate_blocks {
            out.push_str(&format!("duplicate blocks {a} and {b}\n"));
        }
        for v in &self.violations {
            let ids: Vec<String> = v.blocks.iter().map(|b| b.to_string()).collect();
            out.push_str(&format!("{:?} lies in blocks {}\n", v.subspace, ids.join(" ")));
        }
        if self.violation_count > self.violations.len() {
            out.push_str(&format!("... {} more\n", self.violation_count - self.violations.len()));
        }
        out
    }

    fn build(size: usize, covered: u64, mut groups: Vec<(Encoding, Vec<usize>)>, duplicates: Vec<(usize, usize)>) -> Self {
        groups.sort();
        let violation_count = groups.len();
        let violations = groups
            .into_iter()
            .take(VIOLATION_CAP)
            .map(|(key, mut blocks)| {
                blocks.sort_unstable();
                blocks.dedup();
                Violation {
                    subspace: key.to_vec(),
                    blocks,
                }
            })
            .collect();
        ValidityReport {
            valid: violation_count == 0 && duplicates.is_empty(),
            size,
            covered,
            violation_count,
            violations,
            duplicate_blocks: duplicates,
        }
    }
}

/// Union of the orbits of `reps` under the group generated by `gens`.
/// Representatives from the same orbit are rejected.
pub fn expand(reps: &[Subspace], gens: &GroupGens, t: usize) -> Result<Design> {
    let first = reps.first().ok_or_else(|| Error::mismatch("no representatives"))?;
    if first.space() != gens.space() {
        return Err(Error::mismatch("representatives and generators act on different spaces"));
    }
    let orbits: Vec<(Vec<Subspace>, Subspace)> = reps.par_iter().map(|r| orbit_elements(gens, r)).collect();
    let mut by_min: HashMap<&Subspace, usize> = HashMap::new();
    for (i, (_, min)) in orbits.iter().enumerate() {
        if let Some(&j) = by_min.get(min) {
            return Err(Error::SameOrbit { first: j, second: i });
        }
        by_min.insert(min, i);
    }
    let blocks = orbits.into_iter().flat_map(|(elements, _)| elements).collect();
    Design::new(first.q(), first.n(), t, first.dim(), blocks)
}

/// Blocks of the orbits selected by `x`.
pub fn design_from_solution(x: &Solution, matrix: &IncidenceMatrix, gens: &GroupGens) -> Result<Design> {
    let reps: Vec<Subspace> = x.column_ids().into_iter().map(|c| matrix.col_orbits()[c].clone()).collect();
    if reps.is_empty() {
        return Design::new(matrix.q(), matrix.n(), matrix.t(), matrix.k(), Vec::new());
    }
    expand(&reps, gens, matrix.t())
}

fn duplicate_blocks(blocks: &[Subspace]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.par_sort_unstable_by(|&a, &b| blocks[a].cmp(&blocks[b]).then(a.cmp(&b)));
    let mut out: Vec<(usize, usize)> = order
        .windows(2)
        .filter(|w| blocks[w[0]] == blocks[w[1]])
        .map(|w| (w[0], w[1]))
        .collect();
    out.sort_unstable();
    out
}

fn lattice(d: &Design) -> Result<SubLattice> {
    SubLattice::new(d.k, d.t, d.q)
}

/// Check that no two blocks meet in dimension `t` or more.
pub fn verify_pairwise(d: &Design) -> Result<ValidityReport> {
    verify_pairwise_with(d, DEFAULT_PAIRWISE_THRESHOLD)
}

pub fn verify_pairwise_with(d: &Design, threshold: usize) -> Result<ValidityReport> {
    let size = d.len();
    if size > threshold {
        return Err(Error::PairwiseThreshold { size, threshold });
    }
    let blocks = &d.blocks;
    let bad_pairs: Vec<(usize, usize, Subspace)> = (0..size)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..size).filter_map(move |j| {
                if blocks[i].intersection_dim(&blocks[j]).ok()? < d.t {
                    return None;
                }
                let meet = blocks[i].intersection(&blocks[j]).ok().flatten()?;
                Some((i, j, meet))
            })
        })
        .collect();
    let duplicates = duplicate_blocks(blocks);
    let mut lattices: BTreeMap<usize, SubLattice> = BTreeMap::new();
    let mut groups: BTreeMap<Encoding, Vec<usize>> = BTreeMap::new();
    for (i, j, meet) in &bad_pairs {
        let lat = match lattices.entry(meet.dim()) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(SubLattice::new(meet.dim(), d.t, d.q)?),
        };
        for s in lat.within(meet) {
            let entry = groups.entry(s.encoding().iter().copied().collect()).or_default();
            entry.push(*i);
            entry.push(*j);
        }
    }
    // without collisions every block contributes [k t]_q distinct t-subspaces
    let covered = if bad_pairs.is_empty() {
        size as u64 * lattice(d)?.len() as u64
    } else {
        count_covered(d)?
    };
    Ok(ValidityReport::build(size, covered, groups.into_iter().collect(), duplicates))
}

fn count_covered(d: &Design) -> Result<u64> {
    let lat = lattice(d)?;
    let mut keys: Vec<Encoding> = d
        .blocks
        .par_iter()
        .flat_map_iter(|b| lat.within(b).map(|s| s.encoding().iter().copied().collect::<Encoding>()))
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    Ok(keys.len() as u64)
}

/// Packs a `t`-subspace encoding into one integer, first column most
/// significant, so that integer order is encoding order.
struct KeyPacker {
    radix: u64,
    t: usize,
}

impl KeyPacker {
    fn dense(d: &Design) -> Option<Self> {
        let radix = d.q.get() as u64;
        let width = radix.checked_pow(d.n as u32)?;
        let total = width.checked_pow(d.t as u32)?;
        (total <= 1 << DENSE_KEY_BITS).then_some(KeyPacker { radix: width, t: d.t })
    }

    fn pack(&self, enc: &[u64]) -> u64 {
        enc.iter().fold(0, |acc, &c| acc * self.radix + c)
    }

    fn unpack(&self, mut key: u64) -> Encoding {
        let mut out: Encoding = (0..self.t)
            .map(|_| {
                let c = key % self.radix;
                key /= self.radix;
                c
            })
            .collect();
        out.reverse();
        out
    }

    fn capacity(&self) -> u64 {
        self.radix.pow(self.t as u32)
    }
}

struct AtomicBits(Vec<AtomicU64>);

impl AtomicBits {
    fn new(len: u64) -> Self {
        AtomicBits((0..len.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    /// Set bit `i`; true if it was already set.
    fn set(&self, i: u64) -> bool {
        let mask = 1 << (i % 64);
        self.0[(i / 64) as usize].fetch_or(mask, Ordering::Relaxed) & mask != 0
    }

    fn get(&self, i: u64) -> bool {
        self.0[(i / 64) as usize].load(Ordering::Relaxed) >> (i % 64) & 1 == 1
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.load(Ordering::Relaxed).count_ones() as u64).sum()
    }
}

/// Check that no `t`-subspace lies in two blocks by listing the
/// `t`-subspaces of every block.
pub fn verify_coverage(d: &Design) -> Result<ValidityReport> {
    let lat = lattice(d)?;
    let duplicates = duplicate_blocks(&d.blocks);
    let (covered, groups) = match KeyPacker::dense(d) {
        Some(packer) => coverage_dense(d, &lat, &packer),
        None => coverage_sorted(d, &lat),
    };
    Ok(ValidityReport::build(d.len(), covered, groups, duplicates))
}

fn coverage_dense(d: &Design, lat: &SubLattice, packer: &KeyPacker) -> (u64, Vec<(Encoding, Vec<usize>)>) {
    let seen = AtomicBits::new(packer.capacity());
    let dup = AtomicBits::new(packer.capacity());
    let any_dup = d
        .blocks
        .par_iter()
        .map(|b| {
            let mut hit = false;
            for s in lat.within(b) {
                let key = packer.pack(s.encoding());
                if seen.set(key) {
                    dup.set(key);
                    hit = true;
                }
            }
            hit
        })
        .reduce(|| false, |a, b| a || b);
    let covered = seen.count();
    if !any_dup {
        return (covered, Vec::new());
    }
    let mut hits: Vec<(u64, usize)> = d
        .blocks
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, b)| {
            lat.within(b)
                .map(|s| packer.pack(s.encoding()))
                .filter(|&key| dup.get(key))
                .map(move |key| (key, i))
                .collect::<Vec<_>>()
        })
        .collect();
    hits.par_sort_unstable();
    let groups = group_sorted(hits.into_iter().map(|(key, i)| (packer.unpack(key), i)));
    (covered, groups)
}

fn coverage_sorted(d: &Design, lat: &SubLattice) -> (u64, Vec<(Encoding, Vec<usize>)>) {
    let mut all: Vec<(Encoding, usize)> = d
        .blocks
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, b)| lat.within(b).map(move |s| (s.encoding().iter().copied().collect(), i)))
        .collect();
    all.par_sort_unstable();
    let mut covered = 0u64;
    let mut prev: Option<&Encoding> = None;
    for (key, _) in &all {
        if prev != Some(key) {
            covered += 1;
            prev = Some(key);
        }
    }
    let groups = group_sorted(all.into_iter())
        .into_iter()
        .filter(|(_, blocks)| blocks.len() > 1)
        .collect();
    (covered, groups)
}

fn group_sorted(items: impl Iterator<Item = (Encoding, usize)>) -> Vec<(Encoding, Vec<usize>)> {
    let mut out: Vec<(Encoding, Vec<usize>)> = Vec::new();
    for (key, i) in items {
        match out.last_mut() {
            Some((k, blocks)) if *k == key => blocks.push(i),
            _ => out.push((key, vec![i])),
        }
    }
    out
}

/// `floor([n t]_q / [k t]_q)`.
pub fn packing_bound(n: u32, t: u32, k: u32, q: u32) -> Result<Count> {
    if t > k || k > n {
        return Err(Error::mismatch(format!("need t <= k <= n, got t={t} k={k} n={n}")));
    }
    packing_bound_in::<Count>(n, t, k, q).ok_or_else(|| Error::mismatch("empty block lattice"))
}

fn require_valid(d: &Design) -> Result<ValidityReport> {
    let report = verify_coverage(d)?;
    if !report.valid {
        return Err(Error::InvalidDesign {
            violations: report.violation_count + report.duplicate_blocks.len(),
        });
    }
    Ok(report)
}

/// True if every `t`-subspace lies in exactly one block. Fails on invalid
/// designs.
pub fn is_steiner(d: &Design) -> Result<bool> {
    let report = require_valid(d)?;
    Ok(Count::from(report.covered) == gaussian_binomial(d.n as u32, d.t as u32, d.q.get()))
}

/// The design read as a constant-dimension code `[n, k, d, s]_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub s: usize,
    pub q: u32,
    /// Smallest pairwise subspace distance seen, `None` for fewer than two
    /// blocks.
    pub min_distance: Option<usize>,
    /// Whether every pair was examined.
    pub exhaustive: bool,
}

impl fmt::Display for CodeParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]_{}", self.n, self.k, self.d, self.s, self.q)
    }
}

pub fn code_parameters(design: &Design) -> Result<CodeParameters> {
    require_valid(design)?;
    let blocks = &design.blocks;
    let s = blocks.len();
    let dist = |i: usize, j: usize| blocks[i].distance(&blocks[j]).expect("blocks share a space");
    let exhaustive = s <= EXHAUSTIVE_DISTANCE_LIMIT;
    let min_distance = if s < 2 {
        None
    } else if exhaustive {
        (0..s)
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..s).map(move |j| (i, j)))
            .map(|(i, j)| dist(i, j))
            .min()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
        let pairs: Vec<(usize, usize)> = (0..DISTANCE_SAMPLES)
            .map(|_| {
                let i = rng.gen_range(0..s);
                let j = (i + rng.gen_range(1..s)) % s;
                (i, j)
            })
            .collect();
        pairs.into_par_iter().map(|(i, j)| dist(i, j)).min()
    };
    Ok(CodeParameters {
        n: design.n,
        k: design.k,
        d: 2 * (design.k - design.t + 1),
        s,
        q: design.q.get(),
        min_distance,
        exhaustive,
    })
}

/// Order of the normalizer of a Singer cycle, `n (q^n - 1)`.
pub fn ns_order(n: u32, q: u32) -> Count {
    let qn = num_traits::pow(Count::from(q), n as usize);
    Count::from(n) * (qn - 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmat::enumerate_subspaces;

    fn span(n: usize, vecs: &[u64]) -> Subspace {
        Subspace::span(crate::Space::binary(n).unwrap(), vecs).unwrap()
    }

    #[test]
    fn shared_line_is_reported_by_both() {
        let blocks = vec![span(5, &[1, 2, 4]), span(5, &[1, 2, 8])];
        let d = Design::new(FieldOrder::TWO, 5, 2, 3, blocks).unwrap();
        let a = verify_pairwise(&d).unwrap();
        let b = verify_coverage(&d).unwrap();
        assert_eq!(a, b);
        assert!(!a.valid);
        assert_eq!(a.violation_count, 1);
        assert_eq!(a.violations[0].blocks, vec![0, 1]);
        assert_eq!(a.covered, 13);
    }

    #[test]
    fn single_block_and_duplicates() {
        let one = Design::new(FieldOrder::TWO, 4, 2, 3, vec![span(4, &[1, 2, 4])]).unwrap();
        assert!(verify_pairwise(&one).unwrap().valid);
        let two = Design::new(FieldOrder::TWO, 4, 2, 3, vec![span(4, &[1, 2, 4]), span(4, &[3, 2, 4])]).unwrap();
        let r = verify_coverage(&two).unwrap();
        assert_eq!(r.duplicate_blocks, vec![(0, 1)]);
        assert_eq!(r, verify_pairwise(&two).unwrap());
    }

    #[test]
    fn sorted_path_agrees_with_dense() {
        // q=3, n=4, t=2: 81^2 keys fit the dense table; compare with sorting
        let q = FieldOrder::new(3).unwrap();
        let planes = enumerate_subspaces(4, 3, q).unwrap();
        let d = Design::new(q, 4, 2, 3, planes[..6].to_vec()).unwrap();
        let lat = lattice(&d).unwrap();
        let packer = KeyPacker::dense(&d).unwrap();
        assert_eq!(coverage_dense(&d, &lat, &packer), coverage_sorted(&d, &lat));
    }

    #[test]
    fn bounds_and_orders() {
        assert_eq!(packing_bound(6, 2, 3, 2).unwrap(), Count::from(93u32));
        assert_eq!(packing_bound(5, 3, 5, 2).unwrap(), Count::from(1u32));
        assert_eq!(ns_order(12, 2), Count::from(49140u32));
        assert_eq!(ns_order(1, 2), Count::from(1u32));
    }

    #[test]
    fn whole_space_is_steiner() {
        let d = Design::new(FieldOrder::TWO, 3, 2, 3, vec![span(3, &[1, 2, 4])]).unwrap();
        assert!(is_steiner(&d).unwrap());
        let p = code_parameters(&d).unwrap();
        assert_eq!((p.d, p.s, p.min_distance), (4, 1, None));
        let lines = enumerate_subspaces(3, 2, FieldOrder::TWO).unwrap();
        let d = Design::new(FieldOrder::TWO, 3, 2, 2, lines).unwrap();
        let p = code_parameters(&d).unwrap();
        assert_eq!((p.d, p.min_distance), (2, Some(2)));
    }

    #[test]
    fn invalid_design_has_no_code_view() {
        let blocks = vec![span(5, &[1, 2, 4]), span(5, &[1, 2, 8])];
        let d = Design::new(FieldOrder::TWO, 5, 2, 3, blocks).unwrap();
        assert!(matches!(code_parameters(&d), Err(Error::InvalidDesign { .. })));
        assert!(is_steiner(&d).is_err());
    }
}
