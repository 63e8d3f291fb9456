//! Matrix groups given by generators and their action on Grassmannians.
//!
//! Orbits are computed by breadth-first search over generator applications,
//! so expanding an orbit never needs the element list of the group. The
//! closure is only built when an order, a membership test, or a subgroup is
//! asked for.

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::gfmat::{enumerate_subspaces_capped, FieldOrder, FqMatrix, LinearMap, Space, Subspace, DEFAULT_ENUMERATION_CAP};

/// Default limit on the number of elements of a group closure.
pub const DEFAULT_ORDER_CAP: usize = 1 << 22;

/// Generators of a subgroup of `GL(n, q)`.
#[derive(Clone, Debug)]
pub struct GroupGens {
    space: Space,
    generators: Vec<FqMatrix>,
    maps: Vec<LinearMap>,
}

impl GroupGens {
    /// Every generator must be an invertible `n x n` matrix over `F_q`.
    pub fn new(q: FieldOrder, n: usize, generators: Vec<FqMatrix>) -> Result<Self> {
        let space = Space::new(q, n)?;
        let mut maps = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if g.q() != q || g.rows() != n || g.cols() != n {
                return Err(Error::mismatch(format!(
                    "generator {index} is {}x{} over F_{}, expected {n}x{n} over F_{q}",
                    g.rows(),
                    g.cols(),
                    g.q()
                )));
            }
            if !g.is_invertible() {
                return Err(Error::SingularGenerator { index, q: q.get() });
            }
            maps.push(g.to_linear_map()?);
        }
        Ok(GroupGens {
            space,
            generators,
            maps,
        })
    }

    /// The trivial group, with no generators.
    pub fn trivial(space: Space) -> Self {
        GroupGens {
            space,
            generators: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn from_maps(space: Space, maps: Vec<LinearMap>) -> Self {
        let generators = maps.iter().map(LinearMap::to_matrix).collect();
        GroupGens {
            space,
            generators,
            maps,
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

    pub fn generators(&self) -> &[FqMatrix] {
        &self.generators
    }

    pub fn maps(&self) -> &[LinearMap] {
        &self.maps
    }
}

/// All elements of a finite matrix group, in breadth-first discovery order
/// starting from the identity.
#[derive(Clone, Debug)]
pub struct GroupClosure {
    gens: GroupGens,
    elements: IndexSet<LinearMap>,
}

impl GroupClosure {
    pub fn gens(&self) -> &GroupGens {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &LinearMap> {
        self.elements.iter()
    }

    pub fn contains(&self, g: &LinearMap) -> bool {
        self.elements.contains(g)
    }
}

/// Close the generators under multiplication.
pub fn close_group(gens: &GroupGens, order_cap: usize) -> Result<GroupClosure> {
    let mut elements = IndexSet::new();
    elements.insert(LinearMap::identity(gens.space));
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in &gens.maps {
            let next = g.compose(&current);
            if elements.insert(next) && elements.len() > order_cap {
                return Err(Error::OrderCap {
                    partial: elements.len(),
                    cap: order_cap,
                });
            }
        }
    }
    Ok(GroupClosure {
        gens: gens.clone(),
        elements,
    })
}

/// `gK` for an invertible matrix `g`.
pub fn act(g: &FqMatrix, k: &Subspace) -> Result<Subspace> {
    if g.q() != k.q() || g.rows() != k.n() || g.cols() != k.n() {
        return Err(Error::mismatch(format!(
            "{}x{} matrix acting on F_{}^{}",
            g.rows(),
            g.cols(),
            k.q(),
            k.n()
        )));
    }
    if !g.is_invertible() {
        return Err(Error::SingularGenerator { index: 0, q: g.q().get() });
    }
    Ok(g.to_linear_map()?.act(k))
}

/// An orbit `G(K)`. The representative is the element with the smallest
/// encoding.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: Subspace,
    pub size: usize,
    pub elements: Option<Vec<Subspace>>,
}

impl Orbit {
    pub fn elements(&self) -> &[Subspace] {
        self.elements.as_deref().unwrap_or(&[])
    }
}

/// Orbit of `k` under the group generated by `gens`, with its elements in
/// breadth-first order from `k`.
pub fn orbit_of(gens: &GroupGens, k: &Subspace) -> Orbit {
    let (elements, representative) = orbit_elements(gens, k);
    Orbit {
        representative,
        size: elements.len(),
        elements: Some(elements),
    }
}

pub(crate) fn orbit_elements(gens: &GroupGens, k: &Subspace) -> (Vec<Subspace>, Subspace) {
    let mut seen: HashSet<Subspace> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(k.clone());
    queue.push_back(k.clone());
    let mut min = k.clone();
    while let Some(cur) = queue.pop_front() {
        for g in &gens.maps {
            let img = g.act(&cur);
            if !seen.contains(&img) {
                seen.insert(img.clone());
                queue.push_back(img);
            }
        }
        if cur < min {
            min = cur.clone();
        }
        order.push(cur);
    }
    (order, min)
}

/// The orbits of a group on all `k`-subspaces.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    gens: GroupGens,
    dim: usize,
    orbits: Vec<Orbit>,
    index: HashMap<Subspace, u32>,
}

impl OrbitPartition {
    pub fn gens(&self) -> &GroupGens {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn representatives(&self) -> Vec<Subspace> {
        self.orbits.iter().map(|o| o.representative.clone()).collect()
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o.size as u64).collect()
    }

    /// Index of the orbit containing `s`.
    pub fn orbit_index(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).map(|&i| i as usize)
    }
}

pub fn orbit_partition(gens: &GroupGens, k: usize) -> Result<OrbitPartition> {
    orbit_partition_capped(gens, k, DEFAULT_ENUMERATION_CAP)
}

pub fn orbit_partition_capped(gens: &GroupGens, k: usize, cap: u64) -> Result<OrbitPartition> {
    let all = enumerate_subspaces_capped(gens.n(), k, gens.q(), cap)?;
    let mut index: HashMap<Subspace, u32> = HashMap::with_capacity(all.len());
    let mut orbits = Vec::new();
    // ascending enumeration: the first unassigned subspace is its orbit's minimum
    for s in &all {
        if index.contains_key(s) {
            continue;
        }
        let (elements, representative) = orbit_elements(gens, s);
        if representative != *s {
            return Err(Error::Internal(format!("orbit of {s} has smaller element {representative}")));
        }
        let id = orbits.len() as u32;
        for e in &elements {
            index.insert(e.clone(), id);
        }
        orbits.push(Orbit {
            representative,
            size: elements.len(),
            elements: Some(elements),
        });
    }
    Ok(OrbitPartition {
        gens: gens.clone(),
        dim: k,
        orbits,
        index,
    })
}

/// How the orbits of a subgroup `H` fuse into the orbits of `G`.
#[derive(Clone, Debug)]
pub struct FusionMap {
    pub fine: OrbitPartition,
    pub coarse: OrbitPartition,
    /// `assignment[i]` is the `G`-orbit containing `H`-orbit `i`.
    pub assignment: Vec<usize>,
}

impl FusionMap {
    /// Build from precomputed partitions of the same dimension.
    pub fn from_partitions(fine: OrbitPartition, coarse: OrbitPartition) -> Result<Self> {
        if fine.dim != coarse.dim || fine.gens.space != coarse.gens.space {
            return Err(Error::mismatch("fusion between partitions of different subspace sets"));
        }
        let assignment = fine
            .orbits
            .iter()
            .map(|o| {
                coarse
                    .orbit_index(&o.representative)
                    .ok_or_else(|| Error::Internal(format!("{} missing from the coarse partition", o.representative)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sums = vec![0usize; coarse.len()];
        for (i, &j) in assignment.iter().enumerate() {
            sums[j] += fine.orbits[i].size;
        }
        for (j, o) in coarse.orbits.iter().enumerate() {
            if sums[j] != o.size {
                return Err(Error::NotSubgroup);
            }
        }
        // every element of an H-orbit must lie in the G-orbit of its representative
        for (i, o) in fine.orbits.iter().enumerate() {
            if o.elements().iter().any(|e| coarse.orbit_index(e) != Some(assignment[i])) {
                return Err(Error::NotSubgroup);
            }
        }
        Ok(FusionMap {
            fine,
            coarse,
            assignment,
        })
    }

    /// Fine orbit indices grouped by coarse orbit, in coarse order.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.coarse.len()];
        for (i, &j) in self.assignment.iter().enumerate() {
            parts[j].push(i);
        }
        parts
    }
}

/// Check that every generator of `h` lies in the group generated by `g`.
pub fn check_subgroup(gens_h: &GroupGens, gens_g: &GroupGens, order_cap: usize) -> Result<GroupClosure> {
    if gens_h.space != gens_g.space {
        return Err(Error::mismatch("subgroup acts on a different space"));
    }
    let closure = close_group(gens_g, order_cap)?;
    if gens_h.maps.iter().all(|m| closure.contains(m)) {
        Ok(closure)
    } else {
        Err(Error::NotSubgroup)
    }
}

/// Fusion of `H`-orbits into `G`-orbits on `k`-subspaces.
pub fn fuse(gens_h: &GroupGens, gens_g: &GroupGens, k: usize) -> Result<FusionMap> {
    check_subgroup(gens_h, gens_g, DEFAULT_ORDER_CAP)?;
    let (fine, coarse) = rayon::join(|| orbit_partition(gens_h, k), || orbit_partition(gens_g, k));
    FusionMap::from_partitions(fine?, coarse?)
}

fn is_order_exactly(g: &LinearMap, m: u64) -> bool {
    if !g.pow(m).is_identity() {
        return false;
    }
    prime_factors(m).into_iter().all(|p| !g.pow(m / p).is_identity())
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Order of a group element.
pub fn element_order(g: &LinearMap) -> u64 {
    let mut acc = g.clone();
    let mut k = 1;
    while !acc.is_identity() {
        acc = acc.compose(g);
        k += 1;
    }
    k
}

/// Generator of a cyclic subgroup of order `m`: the first element, in
/// closure order, whose order is exactly `m`.
pub fn cyclic_subgroup_of_order(closure: &GroupClosure, m: u64) -> Result<GroupGens> {
    if m == 0 || closure.order() as u64 % m != 0 {
        return Err(Error::NoElementOfOrder(m));
    }
    let space = closure.gens.space;
    if m == 1 {
        return Ok(GroupGens::trivial(space));
    }
    let found = closure
        .elements
        .iter()
        .position(|g| is_order_exactly(g, m))
        .ok_or(Error::NoElementOfOrder(m))?;
    Ok(GroupGens::from_maps(space, vec![closure.elements[found].clone()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfmat::gaussian_binomial;
    use crate::Count;

    fn example_gens() -> GroupGens {
        let rows = vec![vec![0, 1, 1, 0], vec![1, 1, 1, 1], vec![0, 0, 0, 1], vec![0, 0, 1, 0]];
        let g = FqMatrix::from_rows(FieldOrder::TWO, &rows).unwrap();
        GroupGens::new(FieldOrder::TWO, 4, vec![g]).unwrap()
    }

    fn gl22() -> GroupGens {
        let a = FqMatrix::from_rows(FieldOrder::TWO, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = FqMatrix::from_rows(FieldOrder::TWO, &[vec![0, 1], vec![1, 0]]).unwrap();
        GroupGens::new(FieldOrder::TWO, 2, vec![a, b]).unwrap()
    }

    #[test]
    fn singular_generator_rejected() {
        let s = FqMatrix::from_rows(FieldOrder::TWO, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(matches!(
            GroupGens::new(FieldOrder::TWO, 2, vec![s]),
            Err(Error::SingularGenerator { index: 0, .. })
        ));
    }

    #[test]
    fn closure_orders() {
        assert_eq!(close_group(&example_gens(), 100).unwrap().order(), 6);
        assert_eq!(close_group(&gl22(), 100).unwrap().order(), 6);
        let triv = GroupGens::trivial(Space::binary(3).unwrap());
        assert_eq!(close_group(&triv, 1).unwrap().order(), 1);
        assert!(matches!(close_group(&gl22(), 4), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn gl22_on_lines() {
        let line = Subspace::decode_tuple(&[1], 2, FieldOrder::TWO).unwrap();
        let o = orbit_of(&gl22(), &line);
        assert_eq!(o.size, 3);
        assert_eq!(o.representative.encoding(), &[1]);
    }

    #[test]
    fn trivial_orbit() {
        let space = Space::binary(4).unwrap();
        let k = Subspace::decode_tuple(&[3, 4], 4, FieldOrder::TWO).unwrap();
        let o = orbit_of(&GroupGens::trivial(space), &k);
        assert_eq!(o.size, 1);
        assert_eq!(o.elements(), &[k]);
    }

    #[test]
    fn example_partitions() {
        let g = example_gens();
        let closure = close_group(&g, 100).unwrap();
        let h = cyclic_subgroup_of_order(&closure, 3).unwrap();
        assert_eq!(close_group(&h, 100).unwrap().order(), 3);
        let h1 = orbit_partition(&h, 1).unwrap();
        let h2 = orbit_partition(&h, 2).unwrap();
        let g1 = orbit_partition(&g, 1).unwrap();
        let g2 = orbit_partition(&g, 2).unwrap();
        assert_eq!((h1.len(), h2.len(), g1.len(), g2.len()), (7, 13, 5, 9));
        let mut hs = h2.sizes();
        hs.sort_unstable();
        assert_eq!(hs, [1, 1, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3]);
        assert_eq!(g2.sizes().iter().sum::<u64>(), 35);
        let mut gs = g2.sizes();
        gs.sort_unstable();
        assert_eq!(gs, [1, 1, 3, 3, 3, 6, 6, 6, 6]);
    }

    #[test]
    fn fusion_part_sizes() {
        let g = example_gens();
        let closure = close_group(&g, 100).unwrap();
        let h = cyclic_subgroup_of_order(&closure, 3).unwrap();
        let f2 = fuse(&h, &g, 2).unwrap();
        let mut parts: Vec<usize> = f2.parts().iter().map(Vec::len).collect();
        parts.sort_unstable();
        assert_eq!(parts, [1, 1, 1, 1, 1, 2, 2, 2, 2]);
        let f1 = fuse(&h, &g, 1).unwrap();
        let mut parts: Vec<usize> = f1.parts().iter().map(Vec::len).collect();
        parts.sort_unstable();
        assert_eq!(parts, [1, 1, 1, 2, 2]);
        let same = fuse(&g, &g, 2).unwrap();
        assert_eq!(same.assignment, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn non_subgroup_rejected() {
        let g = example_gens();
        let other = FqMatrix::from_rows(
            FieldOrder::TWO,
            &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
        )
        .unwrap();
        let h = GroupGens::new(FieldOrder::TWO, 4, vec![other]).unwrap();
        assert!(matches!(fuse(&h, &g, 2), Err(Error::NotSubgroup)));
    }

    #[test]
    fn subgroups_of_order_15_group() {
        let rows: Vec<Vec<u32>> = [
            [0, 1, 0, 1, 0, 0, 0],
            [1, 0, 0, 0, 1, 1, 0],
            [1, 1, 0, 0, 1, 1, 1],
            [1, 1, 0, 0, 0, 0, 0],
            [1, 1, 1, 0, 0, 1, 1],
            [1, 0, 0, 1, 1, 1, 0],
            [0, 1, 0, 1, 0, 1, 1],
        ]
        .iter()
        .map(|r| r.to_vec())
        .collect();
        let g = GroupGens::new(FieldOrder::TWO, 7, vec![FqMatrix::from_rows(FieldOrder::TWO, &rows).unwrap()]).unwrap();
        let c = close_group(&g, 1000).unwrap();
        assert_eq!(c.order(), 15);
        // brute force: element orders in a cyclic group of order 15
        let mut counts = HashMap::new();
        for e in c.elements() {
            *counts.entry(element_order(e)).or_insert(0) += 1;
        }
        assert_eq!(counts.get(&3), Some(&2));
        assert_eq!(counts.get(&5), Some(&4));
        for m in [1, 3, 5, 15] {
            let h = cyclic_subgroup_of_order(&c, m).unwrap();
            assert_eq!(close_group(&h, 1000).unwrap().order() as u64, m);
        }
        assert!(cyclic_subgroup_of_order(&c, 7).is_err());
    }

    #[test]
    fn partition_sums_to_gaussian() {
        let g = gl22();
        let p = orbit_partition(&g, 1).unwrap();
        assert_eq!(Count::from(p.sizes().iter().sum::<u64>()), gaussian_binomial(2, 1, 2));
    }
}
