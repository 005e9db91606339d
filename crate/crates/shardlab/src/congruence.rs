//! Lattice congruences of the poset of regions: generation by shard forcing
//! (with a generic lattice-theoretic fallback and oracle), classes and
//! projections, quotient lattices, quotient shard orders, quotient Möbius
//! numbers, and join-irreducible degrees.

use std::collections::{HashMap, HashSet};

use crate::poset::{BitSet, PosetView};
use crate::shards::{ShardDigraph, ShardSet};
use crate::weak::RegionLattice;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("class of element {0} is not an interval")]
    ClassNotInterval(u32),
    #[error("{0} projection is not order-preserving")]
    NotOrderPreserving(&'static str),
    #[error("removed shard set is not closed under forcing")]
    NotForcingClosed,
    #[error("generator {0} is not join-irreducible")]
    NotJoinIrreducible(u32),
}

/// A lattice congruence of the poset of regions, stored as the removed
/// shards together with the class projections.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub generators: Vec<u32>,
    /// Removed shard indices.
    pub removed: BitSet,
    /// π↓: bottom element of each class.
    pub class_bottom: Vec<u32>,
    /// π↑: top element of each class.
    pub class_top: Vec<u32>,
    /// Sorted distinct class bottoms.
    pub bottoms: Vec<u32>,
}

impl Congruence {
    /// Assemble a congruence from its removed-shard set, deriving classes
    /// from the contracted covers and checking the congruence axioms.
    pub fn from_removed(
        lat: &RegionLattice,
        shards: &ShardSet,
        removed: BitSet,
        generators: Vec<u32>,
    ) -> Result<Congruence, CongruenceError> {
        let n = lat.len();
        let mut uf = UnionFind::new(n);
        for (q, r, _) in lat.covers() {
            if removed.contains(shards.by_cover[&(q, r)]) {
                uf.union(q as usize, r as usize);
            }
        }
        let mut members: HashMap<usize, Vec<u32>> = HashMap::new();
        for x in 0..n as u32 {
            members.entry(uf.find(x as usize)).or_default().push(x);
        }
        let mut class_bottom = vec![0u32; n];
        let mut class_top = vec![0u32; n];
        for group in members.values() {
            let &bot = group.iter().min_by_key(|&&x| (lat.length(x), x)).unwrap();
            let &top = group.iter().max_by_key(|&&x| (lat.length(x), x)).unwrap();
            // the class must be exactly the interval [bot, top]
            let interval = lat.interval(bot, top);
            let gs: HashSet<u32> = group.iter().copied().collect();
            if interval.len() != group.len() || !interval.iter().all(|x| gs.contains(x)) {
                return Err(CongruenceError::ClassNotInterval(bot));
            }
            for &x in group {
                class_bottom[x as usize] = bot;
                class_top[x as usize] = top;
            }
        }
        // order preservation of both projections along covers
        for (q, r, _) in lat.covers() {
            if !lat.leq(class_bottom[q as usize], class_bottom[r as usize]) {
                return Err(CongruenceError::NotOrderPreserving("downward"));
            }
            if !lat.leq(class_top[q as usize], class_top[r as usize]) {
                return Err(CongruenceError::NotOrderPreserving("upward"));
            }
        }
        let mut bottoms: Vec<u32> = members
            .values()
            .map(|g| *g.iter().min_by_key(|&&x| (lat.length(x), x)).unwrap())
            .collect();
        bottoms.sort_unstable();
        Ok(Congruence {
            generators,
            removed,
            class_bottom,
            class_top,
            bottoms,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.bottoms.len()
    }

    pub fn is_contracted(&self, shards: &ShardSet, q: u32, r: u32) -> bool {
        self.removed.contains(shards.by_cover[&(q, r)])
    }

    /// Join-irreducible elements contracted by this congruence.
    pub fn contracted_jis(&self, shards: &ShardSet) -> Vec<u32> {
        self.removed.iter().map(|i| shards.shards[i].ji).collect()
    }

    /// The quotient lattice as the weak order restricted to class bottoms.
    pub fn quotient_poset(&self, lat: &RegionLattice) -> PosetView {
        PosetView::from_leq(self.bottoms.len(), |i, j| {
            lat.leq(self.bottoms[i], self.bottoms[j])
        })
    }
}

/// Generate the congruence contracting the given join-irreducibles, by
/// forward closure in the shard digraph. Falls back to the generic lattice
/// closure when the digraph is cyclic (possible for non-Coxeter inputs).
pub fn generate_congruence(
    lat: &RegionLattice,
    shards: &ShardSet,
    dg: &ShardDigraph,
    generators: &[u32],
) -> Result<Congruence, CongruenceError> {
    let mut seeds = Vec::with_capacity(generators.len());
    for &j in generators {
        let idx = shards
            .by_ji
            .get(&j)
            .copied()
            .ok_or(CongruenceError::NotJoinIrreducible(j))?;
        seeds.push(idx);
    }
    if !dg.acyclic {
        return Ok(generate_congruence_generic(lat, shards, generators));
    }
    let removed = dg.forward_closure(&seeds);
    let cong = Congruence::from_removed(lat, shards, removed, generators.to_vec())?;
    // forcing closure sanity: arrows out of removed shards stay removed
    for &(a, b) in &dg.arrows {
        if cong.removed.contains(a) && !cong.removed.contains(b) {
            return Err(CongruenceError::NotForcingClosed);
        }
    }
    Ok(cong)
}

/// Generic congruence closure: the finest equivalence containing the
/// generating contractions that is stable under meets and joins with
/// arbitrary elements. Independent of the shard digraph.
pub fn generate_congruence_generic(
    lat: &RegionLattice,
    shards: &ShardSet,
    generators: &[u32],
) -> Congruence {
    let n = lat.len();
    let mut uf = UnionFind::new(n);
    for &j in generators {
        let (jstar, _) = lat.down[j as usize][0];
        uf.union(j as usize, jstar as usize);
    }
    loop {
        let mut changed = false;
        let mut reps: HashMap<usize, u32> = HashMap::new();
        for x in 0..n as u32 {
            reps.entry(uf.find(x as usize)).or_insert(x);
        }
        for x in 0..n as u32 {
            let r = reps[&uf.find(x as usize)];
            if r == x {
                continue;
            }
            for z in 0..n as u32 {
                let a = lat.meet(x, z);
                let b = lat.meet(r, z);
                if uf.find(a as usize) != uf.find(b as usize) {
                    uf.union(a as usize, b as usize);
                    changed = true;
                }
                let a = lat.join(x, z);
                let b = lat.join(r, z);
                if uf.find(a as usize) != uf.find(b as usize) {
                    uf.union(a as usize, b as usize);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // removed shards = shards whose covers got contracted; all covers of a
    // shard are contracted together, which we assert
    let mut removed = BitSet::new(shards.len());
    for (i, sh) in shards.shards.iter().enumerate() {
        let states: HashSet<bool> = sh
            .covers
            .iter()
            .map(|&(q, r)| uf.find(q as usize) == uf.find(r as usize))
            .collect();
        assert_eq!(states.len(), 1, "shard covers contracted inconsistently");
        if states.contains(&true) {
            removed.insert(i);
        }
    }
    Congruence::from_removed(lat, shards, removed, generators.to_vec())
        .expect("generic closure yields a congruence")
}

/// The congruence projecting onto the standard subarrangement spanned by the
/// basic hyperplanes in `k`: removes exactly the shards lying in hyperplanes
/// outside A_K.
pub fn parabolic_congruence(
    lat: &RegionLattice,
    shards: &ShardSet,
    span: &dyn Fn(&[u8]) -> u64,
    k: &[u8],
) -> Result<Congruence, CongruenceError> {
    let mask = if k.is_empty() { 0 } else { span(k) };
    let mut removed = BitSet::new(shards.len());
    for (i, sh) in shards.shards.iter().enumerate() {
        if mask & (1u64 << sh.hyperplane) == 0 {
            removed.insert(i);
        }
    }
    Congruence::from_removed(lat, shards, removed, Vec::new())
}

/// The shard intersection order of a quotient: the restriction of (W, ⪯) to
/// class bottoms, built from the quotient label sets.
pub struct QuotientShardOrder {
    /// Element id per quotient index.
    pub bottoms: Vec<u32>,
    pub index_of: HashMap<u32, usize>,
    /// λ_Θ per bottom: shards of covers (p ⋖ p') inside [π↓(L(z)), z] whose
    /// upper element is a bottom.
    pub labels: Vec<BitSet>,
    pub rank: Vec<usize>,
    pub poset: PosetView,
}

pub fn quotient_shard_order(
    lat: &RegionLattice,
    shards: &ShardSet,
    cong: &Congruence,
) -> QuotientShardOrder {
    let bottoms = cong.bottoms.clone();
    let index_of: HashMap<u32, usize> = bottoms
        .iter()
        .enumerate()
        .map(|(i, &b)| (b, i))
        .collect();
    let is_bottom = |x: u32| cong.class_bottom[x as usize] == x;
    let mut labels = Vec::with_capacity(bottoms.len());
    for &z in &bottoms {
        let lq = cong.class_bottom[lat.lower_bound_l(z) as usize];
        let members = lat.interval(lq, z);
        let member_set: HashSet<u32> = members.iter().copied().collect();
        let mut lam = BitSet::new(shards.len());
        for &p in &members {
            for &(p2, _) in &lat.up[p as usize] {
                if member_set.contains(&p2) && is_bottom(p2) {
                    lam.insert(shards.by_cover[&(p, p2)]);
                }
            }
        }
        labels.push(lam);
    }
    let poset = PosetView::from_leq(bottoms.len(), |i, j| labels[i].is_subset(&labels[j]));
    let rank = bottoms.iter().map(|&z| lat.down[z as usize].len()).collect();
    QuotientShardOrder {
        bottoms,
        index_of,
        labels,
        rank,
        poset,
    }
}

/// Möbius number of the quotient shard order by inclusion-exclusion over the
/// unremoved basic hyperplanes.
pub fn quotient_mobius_incl_excl(
    lat: &RegionLattice,
    shards: &ShardSet,
    span: &dyn Fn(&[u8]) -> u64,
    cong: &Congruence,
) -> i64 {
    let unremoved_basics: Vec<u8> = lat
        .basic
        .iter()
        .copied()
        .filter(|&b| {
            let idx = (0..shards.len())
                .find(|&i| shards.shards[i].hyperplane == b)
                .expect("basic hyperplane carries a shard");
            !cong.removed.contains(idx)
        })
        .collect();
    let mut total = 0i64;
    for mask in 0u64..(1 << unremoved_basics.len()) {
        let k: Vec<u8> = unremoved_basics
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &b)| b)
            .collect();
        let closure = if k.is_empty() { 0 } else { span(&k) };
        let image: HashSet<u32> = (0..lat.len() as u32)
            .filter(|&x| lat.sep[x as usize] & !closure == 0)
            .map(|x| cong.class_bottom[x as usize])
            .collect();
        let sign = if k.len().is_multiple_of(2) { 1 } else { -1 };
        total += sign * image.len() as i64;
    }
    total
}

/// Degree of a join-irreducible: the smallest size of a set K of basic
/// hyperplanes whose standard subarrangement contains its separating set.
pub fn ji_degree(lat: &RegionLattice, span: &dyn Fn(&[u8]) -> u64, j: u32) -> usize {
    let sep = lat.sep[j as usize];
    let basics = &lat.basic;
    for size in 0..=basics.len() {
        for subset in subsets_of(basics, size) {
            let closure = if subset.is_empty() { 0 } else { span(&subset) };
            if sep & !closure == 0 {
                return size;
            }
        }
    }
    unreachable!("the full basic set always works")
}

fn subsets_of(items: &[u8], size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[u8], start: usize, size: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, size, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, size, &mut cur, &mut out);
    out
}

/// Whether the restriction of (W, ⪯) to the quotient is a sublattice (meets
/// agree with the full order; joins agree automatically).
pub fn quotient_is_sublattice(
    qso: &QuotientShardOrder,
    full_poset: &PosetView,
) -> bool {
    let k = qso.bottoms.len();
    for i in 0..k {
        for j in i..k {
            let Some(m) = qso.poset.meet(i, j) else {
                return false;
            };
            let full = full_poset.meet(qso.bottoms[i] as usize, qso.bottoms[j] as usize);
            if full != Some(qso.bottoms[m] as usize) {
                return false;
            }
        }
    }
    true
}

/// The congruence has degree ≤ d when its removed set is generated by the
/// removed shards of join-irreducible degree ≤ d.
pub fn congruence_degree_at_most(
    lat: &RegionLattice,
    shards: &ShardSet,
    dg: &ShardDigraph,
    span: &dyn Fn(&[u8]) -> u64,
    cong: &Congruence,
    d: usize,
) -> bool {
    let low: Vec<usize> = cong
        .removed
        .iter()
        .filter(|&i| ji_degree(lat, span, shards.shards[i].ji) <= d)
        .collect();
    dg.forward_closure(&low) == cong.removed
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Check that the set of join-irreducibles contracted by the shard-digraph
/// closure matches the generic lattice closure, for every single-generator
/// congruence.
pub fn closures_agree_on_all_single_generators(
    lat: &RegionLattice,
    shards: &ShardSet,
    dg: &ShardDigraph,
) -> bool {
    lat.join_irreducibles().iter().all(|ji| {
        let a = generate_congruence(lat, shards, dg, &[ji.element]).unwrap();
        let b = generate_congruence_generic(lat, shards, &[ji.element]);
        a.removed == b.removed && a.class_bottom == b.class_bottom
    })
}
