//! Shards: the cutting relation, identification of shards by their
//! join-irreducible elements, upper regions, geometric sign vectors, shard
//! statistics, and the shard digraph.

use std::collections::{BTreeSet, HashMap};

use crate::geom::{Arrangement, Cone};
use crate::num::{dot, vec_add, vec_neg, Scalar};
use crate::poset::BitSet;
use crate::weak::RegionLattice;

/// A shard, canonically identified by its join-irreducible element.
#[derive(Clone, Debug)]
pub struct Shard {
    /// Element id of the unique minimal upper region.
    pub ji: u32,
    pub hyperplane: u8,
    /// Covers (lower, upper) whose separating facet lies in this shard.
    pub covers: Vec<(u32, u32)>,
}

/// All shards of an arrangement, with cover and join-irreducible indexes.
#[derive(Clone, Debug)]
pub struct ShardSet {
    pub shards: Vec<Shard>,
    pub by_ji: HashMap<u32, usize>,
    pub by_cover: HashMap<(u32, u32), usize>,
}

impl ShardSet {
    /// Partition all covers by the join-irreducible of their shard.
    pub fn compute(lat: &RegionLattice) -> ShardSet {
        let mut groups: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
        for (q, r, h) in lat.covers() {
            let ji = lat.ji_of_cover(r, h, None);
            groups.entry(ji).or_default().push((q, r));
        }
        let mut jis: Vec<u32> = groups.keys().copied().collect();
        jis.sort_unstable();
        let mut shards = Vec::with_capacity(jis.len());
        let mut by_ji = HashMap::new();
        let mut by_cover = HashMap::new();
        for ji in jis {
            let mut covers = groups.remove(&ji).unwrap();
            covers.sort_unstable();
            let hyperplane = lat.down[ji as usize][0].1;
            debug_assert_eq!(lat.down[ji as usize].len(), 1, "shard id must be join-irreducible");
            let idx = shards.len();
            by_ji.insert(ji, idx);
            for &c in &covers {
                by_cover.insert(c, idx);
            }
            shards.push(Shard {
                ji,
                hyperplane,
                covers,
            });
        }
        ShardSet {
            shards,
            by_ji,
            by_cover,
        }
    }

    pub fn len(&self) -> usize {
        self.shards.len()
    }
    pub fn is_empty(&self) -> bool {
        self.shards.is_empty()
    }

    pub fn count_in_hyperplane(&self, h: u8) -> usize {
        self.shards.iter().filter(|s| s.hyperplane == h).count()
    }

    /// Upper regions of a shard; the minimum is the join-irreducible.
    pub fn upper_regions(&self, idx: usize) -> Vec<u32> {
        let mut v: Vec<u32> = self.shards[idx].covers.iter().map(|&(_, r)| r).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The antipodal shard −Σ; an involution on shards.
    pub fn antipodal(&self, lat: &RegionLattice, idx: usize) -> usize {
        let (q, r) = self.shards[idx].covers[0];
        self.by_cover[&(lat.antipode(r), lat.antipode(q))]
    }
}

/// H cuts H′: H is basic and H′ non-basic in their common rank-two full
/// subarrangement.
pub fn cuts(
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
    h: u8,
    hp: u8,
) -> bool {
    if h == hp {
        return false;
    }
    let mask = span(&[h, hp]);
    let basics = lat.basics_of_mask(mask);
    basics & (1 << h) != 0 && basics & (1 << hp) == 0
}

/// Minimal cardinality of a separating set containing h.
pub fn depth(lat: &RegionLattice, h: u8) -> usize {
    lat.sep
        .iter()
        .filter(|&&s| s & (1 << h) != 0)
        .map(|s| s.count_ones() as usize)
        .min()
        .expect("every hyperplane separates some region")
}

/// A codimension-2 face of the fan: the interval of regions containing it,
/// with its rank-two full subarrangement.
#[derive(Clone, Debug)]
pub struct Codim2Face {
    pub mask: u64,
    pub bottom: u32,
    pub top: u32,
    pub members: Vec<u32>,
}

/// Enumerate all codimension-2 faces as rank-two facial intervals.
pub fn codim2_faces(lat: &RegionLattice, span: &dyn Fn(&[u8]) -> u64) -> Vec<Codim2Face> {
    let m = lat.n_hyp as u8;
    let mut masks: BTreeSet<u64> = BTreeSet::new();
    for a in 0..m {
        for b in (a + 1)..m {
            masks.insert(span(&[a, b]));
        }
    }
    let mut out = Vec::new();
    for mask in masks {
        let size = 2 * mask.count_ones() as usize;
        let mut classes: HashMap<u64, Vec<u32>> = HashMap::new();
        for x in 0..lat.len() as u32 {
            classes
                .entry(lat.sep[x as usize] & !mask)
                .or_default()
                .push(x);
        }
        let mut faces: Vec<Codim2Face> = classes
            .into_iter()
            .filter(|(_, members)| members.len() == size)
            .map(|(_, mut members)| {
                members.sort_by_key(|&x| (lat.length(x), x));
                Codim2Face {
                    mask,
                    bottom: members[0],
                    top: *members.last().unwrap(),
                    members,
                }
            })
            .collect();
        faces.sort_by_key(|f| f.bottom);
        out.append(&mut faces);
    }
    out
}

/// The shard digraph: Σ → Σ′ when H(Σ) cuts H(Σ′) and the two shards share
/// a codimension-2 face.
#[derive(Clone, Debug)]
pub struct ShardDigraph {
    pub n: usize,
    pub arrows: BTreeSet<(usize, usize)>,
    pub acyclic: bool,
    /// Forward-reachable set per shard, including the shard itself.
    pub reach: Vec<BitSet>,
}

impl ShardDigraph {
    pub fn build(
        lat: &RegionLattice,
        shards: &ShardSet,
        span: &dyn Fn(&[u8]) -> u64,
    ) -> ShardDigraph {
        let mut arrows: BTreeSet<(usize, usize)> = BTreeSet::new();
        for face in codim2_faces(lat, span) {
            let basics = lat.basics_of_mask(face.mask);
            // cover shards within the face, split by basic / non-basic label
            let mut basic_shards: BTreeSet<usize> = BTreeSet::new();
            let mut other_shards: BTreeSet<usize> = BTreeSet::new();
            let member_set: BTreeSet<u32> = face.members.iter().copied().collect();
            for &x in &face.members {
                for &(y, h) in &lat.up[x as usize] {
                    if !member_set.contains(&y) {
                        continue;
                    }
                    let idx = shards.by_cover[&(x, y)];
                    if basics & (1 << h) != 0 {
                        basic_shards.insert(idx);
                    } else {
                        other_shards.insert(idx);
                    }
                }
            }
            for &a in &basic_shards {
                for &b in &other_shards {
                    arrows.insert((a, b));
                }
            }
        }
        let n = shards.len();
        // transitive closure and cycle detection over the arrow relation
        let mut reach: Vec<BitSet> = (0..n)
            .map(|i| BitSet::from_iter_bits(n, [i]))
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &arrows {
                let rb = reach[b].clone();
                let before = reach[a].count();
                reach[a].union_with(&rb);
                if reach[a].count() != before {
                    changed = true;
                }
            }
        }
        let acyclic = arrows.iter().all(|&(a, b)| !reach[b].contains(a));
        ShardDigraph {
            n,
            arrows,
            acyclic,
            reach,
        }
    }

    /// Order ideal generated by the given shards in the reachability order.
    pub fn forward_closure(&self, seeds: &[usize]) -> BitSet {
        let mut out = BitSet::new(self.n);
        for &s in seeds {
            out.union_with(&self.reach[s]);
        }
        out
    }
}

/// Geometric form of a shard: its hyperplane with the sign vector over the
/// cutting hyperplanes, derived from any of its covers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignVector {
    pub hyperplane: u8,
    /// (cutting hyperplane, side): +1 above the base side, -1 below.
    pub signs: Vec<(u8, i8)>,
}

/// Sign vector of the shard through a cover, from a relative-interior point
/// of the shared facet (the sum of the lower region's rays on the wall).
pub fn cover_sign_vector<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
    q: u32,
    _r: u32,
    h: u8,
) -> SignVector {
    let sep = BitSet::from_iter_bits(
        lat.n_hyp,
        (0..lat.n_hyp).filter(|&i| lat.sep[q as usize] & (1 << i) != 0),
    );
    let cone = arr.region_cone(&sep);
    let normal = &arr.normals[h as usize];
    let mut mid = vec![F::zero(); arr.dim];
    for ray in cone.rays.iter().filter(|ray| dot(normal, ray).is_zero()) {
        mid = vec_add(&mid, ray);
    }
    assert!(dot(normal, &mid).is_zero());
    let mut signs = Vec::new();
    for c in 0..lat.n_hyp as u8 {
        if c != h && cuts(lat, span, c, h) {
            let v = dot(&arr.normals[c as usize], &mid);
            let s = match v.signum() {
                std::cmp::Ordering::Greater => 1i8,
                std::cmp::Ordering::Less => -1i8,
                std::cmp::Ordering::Equal => panic!("cover midpoint on a cut locus"),
            };
            signs.push((c, s));
        }
    }
    SignVector {
        hyperplane: h,
        signs,
    }
}

/// Partition of all covers by geometric sign vector; must agree with the
/// join-irreducible partition.
pub fn geometric_cover_partition<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
) -> HashMap<SignVector, Vec<(u32, u32)>> {
    let mut out: HashMap<SignVector, Vec<(u32, u32)>> = HashMap::new();
    for (q, r, h) in lat.covers() {
        let sv = cover_sign_vector(arr, lat, span, q, r, h);
        out.entry(sv).or_default().push((q, r));
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

/// The shard as an exact cone: its hyperplane as an equality, one inequality
/// per cutting hyperplane with the shard's sign.
pub fn shard_cone<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
    shard: &Shard,
) -> Cone<F> {
    let (q, r) = shard.covers[0];
    let sv = cover_sign_vector(arr, lat, span, q, r, shard.hyperplane);
    let eqs = vec![arr.normals[shard.hyperplane as usize].clone()];
    let ineqs: Vec<Vec<F>> = sv
        .signs
        .iter()
        .map(|&(c, s)| {
            let n = &arr.normals[c as usize];
            if s > 0 {
                n.clone()
            } else {
                vec_neg(n)
            }
        })
        .collect();
    Cone::from_constraints(arr.dim, &eqs, &ineqs)
}
