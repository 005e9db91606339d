//! The poset of regions (weak order) as a lattice over separating-set
//! bitsets: covers, joins and meets, join-irreducibles, canonical join
//! representations, facial intervals.

use std::collections::HashMap;

use crate::poset::PosetView;

/// The lattice of regions of a central simplicial arrangement with a chosen
/// base region, elements identified by their separating sets (≤ 64
/// hyperplanes). For a Coxeter group this is the right weak order with
/// separating sets the inversion sets.
#[derive(Clone, Debug)]
pub struct RegionLattice {
    pub n_hyp: usize,
    /// Separating set per element id; ids sorted by (cardinality, bits).
    pub sep: Vec<u64>,
    pub id_of: HashMap<u64, u32>,
    /// Upper covers (element, separating hyperplane).
    pub up: Vec<Vec<(u32, u8)>>,
    /// Lower covers (element, separating hyperplane).
    pub down: Vec<Vec<(u32, u8)>>,
    /// Facet hyperplanes of the base region (labels of the atoms).
    pub basic: Vec<u8>,
}

/// A join-irreducible element: covers exactly one element.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct JoinIrreducible {
    pub element: u32,
    pub j_star: u32,
    pub hyperplane: u8,
}

/// The interval of regions containing a face of the fan: all elements whose
/// separating set agrees with the top's outside the face's subarrangement.
#[derive(Clone, Debug)]
pub struct FacialInterval {
    pub bottom: u32,
    pub top: u32,
    /// Hyperplanes containing the face.
    pub mask: u64,
}

impl RegionLattice {
    pub fn from_seps(n_hyp: usize, mut seps: Vec<u64>) -> Self {
        assert!(n_hyp <= 64);
        seps.sort_by_key(|&s| (s.count_ones(), s));
        seps.dedup();
        let id_of: HashMap<u64, u32> = seps
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i as u32))
            .collect();
        let mut up = vec![Vec::new(); seps.len()];
        let mut down = vec![Vec::new(); seps.len()];
        for (i, &s) in seps.iter().enumerate() {
            for h in 0..n_hyp as u8 {
                if s & (1 << h) == 0 {
                    if let Some(&j) = id_of.get(&(s | (1 << h))) {
                        up[i].push((j, h));
                        down[j as usize].push((i as u32, h));
                    }
                }
            }
        }
        let basic: Vec<u8> = up[0].iter().map(|&(_, h)| h).collect();
        RegionLattice {
            n_hyp,
            sep: seps,
            id_of,
            up,
            down,
            basic,
        }
    }

    pub fn len(&self) -> usize {
        self.sep.len()
    }
    pub fn is_empty(&self) -> bool {
        self.sep.is_empty()
    }
    pub fn bottom(&self) -> u32 {
        0
    }
    pub fn top(&self) -> u32 {
        (self.len() - 1) as u32
    }
    pub fn full_mask(&self) -> u64 {
        if self.n_hyp == 64 {
            u64::MAX
        } else {
            (1u64 << self.n_hyp) - 1
        }
    }
    pub fn length(&self, x: u32) -> usize {
        self.sep[x as usize].count_ones() as usize
    }
    pub fn leq(&self, x: u32, y: u32) -> bool {
        self.sep[x as usize] & !self.sep[y as usize] == 0
    }
    pub fn lt(&self, x: u32, y: u32) -> bool {
        x != y && self.leq(x, y)
    }

    /// The antipodal region −R; `x ↦ antipode(x)` is an anti-automorphism.
    pub fn antipode(&self, x: u32) -> u32 {
        self.id_of[&(self.full_mask() ^ self.sep[x as usize])]
    }

    /// Greatest lower bound: greedy ascent inside the down-set intersection.
    pub fn meet(&self, x: u32, y: u32) -> u32 {
        let target = self.sep[x as usize] & self.sep[y as usize];
        let mut cur = self.bottom();
        'ascend: loop {
            for &(e, h) in &self.up[cur as usize] {
                if target & (1 << h) != 0 && self.sep[e as usize] & !target == 0 {
                    cur = e;
                    continue 'ascend;
                }
            }
            return cur;
        }
    }

    pub fn join(&self, x: u32, y: u32) -> u32 {
        self.antipode(self.meet(self.antipode(x), self.antipode(y)))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = u32>) -> u32 {
        let mut it = xs.into_iter();
        let Some(first) = it.next() else {
            return self.top();
        };
        it.fold(first, |a, b| self.meet(a, b))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = u32>) -> u32 {
        let mut it = xs.into_iter();
        let Some(first) = it.next() else {
            return self.bottom();
        };
        it.fold(first, |a, b| self.join(a, b))
    }

    pub fn join_irreducibles(&self) -> Vec<JoinIrreducible> {
        (0..self.len() as u32)
            .filter(|&x| self.down[x as usize].len() == 1)
            .map(|x| {
                let (q, h) = self.down[x as usize][0];
                JoinIrreducible {
                    element: x,
                    j_star: q,
                    hyperplane: h,
                }
            })
            .collect()
    }

    /// The join-irreducible of the shard through the cover `q ⋖ r`: the
    /// minimal element ≤ r whose separating set contains the cover's
    /// hyperplane. Restricted to a world interval `[lo, r]` when `lo` is
    /// given.
    pub fn ji_of_cover(&self, r: u32, hyp: u8, lo: Option<u32>) -> u32 {
        let floor = lo.map_or(0u64, |l| self.sep[l as usize]);
        debug_assert!(self.sep[r as usize] & (1 << hyp) != 0);
        let mut cur = r;
        'descend: loop {
            for &(q, h) in &self.down[cur as usize] {
                if h != hyp && self.sep[q as usize] & floor == floor {
                    cur = q;
                    continue 'descend;
                }
            }
            return cur;
        }
    }

    /// Canonical join representation: the join-irreducibles of the lower
    /// shards, one per lower cover.
    pub fn canonical_join_rep(&self, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.down[x as usize]
            .iter()
            .map(|&(_, h)| self.ji_of_cover(x, h, None))
            .collect();
        v.sort_unstable();
        v
    }

    /// Meet of the elements covered by `x` (the bottom maps to itself).
    pub fn lower_bound_l(&self, x: u32) -> u32 {
        if self.down[x as usize].is_empty() {
            return x;
        }
        self.meet_all(self.down[x as usize].iter().map(|&(q, _)| q))
    }

    /// Elements of the interval [lo, hi].
    pub fn interval(&self, lo: u32, hi: u32) -> Vec<u32> {
        let lo_s = self.sep[lo as usize];
        let hi_s = self.sep[hi as usize];
        (0..self.len() as u32)
            .filter(|&z| {
                let s = self.sep[z as usize];
                s & lo_s == lo_s && s & !hi_s == 0
            })
            .collect()
    }

    /// The interval of all regions containing the face of `top` determined
    /// by the full subarrangement `mask` (hyperplanes containing the face).
    pub fn facial_interval_by_mask(&self, top: u32, mask: u64) -> FacialInterval {
        let outside = self.sep[top as usize] & !mask;
        let bottom = self.id_of[&outside];
        FacialInterval {
            bottom,
            top,
            mask,
        }
    }

    /// Members of a facial interval.
    pub fn facial_members(&self, f: &FacialInterval) -> Vec<u32> {
        let outside = self.sep[f.top as usize] & !f.mask;
        (0..self.len() as u32)
            .filter(|&z| self.sep[z as usize] & !f.mask == outside)
            .collect()
    }

    pub fn to_poset(&self) -> PosetView {
        PosetView::from_leq(self.len(), |i, j| {
            self.sep[i] & !self.sep[j] == 0
        })
    }

    /// All covers as (lower, upper, hyperplane).
    pub fn covers(&self) -> Vec<(u32, u32, u8)> {
        let mut out = Vec::new();
        for (i, ups) in self.up.iter().enumerate() {
            for &(j, h) in ups {
                out.push((i as u32, j, h));
            }
        }
        out
    }

    /// Basic hyperplanes of the full subarrangement `mask`, relative to the
    /// base region: the hyperplanes h ∈ mask that occur alone as some
    /// region's separating set within the subarrangement.
    pub fn basics_of_mask(&self, mask: u64) -> u64 {
        let mut singles = 0u64;
        let mut seen = std::collections::HashSet::new();
        for &s in &self.sep {
            let t = s & mask;
            if t.count_ones() == 1 && seen.insert(t) {
                singles |= t;
            }
        }
        singles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Arrangement;
    use crate::num::{vec_from_i64, Rat};

    fn hexagon() -> RegionLattice {
        // three lines in the plane: the weak order of A2 combinatorially
        let normals: Vec<Vec<Rat>> = vec![
            vec_from_i64(&[0, 1]),
            vec_from_i64(&[1, 1]),
            vec_from_i64(&[2, 1]),
        ];
        let arr = Arrangement::new(normals, vec_from_i64(&[-1, 31])).unwrap();
        let seps: Vec<u64> = arr
            .regions()
            .unwrap()
            .iter()
            .map(|r| r.sep.iter().fold(0u64, |m, i| m | (1 << i)))
            .collect();
        RegionLattice::from_seps(3, seps)
    }

    #[test]
    fn hexagon_lattice_ops() {
        let l = hexagon();
        assert_eq!(l.len(), 6);
        assert_eq!(l.basic, vec![0, 2]);
        let atoms: Vec<u32> = l.up[0].iter().map(|&(e, _)| e).collect();
        assert_eq!(l.meet(atoms[0], atoms[1]), l.bottom());
        assert_eq!(l.join(atoms[0], atoms[1]), l.top());
        assert_eq!(l.join(l.bottom(), atoms[1]), atoms[1]);
        // four join-irreducibles: everything except bottom and top
        assert_eq!(l.join_irreducibles().len(), 4);
        // lattice axioms against the generic poset machinery
        let p = l.to_poset();
        assert!(p.is_lattice());
        for x in 0..l.len() as u32 {
            for y in 0..l.len() as u32 {
                assert_eq!(p.join(x as usize, y as usize), Some(l.join(x, y) as usize));
                assert_eq!(p.meet(x as usize, y as usize), Some(l.meet(x, y) as usize));
            }
        }
    }

    #[test]
    fn hexagon_can_join_rep() {
        let l = hexagon();
        // the middle hyperplane's two shards have the two length-2 elements
        // as their join-irreducibles
        let top = l.top();
        let rep = l.canonical_join_rep(top);
        assert_eq!(rep.len(), 2);
        for &j in &rep {
            assert_eq!(l.down[j as usize].len(), 1);
        }
        assert_eq!(l.join_all(rep.iter().copied()), top);
        // canonical join rep of a join-irreducible is itself
        for ji in l.join_irreducibles() {
            assert_eq!(l.canonical_join_rep(ji.element), vec![ji.element]);
        }
        assert_eq!(l.canonical_join_rep(l.bottom()), Vec::<u32>::new());
    }

    #[test]
    fn antipode_reverses() {
        let l = hexagon();
        for x in 0..l.len() as u32 {
            for y in 0..l.len() as u32 {
                assert_eq!(l.leq(x, y), l.leq(l.antipode(y), l.antipode(x)));
            }
        }
    }

    #[test]
    fn facial_intervals() {
        let l = hexagon();
        let top = l.top();
        // whole-arrangement mask: the origin's interval is everything
        let f = l.facial_interval_by_mask(top, l.full_mask());
        assert_eq!(f.bottom, l.bottom());
        assert_eq!(l.facial_members(&f).len(), 6);
        // single-hyperplane mask at the top: an edge of the hexagon
        let f1 = l.facial_interval_by_mask(top, 1 << 0);
        assert_eq!(l.facial_members(&f1).len(), 2);
    }

    #[test]
    fn basics_of_masks() {
        let l = hexagon();
        assert_eq!(l.basics_of_mask(l.full_mask()), 0b101);
        assert_eq!(l.basics_of_mask(0b010), 0b010);
    }
}
