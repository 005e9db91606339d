//! Fans as face posets, pulling triangulations of the dual zonotope/ball,
//! the recursive bijection δ between chains of the shard intersection order
//! and simplices of the pulling triangulation, shelling interval partitions,
//! and the subcomplex probe.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::congruence::Congruence;
use crate::coxeter::CoxGroup;
use crate::geom::{Arrangement, Cone};
use crate::num::{vec_neg, Scalar};
use crate::poset::PosetView;
use crate::shards::ShardSet;
use crate::weak::RegionLattice;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("face {0} has no unique pulling vertex")]
    NoUniqueMinimalVertex(usize),
    #[error("face of the quotient fan is not an interval of maximal cones")]
    FaceNotInterval,
}

/// A face of the Coxeter fan, as a parabolic coset interval.
#[derive(Clone, Debug)]
pub struct FanFace {
    /// Minimal coset representative.
    pub rep: u32,
    /// Generator subset J (bitmask); the face has codimension |J|.
    pub gens: u64,
    /// Regions containing the face: the coset, as sorted element ids.
    pub members: Vec<u32>,
}

/// All faces of the Coxeter fan, combinatorially: cosets wW_J for J ⊆ S.
pub fn coxeter_fan_faces(group: &CoxGroup) -> Vec<FanFace> {
    let n = group.n_gens;
    let lat = &group.lattice;
    let mut out = Vec::new();
    for gens in 0u64..(1 << n) {
        let mut seen: HashSet<u32> = HashSet::new();
        for x in 0..lat.len() as u32 {
            if seen.contains(&x) {
                continue;
            }
            // descend to the minimal coset representative
            let mut rep = x;
            'outer: loop {
                for s in 0..n as u8 {
                    if gens & (1 << s) != 0 {
                        let xs = group.mult(rep, group.generator(s));
                        if lat.length(xs) < lat.length(rep) {
                            rep = xs;
                            continue 'outer;
                        }
                    }
                }
                break;
            }
            // coset members by closure under J-multiplication
            let mut members: BTreeSet<u32> = BTreeSet::from([rep]);
            let mut stack = vec![rep];
            while let Some(y) = stack.pop() {
                for s in 0..n as u8 {
                    if gens & (1 << s) != 0 {
                        let ys = group.mult(y, group.generator(s));
                        if members.insert(ys) {
                            stack.push(ys);
                        }
                    }
                }
            }
            for &m in &members {
                seen.insert(m);
            }
            out.push(FanFace {
                rep,
                gens,
                members: members.into_iter().collect(),
            });
        }
    }
    out.sort_by_key(|f| (f.gens.count_ones(), f.gens, f.rep));
    out
}

/// Fan face containment: F ⊆ G iff G's coset is contained in F's... the
/// smaller face lies in more regions, so F ⊆ G ⟺ members(F) ⊇ members(G).
pub fn fan_face_contains(smaller: &FanFace, bigger: &FanFace) -> bool {
    // smaller ⊆ bigger as cones ⟺ every region containing bigger contains
    // smaller; for coset faces: gens(bigger) ⊆ gens(smaller) and the coset
    // of bigger is inside the coset of smaller
    bigger.gens & !smaller.gens == 0
        && bigger.members.iter().all(|m| smaller.members.binary_search(m).is_ok())
}

/// A polytopal complex ready for pulling: faces with vertex sets and facet
/// lists, plus a single top cell.
pub struct PolytopalComplex {
    pub faces: Vec<ComplexFace>,
    pub top: usize,
}

#[derive(Clone, Debug)]
pub struct ComplexFace {
    pub verts: Vec<u32>,
    pub dim: usize,
    pub facets: Vec<usize>,
}

/// The boundary-with-interior complex of the zonotope dual to the Coxeter
/// fan: one face per coset, vertices are regions, dimension |J|.
pub fn zonotope_complex(group: &CoxGroup) -> PolytopalComplex {
    let faces = coxeter_fan_faces(group);
    complex_from_dual_faces(
        faces
            .iter()
            .map(|f| (f.members.clone(), f.gens.count_ones() as usize))
            .collect(),
    )
}

/// Assemble a complex from dual faces given as (vertex set, dimension),
/// computing facet lists by containment.
pub fn complex_from_dual_faces(data: Vec<(Vec<u32>, usize)>) -> PolytopalComplex {
    let n = data.len();
    let mut faces: Vec<ComplexFace> = data
        .into_iter()
        .map(|(mut verts, dim)| {
            verts.sort_unstable();
            ComplexFace {
                verts,
                dim,
                facets: Vec::new(),
            }
        })
        .collect();
    let contains = |big: &ComplexFace, small: &ComplexFace| -> bool {
        small
            .verts
            .iter()
            .all(|v| big.verts.binary_search(v).is_ok())
    };
    for i in 0..n {
        for j in 0..n {
            if faces[j].dim + 1 == faces[i].dim && contains(&faces[i], &faces[j]) {
                faces[i].facets.push(j);
            }
        }
    }
    let top = (0..n)
        .max_by_key(|&i| faces[i].dim)
        .expect("nonempty complex");
    PolytopalComplex { faces, top }
}

/// Recursive pulling triangulation. `first` selects the pulling vertex of a
/// face (the first vertex in the total/partial order); it must be unique.
/// Returns the maximal simplices of the triangulated top cell.
pub fn pulling_triangulation(
    cx: &PolytopalComplex,
    first: &dyn Fn(&[u32]) -> Option<u32>,
) -> Result<Vec<Vec<u32>>, TriangulationError> {
    let mut memo: Vec<Option<Vec<Vec<u32>>>> = vec![None; cx.faces.len()];
    fn pull(
        cx: &PolytopalComplex,
        first: &dyn Fn(&[u32]) -> Option<u32>,
        memo: &mut Vec<Option<Vec<Vec<u32>>>>,
        f: usize,
    ) -> Result<Vec<Vec<u32>>, TriangulationError> {
        if let Some(v) = &memo[f] {
            return Ok(v.clone());
        }
        let face = &cx.faces[f];
        let out = if face.dim == 0 {
            vec![face.verts.clone()]
        } else {
            let v0 = first(&face.verts).ok_or(TriangulationError::NoUniqueMinimalVertex(f))?;
            let mut sims = Vec::new();
            for &g in &face.facets {
                if cx.faces[g].verts.binary_search(&v0).is_ok() {
                    continue;
                }
                for mut s in pull(cx, first, memo, g)? {
                    s.push(v0);
                    s.sort_unstable();
                    sims.push(s);
                }
            }
            sims
        };
        memo[f] = Some(out.clone());
        Ok(out)
    }
    pull(cx, first, &mut memo, cx.top)
}

/// All simplices (closure under subsets) of a set of maximal simplices.
pub fn simplex_closure(maximal: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for m in maximal {
        let k = m.len();
        for mask in 1u64..(1 << k) {
            let s: Vec<u32> = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| m[i])
                .collect();
            out.insert(s);
        }
    }
    out
}

/// f-vector by cardinality, f[0] = 1 for the empty simplex.
pub fn f_vector(simplices: &BTreeSet<Vec<u32>>) -> Vec<u64> {
    let top = simplices.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut out = vec![0u64; top + 1];
    out[0] = 1;
    for s in simplices {
        out[s.len()] += 1;
    }
    out
}

/// All chains of a poset (as sorted node lists, increasing in the order),
/// including the empty chain.
pub fn enumerate_chains(p: &PosetView) -> Vec<Vec<usize>> {
    let order = p.linear_extension();
    let mut chains: Vec<Vec<usize>> = vec![vec![]];
    fn rec(
        p: &PosetView,
        order: &[usize],
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for idx in start..order.len() {
            let v = order[idx];
            if cur.last().is_none_or(|&l| p.lt(l, v)) {
                cur.push(v);
                out.push(cur.clone());
                rec(p, order, idx + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut cur = Vec::new();
    rec(p, &order, 0, &mut cur, &mut chains);
    chains
}

/// The recursive chain → simplex map δ and its inverse γ, working inside
/// weak-order interval "worlds" relative to a congruence (the identity
/// congruence gives the plain permutohedron case).
pub struct DeltaMap<'a> {
    pub lat: &'a RegionLattice,
    pub shards: &'a ShardSet,
    pub cong: &'a Congruence,
}

impl<'a> DeltaMap<'a> {
    pub fn new(lat: &'a RegionLattice, shards: &'a ShardSet, cong: &'a Congruence) -> Self {
        DeltaMap { lat, shards, cong }
    }

    fn is_bottom(&self, x: u32) -> bool {
        self.cong.class_bottom[x as usize] == x
    }

    /// π↓ within the world: descend along contracted covers staying ≥ lo.
    fn pi_down(&self, mut x: u32, lo: u32) -> u32 {
        'outer: loop {
            for &(p, _) in &self.lat.down[x as usize] {
                if self.lat.leq(lo, p) && self.cong.is_contracted(self.shards, p, x) {
                    x = p;
                    continue 'outer;
                }
            }
            return x;
        }
    }

    /// World lower covers of z: ambient covers with lower element ≥ lo.
    fn world_lower_covers(&self, z: u32, lo: u32) -> Vec<(u32, u8)> {
        self.lat.down[z as usize]
            .iter()
            .copied()
            .filter(|&(p, _)| self.lat.leq(lo, p))
            .collect()
    }

    /// The bottom of the sub-world below z: π↓ of the meet of the world
    /// lower covers.
    fn world_l(&self, z: u32, lo: u32) -> u32 {
        let covers = self.world_lower_covers(z, lo);
        if covers.is_empty() {
            return z;
        }
        let m = self.lat.meet_all(covers.iter().map(|&(p, _)| p));
        self.pi_down(m, lo)
    }

    /// λ of z within the world [lo, hi]: world-level join-irreducibles of
    /// covers (p ⋖ p') inside [world_l(z), z] whose upper element is a class
    /// bottom. Join-irreducibles are taken relative to lo.
    fn world_label(&self, z: u32, lo: u32) -> BTreeSet<u32> {
        let lq = self.world_l(z, lo);
        let members = self.lat.interval(lq, z);
        let member_set: HashSet<u32> = members.iter().copied().collect();
        let mut lam = BTreeSet::new();
        for &p in &members {
            for &(p2, h) in &self.lat.up[p as usize] {
                if member_set.contains(&p2) && self.is_bottom(p2) {
                    lam.insert(self.lat.ji_of_cover(p2, h, Some(lo)));
                }
            }
        }
        lam
    }

    /// Map a world element x ⪯ R into the sub-world [world_l(R), R]: each
    /// world shard of λ(x) germs to a sub-world shard; x maps to the join of
    /// the sub-world join-irreducibles.
    fn descend(&self, x: u32, r: u32, lo: u32) -> u32 {
        let lo2 = self.world_l(r, lo);
        if x == r {
            return r;
        }
        let lam = self.world_label(x, lo);
        if lam.is_empty() {
            return lo2;
        }
        // covers inside the sub-world, grouped by their world-level ji
        let members = self.lat.interval(lo2, r);
        let member_set: HashSet<u32> = members.iter().copied().collect();
        let mut germ: HashMap<u32, u32> = HashMap::new();
        for &p in &members {
            for &(p2, h) in &self.lat.up[p as usize] {
                if member_set.contains(&p2) && self.is_bottom(p2) {
                    let world_ji = self.lat.ji_of_cover(p2, h, Some(lo));
                    germ
                        .entry(world_ji)
                        .or_insert_with(|| self.lat.ji_of_cover(p2, h, Some(lo2)));
                }
            }
        }
        let images: Vec<u32> = lam
            .iter()
            .map(|j| *germ.get(j).expect("shard of λ(x) meets the sub-world"))
            .collect();
        self.lat.join_all(images)
    }

    /// Inverse of `descend`: lift y from the sub-world [world_l(R), R] back
    /// to the world [lo, ·].
    fn ascend(&self, y: u32, r: u32, lo: u32) -> u32 {
        let lo2 = self.world_l(r, lo);
        if y == r {
            return r;
        }
        let lam2 = self.world_label(y, lo2);
        if lam2.is_empty() {
            // bottom of the sub-world lifts to λ = ∅ in the world... the
            // preimage is the element with empty label relative to lo: lo
            // itself only when y = lo2; in general join of nothing = lo.
            if y == lo2 {
                // preimage has λ_w = subset mapping to ∅: the world bottom
                return lo;
            }
        }
        let mut lifted: Vec<u32> = Vec::new();
        for j2 in lam2 {
            // j2 is a sub-world join-irreducible: its unique sub-world cover
            let &(q, h) = self
                .lat
                .down[j2 as usize]
                .iter()
                .find(|&&(q, _)| self.lat.leq(lo2, q))
                .expect("sub-world join-irreducible has a cover above lo2");
            let _ = q;
            lifted.push(self.lat.ji_of_cover(j2, h, Some(lo)));
        }
        self.lat.join_all(lifted)
    }

    /// The quotient shard order of the sub-world below z (class bottoms of
    /// the interval [L(z), z] with in-world labels). By the lower-interval
    /// theorem this is isomorphic to the lower interval at z.
    pub fn world_poset(&self, z: u32) -> PosetView {
        let lo = self.world_l(z, self.lat.bottom());
        let members: Vec<u32> = self
            .lat
            .interval(lo, z)
            .into_iter()
            .filter(|&x| self.is_bottom(x))
            .collect();
        let labels: Vec<BTreeSet<u32>> = members
            .iter()
            .map(|&x| self.world_label(x, lo))
            .collect();
        PosetView::from_leq(members.len(), |i, j| labels[i].is_subset(&labels[j]))
    }

    /// δ: a chain in the (quotient) shard intersection order, listed
    /// increasingly, to a simplex of the pulling triangulation, as a set of
    /// class-bottom vertices.
    pub fn delta(&self, chain: &[u32]) -> Vec<u32> {
        let top = self.pi_down(self.lat.top(), self.lat.bottom());
        let mut out = Vec::new();
        self.delta_in(self.lat.bottom(), top, chain.to_vec(), &mut out);
        out.sort_unstable();
        out
    }

    fn delta_in(&self, lo: u32, hi: u32, mut chain: Vec<u32>, out: &mut Vec<u32>) {
        if chain.is_empty() {
            return;
        }
        if *chain.last().unwrap() == hi {
            out.push(hi);
            chain.pop();
        }
        if chain.is_empty() {
            return;
        }
        let r = *chain.last().unwrap();
        let lo2 = self.world_l(r, lo);
        let mapped: Vec<u32> = chain.iter().map(|&x| self.descend(x, r, lo)).collect();
        self.delta_in(lo2, r, mapped, out);
    }

    /// γ: inverse of δ, from a simplex (set of class bottoms) back to the
    /// chain.
    pub fn gamma(&self, simplex: &[u32]) -> Vec<u32> {
        let top = self.pi_down(self.lat.top(), self.lat.bottom());
        let mut verts: Vec<u32> = simplex.to_vec();
        verts.sort_by_key(|&v| (self.lat.length(v), v));
        self.gamma_in(self.lat.bottom(), top, &verts)
    }

    fn gamma_in(&self, lo: u32, hi: u32, verts: &[u32]) -> Vec<u32> {
        if verts.is_empty() {
            return vec![];
        }
        let mut rest: Vec<u32> = verts.to_vec();
        let mut taken_top = false;
        if let Some(pos) = rest.iter().position(|&v| v == hi) {
            rest.remove(pos);
            taken_top = true;
        }
        if rest.is_empty() {
            return if taken_top { vec![hi] } else { vec![] };
        }
        // the maximal remaining vertex in the weak order is the sub-world top
        let r = *rest
            .iter()
            .max_by_key(|&&v| (self.lat.length(v), v))
            .unwrap();
        debug_assert!(rest.iter().all(|&v| self.lat.leq(v, r)));
        let sub = self.gamma_in(self.world_l(r, lo), r, &rest);
        let mut chain: Vec<u32> = sub.into_iter().map(|y| self.ascend(y, r, lo)).collect();
        if taken_top {
            chain.push(hi);
        }
        chain
    }
}

/// The quotient fan: maximal cones are class cones, carved by the lower
/// hyperplanes of the class bottom and the upper hyperplanes of the class
/// top.
pub fn quotient_max_cones<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    cong: &Congruence,
) -> Vec<Cone<F>> {
    cong.bottoms
        .iter()
        .map(|&b| {
            let top = cong.class_top[b as usize];
            let mut ineqs: Vec<Vec<F>> = Vec::new();
            for &(_, h) in &lat.down[b as usize] {
                ineqs.push(vec_neg(&arr.normals[h as usize]));
            }
            for &(_, h) in &lat.up[top as usize] {
                ineqs.push(arr.normals[h as usize].clone());
            }
            Cone::from_constraints(arr.dim, &[], &ineqs)
        })
        .collect()
}

/// All faces of the quotient fan with, per face, the set of maximal cones
/// containing it; verified to be an interval in the quotient lattice.
pub struct QuotientFan<F: Scalar> {
    pub max_cones: Vec<Cone<F>>,
    /// (cone, members as indices into bottoms, dim)
    pub faces: Vec<(Cone<F>, Vec<u32>, usize)>,
}

pub fn quotient_fan<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    cong: &Congruence,
) -> Result<QuotientFan<F>, TriangulationError> {
    let max_cones = quotient_max_cones(arr, lat, cong);
    let mut seen: HashMap<crate::geom::ConeKey<F>, usize> = HashMap::new();
    let mut faces: Vec<(Cone<F>, Vec<u32>, usize)> = Vec::new();
    for mc in &max_cones {
        let (fs, _) = mc.faces();
        for f in fs {
            if seen.contains_key(&f.key()) {
                continue;
            }
            let members: Vec<u32> = (0..max_cones.len() as u32)
                .filter(|&i| max_cones[i as usize].contains_cone(&f))
                .collect();
            seen.insert(f.key(), faces.len());
            let dim = f.dim;
            faces.push((f, members, dim));
        }
    }
    // every face's maximal-cone set must be an interval of the quotient
    for (_, members, _) in &faces {
        let elems: Vec<u32> = members.iter().map(|&i| cong.bottoms[i as usize]).collect();
        let bot = *elems.iter().min_by_key(|&&x| (lat.length(x), x)).unwrap();
        let top = *elems.iter().max_by_key(|&&x| (lat.length(x), x)).unwrap();
        let expected: HashSet<u32> = cong
            .bottoms
            .iter()
            .copied()
            .filter(|&z| lat.leq(bot, z) && lat.leq(z, cong.class_top[top as usize]))
            .collect();
        let got: HashSet<u32> = elems.iter().copied().collect();
        if !got.iter().all(|x| expected.contains(x)) || got.len() != expected.len() {
            return Err(TriangulationError::FaceNotInterval);
        }
    }
    Ok(QuotientFan { max_cones, faces })
}

/// The pulling triangulation Δ(F/Θ) of the dual ball of the quotient fan,
/// pulled in the order opposite to the quotient lattice. Vertices are class
/// bottoms.
pub fn quotient_triangulation<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    cong: &Congruence,
) -> Result<Vec<Vec<u32>>, TriangulationError> {
    let fan = quotient_fan(arr, lat, cong)?;
    let data: Vec<(Vec<u32>, usize)> = fan
        .faces
        .iter()
        .map(|(_, members, dim)| {
            let verts: Vec<u32> = members.iter().map(|&i| cong.bottoms[i as usize]).collect();
            (verts, arr.dim - dim)
        })
        .collect();
    let cx = complex_from_dual_faces(data);
    let first = |verts: &[u32]| -> Option<u32> {
        // unique weak-order maximum among the vertices
        let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
        verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
    };
    pulling_triangulation(&cx, &first)
}

/// Interval partition of the fan faces induced by shelling: every face F
/// belongs to exactly one interval [G(R), R], where G(R) is the intersection
/// of the lower facets of R. Returns the number of faces per region.
pub fn shelling_interval_partition(
    group: &CoxGroup,
    faces: &[FanFace],
) -> Result<HashMap<u32, usize>, TriangulationError> {
    let lat = &group.lattice;
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for (fi, face) in faces.iter().enumerate() {
        // regions R containing the face whose descent set includes J
        let owners: Vec<u32> = face
            .members
            .iter()
            .copied()
            .filter(|&r| {
                (0..group.n_gens as u8).all(|s| {
                    face.gens & (1 << s) == 0 || {
                        let rs = group.mult(r, group.generator(s));
                        lat.length(rs) < lat.length(r)
                    }
                })
            })
            .collect();
        if owners.len() != 1 {
            return Err(TriangulationError::NoUniqueMinimalVertex(fi));
        }
        *counts.entry(owners[0]).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Is the quotient triangulation an induced subcomplex of the full one?
pub fn subcomplex_probe(
    full: &BTreeSet<Vec<u32>>,
    quotient: &BTreeSet<Vec<u32>>,
    bottoms: &[u32],
) -> bool {
    let bset: HashSet<u32> = bottoms.iter().copied().collect();
    let induced: BTreeSet<Vec<u32>> = full
        .iter()
        .filter(|s| s.iter().all(|v| bset.contains(v)))
        .cloned()
        .collect();
    induced == *quotient
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::generate_congruence;
    use crate::coxeter::{CoxeterType, GroupGeom};
    use crate::shards::ShardDigraph;
    use crate::shardorder::ShardOrder;

    struct Ctx {
        g: CoxGroup,
        shards: ShardSet,
        dg: ShardDigraph,
    }

    fn ctx(t: &str) -> Ctx {
        let g = CoxGroup::build(&CoxeterType::parse(t).unwrap()).unwrap();
        let shards = ShardSet::compute(&g.lattice);
        let span = |hyps: &[u8]| g.span_closure(hyps);
        let dg = ShardDigraph::build(&g.lattice, &shards, &span);
        Ctx { g, shards, dg }
    }

    #[test]
    fn fan_face_counts() {
        let c1 = ctx("A1");
        assert_eq!(coxeter_fan_faces(&c1.g).len(), 3);
        let c2 = ctx("A2");
        let f2 = coxeter_fan_faces(&c2.g);
        assert_eq!(f2.len(), 13);
        let c3 = ctx("A3");
        let f3 = coxeter_fan_faces(&c3.g);
        let mut by_codim = HashMap::new();
        for f in &f3 {
            *by_codim.entry(f.gens.count_ones()).or_insert(0usize) += 1;
        }
        assert_eq!(by_codim[&0], 24);
        assert_eq!(by_codim[&1], 36);
        assert_eq!(by_codim[&2], 14);
        assert_eq!(by_codim[&3], 1);
        assert_eq!(f3.len(), 75);
    }

    #[test]
    fn fan_faces_match_geometry_rank3() {
        // geometric cross-check: dedupe the faces of all region cones
        let c = ctx("A3");
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let arr = &layer.arrangement;
        let mut seen: HashMap<crate::geom::ConeKey<crate::num::Rat>, usize> = HashMap::new();
        let mut count_by_dim: HashMap<usize, usize> = HashMap::new();
        for x in 0..c.g.lattice.len() as u32 {
            let sep = crate::poset::BitSet::from_iter_bits(
                c.g.lattice.n_hyp,
                (0..c.g.lattice.n_hyp)
                    .filter(|&i| c.g.lattice.sep[x as usize] & (1 << i) != 0),
            );
            let cone = arr.region_cone(&sep);
            let (faces, _) = cone.faces();
            for f in faces {
                if !seen.contains_key(&f.key()) {
                    seen.insert(f.key(), 0);
                    *count_by_dim.entry(f.dim).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(count_by_dim[&3], 24);
        assert_eq!(count_by_dim[&2], 36);
        assert_eq!(count_by_dim[&1], 14);
        assert_eq!(count_by_dim[&0], 1);
    }

    #[test]
    fn square_pulls_into_two_triangles() {
        let cx = complex_from_dual_faces(vec![
            (vec![0], 0),
            (vec![1], 0),
            (vec![2], 0),
            (vec![3], 0),
            (vec![0, 1], 1),
            (vec![1, 2], 1),
            (vec![2, 3], 1),
            (vec![3, 0], 1),
            (vec![0, 1, 2, 3], 2),
        ]);
        let first = |verts: &[u32]| verts.iter().min().copied();
        let tri = pulling_triangulation(&cx, &first).unwrap();
        assert_eq!(tri.len(), 2);
    }

    #[test]
    fn hexagon_pulls_into_four_triangles() {
        let c = ctx("A2");
        let cx = zonotope_complex(&c.g);
        let lat = &c.g.lattice;
        let first = |verts: &[u32]| -> Option<u32> {
            let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
            verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
        };
        let tri = pulling_triangulation(&cx, &first).unwrap();
        assert_eq!(tri.len(), 4);
    }

    #[test]
    fn a3_permutohedron_34_simplices_and_f_vector() {
        let c = ctx("A3");
        let cx = zonotope_complex(&c.g);
        let lat = &c.g.lattice;
        let first = |verts: &[u32]| -> Option<u32> {
            let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
            verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
        };
        let tri = pulling_triangulation(&cx, &first).unwrap();
        assert_eq!(tri.len(), 34);
        // f-vector equals the chain counts of (S4, ⪯)
        let so = ShardOrder::build(lat, &c.shards);
        let chains = so.poset.chain_count_by_size();
        let fv = f_vector(&simplex_closure(&tri));
        assert_eq!(fv, chains);
    }

    #[test]
    fn delta_bijection_identity_congruence() {
        for t in ["A2", "A3", "B2"] {
            let c = ctx(t);
            let lat = &c.g.lattice;
            let id = generate_congruence(lat, &c.shards, &c.dg, &[]).unwrap();
            let dm = DeltaMap::new(lat, &c.shards, &id);
            let so = ShardOrder::build(lat, &c.shards);
            let chains = enumerate_chains(&so.poset);
            // triangulation via pulling
            let cx = zonotope_complex(&c.g);
            let first = |verts: &[u32]| -> Option<u32> {
                let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
                verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
            };
            let tri = pulling_triangulation(&cx, &first).unwrap();
            let all_simplices = simplex_closure(&tri);
            let mut images = BTreeSet::new();
            for ch in &chains {
                let chain_elems: Vec<u32> = ch.iter().map(|&x| x as u32).collect();
                let img = dm.delta(&chain_elems);
                assert_eq!(img.len(), ch.len(), "{t}: dimension not preserved");
                if !ch.is_empty() {
                    assert!(
                        all_simplices.contains(&img),
                        "{t}: δ image {img:?} of {ch:?} not a simplex"
                    );
                    assert!(images.insert(img.clone()), "{t}: δ not injective at {ch:?}");
                }
                // round trip
                let back = dm.gamma(&img);
                let mut sorted_chain = chain_elems.clone();
                sorted_chain.sort_by_key(|&x| (so.rank[x as usize], x));
                assert_eq!(back, sorted_chain, "{t}: γ∘δ ≠ id on {ch:?}");
            }
            assert_eq!(images.len(), all_simplices.len(), "{t}: δ not surjective");
        }
    }

    #[test]
    fn quotient_fan_s4_cambrian_is_associahedral() {
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let g3124 = c.g.from_one_line(&[3, 1, 2, 4]).unwrap();
        let g1342 = c.g.from_one_line(&[1, 3, 4, 2]).unwrap();
        let camb = generate_congruence(lat, &c.shards, &c.dg, &[g3124, g1342]).unwrap();
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let fan = quotient_fan(&layer.arrangement, lat, &camb).unwrap();
        assert_eq!(fan.max_cones.len(), 14);
        let mut by_dim: HashMap<usize, usize> = HashMap::new();
        for (_, _, d) in &fan.faces {
            *by_dim.entry(*d).or_insert(0) += 1;
        }
        // 3-dimensional associahedron fan: 14 maximal cones, 21 walls,
        // 9 rays, 1 origin
        assert_eq!(by_dim[&3], 14);
        assert_eq!(by_dim[&2], 21);
        assert_eq!(by_dim[&1], 9);
        assert_eq!(by_dim[&0], 1);
        // class cones partition the space: each region interior is in
        // exactly one class cone, its own
        for x in 0..lat.len() as u32 {
            let sep = crate::poset::BitSet::from_iter_bits(
                lat.n_hyp,
                (0..lat.n_hyp).filter(|&i| lat.sep[x as usize] & (1 << i) != 0),
            );
            let p = layer.arrangement.region_cone(&sep).interior_rep();
            for (i, mc) in fan.max_cones.iter().enumerate() {
                let inside = mc.contains_point(&p);
                let same_class =
                    camb.bottoms[i as usize] == camb.class_bottom[x as usize];
                assert_eq!(inside, same_class, "region {x} vs class {i}");
            }
        }
        // facet counts: lower facets of bottom + upper facets of top
        for (i, &b) in camb.bottoms.iter().enumerate() {
            let t = camb.class_top[b as usize];
            let expected = lat.down[b as usize].len() + lat.up[t as usize].len();
            assert_eq!(fan.max_cones[i].ineq.len(), expected);
        }
    }

    #[test]
    fn quotient_triangulation_s4_cambrian() {
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let g3124 = c.g.from_one_line(&[3, 1, 2, 4]).unwrap();
        let g1342 = c.g.from_one_line(&[1, 3, 4, 2]).unwrap();
        let camb = generate_congruence(lat, &c.shards, &c.dg, &[g3124, g1342]).unwrap();
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let tri = quotient_triangulation(&layer.arrangement, lat, &camb).unwrap();
        assert_eq!(tri.len(), 16);
        // f-vector equals the chain counts of the quotient shard order
        let qso = crate::congruence::quotient_shard_order(lat, &c.shards, &camb);
        let chains = qso.poset.chain_count_by_size();
        let fv = f_vector(&simplex_closure(&tri));
        assert_eq!(fv, chains);
        // δ restricted to quotient chains is a bijection with round trips
        let dm = DeltaMap::new(lat, &c.shards, &camb);
        let all = simplex_closure(&tri);
        let mut images = BTreeSet::new();
        for ch in enumerate_chains(&qso.poset) {
            let chain_elems: Vec<u32> = ch.iter().map(|&i| qso.bottoms[i]).collect();
            let img = dm.delta(&chain_elems);
            assert_eq!(img.len(), chain_elems.len());
            if !ch.is_empty() {
                assert!(all.contains(&img), "image {img:?} missing");
                assert!(images.insert(img.clone()));
            }
            let back = dm.gamma(&img);
            let mut sorted = chain_elems.clone();
            sorted.sort_by_key(|&x| (lat.down[x as usize].len(), x));
            assert_eq!(back, sorted);
        }
        assert_eq!(images.len(), all.len());
    }

    #[test]
    fn a2_cambrian_pentagon() {
        let c = ctx("A2");
        let lat = &c.g.lattice;
        // Tamari congruence on S3: contract the join-irreducible 312
        let w312 = lat
            .join_irreducibles()
            .iter()
            .map(|j| j.element)
            .find(|&x| {
                lat.length(x) == 2 && {
                    let (q, _) = lat.down[x as usize][0];
                    lat.length(q) == 1
                        && c.g.one_line(x) == Some(vec![3, 1, 2])
                }
            })
            .unwrap();
        let camb = generate_congruence(lat, &c.shards, &c.dg, &[w312]).unwrap();
        assert_eq!(camb.n_classes(), 5);
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let tri = quotient_triangulation(&layer.arrangement, lat, &camb).unwrap();
        assert_eq!(tri.len(), 3);
    }

    #[test]
    fn identity_quotient_reproduces_permutohedron() {
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let id = generate_congruence(lat, &c.shards, &c.dg, &[]).unwrap();
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let tri = quotient_triangulation(&layer.arrangement, lat, &id).unwrap();
        assert_eq!(tri.len(), 34);
        let fan = quotient_fan(&layer.arrangement, lat, &id).unwrap();
        assert_eq!(fan.faces.len(), 75);
    }

    #[test]
    fn parabolic_quotient_fan_is_subarrangement_fan() {
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let span = |hyps: &[u8]| c.g.span_closure(hyps);
        let cong =
            crate::congruence::parabolic_congruence(lat, &c.shards, &span, &[0, 1]).unwrap();
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let fan = quotient_fan(&layer.arrangement, lat, &cong).unwrap();
        assert_eq!(fan.max_cones.len(), 6);
        // compare against the directly built A2 fan: 13 faces
        assert_eq!(fan.faces.len(), 13);
    }

    #[test]
    fn shelling_partition() {
        let c1 = ctx("A1");
        let f1 = coxeter_fan_faces(&c1.g);
        let p1 = shelling_interval_partition(&c1.g, &f1).unwrap();
        let mut sizes: Vec<usize> = p1.values().copied().collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);

        let c2 = ctx("A2");
        let f2 = coxeter_fan_faces(&c2.g);
        let p2 = shelling_interval_partition(&c2.g, &f2).unwrap();
        assert_eq!(p2.len(), 6);
        assert_eq!(p2.values().sum::<usize>(), 13);

        let c3 = ctx("A3");
        let f3 = coxeter_fan_faces(&c3.g);
        let p3 = shelling_interval_partition(&c3.g, &f3).unwrap();
        assert_eq!(p3.len(), 24);
        assert_eq!(p3.values().sum::<usize>(), 75);
        // interval sizes are 2^{#descents}
        for (&r, &count) in &p3 {
            assert_eq!(count, 1 << c3.g.lattice.down[r as usize].len());
        }
    }

    #[test]
    fn subcomplex_probe_paper_instances() {
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let id = generate_congruence(lat, &c.shards, &c.dg, &[]).unwrap();
        let full = simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &id).unwrap());

        // identity: trivially an induced subcomplex of itself
        assert!(subcomplex_probe(&full, &full, &id.bottoms));

        // Cambrian congruence: induced subcomplex
        let g3124 = c.g.from_one_line(&[3, 1, 2, 4]).unwrap();
        let g1342 = c.g.from_one_line(&[1, 3, 4, 2]).unwrap();
        let camb = generate_congruence(lat, &c.shards, &c.dg, &[g3124, g1342]).unwrap();
        let camb_tri =
            simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &camb).unwrap());
        assert!(subcomplex_probe(&full, &camb_tri, &camb.bottoms));

        // the congruence contracting only 2143 ⋖ 2413: not a subcomplex
        let w2143 = c.g.from_one_line(&[2, 1, 4, 3]).unwrap();
        let w2413 = c.g.from_one_line(&[2, 4, 1, 3]).unwrap();
        let h = lat.up[w2143 as usize]
            .iter()
            .find(|&&(e, _)| e == w2413)
            .map(|&(_, h)| h)
            .unwrap();
        let ji = lat.ji_of_cover(w2413, h, None);
        let single = generate_congruence(lat, &c.shards, &c.dg, &[ji]).unwrap();
        assert_eq!(single.removed.count(), 1);
        let single_tri =
            simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &single).unwrap());
        assert!(!subcomplex_probe(&full, &single_tri, &single.bottoms));
    }

    #[test]
    fn any_linear_extension_pulls_uniquely() {
        // every face of the quotient complex has a unique weak-order-maximal
        // vertex, so any linear extension induces the same pulling choice
        let c = ctx("A3");
        let lat = &c.g.lattice;
        let g3124 = c.g.from_one_line(&[3, 1, 2, 4]).unwrap();
        let camb = generate_congruence(lat, &c.shards, &c.dg, &[g3124]).unwrap();
        let GroupGeom::Rat(layer) = &c.g.geom else { panic!() };
        let fan = quotient_fan(&layer.arrangement, lat, &camb).unwrap();
        for (_, members, _) in &fan.faces {
            let elems: Vec<u32> = members.iter().map(|&i| camb.bottoms[i as usize]).collect();
            let m = *elems.iter().max_by_key(|&&v| (lat.length(v), v)).unwrap();
            assert!(elems.iter().all(|&v| lat.leq(v, m)));
        }
    }
}
