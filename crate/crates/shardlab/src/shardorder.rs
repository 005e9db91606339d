//! The shard intersection order: the lattice induced on regions by reverse
//! containment of intersections of lower shards, its grading, Möbius
//! numbers, chain counts, lower intervals, and the geometric realization.

use std::collections::{HashMap, HashSet};

use crate::coxeter::{classify_submatrix, CoxGroup, CoxeterType, Subspace};
use crate::geom::{Arrangement, Cone};
use crate::num::Scalar;
use crate::poset::{BitSet, PosetView};
use crate::shards::{shard_cone, ShardSet};
use crate::weak::RegionLattice;

/// The shard intersection order on all regions: element w carries the label
/// set λ(w) of shards through covers in [L(w), w], and w ⪯ v iff
/// λ(w) ⊆ λ(v).
pub struct ShardOrder {
    /// Shard indices of the covers inside [L(w), w], per element.
    pub labels: Vec<BitSet>,
    /// Rank: the number of lower covers (descents).
    pub rank: Vec<usize>,
    pub poset: PosetView,
}

impl ShardOrder {
    pub fn build(lat: &RegionLattice, shards: &ShardSet) -> ShardOrder {
        let n = lat.len();
        let mut labels = Vec::with_capacity(n);
        for w in 0..n as u32 {
            labels.push(label_set(lat, shards, w));
        }
        let poset = PosetView::from_leq(n, |i, j| labels[i].is_subset(&labels[j]));
        let rank = (0..n).map(|i| lat.down[i].len()).collect();
        ShardOrder {
            labels,
            rank,
            poset,
        }
    }

    pub fn preceq(&self, u: u32, v: u32) -> bool {
        self.labels[u as usize].is_subset(&self.labels[v as usize])
    }

    /// Coefficient k = number of elements of rank k (the descent-count
    /// generating polynomial).
    pub fn rank_polynomial(&self) -> Vec<u64> {
        let top = self.rank.iter().copied().max().unwrap_or(0);
        let mut out = vec![0u64; top + 1];
        for &r in &self.rank {
            out[r] += 1;
        }
        out
    }

    pub fn mobius_direct(&self) -> i64 {
        let b = self.poset.bottom().expect("bounded");
        let t = self.poset.top().expect("bounded");
        self.poset.mobius(b, t)
    }

    pub fn maximal_chain_count_direct(&self) -> u64 {
        self.poset.maximal_chain_count()
    }

    /// Lower interval [bottom, w] as an induced poset, with its members.
    pub fn lower_interval(&self, w: u32) -> (Vec<u32>, PosetView) {
        let members: Vec<u32> = (0..self.labels.len() as u32)
            .filter(|&x| self.preceq(x, w))
            .collect();
        let view = self
            .poset
            .induced(&members.iter().map(|&x| x as usize).collect::<Vec<_>>());
        (members, view)
    }
}

/// λ(w): the shards of covers inside the interval [L(w), w].
pub fn label_set(lat: &RegionLattice, shards: &ShardSet, w: u32) -> BitSet {
    let l = lat.lower_bound_l(w);
    let members = lat.interval(l, w);
    let member_set: HashSet<u32> = members.iter().copied().collect();
    let mut lam = BitSet::new(shards.len());
    for &p in &members {
        for &(p2, _) in &lat.up[p as usize] {
            if member_set.contains(&p2) {
                lam.insert(shards.by_cover[&(p, p2)]);
            }
        }
    }
    lam
}

/// ρ: a set of shards (all containing a common cone) back to the region
/// whose lower shards they are: the join of their join-irreducibles.
pub fn rho(lat: &RegionLattice, shards: &ShardSet, containing: &BitSet) -> u32 {
    lat.join_all(containing.iter().map(|i| shards.shards[i].ji))
}

/// Möbius number of (W, ⪯) by inclusion-exclusion over standard
/// subarrangements: Σ_{K ⊆ basics} (−1)^{|K|} |R_K|.
pub fn mobius_inclusion_exclusion(lat: &RegionLattice, span: &dyn Fn(&[u8]) -> u64) -> i64 {
    let basics = lat.basic.clone();
    let mut total = 0i64;
    for mask in 0u64..(1 << basics.len()) {
        let k: Vec<u8> = basics
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &b)| b)
            .collect();
        let closure = if k.is_empty() { 0 } else { span(&k) };
        let count = lat.sep.iter().filter(|&&s| s & !closure == 0).count() as i64;
        let sign = if k.len().is_multiple_of(2) { 1 } else { -1 };
        total += sign * count;
    }
    total
}

/// Number of maximal chains of (W, ⪯) by the parabolic recursion
/// MC(W) = Σ_s (|W| / |W_{S∖s}| − 1) · MC(W_{S∖s}), with the product rule
/// for reducible types. Independent of the Hasse-diagram count.
pub fn maximal_chain_count_recursion(ctype: &CoxeterType) -> u64 {
    fn binomial(n: u64, k: u64) -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }
    fn mc_type(ctype: &CoxeterType) -> u64 {
        // maximal chains of a product: interleave factor chains
        let mut total_rank = 0u64;
        let mut mc = 1u64;
        for fam in &ctype.factors {
            let r = fam.rank() as u64;
            let sub = CoxeterType {
                factors: vec![*fam],
            };
            mc *= mc_irreducible(&sub) * binomial(total_rank + r, r);
            total_rank += r;
        }
        mc
    }
    fn mc_irreducible(ctype: &CoxeterType) -> u64 {
        let n = ctype.rank();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return 1;
        }
        let m = ctype.coxeter_matrix();
        let order = ctype.order();
        let mut total = 0u64;
        for s in 0..n {
            let subset: Vec<usize> = (0..n).filter(|&i| i != s).collect();
            let sub = classify_submatrix(&m, &subset).expect("parabolic of finite type");
            let cosets = order / sub.order();
            total += (cosets - 1) * mc_type(&sub);
        }
        total
    }
    mc_type(ctype)
}

/// The cone ψ(w): intersection of the lower shards of w.
pub fn psi_cone<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
    shards: &ShardSet,
    labels: &[BitSet],
    w: u32,
) -> Cone<F> {
    let mut eqs: Vec<Vec<F>> = Vec::new();
    let mut ineqs: Vec<Vec<F>> = Vec::new();
    // the lower shards carve the cone; the rest of λ(w) contains it anyway
    let _ = labels;
    for &(q, _) in &lat.down[w as usize] {
        let idx = shards.by_cover[&(q, w)];
        let sc = shard_cone(arr, lat, span, &shards.shards[idx]);
        eqs.extend(sc.eq.iter().cloned());
        ineqs.extend(sc.ineq.iter().cloned());
    }
    Cone::from_constraints(arr.dim, &eqs, &ineqs)
}

/// All cones of Ψ, indexed by element id.
pub fn psi_family<F: Scalar>(
    arr: &Arrangement<F>,
    lat: &RegionLattice,
    span: &dyn Fn(&[u8]) -> u64,
    shards: &ShardSet,
    order: &ShardOrder,
) -> Vec<Cone<F>> {
    (0..lat.len() as u32)
        .map(|w| psi_cone(arr, lat, span, shards, &order.labels, w))
        .collect()
}

/// U(ψ(w)): the intersection of all hyperplanes containing ψ(w), i.e. of
/// the hyperplanes of the shards in λ(w).
pub fn u_subspace(group: &CoxGroup, shards: &ShardSet, labels: &BitSet) -> Subspace {
    let hyps: Vec<u8> = labels
        .iter()
        .map(|i| shards.shards[i].hyperplane)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    group.hyperplane_intersection(&hyps)
}

/// The intersection lattice Int(A): all intersections of subsets of
/// hyperplanes, ordered by reverse containment.
pub fn intersection_lattice(group: &CoxGroup) -> (Vec<Subspace>, PosetView) {
    let m = group.lattice.n_hyp as u8;
    let whole = group.whole_space();
    let mut subs: Vec<Subspace> = vec![whole];
    let mut seen: HashMap<Subspace, usize> = HashMap::new();
    seen.insert(subs[0].clone(), 0);
    let mut qi = 0;
    while qi < subs.len() {
        let cur = subs[qi].clone();
        qi += 1;
        for h in 0..m {
            let mut hyps: Vec<u8> = (0..m)
                .filter(|&x| group.hyps_containing(&cur) & (1 << x) != 0)
                .collect();
            hyps.push(h);
            let next = group.hyperplane_intersection(&hyps);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), subs.len());
                subs.push(next);
            }
        }
    }
    let poset = PosetView::from_leq(subs.len(), |i, j| {
        // i ≤ j iff subspace_i ⊇ subspace_j
        subspace_contains(&subs[i], &subs[j])
    });
    (subs, poset)
}

pub fn subspace_contains(big: &Subspace, small: &Subspace) -> bool {
    use crate::num::rank;
    match (big, small) {
        (Subspace::Rat(a), Subspace::Rat(b)) => {
            let mut rows = a.clone();
            rows.extend(b.iter().cloned());
            rank(&rows) == a.len()
        }
        (Subspace::Rt5(a), Subspace::Rt5(b)) => {
            let mut rows = a.clone();
            rows.extend(b.iter().cloned());
            rank(&rows) == a.len()
        }
        _ => panic!("mixed-field subspace comparison"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxGroup, CoxeterType, GroupGeom};

    fn build(s: &str) -> (CoxGroup, ShardSet, ShardOrder) {
        let g = CoxGroup::build(&CoxeterType::parse(s).unwrap()).unwrap();
        let shards = ShardSet::compute(&g.lattice);
        let order = ShardOrder::build(&g.lattice, &shards);
        (g, shards, order)
    }

    #[test]
    fn i25_shape() {
        let (_, _, so) = build("I2(5)");
        assert_eq!(so.rank_polynomial(), vec![1, 8, 1]);
        // the 8 atoms are pairwise incomparable
        let atoms: Vec<u32> = (0..10u32).filter(|&x| so.rank[x as usize] == 1).collect();
        for &a in &atoms {
            for &b in &atoms {
                if a != b {
                    assert!(!so.preceq(a, b));
                }
            }
        }
        assert!(so.poset.is_lattice());
    }

    #[test]
    fn a1_is_two_chain() {
        let (_, _, so) = build("A1");
        assert_eq!(so.rank_polynomial(), vec![1, 1]);
        assert!(so.preceq(0, 1));
    }

    #[test]
    fn rank_polynomials_small() {
        let (_, _, a2) = build("A2");
        assert_eq!(a2.rank_polynomial(), vec![1, 4, 1]);
        let (_, _, a3) = build("A3");
        assert_eq!(a3.rank_polynomial(), vec![1, 11, 11, 1]);
    }

    #[test]
    fn s4_lattice_properties() {
        let (g, _, so) = build("A3");
        assert!(so.poset.is_lattice());
        let grading = so.poset.grading().unwrap();
        for x in 0..g.order() {
            assert_eq!(grading[x], so.rank[x]);
        }
        assert!(so.poset.is_atomic());
        assert!(so.poset.is_coatomic());
        // weaker than the weak order
        for u in 0..g.order() as u32 {
            for v in 0..g.order() as u32 {
                if so.preceq(u, v) {
                    assert!(g.lattice.leq(u, v));
                }
            }
        }
        // Example: 3124 ⪯ 4312 (a canonical joinand)
        let u = g.from_one_line(&[3, 1, 2, 4]).unwrap();
        let v = g.from_one_line(&[4, 3, 1, 2]).unwrap();
        assert!(so.preceq(u, v));
        assert!(!so.preceq(v, u));
    }

    #[test]
    fn mobius_two_ways() {
        for (t, expected) in [("A1", Some(-1i64)), ("A2", Some(3)), ("I2(5)", Some(7)), ("A3", Some(-13)), ("B3", None)] {
            let (g, _, so) = build(t);
            let direct = so.mobius_direct();
            let span = |hyps: &[u8]| g.span_closure(hyps);
            let incl_excl = mobius_inclusion_exclusion(&g.lattice, &span);
            assert_eq!(direct, incl_excl, "routes disagree for {t}");
            if let Some(v) = expected {
                assert_eq!(direct, v, "value for {t}");
            }
        }
    }

    #[test]
    fn mobius_matches_full_support_count() {
        // |μ| = number of elements supported on all of S
        for t in ["A2", "A3", "B2", "I2(5)", "I2(7)"] {
            let (g, _, so) = build(t);
            let full: u64 = (1 << g.n_gens) - 1;
            let count = (0..g.order() as u32)
                .filter(|&x| g.support(x) == full)
                .count() as i64;
            let sign = if g.ctype.rank() % 2 == 0 { 1 } else { -1 };
            assert_eq!(so.mobius_direct(), sign * count, "{t}");
        }
    }

    #[test]
    fn maximal_chains_two_ways() {
        for (t, expected) in [("A1", 1u64), ("A2", 4), ("A3", 34), ("B2", 6), ("B3", 0)] {
            let (g, _, so) = build(t);
            let direct = so.maximal_chain_count_direct();
            let rec = maximal_chain_count_recursion(&g.ctype);
            assert_eq!(direct, rec, "routes disagree for {t}");
            if expected != 0 {
                assert_eq!(direct, expected, "value for {t}");
            }
        }
    }

    #[test]
    fn product_types_factor() {
        let (_, _, so) = build("A1xA1");
        assert_eq!(so.rank_polynomial(), vec![1, 2, 1]);
        assert!(so.poset.is_lattice());
        let rec = maximal_chain_count_recursion(&CoxeterType::parse("A1xA1").unwrap());
        assert_eq!(so.maximal_chain_count_direct(), rec);
        assert_eq!(rec, 2);
    }

    #[test]
    fn lower_interval_isomorphic_to_parabolic() {
        let (g, _, so) = build("A3");
        let w = g.from_one_line(&[4, 3, 1, 2]).unwrap(); // descents {s1, s2}
        let (members, view) = so.lower_interval(w);
        assert_eq!(members.len(), 6);
        let (_, _, sub) = build("A2");
        assert!(view.isomorphism(&sub.poset).is_some());
        // join-irreducible: two-chain
        for ji in g.lattice.join_irreducibles() {
            let (m2, v2) = so.lower_interval(ji.element);
            assert_eq!(m2.len(), 2);
            assert!(v2.is_lattice());
        }
        // top: the whole order
        let (mt, _) = so.lower_interval(g.longest());
        assert_eq!(mt.len(), 24);
    }

    #[test]
    fn rho_inverts_psi() {
        for t in ["A2", "A3", "B2", "I2(5)", "I2(7)"] {
            let (g, shards, so) = build(t);
            for w in 0..g.order() as u32 {
                assert_eq!(rho(&g.lattice, &shards, &so.labels[w as usize]), w);
            }
        }
    }

    #[test]
    fn psi_cones_geometry_a3() {
        let (g, shards, so) = build("A3");
        let span = |hyps: &[u8]| g.span_closure(hyps);
        let GroupGeom::Rat(layer) = &g.geom else {
            panic!()
        };
        let arr = &layer.arrangement;
        let cones = psi_family(arr, &g.lattice, &span, &shards, &so);
        // codim = number of descents
        for w in 0..g.order() {
            assert_eq!(arr.dim - cones[w].dim, so.rank[w], "element {w}");
        }
        // ψ preserves the order: u ⪯ v iff ψ(u) ⊇ ψ(v)
        for u in 0..g.order() {
            for v in 0..g.order() {
                assert_eq!(
                    so.preceq(u as u32, v as u32),
                    cones[u].contains_cone(&cones[v]),
                    "{u} vs {v}"
                );
            }
        }
        // Ψ size by codimension: (1, 11, 11, 1), three of the codim-2 cones
        // are entire lines (no extreme rays beside the lineality)
        let mut by_codim = [0usize; 4];
        let mut full_lines = 0;
        for c in &cones {
            by_codim[arr.dim - c.dim] += 1;
            if arr.dim - c.dim == 2 && c.rays.is_empty() {
                full_lines += 1;
            }
        }
        assert_eq!(by_codim, [1, 11, 11, 1]);
        assert_eq!(full_lines, 3);
        // ψ(e) is the whole space; ψ(w0) is the origin
        assert_eq!(cones[0].dim, arr.dim);
        assert_eq!(cones[23].dim, 0);
        assert!(cones[23].rays.is_empty());
    }

    #[test]
    fn u_map_fibers_reproduce_intersection_lattice() {
        for t in ["A2", "A3"] {
            let (g, shards, so) = build(t);
            let (subs, int_poset) = intersection_lattice(&g);
            // fibers of U over Ψ (as elements), keyed by subspace
            let mut fiber_of: Vec<usize> = Vec::new();
            for w in 0..g.order() as u32 {
                let u = u_subspace(&g, &shards, &so.labels[w as usize]);
                let idx = subs.iter().position(|s| s == &u).expect("U lands in Int(A)");
                fiber_of.push(idx);
            }
            // surjectivity
            let hit: HashSet<usize> = fiber_of.iter().copied().collect();
            assert_eq!(hit.len(), subs.len(), "{t}: U not surjective");
            // fiber order (exists u ⪯ v between fibers) matches Int(A) under
            // reverse containment
            for a in 0..subs.len() {
                for b in 0..subs.len() {
                    let fiber_le = (0..g.order() as u32).any(|u| {
                        (0..g.order() as u32).any(|v| {
                            fiber_of[u as usize] == a
                                && fiber_of[v as usize] == b
                                && so.preceq(u, v)
                        })
                    });
                    assert_eq!(fiber_le, int_poset.leq(a, b), "{t}: fiber order mismatch");
                }
            }
        }
    }
}
