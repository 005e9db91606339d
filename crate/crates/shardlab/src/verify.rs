//! Named verification checks: every structural theorem the engine relies on
//! is re-tested here on built objects. The CLI `verify` command and the
//! acceptance suite both drive these.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::cambrian::{
    bipartite_cone_restriction, build_nc, cambrian_congruence, nc_mobius_two_ways,
    one_unremoved_shard_per_hyperplane, verify_isomorphism, CambrianData,
};
use crate::congruence::{
    generate_congruence, generate_congruence_generic, parabolic_congruence, quotient_mobius_incl_excl, quotient_shard_order, Congruence,
};
use crate::coxeter::{classify_submatrix, CoxGroup, CoxeterType, GroupGeom};
use crate::geom::Arrangement;
use crate::num::Scalar;
use crate::poset::{BitSet, PosetView};
use crate::shardorder::{
    intersection_lattice, maximal_chain_count_recursion, mobius_inclusion_exclusion, psi_family,
    rho, u_subspace, ShardOrder,
};
use crate::shards::{
    cuts, depth, geometric_cover_partition, ShardDigraph, ShardSet,
};
use crate::triangulation::{
    coxeter_fan_faces, enumerate_chains, f_vector, pulling_triangulation, quotient_fan,
    quotient_triangulation, shelling_interval_partition, simplex_closure, subcomplex_probe,
    zonotope_complex, DeltaMap,
};
use crate::weak::RegionLattice;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &str, passed: bool, detail: impl Into<String>) {
    out.push(Check {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    });
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GeometryMode {
    Off,
    /// Rank ≤ 3 with few hyperplanes (the desk-scale default).
    Auto,
    On,
}

pub struct Suite<'a> {
    pub group: &'a CoxGroup,
    pub shards: ShardSet,
    pub dg: ShardDigraph,
    pub order: ShardOrder,
}

impl<'a> Suite<'a> {
    pub fn new(group: &'a CoxGroup) -> Self {
        let shards = ShardSet::compute(&group.lattice);
        let span = |hyps: &[u8]| group.span_closure(hyps);
        let dg = ShardDigraph::build(&group.lattice, &shards, &span);
        let order = ShardOrder::build(&group.lattice, &shards);
        Suite {
            group,
            shards,
            dg,
            order,
        }
    }

    fn geometry_active(&self, mode: GeometryMode) -> bool {
        match mode {
            GeometryMode::Off => false,
            GeometryMode::On => true,
            GeometryMode::Auto => {
                self.group.ctype.rank() <= 3 && self.group.lattice.n_hyp <= 12
            }
        }
    }
}

/// The core invariants of the weak order, shards and the shard intersection
/// order.
pub fn verify_core(s: &Suite, mode: GeometryMode) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;
    let span = |hyps: &[u8]| g.span_closure(hyps);
    let weak_poset = lat.to_poset();

    // weak order is a lattice and the fast meet/join agree with it
    let mut lattice_ok = weak_poset.is_lattice();
    if lattice_ok {
        'outer: for x in 0..lat.len() as u32 {
            for y in 0..lat.len() as u32 {
                if weak_poset.meet(x as usize, y as usize) != Some(lat.meet(x, y) as usize)
                    || weak_poset.join(x as usize, y as usize) != Some(lat.join(x, y) as usize)
                {
                    lattice_ok = false;
                    break 'outer;
                }
            }
        }
    }
    check(
        &mut out,
        "weak-order-lattice: poset of regions is a lattice, meets and joins agree",
        lattice_ok,
        format!("{} elements", lat.len()),
    );

    check(
        &mut out,
        "weak-order-antipodal-antiautomorphism: R ↦ -R reverses the order",
        (0..lat.len() as u32).all(|x| {
            (0..lat.len() as u32)
                .all(|y| lat.leq(x, y) == lat.leq(lat.antipode(y), lat.antipode(x)))
        }),
        "",
    );

    check(
        &mut out,
        "inversion-sets: separating set size equals reduced word length",
        (0..lat.len() as u32).all(|x| lat.length(x) == g.words[x as usize].len()),
        "",
    );

    // canonical join representations
    let jis = lat.join_irreducibles();
    let mut cjr_ok = true;
    for w in 0..lat.len() as u32 {
        let rep = lat.canonical_join_rep(w);
        if rep.len() != lat.down[w as usize].len() {
            cjr_ok = false;
        }
        if lat.join_all(rep.iter().copied()) != w {
            cjr_ok = false;
        }
        for &a in &rep {
            for &b in &rep {
                if a != b && lat.leq(a, b) {
                    cjr_ok = false;
                }
            }
        }
    }
    check(
        &mut out,
        "canonical-join-representation: one joinand per lower cover, non-redundant antichain join",
        cjr_ok,
        "",
    );

    if jis.len() <= 16 {
        check(
            &mut out,
            "canonical-join-representation-minimal: brute-force antichain oracle",
            canonical_join_rep_oracle(lat),
            format!("{} join-irreducibles", jis.len()),
        );
    }

    check(
        &mut out,
        "shard-ji-bijection: shards are in bijection with join-irreducibles",
        s.shards.len() == jis.len()
            && (0..s.shards.len()).all(|i| {
                let ups = s.shards.upper_regions(i);
                let ji = s.shards.shards[i].ji;
                ups.iter().all(|&r| lat.leq(ji, r))
            }),
        format!("{} shards", s.shards.len()),
    );

    // whole/half shard counts
    let mut counts_ok = true;
    for h in 0..lat.n_hyp as u8 {
        let c = s.shards.count_in_hyperplane(h);
        let basic = lat.basic.contains(&h);
        if basic != (c == 1) {
            counts_ok = false;
        }
        if !basic {
            let in_rank2_standard = lat.basic.iter().enumerate().any(|(i, &a)| {
                lat.basic[i + 1..]
                    .iter()
                    .any(|&b| span(&[a, b]) & (1 << h) != 0)
            });
            if (c == 2) != in_rank2_standard {
                counts_ok = false;
            }
        }
    }
    check(
        &mut out,
        "shard-counts: one shard iff basic, two iff in a rank-2 standard subarrangement",
        counts_ok,
        "",
    );

    check(
        &mut out,
        "depth-reduction: non-basic hyperplanes admit a rank-2 subarrangement of smaller depth",
        (0..lat.n_hyp as u8).all(|h| {
            lat.basic.contains(&h) || {
                let dh = depth(lat, h);
                (0..lat.n_hyp as u8).filter(|&o| o != h).any(|o| {
                    let basics = lat.basics_of_mask(span(&[h, o]));
                    basics & (1 << h) == 0
                        && (0..lat.n_hyp as u8)
                            .filter(|&b| basics & (1 << b) != 0)
                            .all(|b| depth(lat, b) < dh)
                })
            }
        }),
        "",
    );

    check(
        &mut out,
        "parabolic-cutting: no hyperplane outside a standard subarrangement cuts into it",
        (0u64..(1 << g.n_gens)).all(|k_mask| {
            let para = g.parabolic_mask(k_mask);
            (0..lat.n_hyp as u8).all(|inside| {
                para & (1 << inside) == 0
                    || (0..lat.n_hyp as u8)
                        .all(|outside| para & (1 << outside) != 0 || !cuts(lat, &span, outside, inside))
            })
        }),
        "",
    );

    check(
        &mut out,
        "shard-digraph-acyclic",
        s.dg.acyclic,
        format!("{} arrows", s.dg.arrows.len()),
    );

    // antipodal shard involution induces an automorphism of the shard order
    let anti_elem: Vec<u32> = (0..lat.len() as u32)
        .map(|w| {
            let mut mapped = BitSet::new(s.shards.len());
            for i in s.order.labels[w as usize].iter() {
                mapped.insert(s.shards.antipodal(lat, i));
            }
            rho(lat, &s.shards, &mapped)
        })
        .collect();
    check(
        &mut out,
        "shard-antipodal-automorphism: -Σ is an involution inducing an automorphism of the shard order",
        (0..s.shards.len()).all(|i| {
            s.shards.antipodal(lat, s.shards.antipodal(lat, i)) == i
        }) && (0..lat.len() as u32).all(|u| {
            (0..lat.len() as u32).all(|v| {
                s.order.preceq(u, v)
                    == s.order.preceq(anti_elem[u as usize], anti_elem[v as usize])
            })
        }),
        "",
    );

    check(
        &mut out,
        "shard-order-lattice",
        s.order.poset.is_lattice(),
        "",
    );
    check(
        &mut out,
        "shard-order-graded: rank equals descent count",
        s.order
            .poset
            .grading()
            .is_some_and(|gr| (0..lat.len()).all(|x| gr[x] == s.order.rank[x])),
        "",
    );
    check(
        &mut out,
        "shard-order-atomic-coatomic",
        s.order.poset.is_atomic() && s.order.poset.is_coatomic(),
        "",
    );
    check(
        &mut out,
        "shard-order-weaker-than-weak-order",
        (0..lat.len() as u32)
            .all(|u| (0..lat.len() as u32).all(|v| !s.order.preceq(u, v) || lat.leq(u, v))),
        "",
    );

    let mob_direct = s.order.mobius_direct();
    let mob_ie = mobius_inclusion_exclusion(lat, &span);
    check(
        &mut out,
        "mobius: direct recursion equals parabolic inclusion-exclusion",
        mob_direct == mob_ie,
        format!("recursion {mob_direct}, inclusion-exclusion {mob_ie}"),
    );

    let mc_direct = s.order.maximal_chain_count_direct();
    let mc_rec = maximal_chain_count_recursion(&g.ctype);
    check(
        &mut out,
        "maximal-chains: Hasse count equals the parabolic recursion",
        mc_direct == mc_rec,
        format!("count {mc_direct}, recursion {mc_rec}"),
    );

    check(
        &mut out,
        "rho-inverts-psi: the join of the containing join-irreducibles recovers each element",
        (0..lat.len() as u32).all(|w| rho(lat, &s.shards, &s.order.labels[w as usize]) == w),
        "",
    );

    if lat.len() <= 120 {
        let dist = g.absolute_length_bfs();
        check(
            &mut out,
            "absolute-length: fixed-space codimension equals reflection-word length",
            (0..lat.len() as u32).all(|x| g.absolute_length(x) == dist[x as usize]),
            "",
        );
    }

    // lower intervals are parabolic shard orders
    if lat.len() <= 48 {
        let mut cache: HashMap<u64, PosetView> = HashMap::new();
        let mut li_ok = true;
        for w in 0..lat.len() as u32 {
            let descents = g.descents(w);
            let mask: u64 = descents.iter().fold(0, |m, &s| m | (1 << s));
            let sub_poset = cache.entry(mask).or_insert_with(|| {
                let subset: Vec<usize> = descents.iter().map(|&s| s as usize).collect();
                let sub_t = classify_submatrix(&g.cox_mat, &subset).expect("finite parabolic");
                let sub_g = CoxGroup::build(&sub_t).expect("parabolic builds");
                let sub_shards = ShardSet::compute(&sub_g.lattice);
                ShardOrder::build(&sub_g.lattice, &sub_shards).poset
            });
            let (members, view) = s.order.lower_interval(w);
            if members.len() != sub_poset.len() || view.isomorphism(sub_poset).is_none() {
                li_ok = false;
                break;
            }
        }
        check(
            &mut out,
            "lower-intervals: [1,w] in the shard order is the parabolic shard order",
            li_ok,
            "",
        );
    }

    // Lemma RK: standard parabolic subsets are facial intervals at both ends
    check(
        &mut out,
        "parabolic-subsets-facial: |R_K| counts regions at the antipodal face too",
        {
            let basics = lat.basic.clone();
            (0u64..(1 << basics.len())).all(|mask| {
                let k: Vec<u8> = basics
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &b)| b)
                    .collect();
                let closure = if k.is_empty() { 0 } else { span(&k) };
                let rk = lat.sep.iter().filter(|&&s| s & !closure == 0).count();
                let f = lat.facial_interval_by_mask(lat.top(), closure);
                lat.facial_members(&f).len() == rk
            })
        },
        "",
    );

    // fan faces, shelling partition, permutohedron triangulation
    let faces = coxeter_fan_faces(g);
    let expected_faces: usize = (0..lat.len() as u32)
        .map(|r| 1usize << lat.down[r as usize].len())
        .sum();
    check(
        &mut out,
        "fan-faces: coset faces counted by the shelling interval partition",
        faces.len() == expected_faces,
        format!("{} faces", faces.len()),
    );
    let shelling = shelling_interval_partition(g, &faces);
    check(
        &mut out,
        "shelling-partition: every fan face lies in exactly one interval [G(R), R]",
        shelling
            .as_ref()
            .is_ok_and(|p| p.values().sum::<usize>() == faces.len() && p.len() == lat.len()),
        "",
    );

    let cx = zonotope_complex(g);
    let first = |verts: &[u32]| -> Option<u32> {
        let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
        verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
    };
    match pulling_triangulation(&cx, &first) {
        Ok(tri) => {
            let closure = simplex_closure(&tri);
            let fv = f_vector(&closure);
            let chains = s.order.poset.chain_count_by_size();
            check(
                &mut out,
                "zonotope-chain-triangulation: f-vector of the order complex matches the pulling triangulation",
                fv == chains,
                format!("f-vector {fv:?}"),
            );
            // δ is a dimension-preserving bijection with inverse γ
            let id_cong = generate_congruence(lat, &s.shards, &s.dg, &[]).unwrap();
            let dm = DeltaMap::new(lat, &s.shards, &id_cong);
            let mut images = BTreeSet::new();
            let mut delta_ok = true;
            for ch in enumerate_chains(&s.order.poset) {
                let elems: Vec<u32> = ch.iter().map(|&x| x as u32).collect();
                let img = dm.delta(&elems);
                if img.len() != elems.len() {
                    delta_ok = false;
                }
                if !ch.is_empty() && (!closure.contains(&img) || !images.insert(img.clone())) {
                    delta_ok = false;
                }
                let mut sorted = elems.clone();
                sorted.sort_by_key(|&x| (s.order.rank[x as usize], x));
                if dm.gamma(&img) != sorted {
                    delta_ok = false;
                }
            }
            delta_ok &= images.len() == closure.len();
            check(
                &mut out,
                "delta-bijection: chains map bijectively to simplices, dimensions preserved, with inverse",
                delta_ok,
                "",
            );
        }
        Err(e) => check(&mut out, "zonotope-chain-triangulation", false, e.to_string()),
    }

    // reducible types factor
    if g.ctype.factors.len() > 1 && lat.len() <= 48 {
        let mut ok = true;
        let mut product: Option<PosetView> = None;
        for fam in &g.ctype.factors {
            let sub = CoxGroup::build(&CoxeterType {
                factors: vec![*fam],
            })
            .unwrap();
            let sub_shards = ShardSet::compute(&sub.lattice);
            let sub_order = ShardOrder::build(&sub.lattice, &sub_shards).poset;
            product = Some(match product {
                None => sub_order,
                Some(p) => {
                    let (a, b) = (p.len(), sub_order.len());
                    PosetView::from_leq(a * b, |i, j| {
                        p.leq(i / b, j / b) && sub_order.leq(i % b, j % b)
                    })
                }
            });
        }
        ok &= product
            .unwrap()
            .isomorphism(&s.order.poset)
            .is_some();
        check(
            &mut out,
            "reducible-factorization: the shard order of a product is the product of shard orders",
            ok,
            "",
        );
    }

    if s.geometry_active(mode) {
        match &g.geom {
            GroupGeom::Rat(l) => verify_geometry(s, &l.arrangement, &mut out),
            GroupGeom::Rt5(l) => verify_geometry(s, &l.arrangement, &mut out),
        }
    }
    out
}

/// Brute-force oracle: the canonical join representation is the unique
/// ≤≤-minimal antichain joining to each element, over all antichains of
/// join-irreducibles (every antichain reduces to one).
pub fn canonical_join_rep_oracle(lat: &RegionLattice) -> bool {
    let jis: Vec<u32> = lat.join_irreducibles().iter().map(|j| j.element).collect();
    for w in 0..lat.len() as u32 {
        let can = lat.canonical_join_rep(w);
        let below: Vec<u32> = jis.iter().copied().filter(|&j| lat.leq(j, w)).collect();
        let k = below.len();
        if k > 20 {
            return false; // oracle out of range
        }
        for mask in 0u64..(1 << k) {
            let subset: Vec<u32> = (0..k)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| below[i])
                .collect();
            // antichains only
            if subset
                .iter()
                .any(|&a| subset.iter().any(|&b| a != b && lat.leq(a, b)))
            {
                continue;
            }
            if lat.join_all(subset.iter().copied()) != w {
                continue;
            }
            // Can(w) ≤≤ subset
            if !can
                .iter()
                .all(|&a| subset.iter().any(|&b| lat.leq(a, b)))
            {
                return false;
            }
        }
    }
    true
}

fn verify_geometry<F: Scalar>(s: &Suite, arr: &Arrangement<F>, out: &mut Vec<Check>) {
    let g = s.group;
    let lat = &g.lattice;
    let span = |hyps: &[u8]| g.span_closure(hyps);

    // regions enumerate simplicially and match the group's inversion sets
    match arr.regions() {
        Ok(regions) => {
            let geo_seps: BTreeSet<u64> = regions
                .iter()
                .map(|r| r.sep.iter().fold(0u64, |m, i| m | (1 << i)))
                .collect();
            let grp_seps: BTreeSet<u64> = lat.sep.iter().copied().collect();
            check(
                out,
                "region-bijection: geometric separating sets equal the inversion sets",
                geo_seps == grp_seps,
                format!("{} regions", regions.len()),
            );
            // Eulerian face lattices of the region cones
            check(
                out,
                "eulerian-region-cones: alternating face counts vanish",
                regions.iter().all(|r| {
                    let (faces, _) = r.cone.faces();
                    faces
                        .iter()
                        .map(|f| if f.dim % 2 == 0 { 1i64 } else { -1 })
                        .sum::<i64>()
                        == 0
                }),
                "",
            );
        }
        Err(e) => check(out, "region-bijection", false, e.to_string()),
    }

    if lat.n_hyp <= 16 {
        let count = (0u64..(1 << lat.n_hyp))
            .filter(|&mask| {
                let sep = BitSet::from_iter_bits(
                    lat.n_hyp,
                    (0..lat.n_hyp).filter(|&i| mask & (1 << i) != 0),
                );
                arr.region_cone(&sep).dim == arr.dim
            })
            .count();
        check(
            out,
            "region-count-oracle: sign-vector enumeration matches the region count",
            count == lat.len(),
            format!("{count} full-dimensional sign vectors"),
        );
    }

    // geometric shard partition equals the lattice-theoretic partition
    let geo: BTreeSet<Vec<(u32, u32)>> = geometric_cover_partition(arr, lat, &span)
        .into_values()
        .collect();
    let comb: BTreeSet<Vec<(u32, u32)>> = s
        .shards
        .shards
        .iter()
        .map(|sh| sh.covers.clone())
        .collect();
    check(
        out,
        "shard-partition-agreement: sign-vector grouping equals join-irreducible grouping",
        geo == comb,
        "",
    );

    // Ψ cones: order embedding, codimension, face closure, standard faces
    let cones = psi_family(arr, lat, &span, &s.shards, &s.order);
    check(
        out,
        "psi-codimension: codim ψ(w) equals the descent count",
        (0..lat.len()).all(|w| arr.dim - cones[w].dim == s.order.rank[w]),
        "",
    );
    check(
        out,
        "psi-order-embedding: u ⪯ v iff ψ(u) ⊇ ψ(v)",
        (0..lat.len()).all(|u| {
            (0..lat.len())
                .all(|v| s.order.preceq(u as u32, v as u32) == cones[u].contains_cone(&cones[v]))
        }),
        "",
    );
    let psi_keys: HashSet<_> = cones.iter().map(|c| c.key()).collect();
    check(
        out,
        "psi-face-closure: every face of a shard intersection is a shard intersection",
        cones.iter().all(|c| {
            let (faces, _) = c.faces();
            faces.iter().all(|f| psi_keys.contains(&f.key()))
        }),
        "",
    );
    // minimal face of ψ(w) is the intersection of the minimal standard
    // subarrangement containing its shards
    let mut std_face_ok = true;
    for w in 0..lat.len() as u32 {
        let hyps: BTreeSet<u8> = s.order.labels[w as usize]
            .iter()
            .map(|i| s.shards.shards[i].hyperplane)
            .collect();
        let mut k_min: Option<Vec<u8>> = None;
        'sizes: for size in 0..=lat.basic.len() {
            for subset in subsets_of(&lat.basic, size) {
                let closure = if subset.is_empty() { 0 } else { span(&subset) };
                if hyps.iter().all(|&h| closure & (1 << h) != 0) {
                    k_min = Some(subset);
                    break 'sizes;
                }
            }
        }
        let k = k_min.expect("full basic set always contains the shards");
        let rows: Vec<Vec<F>> = k.iter().map(|&h| arr.normals[h as usize].clone()).collect();
        let expected = crate::num::row_space_canonical(&crate::num::kernel_basis(&rows, arr.dim));
        if cones[w as usize].lineality != expected {
            std_face_ok = false;
        }
    }
    check(
        out,
        "psi-standard-face: the minimal face of ψ(w) is the intersection of its minimal standard subarrangement",
        std_face_ok,
        "",
    );

    // fan face counts match the geometric enumeration
    let mut geo_count_by_codim: HashMap<usize, usize> = HashMap::new();
    let mut seen: HashSet<crate::geom::ConeKey<F>> = HashSet::new();
    for x in 0..lat.len() as u32 {
        let sep = BitSet::from_iter_bits(
            lat.n_hyp,
            (0..lat.n_hyp).filter(|&i| lat.sep[x as usize] & (1 << i) != 0),
        );
        let cone = arr.region_cone(&sep);
        let (faces, _) = cone.faces();
        for f in faces {
            if seen.insert(f.key()) {
                *geo_count_by_codim.entry(arr.dim - f.dim).or_insert(0) += 1;
            }
        }
    }
    let comb_faces = coxeter_fan_faces(g);
    let mut comb_by_codim: HashMap<usize, usize> = HashMap::new();
    for f in &comb_faces {
        *comb_by_codim.entry(f.gens.count_ones() as usize).or_insert(0) += 1;
    }
    check(
        out,
        "fan-faces-geometric: coset faces match the exact face enumeration by codimension",
        geo_count_by_codim == comb_by_codim,
        format!("{comb_by_codim:?}"),
    );
}

fn subsets_of(items: &[u8], size: usize) -> Vec<Vec<u8>> {
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
    let mut out = Vec::new();
    rec(items, 0, size, &mut Vec::new(), &mut out);
    out
}

/// Congruence-engine invariants, for the congruence generated by the given
/// join-irreducibles.
pub fn verify_congruence(s: &Suite, generators: &[u32], mode: GeometryMode) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;
    let span = |hyps: &[u8]| g.span_closure(hyps);

    let cong = match generate_congruence(lat, &s.shards, &s.dg, generators) {
        Ok(c) => c,
        Err(e) => {
            check(&mut out, "congruence-generation", false, e.to_string());
            return out;
        }
    };
    check(
        &mut out,
        "congruence-axioms: classes are intervals with order-preserving projections",
        true,
        format!("{} classes", cong.n_classes()),
    );

    let generic = generate_congruence_generic(lat, &s.shards, generators);
    check(
        &mut out,
        "congruence-closure-routes: shard-digraph closure equals the generic lattice closure",
        generic.removed == cong.removed && generic.class_bottom == cong.class_bottom,
        "",
    );

    check(
        &mut out,
        "forcing-closure: arrows out of removed shards stay removed",
        s.dg
            .arrows
            .iter()
            .all(|&(a, b)| !cong.removed.contains(a) || cong.removed.contains(b)),
        "",
    );

    let qlat = cong.quotient_poset(lat);
    check(&mut out, "quotient-lattice", qlat.is_lattice(), "");
    let covers = qlat.cover_lists();
    check(
        &mut out,
        "quotient-cover-counts: classes covered match the bottom's lower covers",
        cong
            .bottoms
            .iter()
            .enumerate()
            .all(|(i, &b)| covers[i].len() == lat.down[b as usize].len()),
        "",
    );

    check(
        &mut out,
        "bottom-characterization: bottoms have no contracted canonical joinand",
        (0..lat.len() as u32).all(|x| {
            let is_bottom = cong.class_bottom[x as usize] == x;
            let clean = lat.down[x as usize]
                .iter()
                .all(|&(q, _)| !cong.is_contracted(&s.shards, q, x));
            is_bottom == clean
        }),
        "",
    );

    let qso = quotient_shard_order(lat, &s.shards, &cong);
    check(
        &mut out,
        "quotient-shard-order-restriction: quotient labels order equals the restriction of ⪯",
        (0..qso.bottoms.len()).all(|i| {
            (0..qso.bottoms.len()).all(|j| {
                qso.labels[i].is_subset(&qso.labels[j])
                    == s.order.preceq(qso.bottoms[i], qso.bottoms[j])
            })
        }),
        "",
    );
    check(
        &mut out,
        "quotient-join-sublattice: joins of bottoms agree with the full shard order",
        {
            let mut ok = qso.poset.is_lattice();
            if ok {
                'outer: for i in 0..qso.bottoms.len() {
                    for j in 0..qso.bottoms.len() {
                        let jq = qso.poset.join(i, j).unwrap();
                        let jf = s
                            .order
                            .poset
                            .join(qso.bottoms[i] as usize, qso.bottoms[j] as usize);
                        if jf != Some(qso.bottoms[jq] as usize) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            ok
        },
        "",
    );
    check(
        &mut out,
        "quotient-graded-atomic-coatomic",
        qso.poset
            .grading()
            .is_some_and(|gr| (0..qso.bottoms.len()).all(|i| gr[i] == qso.rank[i]))
            && qso.poset.is_atomic()
            && qso.poset.is_coatomic(),
        "",
    );

    let qm_direct = qso
        .poset
        .mobius(qso.index_of[&lat.bottom()], qso.poset.top().unwrap());
    let qm_ie = quotient_mobius_incl_excl(lat, &s.shards, &span, &cong);
    check(
        &mut out,
        "quotient-mobius: recursion equals inclusion-exclusion over unremoved basics",
        qm_direct == qm_ie,
        format!("recursion {qm_direct}, inclusion-exclusion {qm_ie}"),
    );

    // lower intervals of the quotient are quotient shard orders of worlds
    let dm = DeltaMap::new(lat, &s.shards, &cong);
    check(
        &mut out,
        "quotient-lower-intervals: lower intervals are sub-world quotient shard orders",
        (0..qso.bottoms.len()).all(|i| {
            let z = qso.bottoms[i];
            let world = dm.world_poset(z);
            let members: Vec<usize> = (0..qso.bottoms.len())
                .filter(|&j| qso.labels[j].is_subset(&qso.labels[i]))
                .collect();
            let interval = qso.poset.induced(&members);
            interval.isomorphism(&world).is_some()
        }),
        "",
    );

    // a sublattice quotient must be generated in degree at most two
    let sublattice = crate::congruence::quotient_is_sublattice(&qso, &s.order.poset);
    check(
        &mut out,
        "degree-two-criterion: sublattice quotients are generated in degree at most two",
        !sublattice
            || crate::congruence::congruence_degree_at_most(lat, &s.shards, &s.dg, &span, &cong, 2),
        if sublattice {
            "quotient is a sublattice"
        } else {
            "quotient is not a sublattice; criterion vacuous"
        },
    );

    if s.geometry_active(mode) {
        let r = match &g.geom {
            GroupGeom::Rat(l) => verify_quotient_geometry(s, &l.arrangement, &cong, &qso),
            GroupGeom::Rt5(l) => verify_quotient_geometry(s, &l.arrangement, &cong, &qso),
        };
        out.extend(r);
    }
    out
}

fn verify_quotient_geometry<F: Scalar>(
    s: &Suite,
    arr: &Arrangement<F>,
    cong: &Congruence,
    qso: &crate::congruence::QuotientShardOrder,
) -> Vec<Check> {
    let mut out = Vec::new();
    let lat = &s.group.lattice;
    match quotient_fan(arr, lat, cong) {
        Ok(fan) => {
            check(
                &mut out,
                "quotient-fan-intervals: faces of the quotient fan are intervals of maximal cones",
                true,
                format!("{} faces", fan.faces.len()),
            );
            // class cones partition the regions
            let mut partition_ok = true;
            for x in 0..lat.len() as u32 {
                let sep = BitSet::from_iter_bits(
                    lat.n_hyp,
                    (0..lat.n_hyp).filter(|&i| lat.sep[x as usize] & (1 << i) != 0),
                );
                let p = arr.region_cone(&sep).interior_rep();
                for (i, mc) in fan.max_cones.iter().enumerate() {
                    let inside = mc.contains_point(&p);
                    let same = cong.bottoms[i] == cong.class_bottom[x as usize];
                    if inside != same {
                        partition_ok = false;
                    }
                }
            }
            check(
                &mut out,
                "quotient-cone-facets: class cones partition space with the prescribed facets",
                partition_ok
                    && cong.bottoms.iter().enumerate().all(|(i, &b)| {
                        let t = cong.class_top[b as usize];
                        fan.max_cones[i].ineq.len()
                            == lat.down[b as usize].len() + lat.up[t as usize].len()
                    }),
                "",
            );
        }
        Err(e) => check(&mut out, "quotient-fan-intervals", false, e.to_string()),
    }

    match quotient_triangulation(arr, lat, cong) {
        Ok(tri) => {
            let closure = simplex_closure(&tri);
            let fv = f_vector(&closure);
            let chains = qso.poset.chain_count_by_size();
            check(
                &mut out,
                "quotient-chain-triangulation: order-complex f-vector equals the pulling triangulation",
                fv == chains,
                format!("f-vector {fv:?}"),
            );
            let dm = DeltaMap::new(lat, &s.shards, cong);
            let mut ok = true;
            let mut images = BTreeSet::new();
            for ch in enumerate_chains(&qso.poset) {
                let elems: Vec<u32> = ch.iter().map(|&i| qso.bottoms[i]).collect();
                let img = dm.delta(&elems);
                if img.len() != elems.len() {
                    ok = false;
                }
                if !ch.is_empty() && (!closure.contains(&img) || !images.insert(img.clone())) {
                    ok = false;
                }
                let mut sorted = elems.clone();
                sorted.sort_by_key(|&x| (lat.down[x as usize].len(), x));
                if dm.gamma(&img) != sorted {
                    ok = false;
                }
            }
            ok &= images.len() == closure.len();
            check(
                &mut out,
                "quotient-delta-bijection: restricted chains map bijectively to the quotient triangulation",
                ok,
                "",
            );
        }
        Err(e) => check(&mut out, "quotient-chain-triangulation", false, e.to_string()),
    }
    out
}

/// Cambrian and noncrossing-partition invariants for one Coxeter element.
pub fn verify_cambrian(s: &Suite, order: &[u8], mode: GeometryMode) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;

    let camb = match cambrian_congruence(g, &s.shards, &s.dg, order) {
        Ok(c) => c,
        Err(e) => {
            check(&mut out, "cambrian-congruence", false, e.to_string());
            return out;
        }
    };
    let nc = build_nc(g, camb.c);

    check(
        &mut out,
        "sortable-noncrossing-counts: two independent enumerations agree",
        camb.sortables.len() == nc.elements.len(),
        format!("{} elements", nc.elements.len()),
    );
    check(
        &mut out,
        "one-unremoved-shard: each hyperplane keeps exactly one shard",
        one_unremoved_shard_per_hyperplane(lat.n_hyp, &s.shards, &camb.theta),
        "",
    );
    check(
        &mut out,
        "noncrossing-lattice: the interval [1, c] in absolute order is a lattice",
        nc.poset.is_lattice(),
        "",
    );
    check(
        &mut out,
        "noncrossing-graded-self-dual",
        nc.poset
            .grading()
            .is_some_and(|gr| (0..nc.elements.len()).all(|i| gr[i] == nc.rank[i]))
            && nc.elements.iter().all(|&x| {
                let xc = g.mult(g.inverse(x), nc.c);
                nc.index_of.contains_key(&xc)
            }),
        "",
    );
    let report = verify_isomorphism(g, &s.shards, &s.order.poset, &camb, &nc);
    for (name, ok) in &report.checks {
        check(&mut out, &format!("nc-isomorphism: {name}"), *ok, "");
    }
    let (m_direct, m_count) = nc_mobius_two_ways(g, &nc);
    check(
        &mut out,
        "noncrossing-mobius: recursion equals the signed full-support count",
        m_direct == m_count,
        format!("recursion {m_direct}, count {m_count}"),
    );

    out.extend(verify_congruence(s, &camb.generators, mode));

    if s.geometry_active(mode) {
        match &g.geom {
            GroupGeom::Rat(l) => verify_cambrian_geometry(s, &l.arrangement, &camb, &mut out),
            GroupGeom::Rt5(l) => verify_cambrian_geometry(s, &l.arrangement, &camb, &mut out),
        }
    }
    out
}

fn verify_cambrian_geometry<F: Scalar>(
    s: &Suite,
    arr: &Arrangement<F>,
    camb: &CambrianData,
    out: &mut Vec<Check>,
) {
    let g = s.group;
    let lat = &g.lattice;
    let span = |hyps: &[u8]| g.span_closure(hyps);
    let qso = quotient_shard_order(lat, &s.shards, &camb.theta);

    // Brady-Watt style restriction for bipartite Coxeter elements
    match bipartite_cone_restriction(arr, g, &s.shards, camb, &qso, &span) {
        Ok(cones) => {
            let restricted =
                PosetView::from_leq(cones.len(), |i, j| cones[i].contains_cone(&cones[j]));
            check(
                out,
                "bipartite-restriction: cut cones reproduce the quotient shard order",
                restricted.isomorphism(&qso.poset).is_some(),
                format!("{} cones", cones.len()),
            );
        }
        Err(crate::cambrian::NcError::NotBipartite(_)) => {}
        Err(e) => check(out, "bipartite-restriction", false, e.to_string()),
    }

    // star of each ray of a rank-3 Cambrian fan is a rank-2 Cambrian fan
    if g.ctype.rank() == 3 {
        if let Ok(fan) = quotient_fan(arr, lat, &camb.theta) {
            let mut ok = true;
            for (i, (face, _, d)) in fan.faces.iter().enumerate() {
                if *d != arr.dim - 2 {
                    continue; // rays in the essential case
                }
                if face.rays.is_empty() {
                    continue;
                }
                // maximal cones containing the ray
                let stars: Vec<usize> = (0..fan.max_cones.len())
                    .filter(|&c| fan.max_cones[c].contains_cone(face))
                    .collect();
                if stars.len() < 4 {
                    ok = false;
                    continue;
                }
                // adjacency within the star: sharing a wall that contains
                // the ray
                let mut degrees = vec![0usize; stars.len()];
                for a in 0..stars.len() {
                    for b in (a + 1)..stars.len() {
                        let wall = fan.max_cones[stars[a]].intersect(&fan.max_cones[stars[b]]);
                        if wall.dim == arr.dim - 1 && wall.contains_cone(face) {
                            degrees[a] += 1;
                            degrees[b] += 1;
                        }
                    }
                }
                if !degrees.iter().all(|&d| d == 2) {
                    ok = false;
                }
                let _ = i;
            }
            check(
                out,
                "cambrian-ray-stars: each ray's star is a complete rank-2 Cambrian fan",
                ok,
                "",
            );
        }
    }
}

/// The parabolic-congruence homomorphism checks for one subset of the basic
/// hyperplanes.
pub fn verify_parabolic(s: &Suite, k: &[u8]) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;
    let span = |hyps: &[u8]| g.span_closure(hyps);
    match parabolic_congruence(lat, &s.shards, &span, k) {
        Ok(cong) => {
            let closure = if k.is_empty() { 0 } else { span(k) };
            let expected = lat.sep.iter().filter(|&&ss| ss & !closure == 0).count();
            let mut hom_ok = true;
            for x in 0..lat.len() as u32 {
                for y in 0..lat.len() as u32 {
                    let pm = cong.class_bottom[lat.meet(x, y) as usize];
                    let qm = lat.meet(
                        cong.class_bottom[x as usize],
                        cong.class_bottom[y as usize],
                    );
                    let pj = cong.class_bottom[lat.join(x, y) as usize];
                    let qj = lat.join(
                        cong.class_bottom[x as usize],
                        cong.class_bottom[y as usize],
                    );
                    if pm != qm || pj != qj {
                        hom_ok = false;
                    }
                }
            }
            check(
                &mut out,
                "parabolic-quotient: projection is a lattice homomorphism onto the subarrangement order",
                hom_ok && cong.n_classes() == expected,
                format!("{} classes", cong.n_classes()),
            );
            check(
                &mut out,
                "parabolic-removed-shards: exactly the shards outside the standard subarrangement",
                s.shards.shards.iter().enumerate().all(|(i, sh)| {
                    cong.removed.contains(i) == (closure & (1u64 << sh.hyperplane) == 0)
                }),
                "",
            );
        }
        Err(e) => check(&mut out, "parabolic-quotient", false, e.to_string()),
    }
    out
}

/// Subcomplex probe instances; exploratory.
pub fn verify_subcomplex_probe(s: &Suite) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;
    if g.ctype.to_string() != "A3" {
        return out;
    }
    let GroupGeom::Rat(layer) = &g.geom else {
        return out;
    };
    let id = generate_congruence(lat, &s.shards, &s.dg, &[]).unwrap();
    let full = simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &id).unwrap());
    let g3124 = g.from_one_line(&[3, 1, 2, 4]).unwrap();
    let g1342 = g.from_one_line(&[1, 3, 4, 2]).unwrap();
    let camb = generate_congruence(lat, &s.shards, &s.dg, &[g3124, g1342]).unwrap();
    let camb_tri =
        simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &camb).unwrap());
    check(
        &mut out,
        "subcomplex-probe-cambrian: the Cambrian triangulation is an induced subcomplex",
        subcomplex_probe(&full, &camb_tri, &camb.bottoms),
        "",
    );
    let w2143 = g.from_one_line(&[2, 1, 4, 3]).unwrap();
    let w2413 = g.from_one_line(&[2, 4, 1, 3]).unwrap();
    let h = lat.up[w2143 as usize]
        .iter()
        .find(|&&(e, _)| e == w2413)
        .map(|&(_, h)| h)
        .unwrap();
    let ji = lat.ji_of_cover(w2413, h, None);
    let single = generate_congruence(lat, &s.shards, &s.dg, &[ji]).unwrap();
    let single_tri =
        simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &single).unwrap());
    check(
        &mut out,
        "subcomplex-probe-single-edge: the one-edge contraction is not a subcomplex",
        !subcomplex_probe(&full, &single_tri, &single.bottoms),
        "",
    );
    out
}

/// Fiber-poset checks: U-fibers reproduce the intersection lattice and the
/// face-to-cone map is a surjective order reversal.
pub fn verify_fiber_posets(s: &Suite) -> Vec<Check> {
    let mut out = Vec::new();
    let g = s.group;
    let lat = &g.lattice;
    let (subs, int_poset) = intersection_lattice(g);
    let fiber_of: Vec<usize> = (0..lat.len() as u32)
        .map(|w| {
            let u = u_subspace(g, &s.shards, &s.order.labels[w as usize]);
            subs.iter().position(|sub| sub == &u).expect("U lands in Int(A)")
        })
        .collect();
    let hit: HashSet<usize> = fiber_of.iter().copied().collect();
    let mut order_ok = true;
    for a in 0..subs.len() {
        for b in 0..subs.len() {
            let fiber_le = (0..lat.len() as u32).any(|u| {
                (0..lat.len() as u32).any(|v| {
                    fiber_of[u as usize] == a
                        && fiber_of[v as usize] == b
                        && s.order.preceq(u, v)
                })
            });
            if fiber_le != int_poset.leq(a, b) {
                order_ok = false;
            }
        }
    }
    check(
        &mut out,
        "intersection-lattice-fibers: U-fibers of the shard order reproduce Int(A)",
        hit.len() == subs.len() && order_ok,
        format!("{} subspaces", subs.len()),
    );

    // face ↦ shard-intersection map: surjective and order-reversing
    let faces = coxeter_fan_faces(g);
    let gamma_elem: Vec<u32> = faces
        .iter()
        .map(|f| {
            let top = *f.members.last().unwrap();
            let member_set: HashSet<u32> = f.members.iter().copied().collect();
            let jis: Vec<u32> = lat.down[top as usize]
                .iter()
                .filter(|&&(q, _)| member_set.contains(&q))
                .map(|&(_, h)| lat.ji_of_cover(top, h, None))
                .collect();
            lat.join_all(jis)
        })
        .collect();
    let surjective: HashSet<u32> = gamma_elem.iter().copied().collect();
    let mut reversing = true;
    for (i, fi) in faces.iter().enumerate() {
        for (j, fj) in faces.iter().enumerate() {
            // fi ⊆ fj as cones ⟺ members(fi) ⊇ members(fj)
            if crate::triangulation::fan_face_contains(fi, fj)
                && !s.order.preceq(gamma_elem[j], gamma_elem[i])
            {
                reversing = false;
            }
        }
    }
    check(
        &mut out,
        "face-to-cone-map: surjective onto the shard order and order-reversing",
        surjective.len() == lat.len() && reversing,
        "",
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_all(t: &str) -> Vec<Check> {
        let g = CoxGroup::build(&CoxeterType::parse(t).unwrap()).unwrap();
        let s = Suite::new(&g);
        let mut checks = verify_core(&s, GeometryMode::Auto);
        checks.extend(verify_fiber_posets(&s));
        checks.extend(verify_subcomplex_probe(&s));
        // a parabolic and the first Coxeter element
        let basics = g.lattice.basic.clone();
        checks.extend(verify_parabolic(&s, &basics[..basics.len() - 1]));
        let order: Vec<u8> = (0..g.n_gens as u8).collect();
        checks.extend(verify_cambrian(&s, &order, GeometryMode::Auto));
        checks
    }

    #[test]
    fn full_suites_pass_small_types() {
        for t in ["A2", "B2", "A1xA1", "I2(5)"] {
            let failed: Vec<String> = run_all(t)
                .into_iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{t}: {} ({})", c.name, c.detail))
                .collect();
            assert!(failed.is_empty(), "{failed:?}");
        }
    }

    #[test]
    fn full_suite_passes_a3() {
        let failed: Vec<String> = run_all("A3")
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
