//! Acceptance suite: every criterion prints one pass/fail line (run with
//! `--nocapture` to see them) and asserts its pinned values and time bound.

use std::collections::HashSet;
#[allow(unused_imports)]
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use shardlab::cambrian::{
    build_nc, cambrian_congruence, nc_mobius_two_ways, verify_isomorphism,
};
use shardlab::congruence::{
    closures_agree_on_all_single_generators, generate_congruence, quotient_shard_order,
};
use shardlab::coxeter::{CoxGroup, CoxeterType, GroupGeom};
use shardlab::poset::BitSet;
use shardlab::shardorder::{
    maximal_chain_count_recursion, mobius_inclusion_exclusion, psi_family, ShardOrder,
};
use shardlab::shards::{geometric_cover_partition, ShardDigraph, ShardSet};
use shardlab::triangulation::{
    coxeter_fan_faces, enumerate_chains, f_vector, pulling_triangulation, quotient_fan,
    quotient_triangulation, shelling_interval_partition, simplex_closure, subcomplex_probe,
    zonotope_complex, DeltaMap,
};
use shardlab::verify::canonical_join_rep_oracle;

struct Pipeline {
    group: CoxGroup,
    shards: ShardSet,
    dg: ShardDigraph,
    order: ShardOrder,
}

fn pipeline(t: &str) -> Pipeline {
    let group = CoxGroup::build(&CoxeterType::parse(t).unwrap()).unwrap();
    let shards = ShardSet::compute(&group.lattice);
    let span = |hyps: &[u8]| group.span_closure(hyps);
    let dg = ShardDigraph::build(&group.lattice, &shards, &span);
    let order = ShardOrder::build(&group.lattice, &shards);
    Pipeline {
        group,
        shards,
        dg,
        order,
    }
}

fn report(criterion: u32, what: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance criterion {criterion}: PASS — {what} ({elapsed:?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its time budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_01_shard_counts() {
    let t0 = Instant::now();
    let p5 = pipeline("I2(5)");
    assert_eq!(p5.shards.len(), 8);
    assert_eq!(p5.group.order(), 10); // |Ψ| = |W|
    let p3 = pipeline("A3");
    assert_eq!(p3.shards.len(), 11);
    assert_eq!(p3.order.rank_polynomial(), vec![1, 11, 11, 1]);
    // Ψ sizes by codimension, geometrically
    let GroupGeom::Rat(layer) = &p3.group.geom else {
        panic!()
    };
    let span = |hyps: &[u8]| p3.group.span_closure(hyps);
    let cones = psi_family(&layer.arrangement, &p3.group.lattice, &span, &p3.shards, &p3.order);
    let mut by_codim = [0usize; 4];
    for c in &cones {
        by_codim[layer.arrangement.dim - c.dim] += 1;
    }
    assert_eq!(by_codim, [1, 11, 11, 1]);
    report(
        1,
        "I2(5): 8 shards, |Ψ| = 10; A3: 11 shards, Ψ by codim (1,11,11,1)",
        t0,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_02_canonical_join_representations() {
    let t0 = Instant::now();
    let p = pipeline("A3");
    let w4312 = p.group.from_one_line(&[4, 3, 1, 2]).unwrap();
    let mut can: Vec<Vec<u8>> = p
        .group
        .lattice
        .canonical_join_rep(w4312)
        .iter()
        .map(|&j| p.group.one_line(j).unwrap())
        .collect();
    can.sort();
    assert_eq!(can, vec![vec![1, 2, 4, 3], vec![3, 1, 2, 4]]);
    for t in ["A2", "A3", "I2(5)"] {
        let q = pipeline(t);
        assert!(
            canonical_join_rep_oracle(&q.group.lattice),
            "{t}: antichain oracle"
        );
    }
    report(
        2,
        "Can(4312) = {3124, 1243}; minimal-antichain oracle on S3, S4, I2(5)",
        t0,
        Duration::from_secs(10),
    );
}

const DESK_TYPES: [&str; 14] = [
    "A1", "A2", "A3", "B2", "B3", "I2(2)", "I2(3)", "I2(4)", "I2(5)", "I2(6)", "I2(7)", "I2(8)",
    "A1xA1", "A1xA1xA1",
];

#[test]
fn criterion_03_shard_order_structure() {
    let t0 = Instant::now();
    for t in DESK_TYPES {
        let p = pipeline(t);
        assert!(p.order.poset.is_lattice(), "{t}: lattice");
        let grading = p.order.poset.grading().unwrap_or_else(|| panic!("{t}: graded"));
        for x in 0..p.group.order() {
            assert_eq!(grading[x], p.order.rank[x], "{t}: rank = descents");
            assert_eq!(
                p.order.rank[x],
                p.group.descents(x as u32).len(),
                "{t}: descents"
            );
        }
        assert!(p.order.poset.is_atomic(), "{t}: atomic");
        assert!(p.order.poset.is_coatomic(), "{t}: coatomic");
        for u in 0..p.group.order() as u32 {
            for v in 0..p.group.order() as u32 {
                if p.order.preceq(u, v) {
                    assert!(p.group.lattice.leq(u, v), "{t}: weaker than weak order");
                }
            }
        }
    }
    let a2 = pipeline("A2");
    assert_eq!(a2.order.rank_polynomial(), vec![1, 4, 1]);
    let a3 = pipeline("A3");
    assert_eq!(a3.order.rank_polynomial(), vec![1, 11, 11, 1]);
    report(
        3,
        "graded lattice, rank = descent count, atomic, coatomic, weaker than weak order",
        t0,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_mobius_two_routes() {
    let t0 = Instant::now();
    for t in DESK_TYPES {
        let p = pipeline(t);
        let span = |hyps: &[u8]| p.group.span_closure(hyps);
        let direct = p.order.mobius_direct();
        let ie = mobius_inclusion_exclusion(&p.group.lattice, &span);
        assert_eq!(direct, ie, "{t}: Möbius routes");
        if t == "A3" {
            assert_eq!(direct, -13);
        }
    }
    report(
        4,
        "Möbius recursion equals parabolic inclusion-exclusion; S4 value -13",
        t0,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_05_maximal_chain_recursion() {
    let t0 = Instant::now();
    for t in DESK_TYPES {
        let p = pipeline(t);
        let direct = p.order.maximal_chain_count_direct();
        let rec = maximal_chain_count_recursion(&p.group.ctype);
        assert_eq!(direct, rec, "{t}: chain-count routes");
        if t == "A3" {
            assert_eq!(direct, 34);
        }
    }
    report(
        5,
        "DFS chain count equals the parabolic recursion; S4 value 34",
        t0,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_06_congruence_engine() {
    let t0 = Instant::now();
    for t in ["A2", "A3", "I2(5)"] {
        let p = pipeline(t);
        assert!(
            closures_agree_on_all_single_generators(&p.group.lattice, &p.shards, &p.dg),
            "{t}: closures agree (class intervals and monotone projections are asserted inside)"
        );
    }
    let p = pipeline("A3");
    let g3124 = p.group.from_one_line(&[3, 1, 2, 4]).unwrap();
    let g1342 = p.group.from_one_line(&[1, 3, 4, 2]).unwrap();
    let cong =
        generate_congruence(&p.group.lattice, &p.shards, &p.dg, &[g3124, g1342]).unwrap();
    let mut contracted: Vec<Vec<u8>> = cong
        .contracted_jis(&p.shards)
        .iter()
        .map(|&j| p.group.one_line(j).unwrap())
        .collect();
    contracted.sort();
    let mut expected = [
        vec![3, 1, 2, 4],
        vec![1, 3, 4, 2],
        vec![2, 3, 4, 1],
        vec![4, 1, 2, 3],
        vec![3, 4, 1, 2],
    ];
    expected.sort();
    assert_eq!(contracted, expected);
    report(
        6,
        "shard-digraph closure = generic closure (all single generators of S3, S4, I2(5)); S4 Cambrian closure {3124,1342} -> 5 join-irreducibles",
        t0,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_07_cambrian_noncrossing() {
    let t0 = Instant::now();
    let catalan: &[(&str, usize)] = &[("A2", 5), ("A3", 14), ("B2", 6), ("B3", 20)];
    for &(t, count) in catalan {
        let p = pipeline(t);
        let order: Vec<u8> = (0..p.group.n_gens as u8).collect();
        let camb = cambrian_congruence(&p.group, &p.shards, &p.dg, &order).unwrap();
        let nc = build_nc(&p.group, camb.c);
        assert_eq!(camb.sortables.len(), count, "{t}: sortables");
        assert_eq!(nc.elements.len(), count, "{t}: noncrossing partitions");
    }
    for m in 2..=8u32 {
        let t = format!("I2({m})");
        let p = pipeline(&t);
        let camb = cambrian_congruence(&p.group, &p.shards, &p.dg, &[0, 1]).unwrap();
        let nc = build_nc(&p.group, camb.c);
        assert_eq!(camb.sortables.len(), m as usize + 2, "{t}");
        assert_eq!(nc.elements.len(), m as usize + 2, "{t}");
    }

    // S4 sortables are the permutations avoiding 312, 412, 342, 341
    let p = pipeline("A3");
    let camb = cambrian_congruence(&p.group, &p.shards, &p.dg, &[0, 2, 1]).unwrap();
    assert!(shardlab::cambrian::sortable_pattern_check(&p.group, &camb));

    // isomorphism, sublattice, NC lattice property and Möbius for every
    // Coxeter element of the desk types
    let mut iso_types = vec![
        "A2".to_string(),
        "A3".to_string(),
        "B2".to_string(),
        "B3".to_string(),
    ];
    iso_types.extend((2..=8).map(|m| format!("I2({m})")));
    for t in iso_types {
        let p = pipeline(&t);
        for (_, order) in p.group.all_coxeter_elements() {
            let camb = cambrian_congruence(&p.group, &p.shards, &p.dg, &order).unwrap();
            let nc = build_nc(&p.group, camb.c);
            assert!(nc.poset.is_lattice(), "{t}: NC lattice property");
            let rep = verify_isomorphism(&p.group, &p.shards, &p.order.poset, &camb, &nc);
            assert!(rep.all_pass(), "{t} ({order:?}): {:?}", rep.failed());
            let (direct, counted) = nc_mobius_two_ways(&p.group, &nc);
            assert_eq!(direct, counted, "{t}: NC Möbius routes");
        }
    }
    report(
        7,
        "sortable = noncrossing counts (5/14/6/20, I2(m): m+2); S4 pattern avoidance; nc_c isomorphism and sublattice for every Coxeter element; NC Möbius two routes",
        t0,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_triangulations() {
    let t0 = Instant::now();
    let p = pipeline("A3");
    let lat = &p.group.lattice;

    // permutohedron: 34 maximal simplices, f-vector = chain counts
    let cx = zonotope_complex(&p.group);
    let first = |verts: &[u32]| -> Option<u32> {
        let m = *verts.iter().max_by_key(|&&v| (lat.length(v), v))?;
        verts.iter().all(|&v| lat.leq(v, m)).then_some(m)
    };
    let tri = pulling_triangulation(&cx, &first).unwrap();
    assert_eq!(tri.len(), 34);
    assert_eq!(
        f_vector(&simplex_closure(&tri)),
        p.order.poset.chain_count_by_size()
    );

    // δ round-trips on every chain of (S4, ⪯)
    let id = generate_congruence(lat, &p.shards, &p.dg, &[]).unwrap();
    let dm = DeltaMap::new(lat, &p.shards, &id);
    let closure = simplex_closure(&tri);
    let mut images = std::collections::BTreeSet::new();
    for ch in enumerate_chains(&p.order.poset) {
        let elems: Vec<u32> = ch.iter().map(|&x| x as u32).collect();
        let img = dm.delta(&elems);
        assert_eq!(img.len(), elems.len());
        if !elems.is_empty() {
            assert!(closure.contains(&img));
            assert!(images.insert(img.clone()));
        }
        let mut sorted = elems.clone();
        sorted.sort_by_key(|&x| (p.order.rank[x as usize], x));
        assert_eq!(dm.gamma(&img), sorted);
    }
    assert_eq!(images.len(), closure.len());

    // Cambrian quotient: 16 maximal simplices, f-vector = quotient chains,
    // 14 associahedral cones
    let g3124 = p.group.from_one_line(&[3, 1, 2, 4]).unwrap();
    let g1342 = p.group.from_one_line(&[1, 3, 4, 2]).unwrap();
    let camb = generate_congruence(lat, &p.shards, &p.dg, &[g3124, g1342]).unwrap();
    let GroupGeom::Rat(layer) = &p.group.geom else {
        panic!()
    };
    let qtri = quotient_triangulation(&layer.arrangement, lat, &camb).unwrap();
    assert_eq!(qtri.len(), 16);
    let qso = quotient_shard_order(lat, &p.shards, &camb);
    assert_eq!(
        f_vector(&simplex_closure(&qtri)),
        qso.poset.chain_count_by_size()
    );
    let fan = quotient_fan(&layer.arrangement, lat, &camb).unwrap();
    assert_eq!(fan.max_cones.len(), 14);
    let mut by_dim = [0usize; 4];
    for (_, _, d) in &fan.faces {
        by_dim[*d] += 1;
    }
    assert_eq!(by_dim, [1, 9, 21, 14]);
    report(
        8,
        "34 simplices = chains of (S4,⪯); Cambrian quotient 16 simplices, 14 associahedral cones (9 rays, 21 walls); δ round-trips exactly",
        t0,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_09_geometry_validators() {
    let t0 = Instant::now();
    for t in ["A2", "A3", "B2", "B3"] {
        let p = pipeline(t);
        let lat = &p.group.lattice;
        let span = |hyps: &[u8]| p.group.span_closure(hyps);
        let GroupGeom::Rat(layer) = &p.group.geom else {
            panic!("{t} is crystallographic")
        };
        let arr = &layer.arrangement;

        // geometric shard partition equals the lattice-theoretic partition
        let geo: std::collections::BTreeSet<Vec<(u32, u32)>> =
            geometric_cover_partition(arr, lat, &span)
                .into_values()
                .collect();
        let comb: std::collections::BTreeSet<Vec<(u32, u32)>> =
            p.shards.shards.iter().map(|s| s.covers.clone()).collect();
        assert_eq!(geo, comb, "{t}: shard partitions");

        // codim ψ(w) = #descents and faces of Ψ stay in Ψ
        let cones = psi_family(arr, lat, &span, &p.shards, &p.order);
        let keys: HashSet<_> = cones.iter().map(|c| c.key()).collect();
        for (w, cone) in cones.iter().enumerate() {
            assert_eq!(arr.dim - cone.dim, p.order.rank[w], "{t}: codim");
            let (faces, _) = cone.faces();
            for f in faces {
                assert!(keys.contains(&f.key()), "{t}: face closure");
            }
        }
    }
    // the shelling interval partition covers all 75 faces of the A3 fan
    let p3 = pipeline("A3");
    let faces = coxeter_fan_faces(&p3.group);
    assert_eq!(faces.len(), 75);
    let partition = shelling_interval_partition(&p3.group, &faces).unwrap();
    assert_eq!(partition.values().sum::<usize>(), 75);
    assert_eq!(partition.len(), 24);
    report(
        9,
        "rank ≤ 3 crystallographic: shard partitions agree, codim ψ = descents, Ψ face closure, 75-face shelling partition",
        t0,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_10_subcomplex_probe() {
    let t0 = Instant::now();
    let p = pipeline("A3");
    let lat = &p.group.lattice;
    let GroupGeom::Rat(layer) = &p.group.geom else {
        panic!()
    };
    let id = generate_congruence(lat, &p.shards, &p.dg, &[]).unwrap();
    let full = simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &id).unwrap());

    let g3124 = p.group.from_one_line(&[3, 1, 2, 4]).unwrap();
    let g1342 = p.group.from_one_line(&[1, 3, 4, 2]).unwrap();
    let camb = generate_congruence(lat, &p.shards, &p.dg, &[g3124, g1342]).unwrap();
    let camb_tri =
        simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &camb).unwrap());
    assert!(subcomplex_probe(&full, &camb_tri, &camb.bottoms));

    let w2143 = p.group.from_one_line(&[2, 1, 4, 3]).unwrap();
    let w2413 = p.group.from_one_line(&[2, 4, 1, 3]).unwrap();
    let h = lat.up[w2143 as usize]
        .iter()
        .find(|&&(e, _)| e == w2413)
        .map(|&(_, h)| h)
        .unwrap();
    let ji = lat.ji_of_cover(w2413, h, None);
    let single = generate_congruence(lat, &p.shards, &p.dg, &[ji]).unwrap();
    assert_eq!(single.removed.count(), 1);
    let single_tri =
        simplex_closure(&quotient_triangulation(&layer.arrangement, lat, &single).unwrap());
    assert!(!subcomplex_probe(&full, &single_tri, &single.bottoms));
    report(
        10,
        "Cambrian triangulation is an induced subcomplex; the 2143⋖2413 contraction is not",
        t0,
        Duration::from_secs(30),
    );
}

/// Extra: the region/element bijection against the exact geometry, and the
/// sign-vector region-count oracle (backing criterion 9's validators).
#[test]
fn geometry_region_bijection() {
    for t in ["A2", "A3", "B2", "B3", "I2(5)"] {
        let p = pipeline(t);
        let lat = &p.group.lattice;
        let seps: std::collections::BTreeSet<u64> = lat.sep.iter().copied().collect();
        match &p.group.geom {
            GroupGeom::Rat(l) => {
                let geo: std::collections::BTreeSet<u64> = l
                    .arrangement
                    .regions()
                    .unwrap()
                    .iter()
                    .map(|r| r.sep.iter().fold(0u64, |m, i| m | (1 << i)))
                    .collect();
                assert_eq!(geo, seps, "{t}");
            }
            GroupGeom::Rt5(l) => {
                let geo: std::collections::BTreeSet<u64> = l
                    .arrangement
                    .regions()
                    .unwrap()
                    .iter()
                    .map(|r| r.sep.iter().fold(0u64, |m, i| m | (1 << i)))
                    .collect();
                assert_eq!(geo, seps, "{t}");
            }
        }
        // sign-vector oracle
        if lat.n_hyp <= 9 {
            let count = match &p.group.geom {
                GroupGeom::Rat(l) => (0u64..(1 << lat.n_hyp))
                    .filter(|&mask| {
                        let sep = BitSet::from_iter_bits(
                            lat.n_hyp,
                            (0..lat.n_hyp).filter(|&i| mask & (1 << i) != 0),
                        );
                        l.arrangement.region_cone(&sep).dim == l.arrangement.dim
                    })
                    .count(),
                GroupGeom::Rt5(l) => (0u64..(1 << lat.n_hyp))
                    .filter(|&mask| {
                        let sep = BitSet::from_iter_bits(
                            lat.n_hyp,
                            (0..lat.n_hyp).filter(|&i| mask & (1 << i) != 0),
                        );
                        l.arrangement.region_cone(&sep).dim == l.arrangement.dim
                    })
                    .count(),
            };
            assert_eq!(count, lat.len(), "{t}: sign-vector region count");
        }
    }
}
