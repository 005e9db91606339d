//! Cambrian congruences, sortable elements, the absolute order, noncrossing
//! partition lattices NC_c(W), and the isomorphism between the quotient
//! shard order on sortables and NC_c(W).

use std::collections::{HashMap, HashSet};

use crate::congruence::{
    generate_congruence, quotient_shard_order, Congruence, CongruenceError, QuotientShardOrder,
};
use crate::coxeter::CoxGroup;
use crate::geom::{Arrangement, Cone};
use crate::num::{vec_neg, Scalar};
use crate::poset::PosetView;
use crate::shards::{shard_cone, ShardDigraph, ShardSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum NcError {
    #[error("no noncrossing partition has the fixed space of sortable {0}")]
    NoPreimage(u32),
    #[error("fixed-space match for sortable {0} is not unique")]
    NonUnique(u32),
    #[error("generator {0} is neither initial nor final in c")]
    NotBipartite(u8),
}

/// A Cambrian congruence with its sortable elements.
pub struct CambrianData {
    pub order: Vec<u8>,
    pub c: u32,
    pub generators: Vec<u32>,
    pub theta: Congruence,
    pub sortables: Vec<u32>,
}

/// The generating join-irreducible words of the Cambrian congruence for the
/// given generator ordering: for every pair i < j in the order, the words
/// alternating s_j s_i s_j ⋯ of length 2 to m(s_i, s_j) − 1.
pub fn cambrian_generator_words(cox_mat: &[Vec<u32>], order: &[u8]) -> Vec<Vec<u8>> {
    let n = order.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (si, sj) = (order[i], order[j]);
            let m = cox_mat[si as usize][sj as usize];
            for len in 2..m {
                let word: Vec<u8> = (0..len)
                    .map(|k| if k % 2 == 0 { sj } else { si })
                    .collect();
                out.push(word);
            }
        }
    }
    out
}

pub fn cambrian_congruence(
    group: &CoxGroup,
    shards: &ShardSet,
    dg: &ShardDigraph,
    order: &[u8],
) -> Result<CambrianData, CongruenceError> {
    let c = group.coxeter_element(order);
    let words = cambrian_generator_words(&group.cox_mat, order);
    let generators: Vec<u32> = words.iter().map(|w| group.element_from_word(w)).collect();
    for &g in &generators {
        debug_assert_eq!(group.lattice.down[g as usize].len(), 1);
    }
    let theta = generate_congruence(&group.lattice, shards, dg, &generators)?;
    let sortables = theta.bottoms.clone();
    Ok(CambrianData {
        order: order.to_vec(),
        c,
        generators,
        theta,
        sortables,
    })
}

/// Each hyperplane carries exactly one shard not removed by a Cambrian
/// congruence.
pub fn one_unremoved_shard_per_hyperplane(
    n_hyp: usize,
    shards: &ShardSet,
    theta: &Congruence,
) -> bool {
    (0..n_hyp as u8).all(|h| {
        shards
            .shards
            .iter()
            .enumerate()
            .filter(|(i, s)| s.hyperplane == h && !theta.removed.contains(*i))
            .count()
            == 1
    })
}

/// For S₄ with c = s1 s3 s2: the sortable elements are exactly the
/// permutations avoiding 312, 412, 342 and 341 as literal subsequences of
/// the one-line notation. Returns whether both enumerations agree.
pub fn sortable_pattern_check(group: &CoxGroup, camb: &CambrianData) -> bool {
    assert_eq!(group.ctype.to_string(), "A3", "pattern check is specific to S4");
    assert_eq!(camb.order, vec![0, 2, 1], "pattern check needs c = s1 s3 s2");
    let avoid = |line: &[u8]| -> bool {
        [[3u8, 1, 2], [4, 1, 2], [3, 4, 2], [3, 4, 1]].iter().all(|pat| {
            let mut k = 0;
            for &x in line {
                if k < 3 && x == pat[k] {
                    k += 1;
                }
            }
            k < 3
        })
    };
    let sortable: HashSet<u32> = camb.sortables.iter().copied().collect();
    (0..group.order() as u32)
        .all(|w| sortable.contains(&w) == avoid(&group.one_line(w).unwrap()))
}

/// The noncrossing partition lattice NC_c(W) = [1, c] in the absolute order.
pub struct NCLattice {
    pub c: u32,
    /// Element ids, sorted by (absolute length, id).
    pub elements: Vec<u32>,
    pub index_of: HashMap<u32, usize>,
    pub rank: Vec<usize>,
    pub poset: PosetView,
}

/// u ≤ v in absolute order: the reflection lengths add along u, u⁻¹v.
pub fn absolute_leq(group: &CoxGroup, u: u32, v: u32) -> bool {
    group.absolute_length(u) + group.absolute_length(group.mult(group.inverse(u), v))
        == group.absolute_length(v)
}

pub fn build_nc(group: &CoxGroup, c: u32) -> NCLattice {
    let lc = group.absolute_length(c);
    let mut elements: Vec<u32> = (0..group.order() as u32)
        .filter(|&u| {
            group.absolute_length(u)
                + group.absolute_length(group.mult(group.inverse(u), c))
                == lc
        })
        .collect();
    elements.sort_by_key(|&u| (group.absolute_length(u), u));
    let index_of: HashMap<u32, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let rank: Vec<usize> = elements
        .iter()
        .map(|&u| group.absolute_length(u))
        .collect();
    let poset = PosetView::from_leq(elements.len(), |i, j| {
        absolute_leq(group, elements[i], elements[j])
    });
    NCLattice {
        c,
        elements,
        index_of,
        rank,
        poset,
    }
}

/// nc_c(w) for a sortable w: the unique x ∈ [1, c] whose fixed space is the
/// intersection of the hyperplanes of the cover reflections of w.
pub fn nc_map(group: &CoxGroup, nc: &NCLattice, w: u32) -> Result<u32, NcError> {
    let hyps: Vec<u8> = group.lattice.down[w as usize]
        .iter()
        .map(|&(_, h)| h)
        .collect();
    let target = group.hyperplane_intersection(&hyps);
    let mut found: Option<u32> = None;
    for &x in &nc.elements {
        if group.fixed_space(x) == target {
            if found.is_some() {
                return Err(NcError::NonUnique(w));
            }
            found = Some(x);
        }
    }
    found.ok_or(NcError::NoPreimage(w))
}

/// The checks behind the isomorphism between the sortable restriction of the
/// shard intersection order and NC_c(W).
pub struct IsomorphismReport {
    pub checks: Vec<(String, bool)>,
}

impl IsomorphismReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|&&(_, ok)| !ok)
            .map(|(name, _)| name.as_str())
            .collect()
    }
}

pub fn verify_isomorphism(
    group: &CoxGroup,
    shards: &ShardSet,
    full_order_poset: &PosetView,
    camb: &CambrianData,
    nc: &NCLattice,
) -> IsomorphismReport {
    let mut checks = Vec::new();
    let lat = &group.lattice;
    let qso = quotient_shard_order(lat, shards, &camb.theta);

    checks.push((
        "sortable and noncrossing counts agree".into(),
        camb.sortables.len() == nc.elements.len(),
    ));

    // nc is a well-defined bijection
    let mut images: Vec<Option<u32>> = Vec::new();
    let mut ok_map = true;
    for &w in &camb.sortables {
        match nc_map(group, nc, w) {
            Ok(x) => images.push(Some(x)),
            Err(_) => {
                ok_map = false;
                images.push(None);
            }
        }
    }
    checks.push(("nc is defined and unique on every sortable".into(), ok_map));
    let distinct: HashSet<u32> = images.iter().flatten().copied().collect();
    let bijective = ok_map && distinct.len() == nc.elements.len();
    checks.push(("nc is a bijection onto the noncrossing partitions".into(), bijective));

    // rank preservation: descents ↦ absolute length
    let rank_ok = bijective
        && camb
            .sortables
            .iter()
            .zip(&images)
            .all(|(&w, x)| {
                group.lattice.down[w as usize].len()
                    == group.absolute_length(x.unwrap())
            });
    checks.push(("nc maps k descents to rank k".into(), rank_ok));

    // order isomorphism both ways
    let mut iso_ok = bijective;
    if bijective {
        for (i, &u) in camb.sortables.iter().enumerate() {
            for (j, &v) in camb.sortables.iter().enumerate() {
                let pre = qso.labels[i].is_subset(&qso.labels[j]);
                let post = absolute_leq(group, images[i].unwrap(), images[j].unwrap());
                if pre != post {
                    iso_ok = false;
                }
                let _ = (u, v);
            }
        }
    }
    checks.push(("nc and its inverse preserve order".into(), iso_ok));

    // sublattice of the full shard order: meets agree
    let sub_ok = crate::congruence::quotient_is_sublattice(&qso, full_order_poset);
    checks.push(("sortable restriction is a sublattice of the shard order".into(), sub_ok));

    // Fix-images closed under intersection-lattice meets, compatibly
    let mut meet_ok = bijective;
    if bijective {
        for i in 0..camb.sortables.len() {
            for j in 0..camb.sortables.len() {
                let ui = group.fixed_space(images[i].unwrap());
                let uj = group.fixed_space(images[j].unwrap());
                let mask = group.hyps_containing(&ui) & group.hyps_containing(&uj);
                let hyps: Vec<u8> = (0..lat.n_hyp as u8)
                    .filter(|&h| mask & (1 << h) != 0)
                    .collect();
                let int_meet = group.hyperplane_intersection(&hyps);
                let Some(m) = qso.poset.meet(i, j) else {
                    meet_ok = false;
                    continue;
                };
                if group.fixed_space(images[m].unwrap()) != int_meet {
                    meet_ok = false;
                }
            }
        }
    }
    checks.push((
        "Fix embeds the quotient as a meet-sublattice of Int(A)".into(),
        meet_ok,
    ));

    // nc⁻¹ is order-preserving into the Cambrian lattice (weak order on
    // sortables)
    let mut inv_ok = bijective;
    if bijective {
        let sortable_of_nc: HashMap<u32, u32> = camb
            .sortables
            .iter()
            .zip(&images)
            .map(|(&w, x)| (x.unwrap(), w))
            .collect();
        for &x in &nc.elements {
            for &y in &nc.elements {
                if absolute_leq(group, x, y)
                    && !lat.leq(sortable_of_nc[&x], sortable_of_nc[&y])
                {
                    inv_ok = false;
                }
            }
        }
    }
    checks.push((
        "nc inverse is order-preserving into the Cambrian lattice".into(),
        inv_ok,
    ));

    IsomorphismReport { checks }
}

/// Möbius number of NC_c(W) two ways: recursion on the poset, and the signed
/// count of noncrossing partitions of full support.
pub fn nc_mobius_two_ways(group: &CoxGroup, nc: &NCLattice) -> (i64, i64) {
    let bottom = nc.index_of[&group.identity()];
    let top = nc.index_of[&nc.c];
    let direct = nc.poset.mobius(bottom, top);
    let full: u64 = (1 << group.n_gens) - 1;
    let count = nc
        .elements
        .iter()
        .filter(|&&x| group.support(x) == full)
        .count() as i64;
    let sign = if group.ctype.rank().is_multiple_of(2) { 1 } else { -1 };
    (direct, sign * count)
}

/// Generators initial (some reduced word of c starts with s) and final in c.
pub fn initial_and_final(group: &CoxGroup, c: u32) -> (Vec<u8>, Vec<u8>) {
    (group.left_descents(c), group.descents(c))
}

/// The cones Γ ∩ C for Γ in Ψ/Θ_c, where C is the cone weakly above the
/// initial hyperplanes and weakly below the final ones; for bipartite c this
/// collection is isomorphic to (Ψ/Θ_c, ⊇) under reverse containment.
pub fn bipartite_cone_restriction<F: Scalar>(
    arr: &Arrangement<F>,
    group: &CoxGroup,
    shards: &ShardSet,
    camb: &CambrianData,
    qso: &QuotientShardOrder,
    span: &dyn Fn(&[u8]) -> u64,
) -> Result<Vec<Cone<F>>, NcError> {
    let (initial, fin) = initial_and_final(group, camb.c);
    let initial_set: HashSet<u8> = initial.iter().copied().collect();
    let final_set: HashSet<u8> = fin.iter().copied().collect();
    for s in 0..group.n_gens as u8 {
        if !initial_set.contains(&s) && !final_set.contains(&s) {
            return Err(NcError::NotBipartite(s));
        }
    }
    let lat = &group.lattice;
    let mut ineqs: Vec<Vec<F>> = Vec::new();
    for s in 0..group.n_gens as u8 {
        let h = group.simple_hyp[s as usize] as usize;
        if initial_set.contains(&s) {
            // weakly above: the non-base side
            ineqs.push(vec_neg(&arr.normals[h]));
        } else {
            ineqs.push(arr.normals[h].clone());
        }
    }
    let c_cone = Cone::from_constraints(arr.dim, &[], &ineqs);
    let mut out = Vec::new();
    for &w in &camb.sortables {
        // ψ(w) as intersection of its lower shard cones, then cut by C
        let mut eqs: Vec<Vec<F>> = Vec::new();
        let mut site: Vec<Vec<F>> = c_cone.ineq.clone();
        for &(q, _) in &lat.down[w as usize] {
            let sc = shard_cone(arr, lat, span, &shards.shards[shards.by_cover[&(q, w)]]);
            eqs.extend(sc.eq.iter().cloned());
            site.extend(sc.ineq.iter().cloned());
        }
        out.push(Cone::from_constraints(arr.dim, &eqs, &site));
    }
    let _ = qso;
    Ok(out)
}
