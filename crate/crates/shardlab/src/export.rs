//! Deterministic exports: DOT Hasse diagrams, JSON reports, and an OFF-like
//! dump of triangulations.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::cambrian::NCLattice;
use crate::congruence::{Congruence, QuotientShardOrder};
use crate::coxeter::CoxGroup;
use crate::poset::PosetView;
use crate::shardorder::ShardOrder;
use crate::shards::{ShardDigraph, ShardSet};
use crate::weak::RegionLattice;

/// Label an element by its word in the simple generators, or by id.
pub fn element_label(group: Option<&CoxGroup>, x: u32) -> String {
    match group {
        Some(g) => {
            if let Some(line) = g.one_line(x) {
                line.iter().map(|d| d.to_string()).collect()
            } else {
                let w = &g.words[x as usize];
                if w.is_empty() {
                    "e".to_string()
                } else {
                    w.iter()
                        .map(|s| format!("s{}", s + 1))
                        .collect::<Vec<_>>()
                        .join(".")
                }
            }
        }
        None => format!("r{x}"),
    }
}

/// DOT of the Hasse diagram of covers of a poset.
pub fn dot_hasse(poset: &PosetView, name: &str, label: &dyn Fn(usize) -> String) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    let _ = writeln!(out, "  rankdir=BT;");
    for v in 0..poset.len() {
        let _ = writeln!(out, "  n{v} [label=\"{}\"];", label(v));
    }
    let covers = poset.cover_lists();
    for (v, cs) in covers.iter().enumerate() {
        for &c in cs {
            let _ = writeln!(out, "  n{c} -> n{v};");
        }
    }
    out.push_str("}\n");
    out
}

/// DOT of the weak order with edges labeled by separating hyperplane.
pub fn dot_weak_order(lat: &RegionLattice, group: Option<&CoxGroup>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph weak_order {{");
    let _ = writeln!(out, "  rankdir=BT;");
    for v in 0..lat.len() as u32 {
        let _ = writeln!(out, "  n{v} [label=\"{}\"];", element_label(group, v));
    }
    for (q, r, h) in lat.covers() {
        let _ = writeln!(out, "  n{q} -> n{r} [label=\"H{h}\"];");
    }
    out.push_str("}\n");
    out
}

/// DOT of the shard digraph, nodes labeled by join-irreducibles.
pub fn dot_shard_digraph(
    shards: &ShardSet,
    dg: &ShardDigraph,
    group: Option<&CoxGroup>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph shards {{");
    for (i, s) in shards.shards.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label=\"Σ({}) in H{}\"];",
            element_label(group, s.ji),
            s.hyperplane
        );
    }
    for &(a, b) in &dg.arrows {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct GroupReport {
    pub coxeter_type: String,
    pub order: usize,
    pub rank: usize,
    pub n_positive_roots: usize,
    pub basic_hyperplanes: Vec<u8>,
    /// Positive roots in simple-root coordinates (normal directions for
    /// ingested or stand-in realizations).
    pub roots: Vec<Vec<String>>,
    pub elements: Vec<ElementEntry>,
}

#[derive(Serialize)]
pub struct ElementEntry {
    pub id: u32,
    pub word: Vec<u8>,
    pub length: usize,
    pub inversions: Vec<u8>,
}

pub fn group_report(group: &CoxGroup) -> GroupReport {
    let roots: Vec<Vec<String>> = match &group.geom {
        crate::coxeter::GroupGeom::Rat(l) => l
            .span_vec
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
        crate::coxeter::GroupGeom::Rt5(l) => l
            .span_vec
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
    };
    GroupReport {
        coxeter_type: group.ctype.to_string(),
        order: group.order(),
        rank: group.ctype.rank(),
        n_positive_roots: group.lattice.n_hyp,
        basic_hyperplanes: group.lattice.basic.clone(),
        roots,
        elements: (0..group.order() as u32)
            .map(|x| ElementEntry {
                id: x,
                word: group.words[x as usize].clone(),
                length: group.length(x),
                inversions: (0..group.lattice.n_hyp as u8)
                    .filter(|&h| group.lattice.sep[x as usize] & (1 << h) != 0)
                    .collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct WeakOrderReport {
    pub n_elements: usize,
    pub basic_hyperplanes: Vec<u8>,
    /// Cover relations (lower, upper, separating hyperplane).
    pub covers: Vec<(u32, u32, u8)>,
}

pub fn weak_report(lat: &RegionLattice) -> WeakOrderReport {
    WeakOrderReport {
        n_elements: lat.len(),
        basic_hyperplanes: lat.basic.clone(),
        covers: lat.covers(),
    }
}

#[derive(Serialize)]
pub struct ShardEntry {
    pub ji: String,
    pub ji_id: u32,
    pub hyperplane: u8,
    pub n_covers: usize,
}

pub fn shard_table(shards: &ShardSet, group: Option<&CoxGroup>) -> Vec<ShardEntry> {
    shards
        .shards
        .iter()
        .map(|s| ShardEntry {
            ji: element_label(group, s.ji),
            ji_id: s.ji,
            hyperplane: s.hyperplane,
            n_covers: s.covers.len(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ShardOrderReport {
    pub rank_polynomial: Vec<u64>,
    pub mobius: i64,
    pub maximal_chains: u64,
    pub elements: Vec<ShardOrderEntry>,
}

#[derive(Serialize)]
pub struct ShardOrderEntry {
    pub element: String,
    pub id: u32,
    pub rank: usize,
    pub label_set: Vec<usize>,
}

pub fn shard_order_report(order: &ShardOrder, group: Option<&CoxGroup>) -> ShardOrderReport {
    ShardOrderReport {
        rank_polynomial: order.rank_polynomial(),
        mobius: order.mobius_direct(),
        maximal_chains: order.maximal_chain_count_direct(),
        elements: (0..order.labels.len() as u32)
            .map(|x| ShardOrderEntry {
                element: element_label(group, x),
                id: x,
                rank: order.rank[x as usize],
                label_set: order.labels[x as usize].iter().collect(),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct CongruenceReport {
    pub generators: Vec<String>,
    pub removed_shards: Vec<usize>,
    pub contracted_join_irreducibles: Vec<String>,
    pub n_classes: usize,
    pub quotient_rank_polynomial: Vec<u64>,
}

pub fn congruence_report(
    cong: &Congruence,
    qso: &QuotientShardOrder,
    shards: &ShardSet,
    group: Option<&CoxGroup>,
) -> CongruenceReport {
    CongruenceReport {
        generators: cong
            .generators
            .iter()
            .map(|&g| element_label(group, g))
            .collect(),
        removed_shards: cong.removed.iter().collect(),
        contracted_join_irreducibles: cong
            .contracted_jis(shards)
            .iter()
            .map(|&j| element_label(group, j))
            .collect(),
        n_classes: cong.n_classes(),
        quotient_rank_polynomial: {
            let top = qso.rank.iter().copied().max().unwrap_or(0);
            let mut v = vec![0u64; top + 1];
            for &r in &qso.rank {
                v[r] += 1;
            }
            v
        },
    }
}

#[derive(Serialize)]
pub struct NcReport {
    pub n_elements: usize,
    pub mobius: i64,
    pub elements: Vec<NcEntry>,
}

#[derive(Serialize)]
pub struct NcEntry {
    pub element: String,
    pub rank: usize,
    /// A minimal factorization into reflections, as hyperplane ids.
    pub t_word: Vec<u8>,
}

pub fn nc_report(group: &CoxGroup, nc: &NCLattice) -> NcReport {
    // minimal reflection words by breadth-first search over the reflection
    // Cayley graph
    let n = group.order();
    let mut parent: Vec<Option<(u32, u8)>> = vec![None; n];
    let mut dist = vec![usize::MAX; n];
    let e = group.identity();
    dist[e as usize] = 0;
    let mut q = VecDeque::from([e]);
    while let Some(x) = q.pop_front() {
        for (h, &t) in group.refl_of_hyp.iter().enumerate() {
            let y = group.mult(x, t);
            if dist[y as usize] == usize::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                parent[y as usize] = Some((x, h as u8));
                q.push_back(y);
            }
        }
    }
    let t_word = |mut x: u32| -> Vec<u8> {
        let mut w = Vec::new();
        while let Some((p, h)) = parent[x as usize] {
            w.push(h);
            x = p;
        }
        w.reverse();
        w
    };
    let bottom = nc.index_of[&group.identity()];
    let top = nc.index_of[&nc.c];
    NcReport {
        n_elements: nc.elements.len(),
        mobius: nc.poset.mobius(bottom, top),
        elements: nc
            .elements
            .iter()
            .map(|&x| NcEntry {
                element: element_label(Some(group), x),
                rank: group.absolute_length(x),
                t_word: t_word(x),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct TriangulationReport {
    pub f_vector: Vec<u64>,
    pub maximal_simplices: Vec<Vec<u32>>,
}

pub fn triangulation_report(maximal: &[Vec<u32>]) -> TriangulationReport {
    let closure = crate::triangulation::simplex_closure(maximal);
    let mut maxs: Vec<Vec<u32>> = maximal.to_vec();
    maxs.sort();
    TriangulationReport {
        f_vector: crate::triangulation::f_vector(&closure),
        maximal_simplices: maxs,
    }
}

/// OFF-like text: vertices with representative coordinates (one per maximal
/// simplex vertex), then simplices as index lists.
pub fn off_like_export(vertex_ids: &[u32], coords: &[Vec<String>], maximal: &[Vec<u32>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# OFF-like simplicial export");
    let _ = writeln!(out, "{} {}", vertex_ids.len(), maximal.len());
    let index_of: std::collections::HashMap<u32, usize> = vertex_ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    for (v, c) in vertex_ids.iter().zip(coords) {
        let _ = writeln!(out, "v {} {}", v, c.join(" "));
    }
    let sorted: BTreeSet<Vec<u32>> = maximal.iter().cloned().collect();
    for s in sorted {
        let idx: Vec<String> = s.iter().map(|v| index_of[v].to_string()).collect();
        let _ = writeln!(out, "f {}", idx.join(" "));
    }
    out
}
