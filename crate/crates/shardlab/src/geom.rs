//! Exact polyhedral geometry: hyperplanes, cones with ray enumeration, and
//! central simplicial arrangements with region enumeration.
//!
//! Points and normals are plain coordinate vectors over an exact field; all
//! side tests are exact sign computations. Arrangements need not be
//! essential: lineality is carried along everywhere.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};

use crate::num::{self, dot, kernel_basis, rank, vec_add, vec_neg, Scalar};
use crate::poset::{BitSet, PosetView};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("hyperplane {0} has a zero normal")]
    ZeroNormal(usize),
    #[error("hyperplanes {0} and {1} coincide")]
    DuplicateHyperplane(usize, usize),
    #[error("base point lies on hyperplane {0}")]
    BasePointOnHyperplane(usize),
    #[error("region with separating set {separating:?} is not simplicial")]
    NonSimplicialRegion { separating: Vec<usize> },
    #[error("at most 64 hyperplanes are supported, got {0}")]
    TooManyHyperplanes(usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Below,
    On,
    Above,
}

/// Side of `p` relative to hyperplane normal `n`, where `base` fixes which
/// open side counts as below. `base` must be strictly off the hyperplane.
pub fn side_of<F: Scalar>(p: &[F], normal: &[F], base: &[F]) -> Result<Side, GeomError> {
    if p.len() != normal.len() || base.len() != normal.len() {
        return Err(GeomError::Dimension {
            expected: normal.len(),
            got: p.len().max(base.len()),
        });
    }
    let sb = dot(normal, base).signum();
    assert_ne!(sb, Ordering::Equal, "base point must be off the hyperplane");
    Ok(match dot(normal, p).signum() {
        Ordering::Equal => Side::On,
        s if s == sb => Side::Below,
        _ => Side::Above,
    })
}

/// Rank of a family of vectors over the exact field.
pub fn linear_rank<F: Scalar>(vectors: &[Vec<F>]) -> usize {
    rank(vectors)
}

/// A linear hyperplane through the origin, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hyperplane<F: Scalar> {
    pub normal: Vec<F>,
    pub index: usize,
}

impl<F: Scalar> Hyperplane<F> {
    pub fn new(mut normal: Vec<F>, index: usize) -> Result<Self, GeomError> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(GeomError::ZeroNormal(index));
        }
        F::canonicalize_vector(&mut normal);
        Ok(Hyperplane { normal, index })
    }
}

/// Closed convex polyhedral cone in H-representation, with derived exact
/// V-representation (lineality basis + extreme rays of the pointed part).
#[derive(Clone, Debug)]
pub struct Cone<F: Scalar> {
    pub dim_ambient: usize,
    /// Canonical basis of the orthogonal complement of the linear span.
    pub eq: Vec<Vec<F>>,
    /// Facet-defining inequalities, oriented inward, reduced and sorted.
    pub ineq: Vec<Vec<F>>,
    /// Canonical basis of the lineality space.
    pub lineality: Vec<Vec<F>>,
    /// Canonical extreme rays of the pointed part, sorted.
    pub rays: Vec<Vec<F>>,
    pub dim: usize,
}

/// Canonical identifier of a cone: equal cones produce equal keys.
pub type ConeKey<F> = (Vec<Vec<F>>, Vec<Vec<F>>);

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl<F: Scalar> Cone<F> {
    /// Build from raw constraints: `eqs` rows vanish on the cone, `ineqs`
    /// rows are ≥ 0 on the cone.
    pub fn from_constraints(dim: usize, eqs: &[Vec<F>], ineqs: &[Vec<F>]) -> Self {
        let mut all: Vec<Vec<F>> = eqs.to_vec();
        all.extend_from_slice(ineqs);
        let lineality = num::row_space_canonical(&kernel_basis(&all, dim));

        // Pointed slice: x orthogonal to the lineality space.
        let mut pointed_rows: Vec<Vec<F>> = eqs.to_vec();
        pointed_rows.extend(lineality.iter().cloned());
        let base_rank = rank(&pointed_rows);

        let mut rays: Vec<Vec<F>> = Vec::new();
        let mut seen: HashSet<Vec<F>> = HashSet::new();
        if dim >= 1 && base_rank < dim {
            let need = dim - 1 - base_rank;
            if need <= ineqs.len() {
                for subset in subsets_of_size(ineqs.len(), need) {
                    let mut rows = pointed_rows.clone();
                    for &i in &subset {
                        rows.push(ineqs[i].clone());
                    }
                    let ker = kernel_basis(&rows, dim);
                    if ker.len() != 1 {
                        continue;
                    }
                    let mut v = ker.into_iter().next().unwrap();
                    let mut pos = true;
                    let mut neg = true;
                    for c in ineqs {
                        match dot(c, &v).signum() {
                            Ordering::Greater => neg = false,
                            Ordering::Less => pos = false,
                            Ordering::Equal => {}
                        }
                        if !pos && !neg {
                            break;
                        }
                    }
                    if !pos && !neg {
                        continue;
                    }
                    if !pos {
                        v = vec_neg(&v);
                    }
                    // extremality: tight constraints must cut down to a line
                    let mut tight = pointed_rows.clone();
                    for c in ineqs {
                        if dot(c, &v).is_zero() {
                            tight.push(c.clone());
                        }
                    }
                    if rank(&tight) != dim - 1 {
                        continue;
                    }
                    F::canonicalize_ray(&mut v);
                    if seen.insert(v.clone()) {
                        rays.push(v);
                    }
                }
            }
        }
        rays.sort();

        let mut span_rows = lineality.clone();
        span_rows.extend(rays.iter().cloned());
        let span_dim = rank(&span_rows);
        // Orthogonal complement of the span: canonical equality system.
        let eq = num::row_space_canonical(&kernel_basis(&span_rows, dim));

        // Facets: inequalities whose tight face has dimension span_dim - 1.
        let mut facet_set: HashSet<Vec<F>> = HashSet::new();
        let mut ineq_out: Vec<Vec<F>> = Vec::new();
        for c in ineqs {
            if rays.iter().all(|r| dot(c, r).is_zero()) {
                continue; // vanishes on the span
            }
            let tight_rays: Vec<Vec<F>> = rays
                .iter()
                .filter(|r| dot(c, r).is_zero())
                .cloned()
                .collect();
            let mut rows = lineality.clone();
            rows.extend(tight_rays);
            if rank(&rows) + 1 != span_dim {
                continue;
            }
            // reduce modulo the equality rowspace so equal facets collide
            let mut red = reduce_mod_rowspace(c, &eq);
            F::canonicalize_ray(&mut red);
            if facet_set.insert(red.clone()) {
                ineq_out.push(red);
            }
        }
        ineq_out.sort();

        Cone {
            dim_ambient: dim,
            eq,
            ineq: ineq_out,
            lineality,
            rays,
            dim: span_dim,
        }
    }

    pub fn key(&self) -> ConeKey<F> {
        (self.lineality.clone(), self.rays.clone())
    }

    pub fn whole_space(dim: usize) -> Self {
        Cone::from_constraints(dim, &[], &[])
    }

    pub fn contains_point(&self, x: &[F]) -> bool {
        self.eq.iter().all(|e| dot(e, x).is_zero())
            && self.ineq.iter().all(|c| dot(c, x).signum() != Ordering::Less)
    }

    pub fn contains_cone(&self, other: &Cone<F>) -> bool {
        other
            .lineality
            .iter()
            .all(|l| self.contains_point(l) && self.contains_point(&vec_neg(l)))
            && other.rays.iter().all(|r| self.contains_point(r))
    }

    pub fn same_as(&self, other: &Cone<F>) -> bool {
        self.key() == other.key()
    }

    /// A relative-interior representative: the sum of all extreme rays.
    /// Degenerates to the origin for subspaces, which is correct for sign
    /// tests against hyperplanes containing the subspace.
    pub fn interior_rep(&self) -> Vec<F> {
        let mut p = vec![F::zero(); self.dim_ambient];
        for r in &self.rays {
            p = vec_add(&p, r);
        }
        p
    }

    pub fn intersect(&self, other: &Cone<F>) -> Cone<F> {
        let mut eqs = self.eq.clone();
        eqs.extend(other.eq.iter().cloned());
        let mut ineqs = self.ineq.clone();
        ineqs.extend(other.ineq.iter().cloned());
        Cone::from_constraints(self.dim_ambient, &eqs, &ineqs)
    }

    /// All faces (including the cone itself and its minimal face), with the
    /// containment order.
    pub fn faces(&self) -> (Vec<Cone<F>>, PosetView) {
        let f = self.ineq.len();
        let mut out: Vec<Cone<F>> = Vec::new();
        let mut seen: HashMap<ConeKey<F>, usize> = HashMap::new();
        for mask in 0..(1u64 << f) {
            let mut eqs = self.eq.clone();
            let mut ineqs = Vec::new();
            for (i, c) in self.ineq.iter().enumerate() {
                if mask & (1u64 << i) != 0 {
                    eqs.push(c.clone());
                } else {
                    ineqs.push(c.clone());
                }
            }
            let face = Cone::from_constraints(self.dim_ambient, &eqs, &ineqs);
            seen.entry(face.key()).or_insert_with(|| {
                out.push(face);
                out.len() - 1
            });
        }
        let poset = PosetView::from_leq(out.len(), |i, j| out[j].contains_cone(&out[i]));
        (out, poset)
    }
}

fn reduce_mod_rowspace<F: Scalar>(v: &[F], rref_rows: &[Vec<F>]) -> Vec<F> {
    let mut out = v.to_vec();
    for row in rref_rows {
        let pivot = row.iter().position(|x| !x.is_zero());
        if let Some(p) = pivot {
            if !out[p].is_zero() {
                let f = out[p].clone() / row[p].clone();
                for (o, r) in out.iter_mut().zip(row) {
                    *o = o.clone() - f.clone() * r.clone();
                }
            }
        }
    }
    out
}

/// A central arrangement with a chosen base point. Normals are canonical and
/// oriented so the base point is strictly positive on every hyperplane.
#[derive(Clone, Debug)]
pub struct Arrangement<F: Scalar> {
    pub dim: usize,
    pub normals: Vec<Vec<F>>,
    pub base_point: Vec<F>,
    pub rank: usize,
}

/// A region of `Arrangement<F>`, with exact geometry attached.
#[derive(Clone, Debug)]
pub struct GeomRegion<F: Scalar> {
    pub sep: BitSet,
    pub facets: Vec<usize>,
    pub cone: Cone<F>,
    pub interior: Vec<F>,
}

impl<F: Scalar> Arrangement<F> {
    /// Validate and build. Normals are reoriented towards the base point;
    /// region simpliciality is *not* checked here (see `regions`).
    pub fn new(normals: Vec<Vec<F>>, base_point: Vec<F>) -> Result<Self, GeomError> {
        let dim = base_point.len();
        if normals.len() > 64 {
            return Err(GeomError::TooManyHyperplanes(normals.len()));
        }
        let mut canon: Vec<Vec<F>> = Vec::with_capacity(normals.len());
        for (i, n) in normals.iter().enumerate() {
            if n.len() != dim {
                return Err(GeomError::Dimension {
                    expected: dim,
                    got: n.len(),
                });
            }
            let h = Hyperplane::new(n.clone(), i)?;
            let mut v = h.normal;
            match dot(&v, &base_point).signum() {
                Ordering::Equal => return Err(GeomError::BasePointOnHyperplane(i)),
                Ordering::Less => v = vec_neg(&v),
                Ordering::Greater => {}
            }
            canon.push(v);
        }
        for i in 0..canon.len() {
            for j in i + 1..canon.len() {
                let mut a = canon[i].clone();
                let mut b = canon[j].clone();
                F::canonicalize_vector(&mut a);
                F::canonicalize_vector(&mut b);
                if a == b {
                    return Err(GeomError::DuplicateHyperplane(i, j));
                }
            }
        }
        let rank = rank(&canon);
        Ok(Arrangement {
            dim,
            normals: canon,
            base_point,
            rank,
        })
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.normals.len()
    }

    /// Cone of the region with the given separating set.
    pub fn region_cone(&self, sep: &BitSet) -> Cone<F> {
        let ineqs: Vec<Vec<F>> = self
            .normals
            .iter()
            .enumerate()
            .map(|(i, n)| if sep.contains(i) { vec_neg(n) } else { n.clone() })
            .collect();
        Cone::from_constraints(self.dim, &[], &ineqs)
    }

    /// Enumerate all regions by wall-crossing from the base region,
    /// validating that each region is simplicial.
    pub fn regions(&self) -> Result<Vec<GeomRegion<F>>, GeomError> {
        let m = self.n_hyperplanes();
        let mut out: Vec<GeomRegion<F>> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut queue = VecDeque::new();
        let base_sep = BitSet::new(m);
        queue.push_back(base_sep.clone());
        seen.insert(sep_words(&base_sep));
        while let Some(sep) = queue.pop_front() {
            let cone = self.region_cone(&sep);
            let facets: Vec<usize> = (0..m)
                .filter(|&i| {
                    let mut n = self.normals[i].clone();
                    if sep.contains(i) {
                        n = vec_neg(&n);
                    }
                    let mut red = reduce_mod_rowspace(&n, &cone.eq);
                    F::canonicalize_ray(&mut red);
                    cone.ineq.contains(&red)
                })
                .collect();
            if facets.len() != self.rank
                || rank(
                    &facets
                        .iter()
                        .map(|&i| self.normals[i].clone())
                        .collect::<Vec<_>>(),
                ) != self.rank
            {
                return Err(GeomError::NonSimplicialRegion {
                    separating: sep.iter().collect(),
                });
            }
            for &f in &facets {
                let mut nsep = sep.clone();
                if nsep.contains(f) {
                    nsep.remove(f);
                } else {
                    nsep.insert(f);
                }
                if seen.insert(sep_words(&nsep)) {
                    queue.push_back(nsep);
                }
            }
            let interior = cone.interior_rep();
            out.push(GeomRegion {
                sep,
                facets,
                cone,
                interior,
            });
        }
        out.sort_by_key(|r| (r.sep.count(), r.sep.iter().collect::<Vec<_>>()));
        Ok(out)
    }

    /// Hyperplanes containing the given subspace (given by a spanning set),
    /// as a full subarrangement with the same base point.
    pub fn full_subarrangement(&self, span: &[Vec<F>]) -> Vec<usize> {
        (0..self.n_hyperplanes())
            .filter(|&i| span.iter().all(|v| dot(&self.normals[i], v).is_zero()))
            .collect()
    }

    /// Basic hyperplanes of a subarrangement: facet hyperplanes of the
    /// subarrangement region containing the base point.
    pub fn basic_hyperplanes_of(&self, sub: &[usize]) -> Vec<usize> {
        let ineqs: Vec<Vec<F>> = sub.iter().map(|&i| self.normals[i].clone()).collect();
        let cone = Cone::from_constraints(self.dim, &[], &ineqs);
        sub.iter()
            .copied()
            .filter(|&i| {
                let mut red = reduce_mod_rowspace(&self.normals[i], &cone.eq);
                F::canonicalize_ray(&mut red);
                cone.ineq.contains(&red)
            })
            .collect()
    }
}

fn sep_words(s: &BitSet) -> Vec<u64> {
    s.iter().fold(vec![0u64], |mut acc, i| {
        while acc.len() <= i / 64 {
            acc.push(0);
        }
        acc[i / 64] |= 1 << (i % 64);
        acc
    })
}

/// Parse the arrangement file format: first data line is the base point,
/// every further line one hyperplane normal; entries are exact rationals
/// `p/q` or integers, `#` starts a comment.
pub fn parse_arrangement_file(text: &str) -> Result<Arrangement<crate::num::Rat>, GeomError> {
    use ::num::bigint::BigInt;
    use ::num::Zero;
    let mut base: Option<Vec<crate::num::Rat>> = None;
    let mut normals: Vec<Vec<crate::num::Rat>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut vals = Vec::new();
        for tok in line.split_whitespace() {
            let parse_int = |s: &str| -> Result<BigInt, GeomError> {
                s.parse::<BigInt>().map_err(|e| GeomError::Parse {
                    line: lineno + 1,
                    msg: format!("bad number {s:?}: {e}"),
                })
            };
            let val = match tok.split_once('/') {
                Some((p, q)) => {
                    let den = parse_int(q)?;
                    if Zero::is_zero(&den) {
                        return Err(GeomError::Parse {
                            line: lineno + 1,
                            msg: format!("zero denominator in {tok:?}"),
                        });
                    }
                    crate::num::Rat::new(parse_int(p)?, den)
                }
                None => crate::num::Rat::from_integer(parse_int(tok)?),
            };
            vals.push(val);
        }
        if base.is_none() {
            base = Some(vals);
        } else {
            normals.push(vals);
        }
    }
    let base = base.ok_or(GeomError::Parse {
        line: 0,
        msg: "empty file".into(),
    })?;
    Arrangement::new(normals, base)
}
