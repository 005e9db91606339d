//! Generic finite posets over dense node ids: order matrices, covers, rank,
//! Möbius function, chain counts, lattice checks, isomorphism search.

use std::collections::HashMap;

/// Dense bit set; used for order rows, inversion sets and label sets.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(bits: usize) -> Self {
        BitSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }
    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w & (1 << (i % 64)) != 0)
    }
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
            && self.words[other.words.len().min(self.words.len())..]
                .iter()
                .all(|&w| w == 0)
    }
    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
    pub fn intersect_with(&mut self, other: &BitSet) {
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= other.words.get(i).copied().unwrap_or(0);
        }
    }
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter_map(move |b| {
                if w & (1 << b) != 0 {
                    Some(wi * 64 + b)
                } else {
                    None
                }
            })
        })
    }
    pub fn from_iter_bits(bits: usize, it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(bits);
        for i in it {
            s.insert(i);
        }
        s
    }
}

/// A finite poset on nodes 0..n, stored as the full ≤ relation.
#[derive(Clone, Debug)]
pub struct PosetView {
    n: usize,
    /// leq[i] = set of j with i ≤ j.
    up: Vec<BitSet>,
    /// leq[j] ∋ i mirrored: set of i with i ≤ j.
    down: Vec<BitSet>,
}

impl PosetView {
    /// Build from a ≤ predicate. The predicate must be reflexive,
    /// antisymmetric and transitive; this is not re-checked.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut up = vec![BitSet::new(n); n];
        let mut down = vec![BitSet::new(n); n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        PosetView { n, up, down }
    }

    pub fn len(&self) -> usize {
        self.n
    }
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }
    pub fn up_set(&self, i: usize) -> &BitSet {
        &self.up[i]
    }
    pub fn down_set(&self, j: usize) -> &BitSet {
        &self.down[j]
    }

    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) && !(0..self.n).any(|k| self.lt(i, k) && self.lt(k, j))
    }

    /// Lower covers of each node.
    pub fn cover_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|j| (0..self.n).filter(|&i| self.covers(i, j)).collect())
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.down[i].count() == 1)
            .collect()
    }
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.up[i].count() == 1).collect()
    }
    pub fn bottom(&self) -> Option<usize> {
        let m = self.minimal_elements();
        (m.len() == 1).then(|| m[0])
    }
    pub fn top(&self) -> Option<usize> {
        let m = self.maximal_elements();
        (m.len() == 1).then(|| m[0])
    }

    /// Join of two elements when the unique least upper bound exists.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let mut ub = self.up[i].clone();
        ub.intersect_with(&self.up[j]);
        let mins: Vec<usize> = ub
            .iter()
            .filter(|&k| ub.iter().all(|l| !self.lt(l, k)))
            .collect();
        (mins.len() == 1).then(|| mins[0])
    }

    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let mut lb = self.down[i].clone();
        lb.intersect_with(&self.down[j]);
        let maxs: Vec<usize> = lb
            .iter()
            .filter(|&k| lb.iter().all(|l| !self.lt(k, l)))
            .collect();
        (maxs.len() == 1).then(|| maxs[0])
    }

    pub fn is_lattice(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        for i in 0..self.n {
            for j in i..self.n {
                if self.join(i, j).is_none() || self.meet(i, j).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// Rank function when the poset is graded (every maximal chain between
    /// the bounds has the same length); None otherwise.
    pub fn grading(&self) -> Option<Vec<usize>> {
        let covers = self.cover_lists();
        let mut rank = vec![usize::MAX; self.n];
        let order = self.linear_extension();
        for &v in &order {
            if covers[v].is_empty() {
                rank[v] = 0;
            } else {
                let r0 = rank[covers[v][0]] + 1;
                for &c in &covers[v][1..] {
                    if rank[c] + 1 != r0 {
                        return None;
                    }
                }
                rank[v] = r0;
            }
        }
        // graded also requires all maximal elements at the same rank and
        // minimal elements at rank 0 only if bounded; for bounded posets the
        // above suffices.
        Some(rank)
    }

    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.down[i].count());
        order
    }

    /// Möbius function value μ(x, y), 0 when x ≰ y.
    pub fn mobius(&self, x: usize, y: usize) -> i64 {
        if !self.leq(x, y) {
            return 0;
        }
        let mut memo: HashMap<usize, i64> = HashMap::new();
        memo.insert(x, 1);
        let mut order: Vec<usize> = self
            .up[x]
            .iter()
            .filter(|&z| self.leq(z, y))
            .collect();
        order.sort_by_key(|&z| self.down[z].count());
        for &z in &order {
            if z == x {
                continue;
            }
            let mut s = 0i64;
            for w in self.down[z].iter() {
                if w != z && self.leq(x, w) {
                    s += memo.get(&w).copied().unwrap_or(0);
                }
            }
            memo.insert(z, -s);
        }
        memo[&y]
    }

    /// Number of maximal chains from bottom to top, via DP over covers.
    pub fn maximal_chain_count(&self) -> u64 {
        let (Some(b), Some(t)) = (self.bottom(), self.top()) else {
            return 0;
        };
        let covers = self.cover_lists();
        let mut paths = vec![0u64; self.n];
        paths[b] = 1;
        let order = self.linear_extension();
        for &v in &order {
            if v == b {
                continue;
            }
            paths[v] = covers[v].iter().map(|&c| paths[c]).sum();
        }
        paths[t]
    }

    /// Chain counts by cardinality: result[k] = number of k-element chains.
    /// result[0] = 1 for the empty chain.
    pub fn chain_count_by_size(&self) -> Vec<u64> {
        let order = self.linear_extension();
        // dp[v][k] = chains of size k with maximum v
        let mut dp: Vec<Vec<u64>> = vec![Vec::new(); self.n];
        let mut max_len = 0usize;
        for &v in &order {
            let mut row = vec![0u64; 2];
            row[1] = 1;
            for u in self.down[v].iter() {
                if u == v {
                    continue;
                }
                for (k, &c) in dp[u].iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if row.len() <= k + 1 {
                        row.resize(k + 2, 0);
                    }
                    row[k + 1] += c;
                }
            }
            max_len = max_len.max(row.len() - 1);
            dp[v] = row;
        }
        let mut out = vec![0u64; max_len + 1];
        out[0] = 1;
        for row in &dp {
            for (k, &c) in row.iter().enumerate() {
                if k > 0 {
                    out[k] += c;
                }
            }
        }
        out
    }

    /// Every element is a join of atoms.
    pub fn is_atomic(&self) -> bool {
        let Some(b) = self.bottom() else {
            return false;
        };
        let atoms: Vec<usize> = (0..self.n).filter(|&i| self.covers(b, i)).collect();
        (0..self.n).all(|x| {
            if x == b {
                return true;
            }
            let below: Vec<usize> = atoms.iter().copied().filter(|&a| self.leq(a, x)).collect();
            // join of `below` is x: x is an upper bound and no smaller one exists
            (0..self.n).all(|y| {
                let ub = below.iter().all(|&a| self.leq(a, y));
                !(ub && self.lt(y, x)) && !(ub && y == x && below.is_empty() && x != b)
            }) && {
                let mins: Vec<usize> = (0..self.n)
                    .filter(|&y| below.iter().all(|&a| self.leq(a, y)))
                    .filter(|&y| {
                        (0..self.n)
                            .filter(|&z| below.iter().all(|&a| self.leq(a, z)))
                            .all(|z| !self.lt(z, y))
                    })
                    .collect();
                mins == vec![x]
            }
        })
    }

    pub fn is_coatomic(&self) -> bool {
        self.dual().is_atomic()
    }

    pub fn dual(&self) -> PosetView {
        PosetView {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Induced subposet on the given nodes (order of `nodes` gives new ids).
    pub fn induced(&self, nodes: &[usize]) -> PosetView {
        PosetView::from_leq(nodes.len(), |i, j| self.leq(nodes[i], nodes[j]))
    }

    /// Search for an order isomorphism onto `other`; returns the node map.
    pub fn isomorphism(&self, other: &PosetView) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        // invariants to prune: (|down|, |up|) pairs must match
        let key = |p: &PosetView, v: usize| (p.down[v].count(), p.up[v].count());
        let mut target_by_key: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for v in 0..other.n {
            target_by_key.entry(key(other, v)).or_default().push(v);
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| {
            target_by_key
                .get(&key(self, v))
                .map_or(0, |c| c.len())
        });
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        fn rec(
            p: &PosetView,
            q: &PosetView,
            order: &[usize],
            idx: usize,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            target_by_key: &HashMap<(usize, usize), Vec<usize>>,
            key: &dyn Fn(&PosetView, usize) -> (usize, usize),
        ) -> bool {
            if idx == order.len() {
                return true;
            }
            let v = order[idx];
            let Some(cands) = target_by_key.get(&key(p, v)) else {
                return false;
            };
            for &w in cands {
                if used[w] {
                    continue;
                }
                let ok = order[..idx].iter().all(|&u| {
                    p.leq(u, v) == q.leq(map[u], w) && p.leq(v, u) == q.leq(w, map[u])
                });
                if ok {
                    map[v] = w;
                    used[w] = true;
                    if rec(p, q, order, idx + 1, map, used, target_by_key, key) {
                        return true;
                    }
                    used[w] = false;
                    map[v] = usize::MAX;
                }
            }
            false
        }
        if rec(
            self,
            other,
            &order,
            0,
            &mut map,
            &mut used,
            &target_by_key,
            &key,
        ) {
            Some(map)
        } else {
            None
        }
    }
}
