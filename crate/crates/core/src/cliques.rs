//! Exact-size clique enumeration and maximum-clique search.
//!
//! Branch and bound over bitset candidate sets, branching on candidates in
//! ascending order. At every node the candidate set is partitioned into
//! independent sets, built one at a time by repeatedly taking the highest
//! remaining vertex and discarding its neighbours (one word-parallel mask per
//! vertex). The number of distinct colours among the candidates `>= v`
//! bounds any clique that continues with `v`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliqueMode {
    EnumerateAll,
    CountOnly,
    FindMax,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueQuery {
    /// Ignored in [`CliqueMode::FindMax`].
    pub target_size: usize,
    pub mode: CliqueMode,
    /// Upper limit on the number of cliques returned by `EnumerateAll`.
    pub limit: Option<usize>,
    /// Fan the top-level branches out over the rayon pool.
    pub parallel: bool,
}

impl CliqueQuery {
    pub fn enumerate(target_size: usize) -> Self {
        CliqueQuery {
            target_size,
            mode: CliqueMode::EnumerateAll,
            limit: None,
            parallel: false,
        }
    }

    pub fn count(target_size: usize) -> Self {
        CliqueQuery {
            mode: CliqueMode::CountOnly,
            ..Self::enumerate(target_size)
        }
    }

    pub fn max() -> Self {
        CliqueQuery {
            mode: CliqueMode::FindMax,
            ..Self::enumerate(1)
        }
    }

    pub fn parallel(mut self, yes: bool) -> Self {
        self.parallel = yes;
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueOutcome {
    Cliques(Vec<Vec<usize>>),
    Count(u64),
    Max(Vec<usize>),
}

pub fn enumerate_cliques(g: &Graph, q: &CliqueQuery) -> Result<CliqueOutcome> {
    if q.target_size == 0 && q.mode != CliqueMode::FindMax {
        return Err(Error::InvalidParameters("clique size must be at least 1".into()));
    }
    match q.mode {
        CliqueMode::FindMax => Ok(CliqueOutcome::Max(max_clique(g))),
        CliqueMode::CountOnly => {
            let kernel = Kernel::new(g);
            let count = if q.parallel {
                kernel.par_branches(q.target_size, |ctx, root| {
                    let mut n = 0u64;
                    ctx.run_branch(root, &mut |_| {
                        n += 1;
                        true
                    });
                    n
                })
                .into_iter()
                .sum()
            } else {
                let mut n = 0u64;
                kernel.search(q.target_size, false, &mut |_| {
                    n += 1;
                    true
                });
                n
            };
            Ok(CliqueOutcome::Count(count))
        }
        CliqueMode::EnumerateAll => {
            let kernel = Kernel::new(g);
            let limit = q.limit.unwrap_or(usize::MAX);
            let mut out: Vec<Vec<usize>> = Vec::new();
            if q.parallel {
                for part in kernel.par_branches(q.target_size, |ctx, root| {
                    let mut found = Vec::new();
                    ctx.run_branch(root, &mut |c| {
                        found.push(c.to_vec());
                        found.len() <= limit
                    });
                    found
                }) {
                    out.extend(part);
                    if out.len() > limit {
                        break;
                    }
                }
            } else {
                kernel.search(q.target_size, false, &mut |c| {
                    out.push(c.to_vec());
                    out.len() <= limit
                });
            }
            if out.len() > limit {
                return Err(Error::CliqueLimitExceeded { limit });
            }
            out.sort_unstable();
            Ok(CliqueOutcome::Cliques(out))
        }
    }
}

/// All cliques of exactly `k` vertices, lexicographically ordered.
pub fn cliques_of_size(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    match enumerate_cliques(g, &CliqueQuery::enumerate(k)) {
        Ok(CliqueOutcome::Cliques(c)) => c,
        _ => Vec::new(),
    }
}

pub fn count_cliques(g: &Graph, k: usize) -> u64 {
    match enumerate_cliques(g, &CliqueQuery::count(k)) {
        Ok(CliqueOutcome::Count(c)) => c,
        _ => 0,
    }
}

/// Streams every `k`-clique (each sorted ascending) until `visit` returns
/// `false`. The order is deterministic but not lexicographic.
pub fn for_each_clique(g: &Graph, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k == 0 {
        return;
    }
    Kernel::new(g).search(k, false, &mut visit);
}

/// Folds every `k`-clique into one accumulator per top-level branch; the
/// branches run on the rayon pool and come back in ascending order of their
/// smallest vertex, each having seen its cliques in a deterministic order.
pub fn fold_cliques_par<A: Send>(
    g: &Graph,
    k: usize,
    init: impl Fn() -> A + Sync,
    step: impl Fn(&mut A, &[usize]) + Sync,
) -> Vec<A> {
    if k == 0 {
        return Vec::new();
    }
    Kernel::new(g).par_branches(k, |ctx, root| {
        let mut acc = init();
        ctx.run_branch(root, &mut |c| {
            step(&mut acc, c);
            true
        });
        acc
    })
}

/// Lexicographically least `k`-clique.
pub fn first_clique(g: &Graph, k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let mut first = None;
    Kernel::new(g).search(k, true, &mut |c| {
        first = Some(c.to_vec());
        false
    });
    first
}

/// A maximum clique; the lexicographically least one among those of
/// maximum size. Empty for the empty graph.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    if g.n() == 0 {
        return Vec::new();
    }
    let omega = Kernel::new(g).max_size();
    first_clique(g, omega).expect("a clique of the maximum size exists")
}

/// Search state shared by all branches: flat adjacency rows.
struct Kernel {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

/// Per-search scratch space.
struct Ctx<'a> {
    kernel: &'a Kernel,
    target: usize,
    clique: Vec<usize>,
    /// One candidate set per depth.
    sets: Vec<Vec<u64>>,
    /// Colour index of each vertex in the latest colouring.
    colour_of: Vec<u32>,
    /// `(vertex, bound)` in ascending vertex order, one list per depth.
    orders: Vec<Vec<(u32, u32)>>,
    /// Branch in ascending vertex order only, so cliques come out sorted
    /// and in lexicographic order.
    lex_order: bool,
    sorted: Vec<usize>,
    stop: bool,
}

impl Kernel {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for v in 0..n {
            adj[v * words..(v + 1) * words].copy_from_slice(g.neighbors(v).words());
        }
        Kernel { n, words, adj }
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn ctx(&self, target: usize) -> Ctx<'_> {
        Ctx {
            kernel: self,
            target,
            clique: Vec::with_capacity(target),
            sets: vec![vec![0; self.words]; target + 1],
            colour_of: vec![0; self.n],
            orders: vec![Vec::new(); target + 1],
            lex_order: false,
            sorted: Vec::with_capacity(target),
            stop: false,
        }
    }

    fn all_vertices(&self) -> Vec<u64> {
        let mut set = vec![!0u64; self.words];
        if !self.n.is_multiple_of(64) {
            set[self.words - 1] = (1u64 << (self.n % 64)) - 1;
        }
        if self.n == 0 {
            set.fill(0);
        }
        set
    }

    fn search(&self, target: usize, lex_order: bool, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if target > self.n {
            return;
        }
        let mut ctx = self.ctx(target);
        ctx.lex_order = lex_order;
        ctx.sets[0] = self.all_vertices();
        ctx.expand(0, visit);
    }

    /// Runs `branch` once per surviving top-level vertex in parallel; results
    /// come back in ascending vertex order.
    fn par_branches<T: Send>(
        &self,
        target: usize,
        branch: impl Fn(&mut Ctx<'_>, usize) -> T + Sync,
    ) -> Vec<T> {
        if target > self.n {
            return Vec::new();
        }
        let mut root = self.ctx(target);
        root.sets[0] = self.all_vertices();
        root.colour(0);
        let roots: Vec<usize> = root.orders[0]
            .iter()
            .take_while(|&&(_, bound)| bound as usize >= target)
            .map(|&(v, _)| v as usize)
            .collect();
        roots
            .into_par_iter()
            .map(|v| {
                let mut ctx = self.ctx(target);
                branch(&mut ctx, v)
            })
            .collect()
    }

    /// Size of a maximum clique.
    fn max_size(&self) -> usize {
        let mut ctx = self.ctx(self.n);
        ctx.sets[0] = self.all_vertices();
        let mut best = 0;
        ctx.expand_max(0, &mut best);
        best
    }
}

impl Ctx<'_> {
    /// Clique through `root` using only larger vertices.
    fn run_branch(&mut self, root: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let k = self.kernel;
        let mut set = k.row(root).to_vec();
        clear_upto(&mut set, root);
        self.sets[1] = set;
        self.clique.push(root);
        self.expand(1, visit);
        self.clique.pop();
    }

    /// Colours `sets[depth]` class by class and fills `orders[depth]`,
    /// ascending, with the largest colour index among candidates `>= v`.
    fn colour(&mut self, depth: usize) {
        let k = self.kernel;
        let w = k.words;
        let mut order = std::mem::take(&mut self.orders[depth]);
        order.clear();
        let mut uncoloured = self.sets[depth].clone();
        let mut used = 0u32;
        while uncoloured.iter().any(|&x| x != 0) {
            used += 1;
            let mut open = uncoloured.clone();
            // build one independent class, always taking the highest open vertex
            let mut wi = w;
            while wi > 0 {
                let bits = open[wi - 1];
                if bits == 0 {
                    wi -= 1;
                    continue;
                }
                let b = 63 - bits.leading_zeros() as usize;
                let v = (wi - 1) * 64 + b;
                uncoloured[wi - 1] &= !(1u64 << b);
                open[wi - 1] &= !(1u64 << b);
                for (o, r) in open[..wi].iter_mut().zip(k.row(v)) {
                    *o &= !r;
                }
                self.colour_of[v] = used;
            }
        }
        // suffix bound: colours used by the candidates >= v
        let mut best = 0u32;
        for wi in (0..w).rev() {
            let mut bits = self.sets[depth][wi];
            while bits != 0 {
                let b = 63 - bits.leading_zeros() as usize;
                bits &= !(1u64 << b);
                let v = wi * 64 + b;
                best = best.max(self.colour_of[v]);
                order.push((v as u32, best));
            }
        }
        order.reverse();
        self.orders[depth] = order;
    }

    fn emit(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let go_on = if self.lex_order {
            visit(&self.clique)
        } else {
            self.sorted.clear();
            self.sorted.extend_from_slice(&self.clique);
            self.sorted.sort_unstable();
            visit(&self.sorted)
        };
        if !go_on {
            self.stop = true;
        }
    }

    fn expand(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let need = self.target - self.clique.len();
        if need == 0 {
            self.emit(visit);
            return;
        }
        let k = self.kernel;
        let size: usize = self.sets[depth].iter().map(|x| x.count_ones() as usize).sum();
        if size < need {
            return;
        }
        if need == 1 {
            let set = self.sets[depth].clone();
            for v in ones(&set) {
                self.clique.push(v);
                self.emit(visit);
                self.clique.pop();
                if self.stop {
                    return;
                }
            }
            return;
        }
        self.colour(depth);
        let colours = self.orders[depth].first().map_or(0, |x| x.1 as usize);
        if colours < need {
            return;
        }
        let order = std::mem::take(&mut self.orders[depth]);
        for &(v, bound) in &order {
            if (bound as usize) < need || self.stop {
                break;
            }
            let v = v as usize;
            // candidates left after `v` is consumed are exactly those above it
            let (lo, hi) = self.sets.split_at_mut(depth + 1);
            let cur = &mut lo[depth];
            cur[v >> 6] &= !(1u64 << (v & 63));
            for ((dst, a), b) in hi[0].iter_mut().zip(cur.iter()).zip(k.row(v)) {
                *dst = a & b;
            }
            self.clique.push(v);
            self.expand(depth + 1, visit);
            self.clique.pop();
        }
        self.orders[depth] = order;
    }

    fn expand_max(&mut self, depth: usize, best: &mut usize) {
        let have = self.clique.len();
        if have > *best {
            *best = have;
        }
        let k = self.kernel;
        let size: usize = self.sets[depth].iter().map(|x| x.count_ones() as usize).sum();
        if have + size <= *best {
            return;
        }
        self.colour(depth);
        let order = std::mem::take(&mut self.orders[depth]);
        for &(v, bound) in &order {
            if have + bound as usize <= *best {
                break;
            }
            let v = v as usize;
            let (lo, hi) = self.sets.split_at_mut(depth + 1);
            let cur = &mut lo[depth];
            cur[v >> 6] &= !(1u64 << (v & 63));
            for ((dst, a), b) in hi[0].iter_mut().zip(cur.iter()).zip(k.row(v)) {
                *dst = a & b;
            }
            self.clique.push(v);
            self.expand_max(depth + 1, best);
            self.clique.pop();
        }
        self.orders[depth] = order;
    }
}

fn ones(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                wi * 64 + b
            })
        })
    })
}

/// Clears bits `0..=v`.
fn clear_upto(set: &mut [u64], v: usize) {
    let wi = v >> 6;
    for w in &mut set[..wi] {
        *w = 0;
    }
    let keep = if v & 63 == 63 { 0 } else { !0u64 << ((v & 63) + 1) };
    set[wi] &= keep;
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Plain recursive enumeration over ascending vertex lists.
    fn naive_cliques(g: &Graph, k: usize) -> Vec<Vec<usize>> {
        fn go(g: &Graph, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..g.n() {
                if cur.iter().all(|&u| g.has_edge(u, v)) {
                    cur.push(v);
                    go(g, k, v + 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(g, k, 0, &mut Vec::new(), &mut out);
        out
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        Graph::from_fn(n, |_, _| rng.gen_bool(p))
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn triangle_edges() {
        let k3 = Graph::complete(3);
        assert_eq!(cliques_of_size(&k3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn complete_graph_counts_are_binomial() {
        for n in [1, 5, 9, 70] {
            let g = Graph::complete(n);
            for k in 1..=n.min(6) {
                assert_eq!(count_cliques(&g, k), binomial(n as u64, k as u64), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn matches_naive_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=12);
            let p = rng.gen_range(0.2..0.9);
            let g = random_graph(&mut rng, n, p);
            for k in 1..=n {
                assert_eq!(cliques_of_size(&g, k), naive_cliques(&g, k));
            }
            let omega = (1..=n).rev().find(|&k| !naive_cliques(&g, k).is_empty()).unwrap();
            let best = max_clique(&g);
            assert_eq!(best.len(), omega);
            assert_eq!(best, naive_cliques(&g, omega)[0]);
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_graph(&mut rng, 150, 0.5);
        for k in [3, 5, 7] {
            let seq = enumerate_cliques(&g, &CliqueQuery::enumerate(k)).unwrap();
            let par = enumerate_cliques(&g, &CliqueQuery::enumerate(k).parallel(true)).unwrap();
            assert_eq!(seq, par);
            let CliqueOutcome::Cliques(list) = seq else { unreachable!() };
            let count = enumerate_cliques(&g, &CliqueQuery::count(k).parallel(true)).unwrap();
            assert_eq!(count, CliqueOutcome::Count(list.len() as u64));
        }
    }

    #[test]
    fn counts_are_relabeling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_graph(&mut rng, 40, 0.6);
        let mut perm: Vec<usize> = (0..40).collect();
        for i in (1..40).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel(&perm);
        for k in 2..8 {
            assert_eq!(count_cliques(&g, k), count_cliques(&h, k));
        }
    }

    #[test]
    fn edgeless_graph_max_clique_is_first_vertex() {
        assert_eq!(max_clique(&Graph::empty(4)), vec![0]);
        assert_eq!(max_clique(&Graph::empty(0)), Vec::<usize>::new());
    }

    #[test]
    fn limit_is_enforced() {
        let g = Graph::complete(6);
        let err = enumerate_cliques(&g, &CliqueQuery::enumerate(2).limit(10)).unwrap_err();
        assert_eq!(err, Error::CliqueLimitExceeded { limit: 10 });
        assert!(enumerate_cliques(&g, &CliqueQuery::enumerate(2).limit(15)).is_ok());
    }

    #[test]
    fn word_boundary_vertices() {
        let g = Graph::complete(129);
        assert_eq!(count_cliques(&g, 2), binomial(129, 2));
        assert_eq!(max_clique(&g).len(), 129);
        let mut h = Graph::empty(130);
        h.add_edge(63, 64);
        h.add_edge(64, 127);
        h.add_edge(63, 127);
        assert_eq!(cliques_of_size(&h, 3), vec![vec![63, 64, 127]]);
    }
}
