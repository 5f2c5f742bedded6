//! Enumeration and classification of the partial geometries pg(4,6,3)
//! whose point graph is T̄(10), plus a resumable exact-cover search for the
//! analogous geometries on T̄(m).
//!
//! Points of T̄(m) are the 2-subsets of {0..m−1} (in lexicographic order)
//! and two are adjacent when disjoint, so its cliques of size m/2 are the
//! perfect matchings of K_m. A geometry with point graph T̄(10) is a set of
//! 63 matchings, any two sharing at most one pair: a 63-clique of the graph
//! Ω on all 945 matchings.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::autiso::{are_isomorphic, canonical_form};
use crate::catalog::builtin;
use crate::cliques::fold_cliques_par;
use crate::error::{Error, Result};
use crate::gf2::rank2;
use crate::graph::Graph;
use crate::incidence::{IncidenceStructure, PgParams};
use crate::parallel::all_parallel_classes;
use crate::srg::{bose_geometric_check, pairs, triangular_graph};

/// All perfect matchings of K_m, each as the ascending indices of its pairs
/// in the lexicographic pair order; the list is sorted.
pub fn perfect_matchings(m: usize) -> Vec<Vec<usize>> {
    assert!(m.is_multiple_of(2), "perfect matchings need an even number of vertices");
    let index = pair_index_table(m);
    let mut out = Vec::new();
    let mut free: Vec<usize> = (0..m).collect();
    let mut cur = Vec::new();
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<usize>, index: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        if free.is_empty() {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(m);
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push(index[a][b]);
            rec(free, cur, index, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    rec(&mut free, &mut cur, &index, &mut out);
    out.sort_unstable();
    out
}

/// `table[a][b]` = index of the pair {a, b} in the lexicographic order.
fn pair_index_table(m: usize) -> Vec<Vec<usize>> {
    let mut table = vec![vec![usize::MAX; m]; m];
    for (i, (a, b)) in pairs(m).into_iter().enumerate() {
        table[a][b] = i;
        table[b][a] = i;
    }
    table
}

/// The graph Ω: perfect matchings of K_10, adjacent when they share at
/// most one pair.
#[derive(Debug, Clone)]
pub struct OmegaGraph {
    /// Vertices: matchings as pair-index lists, lexicographically ordered.
    pub matchings: Vec<Vec<usize>>,
    pub graph: Graph,
}

pub fn build_omega() -> OmegaGraph {
    let matchings = perfect_matchings(10);
    let graph = Graph::from_fn(matchings.len(), |a, b| {
        matchings[a].iter().filter(|p| matchings[b].binary_search(p).is_ok()).count() <= 1
    });
    OmegaGraph { matchings, graph }
}

impl OmegaGraph {
    /// The geometry on the 45 pairs whose lines are the chosen matchings.
    pub fn geometry(&self, clique: &[usize]) -> IncidenceStructure {
        IncidenceStructure::new(45, clique.iter().map(|&i| self.matchings[i].clone()).collect())
            .expect("matchings are sets of pair indices")
    }
}

/// Cheap invariants separating the isomorphism classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub parallel_classes: usize,
    pub rank2: usize,
}

pub fn fingerprint(g: &IncidenceStructure) -> Result<Fingerprint> {
    Ok(Fingerprint {
        parallel_classes: all_parallel_classes(g)?.len(),
        rank2: rank2(g),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEntry {
    pub fingerprint: Fingerprint,
    /// Number of enumerated geometries with this fingerprint.
    pub count: u64,
    pub aut_order: u128,
    /// 10! / aut_order.
    pub orbit_size: u128,
    /// First geometry of the bucket in enumeration order.
    pub representative: IncidenceStructure,
    pub sample_size: usize,
    /// All sampled members are isomorphic to the representative.
    pub sample_isomorphic: bool,
    /// Built-in geometry isomorphic to the representative, if any.
    pub matches_builtin: Option<String>,
    /// Size of the stabilizer of the representative's line set in S₁₀,
    /// found by checking every permutation of the ten symbols.
    pub s10_stabilizer: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub omega_vertices: usize,
    pub total_cliques: u64,
    /// Every enumerated line set passed the Bose clique criterion.
    pub all_geometric: bool,
    pub classes: Vec<ClassEntry>,
    /// Representatives of different buckets are pairwise non-isomorphic.
    pub representatives_distinct: bool,
    /// Orbit sizes match bucket sizes and add up to the total.
    pub accounting_valid: bool,
    pub enumeration_seconds: f64,
    pub total_seconds: f64,
}

impl ClassificationReport {
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .classes
            .iter()
            .map(|c| format!("{}×{}", c.aut_order, c.orbit_size))
            .collect();
        format!(
            "{} geometries, {} classes ({})",
            self.total_cliques,
            self.classes.len(),
            parts.join(", ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Members sampled per bucket for the pairwise isomorphism check.
    pub sample_size: usize,
    pub seed: u64,
    /// Run the S₁₀ permutation filter on every representative.
    pub s10_check: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            sample_size: 50,
            seed: 0x5eed,
            s10_check: true,
        }
    }
}

/// Per-branch summary of the stream.
#[derive(Default)]
struct Bucket {
    count: u64,
    first: Option<Vec<usize>>,
    /// Members with the smallest keyed hashes: a uniform random sample
    /// that merges across branches.
    sample: Vec<(u64, Vec<usize>)>,
}

fn keyed_hash(seed: u64, clique: &[usize]) -> u64 {
    let mut h = seed;
    for &x in clique {
        let mut z = (h ^ x as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

fn keep_smallest(sample: &mut Vec<(u64, Vec<usize>)>, k: usize) {
    sample.sort_unstable();
    sample.truncate(k);
}

#[derive(Default)]
struct BranchSummary {
    total: u64,
    non_geometric: u64,
    buckets: BTreeMap<Fingerprint, Bucket>,
}

/// Enumerates all 63-cliques of Ω and classifies the geometries.
pub fn classify_pg463(opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let start = Instant::now();
    let omega = build_omega();
    let tbar = triangular_graph(10)?.complement();
    let params = PgParams::from_dd(4, 2)?;
    let branches = fold_cliques_par(&omega.graph, params.b, BranchSummary::default, |acc, clique| {
        acc.total += 1;
        let geo = omega.geometry(clique);
        if !bose_geometric_check(&tbar, geo.lines()) {
            acc.non_geometric += 1;
            return;
        }
        let Ok(fp) = fingerprint(&geo) else {
            acc.non_geometric += 1;
            return;
        };
        let bucket = acc.buckets.entry(fp).or_default();
        bucket.count += 1;
        if bucket.first.is_none() {
            bucket.first = Some(clique.to_vec());
        }
        bucket.sample.push((keyed_hash(opts.seed, clique), clique.to_vec()));
        if bucket.sample.len() > 2 * opts.sample_size.max(1) {
            keep_smallest(&mut bucket.sample, opts.sample_size);
        }
    });
    let enumeration_seconds = start.elapsed().as_secs_f64();
    let mut total = 0;
    let mut non_geometric = 0;
    let mut merged: BTreeMap<Fingerprint, Bucket> = BTreeMap::new();
    for b in branches {
        total += b.total;
        non_geometric += b.non_geometric;
        for (fp, bucket) in b.buckets {
            let m = merged.entry(fp).or_default();
            m.count += bucket.count;
            if m.first.is_none() {
                m.first = bucket.first;
            }
            m.sample.extend(bucket.sample);
            keep_smallest(&mut m.sample, opts.sample_size);
        }
    }
    let group = factorial(10);
    let builtins: Vec<(String, IncidenceStructure)> = ["G1", "G2"]
        .iter()
        .map(|n| builtin(n).map(|s| (n.to_string(), s)))
        .collect::<Result<_>>()?;
    let mut classes = Vec::new();
    for (fp, bucket) in &merged {
        let rep_clique = bucket.first.as_ref().expect("non-empty bucket");
        let rep = omega.geometry(rep_clique);
        let cf = canonical_form(&rep);
        let sample_isomorphic = bucket
            .sample
            .iter()
            .all(|(_, c)| canonical_form(&omega.geometry(c)).certificate == cf.certificate);
        let matches_builtin = builtins
            .iter()
            .find(|(_, s)| are_isomorphic(s, &rep))
            .map(|(n, _)| n.clone());
        let s10_stabilizer = opts.s10_check.then(|| line_set_stabilizer(10, rep.lines()));
        classes.push(ClassEntry {
            fingerprint: *fp,
            count: bucket.count,
            aut_order: cf.aut_order,
            orbit_size: group / cf.aut_order,
            representative: rep,
            sample_size: bucket.sample.len(),
            sample_isomorphic,
            matches_builtin,
            s10_stabilizer,
        });
    }
    // largest automorphism group first
    classes.sort_by(|a, b| b.aut_order.cmp(&a.aut_order).then(a.fingerprint.cmp(&b.fingerprint)));
    let reps: Vec<Vec<u8>> = classes
        .iter()
        .map(|c| canonical_form(&c.representative).certificate)
        .collect();
    let representatives_distinct =
        (0..reps.len()).all(|i| (i + 1..reps.len()).all(|j| reps[i] != reps[j]));
    let accounting_valid = non_geometric == 0
        && classes.iter().all(|c| group.is_multiple_of(c.aut_order) && c.orbit_size == c.count as u128)
        && classes.iter().map(|c| c.orbit_size).sum::<u128>() == total as u128;
    Ok(ClassificationReport {
        omega_vertices: omega.matchings.len(),
        total_cliques: total,
        all_geometric: non_geometric == 0,
        classes,
        representatives_distinct,
        accounting_valid,
        enumeration_seconds,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Number of permutations of the `m` symbols whose induced action on pairs
/// maps the given set of lines (sets of pair indices) onto itself.
pub fn line_set_stabilizer(m: usize, lines: &[Vec<usize>]) -> u64 {
    let ps = pairs(m);
    let index = pair_index_table(m);
    let mut set: Vec<Vec<usize>> = lines.to_vec();
    for l in &mut set {
        l.sort_unstable();
    }
    set.sort_unstable();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut count = 0;
    let mut image = Vec::new();
    loop {
        let fixes = set.iter().all(|l| {
            image.clear();
            image.extend(l.iter().map(|&p| {
                let (a, b) = ps[p];
                index[perm[a]][perm[b]]
            }));
            image.sort_unstable();
            set.binary_search(&image).is_ok()
        });
        if fixes {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    count
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Position of an interrupted cover search: branch indices from the root
/// to the next node to expand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub m: usize,
    pub path: Vec<usize>,
    pub nodes: u64,
    pub solutions_found: u64,
}

#[derive(Debug, Clone, Default)]
pub struct CoverSearchOptions {
    pub node_budget: Option<u64>,
    /// Stop after this many solutions.
    pub max_solutions: Option<u64>,
    /// Keep at most this many solutions in the outcome.
    pub keep: usize,
    pub resume: Option<Checkpoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverSearchOutcome {
    pub m: usize,
    pub lines_needed: usize,
    pub nodes: u64,
    pub solutions_found: u64,
    /// Solutions as lists of matchings, each a list of pairs.
    pub solutions: Vec<Vec<Vec<(usize, usize)>>>,
    /// Whole tree explored.
    pub finished: bool,
    pub checkpoint: Option<Checkpoint>,
}

/// Searches for geometries with point graph T̄(m), m = 2d+2: sets of perfect
/// matchings of K_m covering every pair of disjoint pairs exactly once.
/// Branches on the first uncovered pair of disjoint pairs, trying the
/// matchings through it in lexicographic order; candidate matchings are
/// generated on the fly, so large m only costs memory per depth.
pub fn matching_cover_search(m: usize, opts: &CoverSearchOptions) -> Result<CoverSearchOutcome> {
    if m < 6 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("m must be even and at least 6, got {m}")));
    }
    if let Some(cp) = &opts.resume {
        if cp.m != m {
            return Err(Error::InvalidParameters(format!(
                "checkpoint is for m = {}, not {m}",
                cp.m
            )));
        }
    }
    let d = (m - 2) / 2;
    let params = PgParams::from_dd(d, 2)?;
    let ps = pairs(m);
    let n = ps.len();
    let mut search = CoverSearch {
        m,
        ps: ps.clone(),
        index: pair_index_table(m),
        n,
        covered: vec![false; n * n],
        uncovered: ps.len() * pairs(m - 2).len() / 2,
        chosen: Vec::new(),
        nodes: opts.resume.as_ref().map_or(0, |c| c.nodes),
        found: opts.resume.as_ref().map_or(0, |c| c.solutions_found),
        solutions: Vec::new(),
        opts: opts.clone(),
        stopped: None,
        path: Vec::new(),
    };
    let resume = opts.resume.as_ref().map(|c| c.path.clone());
    search.dfs(resume.as_deref());
    let finished = search.stopped.is_none();
    Ok(CoverSearchOutcome {
        m,
        lines_needed: params.b,
        nodes: search.nodes,
        solutions_found: search.found,
        solutions: search.solutions,
        finished,
        checkpoint: search.stopped.map(|path| Checkpoint {
            m,
            path,
            nodes: search.nodes,
            solutions_found: search.found,
        }),
    })
}

struct CoverSearch {
    m: usize,
    ps: Vec<(usize, usize)>,
    index: Vec<Vec<usize>>,
    n: usize,
    /// covered[e * n + f]: the disjoint pairs e, f lie in a chosen matching.
    covered: Vec<bool>,
    uncovered: usize,
    chosen: Vec<Vec<usize>>,
    nodes: u64,
    found: u64,
    solutions: Vec<Vec<Vec<(usize, usize)>>>,
    opts: CoverSearchOptions,
    stopped: Option<Vec<usize>>,
    path: Vec<usize>,
}

impl CoverSearch {
    fn disjoint(&self, e: usize, f: usize) -> bool {
        let (a, b) = self.ps[e];
        let (c, d) = self.ps[f];
        a != c && a != d && b != c && b != d
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        (0..self.n).find_map(|e| {
            (e + 1..self.n)
                .find(|&f| self.disjoint(e, f) && !self.covered[e * self.n + f])
                .map(|f| (e, f))
        })
    }

    /// Matchings containing pairs `e` and `f` none of whose pairs of pairs
    /// is covered yet, in lexicographic order.
    fn candidates(&self, e: usize, f: usize) -> Vec<Vec<usize>> {
        let mut used = vec![false; self.m];
        for &p in &[e, f] {
            let (a, b) = self.ps[p];
            used[a] = true;
            used[b] = true;
        }
        let mut out = Vec::new();
        let mut cur = vec![e, f];
        self.complete(&mut used, &mut cur, &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort_unstable();
        out
    }

    fn complete(&self, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(a) = used.iter().position(|&u| !u) else {
            out.push(cur.clone());
            return;
        };
        used[a] = true;
        for b in a + 1..self.m {
            if used[b] {
                continue;
            }
            let p = self.index[a][b];
            if cur.iter().any(|&q| self.covered[p * self.n + q]) {
                continue;
            }
            used[b] = true;
            cur.push(p);
            self.complete(used, cur, out);
            cur.pop();
            used[b] = false;
        }
        used[a] = false;
    }

    fn set_cover(&mut self, matching: &[usize], value: bool) {
        for (i, &e) in matching.iter().enumerate() {
            for &f in &matching[i + 1..] {
                self.covered[e * self.n + f] = value;
                self.covered[f * self.n + e] = value;
            }
        }
        let k = matching.len() * (matching.len() - 1) / 2;
        if value {
            self.uncovered -= k;
        } else {
            self.uncovered += k;
        }
    }

    fn dfs(&mut self, resume: Option<&[usize]>) {
        if self.stopped.is_some() {
            return;
        }
        if resume.is_none_or(|r| r.is_empty()) {
            if self.opts.node_budget.is_some_and(|b| self.nodes >= b)
                || self.opts.max_solutions.is_some_and(|s| self.found >= s)
            {
                self.stopped = Some(self.path.clone());
                return;
            }
            self.nodes += 1;
        }
        let Some((e, f)) = self.first_uncovered() else {
            debug_assert_eq!(self.uncovered, 0);
            if resume.is_none_or(|r| r.is_empty()) {
                self.found += 1;
                if self.solutions.len() < self.opts.keep {
                    self.solutions.push(
                        self.chosen
                            .iter()
                            .map(|mt| mt.iter().map(|&p| self.ps[p]).collect())
                            .collect(),
                    );
                }
            }
            return;
        };
        let cands = self.candidates(e, f);
        let (skip, rest) = match resume {
            Some([first, rest @ ..]) => (*first, Some(rest)),
            _ => (0, None),
        };
        for (i, c) in cands.iter().enumerate().skip(skip) {
            self.set_cover(c, true);
            self.chosen.push(c.clone());
            self.path.push(i);
            self.dfs(if i == skip { rest } else { None });
            self.path.pop();
            self.chosen.pop();
            self.set_cover(c, false);
            if self.stopped.is_some() {
                return;
            }
        }
    }
}
