//! Automorphism-group orders, canonical forms and isomorphism tests for
//! incidence structures.
//!
//! A structure is treated as a bipartite graph whose points and lines carry
//! two different colours. Ordered partitions of the vertices are refined to
//! equitable ones; the search tree individualizes, at every node, each
//! vertex of the first largest non-trivial cell in turn. Every refinement
//! step feeds an isomorphism-invariant hash, the node trace, that is used to
//! compare and prune nodes.
//!
//! The group order comes from the stabilizer chain along the leftmost path:
//! at each level the orbit of the chosen vertex is grown by searching the
//! sibling subtrees for leaves equivalent to the first leaf. The canonical
//! form is the greatest leaf, ordered by trace sequence and then by the
//! relabeled structure, with subtrees skipped when a known automorphism
//! fixing the current prefix maps them onto an already explored sibling.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::gf2::rank2;
use crate::incidence::IncidenceStructure;

/// Canonical form of an incidence structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// Canonical encoding; equal for two structures iff they are isomorphic.
    pub certificate: Vec<u8>,
    pub aut_order: u128,
    /// Canonical index of every point.
    pub point_relabeling: Vec<usize>,
    /// Canonical index of every line.
    pub line_relabeling: Vec<usize>,
}

impl CanonicalForm {
    /// The canonically relabeled copy of `s`.
    pub fn apply(&self, s: &IncidenceStructure) -> IncidenceStructure {
        s.relabel(&self.point_relabeling, &self.line_relabeling)
    }
}

pub fn canonical_form(s: &IncidenceStructure) -> CanonicalForm {
    let mut search = Search::new(s);
    let aut_order = search.automorphisms();
    search.canonical();
    let best = search.best.expect("the first leaf is always recorded");
    let v = s.num_points();
    let mut point_relabeling = vec![0; v];
    let mut line_relabeling = vec![0; s.num_lines()];
    for (pos, &x) in best.lab.iter().enumerate() {
        let x = x as usize;
        if x < v {
            point_relabeling[x] = pos;
        } else {
            line_relabeling[x - v] = pos - v;
        }
    }
    CanonicalForm {
        certificate: best.cert.iter().flat_map(|w| w.to_le_bytes()).collect(),
        aut_order,
        point_relabeling,
        line_relabeling,
    }
}

/// Order of the group of incidence-preserving point/line permutation pairs.
pub fn aut_order(s: &IncidenceStructure) -> u128 {
    Search::new(s).automorphisms()
}

pub fn are_isomorphic(a: &IncidenceStructure, b: &IncidenceStructure) -> bool {
    cheap_invariants(a) == cheap_invariants(b)
        && canonical_form(a).certificate == canonical_form(b).certificate
}

/// Isomorphism invariants that are cheap to compute, for filtering before
/// canonical forms are compared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheapInvariants {
    pub points: usize,
    pub lines: usize,
    pub degrees: Vec<usize>,
    pub line_sizes: Vec<usize>,
    /// Sorted multiset of line-pair intersection sizes.
    pub intersections: Vec<(usize, usize)>,
    pub rank2: usize,
}

pub fn cheap_invariants(s: &IncidenceStructure) -> CheapInvariants {
    let mut degrees = s.point_degrees();
    degrees.sort_unstable();
    let mut line_sizes = s.line_sizes();
    line_sizes.sort_unstable();
    let b = s.num_lines();
    let mut meets = vec![0usize; b * b];
    for lines in s.lines_through() {
        for (i, &x) in lines.iter().enumerate() {
            for &y in &lines[i + 1..] {
                meets[x * b + y] += 1;
            }
        }
    }
    let mut hist = std::collections::BTreeMap::new();
    for x in 0..b {
        for y in x + 1..b {
            *hist.entry(meets[x * b + y]).or_insert(0usize) += 1;
        }
    }
    CheapInvariants {
        points: s.num_points(),
        lines: b,
        degrees,
        line_sizes,
        intersections: hist.into_iter().collect(),
        rank2: rank2(s),
    }
}

/// Ordered partition of the vertices into contiguous cells of `lab`.
#[derive(Clone)]
struct Partition {
    /// Vertices in cell order.
    lab: Vec<u32>,
    /// Start position of the cell containing each vertex.
    cell_of: Vec<u32>,
    /// End position (exclusive) of the cell starting at each position.
    cell_end: Vec<u32>,
    cells: usize,
}

impl Partition {
    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First largest cell with more than one vertex, as `(start, end)`. Large
    /// cells lead to vertices in general position; in projective planes
    /// small cells tend to hold degenerate configurations that refinement
    /// cannot resolve, which makes the tree deep.
    fn target_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < self.lab.len() {
            let e = self.cell_end[s] as usize;
            if e - s > 1 && best.is_none_or(|(bs, be)| e - s > be - bs) {
                best = Some((s, e));
            }
            s = e;
        }
        best
    }

    fn cell_members(&self, (s, e): (usize, usize)) -> Vec<u32> {
        let mut m = self.lab[s..e].to_vec();
        m.sort_unstable();
        m
    }
}

struct Leaf {
    traces: Vec<u64>,
    cert: Vec<u32>,
    lab: Vec<u32>,
}

struct Search {
    v: usize,
    n: usize,
    adj: Vec<Vec<u32>>,
    root: Partition,
    root_trace: u64,
    /// Automorphisms found so far, as vertex maps.
    gens: Vec<Vec<u32>>,
    best: Option<Leaf>,
    first: Option<Leaf>,
    count: Vec<u32>,
}

fn mix(h: u64, x: u64) -> u64 {
    // one step of a 64-bit multiply-xorshift mixer
    let mut z = (h ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Union-find over vertices for orbit bookkeeping.
struct Orbits {
    parent: Vec<u32>,
}

impl Orbits {
    fn new(n: usize, gens: &[&Vec<u32>]) -> Self {
        let mut o = Orbits {
            parent: (0..n as u32).collect(),
        };
        for g in gens {
            for (x, &y) in g.iter().enumerate() {
                o.union(x as u32, y);
            }
        }
        o
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = x;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
        }
    }
}

impl Search {
    fn new(s: &IncidenceStructure) -> Self {
        let v = s.num_points();
        let b = s.num_lines();
        let n = v + b;
        let mut adj = vec![Vec::new(); n];
        for (i, line) in s.lines().iter().enumerate() {
            for &p in line {
                adj[p].push((v + i) as u32);
                adj[v + i].push(p as u32);
            }
        }
        let mut root = Partition {
            lab: (0..n as u32).collect(),
            cell_of: vec![0; n],
            cell_end: vec![0; n],
            cells: 0,
        };
        let mut queue = VecDeque::new();
        for (s0, e0) in [(0, v), (v, n)] {
            if e0 > s0 {
                root.cell_end[s0] = e0 as u32;
                root.cell_of[s0..e0].fill(s0 as u32);
                root.cells += 1;
                queue.push_back(s0 as u32);
            }
        }
        let mut search = Search {
            v,
            n,
            adj,
            root: root.clone(),
            root_trace: 0,
            gens: Vec::new(),
            best: None,
            first: None,
            count: vec![0; n],
        };
        search.root_trace = search.refine(&mut root, queue, mix(v as u64, b as u64));
        search.root = root;
        search
    }

    /// Refines `p` to the coarsest equitable partition finer than it, using
    /// the cells starting at the queued positions as initial splitters.
    fn refine(&mut self, p: &mut Partition, mut queue: VecDeque<u32>, mut trace: u64) -> u64 {
        let mut queued = vec![false; self.n];
        for &w in &queue {
            queued[w as usize] = true;
        }
        let mut touched: Vec<u32> = Vec::new();
        let mut cells: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w as usize] = false;
            if p.is_discrete() {
                break;
            }
            let (ws, we) = (w as usize, p.cell_end[w as usize] as usize);
            for i in ws..we {
                let x = p.lab[i] as usize;
                for &u in &self.adj[x] {
                    if self.count[u as usize] == 0 {
                        touched.push(u);
                    }
                    self.count[u as usize] += 1;
                }
            }
            cells.clear();
            cells.extend(touched.iter().map(|&u| p.cell_of[u as usize]));
            cells.sort_unstable();
            cells.dedup();
            for &c in &cells {
                let (s, e) = (c as usize, p.cell_end[c as usize] as usize);
                if e - s == 1 {
                    continue;
                }
                let count = &self.count;
                let slice = &mut p.lab[s..e];
                let first_key = count[slice[0] as usize];
                if slice.iter().all(|&x| count[x as usize] == first_key) {
                    trace = mix(trace, (c as u64) << 32 | first_key as u64);
                    continue;
                }
                slice.sort_unstable_by_key(|&x| (count[x as usize], x));
                // split into runs of equal count
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut a = s;
                while a < e {
                    let key = count[p.lab[a] as usize];
                    let mut z = a + 1;
                    while z < e && count[p.lab[z] as usize] == key {
                        z += 1;
                    }
                    frags.push((a, z));
                    trace = mix(trace, (a as u64) << 40 | (z as u64) << 20 | key as u64);
                    a = z;
                }
                p.cells += frags.len() - 1;
                for &(a, z) in &frags {
                    p.cell_end[a] = z as u32;
                    for i in a..z {
                        p.cell_of[p.lab[i] as usize] = a as u32;
                    }
                }
                if queued[s] {
                    for &(a, _) in &frags[1..] {
                        queued[a] = true;
                        queue.push_back(a as u32);
                    }
                } else {
                    let largest = frags
                        .iter()
                        .enumerate()
                        .max_by_key(|(i, (a, z))| (z - a, std::cmp::Reverse(*i)))
                        .map(|(i, _)| i)
                        .expect("at least two fragments");
                    for (i, &(a, _)) in frags.iter().enumerate() {
                        if i != largest {
                            queued[a] = true;
                            queue.push_back(a as u32);
                        }
                    }
                }
            }
            for &u in &touched {
                self.count[u as usize] = 0;
            }
            touched.clear();
        }
        for &u in &touched {
            self.count[u as usize] = 0;
        }
        mix(trace, p.cells as u64)
    }

    /// Child of `p` with vertex `x` individualized, and its trace.
    fn child(&mut self, p: &Partition, x: u32) -> (Partition, u64) {
        let mut c = p.clone();
        let s = c.cell_of[x as usize] as usize;
        let e = c.cell_end[s] as usize;
        let at = s + c.lab[s..e].iter().position(|&y| y == x).expect("x is in its cell");
        c.lab.swap(s, at);
        c.cell_end[s] = s as u32 + 1;
        c.cell_end[s + 1] = e as u32;
        for i in s + 1..e {
            c.cell_of[c.lab[i] as usize] = s as u32 + 1;
        }
        c.cells += 1;
        let trace = self.refine(&mut c, VecDeque::from([s as u32]), mix(s as u64, e as u64));
        (c, trace)
    }

    /// Lines listed by position, each as the sorted positions of its points.
    fn certificate(&self, lab: &[u32]) -> Vec<u32> {
        let mut pos = vec![0u32; self.n];
        for (i, &x) in lab.iter().enumerate() {
            pos[x as usize] = i as u32;
        }
        let mut cert = Vec::with_capacity(self.n * 4);
        cert.push(self.v as u32);
        cert.push((self.n - self.v) as u32);
        let mut pts = Vec::new();
        for &x in &lab[self.v..] {
            pts.clear();
            pts.extend(self.adj[x as usize].iter().map(|&p| pos[p as usize]));
            pts.sort_unstable();
            cert.push(pts.len() as u32);
            cert.extend_from_slice(&pts);
        }
        cert
    }

    /// The vertex map sending leaf `from` to leaf `to`, if it preserves
    /// incidence.
    fn leaf_map(&self, from: &[u32], to: &[u32]) -> Option<Vec<u32>> {
        let mut perm = vec![0u32; self.n];
        for (&a, &b) in from.iter().zip(to) {
            perm[a as usize] = b;
        }
        let mut image = Vec::new();
        let mut target = Vec::new();
        for x in self.v..self.n {
            image.clear();
            image.extend(self.adj[x].iter().map(|&p| perm[p as usize]));
            image.sort_unstable();
            target.clear();
            target.extend_from_slice(&self.adj[perm[x] as usize]);
            target.sort_unstable();
            if image != target {
                return None;
            }
        }
        Some(perm)
    }

    /// Generators fixing every vertex of `prefix`.
    fn stabilizer(&self, prefix: &[u32]) -> Vec<&Vec<u32>> {
        self.gens
            .iter()
            .filter(|g| prefix.iter().all(|&x| g[x as usize] == x))
            .collect()
    }

    /// Group order via the stabilizer chain along the first path. Records
    /// the first leaf and collects generators.
    fn automorphisms(&mut self) -> u128 {
        let mut nodes = vec![self.root.clone()];
        let mut traces = vec![self.root_trace];
        let mut chosen: Vec<u32> = Vec::new();
        let mut targets: Vec<Vec<u32>> = Vec::new();
        while let Some(cell) = nodes.last().unwrap().target_cell() {
            let members = nodes.last().unwrap().cell_members(cell);
            let x = members[0];
            let (c, t) = self.child(nodes.last().unwrap(), x);
            chosen.push(x);
            targets.push(members);
            nodes.push(c);
            traces.push(t);
        }
        let lab = nodes.last().unwrap().lab.clone();
        let leaf = Leaf {
            traces: traces.clone(),
            cert: self.certificate(&lab),
            lab,
        };
        self.first = Some(Leaf {
            traces: leaf.traces.clone(),
            cert: leaf.cert.clone(),
            lab: leaf.lab.clone(),
        });
        self.best = Some(leaf);

        let mut order: u128 = 1;
        for level in (0..chosen.len()).rev() {
            let x = chosen[level];
            let mut rejected: Vec<u32> = Vec::new();
            for &w in &targets[level][1..] {
                let mut orbits = Orbits::new(self.n, &self.stabilizer(&chosen[..level]));
                let rw = orbits.find(w);
                if rw == orbits.find(x) || rejected.iter().any(|&r| orbits.find(r) == rw) {
                    continue;
                }
                let mut prefix = chosen[..level].to_vec();
                prefix.push(w);
                let (c, t) = self.child(&nodes[level], w);
                let found = if t == traces[level + 1] {
                    self.find_equivalent(&c, level + 1, &traces, &mut prefix)
                } else {
                    None
                };
                match found {
                    Some(g) => self.gens.push(g),
                    None => rejected.push(w),
                }
            }
            let mut orbits = Orbits::new(self.n, &self.stabilizer(&chosen[..level]));
            let rx = orbits.find(x);
            let size = targets[level].iter().filter(|&&w| orbits.find(w) == rx).count();
            order *= size as u128;
        }
        order
    }

    /// Searches below `p` (at `depth`, reached via `prefix`) for a leaf
    /// equivalent to the first leaf; returns the automorphism.
    fn find_equivalent(
        &mut self,
        p: &Partition,
        depth: usize,
        traces: &[u64],
        prefix: &mut Vec<u32>,
    ) -> Option<Vec<u32>> {
        let Some(cell) = p.target_cell() else {
            let first = self.first.as_ref().expect("first leaf recorded");
            return self.leaf_map(&first.lab, &p.lab);
        };
        if depth >= traces.len() {
            return None;
        }
        let members = p.cell_members(cell);
        let mut tried: Vec<u32> = Vec::new();
        for w in members {
            let mut orbits = Orbits::new(self.n, &self.stabilizer(prefix));
            let rw = orbits.find(w);
            if tried.iter().any(|&r| orbits.find(r) == rw) {
                continue;
            }
            tried.push(w);
            let (c, t) = self.child(p, w);
            if t != traces[depth + 1] {
                continue;
            }
            prefix.push(w);
            let found = self.find_equivalent(&c, depth + 1, traces, prefix);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Explores the whole tree for the greatest leaf.
    fn canonical(&mut self) {
        let root = self.root.clone();
        let trace = self.root_trace;
        let mut path = vec![trace];
        let mut prefix = Vec::new();
        self.canonical_dfs(&root, &mut path, &mut prefix);
    }

    /// Compares a trace path with the best leaf's traces over its length.
    fn against_best(&self, path: &[u64]) -> std::cmp::Ordering {
        let best = &self.best.as_ref().expect("best leaf recorded").traces;
        let k = path.len().min(best.len());
        path[..k].cmp(&best[..k]).then(if path.len() > best.len() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        })
    }

    fn canonical_dfs(
        &mut self,
        p: &Partition,
        path: &mut Vec<u64>,
        prefix: &mut Vec<u32>,
    ) {
        use std::cmp::Ordering::*;
        let Some(cell) = p.target_cell() else {
            let cert = self.certificate(&p.lab);
            let state = self.against_best(path);
            let best = self.best.as_ref().expect("best leaf recorded");
            let cmp = match state {
                Equal if path.len() == best.traces.len() => cert.cmp(&best.cert),
                Equal => Greater,
                other => other,
            };
            match cmp {
                Greater => {
                    self.best = Some(Leaf {
                        traces: path.clone(),
                        cert,
                        lab: p.lab.clone(),
                    })
                }
                Equal => {
                    if let Some(g) = self.leaf_map(&best.lab, &p.lab) {
                        if g.iter().enumerate().any(|(i, &x)| i as u32 != x) {
                            self.gens.push(g);
                        }
                    }
                }
                Less => {}
            }
            return;
        };
        let members = p.cell_members(cell);
        let mut tried: Vec<u32> = Vec::new();
        for w in members {
            let mut orbits = Orbits::new(self.n, &self.stabilizer(prefix));
            let rw = orbits.find(w);
            if tried.iter().any(|&r| orbits.find(r) == rw) {
                continue;
            }
            tried.push(w);
            let (c, t) = self.child(p, w);
            path.push(t);
            if self.against_best(path) == Less {
                path.pop();
                continue;
            }
            prefix.push(w);
            self.canonical_dfs(&c, path, prefix);
            prefix.pop();
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> IncidenceStructure {
        IncidenceStructure::new(
            7,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![0, 5, 6],
                vec![1, 3, 5],
                vec![1, 4, 6],
                vec![2, 3, 6],
                vec![2, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn fano_plane_group_order() {
        assert_eq!(aut_order(&fano()), 168);
        assert_eq!(canonical_form(&fano()).aut_order, 168);
    }

    #[test]
    fn single_point_single_line() {
        let s = IncidenceStructure::new(1, vec![vec![0]]).unwrap();
        assert_eq!(aut_order(&s), 1);
    }

    #[test]
    fn empty_structures() {
        let s = IncidenceStructure::new(0, vec![]).unwrap();
        assert_eq!(aut_order(&s), 1);
        let s = IncidenceStructure::new(3, vec![]).unwrap();
        assert_eq!(aut_order(&s), 6);
    }

    #[test]
    fn relabeled_copy_has_same_certificate() {
        let s = fano();
        let t = s.relabel(&[3, 1, 6, 0, 2, 5, 4], &[6, 2, 0, 1, 5, 3, 4]);
        assert_eq!(canonical_form(&s).certificate, canonical_form(&t).certificate);
        assert!(are_isomorphic(&s, &t));
        let cf = canonical_form(&s);
        assert_eq!(cf.apply(&s), canonical_form(&t).apply(&t));
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let path = IncidenceStructure::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let split = IncidenceStructure::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let fan = IncidenceStructure::new(3, vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert!(!are_isomorphic(&path, &split));
        assert!(are_isomorphic(&path, &fan));
    }
}
