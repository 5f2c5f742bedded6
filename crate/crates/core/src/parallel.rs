//! Parallel classes, orthogonality between them, maximum families of
//! pairwise orthogonal classes and the bounds such families obey.

use serde::{Deserialize, Serialize};

use crate::cliques::{enumerate_cliques, max_clique, CliqueOutcome, CliqueQuery};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::{require_pg, IncidenceStructure, PgParams};

/// A set of pairwise disjoint lines covering every point exactly once.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParallelClass {
    lines: Vec<usize>,
}

impl ParallelClass {
    /// Validates `lines` as a parallel class of `s`.
    pub fn new(s: &IncidenceStructure, lines: Vec<usize>) -> Result<Self> {
        let mut lines = lines;
        lines.sort_unstable();
        let bad = |msg: String| Err(Error::InvalidParallelClass(msg));
        if let Some(w) = lines.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("line {} listed twice", w[0]));
        }
        let mut cover = vec![usize::MAX; s.num_points()];
        for &l in &lines {
            if l >= s.num_lines() {
                return bad(format!("line {l} does not exist"));
            }
            for &p in s.line(l) {
                if cover[p] != usize::MAX {
                    return bad(format!("lines {} and {l} share point {p}", cover[p]));
                }
                cover[p] = l;
            }
        }
        if let Some(p) = cover.iter().position(|&c| c == usize::MAX) {
            return bad(format!("point {p} is not covered"));
        }
        Ok(ParallelClass { lines })
    }

    /// Line indices, ascending.
    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    /// Number of lines shared with `other`.
    pub fn common_lines(&self, other: &ParallelClass) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.lines.len() && j < other.lines.len() {
            match self.lines[i].cmp(&other.lines[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// Pairwise orthogonal parallel classes (any two share exactly one line)
/// with the number of classes through every line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalFamily {
    classes: Vec<ParallelClass>,
    multiplicities: Vec<usize>,
}

impl OrthogonalFamily {
    /// Validates pairwise orthogonality of classes of `s` and both
    /// double-counting identities.
    pub fn new(s: &IncidenceStructure, classes: Vec<ParallelClass>) -> Result<Self> {
        for (i, a) in classes.iter().enumerate() {
            for (j, b) in classes.iter().enumerate().skip(i + 1) {
                let c = a.common_lines(b);
                if c != 1 {
                    return Err(Error::InvalidFamily(format!(
                        "classes {i} and {j} share {c} lines"
                    )));
                }
            }
        }
        let mut multiplicities = vec![0; s.num_lines()];
        for class in &classes {
            for &l in class.lines() {
                multiplicities[l] += 1;
            }
        }
        let family = OrthogonalFamily {
            classes,
            multiplicities,
        };
        if !family.identities_hold() {
            return Err(Error::InvalidFamily("counting identities fail".into()));
        }
        Ok(family)
    }

    pub fn classes(&self) -> &[ParallelClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of classes containing each line.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Σ kᵢ = m·(class size) and Σ kᵢ(kᵢ−1) = m(m−1), recomputed from the
    /// classes.
    pub fn identities_hold(&self) -> bool {
        let m = self.classes.len();
        let size = self.classes.first().map_or(0, |c| c.lines().len());
        let sum: usize = self.multiplicities.iter().sum();
        let pairs: usize = self.multiplicities.iter().map(|&k| k * k.saturating_sub(1)).sum();
        sum == m * size && pairs == m * m.saturating_sub(1)
    }
}

/// Lines as vertices, adjacent when disjoint.
pub fn disjointness_graph(s: &IncidenceStructure) -> Graph {
    let through = s.lines_through();
    let mut meets = Graph::empty(s.num_lines());
    for lines in &through {
        for (a, &x) in lines.iter().enumerate() {
            for &y in &lines[a + 1..] {
                meets.add_edge(x, y);
            }
        }
    }
    meets.complement()
}

/// Every parallel class of the partial geometry `s`, in lexicographic order
/// of line-index sets.
pub fn all_parallel_classes(s: &IncidenceStructure) -> Result<Vec<ParallelClass>> {
    let (sz, _, _) = require_pg(s)?;
    let v = s.num_points();
    if !v.is_multiple_of(sz + 1) {
        return Err(Error::Refused(format!("line size {} does not divide {v}", sz + 1)));
    }
    let size = v / (sz + 1);
    let g = disjointness_graph(s);
    let CliqueOutcome::Cliques(cliques) =
        enumerate_cliques(&g, &CliqueQuery::enumerate(size).parallel(true))?
    else {
        unreachable!("enumeration mode returns cliques");
    };
    cliques.into_iter().map(|c| ParallelClass::new(s, c)).collect()
}

/// Classes as vertices, adjacent when they share exactly one line.
pub fn orthogonality_graph(classes: &[ParallelClass]) -> Graph {
    Graph::from_fn(classes.len(), |a, b| classes[a].common_lines(&classes[b]) == 1)
}

/// A maximum family of pairwise orthogonal parallel classes; among several,
/// the one with lexicographically least class indices (into the output of
/// [`all_parallel_classes`]).
pub fn max_orthogonal_family(s: &IncidenceStructure) -> Result<OrthogonalFamily> {
    let classes = all_parallel_classes(s)?;
    let best = max_clique(&orthogonality_graph(&classes));
    OrthogonalFamily::new(s, best.into_iter().map(|i| classes[i].clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Families in the geometry itself.
    Primal,
    /// Families in the dual geometry.
    Dual,
}

/// Largest possible number of pairwise orthogonal parallel classes:
/// d(dd′−d′+1) in the geometry, d′(d′d−d+1) in its dual.
pub fn orthogonal_family_bound(p: &PgParams, side: Side) -> usize {
    let (d, e) = match side {
        Side::Primal => (p.d, p.d_prime),
        Side::Dual => (p.d_prime, p.d),
    };
    d * (d * e - e + 1)
}

/// Whether `f` meets the bound for the geometry with parameters `p`; if so,
/// every line must then lie in exactly `d` classes, which is checked too.
pub fn check_tightness(f: &OrthogonalFamily, p: &PgParams) -> bool {
    f.len() == orthogonal_family_bound(p, Side::Primal) && f.multiplicities().iter().all(|&k| k == p.d)
}
