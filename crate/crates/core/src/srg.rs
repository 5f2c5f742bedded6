//! Strongly regular graphs: recognition, parameter algebra, spectra, the
//! Hoffman bound, and the graphs attached to a partial geometry.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::{dual, require_pg, IncidenceStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: i64,
    pub k: i64,
    pub lambda: i64,
    pub mu: i64,
}

impl SrgParams {
    pub fn new(n: i64, k: i64, lambda: i64, mu: i64) -> Self {
        SrgParams { n, k, lambda, mu }
    }

    /// `k(k - lambda - 1) = (n - k - 1) mu`.
    pub fn is_feasible(&self) -> bool {
        let SrgParams { n, k, lambda, mu } = *self;
        n > 0
            && (0..n).contains(&k)
            && lambda >= 0
            && mu >= 0
            && k * (k - lambda - 1) == (n - k - 1) * mu
    }

    /// Parameters of the point graph of a `pg(s, t, alpha)`.
    pub fn point_graph_of(s: i64, t: i64, alpha: i64) -> Self {
        SrgParams {
            n: (s + 1) * (s * t + alpha) / alpha,
            k: s * (t + 1),
            lambda: s - 1 + t * (alpha - 1),
            mu: alpha * (t + 1),
        }
    }

    /// Parameters of the line graph of a `pg(s, t, alpha)`.
    pub fn line_graph_of(s: i64, t: i64, alpha: i64) -> Self {
        Self::point_graph_of(t, s, alpha)
    }

    /// Parameters of the triangular graph `T(m)`.
    pub fn triangular(m: i64) -> Self {
        SrgParams {
            n: m * (m - 1) / 2,
            k: 2 * (m - 2),
            lambda: m - 2,
            mu: 4,
        }
    }

    /// Parameters of the complement of `T(m)`, written with binomials.
    pub fn triangular_complement(m: i64) -> Self {
        let c2 = |x: i64| x * (x - 1) / 2;
        SrgParams {
            n: c2(m),
            k: c2(m - 2),
            lambda: c2(m - 4),
            mu: c2(m - 3),
        }
    }

    /// Point-graph parameters of a `pg(d, 2d - 2, d - 1)`.
    pub fn pg_d2_point_graph(d: i64) -> Self {
        SrgParams {
            n: (d + 1) * (2 * d + 1),
            k: d * (2 * d - 1),
            lambda: (d - 1) * (2 * d - 3),
            mu: (d - 1) * (2 * d - 1),
        }
    }
}

/// Why a graph failed to be strongly regular, with a witnessing pair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("vertices {u} and {w}: {reason}")]
pub struct SrgRefusal {
    pub u: usize,
    pub w: usize,
    pub reason: String,
}

/// Recognizes a strongly regular graph by checking every vertex pair.
///
/// For complete and edgeless graphs the undefined one of `lambda`, `mu` is
/// reported as 0.
pub fn is_srg(g: &Graph) -> std::result::Result<SrgParams, SrgRefusal> {
    let n = g.n();
    if n == 0 {
        return Err(SrgRefusal {
            u: 0,
            w: 0,
            reason: "empty vertex set".into(),
        });
    }
    let k = g.degree(0);
    if let Some(u) = (1..n).find(|&u| g.degree(u) != k) {
        return Err(SrgRefusal {
            u: 0,
            w: u,
            reason: format!("degrees {k} and {}", g.degree(u)),
        });
    }
    let mut lambda: Option<(usize, usize, usize)> = None;
    let mut mu: Option<(usize, usize, usize)> = None;
    for u in 0..n {
        for w in u + 1..n {
            let common = g.neighbors(u).intersection_count(g.neighbors(w));
            let (slot, kind) = if g.has_edge(u, w) {
                (&mut lambda, "adjacent")
            } else {
                (&mut mu, "non-adjacent")
            };
            match *slot {
                None => *slot = Some((common, u, w)),
                Some((c, u0, w0)) if c != common => {
                    return Err(SrgRefusal {
                        u,
                        w,
                        reason: format!(
                            "{kind} pairs ({u0},{w0}) and ({u},{w}) have {c} and {common} common neighbours"
                        ),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(SrgParams {
        n: n as i64,
        k: k as i64,
        lambda: lambda.map_or(0, |x| x.0 as i64),
        mu: mu.map_or(0, |x| x.0 as i64),
    })
}

/// Parameters of the complementary graph.
pub fn complement_params(p: SrgParams) -> Result<SrgParams> {
    let SrgParams { n, k, lambda, mu } = p;
    let c = SrgParams {
        n,
        k: n - 1 - k,
        lambda: n - 2 * k + mu - 2,
        mu: n - 2 * k + lambda,
    };
    if c.k < 0 || c.lambda < 0 || c.mu < 0 {
        return Err(Error::InvalidParameters(format!(
            "complement of {p:?} has negative entries {c:?}"
        )));
    }
    Ok(c)
}

/// Collinearity graph of a partial geometry.
pub fn point_graph(s: &IncidenceStructure) -> Result<Graph> {
    require_pg(s)?;
    Ok(collinearity_graph(s))
}

/// Concurrence graph of a partial geometry.
pub fn line_graph(s: &IncidenceStructure) -> Result<Graph> {
    require_pg(s)?;
    Ok(collinearity_graph(&dual(s)))
}

pub(crate) fn collinearity_graph(s: &IncidenceStructure) -> Graph {
    let mut g = Graph::empty(s.num_points());
    for line in s.lines() {
        for (i, &a) in line.iter().enumerate() {
            for &b in &line[i + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// The 2-subsets of `0..m` in lexicographic order.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

/// `T(m)`: 2-subsets of `0..m` (lexicographic), adjacent when they meet.
pub fn triangular_graph(m: usize) -> Result<Graph> {
    if m < 4 {
        return Err(Error::InvalidParameters(format!("T(m) needs m >= 4, got {m}")));
    }
    let verts = pairs(m);
    Ok(Graph::from_fn(verts.len(), |x, y| {
        let ((a, b), (c, d)) = (verts[x], verts[y]);
        a == c || a == d || b == c || b == d
    }))
}

/// The two restricted eigenvalues; `rho2` is the negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalues {
    pub rho1: i64,
    pub rho2: i64,
}

fn isqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Integer roots of `x^2 + (mu - lambda) x + (mu - k) = 0`.
pub fn eigenvalues(p: SrgParams) -> Result<Eigenvalues> {
    let b = p.mu - p.lambda;
    let c = p.mu - p.k;
    let disc = b * b - 4 * c;
    let root = isqrt(disc)
        .filter(|r| (r - b) % 2 == 0)
        .ok_or_else(|| Error::Refused(format!("{p:?} has non-integral restricted eigenvalues")))?;
    let e = Eigenvalues {
        rho1: (-b + root) / 2,
        rho2: (-b - root) / 2,
    };
    if !(e.rho1 >= 0 && e.rho2 < 0) {
        return Err(Error::Refused(format!(
            "{p:?} has eigenvalues {} and {}, expected one of each sign",
            e.rho1, e.rho2
        )));
    }
    Ok(e)
}

/// Multiplicities `(f, g)` of `rho1` and `rho2`, when integral.
pub fn multiplicities(p: SrgParams) -> Option<(i64, i64)> {
    let e = eigenvalues(p).ok()?;
    let gap = e.rho1 - e.rho2;
    let num = 2 * p.k + (p.n - 1) * (p.lambda - p.mu);
    if num % gap != 0 {
        return None;
    }
    let q = num / gap;
    let (f2, g2) = ((p.n - 1) - q, (p.n - 1) + q);
    (f2 % 2 == 0 && g2 % 2 == 0).then_some((f2 / 2, g2 / 2))
}

/// Hoffman's coclique bound and the degree every outside vertex has into a
/// coclique meeting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoffmanBound {
    pub bound: Ratio<i64>,
    pub exterior_degree: Option<Ratio<i64>>,
}

pub fn hoffman_bound(p: SrgParams) -> Result<HoffmanBound> {
    let rho = eigenvalues(p)?.rho2;
    let bound = Ratio::new(p.n * -rho, p.k - rho);
    let outside = Ratio::from_integer(p.n) - bound;
    let exterior_degree =
        (outside != Ratio::from_integer(0)).then(|| Ratio::from_integer(p.k) * bound / outside);
    Ok(HoffmanBound {
        bound,
        exterior_degree,
    })
}

/// Every integral `(s, t, alpha)` with `s, t, alpha >= 1` whose point-graph
/// parameters equal `p`, ordered by `t`.
pub fn pseudo_geometric_solutions(p: SrgParams) -> Vec<(i64, i64, i64)> {
    if p.k <= 0 || p.mu <= 0 {
        return Vec::new();
    }
    (2..=p.k.min(p.mu))
        .filter(|r| p.k % r == 0 && p.mu % r == 0)
        .map(|r| (p.k / r, r - 1, p.mu / r))
        .filter(|&(s, t, a)| {
            p.lambda == s - 1 + t * (a - 1) && p.n * a == (s + 1) * (s * t + a)
        })
        .collect()
}

/// The pseudo-geometric parameters of `p` (smallest `t` if several fit).
pub fn pseudo_geometric_params(p: SrgParams) -> Result<(i64, i64, i64)> {
    pseudo_geometric_solutions(p)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Refused(format!("{p:?} is not pseudo-geometric")))
}

/// Bose's criterion: `cliques` is the line set of a partial geometry with
/// point graph `g` iff there are `b` of them, each of size `s + 1`, each a
/// clique, pairwise sharing at most one vertex.
pub fn bose_geometric_check(g: &Graph, cliques: &[Vec<usize>]) -> bool {
    let Ok(params) = is_srg(g) else {
        return false;
    };
    pseudo_geometric_solutions(params).into_iter().any(|(s, t, a)| {
        let b = (t + 1) * (s * t + a) / a;
        cliques.len() as i64 == b
            && cliques.iter().all(|c| c.len() as i64 == s + 1 && g.is_clique(c))
            && pairwise_meet_at_most_once(g.n(), cliques)
    })
}

fn pairwise_meet_at_most_once(n: usize, cliques: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n * n];
    for c in cliques {
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                let (x, y) = (a.min(b), a.max(b));
                if std::mem::replace(&mut seen[x * n + y], true) {
                    return false;
                }
            }
        }
    }
    true
}
