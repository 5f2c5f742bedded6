//! Finite incidence structures, the partial-geometry axioms, duality and the
//! parameter arithmetic for geometries of maximal-arc type.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points `0..v` and an ordered list of lines, each a strictly increasing
/// list of point indices. The list order is the line indexing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IncidenceStructure {
    v: usize,
    lines: Vec<Vec<usize>>,
}

impl IncidenceStructure {
    /// Builds a structure, sorting every line. Rejects out-of-range and
    /// repeated points.
    pub fn new(v: usize, lines: Vec<Vec<usize>>) -> Result<Self> {
        let mut lines = lines;
        for (i, line) in lines.iter_mut().enumerate() {
            line.sort_unstable();
            if let Some(&p) = line.iter().find(|&&p| p >= v) {
                return Err(Error::PointOutOfRange { line: i, point: p, v });
            }
            if let Some(w) = line.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicatePoint { line: i, point: w[0] });
            }
        }
        Ok(IncidenceStructure { v, lines })
    }

    pub fn num_points(&self) -> usize {
        self.v
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &[usize] {
        &self.lines[i]
    }

    pub fn contains(&self, line: usize, point: usize) -> bool {
        self.lines[line].binary_search(&point).is_ok()
    }

    /// For every point, the ascending list of lines through it.
    pub fn lines_through(&self) -> Vec<Vec<usize>> {
        let mut through = vec![Vec::new(); self.v];
        for (i, line) in self.lines.iter().enumerate() {
            for &p in line {
                through[p].push(i);
            }
        }
        through
    }

    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.v];
        for line in &self.lines {
            for &p in line {
                deg[p] += 1;
            }
        }
        deg
    }

    pub fn line_sizes(&self) -> Vec<usize> {
        self.lines.iter().map(Vec::len).collect()
    }

    /// Total number of flags (incident point-line pairs).
    pub fn num_flags(&self) -> usize {
        self.lines.iter().map(Vec::len).sum()
    }

    /// Applies a relabeling: old point `p` becomes `point_map[p]`, old line
    /// `i` is moved to position `line_map[i]`.
    pub fn relabel(&self, point_map: &[usize], line_map: &[usize]) -> Self {
        assert_eq!(point_map.len(), self.v);
        assert_eq!(line_map.len(), self.lines.len());
        let mut lines = vec![Vec::new(); self.lines.len()];
        for (i, line) in self.lines.iter().enumerate() {
            let mut image: Vec<usize> = line.iter().map(|&p| point_map[p]).collect();
            image.sort_unstable();
            lines[line_map[i]] = image;
        }
        IncidenceStructure { v: self.v, lines }
    }

    /// Substructure on the lines at the given indices, in that order.
    pub fn select_lines(&self, indices: &[usize]) -> Self {
        IncidenceStructure {
            v: self.v,
            lines: indices.iter().map(|&i| self.lines[i].clone()).collect(),
        }
    }
}

/// Dual structure: point `i` of the result is line `i` of `s`, and line `j`
/// of the result lists the lines of `s` through point `j`.
pub fn dual(s: &IncidenceStructure) -> IncidenceStructure {
    IncidenceStructure {
        v: s.num_lines(),
        lines: s.lines_through(),
    }
}

/// Parameters of a partial geometry built from a maximal arc of degree `d`
/// in a plane of order `q = d * d_prime`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PgParams {
    pub d: usize,
    pub d_prime: usize,
    pub s: usize,
    pub t: usize,
    pub alpha: usize,
    pub v: usize,
    pub b: usize,
    pub q: usize,
}

impl PgParams {
    pub fn from_dd(d: usize, d_prime: usize) -> Result<Self> {
        if d < 2 || d_prime < 2 {
            return Err(Error::InvalidParameters(format!(
                "need d, d' >= 2, got d = {d}, d' = {d_prime}"
            )));
        }
        let q = d * d_prime;
        let s = d * (d_prime - 1);
        let t = d_prime * (d - 1);
        let alpha = (d - 1) * (d_prime - 1);
        let p = PgParams {
            d,
            d_prime,
            s,
            t,
            alpha,
            v: (s + 1) * (q + 1),
            b: (t + 1) * (q + 1),
            q,
        };
        debug_assert!(p.counts_consistent());
        Ok(p)
    }

    /// Parameters from the plane order `q` and the arc degree `d`.
    pub fn from_qd(q: usize, d: usize) -> Result<Self> {
        if d < 2 || q <= d || !q.is_multiple_of(d) {
            return Err(Error::InvalidParameters(format!(
                "need 2 <= d < q with d | q, got q = {q}, d = {d}"
            )));
        }
        Self::from_dd(d, q / d)
    }

    /// Recovers `(d, d')` from observed `(s, t, alpha)`, if they have the
    /// maximal-arc shape.
    pub fn from_sta(s: usize, t: usize, alpha: usize) -> Option<Self> {
        let q = (s + t + 1).checked_sub(alpha)?;
        let d = q.checked_sub(s)?;
        let d_prime = q.checked_sub(t)?;
        let p = Self::from_dd(d, d_prime).ok()?;
        (p.s == s && p.t == t && p.alpha == alpha).then_some(p)
    }

    /// Parameters of the dual geometry (roles of `d` and `d'` swapped).
    pub fn dual(&self) -> Self {
        Self::from_dd(self.d_prime, self.d).expect("valid parameters stay valid under duality")
    }

    /// Checks the general point/line count formulas of a `pg(s,t,alpha)`
    /// against the arc-shaped ones.
    pub fn counts_consistent(&self) -> bool {
        let (s, t, a) = (self.s, self.t, self.alpha);
        a > 0
            && self.v * a == (s + 1) * (s * t + a)
            && self.b * a == (t + 1) * (s * t + a)
    }
}

/// First failed axiom, with the witnessing points and lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: u8,
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PgVerdict {
    pub is_pg: bool,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub alpha: Option<usize>,
    pub violation: Option<Violation>,
}

impl PgVerdict {
    fn fail(axiom: u8, points: Vec<usize>, lines: Vec<usize>, message: String) -> Self {
        PgVerdict {
            is_pg: false,
            s: None,
            t: None,
            alpha: None,
            violation: Some(Violation {
                axiom,
                points,
                lines,
                message,
            }),
        }
    }

    /// `(s, t, alpha)` when the structure is a partial geometry.
    pub fn params(&self) -> Option<(usize, usize, usize)> {
        match (self.is_pg, self.s, self.t, self.alpha) {
            (true, Some(s), Some(t), Some(a)) => Some((s, t, a)),
            _ => None,
        }
    }
}

/// Point-pair collinearity table: entry `p * v + q` holds `1 + line` for the
/// line joining `p` and `q`, or 0. Fails with the first pair on two lines.
pub(crate) fn joining_lines(
    s: &IncidenceStructure,
) -> std::result::Result<Vec<u32>, (usize, usize, usize, usize)> {
    let v = s.num_points();
    let mut join = vec![0u32; v * v];
    for (i, line) in s.lines().iter().enumerate() {
        for (a, &p) in line.iter().enumerate() {
            for &q in &line[a + 1..] {
                let slot = &mut join[p * v + q];
                if *slot != 0 {
                    return Err((p, q, *slot as usize - 1, i));
                }
                *slot = i as u32 + 1;
                join[q * v + p] = i as u32 + 1;
            }
        }
    }
    Ok(join)
}

/// Checks the four partial-geometry axioms exhaustively.
pub fn verify_pg(s: &IncidenceStructure) -> PgVerdict {
    let v = s.num_points();
    let b = s.num_lines();

    let join = match joining_lines(s) {
        Ok(j) => j,
        Err((p, q, l1, l2)) => {
            return PgVerdict::fail(
                1,
                vec![p, q],
                vec![l1, l2],
                format!("points {p} and {q} lie on lines {l1} and {l2}"),
            )
        }
    };

    if b == 0 {
        return PgVerdict::fail(2, vec![], vec![], "no lines".into());
    }
    let k = s.line(0).len();
    if let Some(i) = s.lines().iter().position(|l| l.len() != k) {
        return PgVerdict::fail(
            2,
            vec![],
            vec![0, i],
            format!("line 0 has {k} points, line {i} has {}", s.line(i).len()),
        );
    }
    if k < 2 {
        return PgVerdict::fail(2, vec![], vec![0], format!("lines have {k} points, need s >= 1"));
    }

    let deg = s.point_degrees();
    if v == 0 {
        return PgVerdict::fail(3, vec![], vec![], "no points".into());
    }
    let r = deg[0];
    if let Some(p) = deg.iter().position(|&x| x != r) {
        return PgVerdict::fail(
            3,
            vec![0, p],
            vec![],
            format!("point 0 is on {r} lines, point {p} on {}", deg[p]),
        );
    }
    if r < 2 {
        return PgVerdict::fail(3, vec![0], vec![], format!("points are on {r} lines, need t >= 1"));
    }

    let mut alpha: Option<(usize, usize, usize)> = None;
    for (li, line) in s.lines().iter().enumerate() {
        let mut on_line = vec![false; v];
        for &p in line {
            on_line[p] = true;
        }
        for p in (0..v).filter(|&p| !on_line[p]) {
            let count = line.iter().filter(|&&q| join[p * v + q] != 0).count();
            match alpha {
                None => alpha = Some((count, p, li)),
                Some((a, p0, l0)) if a != count => {
                    return PgVerdict::fail(
                        4,
                        vec![p0, p],
                        vec![l0, li],
                        format!(
                            "point {p0} sees {a} points of line {l0}, point {p} sees {count} points of line {li}"
                        ),
                    )
                }
                _ => {}
            }
        }
    }
    match alpha {
        None => PgVerdict::fail(4, vec![], vec![], "no anti-flags, alpha undefined".into()),
        Some((0, p, l)) => PgVerdict::fail(
            4,
            vec![p],
            vec![l],
            format!("point {p} sees no point of line {l}, need alpha >= 1"),
        ),
        Some((a, _, _)) => PgVerdict {
            is_pg: true,
            s: Some(k - 1),
            t: Some(r - 1),
            alpha: Some(a),
            violation: None,
        },
    }
}

/// `(s, t, alpha)` of a verified partial geometry, or the violation as an error.
pub fn require_pg(s: &IncidenceStructure) -> Result<(usize, usize, usize)> {
    let verdict = verify_pg(s);
    verdict.params().ok_or_else(|| {
        let v = verdict.violation.expect("failed verdict carries a violation");
        Error::NotPartialGeometry(format!("axiom {}: {}", v.axiom, v.message))
    })
}
