//! Projective planes, maximal arcs and their dual arcs, and the partial
//! geometry obtained by deleting an arc from a plane.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{dual, IncidenceStructure};
use crate::parallel::{OrthogonalFamily, ParallelClass};

/// Arithmetic in GF(2^h) for h ≤ 4 via exponent/logarithm tables.
#[derive(Debug, Clone)]
pub struct BinaryField {
    q: usize,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl BinaryField {
    /// The field of order `q ∈ {2, 4, 8, 16}`, reduced modulo x+1, x²+x+1,
    /// x³+x+1 or x⁴+x+1 respectively. Elements are bit vectors of
    /// polynomial coefficients.
    pub fn new(q: usize) -> Result<Self> {
        let (h, poly) = match q {
            2 => (1, 0b11),
            4 => (2, 0b111),
            8 => (3, 0b1011),
            16 => (4, 0b10011),
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "field order {q} not supported (expected 2, 4, 8 or 16)"
                )))
            }
        };
        let mut exp = vec![0u8; 2 * (q - 1)];
        let mut log = vec![0u8; q];
        // x is primitive for every polynomial above; for q = 2 the only
        // nonzero element is 1
        let mut x: usize = 1;
        for i in 0..q - 1 {
            exp[i] = x as u8;
            exp[i + q - 1] = x as u8;
            log[x] = i as u8;
            x <<= 1;
            if x >> h != 0 {
                x ^= poly;
            }
            if q == 2 {
                x = 1;
            }
        }
        Ok(BinaryField { q, exp, log })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        a ^ b
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a] as usize + self.log[b] as usize] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        assert_ne!(a, 0, "zero has no inverse");
        let l = self.log[a] as usize;
        self.exp[(self.q - 1 - l) % (self.q - 1)] as usize
    }
}

/// A verified projective plane of order `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectivePlane {
    order: usize,
    structure: IncidenceStructure,
}

impl ProjectivePlane {
    /// Verifies `structure` and wraps it.
    pub fn new(structure: IncidenceStructure) -> Result<Self> {
        let order = verify_plane(&structure)?;
        Ok(ProjectivePlane { order, structure })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn structure(&self) -> &IncidenceStructure {
        &self.structure
    }

    pub fn into_structure(self) -> IncidenceStructure {
        self.structure
    }

    /// The dual plane: points are the lines of `self` (same indices).
    pub fn dual(&self) -> ProjectivePlane {
        ProjectivePlane {
            order: self.order,
            structure: dual(&self.structure),
        }
    }
}

/// Order `q` of the projective plane `s`, or a refusal naming the first
/// failing axiom and its witnesses.
pub fn verify_plane(s: &IncidenceStructure) -> Result<usize> {
    let refuse = |msg: String| Err(Error::NotProjectivePlane(msg));
    let v = s.num_points();
    let Some(first) = s.lines().first() else {
        return refuse("no lines".into());
    };
    if first.len() < 3 {
        return refuse(format!("line 0 has {} points, need at least 3", first.len()));
    }
    let q = first.len() - 1;
    let n = q * q + q + 1;
    if v != n || s.num_lines() != n {
        return refuse(format!(
            "order {q} needs {n} points and lines, found {v} points and {} lines",
            s.num_lines()
        ));
    }
    if let Some(i) = s.lines().iter().position(|l| l.len() != q + 1) {
        return refuse(format!("line {i} has {} points, expected {}", s.line(i).len(), q + 1));
    }
    if let Some(p) = s.point_degrees().iter().position(|&d| d != q + 1) {
        return refuse(format!("point {p} is on {} lines, expected {}", s.point_degrees()[p], q + 1));
    }
    // two points on at most one line; with the counts above this already
    // forces exactly one, but both conditions are checked explicitly
    let join = match crate::incidence::joining_lines(s) {
        Ok(j) => j,
        Err((p, r, a, b)) => return refuse(format!("points {p} and {r} lie on lines {a} and {b}")),
    };
    for p in 0..v {
        for r in p + 1..v {
            if join[p * v + r] == 0 {
                return refuse(format!("points {p} and {r} are on no common line"));
            }
        }
    }
    let through = s.lines_through();
    let mut meet = vec![0u32; n];
    for i in 0..n {
        meet.fill(0);
        for &p in s.line(i) {
            for &l in &through[p] {
                meet[l] += 1;
            }
        }
        if let Some(j) = (i + 1..n).find(|&j| meet[j] != 1) {
            return refuse(format!("lines {i} and {j} meet in {} points", meet[j]));
        }
    }
    Ok(q)
}

/// Homogeneous coordinates of PG(2, q): representatives with last nonzero
/// coordinate 1, in lexicographic order.
pub fn point_coordinates(q: usize) -> Vec<[usize; 3]> {
    let mut reps = Vec::with_capacity(q * q + q + 1);
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let x = [a, b, c];
                let last = x.iter().rposition(|&e| e != 0);
                if last.is_some_and(|i| x[i] == 1) {
                    reps.push(x);
                }
            }
        }
    }
    reps.sort_unstable();
    reps
}

fn triple_index(q: usize, reps: &[[usize; 3]], field: &BinaryField, x: [usize; 3]) -> usize {
    let last = x.iter().rposition(|&e| e != 0).expect("nonzero vector");
    let scale = field.inv(x[last]);
    let norm = x.map(|e| field.mul(e, scale));
    debug_assert!(norm.iter().all(|&e| e < q));
    reps.binary_search(&norm).expect("normalized triple is a representative")
}

/// PG(2, q) over GF(q), q ∈ {2, 4, 8, 16}. Points and lines are indexed by
/// their canonical coordinate triples in lexicographic order; point `x` is
/// on line `[u]` iff u·x = 0.
pub fn desarguesian_plane(q: usize) -> Result<ProjectivePlane> {
    let field = BinaryField::new(q)?;
    let reps = point_coordinates(q);
    let lines = reps
        .iter()
        .map(|u| {
            reps.iter()
                .enumerate()
                .filter(|(_, x)| {
                    (0..3).fold(0, |acc, i| field.add(acc, field.mul(u[i], x[i]))) == 0
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    ProjectivePlane::new(IncidenceStructure::new(reps.len(), lines)?)
}

/// A maximal arc of degree `d`: a point set of the plane meeting every line
/// in 0 or `d` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalArc {
    plane: Arc<ProjectivePlane>,
    points: Vec<usize>,
    degree: usize,
}

impl MaximalArc {
    /// Verifies `points` as a maximal arc of `plane`.
    pub fn new(plane: Arc<ProjectivePlane>, points: Vec<usize>) -> Result<Self> {
        let mut points = points;
        points.sort_unstable();
        points.dedup();
        let degree = verify_arc(&plane, &points)?;
        Ok(MaximalArc {
            plane,
            points,
            degree,
        })
    }

    pub fn plane(&self) -> &Arc<ProjectivePlane> {
        &self.plane
    }

    /// Arc points, ascending.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Plane lines disjoint from the arc, ascending.
    pub fn external_lines(&self) -> Vec<usize> {
        let mask = self.mask();
        (0..self.plane.structure.num_lines())
            .filter(|&l| self.plane.structure.line(l).iter().all(|&p| !mask[p]))
            .collect()
    }

    fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.plane.structure.num_points()];
        for &p in &self.points {
            mask[p] = true;
        }
        mask
    }
}

/// Degree `d` of the maximal arc `pts`, or a refusal naming a line whose
/// intersection size differs.
pub fn verify_arc(p: &ProjectivePlane, pts: &[usize]) -> Result<usize> {
    let s = &p.structure;
    let mut mask = vec![false; s.num_points()];
    for &x in pts {
        if x >= mask.len() {
            return Err(Error::NotMaximalArc(format!("point {x} is not a point of the plane")));
        }
        mask[x] = true;
    }
    let mut degree = None;
    for (i, line) in s.lines().iter().enumerate() {
        let k = line.iter().filter(|&&x| mask[x]).count();
        if k == 0 {
            continue;
        }
        match degree {
            None => degree = Some((k, i)),
            Some((d, j)) if d != k => {
                return Err(Error::NotMaximalArc(format!(
                    "line {j} meets the set in {d} points but line {i} in {k}"
                )))
            }
            _ => {}
        }
    }
    let Some((d, _)) = degree else {
        return Err(Error::NotMaximalArc("empty point set".into()));
    };
    let q = p.order;
    let size = mask.iter().filter(|&&m| m).count();
    if d < 2 || d >= q || !q.is_multiple_of(d) || size != d * q - q + d {
        return Err(Error::NotMaximalArc(format!(
            "{size} points of degree {d} is not a proper maximal arc in a plane of order {q}"
        )));
    }
    Ok(d)
}

/// The regular hyperoval {(t², t, 1)} ∪ {(1,0,0), (0,1,0)} of the plane
/// produced by [`desarguesian_plane`].
pub fn regular_hyperoval(p: &Arc<ProjectivePlane>) -> Result<MaximalArc> {
    let q = p.order;
    if !q.is_multiple_of(2) || *p.as_ref() != desarguesian_plane(q)? {
        return Err(Error::InvalidParameters(
            "the regular hyperoval is defined on the generated Desarguesian plane only".into(),
        ));
    }
    let field = BinaryField::new(q)?;
    let reps = point_coordinates(q);
    let mut pts: Vec<usize> = (0..q)
        .map(|t| triple_index(q, &reps, &field, [field.mul(t, t), t, 1]))
        .collect();
    pts.push(triple_index(q, &reps, &field, [1, 0, 0]));
    pts.push(triple_index(q, &reps, &field, [0, 1, 0]));
    MaximalArc::new(Arc::clone(p), pts)
}

/// The lines disjoint from `a`, as a maximal arc of degree q/d in the dual
/// plane.
pub fn dual_arc(a: &MaximalArc) -> Result<MaximalArc> {
    MaximalArc::new(Arc::new(a.plane.dual()), a.external_lines())
}

/// The partial geometry of an arc together with its embedding in the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcGeometry {
    pub geometry: IncidenceStructure,
    /// Plane point of every geometry point.
    pub point_map: Vec<usize>,
    /// Plane line of every geometry line.
    pub line_map: Vec<usize>,
}

/// Points off the arc and the lines meeting the arc, restricted to those
/// points. Both are numbered in plane order.
pub fn construction1(p: &ProjectivePlane, a: &MaximalArc) -> Result<ArcGeometry> {
    if a.plane.as_ref() != p {
        return Err(Error::InvalidParameters("the arc lives in a different plane".into()));
    }
    let mask = a.mask();
    let mut new_index = vec![usize::MAX; mask.len()];
    let mut point_map = Vec::new();
    for (x, &on_arc) in mask.iter().enumerate() {
        if !on_arc {
            new_index[x] = point_map.len();
            point_map.push(x);
        }
    }
    let mut lines = Vec::new();
    let mut line_map = Vec::new();
    for (i, line) in p.structure.lines().iter().enumerate() {
        if line.iter().any(|&x| mask[x]) {
            lines.push(line.iter().filter(|&&x| !mask[x]).map(|&x| new_index[x]).collect());
            line_map.push(i);
        }
    }
    Ok(ArcGeometry {
        geometry: IncidenceStructure::new(point_map.len(), lines)?,
        point_map,
        line_map,
    })
}

/// For every arc point, the geometry lines coming from the plane lines
/// through it: pairwise orthogonal parallel classes of the arc geometry,
/// in arc-point order.
pub fn pencil_orthogonal_family(p: &ProjectivePlane, a: &MaximalArc) -> Result<OrthogonalFamily> {
    let geo = construction1(p, a)?;
    let mut geo_line = vec![usize::MAX; p.structure.num_lines()];
    for (i, &l) in geo.line_map.iter().enumerate() {
        geo_line[l] = i;
    }
    let through = p.structure.lines_through();
    let classes = a
        .points
        .iter()
        .map(|&x| ParallelClass::new(&geo.geometry, through[x].iter().map(|&l| geo_line[l]).collect()))
        .collect::<Result<Vec<_>>>()?;
    OrthogonalFamily::new(&geo.geometry, classes)
}

/// The dual counterpart of [`pencil_orthogonal_family`]: for every line
/// disjoint from the arc, the geometry points on it. These are pairwise
/// orthogonal parallel classes of the dual of the arc geometry.
pub fn dual_pencil_family(p: &ProjectivePlane, a: &MaximalArc) -> Result<OrthogonalFamily> {
    let geo = construction1(p, a)?;
    let mut geo_point = vec![usize::MAX; p.structure.num_points()];
    for (i, &x) in geo.point_map.iter().enumerate() {
        geo_point[x] = i;
    }
    let dual_geo = dual(&geo.geometry);
    let classes = a
        .external_lines()
        .into_iter()
        .map(|l| ParallelClass::new(&dual_geo, p.structure.line(l).iter().map(|&x| geo_point[x]).collect()))
        .collect::<Result<Vec<_>>>()?;
    OrthogonalFamily::new(&dual_geo, classes)
}
