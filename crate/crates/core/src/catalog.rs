//! Built-in geometries, the published tables that describe them, and the
//! plain-text file formats for structures and arcs.
//!
//! Tables are transcribed 1-based, exactly as printed; everything else in
//! the crate is 0-based.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arcs::{construction1, desarguesian_plane, regular_hyperoval, MaximalArc, ProjectivePlane};
use crate::autiso::{canonical_form, cheap_invariants};
use crate::error::{Error, Result};
use crate::gf2::rank2;
use crate::incidence::{dual, require_pg, IncidenceStructure, PgParams};
use crate::parallel::{all_parallel_classes, orthogonal_family_bound, Side};

/// A structure given by a point permutation and one representative per
/// line orbit, all 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPresentation {
    pub points: usize,
    /// Cycles of the point permutation; points not listed are fixed.
    pub point_cycles: Vec<Vec<usize>>,
    pub representatives: Vec<Vec<usize>>,
    pub orbit_lengths: Vec<usize>,
}

impl OrbitPresentation {
    /// Converts 1-based cycles and representatives.
    pub fn from_one_based(
        points: usize,
        point_cycles: &[Vec<usize>],
        representatives: &[&[usize]],
        orbit_lengths: &[usize],
    ) -> Self {
        let shift = |xs: &[usize]| xs.iter().map(|&x| x - 1).collect::<Vec<_>>();
        OrbitPresentation {
            points,
            point_cycles: point_cycles.iter().map(|c| shift(c)).collect(),
            representatives: representatives.iter().map(|r| shift(r)).collect(),
            orbit_lengths: orbit_lengths.to_vec(),
        }
    }

    /// The permutation as an image table.
    pub fn permutation(&self) -> Result<Vec<usize>> {
        let mut image: Vec<usize> = (0..self.points).collect();
        let mut seen = vec![false; self.points];
        for cycle in &self.point_cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= self.points || seen[x] {
                    return Err(Error::InvalidParameters(format!(
                        "point {x} is out of range or repeated in the cycles"
                    )));
                }
                seen[x] = true;
                image[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(image)
    }
}

/// Lines orbit by orbit: each representative followed by its successive
/// images. Fails if an orbit closes before its stated length, does not
/// close at it, or two orbits overlap.
pub fn expand_orbits(p: &OrbitPresentation) -> Result<IncidenceStructure> {
    if p.representatives.len() != p.orbit_lengths.len() {
        return Err(Error::InvalidParameters(
            "one orbit length per representative is required".into(),
        ));
    }
    let f = p.permutation()?;
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for (r, (rep, &len)) in p.representatives.iter().zip(&p.orbit_lengths).enumerate() {
        let mut line = rep.clone();
        line.sort_unstable();
        let start = lines.len();
        for step in 0..len {
            if lines[start..].contains(&line) {
                return Err(Error::InvalidParameters(format!(
                    "orbit {} closes after {step} lines, expected {len}",
                    r + 1
                )));
            }
            lines.push(line.clone());
            line = line.iter().map(|&x| f[x]).collect();
            line.sort_unstable();
        }
        if line != lines[start] {
            return Err(Error::InvalidParameters(format!(
                "orbit {} does not close after {len} lines",
                r + 1
            )));
        }
    }
    let mut sorted = lines.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameters(format!("line {:?} occurs twice", w[0])));
    }
    IncidenceStructure::new(p.points, lines)
}

/// Line orbit representatives of the geometry from a degree-4 arc in the
/// plane of order 8, under a fixed-point-free collineation of order 9.
pub const G1_REPRESENTATIVES: [[usize; 5]; 7] = [
    [9, 11, 22, 34, 42],
    [1, 2, 18, 22, 30],
    [1, 3, 15, 27, 42],
    [11, 12, 14, 19, 30],
    [10, 19, 40, 42, 45],
    [1, 5, 19, 32, 41],
    [19, 28, 29, 34, 44],
];

/// Line orbit representatives of Mathon's geometry under a permutation of
/// order 6.
pub const G2_REPRESENTATIVES: [[usize; 5]; 13] = [
    [14, 22, 30, 35, 40],
    [12, 25, 34, 38, 40],
    [1, 21, 28, 35, 45],
    [1, 13, 26, 27, 43],
    [1, 9, 18, 30, 34],
    [1, 8, 23, 39, 42],
    [1, 11, 12, 22, 32],
    [1, 16, 17, 36, 38],
    [1, 10, 15, 24, 33],
    [7, 10, 27, 30, 44],
    [13, 16, 20, 23, 44],
    [19, 21, 23, 40, 43],
    [37, 38, 39, 44, 45],
];

pub const G2_ORBIT_LENGTHS: [usize; 13] = [6, 6, 6, 6, 6, 6, 6, 6, 6, 3, 3, 2, 1];

/// The 28 parallel classes of G1 (line indices).
pub const G1_PARALLEL_CLASSES: [[usize; 9]; 28] = [
    [7, 10, 13, 17, 36, 41, 42, 48, 62],
    [2, 12, 14, 17, 31, 37, 45, 52, 57],
    [3, 13, 15, 18, 32, 37, 38, 53, 58],
    [5, 26, 28, 33, 45, 47, 48, 50, 58],
    [2, 23, 30, 34, 42, 47, 53, 54, 55],
    [6, 12, 16, 18, 35, 40, 41, 47, 61],
    [3, 17, 19, 22, 23, 28, 44, 59, 61],
    [2, 16, 21, 22, 27, 36, 43, 58, 60],
    [6, 11, 22, 25, 26, 31, 38, 55, 62],
    [9, 14, 19, 20, 25, 34, 41, 56, 58],
    [9, 10, 12, 15, 29, 43, 44, 50, 55],
    [9, 21, 28, 32, 40, 51, 52, 54, 62],
    [4, 25, 32, 36, 44, 46, 47, 49, 57],
    [6, 27, 29, 34, 37, 48, 49, 51, 59],
    [7, 19, 30, 35, 38, 49, 50, 52, 60],
    [8, 11, 14, 18, 28, 42, 43, 49, 63],
    [7, 12, 23, 26, 27, 32, 39, 56, 63],
    [5, 11, 15, 17, 34, 39, 40, 46, 60],
    [8, 20, 31, 36, 39, 50, 51, 53, 61],
    [4, 10, 14, 16, 33, 38, 39, 54, 59],
    [5, 10, 21, 24, 25, 30, 37, 61, 63],
    [4, 18, 20, 23, 24, 29, 45, 60, 62],
    [3, 24, 31, 35, 43, 46, 48, 54, 56],
    [8, 13, 19, 24, 27, 33, 40, 55, 57],
    [1, 2, 3, 4, 5, 6, 7, 8, 9],
    [1, 22, 29, 33, 41, 46, 52, 53, 63],
    [1, 15, 20, 21, 26, 35, 42, 57, 59],
    [1, 11, 13, 16, 30, 44, 45, 51, 56],
];

/// The ten parallel classes of the dual of G1 (lines of the dual labelled
/// by points of G1).
pub const G1_DUAL_PARALLEL_CLASSES: [[usize; 9]; 10] = [
    [19, 20, 21, 22, 23, 24, 25, 26, 27],
    [6, 9, 10, 15, 25, 30, 32, 43, 44],
    [4, 7, 13, 17, 23, 28, 30, 41, 42],
    [2, 8, 12, 17, 27, 32, 34, 37, 45],
    [2, 5, 11, 15, 21, 28, 35, 39, 40],
    [5, 8, 14, 18, 24, 29, 31, 42, 43],
    [3, 9, 13, 18, 19, 33, 35, 37, 38],
    [3, 6, 12, 16, 22, 29, 36, 40, 41],
    [1, 4, 10, 14, 20, 34, 36, 38, 39],
    [1, 7, 11, 16, 26, 31, 33, 44, 45],
];

/// The unique parallel class of G2 (line indices).
pub const G2_PARALLEL_CLASS: [usize; 9] = [25, 26, 27, 28, 29, 30, 61, 62, 63];

/// Point sets of the lines of G2's unique parallel class.
pub const G2_PARALLEL_CLASS_LINES: [[usize; 5]; 9] = [
    [1, 9, 18, 30, 34],
    [2, 10, 13, 25, 35],
    [3, 11, 14, 26, 36],
    [4, 12, 15, 27, 31],
    [5, 7, 16, 28, 32],
    [6, 8, 17, 29, 33],
    [19, 21, 23, 40, 43],
    [20, 22, 24, 41, 42],
    [37, 38, 39, 44, 45],
];

/// The ten parallel classes of the dual of G2.
pub const G2_DUAL_PARALLEL_CLASSES: [[usize; 9]; 10] = [
    [31, 32, 33, 34, 35, 36, 42, 43, 44],
    [2, 8, 15, 20, 21, 26, 30, 32, 38],
    [5, 11, 18, 23, 24, 27, 29, 35, 38],
    [6, 12, 13, 19, 24, 28, 30, 36, 39],
    [4, 10, 17, 22, 23, 26, 28, 34, 37],
    [8, 10, 12, 14, 16, 18, 41, 43, 45],
    [1, 7, 14, 19, 20, 25, 29, 31, 37],
    [7, 9, 11, 13, 15, 17, 40, 42, 45],
    [1, 2, 3, 4, 5, 6, 40, 41, 44],
    [3, 9, 16, 21, 22, 25, 27, 33, 39],
];

fn consecutive_cycles(first: usize, last: usize, len: usize) -> Vec<Vec<usize>> {
    (first..=last).step_by(len).map(|s| (s..s + len).collect()).collect()
}

pub fn g1_presentation() -> OrbitPresentation {
    let reps: Vec<&[usize]> = G1_REPRESENTATIVES.iter().map(|r| &r[..]).collect();
    OrbitPresentation::from_one_based(45, &consecutive_cycles(1, 45, 9), &reps, &[9; 7])
}

pub fn g2_presentation() -> OrbitPresentation {
    let mut cycles = consecutive_cycles(1, 36, 6);
    cycles.extend([vec![37, 38, 39], vec![40, 41], vec![42, 43]]);
    let reps: Vec<&[usize]> = G2_REPRESENTATIVES.iter().map(|r| &r[..]).collect();
    OrbitPresentation::from_one_based(45, &cycles, &reps, &G2_ORBIT_LENGTHS)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["G1", "G2", "W2"];

/// `G1` and `G2`, the two pg(4,6,3) with point graph T̄(10), and `W2`, the
/// pg(2,2,1) of the regular hyperoval in the plane of order 4.
pub fn builtin(name: &str) -> Result<IncidenceStructure> {
    match name {
        "G1" => expand_orbits(&g1_presentation()),
        "G2" => expand_orbits(&g2_presentation()),
        "W2" => {
            let plane = Arc::new(desarguesian_plane(4)?);
            let arc = regular_hyperoval(&plane)?;
            Ok(construction1(&plane, &arc)?.geometry)
        }
        _ => Err(Error::InvalidParameters(format!(
            "unknown built-in {name:?} (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

fn parse_err(line: usize, cause: impl Into<String>) -> Error {
    Error::Parse {
        line,
        cause: cause.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_indices(line_no: usize, body: &str) -> Result<Vec<usize>> {
    if body == "-" {
        return Ok(Vec::new());
    }
    body.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("{t:?} is not a point index")))
        })
        .collect()
}

/// Reads the `incidence <v> <b>` format. Lines may list their points in
/// any order; a lone `-` stands for a line without points.
pub fn parse_structure(text: &str) -> Result<IncidenceStructure> {
    let mut lines = content_lines(text);
    let Some((no, header)) = lines.next() else {
        return Err(parse_err(1, "empty input"));
    };
    let words: Vec<&str> = header.split_whitespace().collect();
    let (v, b) = match words.as_slice() {
        ["incidence", v, b] => match (v.parse::<usize>(), b.parse::<usize>()) {
            (Ok(v), Ok(b)) => (v, b),
            _ => return Err(parse_err(no, "point and line counts must be integers")),
        },
        _ => return Err(parse_err(no, "expected header `incidence <v> <b>`")),
    };
    let mut blocks = Vec::with_capacity(b);
    for (no, body) in lines {
        if blocks.len() == b {
            return Err(parse_err(no, format!("more than the declared {b} lines")));
        }
        let mut pts = parse_indices(no, body)?;
        if let Some(&p) = pts.iter().find(|&&p| p >= v) {
            return Err(parse_err(no, format!("point {p} out of range (v = {v})")));
        }
        pts.sort_unstable();
        if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(no, format!("duplicate point {}", w[0])));
        }
        blocks.push(pts);
    }
    if blocks.len() != b {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("declared {b} lines, found {}", blocks.len()),
        ));
    }
    IncidenceStructure::new(v, blocks)
}

pub fn format_structure(s: &IncidenceStructure) -> String {
    let mut out = format!("incidence {} {}\n", s.num_points(), s.num_lines());
    for line in s.lines() {
        if line.is_empty() {
            out.push_str("-\n");
            continue;
        }
        let words: Vec<String> = line.iter().map(usize::to_string).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_structure(path: impl AsRef<Path>) -> Result<IncidenceStructure> {
    parse_structure(&std::fs::read_to_string(path)?)
}

pub fn write_structure(s: &IncidenceStructure, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, format_structure(s))?)
}

/// Converter for third-party block lists: one line per block, indices
/// separated by whitespace or commas, `#` comments. With `one_based`, every
/// index is shifted down by one. The point count is the largest index plus
/// one unless given.
pub fn convert_blocks(text: &str, one_based: bool, points: Option<usize>) -> Result<IncidenceStructure> {
    let mut blocks = Vec::new();
    for (no, body) in content_lines(text) {
        let mut pts = parse_indices(no, body)?;
        if one_based {
            for p in &mut pts {
                *p = p
                    .checked_sub(1)
                    .ok_or_else(|| parse_err(no, "index 0 in 1-based input"))?;
            }
        }
        pts.sort_unstable();
        if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(no, format!("duplicate point {}", w[0])));
        }
        blocks.push(pts);
    }
    let seen = blocks.iter().flatten().max().map_or(0, |m| m + 1);
    let v = points.unwrap_or(seen);
    if v < seen {
        return Err(Error::InvalidParameters(format!(
            "index {} exceeds the stated {v} points",
            seen - 1
        )));
    }
    IncidenceStructure::new(v, blocks)
}

/// One arc from an arc file: `arc <plane-ref> <d>` followed by a line of
/// point indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRecord {
    pub plane_ref: String,
    pub degree: usize,
    pub points: Vec<usize>,
}

pub fn parse_arcs(text: &str) -> Result<Vec<ArcRecord>> {
    let mut out = Vec::new();
    let mut lines = content_lines(text);
    while let Some((no, header)) = lines.next() {
        let words: Vec<&str> = header.split_whitespace().collect();
        let (plane_ref, degree) = match words.as_slice() {
            ["arc", plane, d] => (
                plane.to_string(),
                d.parse::<usize>()
                    .map_err(|_| parse_err(no, "arc degree must be an integer"))?,
            ),
            _ => return Err(parse_err(no, "expected header `arc <plane-ref> <d>`")),
        };
        let Some((no, body)) = lines.next() else {
            return Err(parse_err(no, "arc header without a point line"));
        };
        let mut points = parse_indices(no, body)?;
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_err(no, format!("duplicate point {}", w[0])));
        }
        out.push(ArcRecord {
            plane_ref,
            degree,
            points,
        });
    }
    Ok(out)
}

pub fn format_arcs(arcs: &[ArcRecord]) -> String {
    let mut out = String::new();
    for a in arcs {
        let pts: Vec<String> = a.points.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "arc {} {}\n{}", a.plane_ref, a.degree, pts.join(" "));
    }
    out
}

pub fn read_arcs(path: impl AsRef<Path>) -> Result<Vec<ArcRecord>> {
    parse_arcs(&std::fs::read_to_string(path)?)
}

/// One row of a survey of arcs in a plane.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    /// 1-based position in the arc file.
    pub index: usize,
    pub label: String,
    pub degree: usize,
    pub s: usize,
    pub t: usize,
    pub alpha: usize,
    pub aut_order: Option<u128>,
    pub rank2: usize,
    pub plane_rank2: usize,
    pub parallel_classes: usize,
    /// Upper bound on pairwise orthogonal classes in the geometry.
    pub bound: usize,
    pub self_dual: Option<bool>,
    /// 1-based indices of earlier rows with an isomorphic geometry.
    pub isomorphic_to: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyOptions {
    /// Compute automorphism orders and isomorphism columns.
    pub isomorphism: bool,
}

/// Construction 1 applied to each arc, with the invariants of the
/// geometry: group order, 2-rank, number of parallel classes.
pub fn survey(plane: &Arc<ProjectivePlane>, arcs: &[ArcRecord], opts: SurveyOptions) -> Result<Vec<SurveyRow>> {
    let plane_rank2 = rank2(plane.structure());
    let mut rows: Vec<SurveyRow> = Vec::new();
    let mut forms: Vec<(crate::autiso::CheapInvariants, Vec<u8>)> = Vec::new();
    for (i, rec) in arcs.iter().enumerate() {
        let arc = MaximalArc::new(Arc::clone(plane), rec.points.clone())?;
        if arc.degree() != rec.degree {
            return Err(Error::NotMaximalArc(format!(
                "arc {} has degree {}, file says {}",
                i + 1,
                arc.degree(),
                rec.degree
            )));
        }
        let geo = construction1(plane, &arc)?.geometry;
        let (s, t, alpha) = require_pg(&geo)?;
        let params = PgParams::from_qd(plane.order(), arc.degree())?;
        let classes = all_parallel_classes(&geo)?.len();
        let (aut_order, self_dual, isomorphic_to) = if opts.isomorphism {
            let cf = canonical_form(&geo);
            let inv = cheap_invariants(&geo);
            let dual_geo = dual(&geo);
            let self_dual = cheap_invariants(&dual_geo) == inv
                && canonical_form(&dual_geo).certificate == cf.certificate;
            let iso: Vec<usize> = forms
                .iter()
                .enumerate()
                .filter(|(_, (fi, fc))| *fi == inv && *fc == cf.certificate)
                .map(|(j, _)| j + 1)
                .collect();
            forms.push((inv, cf.certificate));
            (Some(cf.aut_order), Some(self_dual), iso)
        } else {
            (None, None, Vec::new())
        };
        rows.push(SurveyRow {
            index: i + 1,
            label: format!("{}.{}", rec.plane_ref, i + 1),
            degree: arc.degree(),
            s,
            t,
            alpha,
            aut_order,
            rank2: rank2(&geo),
            plane_rank2,
            parallel_classes: classes,
            bound: orthogonal_family_bound(&params, Side::Primal),
            self_dual,
            isomorphic_to,
        });
    }
    Ok(rows)
}
