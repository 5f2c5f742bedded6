//! Rebuilding a projective plane from a partial geometry of maximal-arc
//! type and two bound-meeting families of orthogonal parallel classes, one
//! in the geometry and one in its dual.

use std::sync::Arc;

use crate::arcs::{
    construction1, dual_pencil_family, pencil_orthogonal_family, MaximalArc, ProjectivePlane,
};
use crate::autiso::are_isomorphic;
use crate::error::{Error, Result};
use crate::incidence::{dual, require_pg, IncidenceStructure, PgParams};
use crate::parallel::{check_tightness, max_orthogonal_family, orthogonal_family_bound, OrthogonalFamily, Side};

#[derive(Debug, Clone)]
pub struct ReconstructionInput {
    pub geometry: IncidenceStructure,
    /// Orthogonal parallel classes of the geometry.
    pub family: OrthogonalFamily,
    /// Orthogonal parallel classes of the dual geometry; their lines are
    /// points of the geometry.
    pub dual_family: OrthogonalFamily,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub plane: Arc<ProjectivePlane>,
    /// The points added for the classes of the family, of degree d.
    pub arc: MaximalArc,
    /// The lines added for the classes of the dual family, as a degree-d′
    /// arc of the dual plane.
    pub dual_arc: MaximalArc,
}

fn params_of(g: &IncidenceStructure) -> Result<PgParams> {
    let (s, t, alpha) = require_pg(g)?;
    PgParams::from_sta(s, t, alpha).ok_or_else(|| {
        Error::Refused(format!("pg({s},{t},{alpha}) does not have the parameters of an arc geometry"))
    })
}

/// Builds the plane: each geometry line gains the new points of the classes
/// containing it; each class of the dual family becomes a new line through
/// the geometry points labelling its dual lines. New points follow the
/// geometry's points in family order, new lines follow its lines in
/// dual-family order. The result is always verified.
pub fn reconstruct(input: &ReconstructionInput) -> Result<Reconstruction> {
    let g = &input.geometry;
    let p = params_of(g)?;
    let (fam, dual_fam) = (&input.family, &input.dual_family);
    // families must be classes of this geometry and its dual
    let fam = OrthogonalFamily::new(g, fam.classes().to_vec())?;
    let dual_g = dual(g);
    let dual_fam = OrthogonalFamily::new(&dual_g, dual_fam.classes().to_vec())?;
    if !check_tightness(&fam, &p) {
        return Err(Error::Refused(format!(
            "need {} pairwise orthogonal parallel classes with every line in {} of them, got {}",
            orthogonal_family_bound(&p, Side::Primal),
            p.d,
            fam.len()
        )));
    }
    if !check_tightness(&dual_fam, &p.dual()) {
        return Err(Error::Refused(format!(
            "need {} pairwise orthogonal parallel classes in the dual with every point in {} of them, got {}",
            orthogonal_family_bound(&p, Side::Dual),
            p.d_prime,
            dual_fam.len()
        )));
    }
    let v = g.num_points();
    let b = g.num_lines();
    let mut lines: Vec<Vec<usize>> = g.lines().to_vec();
    for (i, class) in fam.classes().iter().enumerate() {
        for &l in class.lines() {
            lines[l].push(v + i);
        }
    }
    for class in dual_fam.classes() {
        lines.push(class.lines().to_vec());
    }
    let plane = Arc::new(ProjectivePlane::new(IncidenceStructure::new(v + fam.len(), lines)?)?);
    if plane.order() != p.q {
        return Err(Error::NotProjectivePlane(format!(
            "expected order {}, built order {}",
            p.q,
            plane.order()
        )));
    }
    let arc = MaximalArc::new(Arc::clone(&plane), (v..v + fam.len()).collect())?;
    let dual_arc = MaximalArc::new(Arc::new(plane.dual()), (b..b + dual_fam.len()).collect())?;
    if arc.degree() != p.d || dual_arc.degree() != p.d_prime {
        return Err(Error::NotMaximalArc(format!(
            "added points have degree {}, added lines degree {}; expected {} and {}",
            arc.degree(),
            dual_arc.degree(),
            p.d,
            p.d_prime
        )));
    }
    Ok(Reconstruction {
        plane,
        arc,
        dual_arc,
    })
}

/// Finds maximum orthogonal families in `g` and its dual and packages them,
/// refusing when either falls short of its bound.
pub fn find_families(g: &IncidenceStructure) -> Result<ReconstructionInput> {
    let p = params_of(g)?;
    let family = max_orthogonal_family(g)?;
    let need = orthogonal_family_bound(&p, Side::Primal);
    if family.len() < need {
        return Err(Error::Refused(format!(
            "the largest family of pairwise orthogonal parallel classes has {} classes, {need} are needed",
            family.len()
        )));
    }
    let dual_family = max_orthogonal_family(&dual(g))?;
    let need = orthogonal_family_bound(&p, Side::Dual);
    if dual_family.len() < need {
        return Err(Error::Refused(format!(
            "the dual's largest family of pairwise orthogonal parallel classes has {} classes, {need} are needed",
            dual_family.len()
        )));
    }
    Ok(ReconstructionInput {
        geometry: g.clone(),
        family,
        dual_family,
    })
}

/// Deletes the arc, rebuilds the plane from the pencil families and checks
/// that the result is isomorphic to the original plane.
pub fn roundtrip_check(p: &ProjectivePlane, a: &MaximalArc) -> Result<bool> {
    let input = ReconstructionInput {
        geometry: construction1(p, a)?.geometry,
        family: pencil_orthogonal_family(p, a)?,
        dual_family: dual_pencil_family(p, a)?,
    };
    let rec = reconstruct(&input)?;
    Ok(are_isomorphic(rec.plane.structure(), p.structure()))
}
