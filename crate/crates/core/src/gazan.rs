//! Gazan decomposition: for an observer point, one ray per obstacle endpoint,
//! starting at the endpoint and pointing away from the observer.
//!
//! A move of the rope's free end that crosses one of these rays sweeps the
//! last rope segment over the ray's source, so the source must be wrapped.

use thiserror::Error;

use crate::geom::{segment_ray_crossing, GeomError, OpenSegment, Point, Ray};
use crate::scene_io::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GazanError {
    #[error("observer lies on the interior of obstacle {0}")]
    ObserverOnObstacle(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("crossings are not mutually collinear")]
    NotCollinear,
    #[error("empty crossing group")]
    EmptyGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GazanDecomposition {
    pub observer: Point,
    /// Ordered by obstacle index, then endpoint (`a` before `b`).
    pub rays: Vec<Ray>,
}

/// Where a crossed ray came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaySource {
    /// Index into [`GazanDecomposition::rays`].
    Decomposition(usize),
    /// The extra (unwrapping) ray.
    Extra,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayCrossing {
    pub ray: Ray,
    pub source: RaySource,
    pub point: Point,
    /// Parameter of the crossing along the move.
    pub seg_param: f64,
}

/// Result of testing a move against a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingScan {
    pub crossings: Vec<RayCrossing>,
    /// Number of segment/ray predicate evaluations performed.
    pub predicate_calls: usize,
}

/// Builds the decomposition for `observer`, skipping an endpoint equal to it.
pub fn gd_rays(scene: &Scene, observer: Point) -> Result<GazanDecomposition, GazanError> {
    if let Some(i) = scene.obstacle_containing(observer) {
        return Err(GazanError::ObserverOnObstacle(i));
    }
    let rays = scene.endpoints().filter(|e| *e != observer).map(|e| Ray::away_from(observer, e)).collect();
    Ok(GazanDecomposition { observer, rays })
}

/// Tests `mv` against every ray of `gd` plus `extra`, one predicate call each.
pub fn crossed_rays(
    gd: &GazanDecomposition,
    extra: Option<&Ray>,
    mv: &OpenSegment,
) -> Result<CrossingScan, GazanError> {
    let candidates = gd
        .rays
        .iter()
        .enumerate()
        .map(|(i, r)| (RaySource::Decomposition(i), r))
        .chain(extra.map(|r| (RaySource::Extra, r)));

    let mut crossings = Vec::new();
    let mut predicate_calls = 0;
    for (source, ray) in candidates {
        predicate_calls += 1;
        if let Some(hit) = segment_ray_crossing(mv, ray)? {
            crossings.push(RayCrossing { ray: *ray, source, point: hit.point, seg_param: hit.s });
        }
    }
    Ok(CrossingScan { crossings, predicate_calls })
}

/// Partitions crossings into logical crossings: rays lying on one line and
/// pointing the same way are crossed simultaneously and count as one.
pub fn group_collinear(crossings: &[RayCrossing]) -> Vec<Vec<RayCrossing>> {
    let mut groups: Vec<Vec<RayCrossing>> = Vec::new();
    for c in crossings {
        match groups.iter_mut().find(|g| g[0].ray.is_collinear_with(&c.ray)) {
            Some(g) => g.push(*c),
            None => groups.push(vec![*c]),
        }
    }
    groups
}

/// Picks, from mutually collinear crossings, the one whose ray source is
/// furthest from `reference`. Exact ties go to the lexicographically smallest
/// source so the choice does not depend on input order.
pub fn resolve_collinear_group(crossings: &[RayCrossing], reference: Point) -> Result<RayCrossing, GazanError> {
    let first = crossings.first().ok_or(GazanError::EmptyGroup)?;
    if crossings.iter().any(|c| !first.ray.is_collinear_with(&c.ray)) {
        return Err(GazanError::NotCollinear);
    }
    let key = |c: &RayCrossing| c.ray.origin.distance(reference);
    let mut best = first;
    for c in &crossings[1..] {
        let (dc, db) = (key(c), key(best));
        let (o, bo) = (c.ray.origin, best.ray.origin);
        if dc > db || (dc == db && (o.x, o.y) < (bo.x, bo.y)) {
            best = c;
        }
    }
    Ok(*best)
}
