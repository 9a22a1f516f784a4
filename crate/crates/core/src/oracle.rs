//! Rubber-band tightening, used as an independent check on the engine.
//!
//! Starting from the slack polyline `[anchor, trace...]`, every interior
//! vertex `v` with neighbours `u` and `w` is either dropped, when the closed
//! triangle `u v w` meets no obstacle, or replaced by the convex chain (on
//! `v`'s side) of `u`, `w` and the obstacle endpoints inside the triangle.
//! Sweeping until nothing changes yields the shortest path homotopic to the
//! trace.
//!
//! A band edge can end up lying along a wall, and then the geometry alone
//! no longer says which side of the wall the band is on. Such edges carry
//! that side with them, so a later shortcut across the wall is refused only
//! when it would actually cross it.
//!
//! Only the predicates in [`crate::geom`] are shared with the engine.

use thiserror::Error;

use crate::geom::{orient, orient_sign, segments_cross, OpenSegment, Orientation, Point};
use crate::scene_io::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("rubber band did not settle within {0} sweeps")]
    NonConvergence(usize),
    #[error("path needs at least two vertices")]
    TooShort,
}

/// Taut path homotopic to `[anchor, trace...]`, as vertices from `anchor` to
/// the last trace point.
pub fn taut_path(scene: &Scene, anchor: Point, trace: &[Point]) -> Result<Vec<Point>, OracleError> {
    let mut path = Vec::with_capacity(trace.len() + 1);
    path.push(anchor);
    path.extend_from_slice(trace);
    if path.len() == 1 {
        path.push(anchor);
    }
    tighten(scene, path)
}

/// Tightens an arbitrary slack polyline with fixed end points.
///
/// Consecutive vertices must see each other and no edge may lie along a
/// wall, since the side of the wall it is on would be unknown. Use
/// [`TautBand`] to follow a moving end point step by step.
pub fn tighten(scene: &Scene, path: Vec<Point>) -> Result<Vec<Point>, OracleError> {
    if path.len() < 2 {
        return Err(OracleError::TooShort);
    }
    let mut band: Vec<Vertex> = path.into_iter().map(|p| Vertex { p, flush: None }).collect();
    settle(scene, &mut band)?;
    Ok(band.into_iter().map(|v| v.p).collect())
}

/// A taut path extended one free-end position at a time.
///
/// Equivalent to tightening the whole history after every push, but each
/// push only has to settle the end of the band.
#[derive(Debug, Clone, PartialEq)]
pub struct TautBand {
    band: Vec<Vertex>,
}

impl TautBand {
    pub fn new(anchor: Point, start: Point) -> Self {
        TautBand { band: vec![Vertex { p: anchor, flush: None }, Vertex { p: start, flush: None }] }
    }

    /// Moves the free end to `to`, which must be visible from the current one.
    pub fn push(&mut self, scene: &Scene, to: Point) -> Result<(), OracleError> {
        self.band.push(Vertex { p: to, flush: None });
        settle(scene, &mut self.band)
    }

    pub fn path(&self) -> Vec<Point> {
        self.band.iter().map(|v| v.p).collect()
    }
}

fn settle(scene: &Scene, band: &mut Vec<Vertex>) -> Result<(), OracleError> {
    dedup(band);
    let cap = 10 * (band.len() + 2 * scene.len()).max(1);
    for _ in 0..cap {
        let mut changes = 0;
        let budget = 4 * (band.len() + 2 * scene.len()) + 16;
        let mut i = 1;
        while i + 1 < band.len() && changes < budget {
            let Some((u_flush, chain)) = shortcut(scene, &band[i - 1], &band[i], &band[i + 1]) else {
                i += 1;
                continue;
            };
            band[i - 1].flush = u_flush;
            band.splice(i..i + 1, chain);
            dedup(band);
            changes += 1;
            // the predecessor's outgoing edge moved; look at it again
            i = i.saturating_sub(1).max(1);
        }
        if changes == 0 {
            return Ok(());
        }
    }
    Err(OracleError::NonConvergence(cap))
}

/// A band vertex and what is known about its outgoing edge.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Vertex {
    p: Point,
    /// When the outgoing edge lies flush along an obstacle: the side
    /// (+1 left, -1 right of the edge direction) the obstacle is on.
    flush: Option<i8>,
}

/// New outgoing flag for `u` and the vertices replacing `v` in the corner
/// `u v w`, or `None` when `v` stays.
fn shortcut(scene: &Scene, u: &Vertex, v: &Vertex, w: &Vertex) -> Option<(Option<i8>, Vec<Vertex>)> {
    let side = orient_sign(u.p, w.p, v.p);
    if side == 0 {
        return collinear_corner(scene, u, v, w);
    }

    let tri = [u.p, v.p, w.p];
    let turn = orient_sign(u.p, v.p, w.p);
    let mut inside: Vec<Point> = Vec::new();
    for o in scene.obstacles() {
        // a wall along a band edge blocks only if the band would slide across it
        let beside =
            [(u, v), (v, w)].iter().any(|(a, b)| overlaps(o, &OpenSegment::new(a.p, b.p)) && a.flush == Some(-turn));
        if beside || !enters_triangle(o, &tri) {
            continue;
        }
        for e in o.endpoints() {
            if e != u.p && e != w.p && in_closed_triangle(e, &tri) && !inside.contains(&e) {
                inside.push(e);
            }
        }
    }

    let chain = if inside.is_empty() { Vec::new() } else { hull_chain(u.p, w.p, side, inside) };
    if chain.len() == 1 && chain[0] == v.p {
        return None;
    }
    // obstacles end up on the far side of the chain from v
    let flag =
        |a: Point, b: Point| scene.obstacles().iter().any(|o| overlaps(o, &OpenSegment::new(a, b))).then_some(-side);
    let mut stops = vec![u.p];
    stops.extend_from_slice(&chain);
    stops.push(w.p);
    let flags: Vec<Option<i8>> = stops.windows(2).map(|e| flag(e[0], e[1])).collect();
    let out = chain.iter().zip(&flags[1..]).map(|(c, f)| Vertex { p: *c, flush: *f }).collect();
    let u_flush = flags[0];
    Some((u_flush, out))
}

/// Corner with `u`, `v`, `w` on one line: drop `v` unless an obstacle
/// endpoint lies on the two edges.
fn collinear_corner(scene: &Scene, u: &Vertex, v: &Vertex, w: &Vertex) -> Option<(Option<i8>, Vec<Vertex>)> {
    let edges = [OpenSegment::new(u.p, v.p), OpenSegment::new(v.p, w.p)];
    let blocked = scene.endpoints().any(|e| {
        e != u.p && e != w.p && edges.iter().any(|s| orient(s.a, s.b, e) == Orientation::Collinear && within(s, e))
    });
    if blocked {
        None
    } else {
        Some((u.flush.or(v.flush), Vec::new()))
    }
}

fn within(s: &OpenSegment, p: Point) -> bool {
    let d = s.b - s.a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p == s.a;
    }
    let t = (p - s.a).dot(d) / len2;
    (0.0..=1.0).contains(&t)
}

fn in_closed_triangle(p: Point, tri: &[Point; 3]) -> bool {
    let s = orient_sign(tri[0], tri[1], tri[2]);
    (0..3).all(|i| orient_sign(tri[i], tri[(i + 1) % 3], p) * s >= 0)
}

/// Whether the obstacle meets the closed triangle anywhere other than at a
/// triangle corner it merely touches.
fn enters_triangle(o: &OpenSegment, tri: &[Point; 3]) -> bool {
    let at_corner = |p: Point| tri.contains(&p);
    if o.endpoints().iter().any(|e| !at_corner(*e) && in_closed_triangle(*e, tri)) {
        return true;
    }
    (0..3).any(|i| {
        let edge = OpenSegment::new(tri[i], tri[(i + 1) % 3]);
        segments_cross(o, &edge) || overlaps(o, &edge)
    })
}

/// Collinear overlap of positive length.
fn overlaps(o: &OpenSegment, edge: &OpenSegment) -> bool {
    if orient(edge.a, edge.b, o.a) != Orientation::Collinear || orient(edge.a, edge.b, o.b) != Orientation::Collinear {
        return false;
    }
    let d = edge.b - edge.a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return false;
    }
    let ta = (o.a - edge.a).dot(d) / len2;
    let tb = (o.b - edge.a).dot(d) / len2;
    let (lo, hi) = (ta.min(tb).max(0.0), ta.max(tb).min(1.0));
    hi - lo > 1e-12
}

/// Convex chain from `u` to `w` around `points`, bulging toward `side` of the
/// directed line `u -> w`. Interior vertices only.
fn hull_chain(u: Point, w: Point, side: i8, mut points: Vec<Point>) -> Vec<Point> {
    let mut chain = Vec::new();
    let mut cur = u;
    points.push(w);
    // gift wrapping; points passed straight through are not vertices
    for _ in 0..points.len() {
        let mut best = points[0];
        for &r in &points[1..] {
            let o = orient_sign(cur, best, r) * side;
            let further = o == 0 && (r - cur).dot(best - cur) > 0.0 && cur.distance(r) > cur.distance(best);
            if o > 0 || further {
                best = r;
            }
        }
        if best == w {
            return chain;
        }
        chain.push(best);
        points.retain(|p| *p != best);
        cur = best;
    }
    chain
}

/// Drops repeated vertices; the survivor takes the later outgoing edge.
fn dedup(band: &mut Vec<Vertex>) {
    let mut j = 1;
    while j < band.len() {
        if band[j].p == band[j - 1].p {
            band[j - 1].flush = band[j].flush;
            band.remove(j);
        } else {
            j += 1;
        }
    }
}

/// Same vertex count and every pair of vertices within `tol` (max-norm).
pub fn paths_equal(p: &[Point], q: &[Point], tol: f64) -> bool {
    p.len() == q.len() && p.iter().zip(q).all(|(a, b)| (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol)
}

pub fn path_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| w[0].distance(w[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    type Wall = ((f64, f64), (f64, f64));

    fn scene(walls: &[Wall]) -> Scene {
        Scene::new(walls.iter().map(|(a, b)| OpenSegment::new(p(a.0, a.1), p(b.0, b.1))).collect(), false).unwrap()
    }

    #[test]
    fn one_wall_single_wrap() {
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0))]);
        let out = taut_path(&sc, p(-2.0, 0.0), &[p(2.0, 0.0), p(2.0, 4.0)]).unwrap();
        assert_eq!(out, vec![p(-2.0, 0.0), p(0.0, 1.0), p(2.0, 4.0)]);
    }

    #[test]
    fn empty_scene_is_straight() {
        let out = taut_path(&Scene::empty(), p(0.0, 0.0), &[p(1.0, 0.0), p(5.0, 5.0)]).unwrap();
        assert_eq!(out, vec![p(0.0, 0.0), p(5.0, 5.0)]);
    }

    #[test]
    fn two_walls_hug_the_second() {
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0)), ((1.0, 1.0), (1.0, 3.0))]);
        let out = taut_path(&sc, p(-2.0, 0.0), &[p(3.0, 0.0), p(3.0, 4.0), p(-2.0, 4.0)]).unwrap();
        assert_eq!(out, vec![p(-2.0, 0.0), p(1.0, 1.0), p(1.0, 3.0), p(-2.0, 4.0)]);
    }

    #[test]
    fn one_wall_full_sequence() {
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0))]);
        let trace = [p(2.0, 0.0), p(2.0, 4.0), p(-2.0, 4.0)];
        let out = taut_path(&sc, p(-2.0, 0.0), &trace).unwrap();
        assert_eq!(out, vec![p(-2.0, 0.0), p(0.0, 1.0), p(0.0, 3.0), p(-2.0, 4.0)]);
        // coming back undoes the wraps
        let back = [p(2.0, 0.0), p(2.0, 4.0), p(-2.0, 4.0), p(2.0, 4.0), p(2.0, 0.0)];
        let out = taut_path(&sc, p(-2.0, 0.0), &back).unwrap();
        assert_eq!(out, vec![p(-2.0, 0.0), p(2.0, 0.0)]);
    }

    #[test]
    fn winding_keeps_repeats() {
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0))]);
        let lap = [p(2.0, 4.0), p(-2.0, 4.0), p(-2.0, 0.5), p(-1.0, -1.0), p(2.0, -1.0), p(2.0, 0.0)];
        let mut trace = vec![p(2.0, 0.0)];
        trace.extend(lap);
        trace.extend(lap);
        let out = taut_path(&sc, p(-2.0, 0.0), &trace).unwrap();
        assert_eq!(
            out,
            vec![p(-2.0, 0.0), p(0.0, 1.0), p(0.0, 3.0), p(0.0, 1.0), p(0.0, 3.0), p(0.0, 1.0), p(2.0, 0.0)]
        );
    }

    #[test]
    fn released_vertex_is_dropped() {
        // (0, 1) pins the rope only while its wall is inside the bend
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0))]);
        let out = tighten(&sc, vec![p(-2.0, 0.0), p(0.0, 1.0), p(2.0, 0.0)]).unwrap();
        assert_eq!(out, vec![p(-2.0, 0.0), p(2.0, 0.0)]);
    }

    #[test]
    fn idempotent_on_its_output() {
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0)), ((1.0, 1.0), (1.0, 3.0))]);
        let out = taut_path(&sc, p(-2.0, 0.0), &[p(3.0, 0.0), p(3.0, 4.0), p(-2.0, 4.0)]).unwrap();
        let again = taut_path(&sc, out[0], &out[1..]).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn band_remembers_which_side_of_a_wall_it_hugs() {
        // wrapped the wall bottom-up on the right, then over the top: coming
        // back right over the top must release (0, 3)
        let sc = scene(&[((0.0, 1.0), (0.0, 3.0))]);
        let mut band = TautBand::new(p(-2.0, 0.0), p(2.0, 0.0));
        for q in [p(2.0, 4.0), p(-2.0, 4.0)] {
            band.push(&sc, q).unwrap();
        }
        assert_eq!(band.path(), vec![p(-2.0, 0.0), p(0.0, 1.0), p(0.0, 3.0), p(-2.0, 4.0)]);
        band.push(&sc, p(2.0, 4.0)).unwrap();
        assert_eq!(band.path(), vec![p(-2.0, 0.0), p(0.0, 1.0), p(2.0, 4.0)]);
        band.push(&sc, p(2.0, 0.0)).unwrap();
        assert_eq!(band.path(), vec![p(-2.0, 0.0), p(2.0, 0.0)]);
    }

    #[test]
    fn path_comparison() {
        let a = [p(0.0, 0.0), p(1.0, 1.0)];
        assert!(paths_equal(&a, &a, 0.0));
        assert!(paths_equal(&a, &[p(1e-9, 0.0), p(1.0, 1.0 - 1e-9)], 1e-6));
        assert!(!paths_equal(&a, &[p(0.0, 0.0)], 1e-6));
        assert!(!paths_equal(&a, &[p(0.0, 0.0), p(1.0, 1.1)], 1e-6));
    }
}
