//! Planar primitives and predicates shared by every other module.
//!
//! All predicates use a single relative tolerance, [`EPS_COL`]: three points
//! are collinear when the sine of the angle they span is below it. Inputs that
//! sit closer to a degeneracy than that are rejected by validators upstream
//! instead of being resolved heuristically here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scene_io::Scene;

/// Collinearity / zero tolerance for coordinates of magnitude up to about 1e3.
pub const EPS_COL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    /// A move passes through a ray origin or runs along a ray.
    #[error("degenerate contact between a move and a ray")]
    DegenerateContact,
    /// A point sits on the open interior of an obstacle.
    #[error("point lies on the interior of obstacle {0}")]
    OnObstacle(usize),
}

/// A location in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// A displacement between two points.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point) -> f64 {
        (other - self).norm()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Affine interpolation, `t = 0` is `self`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    /// Equality up to the collinearity tolerance, scaled by magnitude.
    pub fn approx_eq(self, other: Point) -> bool {
        let scale = 1.0 + self.x.abs().max(self.y.abs());
        (other - self).norm() <= EPS_COL * scale
    }
}

impl Vector {
    pub const fn new(x: f64, y: f64) -> Self {
        Vector { x, y }
    }

    pub fn cross(self, other: Vector) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

impl Sub for Point {
    type Output = Vector;
    fn sub(self, rhs: Point) -> Vector {
        Vector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector> for Point {
    type Output = Point;
    fn add(self, rhs: Vector) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub<Vector> for Point {
    type Output = Point;
    fn sub(self, rhs: Vector) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    fn mul(self, k: f64) -> Vector {
        Vector::new(self.x * k, self.y * k)
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

// Points travel as `[x, y]` on every wire format.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = Point;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a point as a two-element array [x, y]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Point, A::Error> {
                let x: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let y: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                let p = Point::new(x, y);
                if !p.is_finite() {
                    return Err(de::Error::custom("point coordinates must be finite"));
                }
                Ok(p)
            }
        }

        deserializer.deserialize_tuple(2, PairVisitor)
    }
}

/// Sign of a turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Strict left turn (counter-clockwise).
    Left,
    /// Strict right turn (clockwise).
    Right,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Left => 1,
            Orientation::Right => -1,
            Orientation::Collinear => 0,
        }
    }
}

/// Which side of the directed line `a -> b` the point `c` is on.
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    let ab = b - a;
    let ac = c - a;
    let det = ab.cross(ac);
    let scale = ab.norm() * ac.norm();
    if det.abs() <= EPS_COL * scale {
        Orientation::Collinear
    } else if det > 0.0 {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

/// Convenience wrapper over [`orient`] returning -1, 0 or +1.
pub fn orient_sign(a: Point, b: Point, c: Point) -> i8 {
    orient(a, b, c).sign()
}

/// A line segment whose open interior is impassable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenSegment {
    pub a: Point,
    pub b: Point,
}

impl OpenSegment {
    pub const fn new(a: Point, b: Point) -> Self {
        OpenSegment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.approx_eq(self.b)
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn endpoints(&self) -> [Point; 2] {
        [self.a, self.b]
    }

    /// True when `p` lies on the open interior (endpoints excluded).
    pub fn interior_contains(&self, p: Point) -> bool {
        if p.approx_eq(self.a) || p.approx_eq(self.b) {
            return false;
        }
        if orient(self.a, self.b, p) != Orientation::Collinear {
            return false;
        }
        let d = self.b - self.a;
        let t = (p - self.a).dot(d) / d.dot(d);
        t > 0.0 && t < 1.0
    }
}

impl Serialize for OpenSegment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.a, self.b].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OpenSegment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b] = <[Point; 2]>::deserialize(deserializer)?;
        Ok(OpenSegment { a, b })
    }
}

/// True iff the open interiors of `s` and `t` cross transversally.
///
/// Touching at an endpoint and collinear overlap are not crossings.
pub fn segments_cross(s: &OpenSegment, t: &OpenSegment) -> bool {
    let o1 = orient_sign(s.a, s.b, t.a);
    let o2 = orient_sign(s.a, s.b, t.b);
    let o3 = orient_sign(t.a, t.b, s.a);
    let o4 = orient_sign(t.a, t.b, s.b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Whether the closed segments `s` and `t` share a point, collinear overlap
/// included.
pub fn segments_touch(s: &OpenSegment, t: &OpenSegment) -> bool {
    let o1 = orient_sign(s.a, s.b, t.a);
    let o2 = orient_sign(s.a, s.b, t.b);
    let o3 = orient_sign(t.a, t.b, s.a);
    let o4 = orient_sign(t.a, t.b, s.b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |seg: &OpenSegment, p: Point, o: i8| {
        o == 0 && {
            let d = seg.b - seg.a;
            let t = (p - seg.a).dot(d) / d.dot(d);
            (-EPS_COL..=1.0 + EPS_COL).contains(&t)
        }
    };
    on(s, t.a, o1) || on(s, t.b, o2) || on(t, s.a, o3) || on(t, s.b, o4)
}

/// True iff the open segment `pq` crosses no obstacle interior.
///
/// Collinear contact with an obstacle does not block: a taut rope may lie
/// flush along a wall.
pub fn visible(p: Point, q: Point, scene: &Scene) -> bool {
    let sight = OpenSegment::new(p, q);
    !scene.obstacles().iter().any(|o| segments_cross(&sight, o))
}

/// Half-line starting at an obstacle endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Point,
    /// Not normalized; never zero.
    pub dir: Vector,
}

impl Ray {
    pub const fn new(origin: Point, dir: Vector) -> Self {
        Ray { origin, dir }
    }

    /// The ray starting at `source` and pointing away from `observer`.
    pub fn away_from(observer: Point, source: Point) -> Self {
        Ray { origin: source, dir: source - observer }
    }

    pub fn at(&self, k: f64) -> Point {
        self.origin + self.dir * k
    }

    /// Both rays lie on one line and point the same way.
    pub fn is_collinear_with(&self, other: &Ray) -> bool {
        let scale = self.dir.norm() * other.dir.norm();
        if self.dir.cross(other.dir).abs() > EPS_COL * scale || self.dir.dot(other.dir) <= 0.0 {
            return false;
        }
        self.origin.approx_eq(other.origin)
            || orient(self.origin, self.origin + self.dir, other.origin) == Orientation::Collinear
    }
}

impl Serialize for Ray {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Ray", 2)?;
        st.serialize_field("origin", &self.origin)?;
        st.serialize_field("dir", &[self.dir.x, self.dir.y])?;
        st.end()
    }
}

/// A proper crossing of a move segment with a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentRayHit {
    pub point: Point,
    /// Parameter along the segment, in `[0, 1]`.
    pub s: f64,
    /// Parameter along the ray, strictly positive.
    pub k: f64,
}

/// Crossing of the segment `m` with the ray `r`.
///
/// Sides are classified half-open (`> 0` against `<= 0`) on the raw cross
/// product, so a path that ends exactly on a ray line and then continues is
/// counted exactly once, in either direction of travel. A move through the
/// ray origin, or lying along the ray, is a [`GeomError::DegenerateContact`].
pub fn segment_ray_crossing(m: &OpenSegment, r: &Ray) -> Result<Option<SegmentRayHit>, GeomError> {
    let tip = r.origin + r.dir;
    let oa = orient(r.origin, tip, m.a);
    let ob = orient(r.origin, tip, m.b);

    if oa == Orientation::Collinear && ob == Orientation::Collinear {
        let dd = r.dir.dot(r.dir);
        let ta = (m.a - r.origin).dot(r.dir) / dd;
        let tb = (m.b - r.origin).dot(r.dir) / dd;
        if ta.max(tb) >= -EPS_COL {
            return Err(GeomError::DegenerateContact);
        }
        return Ok(None);
    }

    if orient(m.a, m.b, r.origin) == Orientation::Collinear {
        let d = m.b - m.a;
        let t = (r.origin - m.a).dot(d) / d.dot(d);
        if (-EPS_COL..=1.0 + EPS_COL).contains(&t) {
            return Err(GeomError::DegenerateContact);
        }
    }

    let da = r.dir.cross(m.a - r.origin);
    let db = r.dir.cross(m.b - r.origin);
    if (da > 0.0) == (db > 0.0) {
        return Ok(None);
    }

    let md = m.b - m.a;
    let denom = r.dir.cross(md);
    if denom == 0.0 {
        return Ok(None);
    }
    let k = (m.a - r.origin).cross(md) / denom;
    if k <= 0.0 {
        return Ok(None);
    }
    let s = (da / (da - db)).clamp(0.0, 1.0);
    Ok(Some(SegmentRayHit { point: m.a.lerp(m.b, s), s, k }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn seg(a: (f64, f64), b: (f64, f64)) -> OpenSegment {
        OpenSegment::new(p(a.0, a.1), p(b.0, b.1))
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)), Orientation::Left);
        assert_eq!(orient(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)), Orientation::Collinear);
        assert_eq!(orient(p(-2.0, 0.0), p(0.0, 1.0), p(0.0, 3.0)), Orientation::Left);
        assert_eq!(orient(p(0.0, 0.0), p(1.0, 0.0), p(0.5, -1.0)), Orientation::Right);
    }

    #[test]
    fn cross_examples() {
        assert!(segments_cross(&seg((-2.0, 2.0), (2.0, 2.0)), &seg((0.0, 1.0), (0.0, 3.0))));
        assert!(!segments_cross(&seg((-2.0, 0.0), (2.0, 0.0)), &seg((0.0, 1.0), (0.0, 3.0))));
        assert!(!segments_cross(&seg((0.0, 0.0), (0.0, 1.0)), &seg((0.0, 0.0), (0.0, 1.0))));
        // touching at an endpoint is not a crossing
        assert!(!segments_cross(&seg((-1.0, 1.0), (0.0, 1.0)), &seg((0.0, 1.0), (0.0, 3.0))));
        assert!(segments_touch(&seg((-1.0, 1.0), (0.0, 1.0)), &seg((0.0, 1.0), (0.0, 3.0))));
    }

    #[test]
    fn ray_crossing_examples() {
        let m = seg((2.0, 0.0), (2.0, 4.0));
        let hit = segment_ray_crossing(&m, &Ray::new(p(0.0, 1.0), Vector::new(2.0, 1.0))).unwrap().unwrap();
        assert!((hit.point.x - 2.0).abs() < 1e-12 && (hit.point.y - 2.0).abs() < 1e-12);
        assert!((hit.k - 1.0).abs() < 1e-12);
        assert!((hit.s - 0.5).abs() < 1e-12);

        let miss = segment_ray_crossing(&m, &Ray::new(p(0.0, 3.0), Vector::new(2.0, 3.0)));
        assert_eq!(miss, Ok(None));

        let behind = seg((-2.0, 4.0), (-2.0, 0.0));
        let r = Ray::new(p(0.0, 3.0), Vector::new(2.0, 3.0));
        assert_eq!(segment_ray_crossing(&behind, &r), Ok(None));
    }

    #[test]
    fn ray_crossing_degeneracies() {
        let r = Ray::new(p(0.0, 1.0), Vector::new(2.0, 1.0));
        // straight through the origin
        let through = seg((0.0, 0.0), (0.0, 2.0));
        assert_eq!(segment_ray_crossing(&through, &r), Err(GeomError::DegenerateContact));
        // along the ray
        let along = seg((2.0, 2.0), (4.0, 3.0));
        assert_eq!(segment_ray_crossing(&along, &r), Err(GeomError::DegenerateContact));
        // on the supporting line but behind the origin: no contact
        let behind = seg((-4.0, -1.0), (-2.0, 0.0));
        assert_eq!(segment_ray_crossing(&behind, &r), Ok(None));
    }

    #[test]
    fn half_open_sides_count_once() {
        // A path that stops exactly on the ray and then leaves it crosses once.
        let r = Ray::new(p(0.0, 0.0), Vector::new(1.0, 0.0));
        let first = seg((2.0, -1.0), (2.0, 0.0));
        let second = seg((2.0, 0.0), (2.0, 1.0));
        let n = [first, second].iter().filter(|m| segment_ray_crossing(m, &r).unwrap().is_some()).count();
        assert_eq!(n, 1);
    }

    #[test]
    fn interior_membership() {
        let s = seg((0.0, 1.0), (0.0, 3.0));
        assert!(s.interior_contains(p(0.0, 2.0)));
        assert!(!s.interior_contains(p(0.0, 1.0)));
        assert!(!s.interior_contains(p(0.0, 4.0)));
        assert!(!s.interior_contains(p(0.1, 2.0)));
    }

    #[test]
    fn point_wire_format() {
        let json = serde_json::to_string(&p(-2.0, 0.5)).unwrap();
        assert_eq!(json, "[-2.0,0.5]");
        let back: Point = serde_json::from_str("[-2, 0.5]").unwrap();
        assert_eq!(back, p(-2.0, 0.5));
        assert!(serde_json::from_str::<Point>("[1]").is_err());
        assert!(serde_json::from_str::<Point>("[1,2,3]").is_err());
    }
}
