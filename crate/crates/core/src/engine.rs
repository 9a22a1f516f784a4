//! The wrap/unwrap state machine.
//!
//! The rope runs from a fixed anchor through a recency-ordered list of
//! wrapping points (obstacle endpoints) to the free end. Each step moves the
//! free end along a straight segment and tests it against the decomposition
//! of the most recent wrapping point (or the anchor) plus the unwrapping ray,
//! the most recently crossed ray. Crossing a decomposition ray appends its
//! source; crossing the unwrapping ray pops the last wrapping point.
//!
//! Each step performs at most `2n + 1` segment/ray tests for `n` obstacles.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gazan::{
    crossed_rays, gd_rays, group_collinear, resolve_collinear_group, CrossingScan, GazanDecomposition, GazanError,
    RayCrossing, RaySource,
};
use crate::geom::{visible, OpenSegment, Point, Ray};
use crate::scene_io::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("anchor and start point are not mutually visible")]
    NotVisible,
    #[error("anchor or start point lies on an obstacle interior")]
    DegeneratePlacement,
}

/// Why a step was rejected. The state is left unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepError {
    /// The move crosses more than one logical ray.
    #[error("move crosses more than one ray")]
    SingleCutViolation,
    /// The move is not in free space.
    #[error("move end points are not mutually visible")]
    SmallUpdateViolation,
    /// The move touches a ray origin, runs along a ray, or ends on an obstacle.
    #[error("move makes degenerate contact with the scene")]
    DegenerateContact,
}

impl StepError {
    pub fn code(self) -> &'static str {
        match self {
            StepError::SingleCutViolation => "single_cut_violation",
            StepError::SmallUpdateViolation => "small_update_violation",
            StepError::DegenerateContact => "degenerate_contact",
        }
    }
}

impl From<GazanError> for StepError {
    fn from(_: GazanError) -> Self {
        StepError::DegenerateContact
    }
}

/// Outcome of a successful step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepEvent {
    None,
    Wrapped(Point),
    Unwrapped(Point),
}

impl StepEvent {
    pub fn kind(&self) -> &'static str {
        match self {
            StepEvent::None => "none",
            StepEvent::Wrapped(_) => "wrapped",
            StepEvent::Unwrapped(_) => "unwrapped",
        }
    }

    pub fn point(&self) -> Option<Point> {
        match self {
            StepEvent::None => None,
            StepEvent::Wrapped(p) | StepEvent::Unwrapped(p) => Some(*p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RopeState {
    scene: Arc<Scene>,
    anchor: Point,
    wraps: Vec<Point>,
    unwrap_ray: Option<Ray>,
    a: Point,
}

/// Everything a step produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: RopeState,
    pub event: StepEvent,
    /// The crossing that caused the event, if any.
    pub crossing: Option<RayCrossing>,
    pub predicate_calls: usize,
}

impl RopeState {
    /// Starts a rope from `anchor` straight to `start`.
    pub fn new(scene: Arc<Scene>, anchor: Point, start: Point) -> Result<Self, SessionError> {
        if !anchor.is_finite()
            || !start.is_finite()
            || scene.obstacle_containing(anchor).is_some()
            || scene.obstacle_containing(start).is_some()
        {
            return Err(SessionError::DegeneratePlacement);
        }
        if !visible(anchor, start, &scene) {
            return Err(SessionError::NotVisible);
        }
        Ok(RopeState { scene, anchor, wraps: Vec::new(), unwrap_ray: None, a: start })
    }

    pub fn scene(&self) -> &Arc<Scene> {
        &self.scene
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    /// Wrapping points, least recent first.
    pub fn wraps(&self) -> &[Point] {
        &self.wraps
    }

    pub fn unwrap_ray(&self) -> Option<&Ray> {
        self.unwrap_ray.as_ref()
    }

    /// Current position of the free end.
    pub fn a(&self) -> Point {
        self.a
    }

    /// The point the last rope segment pivots around.
    pub fn observer(&self) -> Point {
        self.wraps.last().copied().unwrap_or(self.anchor)
    }

    /// `[anchor, wraps..., a]`.
    pub fn polyline(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.wraps.len() + 2);
        out.push(self.anchor);
        out.extend_from_slice(&self.wraps);
        out.push(self.a);
        out
    }

    pub fn length(&self) -> f64 {
        self.polyline().windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// The decomposition for the current observer.
    pub fn decomposition(&self) -> Result<GazanDecomposition, GazanError> {
        gd_rays(&self.scene, self.observer())
    }

    /// Tests a move against the current decomposition and unwrapping ray
    /// without changing the state.
    pub fn scan(&self, to: Point) -> Result<CrossingScan, GazanError> {
        let gd = self.decomposition()?;
        crossed_rays(&gd, self.unwrap_ray.as_ref(), &OpenSegment::new(self.a, to))
    }

    /// Moves the free end to `to`.
    pub fn step(&self, to: Point) -> Result<Step, StepError> {
        if !to.is_finite() || self.scene.obstacle_containing(to).is_some() {
            return Err(StepError::DegenerateContact);
        }
        if !visible(self.a, to, &self.scene) {
            return Err(StepError::SmallUpdateViolation);
        }
        if to == self.a {
            return Ok(Step { state: self.clone(), event: StepEvent::None, crossing: None, predicate_calls: 0 });
        }

        let scan = self.scan(to)?;
        let predicate_calls = scan.predicate_calls;
        let mut groups = group_collinear(&scan.crossings);
        let mut next = self.clone();
        next.a = to;

        let group = match groups.len() {
            0 => return Ok(Step { state: next, event: StepEvent::None, crossing: None, predicate_calls }),
            1 => groups.pop().unwrap_or_default(),
            _ => return Err(StepError::SingleCutViolation),
        };

        let unwraps = group.iter().filter(|c| c.source == RaySource::Extra).count();
        if unwraps > 0 {
            if group.len() > 1 {
                // The unwrapping ray lines up with a decomposition ray.
                return Err(StepError::DegenerateContact);
            }
            let popped = next.wraps.pop().ok_or(StepError::DegenerateContact)?;
            next.unwrap_ray = next.wraps.last().map(|last| {
                let before = next.wraps.len().checked_sub(2).map_or(next.anchor, |i| next.wraps[i]);
                Ray::away_from(before, *last)
            });
            return Ok(Step {
                state: next,
                event: StepEvent::Unwrapped(popped),
                crossing: Some(group[0]),
                predicate_calls,
            });
        }

        let chosen = resolve_collinear_group(&group, self.observer())?;
        next.wraps.push(chosen.ray.origin);
        next.unwrap_ray = Some(chosen.ray);
        Ok(Step { state: next, event: StepEvent::Wrapped(chosen.ray.origin), crossing: Some(chosen), predicate_calls })
    }

    /// Applies each point in turn, stopping at the first rejected step.
    pub fn replay<I>(&self, points: I) -> Result<(RopeState, Vec<StepEvent>), (usize, StepError)>
    where
        I: IntoIterator<Item = Point>,
    {
        let mut state = self.clone();
        let mut events = Vec::new();
        for (i, p) in points.into_iter().enumerate() {
            let step = state.step(p).map_err(|e| (i, e))?;
            events.push(step.event);
            state = step.state;
        }
        Ok((state, events))
    }

    /// Violations of the structural invariants, as human-readable messages.
    ///
    /// Checks that wraps are obstacle endpoints with no consecutive repeats,
    /// that consecutive polyline points see each other, that the unwrapping
    /// ray matches the last wrap, and that every bend has its obstacle on the
    /// inside (flush contacts are skipped).
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, w) in self.wraps.iter().enumerate() {
            if !self.scene.is_endpoint(*w) {
                out.push(format!("wrap {i} at {w} is not an obstacle endpoint"));
            }
        }
        for pair in self.wraps.windows(2) {
            if pair[0] == pair[1] {
                out.push(format!("consecutive repeated wrap {}", pair[0]));
            }
        }
        let line = self.polyline();
        for pair in line.windows(2) {
            if !visible(pair[0], pair[1], &self.scene) {
                out.push(format!("{} and {} are not visible", pair[0], pair[1]));
            }
        }
        match (self.wraps.last(), &self.unwrap_ray) {
            (None, None) => {}
            (Some(last), Some(r)) if r.origin == *last => {}
            _ => out.push("unwrapping ray does not match the last wrap".to_string()),
        }
        for i in 1..line.len() - 1 {
            let (prev, w, next) = (line[i - 1], line[i], line[i + 1]);
            let Some((_, other)) = self.scene.obstacle_at_endpoint(w) else { continue };
            let d_in = w - prev;
            let d_out = next - w;
            let u = other - w;
            let scale_turn = d_in.norm() * d_out.norm();
            let scale_side = d_in.norm() * u.norm();
            let turn = d_in.cross(d_out);
            let side = d_in.cross(u);
            if side.abs() <= crate::geom::EPS_COL * scale_side || turn.abs() <= crate::geom::EPS_COL * scale_turn {
                continue;
            }
            if turn.signum() != side.signum() {
                out.push(format!("bend at {w} does not hold its obstacle on the inside"));
            }
        }
        out
    }
}
