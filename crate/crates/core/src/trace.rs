//! Trace validation and move refinement.
//!
//! A trace is the sequence of positions of the rope's free end. For the engine
//! to track the rope exactly, every move must stay in free space and trigger at
//! most one event. [`validate_trace`] reports on both conditions; [`refine_move`]
//! splits a coarse move (a UI drag, say) by bisection until every piece does.

use serde::Serialize;
use thiserror::Error;

use crate::engine::{RopeState, Step, StepError, StepEvent};
use crate::gazan::{crossed_rays, gd_rays, group_collinear, RayCrossing};
use crate::geom::{visible, OpenSegment, Point};
use crate::scene_io::Scene;

/// Default bisection depth; pieces are then ~1e-12 of the move length.
pub const DEFAULT_MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Current decomposition plus unwrapping ray only.
    Engine,
    /// Additionally, the union of the decompositions of every obstacle
    /// endpoint and the anchor.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Not replayed: an earlier step failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    /// 1-based: step `k` moves from `trace[k - 1]` to `trace[k]`.
    pub index: usize,
    pub small_update_ok: bool,
    /// Logical crossings among the current decomposition and unwrapping ray.
    pub crossings_current_gd: usize,
    /// Logical crossings among all decompositions (strict mode only).
    pub crossings_all_gds: Option<usize>,
    /// Rays of the post-event decomposition crossed by the rest of the move.
    pub followup_crossings: usize,
    pub error: Option<StepError>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub steps: Vec<StepReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.verdict == Verdict::Pass)
    }

    pub fn first_failure(&self) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.verdict == Verdict::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("move cannot be refined into clean steps within depth {0}")]
    Unrefinable(u32),
}

/// Crossings by the part of `step`'s move after its event, against the
/// decomposition and unwrapping ray of the resulting state.
///
/// A nonzero count means the rope would need a second event within the same
/// move, which a single step cannot represent. The ray that caused the event
/// is excluded.
pub fn followup_crossings(from: Point, step: &Step) -> Result<Vec<RayCrossing>, StepError> {
    let Some(event) = step.crossing else { return Ok(Vec::new()) };
    let state = &step.state;
    let gd = state.decomposition()?;
    let mv = OpenSegment::new(from, state.a());
    let scan = crossed_rays(&gd, state.unwrap_ray(), &mv)?;
    Ok(scan.crossings.into_iter().filter(|c| c.ray != event.ray && c.seg_param >= event.seg_param).collect())
}

/// Steps to `to` only if the step is accepted, triggers no follow-up, and
/// stepping straight back restores `state`.
fn clean_step(state: &RopeState, to: Point) -> Result<Step, StepError> {
    let step = state.step(to)?;
    if !followup_crossings(state.a(), &step)?.is_empty() {
        return Err(StepError::SingleCutViolation);
    }
    if step.state.step(state.a())?.state != *state {
        return Err(StepError::SingleCutViolation);
    }
    Ok(step)
}

fn count_all_gds(scene: &Scene, anchor: Point, mv: &OpenSegment) -> Result<usize, StepError> {
    let mut crossings = Vec::new();
    for observer in std::iter::once(anchor).chain(scene.endpoints()) {
        let gd = gd_rays(scene, observer)?;
        crossings.extend(crossed_rays(&gd, None, mv)?.crossings);
    }
    Ok(group_collinear(&crossings).len())
}

/// Replays `trace` from a rope anchored at `anchor`, reporting every step.
pub fn validate_trace(
    scene: &std::sync::Arc<Scene>,
    anchor: Point,
    trace: &[Point],
    mode: ValidationMode,
) -> Result<ValidationReport, crate::engine::SessionError> {
    let first = trace.first().copied().unwrap_or(anchor);
    let mut state = Some(RopeState::new(scene.clone(), anchor, first)?);
    let mut steps = Vec::with_capacity(trace.len().saturating_sub(1));

    for (i, pair) in trace.windows(2).enumerate() {
        let (from, to) = (pair[0], pair[1]);
        let small_update_ok = visible(from, to, scene) && scene.obstacle_containing(to).is_none();
        let mut report = StepReport {
            index: i + 1,
            small_update_ok,
            crossings_current_gd: 0,
            crossings_all_gds: None,
            followup_crossings: 0,
            error: None,
            verdict: Verdict::Skipped,
        };
        let Some(current) = state.take() else {
            steps.push(report);
            continue;
        };

        let mv = OpenSegment::new(from, to);
        let mut failed = !small_update_ok;
        if from != to {
            match current.scan(to) {
                Ok(scan) => report.crossings_current_gd = group_collinear(&scan.crossings).len(),
                Err(_) => report.error = Some(StepError::DegenerateContact),
            }
            if mode == ValidationMode::Strict {
                match count_all_gds(scene, anchor, &mv) {
                    Ok(n) => {
                        report.crossings_all_gds = Some(n);
                        failed |= n > 1;
                    }
                    Err(e) => {
                        report.error = Some(e);
                        failed = true;
                    }
                }
            }
        } else if mode == ValidationMode::Strict {
            report.crossings_all_gds = Some(0);
        }

        match current.step(to) {
            Ok(step) => {
                match followup_crossings(from, &step) {
                    Ok(extra) => report.followup_crossings = extra.len(),
                    Err(e) => report.error = Some(e),
                }
                failed |= report.followup_crossings > 0 || report.error.is_some();
                if !failed {
                    state = Some(step.state);
                }
            }
            Err(e) => {
                report.error = Some(e);
                failed = true;
            }
        }
        report.verdict = if failed { Verdict::Fail } else { Verdict::Pass };
        steps.push(report);
    }
    Ok(ValidationReport { mode, steps })
}

/// Waypoints ending at `target` whose successive steps from `state` are all
/// clean. Returns an empty list for a zero-length move.
pub fn refine_move(state: &RopeState, target: Point, max_depth: u32) -> Result<Vec<Point>, RefineError> {
    refine_and_apply(state, target, max_depth).map(|(steps, _)| steps.into_iter().map(|(p, _)| p).collect())
}

/// Like [`refine_move`], also returning each waypoint's event and the final
/// state.
pub fn refine_and_apply(
    state: &RopeState,
    target: Point,
    max_depth: u32,
) -> Result<(Vec<(Point, StepEvent)>, RopeState), RefineError> {
    if !target.is_finite() || state.scene().obstacle_containing(target).is_some() {
        return Err(RefineError::Unrefinable(0));
    }
    let mut out = Vec::new();
    if target == state.a() {
        return Ok((out, state.clone()));
    }
    let end = bisect(state.clone(), target, 0, max_depth, &mut out)?;
    Ok((out, end))
}

fn bisect(
    state: RopeState,
    to: Point,
    depth: u32,
    max_depth: u32,
    out: &mut Vec<(Point, StepEvent)>,
) -> Result<RopeState, RefineError> {
    match clean_step(&state, to) {
        Ok(step) => {
            out.push((to, step.event));
            Ok(step.state)
        }
        Err(_) if depth < max_depth => {
            let mid = state.a().midpoint(to);
            let halfway = bisect(state, mid, depth + 1, max_depth, out)?;
            bisect(halfway, to, depth + 1, max_depth, out)
        }
        Err(_) => Err(RefineError::Unrefinable(max_depth)),
    }
}

/// Refines every move of `trace`, returning the full refined trace (starting
/// with `trace[0]`).
pub fn refine_trace(
    scene: &std::sync::Arc<Scene>,
    anchor: Point,
    trace: &[Point],
    max_depth: u32,
) -> Result<Vec<Point>, TraceError> {
    let first = *trace.first().ok_or(TraceError::Empty)?;
    let mut state = RopeState::new(scene.clone(), anchor, first)?;
    let mut out = vec![first];
    for (i, to) in trace.iter().enumerate().skip(1) {
        let (steps, next) =
            refine_and_apply(&state, *to, max_depth).map_err(|e| TraceError::Refine { index: i, source: e })?;
        out.extend(steps.into_iter().map(|(p, _)| p));
        state = next;
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace is empty")]
    Empty,
    #[error(transparent)]
    Session(#[from] crate::engine::SessionError),
    #[error("step {index}: {source}")]
    Refine { index: usize, source: RefineError },
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    type Wall = ((f64, f64), (f64, f64));

    fn scene(walls: &[Wall]) -> Arc<Scene> {
        let obstacles = walls.iter().map(|(a, b)| OpenSegment::new(p(a.0, a.1), p(b.0, b.1))).collect();
        Arc::new(Scene::new(obstacles, false).unwrap())
    }

    fn one_wall() -> Arc<Scene> {
        scene(&[((0.0, 1.0), (0.0, 3.0))])
    }

    fn two_walls() -> Arc<Scene> {
        scene(&[((0.0, 1.0), (0.0, 3.0)), ((1.0, 1.0), (1.0, 3.0))])
    }

    #[test]
    fn validate_one_wall_passes() {
        let trace = [p(2.0, 0.0), p(2.0, 4.0), p(-2.0, 4.0)];
        let report = validate_trace(&one_wall(), p(-2.0, 0.0), &trace, ValidationMode::Engine).unwrap();
        assert!(report.passed());
        assert_eq!(report.steps.len(), 2);
        assert!(report.steps.iter().all(|s| s.crossings_current_gd == 1 && s.small_update_ok));
    }

    #[test]
    fn validate_two_walls_fails() {
        let trace = [p(3.0, 0.0), p(3.0, 4.0)];
        let report = validate_trace(&two_walls(), p(-2.0, 0.0), &trace, ValidationMode::Engine).unwrap();
        assert!(!report.passed());
        let s = &report.steps[0];
        assert_eq!(s.index, 1);
        assert_eq!(s.crossings_current_gd, 2);
        assert_eq!(s.error, Some(StepError::SingleCutViolation));
    }

    #[test]
    fn validate_empty_scene() {
        let trace = [p(1.0, 0.0), p(5.0, 5.0), p(-3.0, 2.0)];
        let report = validate_trace(&Arc::new(Scene::empty()), p(0.0, 0.0), &trace, ValidationMode::Strict).unwrap();
        assert!(report.passed());
        assert!(report.steps.iter().all(|s| s.crossings_current_gd == 0 && s.crossings_all_gds == Some(0)));
    }

    #[test]
    fn validate_skips_after_failure() {
        let trace = [p(2.0, 2.0), p(-2.0, 2.0), p(-3.0, 2.0)];
        let report = validate_trace(&one_wall(), p(-2.0, 0.0), &trace, ValidationMode::Engine).unwrap();
        assert_eq!(report.steps[0].verdict, Verdict::Fail);
        assert!(!report.steps[0].small_update_ok);
        assert_eq!(report.steps[1].verdict, Verdict::Skipped);
    }

    #[test]
    fn strict_mode_is_stronger() {
        let trace = [p(2.0, 0.0), p(2.0, 4.0), p(-2.0, 4.0)];
        let report = validate_trace(&one_wall(), p(-2.0, 0.0), &trace, ValidationMode::Strict).unwrap();
        assert_eq!(report.steps[0].crossings_all_gds, Some(1));
        assert_eq!(report.steps[1].crossings_all_gds, Some(2));
        assert!(!report.passed());
    }

    #[test]
    fn refine_two_walls() {
        let st = RopeState::new(two_walls(), p(-2.0, 0.0), p(3.0, 0.0)).unwrap();
        let (steps, end) = refine_and_apply(&st, p(3.0, 4.0), DEFAULT_MAX_DEPTH).unwrap();
        assert!(steps.len() >= 2);
        assert_eq!(steps.last().unwrap().0, p(3.0, 4.0));
        let events: Vec<_> = steps.iter().map(|(_, e)| *e).filter(|e| *e != StepEvent::None).collect();
        assert_eq!(events, vec![StepEvent::Wrapped(p(1.0, 1.0))]);
        assert_eq!(end.polyline(), vec![p(-2.0, 0.0), p(1.0, 1.0), p(3.0, 4.0)]);

        let waypoints = refine_move(&st, p(3.0, 4.0), DEFAULT_MAX_DEPTH).unwrap();
        let (replayed, _) = st.replay(waypoints).unwrap();
        assert_eq!(replayed, end);
    }

    #[test]
    fn refine_trivial_moves() {
        let st = RopeState::new(one_wall(), p(-2.0, 0.0), p(2.0, 0.0)).unwrap();
        assert_eq!(refine_move(&st, p(2.0, 1.0), DEFAULT_MAX_DEPTH).unwrap(), vec![p(2.0, 1.0)]);
        assert!(refine_move(&st, p(2.0, 0.0), DEFAULT_MAX_DEPTH).unwrap().is_empty());
    }

    #[test]
    fn refine_rejects_degenerate_moves() {
        let st = RopeState::new(one_wall(), p(-2.0, 0.0), p(2.0, 0.0)).unwrap();
        assert_eq!(refine_move(&st, p(0.0, 2.0), DEFAULT_MAX_DEPTH), Err(RefineError::Unrefinable(0)));
        // straight through the wall
        let st = RopeState::new(one_wall(), p(-2.0, 0.0), p(2.0, 2.0)).unwrap();
        assert!(refine_move(&st, p(-2.0, 2.0), 12).is_err());
        // exactly through the wall's lower end
        let st = RopeState::new(one_wall(), p(-2.0, 0.0), p(1.0, 0.0)).unwrap();
        assert!(refine_move(&st, p(-1.0, 2.0), 12).is_err());
    }

    #[test]
    fn followup_after_unwrap_forces_refinement() {
        // Unwrapping at (1, 0) straightens the rope onto the endpoint
        // (0.9, 1), which only the anchor's decomposition sees.
        let sc = scene(&[((1.0, 0.0), (1.0, -1.0)), ((0.9, 1.0), (0.9, 5.0))]);
        let st = RopeState::new(sc, p(0.0, 0.0), p(1.5, 0.5)).unwrap();
        let (st, events) = st.replay([p(1.5, -1.0)]).unwrap();
        assert_eq!(events, vec![StepEvent::Wrapped(p(1.0, 0.0))]);

        let coarse = st.step(p(1.2, 3.0)).unwrap();
        assert_eq!(coarse.event, StepEvent::Unwrapped(p(1.0, 0.0)));
        assert_eq!(followup_crossings(st.a(), &coarse).unwrap().len(), 1);

        let (_, end) = refine_and_apply(&st, p(1.2, 3.0), DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(end.wraps(), &[p(0.9, 1.0)]);
        assert!(end.invariant_violations().is_empty());
    }
}
