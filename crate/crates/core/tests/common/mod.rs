//! Random general-position scenes and refined traces shared by the
//! integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use taut_rope::geom::{orient_sign, visible};
use taut_rope::trace::{refine_and_apply, DEFAULT_MAX_DEPTH};
use taut_rope::{OpenSegment, Point, RopeState, Scene};

pub const HALF_WIDTH: f64 = 10.0;
pub const CLEARANCE: f64 = 1e-3;

pub fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn point_segment_distance(q: Point, s: &OpenSegment) -> f64 {
    let d = s.b - s.a;
    let t = ((q - s.a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
    q.distance(s.a.lerp(s.b, t))
}

/// Distance between two closed segments that do not cross.
pub fn segment_distance(s: &OpenSegment, t: &OpenSegment) -> f64 {
    [
        point_segment_distance(s.a, t),
        point_segment_distance(s.b, t),
        point_segment_distance(t.a, s),
        point_segment_distance(t.b, s),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

fn random_point(rng: &mut ChaCha8Rng, half: f64) -> Point {
    p(rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Up to `max_n` walls with pairwise clearance, no two on a common line.
pub fn random_scene(rng: &mut ChaCha8Rng, max_n: usize) -> Scene {
    let n = rng.gen_range(1..=max_n);
    let mut walls: Vec<OpenSegment> = Vec::new();
    let mut attempts = 0;
    while walls.len() < n && attempts < 1000 {
        attempts += 1;
        let a = random_point(rng, HALF_WIDTH);
        let len = rng.gen_range(0.5..4.0);
        let ang = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = p(a.x + len * ang.cos(), a.y + len * ang.sin());
        let cand = OpenSegment::new(a, b);
        let fits = walls.iter().all(|w| {
            !taut_rope::geom::segments_touch(w, &cand)
                && segment_distance(w, &cand) >= CLEARANCE
                && !(orient_sign(w.a, w.b, a) == 0 && orient_sign(w.a, w.b, b) == 0)
        });
        if fits {
            walls.push(cand);
        }
    }
    Scene::new(walls, false).expect("generated scene is valid")
}

/// A point at least `CLEARANCE` from every wall.
pub fn free_point(rng: &mut ChaCha8Rng, scene: &Scene) -> Point {
    loop {
        let q = random_point(rng, HALF_WIDTH + 2.0);
        if scene.obstacles().iter().all(|o| point_segment_distance(q, o) >= CLEARANCE) {
            return q;
        }
    }
}

pub struct Trial {
    pub scene: Arc<Scene>,
    pub anchor: Point,
    /// Refined trace: every consecutive pair is one clean engine step.
    pub trace: Vec<Point>,
}

/// Drags the free end through random visible moves, refining each, until
/// `max_steps` refined steps are collected or the attempts run out.
pub fn random_trial(rng: &mut ChaCha8Rng, max_n: usize, max_steps: usize) -> Trial {
    let scene = Arc::new(random_scene(rng, max_n));
    let (anchor, start) = loop {
        let b = free_point(rng, &scene);
        let a = free_point(rng, &scene);
        if a != b && visible(b, a, &scene) {
            break (b, a);
        }
    };
    let mut state = RopeState::new(scene.clone(), anchor, start).expect("visible start");
    let mut trace = vec![start];
    let mut attempts = 0;
    while trace.len() <= max_steps && attempts < 4 * max_steps {
        attempts += 1;
        let reach = rng.gen_range(0.2..5.0);
        let ang = rng.gen_range(0.0..std::f64::consts::TAU);
        let a = state.a();
        let to = p(a.x + reach * ang.cos(), a.y + reach * ang.sin());
        let clear = scene.obstacles().iter().all(|o| point_segment_distance(to, o) >= CLEARANCE);
        if !clear || to.x.abs() > HALF_WIDTH + 2.0 || to.y.abs() > HALF_WIDTH + 2.0 || !visible(a, to, &scene) {
            continue;
        }
        let Ok((steps, next)) = refine_and_apply(&state, to, DEFAULT_MAX_DEPTH) else {
            continue;
        };
        if trace.len() + steps.len() > max_steps + 1 {
            break;
        }
        trace.extend(steps.into_iter().map(|(q, _)| q));
        state = next;
    }
    Trial { scene, anchor, trace }
}
