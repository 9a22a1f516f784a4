//! Check the engine against the rubber-band oracle on a random scene.
//!
//! ```text
//! cargo run --example oracle_compare -- 42
//! ```

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taut_rope::geom::visible;
use taut_rope::oracle::{paths_equal, TautBand};
use taut_rope::trace::{refine_and_apply, DEFAULT_MAX_DEPTH};
use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn random_scene(rng: &mut ChaCha8Rng, n: usize) -> Scene {
    let mut walls: Vec<OpenSegment> = Vec::new();
    while walls.len() < n {
        let a = Point::new(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        let b = Point::new(a.x + rng.gen_range(-2.0..2.0), a.y + rng.gen_range(-2.0..2.0));
        let mut trial = walls.clone();
        trial.push(OpenSegment::new(a, b));
        if Scene::new(trial, false).is_ok() {
            walls.push(OpenSegment::new(a, b));
        }
    }
    Scene::new(walls, false).unwrap()
}

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scene = Arc::new(random_scene(&mut rng, 10));

    let anchor = Point::new(-10.0, -10.0);
    let start = Point::new(10.0, -10.0);
    let mut state = RopeState::new(scene.clone(), anchor, start).expect("corners see each other");
    let mut band = TautBand::new(anchor, start);

    let (mut steps, mut agree) = (0, 0);
    for _ in 0..200 {
        let to = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if !visible(state.a(), to, &scene) {
            continue;
        }
        let Ok((sub, _)) = refine_and_apply(&state, to, DEFAULT_MAX_DEPTH) else { continue };
        for (p, _) in sub {
            state = state.step(p).unwrap().state;
            band.push(&scene, p).unwrap();
            steps += 1;
            agree += usize::from(paths_equal(&state.polyline(), &band.path(), 1e-6));
        }
    }
    println!("seed {seed}: {agree}/{steps} steps agree");
    println!("final rope has {} vertices, {} wraps", state.polyline().len(), state.wraps().len());
}
