//! Ray tests per step against the 2n + 1 bound as the scene grows.

use std::sync::Arc;

use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn main() {
    for n in [1, 4, 16, 64] {
        // a comb of short vertical walls above the drag line
        let walls = (0..n)
            .map(|i| {
                let x = i as f64 * 1.5 + 0.3;
                OpenSegment::new(Point::new(x, 1.0 + 0.01 * i as f64), Point::new(x + 0.2, 2.0))
            })
            .collect();
        let scene = Arc::new(Scene::new(walls, false).unwrap());
        let mut state = RopeState::new(scene, Point::new(-1.0, 0.0), Point::new(0.0, 0.0)).unwrap();
        let mut worst = 0;
        for k in 1..=20 {
            let step = state.step(Point::new(k as f64 * 0.1, -0.5)).unwrap();
            worst = worst.max(step.predicate_calls);
            state = step.state;
        }
        println!("n = {n:>3}: max {worst:>3} ray tests per step (bound {})", 2 * n + 1);
    }
}
