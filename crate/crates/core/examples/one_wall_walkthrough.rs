//! Drag the free end around a single wall and back again.
//!
//! ```text
//! cargo run --example one_wall_walkthrough
//! ```

use std::sync::Arc;

use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn main() {
    let wall = OpenSegment::new(Point::new(0.0, 1.0), Point::new(0.0, 3.0));
    let scene = Arc::new(Scene::new(vec![wall], false).unwrap());
    let anchor = Point::new(-2.0, 0.0);

    let forward = [Point::new(2.0, 0.0), Point::new(2.0, 4.0), Point::new(-2.0, 4.0), Point::new(-2.0, 0.5)];
    let mut state = RopeState::new(scene, anchor, forward[0]).unwrap();
    let back: Vec<Point> = forward.iter().rev().skip(1).copied().collect();

    for to in forward[1..].iter().chain(&back) {
        let step = state.step(*to).unwrap();
        state = step.state;
        println!(
            "A -> ({:>4}, {:>4})  {:<10} wraps {:?}",
            to.x,
            to.y,
            step.event.kind(),
            state.wraps().iter().map(|p| (p.x, p.y)).collect::<Vec<_>>()
        );
    }
    assert!(state.wraps().is_empty());
}
