//! A coarse move that sweeps past two walls at once is rejected; splitting it
//! into clean sub-steps resolves the events one at a time.

use std::sync::Arc;

use taut_rope::trace::{refine_and_apply, DEFAULT_MAX_DEPTH};
use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn main() {
    let scene = Arc::new(
        Scene::new(
            vec![
                OpenSegment::new(Point::new(0.0, 1.0), Point::new(0.0, 3.0)),
                OpenSegment::new(Point::new(1.0, 1.0), Point::new(1.0, 3.0)),
            ],
            false,
        )
        .unwrap(),
    );
    let state = RopeState::new(scene, Point::new(-2.0, 0.0), Point::new(3.0, 0.0)).unwrap();

    let target = Point::new(3.0, 4.0);
    println!("coarse step: {:?}", state.step(target).err());

    let (steps, state) = refine_and_apply(&state, target, DEFAULT_MAX_DEPTH).unwrap();
    for (p, event) in &steps {
        println!("  ({:.4}, {:.4}) {:?}", p.x, p.y, event);
    }
    println!("rope: {:?}", state.polyline());

    let (steps, state) = refine_and_apply(&state, Point::new(-2.0, 4.0), DEFAULT_MAX_DEPTH).unwrap();
    println!("{} more sub-steps, rope: {:?}", steps.len(), state.polyline());
}
