//! Two walls on one line through the anchor: their rays overlap, and the
//! crossing is credited to the endpoint furthest from the observer.

use std::sync::Arc;

use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn main() {
    let walls = vec![
        OpenSegment::new(Point::new(0.0, 1.0), Point::new(0.0, 2.0)),
        OpenSegment::new(Point::new(0.0, 3.0), Point::new(0.0, 4.0)),
    ];
    // without the flag, walls sharing a line are rejected
    assert!(Scene::new(walls.clone(), false).is_err());
    let scene = Arc::new(Scene::new(walls, true).unwrap());

    let state = RopeState::new(scene, Point::new(0.0, 0.0), Point::new(-1.0, 5.0)).unwrap();
    let scan = state.scan(Point::new(1.0, 5.0)).unwrap();
    println!("rays crossed: {}", scan.crossings.len());
    for c in &scan.crossings {
        println!("  ray from ({}, {}) at ({:.3}, {:.3})", c.ray.origin.x, c.ray.origin.y, c.point.x, c.point.y);
    }

    let step = state.step(Point::new(1.0, 5.0)).unwrap();
    println!("event: {:?}", step.event);
    println!("rope: {:?}", step.state.polyline());
}
