//! Two laps around a wall leave the rope wound twice; the wrap list keeps
//! the repeats and the oracle agrees.

use std::sync::Arc;

use taut_rope::oracle::taut_path;
use taut_rope::{OpenSegment, Point, RopeState, Scene};

fn main() {
    let scene =
        Arc::new(Scene::new(vec![OpenSegment::new(Point::new(0.0, 1.0), Point::new(0.0, 3.0))], false).unwrap());
    let anchor = Point::new(-2.0, 0.0);
    let lap =
        [(2.0, 4.0), (-2.0, 4.0), (-2.0, 0.5), (-1.0, -1.0), (2.0, -1.0), (2.0, 0.0)].map(|(x, y)| Point::new(x, y));

    let mut trace = vec![Point::new(2.0, 0.0)];
    let mut state = RopeState::new(scene.clone(), anchor, trace[0]).unwrap();
    for n in 1..=2 {
        for to in lap {
            state = state.step(to).unwrap().state;
            trace.push(to);
        }
        println!("after lap {n}: wraps {:?}", state.wraps());
    }
    let oracle = taut_path(&scene, anchor, &trace).unwrap();
    println!("oracle agrees: {}", oracle == state.polyline());
    println!("rope length {:.4}", state.length());
}
