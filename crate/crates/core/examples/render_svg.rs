//! Render a scene document's final rope to SVG.
//!
//! ```text
//! cargo run --example render_svg -- scenes/one_wall.json > one_wall.svg
//! ```

use taut_rope::scene_io::{parse_scene, render_svg, RenderOptions};
use taut_rope::RopeState;

fn main() {
    let path =
        std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/one_wall.json").into());
    let doc = parse_scene(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let start = RopeState::new(doc.scene.clone(), doc.anchor, doc.trace[0]).unwrap();
    let (state, _) = start.replay(doc.trace[1..].iter().copied()).unwrap();
    print!("{}", render_svg(&doc.scene, &state, &RenderOptions::default()));
}
