//! Per-step condition report for a trace, in both validation modes.

use taut_rope::scene_io::parse_scene;
use taut_rope::trace::{validate_trace, ValidationMode};

fn main() {
    let path =
        std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/two_walls.json").into());
    let doc = parse_scene(&std::fs::read_to_string(&path).unwrap()).unwrap();

    for mode in [ValidationMode::Engine, ValidationMode::Strict] {
        let report = validate_trace(&doc.scene, doc.anchor, &doc.trace, mode).unwrap();
        println!("{mode:?}: passed = {}", report.passed());
        for s in &report.steps {
            println!(
                "  step {}: crossings {} all-gds {:?} -> {:?} {:?}",
                s.index, s.crossings_current_gd, s.crossings_all_gds, s.verdict, s.error
            );
        }
    }
}
