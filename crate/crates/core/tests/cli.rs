use std::path::PathBuf;

use taut_rope::cli::{run_command, EXIT_INPUT, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

fn scene(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["taut-rope"];
    argv.extend_from_slice(args);
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn run_jsonl_reports_s1_wraps() {
    let (code, out, _) = run(&["run", &scene("one_wall.json"), "--jsonl"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["event"]["kind"], "wrapped");
    assert_eq!(lines[0]["event"]["point"], serde_json::json!([0.0, 1.0]));
    assert_eq!(lines[1]["event"]["point"], serde_json::json!([0.0, 3.0]));
    assert_eq!(lines[2]["event"]["kind"], "none");
}

#[test]
fn coarse_two_wall_move_is_a_violation() {
    let (code, out, _) = run(&["run", &scene("two_walls.json"), "--jsonl"]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(out.contains("single_cut_violation"));

    let (code, out, _) = run(&["validate", &scene("two_walls.json")]);
    assert_eq!(code, EXIT_VIOLATION);
    assert!(out.contains("FAIL"));
}

#[test]
fn refined_two_wall_run_succeeds() {
    let (code, out, _) = run(&["run", &scene("two_walls.json"), "--refine", "--jsonl"]);
    assert_eq!(code, EXIT_OK);
    let last: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(last["rope"], serde_json::json!([[-2.0, 0.0], [1.0, 1.0], [1.0, 3.0], [-2.0, 4.0]]));
}

#[test]
fn compare_passes_on_all_scenes() {
    for name in ["one_wall.json", "two_walls.json", "collinear.json"] {
        let (code, out, _) = run(&["compare", &scene(name), "--refine"]);
        assert_eq!(code, EXIT_OK, "{name}: {out}");
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn strict_validation_flags_endpoint_rays() {
    let (code, _, _) = run(&["validate", &scene("one_wall.json")]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = run(&["validate", &scene("one_wall.json"), "--strict", "--json"]);
    assert_eq!(code, EXIT_VIOLATION);
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["mode"], "strict");
    assert_eq!(report["steps"][1]["verdict"], "fail");
}

#[test]
fn render_writes_svg_file() {
    let dir = std::env::temp_dir().join(format!("taut-rope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("one_wall.svg");
    let (code, out, _) = run(&["render", &scene("one_wall.json"), "--step", "1", "-o", file.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let svg = std::fs::read_to_string(&file).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let rope = doc.descendants().find(|n| n.attribute("id") == Some("rope")).unwrap();
    assert_eq!(rope.attribute("d").unwrap().matches(" L").count(), 2);
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("unwrap-ray")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_input_and_usage_exit_codes() {
    let (code, _, err) = run(&["run", "/nonexistent/scene.json"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(!err.is_empty());

    let bad = std::env::temp_dir().join(format!("taut-rope-bad-{}.json", std::process::id()));
    std::fs::write(&bad, "{\"obstacles\": [\n").unwrap();
    let (code, _, err) = run(&["run", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 2"));
    std::fs::remove_file(&bad).unwrap();

    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["run"]).0, EXIT_USAGE);
}
