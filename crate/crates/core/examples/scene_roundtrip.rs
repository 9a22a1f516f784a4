//! Parse a scene document, report errors with positions, and write it back
//! in canonical form.

use taut_rope::scene_io::parse_scene;

fn main() {
    let text = r#"{"obstacles": [[[0, 1], [0, 3]]], "anchor": [-2, 0], "trace": [[2, 0], [2, 4]]}"#;
    let doc = parse_scene(text).unwrap();
    let canon = doc.to_canonical();
    print!("{canon}");
    assert_eq!(parse_scene(&canon).unwrap(), doc);

    for bad in [
        r#"{"obstacles": [[[0, 1], [0, 3]]], "anchor": [-2, 0], "trace": []}"#,
        r#"{"obstacles": [[[0, 1], [0, 3]], [[-1, 2], [1, 2]]], "anchor": [-2, 0], "trace": [[2, 0]]}"#,
        "{\"obstacles\": [\n  [[0, 1], [0, 3]],\n  [[1, 1], oops]\n]}",
    ] {
        println!("error: {}", parse_scene(bad).unwrap_err());
    }
}
