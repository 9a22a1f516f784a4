//! Feed a scripted client conversation through the session protocol.
//!
//! The same handler backs `taut-rope serve --stdio` and the WebSocket server.

use taut_rope::session::{serve_lines, SessionStore};

const SCRIPT: &str = r#"{"op":"init","scene":{"obstacles":[[[0,1],[0,3]]]},"anchor":[-2,0],"start":[2,0]}
{"op":"move","sid":"s1","to":[2,4]}
{"op":"move","sid":"s1","to":[-2,4]}
{"op":"undo","sid":"s1"}
{"op":"move","sid":"s1","to":[2,1.5],"refine":false}
{"op":"state","sid":"s1"}
"#;

fn main() {
    let store = SessionStore::new();
    let mut out = Vec::new();
    serve_lines(&store, SCRIPT.as_bytes(), &mut out).unwrap();
    for (req, reply) in SCRIPT.lines().zip(String::from_utf8(out).unwrap().lines()) {
        println!("> {req}\n< {reply}\n");
    }
}
