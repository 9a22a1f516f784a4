//! Run the WebSocket server on an ephemeral port and talk to it.

use std::net::TcpListener;
use std::sync::Arc;

use taut_rope::session::{serve_listener, SessionStore};
use tungstenite::Message;

fn main() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || serve_listener(Arc::new(SessionStore::new()), listener));
    println!("serving on ws://{addr}");

    let (mut ws, _) = tungstenite::connect(format!("ws://{addr}")).unwrap();
    for msg in [
        r#"{"op":"init","scene":{"obstacles":[[[0,1],[0,3]]]},"anchor":[-2,0],"start":[2,0]}"#,
        r#"{"op":"move","sid":"s1","to":[2,4]}"#,
        r#"{"op":"reset","sid":"s1"}"#,
    ] {
        ws.send(Message::Text(msg.into())).unwrap();
        println!("> {msg}\n< {}", ws.read().unwrap());
    }
    ws.close(None).unwrap();
}
