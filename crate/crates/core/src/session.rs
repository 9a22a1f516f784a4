//! Stateful rope sessions driven by JSON messages.
//!
//! Every request is one JSON object with an `op` field:
//!
//! | op      | fields                      | reply                                   |
//! |---------|-----------------------------|-----------------------------------------|
//! | `init`  | `scene`, `anchor`, `start`  | `{ok, sid, rope, a, rays}`              |
//! | `move`  | `sid`, `to`, `refine`?      | `{ok, rope, a, events, rays}`           |
//! | `state` | `sid`                       | `{ok, sid, rope, a, wraps, rays}`       |
//! | `reset` | `sid`                       | same as `state`                         |
//! | `undo`  | `sid`                       | same as `state`                         |
//!
//! `scene` is `{"obstacles": [[[x,y],[x,y]], ...], "allow_collinear": false}`.
//! `rays` describes the current pivot's decomposition and the unwrapping ray
//! for overlays. Failures reply `{"ok": false, "error": code}` and leave the
//! session untouched.
//!
//! Sessions are independent; messages for one session are handled strictly
//! in order. Two transports carry the same payloads: newline-delimited JSON
//! on a byte stream ([`serve_lines`]) and WebSocket text frames
//! ([`serve_websocket`]).

use std::collections::HashMap;
use std::io::{self, BufRead, Write};
use std::net::{TcpListener, ToSocketAddrs};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::engine::{RopeState, SessionError, StepError, StepEvent};
use crate::geom::{visible, Point, Ray};
use crate::scene_io::{Scene, SceneSpec};
use crate::trace::{refine_and_apply, DEFAULT_MAX_DEPTH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    UnknownSession,
    NotVisible,
    SingleCutViolation,
    Unrefinable,
    ParseError,
}

#[derive(Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum Request {
    Init {
        scene: SceneSpec,
        anchor: Point,
        start: Point,
    },
    Move {
        sid: String,
        to: Point,
        #[serde(default = "default_true")]
        refine: bool,
    },
    State {
        sid: String,
    },
    Reset {
        sid: String,
    },
    Undo {
        sid: String,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Serialize)]
struct EventOut {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<Point>,
}

impl From<StepEvent> for EventOut {
    fn from(e: StepEvent) -> Self {
        EventOut { kind: e.kind(), point: e.point() }
    }
}

#[derive(Serialize)]
struct RaysOut {
    gd: Vec<Ray>,
    unwrap: Option<Ray>,
}

impl RaysOut {
    fn of(state: &RopeState) -> Self {
        RaysOut { gd: state.decomposition().map(|gd| gd.rays).unwrap_or_default(), unwrap: state.unwrap_ray().copied() }
    }
}

#[derive(Serialize)]
struct InitReply<'a> {
    ok: bool,
    sid: &'a str,
    rope: Vec<Point>,
    a: Point,
    rays: RaysOut,
}

#[derive(Serialize)]
struct MoveReply {
    ok: bool,
    rope: Vec<Point>,
    a: Point,
    events: Vec<EventOut>,
    rays: RaysOut,
}

#[derive(Serialize)]
struct SnapshotReply<'a> {
    ok: bool,
    sid: &'a str,
    rope: Vec<Point>,
    a: Point,
    wraps: &'a [Point],
    rays: RaysOut,
}

#[derive(Serialize)]
struct ErrorReply {
    ok: bool,
    error: ErrorCode,
}

/// One accepted `move`: the requested target and the substeps applied.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub target: Point,
    pub substeps: Vec<(Point, StepEvent)>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    initial: RopeState,
    pub state: RopeState,
    pub history: Vec<MoveRecord>,
}

impl Session {
    fn new(id: String, state: RopeState) -> Self {
        Session { id, initial: state.clone(), state, history: Vec::new() }
    }

    /// Rebuilds the state from the initial rope and the recorded substeps.
    pub fn replay_history(&self) -> Result<RopeState, StepError> {
        let points = self.history.iter().flat_map(|m| m.substeps.iter().map(|(p, _)| *p));
        self.initial.replay(points).map(|(s, _)| s).map_err(|(_, e)| e)
    }

    fn snapshot(&self) -> String {
        to_json(&SnapshotReply {
            ok: true,
            sid: &self.id,
            rope: self.state.polyline(),
            a: self.state.a(),
            wraps: self.state.wraps(),
            rays: RaysOut::of(&self.state),
        })
    }

    fn apply_move(&mut self, to: Point, refine: bool) -> Result<String, ErrorCode> {
        let state = &self.state;
        if !to.is_finite() || state.scene().obstacle_containing(to).is_some() {
            return Err(ErrorCode::Unrefinable);
        }
        if !visible(state.a(), to, state.scene()) {
            return Err(ErrorCode::NotVisible);
        }
        let (substeps, next) = if refine {
            refine_and_apply(state, to, DEFAULT_MAX_DEPTH).map_err(|_| ErrorCode::Unrefinable)?
        } else if to == state.a() {
            (Vec::new(), state.clone())
        } else {
            let step = state.step(to).map_err(|e| match e {
                StepError::SingleCutViolation => ErrorCode::SingleCutViolation,
                StepError::SmallUpdateViolation => ErrorCode::NotVisible,
                StepError::DegenerateContact => ErrorCode::Unrefinable,
            })?;
            (vec![(to, step.event)], step.state)
        };

        let events = substeps.iter().filter(|(_, e)| *e != StepEvent::None).map(|(_, e)| EventOut::from(*e)).collect();
        let reply =
            to_json(&MoveReply { ok: true, rope: next.polyline(), a: next.a(), events, rays: RaysOut::of(&next) });
        if !substeps.is_empty() {
            self.history.push(MoveRecord { target: to, substeps });
        }
        self.state = next;
        Ok(reply)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reply types always serialize")
}

fn error(code: ErrorCode) -> String {
    to_json(&ErrorReply { ok: false, error: code })
}

/// All live sessions. Ids are `s1`, `s2`, ... in creation order.
#[derive(Default)]
pub struct SessionStore {
    next_id: AtomicU64,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, sid: &str) -> Result<Arc<Mutex<Session>>, ErrorCode> {
        let map = self.sessions.lock().unwrap_or_else(|e| e.into_inner());
        map.get(sid).cloned().ok_or(ErrorCode::UnknownSession)
    }

    /// Handles one request body and returns the reply body.
    pub fn handle_message(&self, msg: &str) -> String {
        let request: Request = match serde_json::from_str(msg) {
            Ok(r) => r,
            Err(_) => return error(ErrorCode::ParseError),
        };
        self.handle(request).unwrap_or_else(error)
    }

    fn handle(&self, request: Request) -> Result<String, ErrorCode> {
        match request {
            Request::Init { scene, anchor, start } => {
                let scene: Scene = scene.build().map_err(|_| ErrorCode::ParseError)?;
                let state = RopeState::new(Arc::new(scene), anchor, start).map_err(|e| match e {
                    SessionError::NotVisible | SessionError::DegeneratePlacement => ErrorCode::NotVisible,
                })?;
                let id = format!("s{}", self.next_id.fetch_add(1, Ordering::SeqCst) + 1);
                let reply = to_json(&InitReply {
                    ok: true,
                    sid: &id,
                    rope: state.polyline(),
                    a: state.a(),
                    rays: RaysOut::of(&state),
                });
                let session = Session::new(id.clone(), state);
                self.sessions.lock().unwrap_or_else(|e| e.into_inner()).insert(id, Arc::new(Mutex::new(session)));
                Ok(reply)
            }
            Request::Move { sid, to, refine } => {
                let session = self.get(&sid)?;
                let mut session = session.lock().unwrap_or_else(|e| e.into_inner());
                session.apply_move(to, refine)
            }
            Request::State { sid } => {
                let session = self.get(&sid)?;
                let session = session.lock().unwrap_or_else(|e| e.into_inner());
                Ok(session.snapshot())
            }
            Request::Reset { sid } => {
                let session = self.get(&sid)?;
                let mut session = session.lock().unwrap_or_else(|e| e.into_inner());
                session.state = session.initial.clone();
                session.history.clear();
                Ok(session.snapshot())
            }
            Request::Undo { sid } => {
                let session = self.get(&sid)?;
                let mut session = session.lock().unwrap_or_else(|e| e.into_inner());
                if let Some(last) = session.history.pop() {
                    match session.replay_history() {
                        Ok(state) => session.state = state,
                        Err(_) => {
                            session.history.push(last);
                            return Err(ErrorCode::Unrefinable);
                        }
                    }
                }
                Ok(session.snapshot())
            }
        }
    }
}

/// Serves newline-delimited requests from `input`, one reply line each.
/// Blank lines are ignored.
pub fn serve_lines<R: BufRead, W: Write>(store: &SessionStore, input: R, mut output: W) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = store.handle_message(&line);
        output.write_all(reply.as_bytes())?;
        output.write_all(b"\n")?;
        output.flush()?;
    }
    Ok(())
}

/// Accepts WebSocket connections on `addr`; each text frame is one request
/// and is answered with one text frame. Runs until the listener fails.
pub fn serve_websocket<A: ToSocketAddrs>(store: Arc<SessionStore>, addr: A) -> io::Result<()> {
    let listener = TcpListener::bind(addr)?;
    serve_listener(store, listener)
}

/// Like [`serve_websocket`] on an already bound listener.
pub fn serve_listener(store: Arc<SessionStore>, listener: TcpListener) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let store = store.clone();
        std::thread::spawn(move || {
            let Ok(mut ws) = tungstenite::accept(stream) else { return };
            loop {
                let reply = match ws.read() {
                    Ok(tungstenite::Message::Text(text)) => store.handle_message(&text),
                    Ok(tungstenite::Message::Binary(bytes)) => match std::str::from_utf8(&bytes) {
                        Ok(text) => store.handle_message(text),
                        Err(_) => error(ErrorCode::ParseError),
                    },
                    Ok(tungstenite::Message::Close(_)) | Err(_) => break,
                    Ok(_) => continue,
                };
                if ws.send(tungstenite::Message::Text(reply)).is_err() {
                    break;
                }
            }
        });
    }
    Ok(())
}
