//! Obstacle scenes, the scene document format, and SVG rendering.
//!
//! A scene document is a single JSON object:
//!
//! ```json
//! {
//!   "obstacles": [[[0, 1], [0, 3]]],
//!   "anchor": [-2, 0],
//!   "trace": [[2, 0], [2, 4]]
//! }
//! ```
//!
//! with an optional `"allow_collinear": true`. [`SceneDocument::to_canonical`]
//! writes the canonical form: one obstacle or trace point per line, numbers in
//! shortest round-trip notation.

mod svg;

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orient, segments_cross, OpenSegment, Orientation, Point};

pub use svg::{render_svg, RenderOptions, Viewport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("obstacle {0} has coincident endpoints")]
    Degenerate(usize),
    #[error("obstacles {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("obstacles {0} and {1} share an endpoint")]
    SharedEndpoint(usize, usize),
    #[error("an endpoint of obstacle {1} touches the interior of obstacle {0}")]
    Touching(usize, usize),
    #[error("obstacles {0} and {1} are collinear (set allow_collinear to permit)")]
    Collinear(usize, usize),
}

/// The constrained space: a set of open line-segment obstacles.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    obstacles: Vec<OpenSegment>,
    allow_collinear: bool,
}

impl Scene {
    /// Validates and builds a scene.
    ///
    /// Obstacles must be non-degenerate, pairwise non-crossing, and must not
    /// share or touch endpoints. Unless `allow_collinear` is set, no two
    /// obstacles may lie on a common line.
    pub fn new(obstacles: Vec<OpenSegment>, allow_collinear: bool) -> Result<Self, SceneError> {
        for (i, o) in obstacles.iter().enumerate() {
            if o.is_degenerate() {
                return Err(SceneError::Degenerate(i));
            }
        }
        for i in 0..obstacles.len() {
            for j in i + 1..obstacles.len() {
                let (s, t) = (&obstacles[i], &obstacles[j]);
                if s.endpoints().iter().any(|p| t.endpoints().iter().any(|q| p.approx_eq(*q))) {
                    return Err(SceneError::SharedEndpoint(i, j));
                }
                if segments_cross(s, t) {
                    return Err(SceneError::Crossing(i, j));
                }
                if t.endpoints().iter().any(|p| s.interior_contains(*p)) {
                    return Err(SceneError::Touching(i, j));
                }
                if s.endpoints().iter().any(|p| t.interior_contains(*p)) {
                    return Err(SceneError::Touching(j, i));
                }
                if !allow_collinear
                    && orient(s.a, s.b, t.a) == Orientation::Collinear
                    && orient(s.a, s.b, t.b) == Orientation::Collinear
                {
                    return Err(SceneError::Collinear(i, j));
                }
            }
        }
        Ok(Scene { obstacles, allow_collinear })
    }

    pub fn empty() -> Self {
        Scene::default()
    }

    pub fn obstacles(&self) -> &[OpenSegment] {
        &self.obstacles
    }

    pub fn len(&self) -> usize {
        self.obstacles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    pub fn allow_collinear(&self) -> bool {
        self.allow_collinear
    }

    /// Obstacle endpoints in obstacle order, `a` before `b`.
    pub fn endpoints(&self) -> impl Iterator<Item = Point> + '_ {
        self.obstacles.iter().flat_map(|o| o.endpoints())
    }

    pub fn is_endpoint(&self, p: Point) -> bool {
        self.endpoints().any(|e| e == p)
    }

    /// The obstacle whose endpoint is exactly `p`, and the opposite endpoint.
    pub fn obstacle_at_endpoint(&self, p: Point) -> Option<(usize, Point)> {
        self.obstacles.iter().enumerate().find_map(|(i, o)| {
            if o.a == p {
                Some((i, o.b))
            } else if o.b == p {
                Some((i, o.a))
            } else {
                None
            }
        })
    }

    /// Index of the obstacle whose open interior contains `p`.
    pub fn obstacle_containing(&self, p: Point) -> Option<usize> {
        self.obstacles.iter().position(|o| o.interior_contains(p))
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid scene: {0}")]
    Scene(#[from] SceneError),
    #[error("trace must contain at least one point")]
    EmptyTrace,
    #[error("trace point {0} lies on an obstacle interior")]
    TraceOnObstacle(usize),
    #[error("anchor lies on an obstacle interior")]
    AnchorOnObstacle,
    #[error("anchor is not visible from the first trace point")]
    AnchorNotVisible,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    obstacles: Vec<OpenSegment>,
    anchor: Point,
    trace: Vec<Point>,
    #[serde(default)]
    allow_collinear: bool,
}

/// A scene with the rope anchor and a trace for the free end.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneDocument {
    pub scene: Arc<Scene>,
    pub anchor: Point,
    pub trace: Vec<Point>,
}

impl SceneDocument {
    pub fn new(scene: Scene, anchor: Point, trace: Vec<Point>) -> Result<Self, DocumentError> {
        if trace.is_empty() {
            return Err(DocumentError::EmptyTrace);
        }
        if scene.obstacle_containing(anchor).is_some() {
            return Err(DocumentError::AnchorOnObstacle);
        }
        if let Some(i) = trace.iter().position(|p| scene.obstacle_containing(*p).is_some()) {
            return Err(DocumentError::TraceOnObstacle(i));
        }
        if !crate::geom::visible(anchor, trace[0], &scene) {
            return Err(DocumentError::AnchorNotVisible);
        }
        Ok(SceneDocument { scene: Arc::new(scene), anchor, trace })
    }

    /// Canonical text form; `parse_scene` of the output reproduces `self`.
    pub fn to_canonical(&self) -> String {
        let mut out = String::from("{\n  \"obstacles\": [");
        for (i, o) in self.scene.obstacles().iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            let _ = write!(out, "[{}, {}]", fmt_point(o.a), fmt_point(o.b));
        }
        if !self.scene.is_empty() {
            out.push_str("\n  ");
        }
        let _ = write!(out, "],\n  \"anchor\": {},\n  \"trace\": [", fmt_point(self.anchor));
        for (i, p) in self.trace.iter().enumerate() {
            out.push_str(if i == 0 { "\n    " } else { ",\n    " });
            out.push_str(&fmt_point(*p));
        }
        out.push_str("\n  ]");
        if self.scene.allow_collinear() {
            out.push_str(",\n  \"allow_collinear\": true");
        }
        out.push_str("\n}\n");
        out
    }
}

/// Shortest representation that parses back to the same double.
pub fn fmt_number(v: f64) -> String {
    // `Display` for f64 is shortest round-trip and never uses exponents.
    let s = format!("{v}");
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn fmt_point(p: Point) -> String {
    format!("[{}, {}]", fmt_number(p.x), fmt_number(p.y))
}

/// Parses and validates a scene document.
pub fn parse_scene(text: &str) -> Result<SceneDocument, DocumentError> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let scene = Scene::new(raw.obstacles, raw.allow_collinear)?;
    SceneDocument::new(scene, raw.anchor, raw.trace)
}

/// Scene payload used by the session protocol: obstacles plus the collinear
/// flag, without anchor or trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub obstacles: Vec<OpenSegment>,
    #[serde(default)]
    pub allow_collinear: bool,
}

impl SceneSpec {
    pub fn build(self) -> Result<Scene, SceneError> {
        Scene::new(self.obstacles, self.allow_collinear)
    }
}
