//! Taut rope simulation in the plane.
//!
//! A rope is anchored at a fixed point and its free end is dragged through a
//! field of line-segment obstacles. The rope is kept as the list of obstacle
//! endpoints it wraps around; wrap and unwrap events are detected by testing
//! each move of the free end against rays cast from obstacle endpoints away
//! from the current pivot, which costs `O(n)` per move.
//!
//! - [`geom`]: points, segments, rays and the predicates everything else uses.
//! - [`gazan`]: ray decompositions and crossing classification.
//! - [`engine`]: the wrap/unwrap state machine ([`RopeState`]).
//! - [`trace`]: trace validation and move refinement.
//! - [`oracle`]: an independent rubber-band tightener for verification.
//! - [`scene_io`]: scene documents and SVG rendering.
//! - [`session`]: a JSON message protocol for driving ropes interactively.
//! - [`cli`]: the `taut-rope` command line.

pub mod cli;
pub mod engine;
pub mod gazan;
pub mod geom;
pub mod oracle;
pub mod scene_io;
pub mod session;
pub mod trace;

pub use engine::{RopeState, Step, StepError, StepEvent};
pub use geom::{OpenSegment, Point, Ray, Vector};
pub use scene_io::{Scene, SceneDocument};
