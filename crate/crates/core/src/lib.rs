//! Online firefighting on trees, 1-almost trees and cactus graphs.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] and [`cactus`]: graphs, vertex sets and cycle decomposition.
//! * [`measures`]: covered sets, weights, distances, tolerances.
//! * [`game`]: the round mechanics and the reduced view seen by a player.
//! * [`online`]: the online strategies.
//! * [`opt`]: the exact offline optimum.
//! * [`instances`]: fixed constructions and random generators.
//! * [`harness`]: instance files, ratio reports, property suites and the
//!   command implementations used by the CLI.

pub mod cactus;
pub mod game;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod measures;
pub mod online;
pub mod opt;
pub mod ratio;

pub use cactus::{validate_and_decompose, CactusDecomposition, CactusError, GraphClass};
pub use game::{new_game, replay, GameError, GameState, Instance, ProtectionSchedule, Status, Trace, TraceEntry};
pub use graph::{Graph, GraphError, GraphView, VertexSet};
pub use measures::Tolerance;
