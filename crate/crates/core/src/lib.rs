//! Exact solvers for simple stochastic games: the generic strategy
//! improvement engine and its rules, value iteration, an enumeration
//! oracle, a play simulator, generators and a benchmark harness.
//!
//! All values are exact rationals.

pub mod engine;
pub mod error;
pub mod format;
pub mod game;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod rules;
pub mod sim;
pub mod strategy;
pub mod transform;
pub mod values;

pub use engine::{run, ImprovementRule, RunResult, RunTrace};
pub use error::{Error, Result};
pub use game::{Player, Ssg, Vertex, VertexId, VertexKind};
pub use rational::Rational;
pub use strategy::{Arc, ArcSet, Strategy, ValueVector};
pub use transform::TransformedGame;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
