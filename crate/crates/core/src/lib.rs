//! Parameter-free convex-concave saddle-point solving.
//!
//! The toolkit pairs regret minimizers in self-play over a repeated game.
//! The centerpiece is the conic Blackwell family (CBA, CBA+), which needs no
//! step size: it aggregates lifted payoffs and projects them exactly onto the
//! cone over the decision set. Classical baselines (RM, RM+, OMD, FTRL and
//! their optimistic variants) are included, along with alternation,
//! polynomial iterate averaging, and two benchmark problem classes: bilinear
//! matrix games on simplexes and distributionally robust logistic regression.

pub mod data_io;
pub mod error;
pub mod framework;
pub mod geometry;
pub mod minimizers;
pub mod oracles;
pub mod problems;
pub mod vecmath;

pub use error::{Error, Result};
pub use geometry::{ConeGeometry, LiftedVector, ProjectionPair};
pub use minimizers::{CbaState, DecisionSet, Minimizer, ProxState, RmState};
pub use framework::{AveragingScheme, RunMode, RunRecord, SaddleProblem};
pub use problems::{DroInstance, MatrixGame};
