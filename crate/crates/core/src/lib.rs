//! Boole's conditions of possible experience, computed exactly.
//!
//! The crate is organised bottom-up:
//!
//! - [`rational`] and [`event`]: exact fractions, event subsets, atom
//!   distributions, probability assignments and linear inequalities over them.
//! - [`bounds`]: the best-possible union/intersection bounds from marginals,
//!   the pairwise Bonferroni lower bound and its complement variants.
//! - [`simplex`] and [`polytope`]: an exact rational simplex and, on top of it,
//!   correlation-polytope membership with realizing distributions or Farkas
//!   certificates.
//! - [`game`]: the three-question/two-answer joint strategy game and its
//!   mixing-weight system.
//! - [`quantum`]: singlet statistics, the CH expression and angle scans.
//! - [`montecarlo`]: seeded, block-parallel sampling of singlet, local hidden
//!   variable and same-result models.

pub mod bounds;
pub mod error;
pub mod event;
pub mod game;
pub mod montecarlo;
pub mod polytope;
pub mod quantum;
pub mod rational;
pub mod simplex;

pub use error::{Error, Result};
pub use event::{
    AtomDistribution, EventScenario, EventSet, Interval, LinearInequality, ProbabilityAssignment,
};
pub use rational::Rational;
