//! Wei-Norman factorization of developments on reductive complex Lie groups.
//!
//! A time-dependent element `X(t)` of a reductive Lie algebra generates a
//! group trajectory `x(t)` with `dx/dt = X(t) x`, `x(0) = e`. Splitting the
//! algebra along cominuscule gradings turns this into a triangular chain of
//! vector Riccati equations whose solutions give `x(t)` as an ordered
//! product of exponentials. Everything is computed from Chevalley structure
//! constants; no matrix representation of the group is used.

pub mod chevalley;
pub mod cli;
pub mod error;
pub mod grading;
pub mod reduction;
pub mod rootsys;
pub mod scalar;
pub mod solver;
pub mod symbolic;

pub use chevalley::{LieAlgebra, LieElement};
pub use error::{Error, Result};
pub use grading::Grading;
pub use reduction::{plan_hierarchy, Hierarchy, Mode, Stage};
pub use solver::{CoefficientPath, SolveOptions, Status, Trajectory};
pub use rootsys::{DynkinType, Family, Root, RootSystem, SimpleType};
