//! Network reconstruction from a noisy observed graph via low-rank
//! self-representation `X = XZ + E`.
//!
//! The crate provides two inexact-ALM solvers ([`solver`]), link rankings
//! built from the solved representation ([`reconstruct`]), the structural
//! regularity metric with node/link importances and regulation by link
//! removal ([`regularity`]), neighborhood baselines ([`baselines`]) and an
//! evaluation harness ([`eval`]).
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the evaluation harness and
//! the CLI use.

pub mod baselines;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod io;
pub mod kernels;
pub mod reconstruct;
pub mod regularity;
pub mod scalar;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{build_graph, Edge, EdgeRole, EdgeSet, Graph};
pub use scalar::{DenseMatrix, Real};
pub use solver::SolverKind;

pub type Matrix = scalar::DenseMatrix<f64>;
pub type Matrix32 = scalar::DenseMatrix<f32>;
pub type SolverConfig = solver::SolverConfig<f64>;
pub type SolverResult = solver::SolverResult<f64>;
pub type ScoreMatrix = reconstruct::ScoreMatrix<f64>;
pub type RankedLinks = reconstruct::RankedLinks<f64>;
pub type ImportanceVector = regularity::ImportanceVector<f64>;
pub type LinkImportanceMap = regularity::LinkImportanceMap<f64>;
pub type RegulationConfig = regularity::RegulationConfig<f64>;
