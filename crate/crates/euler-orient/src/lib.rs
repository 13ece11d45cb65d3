//! Exact counting, rigorous bounds, and log-space estimates for the number
//! of Eulerian orientations of simple even-degree graphs, together with the
//! spectral toolkit the estimates are built on (Laplacian eigenvalues, exact
//! matrix-tree determinants, condition numbers) and a numerical verification
//! harness for the inequalities that drive the estimates.
//!
//! Module map:
//! - [`graph`]: graph type, generators, predicates, edge-list text format
//! - [`spectral`]: Laplacian `Q` and `Q̂ = Q + J`, eigenvalues, exact
//!   determinants, spanning-tree counts, norms, condition numbers
//! - [`exact`]: exact `EO(G)` by two independent algorithms
//! - [`estimator`]: closed-form log-space estimators and bounds
//! - [`montecarlo`]: Monte Carlo estimates from the integral representations
//! - [`lemmas`]: verification harness over concrete graph corpora
//! - [`schema`]: versioned JSON schemas for every CLI output

pub mod cli;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod graph;
pub mod lemmas;
pub mod matrix;
pub mod montecarlo;
pub mod schema;
pub mod spectral;

pub use error::{Error, ParseError, Result};
pub use graph::{DegreeSequence, Graph};
pub use spectral::BigCount;
