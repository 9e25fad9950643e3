//! Exact and Monte Carlo counting of small subgraphs in random graphs and
//! random multigraphs.
//!
//! The crate is layered: [`graph`] holds the data model, [`series`] the exact
//! power-series engine, [`oracle`] brute-force enumeration at tiny sizes,
//! [`census`] the exact generating-function formulas, [`weights`] and
//! [`random`] the random models, [`predict`] asymptotic predictions and
//! [`experiment`] the Monte Carlo harness.

pub mod census;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod oracle;
pub mod predict;
pub mod random;
pub mod series;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{BalanceClass, Graph, GraphKind, Multigraph, SimpleGraph, Subgraph};
pub use series::{TruncatedSeries, Var};
pub use weights::WeightSpec;

pub type Rational = num_rational::BigRational;
