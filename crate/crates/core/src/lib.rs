//! Exact tools for hypergraph joints: covers, flats and witnesses, joint
//! configurations, entropy bounds, extremal counts and the derivative
//! ledgers behind the polynomial method.

pub mod bounds;
pub mod config;
pub mod cover;
pub mod entropy;
pub mod error;
pub mod eta;
pub mod extremal;
pub mod field;
pub mod flat;
pub mod hypergraph;
pub mod io;
pub mod linalg;
pub mod logexpr;
pub mod lp;
pub mod par;
pub mod rational;
pub mod report;
pub mod search;
pub mod suite;
pub mod vanishing;
pub mod witness;

pub use error::{Error, Result};
