//! Monte Carlo laboratory for exponential last-passage percolation (LPP) and
//! the totally asymmetric simple exclusion process (TASEP).
//!
//! The crate is organised bottom-up:
//!
//! * [`weights`]: reproducible i.i.d. exponential weight fields keyed by lattice site.
//! * [`lpp`]: start sets, forbidden regions and the dynamic-programming engine.
//! * [`tasep`]: initial conditions, continuous-time simulation and the LPP coupling.
//! * [`scalings`]: centering constants, scale factors and critical lattice points.
//! * [`refdist`]: Airy function, Tracy-Widom distributions and product/sandwich bounds.
//! * [`harness`]: experiment catalog, statistics, reports and configuration.

pub mod error;
pub mod harness;
pub mod lattice;
pub mod lpp;
pub mod refdist;
pub mod scalings;
pub mod tasep;
pub mod weights;

pub use error::{Error, Result};
pub use lattice::Point;
