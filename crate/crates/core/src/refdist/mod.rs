//! Reference laws: Airy function, Tracy-Widom distributions and the
//! product and sandwich bounds assembled from them.

pub mod airy;
mod bounds;
pub mod quadrature;
mod tw;

pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use bounds::*;
pub use tw::{f_goe, f_gue, tw_cdf, Ensemble, TracyWidom, DEFAULT_ORDER, TW_RANGE};
