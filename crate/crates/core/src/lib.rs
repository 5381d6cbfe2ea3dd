//! Degeneration limits of canonical measures for families of rational maps
//! on the projective line.
//!
//! A family `f_t` with coefficients meromorphic in `t` is treated as a single
//! rational map over the Puiseux series field. Its canonical measure on the
//! Berkovich line is approximated by backward orbits, pushed through the
//! reduction map of an snc model, and compared with complex-dynamical
//! samples of `f_t` at small `t`.

pub mod berkovich;
pub mod complexpoly;
pub mod complexverify;
pub mod dynamics;
pub mod error;
pub mod json;
pub mod limits;
pub mod puiseux;
pub mod sncmodel;

pub use error::{Error, Result};
