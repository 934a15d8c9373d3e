//! Exact computation of stable cohomotopy groups of closed manifolds in
//! codimensions two and three, and of the associated framed/spin/string
//! bordism groups, from user-supplied cohomological data.
//!
//! Everything is exact integer or GF(p) linear algebra: finitely generated
//! abelian groups are presented by relation matrices and canonicalized by
//! Smith normal form; cohomology operations are matrices between graded
//! pieces; the engines assemble short exact sequences, classify the group
//! extensions that arise, and report splitting verdicts.

pub mod bordism;
pub mod cochain;
pub mod codim2;
pub mod codim3;
pub mod error;
pub mod extension;
pub mod f2;
pub mod f3;
pub mod group;
pub mod input;
pub mod matrix;
pub mod report;
pub mod ring;

pub use error::Error;
