//! Valuative cones of rational surfaces obtained by blowing up a Hirzebruch
//! surface at a configuration of infinitely near points.

pub mod audit;
pub mod classify;
pub mod cones;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod num;
pub mod oracle;

pub use config::{Configuration, PointKind};
pub use error::{Code, Error, Result};
pub use lattice::{Curve, Lattice, PicClass};
