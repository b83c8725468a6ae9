//! Exact K-stability invariants for monomial valuations at the node of the
//! nodal plane cubic `x0·x2² = x1³ + x0·x1²`.

pub mod blowup_geom;
pub mod error;
pub mod exactnum;
pub mod linalg;
pub mod local_model;
pub mod nodal_catalog;
pub mod par;
pub mod scan;
pub mod section_ring;
pub mod verify;

pub use error::{Error, Result};
