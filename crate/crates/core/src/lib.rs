//! Certification of density for quaternionic isogeny groups in the
//! height-two Morava stabilizer group.

pub mod arith;
pub mod certificate;
pub mod cli;
pub mod density;
pub mod error;
pub mod hopf;
pub mod linalg;
pub mod local;
pub mod quatalg;
pub mod ssgraph;
pub mod witt;

pub use error::{Error, Result};
