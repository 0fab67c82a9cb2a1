pub mod affine;
pub mod census;
pub mod cli;
pub mod classify;
pub mod error;
pub mod field;
pub mod group;
pub mod perm;
pub mod pointset;
pub mod report;
pub mod sylow;
pub mod unionfind;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};
pub use group::{Limits, PermGroup, Primitivity};
pub use perm::{format_cycles, parse_cycles, Permutation};
pub use pointset::PointSet;
