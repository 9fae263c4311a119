//! Finite truncated cubical sets without degeneracies (□-sets): rack spaces,
//! trunk nerves, James complexes, subdivisions and exact (co)homology.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod face;
pub mod james;
pub mod square;
pub mod subdivision;

pub use error::{Error, Result};
pub use face::{count_face_maps, Coord, FaceWord};
pub use square::{CellRef, SquareMap, SquareSet, ValidationReport, Violation};
