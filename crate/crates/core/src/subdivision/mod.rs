//! Δ-sets, the Δ-subdivision of a □-set and the □-subdivision of a Δ-set.

pub mod delta;
pub mod implicit;
pub mod sd_delta;
pub mod sd_square;

pub use delta::{delta_chain_complex, simplex_boundary, standard_simplex, DeltaSet};
pub use implicit::TrivialSubdivision;
pub use sd_delta::{enumerate_flags, estimate_sd_delta, flags_over_cell, sd_delta, Flag, SdDelta, SimplexLabel};
pub use sd_square::{estimate_sd_square, face_action, restrict_front, sd_square, BackFaceLabel, SdSquare};
