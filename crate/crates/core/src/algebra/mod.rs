//! Chain complexes, Smith normal form, (co)homology, cochains and their cup
//! products, shuffle coefficients and Vassiliev functions.

pub mod chain;
pub mod cochain;
pub mod homology;
pub mod shuffle;
pub mod snf;
pub mod vassiliev;

pub use chain::{ChainComplex, Ring, SparseMatrix};
pub use cochain::{coboundary, cup, leibniz_defect, unit_cocycle, Cochain};
pub use homology::{cohomology, homology, homology_of, homology_upto, CellComplex, HomologyGroup};
pub use shuffle::{phi_brute, phi_closed, phi_recurrence_table, shuffle_sign, ShufflePartition};
pub use snf::{smith_normal_form, SmithForm};
pub use vassiliev::{vassiliev_check, vassiliev_extend, vassiliev_tower, Extension, VassilievFunction, VassilievViolation};
